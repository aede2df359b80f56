#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bellbound/error.hpp"
#include "bellbound/lp.hpp"
#include "lp_oracle.hpp"

using namespace bellbound;

TEST_CASE("single upper bound, maximize") {
    LinearProgram lp(Sense::Maximize);
    const std::size_t x = lp.add_variable("x", true, rat(1));
    const std::size_t cap = lp.add_row("cap", Rel::Le, rat(3));
    lp.set_coeff(cap, x, rat(1));
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == rat(3));
    CHECK(sol.primal_value(lp, "x") == rat(3));
    // Max sense, <= row: dual weight is nonnegative and prices the bound.
    CHECK(sol.dual_value(lp, "cap") == rat(1));
}

TEST_CASE("equality row, minimize, dual recovers the price") {
    LinearProgram lp(Sense::Minimize);
    const std::size_t x = lp.add_variable("x", true, rat(1));
    const std::size_t y = lp.add_variable("y", true, rat(1));
    const std::size_t bal = lp.add_row("bal", Rel::Eq, rat(3));
    lp.set_coeff(bal, x, rat(1));
    lp.set_coeff(bal, y, rat(2));
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == rat(3, 2));
    CHECK(sol.primal_value(lp, "x") == rat(0));
    CHECK(sol.primal_value(lp, "y") == rat(3, 2));
    CHECK(sol.dual_value(lp, "bal") == rat(1, 2));
}

TEST_CASE("greater-equal row, minimize, nonnegative dual") {
    LinearProgram lp(Sense::Minimize);
    const std::size_t x = lp.add_variable("x", true, rat(1));
    const std::size_t hi = lp.add_row("hi", Rel::Le, rat(5));
    const std::size_t lo = lp.add_row("lo", Rel::Ge, rat(2));
    lp.set_coeff(hi, x, rat(1));
    lp.set_coeff(lo, x, rat(1));
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == rat(2));
    CHECK(sol.dual_value(lp, "lo") == rat(1));
    CHECK(sol.dual_value(lp, "hi") == rat(0));
}

TEST_CASE("free variable against a lower bound, maximize") {
    LinearProgram lp(Sense::Maximize);
    const std::size_t x = lp.add_variable("x", false, rat(-1));
    const std::size_t floor = lp.add_row("floor", Rel::Ge, rat(-2));
    lp.set_coeff(floor, x, rat(1));
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == rat(2));
    CHECK(sol.primal_value(lp, "x") == rat(-2));
    // Max sense, >= row: dual weight is nonpositive; strong duality gives -1.
    CHECK(sol.dual_value(lp, "floor") == rat(-1));
}

TEST_CASE("negative right-hand side survives standardization") {
    LinearProgram lp(Sense::Minimize);
    const std::size_t x = lp.add_variable("x", false, rat(1));
    const std::size_t pin = lp.add_row("pin", Rel::Eq, rat(-3));
    lp.set_coeff(pin, x, rat(1));
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == rat(-3));
    CHECK(sol.primal_value(lp, "x") == rat(-3));
    CHECK(sol.dual_value(lp, "pin") == rat(1));
}

TEST_CASE("no rows: minimize rests at zero, maximize runs away") {
    LinearProgram lo(Sense::Minimize);
    lo.add_variable("x", true, rat(1));
    CHECK(solve(lo).status == LpStatus::Optimal);
    CHECK(solve(lo).objective == rat(0));

    LinearProgram hi(Sense::Maximize);
    hi.add_variable("x", true, rat(1));
    CHECK(solve(hi).status == LpStatus::Unbounded);
}

TEST_CASE("contradictory bounds yield a checked Farkas certificate") {
    LinearProgram lp(Sense::Minimize);
    const std::size_t x = lp.add_variable("x", false, rat(0));
    const std::size_t below = lp.add_row("below", Rel::Le, rat(0));
    const std::size_t above = lp.add_row("above", Rel::Ge, rat(1));
    lp.set_coeff(below, x, rat(1));
    lp.set_coeff(above, x, rat(1));
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Infeasible);
    REQUIRE(sol.farkas.size() == 2);
    // Recheck the certificate by hand: signs, combined column, combined rhs.
    CHECK(sol.farkas[below] <= rat(0));
    CHECK(sol.farkas[above] >= rat(0));
    CHECK(sol.farkas[below] + sol.farkas[above] == rat(0));
    CHECK(sol.farkas[below] * rat(0) + sol.farkas[above] * rat(1) > rat(0));
}

TEST_CASE("degenerate cycling example terminates at -1/20") {
    // Beale's classic degenerate program, the standard trap for naive
    // pivoting rules. Bland's rule must walk out of it.
    LinearProgram lp(Sense::Minimize);
    const std::size_t x1 = lp.add_variable("x1", true, rat(-3, 4));
    const std::size_t x2 = lp.add_variable("x2", true, rat(150));
    const std::size_t x3 = lp.add_variable("x3", true, rat(-1, 50));
    const std::size_t x4 = lp.add_variable("x4", true, rat(6));
    const std::size_t r1 = lp.add_row("r1", Rel::Le, rat(0));
    lp.set_coeff(r1, x1, rat(1, 4));
    lp.set_coeff(r1, x2, rat(-60));
    lp.set_coeff(r1, x3, rat(-1, 25));
    lp.set_coeff(r1, x4, rat(9));
    const std::size_t r2 = lp.add_row("r2", Rel::Le, rat(0));
    lp.set_coeff(r2, x1, rat(1, 2));
    lp.set_coeff(r2, x2, rat(-90));
    lp.set_coeff(r2, x3, rat(-1, 50));
    lp.set_coeff(r2, x4, rat(3));
    const std::size_t r3 = lp.add_row("r3", Rel::Le, rat(1));
    lp.set_coeff(r3, x3, rat(1));
    const LpSolution sol = solve(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.objective == rat(-1, 20));
    CHECK(sol.primal_value(lp, "x3") == rat(1));

    SolveOptions tight;
    tight.max_pivots = 1;
    CHECK(solve(lp, tight).status == LpStatus::Limit);
}

TEST_CASE("duplicate coefficient is rejected at solve time") {
    LinearProgram lp(Sense::Minimize);
    const std::size_t x = lp.add_variable("x", true, rat(1));
    const std::size_t row = lp.add_row("row", Rel::Eq, rat(1));
    lp.set_coeff(row, x, rat(1));
    lp.set_coeff(row, x, rat(2));
    CHECK_THROWS_AS(solve(lp), Error);
}

TEST_CASE("model dump names rows and flags free variables") {
    LinearProgram lp(Sense::Maximize);
    const std::size_t x = lp.add_variable("x", false, rat(1));
    const std::size_t cap = lp.add_row("cap", Rel::Le, rat(3));
    lp.set_coeff(cap, x, rat(1));
    const std::string text = dump_lp(lp);
    CHECK(text.find("cap") != std::string::npos);
    CHECK(text.find("x") != std::string::npos);
}

TEST_CASE("randomized boxed programs agree with vertex enumeration") {
    RatRng rng(20240917);
    int optimal_seen = 0;
    int infeasible_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
        RatRng local = rng.fork(static_cast<std::uint64_t>(trial));
        const LinearProgram lp = testing::make_random_boxed_lp(local);
        const LpSolution sol = solve(lp);
        const testing::OracleOutcome oracle = testing::vertex_enumeration_optimum(lp);
        // Boxed variables rule out unbounded rays; the pivot cap is generous.
        REQUIRE(sol.status != LpStatus::Unbounded);
        REQUIRE(sol.status != LpStatus::Limit);
        if (sol.status == LpStatus::Optimal) {
            ++optimal_seen;
            REQUIRE(oracle.feasible);
            REQUIRE(sol.objective == oracle.value);
        } else {
            ++infeasible_seen;
            REQUIRE(!oracle.feasible);
        }
    }
    // The generator should exercise both outcomes; if not, it needs retuning.
    CHECK(optimal_seen > 20);
    CHECK(infeasible_seen > 5);
}
