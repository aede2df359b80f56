// Tests for the quantum module: strategy validation, floating-point
// evaluation with rationalization, abort relabeling, the zero-transcript
// embedding, and the distribution-level compilation of certified efficiency
// bounds into noise-resistant violations.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "bellbound/bounds.hpp"
#include "bellbound/core.hpp"
#include "bellbound/error.hpp"
#include "bellbound/local.hpp"
#include "bellbound/quantum.hpp"
#include "bellbound/rat.hpp"
#include "bellbound/scenario.hpp"
#include "test_util.hpp"

using namespace bellbound;
using namespace bellbound::testing;

namespace {

Eigen::MatrixXcd one_by_one(double value) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = value;
    return m;
}

// Projectors (I +- (cos(theta) Z + sin(theta) X)) / 2 onto the eigenspaces
// of the rotated qubit observable at the given angle.
std::vector<Eigen::MatrixXcd> angle_projectors(double theta) {
    Eigen::MatrixXcd plus(2, 2), minus(2, 2);
    const double c = std::cos(theta), s = std::sin(theta);
    plus << (1.0 + c) / 2.0, s / 2.0, s / 2.0, (1.0 - c) / 2.0;
    minus << (1.0 - c) / 2.0, -s / 2.0, -s / 2.0, (1.0 + c) / 2.0;
    return {plus, minus};
}

// The two-qubit strategy meeting the correlation functional's quantum
// maximum: maximally entangled state, one party measuring at angles 0 and
// pi/2, the other at pi/4 and -pi/4.
QuantumStrategy tsirelson_strategy() {
    QuantumStrategy s;
    s.scenario = make_numeric_scenario(2, 2, 2, 2);
    s.dim_a = 2;
    s.dim_b = 2;
    s.state = Eigen::VectorXcd::Zero(4);
    const double pi = std::acos(-1.0);
    s.state[0] = s.state[3] = 1.0 / std::sqrt(2.0);
    s.measurements_a = {angle_projectors(0.0), angle_projectors(pi / 2.0)};
    s.measurements_b = {angle_projectors(pi / 4.0), angle_projectors(-pi / 4.0)};
    return s;
}

// One input and one declared output per side plus the abort slot, local
// dimension 1; the weights put mass split on the ordinary output and
// 1 - split on aborting, independently on both sides.
QuantumStrategy splitting_strategy(double split_a, double split_b) {
    QuantumStrategy s;
    s.scenario = make_numeric_scenario(1, 1, 1, 1, true);
    s.dim_a = 1;
    s.dim_b = 1;
    s.state = Eigen::VectorXcd::Ones(1);
    s.measurements_a = {{one_by_one(split_a), one_by_one(1.0 - split_a)}};
    s.measurements_b = {{one_by_one(split_b), one_by_one(1.0 - split_b)}};
    return s;
}

}  // namespace

TEST_CASE("strategy validation names the offending piece") {
    const QuantumStrategy good = tsirelson_strategy();
    good.validate();

    SUBCASE("state shape and norm") {
        QuantumStrategy s = good;
        s.state = Eigen::VectorXcd::Zero(3);
        CHECK(thrown_code([&] { s.validate(); }) == ErrorCode::InvalidArgument);
        s = good;
        s.state[0] = 1.0;  // norm sqrt(3/2)
        CHECK(thrown_code([&] { s.validate(); }) == ErrorCode::InvalidArgument);
        s = good;
        s.dim_a = 0;
        CHECK(thrown_code([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    }

    SUBCASE("family and operator shapes") {
        QuantumStrategy s = good;
        s.measurements_a.pop_back();
        CHECK(thrown_code([&] { s.validate(); }) == ErrorCode::InvalidArgument);
        s = good;
        s.measurements_b[1].pop_back();
        CHECK(thrown_code([&] { s.validate(); }) == ErrorCode::InvalidArgument);
        s = good;
        s.measurements_a[0][0] = Eigen::MatrixXcd::Identity(3, 3);
        CHECK(thrown_code([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    }

    SUBCASE("self-adjointness, positivity, completeness") {
        QuantumStrategy s = good;
        s.measurements_a[0][0](0, 1) = std::complex<double>(0.0, 0.5);
        try {
            s.validate();
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidArgument);
            CHECK(std::string(e.what()).find("input 0, output 0") != std::string::npos);
            CHECK(std::string(e.what()).find("self-adjoint") != std::string::npos);
        }

        s = good;
        Eigen::MatrixXcd big(2, 2), small(2, 2);
        big << 1.5, 0.0, 0.0, -0.5;
        small << -0.5, 0.0, 0.0, 1.5;
        s.measurements_b[0] = {big, small};
        try {
            s.validate();
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidArgument);
            CHECK(std::string(e.what()).find("bob operator (input 0, output 0") !=
                  std::string::npos);
            CHECK(std::string(e.what()).find("negative eigenvalue") != std::string::npos);
        }

        s = good;
        s.measurements_a[1] = {Eigen::MatrixXcd::Identity(2, 2),
                               Eigen::MatrixXcd::Identity(2, 2)};
        try {
            s.validate();
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidArgument);
            CHECK(std::string(e.what()).find("alice family 1") != std::string::npos);
            CHECK(std::string(e.what()).find("identity") != std::string::npos);
        }
    }
}

TEST_CASE("product state with deterministic projectors evaluates to a local point") {
    QuantumStrategy s;
    s.scenario = make_numeric_scenario(2, 1, 2, 2);
    s.dim_a = 1;
    s.dim_b = 1;
    s.state = Eigen::VectorXcd::Ones(1);
    // Output equals the input on one side, constant 0 on the other.
    s.measurements_a = {{one_by_one(1.0), one_by_one(0.0)},
                        {one_by_one(0.0), one_by_one(1.0)}};
    s.measurements_b = {{one_by_one(1.0), one_by_one(0.0)}};

    double residual = 1.0;
    const DistributionFamily q = eval_strategy(s, &residual);
    CHECK(residual == 0.0);  // the table is exactly 0/1 valued
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t x = 0; x < 2; ++x)
                CHECK(q.at(a, b, x, 0) == ((a == x && b == 0) ? Rat(1) : Rat(0)));
    CHECK(is_nonsignaling(q).nonsignaling);
    CHECK(is_local(q, false).local);
}

TEST_CASE("optimal qubit strategy reaches root two on the correlation functional") {
    double residual = 1.0;
    const DistributionFamily q = eval_strategy(tsirelson_strategy(), &residual);
    CHECK(residual <= 1e-9);
    CHECK(residual > 0.0);  // the table is irrational, so rounding is real

    // Every outcome pair has probability (2 +- sqrt(2))/8 up to the sign
    // pattern of the correlation.
    const double bright = (2.0 + std::sqrt(2.0)) / 8.0;
    CHECK(std::abs(q.at(0, 0, 0, 0).get_d() - bright) <= 1e-9);
    CHECK(std::abs(q.at(1, 1, 1, 0).get_d() - bright) <= 1e-9);
    CHECK(std::abs(q.at(0, 1, 1, 1).get_d() - bright) <= 1e-9);

    const Rat value = evaluate(chsh(), q);
    CHECK(std::abs(value.get_d() - std::sqrt(2.0)) <= 1e-9);
    // Strictly beyond the deterministic maximum 1: the minimal end-to-end
    // violation, exact on the rationalized table.
    CHECK(value > 1);
}

TEST_CASE("abort outcomes carry the prescribed mass and relabel cleanly") {
    double residual = 1.0;
    const DistributionFamily q = eval_strategy(splitting_strategy(0.5, 0.5), &residual);
    CHECK(residual == 0.0);
    const std::size_t bot_a = q.scenario.abort_a(), bot_b = q.scenario.abort_b();
    CHECK(q.at(0, 0, 0, 0) == rat(1, 4));
    CHECK(q.at(0, bot_b, 0, 0) == rat(1, 4));
    CHECK(q.at(bot_a, 0, 0, 0) == rat(1, 4));
    CHECK(q.at(bot_a, bot_b, 0, 0) == rat(1, 4));

    SUBCASE("relabeled family keeps the table and drops the abort slot") {
        const DistributionFamily r = relabel_abort(q);
        CHECK(!r.scenario.abort_allowed);
        CHECK(r.scenario.outputs_a == std::vector<std::string>{"0", "A"});
        CHECK(r.scenario.outputs_b == std::vector<std::string>{"0", "A"});
        CHECK(r.table == q.table);
        CHECK(is_nonsignaling(r).nonsignaling);

        // A functional with zero weight on aborts scores both tables the
        // same way once its own labels move along.
        BellFunctional b(q.scenario);
        b.at(0, 0, 0, 0) = 1;
        const BellFunctional rb = relabel_abort(b);
        CHECK(!rb.scenario.abort_allowed);
        CHECK(evaluate(rb, r) == evaluate(b, q));
        CHECK(evaluate(b, q) == rat(1, 4));
    }

    SUBCASE("never-abort and always-abort extremes") {
        const DistributionFamily never = relabel_abort(eval_strategy(splitting_strategy(1.0, 1.0)));
        CHECK(never.at(0, 0, 0, 0) == 1);
        const DistributionFamily always =
            relabel_abort(eval_strategy(splitting_strategy(0.0, 0.0)));
        CHECK(always.at(1, 1, 0, 0) == 1);  // the point mass sits on ("A","A")
        CHECK(always.at(0, 0, 0, 0) == 0);
    }

    SUBCASE("error paths") {
        CHECK(thrown_code([] { relabel_abort(pr_box()); }) == ErrorCode::InvalidArgument);

        DistributionFamily taken(Scenario({"0"}, {"0"}, {"A"}, {"0"}, true));
        taken.at(0, 0, 0, 0) = 1;
        CHECK(thrown_code([&] { relabel_abort(taken); }) == ErrorCode::LabelInUse);

        BellFunctional no_abort(pr_box().scenario);
        CHECK(thrown_code([&] { relabel_abort(no_abort); }) == ErrorCode::InvalidArgument);
        BellFunctional weighted(make_numeric_scenario(1, 1, 1, 1, true));
        weighted.at(1, 0, 0, 0) = 1;
        CHECK(thrown_code([&] { relabel_abort(weighted); }) == ErrorCode::AbortCoefficients);
    }
}

TEST_CASE("rationalize picks convergents under the denominator cap") {
    CHECK(rationalize(0.0) == 0);
    CHECK(rationalize(2.0) == 2);
    CHECK(rationalize(0.5) == rat(1, 2));
    CHECK(rationalize(-0.25) == rat(-1, 4));
    CHECK(rationalize(1.0 / 3.0) == rat(1, 3));
    CHECK(rationalize(1000000.0) == 1000000);

    const double root_half = std::sqrt(0.5);
    const Rat close = rationalize(root_half);
    CHECK(std::abs(close.get_d() - root_half) <= 1e-12);
    CHECK(close.get_den() <= 1000000);

    const Rat coarse = rationalize(root_half, 10);
    CHECK(coarse.get_den() <= 10);
    CHECK(std::abs(coarse.get_d() - root_half) <= 0.01);

    // A rejected huge partial quotient still leaves an approximation within
    // 1/max_den of the input.
    CHECK(rationalize(3.0000001, 1000) == 3);

    RatRng rng(7801);
    for (int trial = 0; trial < 200; ++trial) {
        const double v = static_cast<double>(rng.uniform_int(0, 1'000'000'000)) / 1e9;
        CHECK(std::abs(rationalize(v).get_d() - v) <= 1e-6);
    }

    CHECK(thrown_code([] { rationalize(std::nan("")); }) == ErrorCode::InvalidArgument);
    CHECK(thrown_code([] { rationalize(INFINITY); }) == ErrorCode::InvalidArgument);
    CHECK(thrown_code([] { rationalize(2e9); }) == ErrorCode::InvalidArgument);
    CHECK(thrown_code([] { rationalize(0.5, 0); }) == ErrorCode::InvalidArgument);
    CHECK(thrown_code([] { rationalize(0.5, 2'000'000'000L); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("zero transcript embedding scales the base family and fills uniformly") {
    const DistributionFamily p = pr_box();
    const DistributionFamily e = embed_zero_transcript(p, 2, 2);
    CHECK(e.scenario.outputs_a ==
          std::vector<std::string>{"0:0", "0:1", "1:0", "1:1"});
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t x = 0; x < 2; ++x)
                for (std::size_t y = 0; y < 2; ++y) {
                    CHECK(e.at(2 * a, 2 * b, x, y) == p.at(a, b, x, y) / 4);
                    CHECK(e.at(2 * a, 2 * b + 1, x, y) == rat(1, 16));
                    CHECK(e.at(2 * a + 1, 2 * b, x, y) == rat(1, 16));
                    CHECK(e.at(2 * a + 1, 2 * b + 1, x, y) == rat(1, 16));
                }
    CHECK(is_nonsignaling(e).nonsignaling);

    // Single transcripts change labels only.
    const DistributionFamily trivial = embed_zero_transcript(p, 1, 1);
    CHECK(trivial.scenario.outputs_a == std::vector<std::string>{"0:0", "1:0"});
    CHECK(trivial.table == p.table);

    DistributionFamily with_abort(make_numeric_scenario(1, 1, 1, 1, true));
    with_abort.at(0, 0, 0, 0) = 1;
    CHECK(thrown_code([&] { embed_zero_transcript(with_abort, 2, 2); }) ==
          ErrorCode::InvalidArgument);
    CHECK(thrown_code([&] { embed_zero_transcript(pr_box(), 0, 2); }) ==
          ErrorCode::InvalidArgument);
    CHECK(thrown_code([&] { embed_zero_transcript(pr_box(), 2, 5000); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("compile_violation checks the embedding and scales the certified value") {
    const DistributionFamily p = pr_box();

    SUBCASE("single transcripts compile degenerately") {
        const CompiledViolation cv =
            compile_violation(p, chsh(), Rat(2), 1, 1, embed_zero_transcript(p, 1, 1));
        CHECK(cv.claimed == 2);
        CHECK(cv.beta == 2);
        CHECK(evaluate(cv.b, cv.q_bar) == 2);
    }

    SUBCASE("efficiency certificate compiles at transcript size two") {
        const BoundResult r = eff(p);
        REQUIRE(r.value == 2);
        const DistributionFamily q_bar = embed_zero_transcript(p, 2, 2);
        const CompiledViolation cv =
            compile_violation(p, r.certificate, r.beta, 2, 2, q_bar);
        CHECK(cv.claimed == rat(1, 2));
        CHECK(cv.m_a == 2);
        CHECK(cv.m_b == 2);
        CHECK(evaluate(cv.b, cv.q_bar) == evaluate(r.certificate, p) / 4);
        // Lifting keeps the one-sided deterministic bound: strategies on the
        // lifted outputs project onto base strategies under the functional.
        CHECK(max_bell_over_ldet(cv.b, true, false).value == 1);
    }

    SUBCASE("robust certificate survives uniform noise on the compiled family") {
        const Rat eps = rat(1, 8);
        const BoundResult r = eff_eps(p, eps);
        REQUIRE(r.beta == rat(7, 4));
        const DistributionFamily q_bar = embed_zero_transcript(p, 2, 2);
        const CompiledViolation cv =
            compile_violation(p, r.certificate, r.beta, 2, 2, q_bar, eps, Rat(0));
        CHECK(cv.claimed == rat(7, 16));
        CHECK(cv.eps == eps);
        CHECK(cv.eps_prime == 0);
        for (int step = 0; step <= 4; ++step) {
            const Rat delta = eps * rat(step, 4);
            const DistributionFamily noisy = mix_uniform(cv.q_bar, delta);
            // Uniform noise on the lifted family projects to uniform noise
            // on the base family under the lifted functional.
            CHECK(evaluate(cv.b, noisy) ==
                  evaluate(r.certificate, mix_uniform(p, delta)) / 4);
            CHECK(evaluate(cv.b, noisy) >= cv.claimed);
        }
    }

    SUBCASE("error paths") {
        const BoundResult r = eff(p);
        DistributionFamily skewed = embed_zero_transcript(p, 2, 2);
        skewed.at(0, 0, 0, 0) -= rat(1, 64);
        skewed.at(0, 1, 0, 0) += rat(1, 64);
        skewed.validate();
        CHECK(thrown_code([&] {
                  compile_violation(p, r.certificate, r.beta, 2, 2, skewed);
              }) == ErrorCode::EmbeddingMismatch);

        CHECK(thrown_code([&] {
                  compile_violation(p, r.certificate, r.beta, 3, 2,
                                    embed_zero_transcript(p, 3, 2));
              }) == ErrorCode::InvalidArgument);
        CHECK(thrown_code([&] {
                  compile_violation(p, r.certificate, r.beta, 2, 2,
                                    embed_zero_transcript(p, 2, 2), Rat(0), rat(1, 8));
              }) == ErrorCode::InvalidArgument);
        CHECK(thrown_code([&] {
                  compile_violation(p, chsh(), Rat(3), 1, 1, embed_zero_transcript(p, 1, 1));
              }) == ErrorCode::GuaranteeViolated);
        CHECK(thrown_code([&] {
                  compile_violation(p, r.certificate, r.beta, 1, 1,
                                    embed_zero_transcript(p, 2, 2));
              }) == ErrorCode::ScenarioMismatch);

        // A functional carrying an abort slot is rejected before any
        // lifting happens, even when the family matches its scenario.
        DistributionFamily abort_p(make_numeric_scenario(2, 2, 2, 2, true));
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t b = 0; b < 2; ++b)
                for (std::size_t x = 0; x < 2; ++x)
                    for (std::size_t y = 0; y < 2; ++y)
                        abort_p.at(a, b, x, y) = p.at(a, b, x, y);
        const BellFunctional abort_b(abort_p.scenario);
        CHECK(thrown_code([&] {
                  compile_violation(abort_p, abort_b, Rat(0), 1, 1,
                                    embed_zero_transcript(p, 1, 1));
              }) == ErrorCode::InvalidArgument);
    }
}
