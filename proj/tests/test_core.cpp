#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bellbound/core.hpp"
#include "bellbound/error.hpp"
#include "test_util.hpp"

using namespace bellbound;
using namespace bellbound::testing;

TEST_CASE("scenario indexing, labels, abort slots") {
    const Scenario s = make_numeric_scenario(2, 3, 2, 2, true);
    CHECK(s.na_full() == 3);
    CHECK(s.nb_full() == 3);
    CHECK(s.table_size() == 3 * 3 * 2 * 3);
    CHECK(s.is_abort_a(2));
    CHECK(!s.is_abort_a(1));
    CHECK(s.output_label_a(2) == kAbortLabel);
    CHECK(s.output_index_b(kAbortLabel) == 2);
    CHECK(s.input_index_b("2") == 2);
    // Dense index covers the table exactly once.
    std::vector<bool> seen(s.table_size(), false);
    for (std::size_t a = 0; a < s.na_full(); ++a)
        for (std::size_t b = 0; b < s.nb_full(); ++b)
            for (std::size_t x = 0; x < s.nx(); ++x)
                for (std::size_t y = 0; y < s.ny(); ++y) {
                    const std::size_t i = s.index(a, b, x, y);
                    REQUIRE(i < seen.size());
                    REQUIRE(!seen[i]);
                    seen[i] = true;
                }

    CHECK(s.without_abort().abort_allowed == false);
    CHECK(s.without_abort().with_abort() == s);
    CHECK_THROWS_AS(s.output_index_a("missing"), Error);
}

TEST_CASE("scenario validation rejects bad label sets") {
    CHECK_THROWS_AS(Scenario({}, {"0"}, {"0"}, {"0"}), Error);
    CHECK_THROWS_AS(Scenario({"0", "0"}, {"0"}, {"0"}, {"0"}), Error);
    CHECK_THROWS_AS(Scenario({"0"}, {"0"}, {"BOT"}, {"0"}), Error);
    CHECK_THROWS_AS(require_same_scenario(make_numeric_scenario(2, 2, 2, 2),
                                          make_numeric_scenario(2, 2, 2, 3), "test"),
                    Error);
}

TEST_CASE("distribution validation") {
    const Scenario s = make_numeric_scenario(1, 1, 2, 2);
    DistributionFamily p(s);
    p.at(0, 0, 0, 0) = rat(1, 2);
    CHECK_THROWS_AS(p.validate(), Error);  // block sums to 1/2
    p.at(1, 1, 0, 0) = rat(1, 2);
    CHECK_NOTHROW(p.validate());
    p.at(0, 1, 0, 0) = rat(-1, 4);
    p.at(1, 0, 0, 0) = rat(1, 4);
    CHECK_THROWS_AS(p.validate(), Error);  // negative entry
}

TEST_CASE("correlated box against the correlation functional") {
    const DistributionFamily pr = pr_box();
    pr.validate();
    const BellFunctional bf = chsh(pr.scenario);
    CHECK(evaluate(bf, pr) == rat(2));

    // Constant-output strategy: value 1, the deterministic ceiling.
    DistributionFamily det(pr.scenario);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y) det.at(0, 0, x, y) = 1;
    det.validate();
    CHECK(evaluate(bf, det) == rat(1));
}

TEST_CASE("off-promise inputs get the uniform block") {
    PartialFunction f;
    f.inputs_a = {"0", "1"};
    f.inputs_b = {"0", "1"};
    f.value = {{0, -1}, {-1, 1}};
    CHECK(f.domain_size() == 2);
    const DistributionFamily p = build_pf(f);
    p.validate();
    CHECK(p.at(0, 0, 0, 0) == rat(1, 2));
    CHECK(p.at(0, 1, 0, 0) == rat(0));
    CHECK(p.at(0, 1, 1, 1) == rat(1, 2));
    CHECK(p.at(0, 0, 1, 1) == rat(0));
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            CHECK(p.at(a, b, 0, 1) == rat(1, 4));
            CHECK(p.at(a, b, 1, 0) == rat(1, 4));
        }
}

TEST_CASE("marginals of the correlated box are unbiased") {
    const DistributionFamily pr = pr_box();
    const Marginals m = marginals(pr);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t o = 0; o < 2; ++o) {
                CHECK(m.alice[o][x][y] == rat(1, 2));
                CHECK(m.bob[o][x][y] == rat(1, 2));
            }
    CHECK(is_nonsignaling(pr).nonsignaling);
}

TEST_CASE("signaling family is caught with a witness") {
    // Bob announces Alice's input: p(0, x | x, 0) = 1.
    const Scenario s = make_numeric_scenario(2, 1, 1, 2);
    DistributionFamily p(s);
    p.at(0, 0, 0, 0) = 1;
    p.at(0, 1, 1, 0) = 1;
    p.validate();
    const NonsignalingReport report = is_nonsignaling(p);
    REQUIRE(!report.nonsignaling);
    REQUIRE(report.witness.has_value());
    CHECK(!report.witness->on_alice_side);
    CHECK(report.witness->value_1 != report.witness->value_2);
}

TEST_CASE("distance between the correlated box and noise") {
    const DistributionFamily pr = pr_box();
    const DistributionFamily u = uniform_family(pr.scenario);
    CHECK(l1_distance(pr, u) == rat(1));
    CHECK(l1_distance(pr, pr) == rat(0));

    const DistributionFamily half = mix_uniform(pr, rat(1, 2));
    half.validate();
    CHECK(half.at(0, 0, 0, 0) == rat(3, 8));
    CHECK(half.at(0, 1, 0, 0) == rat(1, 8));
    CHECK(l1_distance(pr, half) == rat(1, 2));

    CHECK(mix_uniform(pr, rat(0)) == pr);
    CHECK(mix_uniform(pr, rat(1)) == u);
    CHECK_THROWS_AS(mix_uniform(pr, rat(3, 2)), Error);
    CHECK_THROWS_AS(mix_uniform(pr, rat(-1, 2)), Error);
}

TEST_CASE("distance is a metric on random families") {
    const Scenario s = make_numeric_scenario(2, 2, 3, 2);
    RatRng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        RatRng local = rng.fork(static_cast<std::uint64_t>(trial));
        const DistributionFamily p = random_family(s, local);
        const DistributionFamily q = random_family(s, local);
        const DistributionFamily r = random_family(s, local);
        CHECK(l1_distance(p, q) >= rat(0));
        CHECK(l1_distance(p, q) == l1_distance(q, p));
        CHECK(l1_distance(p, r) <= l1_distance(p, q) + l1_distance(q, r));
        CHECK((l1_distance(p, q) == rat(0)) == (p == q));
    }
}

TEST_CASE("evaluation is affine in the noise parameter") {
    const Scenario s = make_numeric_scenario(2, 2, 2, 2);
    RatRng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        RatRng local = rng.fork(static_cast<std::uint64_t>(trial));
        const DistributionFamily p = random_family(s, local);
        BellFunctional bf(s);
        for (auto& c : bf.coeffs) c = local.signed_unit();
        const Rat delta = local.unit();
        const Rat lhs = evaluate(bf, mix_uniform(p, delta));
        const Rat rhs = (Rat(1) - delta) * evaluate(bf, p) +
                        delta * evaluate(bf, uniform_family(s));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("standard evaluation skips abort weight, full keeps it") {
    const Scenario s = make_numeric_scenario(1, 1, 1, 1, true);
    DistributionFamily p(s);
    p.at(0, 0, 0, 0) = rat(1, 2);
    p.at(0, 1, 0, 0) = rat(1, 4);  // Bob aborts
    p.at(1, 1, 0, 0) = rat(1, 4);  // both abort
    p.validate();
    BellFunctional bf(s);
    for (auto& c : bf.coeffs) c = rat(1);
    CHECK(bf.has_abort_coeffs());
    CHECK(evaluate(bf, p) == rat(1, 2));
    CHECK(evaluate_full(bf, p) == rat(1));

    BellFunctional clean(s);
    clean.at(0, 0, 0, 0) = rat(1);
    CHECK(!clean.has_abort_coeffs());
}

TEST_CASE("scenario mismatch is rejected") {
    const DistributionFamily pr = pr_box();
    BellFunctional other(make_numeric_scenario(2, 2, 3, 2));
    CHECK_THROWS_AS(evaluate(other, pr), Error);
}
