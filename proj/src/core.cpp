#include "bellbound/core.hpp"

#include <cstdlib>

namespace bellbound {

void DistributionFamily::validate() const {
    scenario.validate();
    BELLBOUND_CHECK(table.size() == scenario.table_size(), ErrorCode::InvalidDistribution,
                    "table size does not match scenario");
    for (std::size_t x = 0; x < scenario.nx(); ++x) {
        for (std::size_t y = 0; y < scenario.ny(); ++y) {
            Rat sum(0);
            for (std::size_t a = 0; a < scenario.na_full(); ++a) {
                for (std::size_t b = 0; b < scenario.nb_full(); ++b) {
                    const Rat& v = at(a, b, x, y);
                    if (v < 0)
                        throw Error(ErrorCode::InvalidDistribution,
                                    "negative entry at (" + scenario.output_label_a(a) + "," +
                                        scenario.output_label_b(b) + "|" + scenario.inputs_a[x] +
                                        "," + scenario.inputs_b[y] + ")");
                    sum += v;
                }
            }
            if (sum != 1)
                throw Error(ErrorCode::InvalidDistribution,
                            "block (" + scenario.inputs_a[x] + "," + scenario.inputs_b[y] +
                                ") sums to " + rat_to_string(sum) + ", want 1");
        }
    }
}

bool BellFunctional::has_abort_coeffs() const {
    if (!scenario.abort_allowed) return false;
    for (std::size_t x = 0; x < scenario.nx(); ++x)
        for (std::size_t y = 0; y < scenario.ny(); ++y) {
            for (std::size_t b = 0; b < scenario.nb_full(); ++b)
                if (at(scenario.abort_a(), b, x, y) != 0) return true;
            for (std::size_t a = 0; a < scenario.na_full(); ++a)
                if (at(a, scenario.abort_b(), x, y) != 0) return true;
        }
    return false;
}

namespace {

Rat evaluate_impl(const BellFunctional& b, const DistributionFamily& p, bool include_abort) {
    require_same_scenario(b.scenario, p.scenario, "evaluate: functional vs distribution");
    const Scenario& sc = b.scenario;
    const std::size_t a_hi = include_abort ? sc.na_full() : sc.na();
    const std::size_t b_hi = include_abort ? sc.nb_full() : sc.nb();
    Rat total(0);
    for (std::size_t a = 0; a < a_hi; ++a)
        for (std::size_t bo = 0; bo < b_hi; ++bo)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y) {
                    const Rat& coeff = b.at(a, bo, x, y);
                    if (coeff == 0) continue;
                    total += coeff * p.at(a, bo, x, y);
                }
    return total;
}

}  // namespace

Rat evaluate(const BellFunctional& b, const DistributionFamily& p) {
    return evaluate_impl(b, p, /*include_abort=*/false);
}

Rat evaluate_full(const BellFunctional& b, const DistributionFamily& p) {
    return evaluate_impl(b, p, /*include_abort=*/true);
}

Marginals marginals(const DistributionFamily& p) {
    const Scenario& sc = p.scenario;
    Marginals m;
    m.alice.assign(sc.na_full(),
                   std::vector<std::vector<Rat>>(sc.nx(), std::vector<Rat>(sc.ny(), Rat(0))));
    m.bob.assign(sc.nb_full(),
                 std::vector<std::vector<Rat>>(sc.nx(), std::vector<Rat>(sc.ny(), Rat(0))));
    for (std::size_t a = 0; a < sc.na_full(); ++a)
        for (std::size_t b = 0; b < sc.nb_full(); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y) {
                    const Rat& v = p.at(a, b, x, y);
                    if (v == 0) continue;
                    m.alice[a][x][y] += v;
                    m.bob[b][x][y] += v;
                }
    return m;
}

NonsignalingReport is_nonsignaling(const DistributionFamily& p) {
    const Scenario& sc = p.scenario;
    const Marginals m = marginals(p);
    NonsignalingReport report;
    // Alice's marginal must not depend on y; compare every y against y=0.
    for (std::size_t a = 0; a < sc.na_full(); ++a)
        for (std::size_t x = 0; x < sc.nx(); ++x)
            for (std::size_t y = 1; y < sc.ny(); ++y)
                if (m.alice[a][x][y] != m.alice[a][x][0]) {
                    report.nonsignaling = false;
                    report.witness = SignalingWitness{true, a, x, 0, y,
                                                      m.alice[a][x][0], m.alice[a][x][y]};
                    return report;
                }
    for (std::size_t b = 0; b < sc.nb_full(); ++b)
        for (std::size_t y = 0; y < sc.ny(); ++y)
            for (std::size_t x = 1; x < sc.nx(); ++x)
                if (m.bob[b][x][y] != m.bob[b][0][y]) {
                    report.nonsignaling = false;
                    report.witness = SignalingWitness{false, b, y, 0, x,
                                                      m.bob[b][0][y], m.bob[b][x][y]};
                    return report;
                }
    return report;
}

Rat l1_distance(const DistributionFamily& p, const DistributionFamily& q) {
    require_same_scenario(p.scenario, q.scenario, "l1_distance");
    const Scenario& sc = p.scenario;
    Rat worst(0);
    for (std::size_t x = 0; x < sc.nx(); ++x)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            Rat block(0);
            for (std::size_t a = 0; a < sc.na_full(); ++a)
                for (std::size_t b = 0; b < sc.nb_full(); ++b) {
                    Rat diff = p.at(a, b, x, y) - q.at(a, b, x, y);
                    block += abs(diff);
                }
            if (block > worst) worst = block;
        }
    return worst;
}

std::size_t PartialFunction::domain_size() const {
    std::size_t count = 0;
    for (const auto& row : value)
        for (int v : row)
            if (v >= 0) ++count;
    return count;
}

DistributionFamily build_pf(const PartialFunction& f) {
    if (f.domain_size() == 0)
        throw Error(ErrorCode::InvalidArgument, "build_pf: empty function domain");
    Scenario sc(f.inputs_a, f.inputs_b, {"0", "1"}, {"0", "1"}, /*abort=*/false);
    DistributionFamily p(sc);
    const Rat half = rat(1, 2);
    const Rat quarter = rat(1, 4);
    for (std::size_t x = 0; x < sc.nx(); ++x)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            if (f.defined(x, y)) {
                const int target = f.value[x][y];
                for (std::size_t a = 0; a < 2; ++a)
                    for (std::size_t b = 0; b < 2; ++b)
                        if (static_cast<int>(a ^ b) == target) p.at(a, b, x, y) = half;
            } else {
                // Off-promise inputs: uniform fill keeps the family total and
                // nonsignaling without preferring either function value.
                for (std::size_t a = 0; a < 2; ++a)
                    for (std::size_t b = 0; b < 2; ++b) p.at(a, b, x, y) = quarter;
            }
        }
    return p;
}

DistributionFamily uniform_family(const Scenario& scenario) {
    BELLBOUND_CHECK(!scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "uniform_family expects a no-abort scenario");
    DistributionFamily u(scenario);
    const Rat cell = Rat(1) / Rat(static_cast<long>(scenario.na() * scenario.nb()));
    for (auto& v : u.table) v = cell;
    return u;
}

DistributionFamily mix_uniform(const DistributionFamily& p, const Rat& delta) {
    if (delta < 0 || delta > 1)
        throw Error(ErrorCode::InvalidArgument, "mix_uniform: delta outside [0,1]");
    BELLBOUND_CHECK(!p.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "mix_uniform expects a no-abort family");
    DistributionFamily out(p.scenario);
    const Rat cell = Rat(1) / Rat(static_cast<long>(p.scenario.na() * p.scenario.nb()));
    const Rat keep = Rat(1) - delta;
    for (std::size_t i = 0; i < p.table.size(); ++i)
        out.table[i] = keep * p.table[i] + delta * cell;
    return out;
}

}  // namespace bellbound
