#pragma once

// Solver-independent reference for the eps-robust efficiency measure at desk
// scale. Instead of the scale change of variables used by the library, the
// perturbation is written as one convex combination of polytope vertices per
// input pair, giving a plain minimum-weight program. The optimum is then
// certified by hand: the dual functional is checked against every
// abort-extended strategy and every vertex of the full perturbation polytope
// in exact arithmetic, so agreement with the library value does not rest on
// any single simplex implementation.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellbound/core.hpp"
#include "bellbound/lp.hpp"
#include "bellbound/rat.hpp"

namespace bellbound::testing {

namespace oracle_detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("oracle certification failed: " + what);
}

// One sparse perturbation generator: (cell index, signed mass) pairs.
using Generator = std::vector<std::pair<std::size_t, Rat>>;

}  // namespace oracle_detail

// Smallest total weight of an abort-extended strategy mixture reproducing
// p + Delta on the non-abort cells, minimized over the per-input Delta
// polytope (zero block sums, per-block absolute mass <= eps). Equals the
// eps-robust efficiency measure. Only meant for small scenarios: the
// certification pass enumerates every strategy and every polytope vertex and
// refuses inputs where that product exceeds the cap.
inline Rat certified_robust_efficiency(const DistributionFamily& p, const Rat& eps,
                                       std::size_t vertex_cap = 1000000) {
    using oracle_detail::Generator;
    using oracle_detail::require;

    p.validate();
    require(!p.scenario.abort_allowed, "abort-free input expected");
    require(eps >= 0, "eps must be nonnegative");
    const Scenario& sc = p.scenario;
    const std::size_t na = sc.na(), nb = sc.nb(), nx = sc.nx(), ny = sc.ny();
    const std::size_t k = na * nb;
    const std::size_t gens = eps == 0 ? 1 : k * (k - 1) + 1;
    const std::size_t blocks = nx * ny;

    // Strategies with a private abort value per side: maps x -> {0..na} and
    // y -> {0..nb}, where the extra value stands for abort.
    std::size_t count_a = 1, count_b = 1;
    for (std::size_t x = 0; x < nx; ++x) count_a *= na + 1;
    for (std::size_t y = 0; y < ny; ++y) count_b *= nb + 1;
    require(count_a * count_b <= vertex_cap, "strategy count exceeds the oracle cap");
    std::size_t vertex_count = 1;
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        require(vertex_count <= vertex_cap / gens, "vertex count exceeds the oracle cap");
        vertex_count *= gens;
    }

    // Generator j of a block: j = 0 is the zero point, j >= 1 moves eps/2
    // from one outcome cell to another (ordered pairs of distinct cells).
    // Cell c within a block means outcome pair (c / nb, c % nb).
    const auto block_generator = [&](std::size_t blk, std::size_t j) {
        Generator g;
        if (j == 0) return g;
        const std::size_t x = blk / ny, y = blk % ny;
        const std::size_t pair = j - 1;
        const std::size_t c1 = pair / (k - 1);
        const std::size_t off = pair % (k - 1);
        const std::size_t c2 = off < c1 ? off : off + 1;
        g.emplace_back(sc.index(c1 / nb, c1 % nb, x, y), eps / 2);
        g.emplace_back(sc.index(c2 / nb, c2 % nb, x, y), -eps / 2);
        return g;
    };

    const auto strategy_support = [&](std::size_t ia, std::size_t ib) {
        std::vector<std::size_t> cells;
        for (std::size_t x = 0; x < nx; ++x) {
            const std::size_t a = ia % (na + 1);
            ia /= na + 1;
            if (a == na) continue;  // Alice aborts on this input
            std::size_t rest = ib;
            for (std::size_t y = 0; y < ny; ++y) {
                const std::size_t b = rest % (nb + 1);
                rest /= nb + 1;
                if (b == nb) continue;  // Bob aborts on this input
                cells.push_back(sc.index(a, b, x, y));
            }
        }
        return cells;
    };

    // Minimize the total strategy weight subject to reproducing p plus a
    // per-block convex combination of generators on every cell.
    LinearProgram lp(Sense::Minimize);
    std::vector<std::size_t> wvar(count_a * count_b);
    for (std::size_t i = 0; i < wvar.size(); ++i)
        wvar[i] = lp.add_variable("w" + std::to_string(i), true, Rat(1));
    std::vector<std::vector<std::size_t>> gvar(blocks, std::vector<std::size_t>(gens));
    for (std::size_t blk = 0; blk < blocks; ++blk)
        for (std::size_t j = 0; j < gens; ++j)
            gvar[blk][j] = lp.add_variable(
                "g" + std::to_string(blk) + "_" + std::to_string(j), true, Rat(0));

    std::vector<std::size_t> cell_row(sc.table_size());
    for (std::size_t t = 0; t < sc.table_size(); ++t)
        cell_row[t] = lp.add_row("cell" + std::to_string(t), Rel::Eq, p.table[t]);
    std::vector<std::size_t> ball_row(blocks);
    for (std::size_t blk = 0; blk < blocks; ++blk)
        ball_row[blk] = lp.add_row("ball" + std::to_string(blk), Rel::Eq, Rat(1));

    for (std::size_t ia = 0; ia < count_a; ++ia)
        for (std::size_t ib = 0; ib < count_b; ++ib)
            for (const std::size_t t : strategy_support(ia, ib))
                lp.set_coeff(cell_row[t], wvar[ia * count_b + ib], Rat(1));
    for (std::size_t blk = 0; blk < blocks; ++blk)
        for (std::size_t j = 0; j < gens; ++j) {
            lp.set_coeff(ball_row[blk], gvar[blk][j], Rat(1));
            // Sum w * strategy - Delta = p, so generators enter negated.
            for (const auto& [t, v] : block_generator(blk, j))
                lp.set_coeff(cell_row[t], gvar[blk][j], -v);
        }

    const LpSolution sol = solve(lp);
    require(sol.status == LpStatus::Optimal, "reference program did not solve");

    // Dual certificate: a functional value per cell plus one offset per block.
    std::vector<Rat> bhat(sc.table_size());
    for (std::size_t t = 0; t < sc.table_size(); ++t) bhat[t] = sol.dual[cell_row[t]];
    std::vector<Rat> lam(blocks);
    Rat lam_total(0);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        lam[blk] = sol.dual[ball_row[blk]];
        lam_total += lam[blk];
    }
    Rat bp(0);
    for (std::size_t t = 0; t < sc.table_size(); ++t) bp += bhat[t] * p.table[t];
    require(sol.objective == bp + lam_total, "duality identity broke");

    // Every strategy must satisfy the functional bound <= 1, directly.
    for (std::size_t ia = 0; ia < count_a; ++ia)
        for (std::size_t ib = 0; ib < count_b; ++ib) {
            Rat v(0);
            for (const std::size_t t : strategy_support(ia, ib)) v += bhat[t];
            require(v <= 1, "a strategy beats the dual certificate");
        }

    // Per-block generator bounds, then the full product of vertices: the
    // certified value is a lower bound on the weight needed anywhere in the
    // perturbation polytope.
    std::vector<std::vector<Rat>> dot(blocks, std::vector<Rat>(gens, Rat(0)));
    for (std::size_t blk = 0; blk < blocks; ++blk)
        for (std::size_t j = 0; j < gens; ++j) {
            for (const auto& [t, v] : block_generator(blk, j)) dot[blk][j] += bhat[t] * v;
            require(dot[blk][j] >= lam[blk], "a generator beats its block offset");
        }
    for (std::size_t idx = 0; idx < vertex_count; ++idx) {
        Rat total = bp;
        std::size_t rest = idx;
        for (std::size_t blk = 0; blk < blocks; ++blk) {
            total += dot[blk][rest % gens];
            rest /= gens;
        }
        require(total >= sol.objective, "a polytope vertex undercuts the certified value");
    }

    return sol.objective;
}

}  // namespace bellbound::testing
