#pragma once

// Brute-force reference for small linear programs, shared by the unit tests
// and the acceptance suite. Every candidate basic point (n linearly
// independent tight constraints) is solved exactly and checked against the
// full constraint list, so on bounded programs the best feasible candidate
// is the true optimum and an empty candidate set certifies infeasibility.

#include <cstddef>
#include <optional>
#include <vector>

#include "bellbound/lp.hpp"
#include "bellbound/rat.hpp"

namespace bellbound::testing {

struct OracleOutcome {
    bool feasible = false;
    Rat value;
};

namespace detail {

struct DenseRow {
    std::vector<Rat> coeffs;
    Rel rel = Rel::Eq;
    Rat rhs;
};

// Solves square A x = b by Gaussian elimination; nullopt when singular.
inline std::optional<std::vector<Rat>> solve_square(std::vector<std::vector<Rat>> a,
                                                    std::vector<Rat> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rat f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace detail

inline OracleOutcome vertex_enumeration_optimum(const LinearProgram& lp) {
    const std::size_t n = lp.num_variables();
    std::vector<detail::DenseRow> rows;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        detail::DenseRow row;
        row.coeffs.assign(n, Rat(0));
        row.rel = lp.row(i).rel;
        row.rhs = lp.row(i).rhs;
        rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < n; ++j)
        for (const auto& [r, val] : lp.column(j)) rows[r].coeffs[j] = val;
    for (std::size_t j = 0; j < n; ++j) {
        if (!lp.variable(j).nonneg) continue;
        detail::DenseRow bound;
        bound.coeffs.assign(n, Rat(0));
        bound.coeffs[j] = 1;
        bound.rel = Rel::Ge;
        bound.rhs = Rat(0);
        rows.push_back(std::move(bound));
    }

    OracleOutcome best;
    std::vector<std::size_t> pick(n, 0);
    const std::size_t total = rows.size();
    if (total < n) return best;

    auto feasible_everywhere = [&](const std::vector<Rat>& x) {
        for (const auto& row : rows) {
            Rat act(0);
            for (std::size_t j = 0; j < n; ++j) act += row.coeffs[j] * x[j];
            const bool ok = (row.rel == Rel::Le)   ? act <= row.rhs
                            : (row.rel == Rel::Ge) ? act >= row.rhs
                                                   : act == row.rhs;
            if (!ok) return false;
        }
        return true;
    };

    // Walk all size-n subsets of the constraint list.
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < n; ++j) idx[j] = j;
    while (true) {
        std::vector<std::vector<Rat>> a(n, std::vector<Rat>(n));
        std::vector<Rat> b(n);
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = rows[idx[j]].coeffs;
            b[j] = rows[idx[j]].rhs;
        }
        if (auto x = detail::solve_square(std::move(a), std::move(b));
            x && feasible_everywhere(*x)) {
            Rat value(0);
            for (std::size_t j = 0; j < n; ++j) value += lp.variable(j).objective * (*x)[j];
            const bool better = lp.sense() == Sense::Maximize ? value > best.value
                                                              : value < best.value;
            if (!best.feasible || better) {
                best.feasible = true;
                best.value = std::move(value);
            }
        }
        // Advance the combination.
        std::size_t k = n;
        while (k > 0 && idx[k - 1] == total - n + (k - 1)) --k;
        if (k == 0) break;
        ++idx[k - 1];
        for (std::size_t j = k; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

// Random bounded LP: every variable is boxed, so the feasible set is a
// polytope and vertex enumeration is a complete oracle.
inline LinearProgram make_random_boxed_lp(RatRng& rng) {
    const std::size_t n = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const std::size_t extra_rows = static_cast<std::size_t>(rng.uniform_int(0, 5));
    LinearProgram lp(rng.uniform_int(0, 1) ? Sense::Maximize : Sense::Minimize);
    std::vector<bool> nonneg(n);
    for (std::size_t j = 0; j < n; ++j) {
        nonneg[j] = rng.uniform_int(0, 3) > 0;
        lp.add_variable("v" + std::to_string(j), nonneg[j], rat(rng.uniform_int(-5, 5)));
    }
    std::size_t row_id = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const Rat box = rat(rng.uniform_int(1, 4));
        const std::size_t hi = lp.add_row("box_hi" + std::to_string(row_id), Rel::Le, box);
        lp.set_coeff(hi, j, rat(1));
        if (!nonneg[j]) {
            const std::size_t lo = lp.add_row("box_lo" + std::to_string(row_id), Rel::Ge, -box);
            lp.set_coeff(lo, j, rat(1));
        }
        ++row_id;
    }
    for (std::size_t r = 0; r < extra_rows; ++r) {
        const int pick = static_cast<int>(rng.uniform_int(0, 2));
        const Rel rel = pick == 0 ? Rel::Le : pick == 1 ? Rel::Ge : Rel::Eq;
        const std::size_t row = lp.add_row("r" + std::to_string(r), rel,
                                           rat(rng.uniform_int(-4, 4)));
        bool any = false;
        for (std::size_t j = 0; j < n; ++j) {
            const long c = rng.uniform_int(-3, 3);
            if (c != 0) {
                lp.set_coeff(row, j, rat(c));
                any = true;
            }
        }
        if (!any) lp.set_coeff(row, 0, rat(1));
    }
    return lp;
}

}  // namespace bellbound::testing
