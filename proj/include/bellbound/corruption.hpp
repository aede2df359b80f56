#pragma once

// Compiles corruption-style certificates into inefficiency-resistant Bell
// functionals. A certificate pairs a partial boolean function with an input
// distribution, weighted penalty and reward families of promise cells, and a
// slack allowance g. When every input rectangle R_A x R_B satisfies
//
//     sum_i u_i mu(R cap P_i)  >=  sum_j v_j mu(R cap W_j) - g,
//
// the compiled functional stays at most 1 on every abort-extended
// deterministic strategy while scoring the function's promise family at
// (1/(2g)) sum_j v_j mu(W_j), a margin that degrades linearly under
// perturbations of the family.

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "bellbound/core.hpp"
#include "bellbound/local.hpp"
#include "bellbound/rat.hpp"
#include "bellbound/scenario.hpp"

namespace bellbound {

// Cells of the input grid gathered into one weighted family member.
struct WeightedSet {
    std::vector<std::pair<std::size_t, std::size_t>> cells;  // (x, y)
    Rat weight;
};

struct RectangleReport;

// The data backing one compiled functional. Penalty sets live on inputs
// where the function takes 1-z, reward sets where it takes z; members of
// each list are pairwise disjoint. mu is row-major on (x, y) and must
// vanish off the function's promise.
struct CorruptionCertificate {
    PartialFunction f;
    std::vector<Rat> mu;
    int z = 0;
    std::vector<WeightedSet> penalty_sets;
    std::vector<WeightedSet> reward_sets;
    Rat g;

    std::size_t nx() const { return f.inputs_a.size(); }
    std::size_t ny() const { return f.inputs_b.size(); }
    const Rat& mu_at(std::size_t x, std::size_t y) const { return mu[x * ny() + y]; }

    // Total mu weight of one set's cells.
    Rat mass(const WeightedSet& set) const;

    // Shape of f, the distribution axioms on mu, zero weight off-promise,
    // z a bit, g positive, and the side and disjointness restrictions on
    // the two set families. Throws Error on the first violation.
    void validate() const;
};

// One-penalty, one-reward certificate: all inputs with f = 1 are penalized
// with weight 1, all inputs with f = 0 rewarded with weight gamma, z = 0.
// Empty sides are simply omitted.
CorruptionCertificate standard_certificate(PartialFunction f, std::vector<Rat> mu,
                                           const Rat& gamma, const Rat& g);

struct RectangleReport {
    bool holds = false;      // slack >= 0 over everything scanned
    bool certified = false;  // true only for the exhaustive scan
    Rat slack;               // minimum over scanned rectangles
    std::vector<std::size_t> rect_a;  // row indices of a minimizing rectangle
    std::vector<std::size_t> rect_b;
    std::size_t scanned = 0;  // nominal rectangle count that was covered
};

// Exact scan of all 2^nx * 2^ny rectangles. The nominal count is metered
// against the budget even though the walk only enumerates subsets of the
// smaller side and picks the other side per column.
RectangleReport verify_rectangle_condition(
    const CorruptionCertificate& cert,
    std::size_t budget = kDefaultEnumerationBudget);

// Uniformly random rectangles instead; never certifies, only hunts for a
// violation.
RectangleReport verify_rectangle_condition_sampled(const CorruptionCertificate& cert,
                                                   std::size_t samples,
                                                   std::uint64_t seed);

// One row of a tightening table: the smallest slack allowance under which
// the one-penalty, one-reward certificate at this gamma passes every
// rectangle, plus a rectangle attaining it. g_star can be 0 (any positive
// allowance works then); a usable certificate needs g > 0.
struct TightenEntry {
    Rat gamma;
    Rat g_star;
    std::vector<std::size_t> rect_a;
    std::vector<std::size_t> rect_b;
};

// For each gamma on the grid, max over rectangles of
// gamma * mu(R cap f^-1(z)) - mu(R cap f^-1(1-z)), by exhaustive scan.
std::vector<TightenEntry> tighten_certificate(
    const PartialFunction& f, const std::vector<Rat>& mu, int z,
    const std::vector<Rat>& gamma_grid,
    std::size_t budget = kDefaultEnumerationBudget);

// Emits the functional with coefficients -u_i mu(x,y)/(2g) on penalty cells
// and +v_j mu(x,y)/(2g) on reward cells, both at output parity a XOR b = z,
// zero elsewhere. Unless the caller waives it, the rectangle condition is
// verified first and a failure names the offending rectangle. Both promised
// guarantees are re-verified on the result: the promise-family value equals
// its closed form and no abort-extended deterministic strategy exceeds 1.
BellFunctional build_bell(const CorruptionCertificate& cert,
                          bool require_rectangle_condition = true,
                          std::size_t budget = kDefaultEnumerationBudget);

// Closed-form lower bound on the functional's value across every family
// within L1 distance eps of the promise family:
// (1/(2g)) [sum_j v_j mu(W_j) - eps (sum_j |v_j| mu(W_j) + sum_i |u_i| mu(P_i))].
Rat robustness_bound(const CorruptionCertificate& cert, const Rat& eps);

}  // namespace bellbound
