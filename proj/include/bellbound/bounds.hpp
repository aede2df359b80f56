#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellbound/core.hpp"
#include "bellbound/local.hpp"
#include "bellbound/rat.hpp"

namespace bellbound {

struct BoundOptions {
    std::size_t budget = kDefaultEnumerationBudget;
    // Populate the primal strategy decomposition alongside the value.
    bool want_witness = true;
};

// Result of one bound computation. Every returned object has already passed
// the internal re-verification: the certificate's strategy bounds are
// re-checked by enumeration and the primal witness is re-summed against the
// input table, both in exact arithmetic.
struct BoundResult {
    Rat value;
    // Dual-optimal functional. For nu / nu_eps: |B(l)| <= 1 on the plain
    // strategy set. For eff / eff_eps: B(l) <= 1 on the abort-extended set,
    // zero coefficients on abort outcomes.
    BellFunctional certificate;
    // Guaranteed threshold of the certificate on the stated domain: for nu
    // and eff this equals value; for the eps variants the certificate stays
    // >= beta on the whole perturbation ball.
    Rat beta;
    // eff / eff_eps: the primal scale (abort-free fraction); value = 1/zeta.
    std::optional<Rat> zeta;
    // Primal weights over strategies: signed decomposition for nu / nu_eps,
    // probability weights for eff / eff_eps.
    std::vector<std::pair<LocalDetStrategy, Rat>> witness;
    // The perturbed family p + Delta actually used (eps variants only).
    std::optional<DistributionFamily> perturbed;
    // eff_eps only: set when the LP scale degenerates to zero; value is then
    // meaningless and diagnostic explains the failure.
    bool infinite = false;
    std::string diagnostic;
};

// Smallest total weight of a signed strategy decomposition of p; equivalently
// the best value B(p) over functionals with |B(l)| <= 1 on deterministic
// strategies. Requires a valid, nonsignaling, abort-free family. Always >= 1.
BoundResult nu(const DistributionFamily& p, const BoundOptions& options = {});

// min over valid families p' with per-input L1 distance <= eps of nu(p').
// The certificate satisfies B(p') >= value for every such p', exactly.
BoundResult nu_eps(const DistributionFamily& p, const Rat& eps,
                   const BoundOptions& options = {});

// Inverse of the largest zeta such that zeta*p is the non-abort part of a
// mixture of abort-extended strategies; equivalently the best B(p) over
// functionals with B(l) <= 1 on the abort-extended strategy set. Always
// in [1, |X||Y|].
BoundResult eff(const DistributionFamily& p, const BoundOptions& options = {});

// eps-robust variant via the change-of-variables LP (w = zeta*mu,
// e = zeta*Delta); returns 1/zeta* plus a certificate pair (B, beta) with
// B(l) <= 1 on the abort-extended set and B(p + Delta) >= beta on the whole
// perturbation polytope.
BoundResult eff_eps(const DistributionFamily& p, const Rat& eps,
                    const BoundOptions& options = {});

// One vertex of the per-input perturbation polytope (zero block sums,
// per-block absolute mass <= eps), stored as a dense table aligned with the
// scenario index.
struct NoisePolytopePoint {
    std::vector<Rat> delta;
};

// Indexed stream of all vertices of the perturbation polytope: per input
// block, zero or (eps/2)(indicator - indicator') over ordered pairs of
// distinct outcome cells; the full set is the product over blocks.
class DeltaExtremeRange {
  public:
    DeltaExtremeRange(Scenario scenario, Rat eps,
                      std::size_t budget = kDefaultEnumerationBudget);

    std::size_t size() const { return size_; }
    std::size_t per_block() const { return per_block_; }
    NoisePolytopePoint at(std::size_t index) const;

  private:
    Scenario scenario_;
    Rat eps_;
    std::size_t cells_;      // outcome pairs per block
    std::size_t per_block_;  // cells*(cells-1) + 1, or 1 when eps = 0
    std::size_t size_;
};

struct QeffReport {
    bool feasible = false;
    Rat bound;  // 1/zeta when feasible
    // First offending tuple when infeasible.
    std::optional<std::array<std::size_t, 4>> mismatch;
    Rat expected;
    Rat found;
};

// Checks q(a,b|x,y) = zeta * p(a,b|x,y) exactly on all non-abort outcome
// pairs; q may carry abort outcomes (the mass bleeds only into aborts).
QeffReport check_qeff_feasible(const DistributionFamily& p, const DistributionFamily& q,
                               const Rat& zeta);

}  // namespace bellbound
