#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bellbound/core.hpp"
#include "bellbound/local.hpp"
#include "bellbound/rat.hpp"

namespace bellbound {

// One conditional distribution per input on each side, over the non-abort
// outputs. Used to substitute abort outcomes by sampled ones.
struct MarginalPair {
    std::vector<std::vector<Rat>> alice;  // [x][a]
    std::vector<std::vector<Rat>> bob;    // [y][b]

    // Checks shape against the scenario's non-abort outputs and that every
    // row is a distribution. Throws Error(InvalidArgument).
    void validate(const Scenario& scenario) const;
};

// The deterministic marginals of a non-aborting strategy: point masses on
// its chosen outputs.
MarginalPair point_mass_marginals(const Scenario& scenario, const LocalDetStrategy& s);

struct SaturateResult {
    BellFunctional functional;
    // Strategies attaining -1 and +1 after the rescale (first in enumeration
    // order when ties occur).
    LocalDetStrategy arg_min;
    LocalDetStrategy arg_max;
    // The extreme values of the input functional before the rescale.
    Rat min_value;
    Rat max_value;
};

// Affine rescale 2(B - (M + m)/2)/(M - m) pinning the strategy range onto
// [-1, 1]: the result attains -1 and +1 on the returned strategies, and
// B~(p) >= B(p) whenever B is normalized and B(p) >= 1. Requires an
// abort-free functional that is not constant on the strategy set.
SaturateResult saturate(const BellFunctional& b,
                        std::size_t budget = kDefaultEnumerationBudget);

// Spreads the weight of b onto abort outcomes so that aborting becomes
// equivalent to substituting an output drawn from the given marginals: on
// abort rows and columns the coefficient is the marginal average of the
// non-abort ones. The result lives on the abort-extended scenario, preserves
// values on never-aborting families, and stays within [-1, 1] on the
// abort-extended strategy set whenever b is normalized. b must carry no
// abort coefficients.
BellFunctional pad_abort(const BellFunctional& b, const MarginalPair& m);

// Cancels abort coefficients by inclusion-exclusion:
// B''_{a,b} = B'_{a,b} - B'_{a,bot} - B'_{bot,b} + B'_{bot,bot} on non-abort
// pairs and zero otherwise. Under full evaluation,
// B''(p) = B'(p) - B'(p_{A,bot}) - B'(p_{bot,B}) + B'(p_{bot,bot}) for every
// nonsignaling p with abort, where the corrected terms replace one or both
// sides' outputs by abort. Requires an abort-extended scenario.
BellFunctional strip_abort(const BellFunctional& b);

// The full pipeline from a normalized functional to an
// inefficiency-resistant one: saturate, pad with the marginals of the
// extreme strategies (averaging the two pads), strip the abort
// coefficients, and scale by 1/3. The result B* satisfies, re-verified by
// enumeration before returning:
//   |B*(l)| <= 1 on the abort-extended strategy set, and
//   B*(p) >= B(p)/3 - 2/3.
// Requires b normalized and non-constant, p nonsignaling with B(p) >= 1.
BellFunctional make_inefficiency_resistant(const BellFunctional& b,
                                           const DistributionFamily& p,
                                           std::size_t budget = kDefaultEnumerationBudget);

// Tensors each output with a transcript label: the lifted functional keeps
// the coefficient of (a, b) on the pair of designated zero transcripts (by
// convention the first label of each set) and is zero elsewhere. Lifted
// labels read "output:transcript". Requires an abort-free functional and
// nonempty transcript sets.
BellFunctional lift_noise_resistant(const BellFunctional& b,
                                    const std::vector<std::string>& transcripts_a,
                                    const std::vector<std::string>& transcripts_b);

}  // namespace bellbound
