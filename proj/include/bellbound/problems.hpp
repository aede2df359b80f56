#pragma once

// Desk-scale instances of the communication problems whose corruption
// bounds feed the certificate compiler: set disjointness with its balanced
// two-part input distribution, AND-of-OR tribes functions, and the
// gap-orthogonality predicate together with the suffix-padding rule for its
// input distribution. Each generator returns a full function table plus,
// when an exhaustive rectangle scan fits the caller's budget and the reward
// side carries mass, a certificate that has already passed that scan.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellbound/core.hpp"
#include "bellbound/corruption.hpp"
#include "bellbound/local.hpp"
#include "bellbound/rat.hpp"

namespace bellbound {

// A named function table bundled with an optional pre-verified certificate
// and free-form metadata notes (key, value). The certificate, when present,
// references the same table held in f.
struct ProblemInstance {
    std::string name;
    std::size_t bits = 0;  // input length per side
    PartialFunction f;
    std::optional<CorruptionCertificate> certificate;
    std::vector<std::pair<std::string, std::string>> notes;
};

// Set disjointness on n-bit inputs read as subsets of {0, .., n-1}:
// f(x, y) = 1 when the sets share no element. Input labels are indicator
// strings with position i holding the bit for element i. For n >= 2 the
// instance carries a certificate over disj_mu(n) with penalties on the
// intersecting side and rewards on the disjoint side, tightened over the
// built-in weight grid; n = 1 has no such distribution and gets none.
// Throws Error(InvalidArgument) unless 1 <= n <= 4.
ProblemInstance disj(std::size_t n,
                     std::size_t budget = kDefaultEnumerationBudget);

// The input distribution behind the disjointness certificates, row-major on
// (x, y): the even mixture of the uniform distribution on disjoint pairs
// with |x| = |y| = m and the uniform distribution on pairs with
// |x| = |y| = m sharing exactly one element, where m = max(1, (n+1)/4)
// rounded down. Throws Error(InvalidArgument) for n = 1 (no balanced
// disjoint pairs exist) or n > 4.
std::vector<Rat> disj_mu(std::size_t n);

// Tribes function on s blocks of width t: the AND over blocks of the OR
// over block coordinates of x_i AND y_i. Inputs are (s*t)-bit strings with
// block b occupying positions b*t .. b*t+t-1. Instances at 8x8 input grids
// or smaller carry a certificate over the uniform distribution, tightened
// as in disj; the asymptotic three-set certificate skeleton is recorded in
// the notes only. Throws Error(InvalidArgument) unless s, t >= 1 and
// s*t <= 8.
ProblemInstance tribes(std::size_t s, std::size_t t,
                       std::size_t budget = kDefaultEnumerationBudget);

// Gap orthogonality on {-1,+1}^n, with inputs standing for their 64-fold
// repetitions: for t = <x, y> the output is 1 when 64*t^2 <= n (nearly
// orthogonal after repetition) and 0 when 16*t^2 >= n, undefined between.
// Labels are sign strings over {'+','-'} with position i holding
// coordinate i. l is the suffix-padding length recorded for ort_padding and
// must lie in [0, 63]. Certificates use the uniform distribution on the
// promise and attach under the same conditions as disj. Throws
// Error(InvalidArgument) unless 1 <= n <= 4 and l <= 63.
ProblemInstance ort(std::size_t n, std::size_t l,
                    std::size_t budget = kDefaultEnumerationBudget);

// One entry of the padded input distribution for gap orthogonality. The
// base pair (x, y) keeps its uniform weight and is routed to exactly one
// suffix pair (u, v) = (+1^l, +-1^l); only the sign of v varies.
struct PaddedWeight {
    bool suffix_all_plus = false;  // v = +1^l when true, v = -1^l otherwise
    Rat weight;
};

// The suffix-padding rule, row-major on base pairs (x, y) in {-1,+1}^n.
// With t64 = 64 * <x, y> the repeated pair's inner product, v = -1^l when
// t64 < -sqrt(64n) or 0 <= t64 <= sqrt(64n), and v = +1^l otherwise; the
// comparisons are exact (t64^2 against 64n). Every pair is routed exactly
// once, so the weights sum to 1 for every l. Throws Error(InvalidArgument)
// unless 1 <= n <= 4 and l <= 63.
std::vector<PaddedWeight> ort_padding(std::size_t n, std::size_t l);

// Small fixtures: "and1" (1-bit AND, whose promise family is the
// correlated box behind the CHSH analysis), "eq2" (equality on 2-bit
// strings), and "const0" (the all-zero function on 2-bit strings, whose
// promise family is local). Each carries a verified certificate.
std::vector<ProblemInstance> toy_catalog(
    std::size_t budget = kDefaultEnumerationBudget);

}  // namespace bellbound
