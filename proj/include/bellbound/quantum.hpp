#pragma once

// Finite-dimensional quantum strategies and the distribution-level
// compilation of certified efficiency bounds into noise-resistant
// violations. This is the only module that touches floating point:
// strategies are evaluated numerically, checked against the tolerances
// below, and rationalized back into the exact world.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bellbound/core.hpp"
#include "bellbound/rat.hpp"
#include "bellbound/scenario.hpp"

namespace bellbound {

// State vectors must be normalized within kStateNormTolerance; measurement
// operators must be self-adjoint, positive semidefinite, and sum to the
// identity within kOperatorTolerance; evaluated tables must look
// nonsignaling within kNonsignalingTolerance before rationalization.
inline constexpr double kStateNormTolerance = 1e-12;
inline constexpr double kOperatorTolerance = 1e-12;
inline constexpr double kNonsignalingTolerance = 1e-9;

// Largest denominator the continued-fraction rationalization may emit
// before the exact per-input renormalization.
inline constexpr long kDenominatorCap = 1'000'000;

// A strategy on a dim_a * dim_b product space: a shared state and one
// measurement family per input on each side, one operator per output label
// (the abort slot included, last, when the scenario allows aborting).
struct QuantumStrategy {
    Scenario scenario;
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    Eigen::VectorXcd state;  // length dim_a * dim_b, Alice-major components
    std::vector<std::vector<Eigen::MatrixXcd>> measurements_a;  // [x][a]
    std::vector<std::vector<Eigen::MatrixXcd>> measurements_b;  // [y][b]

    // Shape, state normalization, self-adjointness, positivity, and
    // completeness checks; messages name the offending operator. Throws
    // Error(InvalidArgument).
    void validate() const;
};

// Best rational approximation of v (|v| at most 10^9, finite) among
// continued-fraction convergents with denominator at most max_den, which
// must lie in [1, 10^9] so the numerator arithmetic cannot overflow.
Rat rationalize(double v, long max_den = kDenominatorCap);

// Evaluates q(a,b|x,y) = <psi| A^x_a tensor B^y_b |psi> in floating point,
// asserts the numeric nonsignaling property of the table, then rationalizes
// each entry (denominators capped) and renormalizes every input block
// exactly to sum 1. When residual_out is set it receives the largest
// absolute gap between a floating-point entry and its rationalization,
// before renormalization.
DistributionFamily eval_strategy(const QuantumStrategy& s,
                                 double* residual_out = nullptr);

// Moves the abort mass of a family onto a fresh ordinary output label "A"
// appended on each side; the result never aborts, and any functional with
// zero weight on aborts evaluates identically across the move. Throws
// Error(LabelInUse) when "A" is already an output label, Error(
// InvalidArgument) when the family has no abort slot.
DistributionFamily relabel_abort(const DistributionFamily& q);

// The matching functional move: same scenario change, coefficients kept on
// the ordinary outputs and zero on "A". Requires zero abort coefficients
// (Error(AbortCoefficients) otherwise).
BellFunctional relabel_abort(const BellFunctional& b);

// The canonical lifted family for compile_violation: outputs tensored with
// transcript labels "0".."M-1" per side, the zero-transcript pair carrying
// p_prime scaled by 1/(m_a*m_b), and the remaining mass spread uniformly
// over the other transcript pairs (1/(m_a*m_b*|A|*|B|) per cell), which
// keeps the family valid and preserves the nonsignaling property.
// Transcript counts must lie in [1, 4096].
DistributionFamily embed_zero_transcript(const DistributionFamily& p_prime,
                                         std::size_t m_a, std::size_t m_b);

// A lifted functional together with the family and value it certifies.
struct CompiledViolation {
    DistributionFamily q_bar;
    BellFunctional b;  // zero off the pair of zero transcripts
    Rat claimed;       // beta / (m_a * m_b)
    // Provenance: the certified threshold, the transcript counts standing
    // for 2q = log2(m_a*m_b) communicated bits, and the noise parameters of
    // the certificate this came from.
    Rat beta;
    std::size_t m_a = 1;
    std::size_t m_b = 1;
    Rat eps;
    Rat eps_prime;
};

// Distribution-level compilation of a certified efficiency bound. Takes an
// abort-free functional b known to stay at most 1 on abort-extended
// deterministic strategies with b(p'') >= beta near p, transcript counts
// m_a, m_b (each a power of two), and a lifted family q_bar embedding
// p_prime on the zero transcripts. Checks the embedding identity
// q_bar(a:0, b:0 | x, y) = p_prime(a,b|x,y)/(m_a*m_b) cell by cell, lifts
// b, and confirms the compiled value evaluate(lifted, q_bar) equals
// evaluate(b, p_prime)/(m_a*m_b) and reaches the claimed beta/(m_a*m_b).
// Errors: EmbeddingMismatch naming the offending tuple, InvalidArgument for
// transcript counts that are not powers of two in [1, 4096] or eps_prime >
// eps, GuaranteeViolated when the claimed value is missed.
CompiledViolation compile_violation(const DistributionFamily& p_prime,
                                    const BellFunctional& b, const Rat& beta,
                                    std::size_t m_a, std::size_t m_b,
                                    const DistributionFamily& q_bar,
                                    const Rat& eps = Rat(0),
                                    const Rat& eps_prime = Rat(0));

}  // namespace bellbound
