#include "bellbound/quantum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "bellbound/error.hpp"
#include "bellbound/transforms.hpp"

namespace bellbound {

namespace {

std::string operator_name(const char* side, std::size_t input, std::size_t output) {
    return std::string(side) + " operator (input " + std::to_string(input) +
           ", output " + std::to_string(output) + ")";
}

// Shape, self-adjointness, positivity, and completeness of one side's
// measurement families; n_outputs counts the abort slot when allowed.
void check_measurements(const char* side,
                        const std::vector<std::vector<Eigen::MatrixXcd>>& families,
                        std::size_t n_inputs, std::size_t n_outputs, std::size_t dim) {
    BELLBOUND_CHECK(families.size() == n_inputs, ErrorCode::InvalidArgument,
                    std::string(side) + " needs one measurement family per input");
    const Eigen::MatrixXcd identity =
        Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t x = 0; x < n_inputs; ++x) {
        const auto& family = families[x];
        BELLBOUND_CHECK(family.size() == n_outputs, ErrorCode::InvalidArgument,
                        std::string(side) + " family " + std::to_string(x) +
                            " needs one operator per output (abort slot included)");
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                      static_cast<Eigen::Index>(dim));
        for (std::size_t a = 0; a < n_outputs; ++a) {
            const Eigen::MatrixXcd& op = family[a];
            BELLBOUND_CHECK(op.rows() == static_cast<Eigen::Index>(dim) &&
                                op.cols() == static_cast<Eigen::Index>(dim),
                            ErrorCode::InvalidArgument,
                            operator_name(side, x, a) + " has the wrong shape");
            BELLBOUND_CHECK((op - op.adjoint()).cwiseAbs().maxCoeff() <= kOperatorTolerance,
                            ErrorCode::InvalidArgument,
                            operator_name(side, x, a) + " is not self-adjoint");
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op,
                                                                         Eigen::EigenvaluesOnly);
            BELLBOUND_CHECK(solver.eigenvalues().minCoeff() >= -kOperatorTolerance,
                            ErrorCode::InvalidArgument,
                            operator_name(side, x, a) + " has a negative eigenvalue");
            sum += op;
        }
        BELLBOUND_CHECK((sum - identity).cwiseAbs().maxCoeff() <= kOperatorTolerance,
                        ErrorCode::InvalidArgument,
                        std::string(side) + " family " + std::to_string(x) +
                            " does not sum to the identity");
    }
}

std::vector<std::string> transcript_labels(std::size_t count) {
    std::vector<std::string> labels;
    labels.reserve(count);
    for (std::size_t t = 0; t < count; ++t) labels.push_back(std::to_string(t));
    return labels;
}

// Output labels extended by the fresh non-abort label taking over the abort
// slot; throws when "A" is already taken.
std::vector<std::string> labels_with_fresh_a(const std::vector<std::string>& outputs,
                                             const char* side) {
    for (const std::string& label : outputs)
        BELLBOUND_CHECK(label != "A", ErrorCode::LabelInUse,
                        std::string("output label \"A\" already in use on the ") + side +
                            " side");
    std::vector<std::string> extended = outputs;
    extended.push_back("A");
    return extended;
}

// Transcript counts feed label products and table sizes; the cap keeps the
// index arithmetic comfortably inside long.
void check_transcript_counts(std::size_t m_a, std::size_t m_b) {
    BELLBOUND_CHECK(m_a >= 1 && m_b >= 1 && m_a <= 4096 && m_b <= 4096,
                    ErrorCode::InvalidArgument, "transcript counts must be in [1, 4096]");
}

}  // namespace

void QuantumStrategy::validate() const {
    scenario.validate();
    BELLBOUND_CHECK(dim_a >= 1 && dim_b >= 1, ErrorCode::InvalidArgument,
                    "local dimensions must be at least 1");
    BELLBOUND_CHECK(state.size() == static_cast<Eigen::Index>(dim_a * dim_b),
                    ErrorCode::InvalidArgument, "state length does not match dim_a * dim_b");
    BELLBOUND_CHECK(std::abs(state.norm() - 1.0) <= kStateNormTolerance,
                    ErrorCode::InvalidArgument, "state is not normalized");
    check_measurements("alice", measurements_a, scenario.nx(), scenario.na_full(), dim_a);
    check_measurements("bob", measurements_b, scenario.ny(), scenario.nb_full(), dim_b);
}

Rat rationalize(double v, long max_den) {
    BELLBOUND_CHECK(std::isfinite(v), ErrorCode::InvalidArgument,
                    "cannot rationalize a non-finite value");
    BELLBOUND_CHECK(std::abs(v) <= 1e9, ErrorCode::InvalidArgument,
                    "value too large to rationalize");
    BELLBOUND_CHECK(max_den >= 1 && max_den <= 1'000'000'000L, ErrorCode::InvalidArgument,
                    "denominator cap must be in [1, 10^9]");

    // Continued-fraction convergents p/q of |v|; the recurrence stops right
    // before the denominator would pass the cap, so the previous convergent
    // is the answer. With |v| <= 10^9 and q <= 10^9 the numerator stays
    // below 2^63.
    const long sign = v < 0 ? -1 : 1;
    double x = std::abs(v);
    long p_prev = 0, q_prev = 1;
    long p_cur = 1, q_cur = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double floor_x = std::floor(x);
        const long a = static_cast<long>(floor_x);
        if (q_cur > 0 && a > (max_den - q_prev) / q_cur) break;
        const long p_next = a * p_cur + p_prev;
        const long q_next = a * q_cur + q_prev;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        const double frac = x - floor_x;
        if (frac < 1e-15) break;  // remaining error is below double resolution
        x = 1.0 / frac;
    }
    return rat(sign * p_cur, q_cur);
}

DistributionFamily eval_strategy(const QuantumStrategy& s, double* residual_out) {
    s.validate();
    const Scenario& sc = s.scenario;
    const std::size_t na = sc.na_full(), nb = sc.nb_full();

    // With the state reshaped to the dim_a x dim_b matrix Psi_{ij} =
    // psi_{i*dim_b+j}, the Born value <psi| A (x) B |psi> is the entrywise
    // sum of conj(Psi) with A * Psi * B^T.
    Eigen::MatrixXcd psi(static_cast<Eigen::Index>(s.dim_a), static_cast<Eigen::Index>(s.dim_b));
    for (std::size_t i = 0; i < s.dim_a; ++i)
        for (std::size_t j = 0; j < s.dim_b; ++j)
            psi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                s.state[static_cast<Eigen::Index>(i * s.dim_b + j)];

    std::vector<double> numeric(sc.table_size(), 0.0);
    for (std::size_t x = 0; x < sc.nx(); ++x)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            double block_sum = 0.0;
            for (std::size_t a = 0; a < na; ++a) {
                const Eigen::MatrixXcd left = s.measurements_a[x][a] * psi;
                for (std::size_t b = 0; b < nb; ++b) {
                    const std::complex<double> value =
                        psi.conjugate()
                            .cwiseProduct(left * s.measurements_b[y][b].transpose())
                            .sum();
                    BELLBOUND_CHECK(std::abs(value.imag()) <= kNonsignalingTolerance,
                                    ErrorCode::InvalidArgument,
                                    "evaluation produced a probability with an imaginary part");
                    BELLBOUND_CHECK(value.real() >= -kNonsignalingTolerance,
                                    ErrorCode::InvalidArgument,
                                    "evaluation produced a negative probability");
                    numeric[sc.index(a, b, x, y)] = std::max(value.real(), 0.0);
                    block_sum += numeric[sc.index(a, b, x, y)];
                }
            }
            BELLBOUND_CHECK(std::abs(block_sum - 1.0) <= kNonsignalingTolerance,
                            ErrorCode::InvalidArgument,
                            "evaluation produced an unnormalized input block");
        }

    // The quantum table is nonsignaling by reduced-state independence; the
    // numeric scan catches strategies whose rounding noise already breaks it
    // beyond tolerance before any rationalization happens.
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t x = 0; x < sc.nx(); ++x) {
            double reference = 0.0;
            for (std::size_t y = 0; y < sc.ny(); ++y) {
                double marginal = 0.0;
                for (std::size_t b = 0; b < nb; ++b) marginal += numeric[sc.index(a, b, x, y)];
                if (y == 0)
                    reference = marginal;
                else
                    BELLBOUND_CHECK(std::abs(marginal - reference) <= kNonsignalingTolerance,
                                    ErrorCode::SignalingInput,
                                    "numeric table signals on the alice side");
            }
        }
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            double reference = 0.0;
            for (std::size_t x = 0; x < sc.nx(); ++x) {
                double marginal = 0.0;
                for (std::size_t a = 0; a < na; ++a) marginal += numeric[sc.index(a, b, x, y)];
                if (x == 0)
                    reference = marginal;
                else
                    BELLBOUND_CHECK(std::abs(marginal - reference) <= kNonsignalingTolerance,
                                    ErrorCode::SignalingInput,
                                    "numeric table signals on the bob side");
            }
        }

    DistributionFamily out(sc);
    double residual = 0.0;
    for (std::size_t x = 0; x < sc.nx(); ++x)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            Rat block_sum(0);
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t b = 0; b < nb; ++b) {
                    const double value = numeric[sc.index(a, b, x, y)];
                    const Rat approx = rationalize(value);
                    residual = std::max(residual, std::abs(value - approx.get_d()));
                    out.at(a, b, x, y) = approx;
                    block_sum += approx;
                }
            BELLBOUND_CHECK(block_sum > 0, ErrorCode::InvalidArgument,
                            "input block rationalized to zero mass");
            for (std::size_t a = 0; a < na; ++a)
                for (std::size_t b = 0; b < nb; ++b) out.at(a, b, x, y) /= block_sum;
        }
    out.validate();
    if (residual_out != nullptr) *residual_out = residual;
    return out;
}

DistributionFamily relabel_abort(const DistributionFamily& q) {
    const Scenario& sc = q.scenario;
    BELLBOUND_CHECK(sc.abort_allowed, ErrorCode::InvalidArgument,
                    "family has no abort outcome to relabel");
    q.validate();
    const Scenario relabeled(sc.inputs_a, sc.inputs_b, labels_with_fresh_a(sc.outputs_a, "alice"),
                             labels_with_fresh_a(sc.outputs_b, "bob"), false);
    // The fresh label occupies the index the abort slot had, so the dense
    // table carries over verbatim.
    DistributionFamily out(relabeled);
    out.table = q.table;
    out.validate();
    return out;
}

BellFunctional relabel_abort(const BellFunctional& b) {
    const Scenario& sc = b.scenario;
    BELLBOUND_CHECK(sc.abort_allowed, ErrorCode::InvalidArgument,
                    "functional has no abort slot to relabel");
    BELLBOUND_CHECK(!b.has_abort_coeffs(), ErrorCode::AbortCoefficients,
                    "relabeling would turn abort coefficients into scoring weights");
    const Scenario relabeled(sc.inputs_a, sc.inputs_b, labels_with_fresh_a(sc.outputs_a, "alice"),
                             labels_with_fresh_a(sc.outputs_b, "bob"), false);
    BellFunctional out(relabeled);
    out.coeffs = b.coeffs;
    return out;
}

DistributionFamily embed_zero_transcript(const DistributionFamily& p_prime, std::size_t m_a,
                                         std::size_t m_b) {
    BELLBOUND_CHECK(!p_prime.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "embedding acts on abort-free families");
    check_transcript_counts(m_a, m_b);
    p_prime.validate();
    const Scenario& sc = p_prime.scenario;

    const auto combine = [](const std::vector<std::string>& outputs,
                            const std::vector<std::string>& transcripts) {
        std::vector<std::string> labels;
        labels.reserve(outputs.size() * transcripts.size());
        for (const std::string& o : outputs)
            for (const std::string& t : transcripts) labels.push_back(o + ":" + t);
        return labels;
    };
    // Generated transcript labels carry no separator, so the joined labels
    // cannot collide; the constructor still validates.
    const Scenario lifted(sc.inputs_a, sc.inputs_b, combine(sc.outputs_a, transcript_labels(m_a)),
                          combine(sc.outputs_b, transcript_labels(m_b)), false);

    // Zero-transcript cells carry p'/(m_a*m_b); the remaining mass is spread
    // uniformly, which keeps each block summing to 1 and adds input-
    // independent marginals only.
    const Rat scale = rat(1, static_cast<long>(m_a * m_b));
    const Rat filler = scale / rat(static_cast<long>(sc.na() * sc.nb()));
    DistributionFamily out(lifted);
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t b = 0; b < sc.nb(); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    for (std::size_t ta = 0; ta < m_a; ++ta)
                        for (std::size_t tb = 0; tb < m_b; ++tb)
                            out.at(a * m_a + ta, b * m_b + tb, x, y) =
                                (ta == 0 && tb == 0)
                                    ? Rat(p_prime.at(a, b, x, y) * scale)
                                    : filler;
    out.validate();
    return out;
}

CompiledViolation compile_violation(const DistributionFamily& p_prime, const BellFunctional& b,
                                    const Rat& beta, std::size_t m_a, std::size_t m_b,
                                    const DistributionFamily& q_bar, const Rat& eps,
                                    const Rat& eps_prime) {
    require_same_scenario(b.scenario, p_prime.scenario, "compile_violation");
    BELLBOUND_CHECK(!b.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "compilation starts from an abort-free functional");
    check_transcript_counts(m_a, m_b);
    BELLBOUND_CHECK(std::has_single_bit(m_a) && std::has_single_bit(m_b),
                    ErrorCode::InvalidArgument, "transcript counts must be powers of two");
    BELLBOUND_CHECK(eps_prime >= 0 && eps >= eps_prime, ErrorCode::InvalidArgument,
                    "residual noise must lie between zero and the certified level");
    p_prime.validate();
    q_bar.validate();

    const BellFunctional lifted =
        lift_noise_resistant(b, transcript_labels(m_a), transcript_labels(m_b));
    require_same_scenario(q_bar.scenario, lifted.scenario, "compile_violation");

    const Scenario& sc = p_prime.scenario;
    const Rat scale = rat(1, static_cast<long>(m_a * m_b));
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t bb = 0; bb < sc.nb(); ++bb)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    if (q_bar.at(a * m_a, bb * m_b, x, y) != p_prime.at(a, bb, x, y) * scale)
                        throw Error(ErrorCode::EmbeddingMismatch,
                                    "zero-transcript cell (a=" + std::to_string(a) +
                                        ", b=" + std::to_string(bb) + ", x=" + std::to_string(x) +
                                        ", y=" + std::to_string(y) +
                                        ") does not carry p'/(m_a*m_b)");

    const Rat value = evaluate(lifted, q_bar);
    BELLBOUND_CHECK(value == evaluate(b, p_prime) * scale, ErrorCode::GuaranteeViolated,
                    "lifted value does not match the scaled base value");
    const Rat claimed = beta * scale;
    BELLBOUND_CHECK(value >= claimed, ErrorCode::GuaranteeViolated,
                    "compiled family misses the claimed threshold");

    CompiledViolation out;
    out.q_bar = q_bar;
    out.b = lifted;
    out.claimed = claimed;
    out.beta = beta;
    out.m_a = m_a;
    out.m_b = m_b;
    out.eps = eps;
    out.eps_prime = eps_prime;
    return out;
}

}  // namespace bellbound
