#include "bellbound/transforms.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "bellbound/error.hpp"

namespace bellbound {

void MarginalPair::validate(const Scenario& scenario) const {
    BELLBOUND_CHECK(alice.size() == scenario.nx() && bob.size() == scenario.ny(),
                    ErrorCode::InvalidArgument,
                    "marginal family shape does not match the scenario inputs");
    const auto check_rows = [](const std::vector<std::vector<Rat>>& rows, std::size_t width,
                               const char* side) {
        for (const auto& row : rows) {
            BELLBOUND_CHECK(row.size() == width, ErrorCode::InvalidArgument,
                            std::string("marginal row width mismatch on side ") + side);
            Rat total(0);
            for (const Rat& v : row) {
                BELLBOUND_CHECK(v >= 0, ErrorCode::InvalidArgument,
                                std::string("negative marginal entry on side ") + side);
                total += v;
            }
            BELLBOUND_CHECK(total == 1, ErrorCode::InvalidArgument,
                            std::string("marginal row does not sum to 1 on side ") + side);
        }
    };
    check_rows(alice, scenario.na(), "A");
    check_rows(bob, scenario.nb(), "B");
}

MarginalPair point_mass_marginals(const Scenario& scenario, const LocalDetStrategy& s) {
    BELLBOUND_CHECK(s.map_a.size() == scenario.nx() && s.map_b.size() == scenario.ny(),
                    ErrorCode::InvalidArgument, "strategy shape does not match the scenario");
    MarginalPair m;
    m.alice.assign(scenario.nx(), std::vector<Rat>(scenario.na(), Rat(0)));
    m.bob.assign(scenario.ny(), std::vector<Rat>(scenario.nb(), Rat(0)));
    for (std::size_t x = 0; x < scenario.nx(); ++x) {
        BELLBOUND_CHECK(s.map_a[x] < scenario.na(), ErrorCode::InvalidArgument,
                        "aborting strategies have no output marginals");
        m.alice[x][s.map_a[x]] = 1;
    }
    for (std::size_t y = 0; y < scenario.ny(); ++y) {
        BELLBOUND_CHECK(s.map_b[y] < scenario.nb(), ErrorCode::InvalidArgument,
                        "aborting strategies have no output marginals");
        m.bob[y][s.map_b[y]] = 1;
    }
    return m;
}

SaturateResult saturate(const BellFunctional& b, std::size_t budget) {
    BELLBOUND_CHECK(!b.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "saturation acts on abort-free functionals");
    const Scenario& sc = b.scenario;

    BellFunctional negated(sc);
    for (std::size_t t = 0; t < sc.table_size(); ++t) negated.coeffs[t] = -b.coeffs[t];
    const LdetMax hi = max_bell_over_ldet(b, false, false, budget);
    const LdetMax lo = max_bell_over_ldet(negated, false, false, budget);

    SaturateResult result;
    result.max_value = hi.value;
    result.min_value = -lo.value;
    result.arg_max = hi.argmax;
    result.arg_min = lo.argmax;
    BELLBOUND_CHECK(result.min_value < result.max_value, ErrorCode::ConstantFunctional,
                    "functional is constant on the strategy set");

    // Value transform (2B - M - m)/(M - m); the constant spreads evenly over
    // the input blocks because each block of a distribution sums to 1.
    const Rat span = result.max_value - result.min_value;
    const Rat shift = (result.max_value + result.min_value) /
                      Rat(static_cast<long>(sc.nx() * sc.ny()));
    result.functional = BellFunctional(sc);
    for (std::size_t t = 0; t < sc.table_size(); ++t)
        result.functional.coeffs[t] = (2 * b.coeffs[t] - shift) / span;

    const DistributionFamily at_max = strategy_to_distribution(sc, result.arg_max);
    const DistributionFamily at_min = strategy_to_distribution(sc, result.arg_min);
    BELLBOUND_CHECK(evaluate(result.functional, at_max) == 1, ErrorCode::GuaranteeViolated,
                    "saturated functional misses +1 on its maximizer");
    BELLBOUND_CHECK(evaluate(result.functional, at_min) == -1, ErrorCode::GuaranteeViolated,
                    "saturated functional misses -1 on its minimizer");
    return result;
}

BellFunctional pad_abort(const BellFunctional& b, const MarginalPair& m) {
    BELLBOUND_CHECK(!b.has_abort_coeffs(), ErrorCode::AbortCoefficients,
                    "padding expects zero coefficients on abort outcomes");
    const Scenario base = b.scenario.without_abort();
    m.validate(base);
    const Scenario ext = base.with_abort();

    // Reindex the input coefficients onto the plain scenario first.
    const auto coeff = [&](std::size_t a, std::size_t bb, std::size_t x, std::size_t y) {
        return b.coeffs[b.scenario.index(a, bb, x, y)];
    };

    BellFunctional out(ext);
    for (std::size_t x = 0; x < base.nx(); ++x)
        for (std::size_t y = 0; y < base.ny(); ++y) {
            for (std::size_t a = 0; a < base.na(); ++a)
                for (std::size_t bb = 0; bb < base.nb(); ++bb)
                    out.at(a, bb, x, y) = coeff(a, bb, x, y);
            // Alice aborts: average her output away under m_A.
            for (std::size_t bb = 0; bb < base.nb(); ++bb) {
                Rat v(0);
                for (std::size_t a = 0; a < base.na(); ++a)
                    v += m.alice[x][a] * coeff(a, bb, x, y);
                out.at(ext.abort_a(), bb, x, y) = v;
            }
            // Bob aborts.
            for (std::size_t a = 0; a < base.na(); ++a) {
                Rat v(0);
                for (std::size_t bb = 0; bb < base.nb(); ++bb)
                    v += m.bob[y][bb] * coeff(a, bb, x, y);
                out.at(a, ext.abort_b(), x, y) = v;
            }
            // Both abort: average both outputs away.
            Rat v(0);
            for (std::size_t a = 0; a < base.na(); ++a)
                for (std::size_t bb = 0; bb < base.nb(); ++bb)
                    v += m.alice[x][a] * m.bob[y][bb] * coeff(a, bb, x, y);
            out.at(ext.abort_a(), ext.abort_b(), x, y) = v;
        }
    return out;
}

BellFunctional strip_abort(const BellFunctional& b) {
    BELLBOUND_CHECK(b.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "stripping expects an abort-extended functional");
    const Scenario& sc = b.scenario;
    BellFunctional out(sc);
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t bb = 0; bb < sc.nb(); ++bb)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    out.at(a, bb, x, y) = b.at(a, bb, x, y) - b.at(a, sc.abort_b(), x, y) -
                                          b.at(sc.abort_a(), bb, x, y) +
                                          b.at(sc.abort_a(), sc.abort_b(), x, y);
    return out;
}

BellFunctional make_inefficiency_resistant(const BellFunctional& b, const DistributionFamily& p,
                                           std::size_t budget) {
    BELLBOUND_CHECK(!b.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "the input functional must be abort-free");
    p.validate();
    require_same_scenario(b.scenario, p.scenario, "make_inefficiency_resistant");
    BELLBOUND_CHECK(is_nonsignaling(p).nonsignaling, ErrorCode::SignalingInput,
                    "the target family must be nonsignaling");
    BELLBOUND_CHECK(max_bell_over_ldet(b, false, true, budget).value <= 1,
                    ErrorCode::InvalidFunctional,
                    "the input functional must be normalized on the strategy set");
    const Rat base_value = evaluate(b, p);
    BELLBOUND_CHECK(base_value >= 1, ErrorCode::InvalidArgument,
                    "the target family must reach at least 1 on the functional");
    const Scenario& sc = b.scenario;

    const SaturateResult sat = saturate(b, budget);
    const BellFunctional pad_lo =
        pad_abort(sat.functional, point_mass_marginals(sc, sat.arg_min));
    const BellFunctional pad_hi =
        pad_abort(sat.functional, point_mass_marginals(sc, sat.arg_max));
    const Scenario ext = sc.with_abort();
    BellFunctional averaged(ext);
    for (std::size_t t = 0; t < ext.table_size(); ++t)
        averaged.coeffs[t] = (pad_lo.coeffs[t] + pad_hi.coeffs[t]) / 2;

    // The average was built to vanish on the always-abort point: its value
    // there is the mean of the saturated extremes -1 and +1.
    Rat abort_value(0);
    for (std::size_t x = 0; x < ext.nx(); ++x)
        for (std::size_t y = 0; y < ext.ny(); ++y)
            abort_value += averaged.at(ext.abort_a(), ext.abort_b(), x, y);
    BELLBOUND_CHECK(abort_value == 0, ErrorCode::GuaranteeViolated,
                    "padded average does not vanish on the always-abort point");

    const BellFunctional stripped = strip_abort(averaged);
    BellFunctional out(sc);
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t bb = 0; bb < sc.nb(); ++bb)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    out.at(a, bb, x, y) = stripped.at(a, bb, x, y) / 3;

    BELLBOUND_CHECK(max_bell_over_ldet(out, true, true, budget).value <= 1,
                    ErrorCode::GuaranteeViolated,
                    "result exceeds 1 in absolute value on an abort-extended strategy");
    BELLBOUND_CHECK(evaluate(out, p) >= base_value / 3 - rat(2, 3),
                    ErrorCode::GuaranteeViolated,
                    "result lost more than the guaranteed fraction of the violation");
    return out;
}

BellFunctional lift_noise_resistant(const BellFunctional& b,
                                    const std::vector<std::string>& transcripts_a,
                                    const std::vector<std::string>& transcripts_b) {
    BELLBOUND_CHECK(!b.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "lifting acts on abort-free functionals");
    BELLBOUND_CHECK(!transcripts_a.empty() && !transcripts_b.empty(),
                    ErrorCode::InvalidArgument,
                    "transcript sets need at least the zero transcript");
    const Scenario& sc = b.scenario;

    const auto combine = [](const std::vector<std::string>& outputs,
                            const std::vector<std::string>& transcripts) {
        std::vector<std::string> labels;
        labels.reserve(outputs.size() * transcripts.size());
        for (const std::string& o : outputs)
            for (const std::string& t : transcripts) labels.push_back(o + ":" + t);
        return labels;
    };
    // The scenario constructor validates, so distinct (output, transcript)
    // pairs whose joined labels coincide are caught right here.
    const auto lift_scenario = [&]() -> Scenario {
        try {
            return Scenario(sc.inputs_a, sc.inputs_b, combine(sc.outputs_a, transcripts_a),
                            combine(sc.outputs_b, transcripts_b), false);
        } catch (const Error&) {
            throw Error(ErrorCode::LabelInUse,
                        "combined output:transcript labels collide; rename the transcripts");
        }
    };
    const Scenario lifted = lift_scenario();

    // Coefficients survive only on the pair of zero transcripts, which sit
    // first within each output group.
    const std::size_t ta = transcripts_a.size(), tb = transcripts_b.size();
    BellFunctional out(lifted);
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t bb = 0; bb < sc.nb(); ++bb)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    out.at(a * ta, bb * tb, x, y) = b.at(a, bb, x, y);
    return out;
}

}  // namespace bellbound
