#include "bellbound/bounds.hpp"

#include <string>

#include "bellbound/error.hpp"
#include "bellbound/lp.hpp"

namespace bellbound {

namespace {

constexpr std::size_t kDualFormRowCap = 512;

void verify(bool condition, const char* what) {
    if (!condition) throw Error(ErrorCode::GuaranteeViolated, what);
}

// Support cells of a strategy; when non_abort_only is set, inputs where
// either side aborts are skipped (the standard-evaluation footprint).
std::vector<std::size_t> support_cells(const Scenario& sc, const LocalDetStrategy& s,
                                       bool non_abort_only) {
    std::vector<std::size_t> cells;
    cells.reserve(sc.nx() * sc.ny());
    for (std::size_t x = 0; x < sc.nx(); ++x)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            if (non_abort_only && (sc.is_abort_a(s.map_a[x]) || sc.is_abort_b(s.map_b[y])))
                continue;
            cells.push_back(sc.index(s.map_a[x], s.map_b[y], x, y));
        }
    return cells;
}

// Independent cross-solve of the functional-side LP (max B(p) under per-
// strategy bounds); affordable only when the strategy set is small.
void cross_check_dual_form(const DistributionFamily& p, const LdetRange& range,
                           bool two_sided, const Rat& primal_value) {
    const Scenario& sc = range.scenario();
    const std::size_t rows = range.size() * (two_sided ? 2 : 1);
    if (rows > kDualFormRowCap) return;

    LinearProgram lp(Sense::Maximize);
    // One free variable per cell the functional can weight: all cells in the
    // two-sided (plain-strategy) case, non-abort cells otherwise.
    std::vector<std::size_t> var_of_cell(sc.table_size(), SIZE_MAX);
    for (std::size_t a = 0; a < (two_sided ? sc.na_full() : sc.na()); ++a)
        for (std::size_t b = 0; b < (two_sided ? sc.nb_full() : sc.nb()); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y) {
                    const std::size_t t = sc.index(a, b, x, y);
                    // Index into p with its own scenario: in the one-sided case
                    // sc is the abort-extended scenario, whose strides differ.
                    const Rat obj = (a < p.scenario.na_full() && b < p.scenario.nb_full())
                                        ? p.at(a, b, x, y)
                                        : Rat(0);
                    var_of_cell[t] = lp.add_variable("B" + std::to_string(t), false, obj);
                }
    for (std::size_t i = 0; i < range.size(); ++i) {
        const LocalDetStrategy s = range.at(i);
        const std::vector<std::size_t> cells = support_cells(sc, s, !two_sided);
        const std::size_t hi = lp.add_row("hi" + std::to_string(i), Rel::Le, Rat(1));
        for (const std::size_t t : cells) lp.set_coeff(hi, var_of_cell[t], Rat(1));
        if (two_sided) {
            const std::size_t lo = lp.add_row("lo" + std::to_string(i), Rel::Ge, Rat(-1));
            for (const std::size_t t : cells) lp.set_coeff(lo, var_of_cell[t], Rat(1));
        }
    }
    const LpSolution sol = solve(lp);
    verify(sol.status == LpStatus::Optimal, "functional-side LP failed to solve");
    verify(sol.objective == primal_value,
           "functional-side LP value disagrees with the decomposition LP");
}

}  // namespace

BoundResult nu(const DistributionFamily& p, const BoundOptions& options) {
    p.validate();
    BELLBOUND_CHECK(!p.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "nu is defined for abort-free families");
    BELLBOUND_CHECK(is_nonsignaling(p).nonsignaling, ErrorCode::SignalingInput,
                    "nu requires a nonsignaling family");
    const Scenario& sc = p.scenario;
    const LdetRange range(sc, false, options.budget);

    // Decomposition form: split signed strategy weights into y+ - y- and
    // minimize the total mass. The cell-row duals are the optimal functional.
    LinearProgram lp(Sense::Minimize);
    for (std::size_t i = 0; i < range.size(); ++i) {
        lp.add_variable("yp" + std::to_string(i), true, Rat(1));
        lp.add_variable("ym" + std::to_string(i), true, Rat(1));
    }
    std::vector<std::size_t> cell_row(sc.table_size());
    for (std::size_t t = 0; t < sc.table_size(); ++t)
        cell_row[t] = lp.add_row("cell" + std::to_string(t), Rel::Eq, p.table[t]);
    for (std::size_t i = 0; i < range.size(); ++i)
        for (const std::size_t t : support_cells(sc, range.at(i), false)) {
            lp.set_coeff(cell_row[t], 2 * i, Rat(1));
            lp.set_coeff(cell_row[t], 2 * i + 1, Rat(-1));
        }
    const LpSolution sol = solve(lp);
    verify(sol.status == LpStatus::Optimal,
           "signed decomposition LP must be solvable for nonsignaling input");

    BoundResult result;
    result.value = sol.objective;
    result.beta = sol.objective;
    result.certificate = BellFunctional(sc);
    for (std::size_t t = 0; t < sc.table_size(); ++t)
        result.certificate.coeffs[t] = sol.dual[cell_row[t]];

    // Sandwich re-verification: the functional is normalized and attains the
    // value; the decomposition reconstructs p with total mass equal to it.
    verify(max_bell_over_ldet(result.certificate, false, true, options.budget).value <= 1,
           "nu certificate exceeds 1 on a deterministic strategy");
    verify(evaluate(result.certificate, p) == result.value,
           "nu certificate does not attain the LP value on p");
    std::vector<Rat> rebuilt(sc.table_size(), Rat(0));
    Rat total_mass(0);
    for (std::size_t i = 0; i < range.size(); ++i) {
        const Rat w = sol.primal[2 * i] - sol.primal[2 * i + 1];
        if (w == 0) continue;
        total_mass += w > 0 ? w : -w;
        for (const std::size_t t : support_cells(sc, range.at(i), false)) rebuilt[t] += w;
        if (options.want_witness) result.witness.emplace_back(range.at(i), w);
    }
    verify(rebuilt == p.table, "nu witness does not reconstruct p");
    verify(total_mass == result.value, "nu witness mass disagrees with the LP value");
    verify(result.value >= 1, "nu fell below 1");

    cross_check_dual_form(p, range, true, result.value);
    return result;
}

BoundResult eff(const DistributionFamily& p, const BoundOptions& options) {
    p.validate();
    BELLBOUND_CHECK(!p.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "eff is defined for abort-free families");
    const Scenario& sc = p.scenario;
    const Scenario ext = sc.with_abort();
    const LdetRange range(ext, true, options.budget);

    // Conic form: nonnegative weights over abort-extended strategies whose
    // non-abort restriction reproduces p; minimize the total weight. The
    // optimum is 1/zeta for the largest feasible scale zeta.
    LinearProgram lp(Sense::Minimize);
    for (std::size_t i = 0; i < range.size(); ++i)
        lp.add_variable("m" + std::to_string(i), true, Rat(1));
    // Rows cover non-abort cells only; abort mass is unconstrained.
    std::vector<std::size_t> row_of_cell(ext.table_size(), SIZE_MAX);
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t b = 0; b < sc.nb(); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    row_of_cell[ext.index(a, b, x, y)] =
                        lp.add_row("cell" + std::to_string(ext.index(a, b, x, y)), Rel::Eq,
                                   p.at(a, b, x, y));
    for (std::size_t i = 0; i < range.size(); ++i)
        for (const std::size_t t : support_cells(ext, range.at(i), true))
            lp.set_coeff(row_of_cell[t], i, Rat(1));
    const LpSolution sol = solve(lp);
    verify(sol.status == LpStatus::Optimal, "weight LP must be solvable for a valid family");

    BoundResult result;
    result.value = sol.objective;
    result.beta = sol.objective;
    result.zeta = Rat(1) / sol.objective;
    result.certificate = BellFunctional(sc);
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t b = 0; b < sc.nb(); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    result.certificate.at(a, b, x, y) =
                        sol.dual[row_of_cell[ext.index(a, b, x, y)]];

    verify(max_bell_over_ldet(result.certificate, true, false, options.budget).value <= 1,
           "eff certificate exceeds 1 on an abort-extended strategy");
    verify(evaluate(result.certificate, p) == result.value,
           "eff certificate does not attain the LP value on p");
    std::vector<Rat> rebuilt(ext.table_size(), Rat(0));
    Rat total(0);
    for (std::size_t i = 0; i < range.size(); ++i) {
        const Rat& w = sol.primal[i];
        if (w == 0) continue;
        verify(w > 0, "negative weight escaped the LP");
        total += w;
        for (const std::size_t t : support_cells(ext, range.at(i), true)) rebuilt[t] += w;
        if (options.want_witness)
            result.witness.emplace_back(range.at(i), w / sol.objective);
    }
    verify(total == result.value, "eff weights disagree with the LP value");
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t b = 0; b < sc.nb(); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    verify(rebuilt[ext.index(a, b, x, y)] == p.at(a, b, x, y),
                           "eff witness does not reconstruct p");
    verify(result.value >= 1 && result.value <= Rat(static_cast<long>(sc.nx() * sc.ny())),
           "eff left its a-priori range");

    cross_check_dual_form(p, range, false, result.value);
    return result;
}

BoundResult nu_eps(const DistributionFamily& p, const Rat& eps, const BoundOptions& options) {
    p.validate();
    BELLBOUND_CHECK(!p.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "nu_eps is defined for abort-free families");
    BELLBOUND_CHECK(is_nonsignaling(p).nonsignaling, ErrorCode::SignalingInput,
                    "nu_eps requires a nonsignaling family");
    BELLBOUND_CHECK(eps >= 0 && eps <= 1, ErrorCode::InvalidArgument,
                    "eps must lie in [0, 1]");
    const Scenario& sc = p.scenario;
    const LdetRange range(sc, false, options.budget);
    const std::size_t cells = sc.table_size();

    // Same decomposition LP as nu, with a per-cell perturbation e (kept a
    // valid nonsignaling family by the block-sum and nonnegativity rows) and
    // auxiliaries t >= |e| metering the per-input perturbation mass.
    LinearProgram lp(Sense::Minimize);
    for (std::size_t i = 0; i < range.size(); ++i) {
        lp.add_variable("yp" + std::to_string(i), true, Rat(1));
        lp.add_variable("ym" + std::to_string(i), true, Rat(1));
    }
    const std::size_t e0 = 2 * range.size();
    for (std::size_t t = 0; t < cells; ++t)
        lp.add_variable("e" + std::to_string(t), false, Rat(0));
    const std::size_t t0 = e0 + cells;
    for (std::size_t t = 0; t < cells; ++t)
        lp.add_variable("t" + std::to_string(t), true, Rat(0));

    std::vector<std::size_t> cell_row(cells);
    for (std::size_t t = 0; t < cells; ++t) {
        cell_row[t] = lp.add_row("cell" + std::to_string(t), Rel::Eq, p.table[t]);
        lp.set_coeff(cell_row[t], e0 + t, Rat(-1));
    }
    for (std::size_t i = 0; i < range.size(); ++i)
        for (const std::size_t t : support_cells(sc, range.at(i), false)) {
            lp.set_coeff(cell_row[t], 2 * i, Rat(1));
            lp.set_coeff(cell_row[t], 2 * i + 1, Rat(-1));
        }
    for (std::size_t x = 0; x < sc.nx(); ++x)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            const std::size_t zero = lp.add_row("zsum" + std::to_string(x * sc.ny() + y),
                                                Rel::Eq, Rat(0));
            const std::size_t mass = lp.add_row("mass" + std::to_string(x * sc.ny() + y),
                                                Rel::Le, eps);
            for (std::size_t a = 0; a < sc.na(); ++a)
                for (std::size_t b = 0; b < sc.nb(); ++b) {
                    const std::size_t t = sc.index(a, b, x, y);
                    lp.set_coeff(zero, e0 + t, Rat(1));
                    lp.set_coeff(mass, t0 + t, Rat(1));
                }
        }
    for (std::size_t t = 0; t < cells; ++t) {
        const std::size_t lo = lp.add_row("keep" + std::to_string(t), Rel::Ge, -p.table[t]);
        lp.set_coeff(lo, e0 + t, Rat(1));
        const std::size_t abs_hi = lp.add_row("abs_hi" + std::to_string(t), Rel::Ge, Rat(0));
        lp.set_coeff(abs_hi, t0 + t, Rat(1));
        lp.set_coeff(abs_hi, e0 + t, Rat(-1));
        const std::size_t abs_lo = lp.add_row("abs_lo" + std::to_string(t), Rel::Ge, Rat(0));
        lp.set_coeff(abs_lo, t0 + t, Rat(1));
        lp.set_coeff(abs_lo, e0 + t, Rat(1));
    }
    const LpSolution sol = solve(lp);
    verify(sol.status == LpStatus::Optimal, "perturbed decomposition LP must be solvable");

    BoundResult result;
    result.value = sol.objective;
    result.beta = sol.objective;
    result.certificate = BellFunctional(sc);
    for (std::size_t t = 0; t < cells; ++t)
        result.certificate.coeffs[t] = sol.dual[cell_row[t]];

    DistributionFamily shifted(sc);
    for (std::size_t t = 0; t < cells; ++t)
        shifted.table[t] = p.table[t] + sol.primal[e0 + t];
    shifted.validate();
    verify(is_nonsignaling(shifted).nonsignaling, "perturbed family left the nonsignaling set");
    verify(l1_distance(p, shifted) <= eps, "perturbation mass exceeded eps");

    std::vector<Rat> rebuilt(cells, Rat(0));
    Rat total_mass(0);
    for (std::size_t i = 0; i < range.size(); ++i) {
        const Rat w = sol.primal[2 * i] - sol.primal[2 * i + 1];
        if (w == 0) continue;
        total_mass += w > 0 ? w : -w;
        for (const std::size_t t : support_cells(sc, range.at(i), false)) rebuilt[t] += w;
        if (options.want_witness) result.witness.emplace_back(range.at(i), w);
    }
    verify(rebuilt == shifted.table, "witness does not reconstruct the perturbed family");
    verify(total_mass == result.value, "witness mass disagrees with the LP value");

    // Certificate sandwich: normalized, attains the value on the perturbed
    // family, and by duality stays >= value on the whole ball (sanity-check
    // the center).
    verify(max_bell_over_ldet(result.certificate, false, true, options.budget).value <= 1,
           "nu_eps certificate exceeds 1 on a deterministic strategy");
    verify(evaluate(result.certificate, shifted) == result.value,
           "nu_eps certificate does not attain the value on the perturbed family");
    verify(evaluate(result.certificate, p) >= result.value,
           "nu_eps certificate fell below the value at the center");
    result.perturbed = std::move(shifted);
    return result;
}

BoundResult eff_eps(const DistributionFamily& p, const Rat& eps, const BoundOptions& options) {
    p.validate();
    BELLBOUND_CHECK(!p.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "eff_eps is defined for abort-free families");
    BELLBOUND_CHECK(eps >= 0 && eps <= 1, ErrorCode::InvalidArgument,
                    "eps must lie in [0, 1]");
    const Scenario& sc = p.scenario;
    const Scenario ext = sc.with_abort();
    const LdetRange range(ext, true, options.budget);

    // Change of variables w = zeta*mu, e = zeta*Delta turns the quotient
    // program into a single LP: maximize the scale zeta subject to the
    // weights reproducing zeta*p + e on non-abort cells.
    LinearProgram lp(Sense::Maximize);
    for (std::size_t i = 0; i < range.size(); ++i)
        lp.add_variable("w" + std::to_string(i), true, Rat(0));
    const std::size_t zvar = lp.add_variable("zeta", true, Rat(1));
    // Non-abort cells, indexed densely in declaration order.
    std::vector<std::size_t> plain_cells;
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t b = 0; b < sc.nb(); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    plain_cells.push_back(ext.index(a, b, x, y));
    std::vector<std::size_t> evar(ext.table_size(), SIZE_MAX), tvar(ext.table_size(), SIZE_MAX);
    for (const std::size_t t : plain_cells)
        evar[t] = lp.add_variable("e" + std::to_string(t), false, Rat(0));
    for (const std::size_t t : plain_cells)
        tvar[t] = lp.add_variable("t" + std::to_string(t), true, Rat(0));

    std::vector<std::size_t> cell_row(ext.table_size(), SIZE_MAX);
    for (const std::size_t t : plain_cells) {
        cell_row[t] = lp.add_row("cell" + std::to_string(t), Rel::Eq, Rat(0));
        lp.set_coeff(cell_row[t], evar[t], Rat(-1));
    }
    // zeta multiplies p inside the cell rows.
    {
        std::size_t k = 0;
        for (std::size_t a = 0; a < sc.na(); ++a)
            for (std::size_t b = 0; b < sc.nb(); ++b)
                for (std::size_t x = 0; x < sc.nx(); ++x)
                    for (std::size_t y = 0; y < sc.ny(); ++y, ++k)
                        if (p.at(a, b, x, y) != 0)
                            lp.set_coeff(cell_row[plain_cells[k]], zvar, -p.at(a, b, x, y));
    }
    for (std::size_t i = 0; i < range.size(); ++i)
        for (const std::size_t t : support_cells(ext, range.at(i), true))
            lp.set_coeff(cell_row[t], i, Rat(1));
    const std::size_t norm = lp.add_row("norm", Rel::Eq, Rat(1));
    for (std::size_t i = 0; i < range.size(); ++i) lp.set_coeff(norm, i, Rat(1));
    for (std::size_t x = 0; x < sc.nx(); ++x)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            const std::size_t zero = lp.add_row("zsum" + std::to_string(x * sc.ny() + y),
                                                Rel::Eq, Rat(0));
            const std::size_t mass = lp.add_row("mass" + std::to_string(x * sc.ny() + y),
                                                Rel::Le, Rat(0));
            for (std::size_t a = 0; a < sc.na(); ++a)
                for (std::size_t b = 0; b < sc.nb(); ++b) {
                    const std::size_t t = ext.index(a, b, x, y);
                    lp.set_coeff(zero, evar[t], Rat(1));
                    lp.set_coeff(mass, tvar[t], Rat(1));
                }
            if (eps != 0) lp.set_coeff(mass, zvar, -eps);
        }
    for (const std::size_t t : plain_cells) {
        const std::size_t hi = lp.add_row("abs_hi" + std::to_string(t), Rel::Le, Rat(0));
        lp.set_coeff(hi, evar[t], Rat(1));
        lp.set_coeff(hi, tvar[t], Rat(-1));
        const std::size_t lo = lp.add_row("abs_lo" + std::to_string(t), Rel::Le, Rat(0));
        lp.set_coeff(lo, evar[t], Rat(-1));
        lp.set_coeff(lo, tvar[t], Rat(-1));
    }

    const LpSolution sol = solve(lp);
    verify(sol.status == LpStatus::Optimal, "scale LP must be solvable for a valid family");
    const Rat zeta_star = sol.primal[zvar];

    BoundResult result;
    if (zeta_star == 0) {
        result.infinite = true;
        result.diagnostic =
            "no positive scale admits a strategy mixture within the perturbation "
            "budget; the bound is unbounded above";
        return result;
    }
    result.value = Rat(1) / zeta_star;
    result.beta = result.value;
    result.zeta = zeta_star;

    // The cell-row duals, rescaled by -1/zeta, are an inefficiency-resistant
    // functional guaranteeing beta on the whole perturbation polytope.
    result.certificate = BellFunctional(sc);
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t b = 0; b < sc.nb(); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    result.certificate.at(a, b, x, y) =
                        -sol.dual[cell_row[ext.index(a, b, x, y)]] / zeta_star;

    DistributionFamily shifted(sc);
    for (std::size_t a = 0; a < sc.na(); ++a)
        for (std::size_t b = 0; b < sc.nb(); ++b)
            for (std::size_t x = 0; x < sc.nx(); ++x)
                for (std::size_t y = 0; y < sc.ny(); ++y)
                    shifted.at(a, b, x, y) =
                        p.at(a, b, x, y) +
                        sol.primal[evar[ext.index(a, b, x, y)]] / zeta_star;
    shifted.validate();
    verify(l1_distance(p, shifted) <= eps, "perturbation mass exceeded eps");

    std::vector<Rat> rebuilt(ext.table_size(), Rat(0));
    Rat total(0);
    for (std::size_t i = 0; i < range.size(); ++i) {
        const Rat& w = sol.primal[i];
        if (w == 0) continue;
        verify(w > 0, "negative weight escaped the LP");
        total += w;
        for (const std::size_t t : support_cells(ext, range.at(i), true)) rebuilt[t] += w;
        if (options.want_witness) result.witness.emplace_back(range.at(i), w);
    }
    verify(total == 1, "mixture weights do not sum to one");
    // Reconstruction: the weights reproduce zeta * (p + Delta) on non-abort
    // cells, with the same cell indexing on both scenarios.
    {
        std::size_t k = 0;
        for (std::size_t a = 0; a < sc.na(); ++a)
            for (std::size_t b = 0; b < sc.nb(); ++b)
                for (std::size_t x = 0; x < sc.nx(); ++x)
                    for (std::size_t y = 0; y < sc.ny(); ++y, ++k)
                        verify(rebuilt[plain_cells[k]] == zeta_star * shifted.at(a, b, x, y),
                               "weights do not reconstruct the scaled perturbed family");
    }

    verify(max_bell_over_ldet(result.certificate, true, false, options.budget).value <= 1,
           "eff_eps certificate exceeds 1 on an abort-extended strategy");
    verify(evaluate(result.certificate, shifted) >= result.beta,
           "eff_eps certificate fell below beta on the perturbed family");
    verify(evaluate(result.certificate, p) >= result.beta,
           "eff_eps certificate fell below beta at the center");
    result.perturbed = std::move(shifted);
    return result;
}

DeltaExtremeRange::DeltaExtremeRange(Scenario scenario, Rat eps, std::size_t budget)
    : scenario_(std::move(scenario)), eps_(std::move(eps)) {
    BELLBOUND_CHECK(!scenario_.abort_allowed, ErrorCode::InvalidArgument,
                    "perturbations act on abort-free scenarios");
    BELLBOUND_CHECK(eps_ >= 0, ErrorCode::InvalidArgument, "eps must be nonnegative");
    cells_ = scenario_.na() * scenario_.nb();
    per_block_ = eps_ == 0 ? 1 : cells_ * (cells_ - 1) + 1;
    const std::size_t blocks = scenario_.nx() * scenario_.ny();
    mpz_class count;
    mpz_ui_pow_ui(count.get_mpz_t(), per_block_, blocks);
    if (count > mpz_class(static_cast<unsigned long>(budget)))
        throw Error(ErrorCode::BudgetExceeded,
                    "would enumerate " + count.get_str() + " polytope vertices, budget is " +
                        std::to_string(budget));
    size_ = count.get_ui();
}

NoisePolytopePoint DeltaExtremeRange::at(std::size_t index) const {
    BELLBOUND_CHECK(index < size_, ErrorCode::InvalidArgument, "vertex index out of range");
    NoisePolytopePoint point;
    point.delta.assign(scenario_.table_size(), Rat(0));
    const Rat half = eps_ / 2;
    // Blocks in (x, y) lexicographic order, first block most significant.
    for (std::size_t blk = scenario_.nx() * scenario_.ny(); blk-- > 0;) {
        const std::size_t digit = index % per_block_;
        index /= per_block_;
        if (digit == 0) continue;
        const std::size_t x = blk / scenario_.ny();
        const std::size_t y = blk % scenario_.ny();
        const std::size_t pair = digit - 1;
        const std::size_t c1 = pair / (cells_ - 1);
        const std::size_t off = pair % (cells_ - 1);
        const std::size_t c2 = off < c1 ? off : off + 1;
        point.delta[scenario_.index(c1 / scenario_.nb(), c1 % scenario_.nb(), x, y)] = half;
        point.delta[scenario_.index(c2 / scenario_.nb(), c2 % scenario_.nb(), x, y)] = -half;
    }
    return point;
}

QeffReport check_qeff_feasible(const DistributionFamily& p, const DistributionFamily& q,
                               const Rat& zeta) {
    p.validate();
    q.validate();
    BELLBOUND_CHECK(zeta > 0, ErrorCode::InvalidArgument, "zeta must be positive");
    BELLBOUND_CHECK(!p.scenario.abort_allowed, ErrorCode::InvalidArgument,
                    "the target family must be abort-free");
    require_same_scenario(p.scenario, q.scenario.without_abort(), "check_qeff_feasible");

    QeffReport report;
    for (std::size_t a = 0; a < p.scenario.na(); ++a)
        for (std::size_t b = 0; b < p.scenario.nb(); ++b)
            for (std::size_t x = 0; x < p.scenario.nx(); ++x)
                for (std::size_t y = 0; y < p.scenario.ny(); ++y) {
                    const Rat expected = zeta * p.at(a, b, x, y);
                    if (q.at(a, b, x, y) != expected) {
                        report.feasible = false;
                        report.mismatch = {{a, b, x, y}};
                        report.expected = expected;
                        report.found = q.at(a, b, x, y);
                        return report;
                    }
                }
    report.feasible = true;
    report.bound = Rat(1) / zeta;
    return report;
}

}  // namespace bellbound
