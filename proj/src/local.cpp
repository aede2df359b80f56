#include "bellbound/local.hpp"

#include <limits>
#include <string>

#include "bellbound/error.hpp"
#include "bellbound/lp.hpp"

namespace bellbound {

namespace {

// Exact strategy count as a big integer, for budget messages that stay
// truthful when the product overflows size_t.
mpz_class pow_count(std::size_t base, std::size_t exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), base, exp);
    return out;
}

std::vector<std::size_t> decode_map(std::size_t index, std::size_t base, std::size_t length) {
    std::vector<std::size_t> map(length, 0);
    for (std::size_t k = length; k-- > 0;) {
        map[k] = index % base;
        index /= base;
    }
    return map;
}

}  // namespace

LdetRange::LdetRange(Scenario scenario, bool with_abort, std::size_t budget)
    : scenario_(std::move(scenario)), with_abort_(with_abort) {
    BELLBOUND_CHECK(!with_abort_ || scenario_.abort_allowed, ErrorCode::InvalidArgument,
                    "abort strategies need an abort-enabled scenario");
    base_a_ = with_abort_ ? scenario_.na_full() : scenario_.na();
    base_b_ = with_abort_ ? scenario_.nb_full() : scenario_.nb();
    const mpz_class count = pow_count(base_a_, scenario_.nx()) * pow_count(base_b_, scenario_.ny());
    if (count > mpz_class(static_cast<unsigned long>(budget)))
        throw Error(ErrorCode::BudgetExceeded,
                    "would enumerate " + count.get_str() + " strategies, budget is " +
                        std::to_string(budget));
    size_a_ = pow_count(base_a_, scenario_.nx()).get_ui();
    size_b_ = pow_count(base_b_, scenario_.ny()).get_ui();
    size_ = size_a_ * size_b_;
}

LocalDetStrategy LdetRange::at(std::size_t index) const {
    BELLBOUND_CHECK(index < size_, ErrorCode::InvalidArgument, "strategy index out of range");
    return LocalDetStrategy{map_a_at(index / size_b_), map_b_at(index % size_b_)};
}

std::vector<std::size_t> LdetRange::map_a_at(std::size_t index_a) const {
    BELLBOUND_CHECK(index_a < size_a_, ErrorCode::InvalidArgument, "map index out of range");
    return decode_map(index_a, base_a_, scenario_.nx());
}

std::vector<std::size_t> LdetRange::map_b_at(std::size_t index_b) const {
    BELLBOUND_CHECK(index_b < size_b_, ErrorCode::InvalidArgument, "map index out of range");
    return decode_map(index_b, base_b_, scenario_.ny());
}

DistributionFamily strategy_to_distribution(const Scenario& scenario,
                                            const LocalDetStrategy& s) {
    BELLBOUND_CHECK(s.map_a.size() == scenario.nx() && s.map_b.size() == scenario.ny(),
                    ErrorCode::InvalidArgument, "strategy does not fit the scenario");
    DistributionFamily p(scenario);
    for (std::size_t x = 0; x < scenario.nx(); ++x) {
        BELLBOUND_CHECK(s.map_a[x] < scenario.na_full(), ErrorCode::InvalidArgument,
                        "strategy output out of range on the first side");
        for (std::size_t y = 0; y < scenario.ny(); ++y) {
            BELLBOUND_CHECK(s.map_b[y] < scenario.nb_full(), ErrorCode::InvalidArgument,
                            "strategy output out of range on the second side");
            p.at(s.map_a[x], s.map_b[y], x, y) = 1;
        }
    }
    return p;
}

namespace {

Rat evaluate_strategy(const BellFunctional& b, const LocalDetStrategy& s, EvalMode mode) {
    const Scenario& sc = b.scenario;
    Rat total(0);
    for (std::size_t x = 0; x < sc.nx(); ++x)
        for (std::size_t y = 0; y < sc.ny(); ++y) {
            if (mode == EvalMode::Standard &&
                (sc.is_abort_a(s.map_a[x]) || sc.is_abort_b(s.map_b[y])))
                continue;
            total += b.at(s.map_a[x], s.map_b[y], x, y);
        }
    return total;
}

bool strategy_lex_less(const LocalDetStrategy& lhs, const LocalDetStrategy& rhs) {
    if (lhs.map_a != rhs.map_a) return lhs.map_a < rhs.map_a;
    return lhs.map_b < rhs.map_b;
}

struct Incumbent {
    bool set = false;
    Rat value;
    LocalDetStrategy strategy;

    void offer(const Rat& v, LocalDetStrategy s) {
        if (!set || v > value || (v == value && strategy_lex_less(s, strategy))) {
            set = true;
            value = v;
            strategy = std::move(s);
        }
    }
};

}  // namespace

LdetMax max_bell_over_ldet(const BellFunctional& b, bool with_abort, bool absolute,
                           std::size_t budget, EvalMode mode, MaxMethod method) {
    // Lift the functional onto the abort-extended scenario when needed; the
    // new abort cells carry zero weight, which matches both eval modes.
    BellFunctional ext = b;
    if (with_abort && !b.scenario.abort_allowed) {
        ext = BellFunctional(b.scenario.with_abort());
        const Scenario& sc = b.scenario;
        for (std::size_t a = 0; a < sc.na_full(); ++a)
            for (std::size_t bb = 0; bb < sc.nb_full(); ++bb)
                for (std::size_t x = 0; x < sc.nx(); ++x)
                    for (std::size_t y = 0; y < sc.ny(); ++y)
                        ext.at(a, bb, x, y) = b.at(a, bb, x, y);
    }
    const Scenario& sc = ext.scenario;

    if (method == MaxMethod::Naive) {
        const LdetRange range(sc, with_abort, budget);
        Incumbent best;
        for (std::size_t i = 0; i < range.size(); ++i) {
            const LocalDetStrategy s = range.at(i);
            Rat v = evaluate_strategy(ext, s, mode);
            if (absolute && v < 0) v = -v;
            // Ascending index is ascending lex order, so offer() keeps the
            // first attaining strategy.
            best.offer(v, s);
        }
        return LdetMax{best.value, best.strategy, range.size()};
    }

    // Row decomposition: fix Bob's map, then Alice's per-input choices are
    // independent. The budget meters the outer Bob-map loop, which dominates.
    const LdetRange range(sc, with_abort, std::numeric_limits<std::size_t>::max());
    BELLBOUND_CHECK(range.size_b() <= budget, ErrorCode::BudgetExceeded,
                    "would scan " + std::to_string(range.size_b()) +
                        " second-side maps, budget is " + std::to_string(budget));
    const std::size_t base_a = with_abort ? sc.na_full() : sc.na();
    Incumbent best;
    std::vector<std::vector<Rat>> row(sc.nx(), std::vector<Rat>(base_a));
    for (std::size_t ib = 0; ib < range.size_b(); ++ib) {
        const std::vector<std::size_t> map_b = range.map_b_at(ib);
        for (std::size_t x = 0; x < sc.nx(); ++x)
            for (std::size_t a = 0; a < base_a; ++a) {
                Rat sum(0);
                for (std::size_t y = 0; y < sc.ny(); ++y) {
                    if (mode == EvalMode::Standard &&
                        (sc.is_abort_a(a) || sc.is_abort_b(map_b[y])))
                        continue;
                    sum += ext.at(a, map_b[y], x, y);
                }
                row[x][a] = std::move(sum);
            }
        // Maximize (and, when absolute, also minimize) over Alice's map,
        // breaking per-input ties toward the smallest output index so the
        // chosen map is the lexicographically first argmax for this Bob map.
        LocalDetStrategy plus{std::vector<std::size_t>(sc.nx(), 0), map_b};
        LocalDetStrategy minus{std::vector<std::size_t>(sc.nx(), 0), map_b};
        Rat plus_val(0), minus_val(0);
        for (std::size_t x = 0; x < sc.nx(); ++x) {
            std::size_t arg_hi = 0, arg_lo = 0;
            for (std::size_t a = 1; a < base_a; ++a) {
                if (row[x][a] > row[x][arg_hi]) arg_hi = a;
                if (row[x][a] < row[x][arg_lo]) arg_lo = a;
            }
            plus.map_a[x] = arg_hi;
            plus_val += row[x][arg_hi];
            minus.map_a[x] = arg_lo;
            minus_val += row[x][arg_lo];
        }
        best.offer(plus_val, std::move(plus));
        if (absolute) best.offer(-minus_val, std::move(minus));
    }
    return LdetMax{best.value, best.strategy, range.size()};
}

LocalityReport is_local(const DistributionFamily& p, bool with_abort, std::size_t budget) {
    DistributionFamily target = p;
    if (with_abort && !p.scenario.abort_allowed) {
        // Treat an abort-free family as a member of the abort-extended set.
        target = DistributionFamily(p.scenario.with_abort());
        const Scenario& sc = p.scenario;
        for (std::size_t a = 0; a < sc.na_full(); ++a)
            for (std::size_t bb = 0; bb < sc.nb_full(); ++bb)
                for (std::size_t x = 0; x < sc.nx(); ++x)
                    for (std::size_t y = 0; y < sc.ny(); ++y)
                        target.at(a, bb, x, y) = p.at(a, bb, x, y);
    }
    const Scenario& sc = target.scenario;
    const LdetRange range(sc, with_abort, budget);

    LinearProgram lp(Sense::Minimize);
    for (std::size_t i = 0; i < range.size(); ++i)
        lp.add_variable("w" + std::to_string(i), true, Rat(0));
    std::vector<std::size_t> cell_row(sc.table_size());
    for (std::size_t t = 0; t < sc.table_size(); ++t)
        cell_row[t] = lp.add_row("cell" + std::to_string(t), Rel::Eq, target.table[t]);
    const std::size_t norm = lp.add_row("norm", Rel::Eq, Rat(1));
    for (std::size_t i = 0; i < range.size(); ++i) {
        const LocalDetStrategy s = range.at(i);
        for (std::size_t x = 0; x < sc.nx(); ++x)
            for (std::size_t y = 0; y < sc.ny(); ++y)
                lp.set_coeff(cell_row[sc.index(s.map_a[x], s.map_b[y], x, y)], i, Rat(1));
        lp.set_coeff(norm, i, Rat(1));
    }

    const LpSolution sol = solve(lp);
    BELLBOUND_CHECK(sol.status == LpStatus::Optimal || sol.status == LpStatus::Infeasible,
                    ErrorCode::BudgetExceeded, "membership LP hit the pivot cap");

    LocalityReport report;
    if (sol.status == LpStatus::Optimal) {
        report.local = true;
        for (std::size_t i = 0; i < range.size(); ++i)
            if (sol.primal[i] != 0) report.weights.emplace_back(range.at(i), sol.primal[i]);
        return report;
    }
    // Farkas weights on the table rows form a functional with
    // B(l) <= -y_norm < B(p) for every strategy l; already solver-verified.
    report.local = false;
    BellFunctional sep(sc);
    for (std::size_t t = 0; t < sc.table_size(); ++t) sep.coeffs[t] = sol.farkas[cell_row[t]];
    report.separating_threshold = -sol.farkas[norm];
    report.separating_value = evaluate_full(sep, target);
    report.separating = std::move(sep);
    return report;
}

}  // namespace bellbound
