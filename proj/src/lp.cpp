#include "bellbound/lp.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "bellbound/error.hpp"

namespace bellbound {

std::size_t LinearProgram::add_variable(const std::string& name, bool nonneg, Rat objective) {
    variables_.push_back(Variable{name, nonneg, std::move(objective)});
    columns_.emplace_back();
    return variables_.size() - 1;
}

std::size_t LinearProgram::add_row(const std::string& name, Rel rel, Rat rhs) {
    rows_.push_back(Row{name, rel, std::move(rhs)});
    return rows_.size() - 1;
}

void LinearProgram::set_coeff(std::size_t row, std::size_t col, Rat value) {
    BELLBOUND_CHECK(row < rows_.size(), ErrorCode::InvalidArgument, "set_coeff: bad row");
    BELLBOUND_CHECK(col < columns_.size(), ErrorCode::InvalidArgument, "set_coeff: bad column");
    if (value == 0) return;
    columns_[col].emplace_back(row, std::move(value));
}

const char* lp_status_name(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Limit: return "limit";
    }
    return "unknown";
}

Rat LpSolution::primal_value(const LinearProgram& lp, const std::string& variable_name) const {
    for (std::size_t j = 0; j < lp.num_variables(); ++j)
        if (lp.variable(j).name == variable_name) return primal.at(j);
    throw Error(ErrorCode::InvalidArgument, "no variable named '" + variable_name + "'");
}

Rat LpSolution::dual_value(const LinearProgram& lp, const std::string& row_name) const {
    for (std::size_t i = 0; i < lp.num_rows(); ++i)
        if (lp.row(i).name == row_name) return dual.at(i);
    throw Error(ErrorCode::InvalidArgument, "no row named '" + row_name + "'");
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct SparseCol {
    std::vector<std::pair<std::size_t, Rat>> entries;  // sorted by row
    Rat cost;                                          // standardized (min) cost
};

// min c.x s.t. Ax = b, x >= 0, b >= 0, plus the bookkeeping needed to map
// primal and dual values back onto the caller's model.
struct StandardForm {
    std::size_t m = 0;
    std::vector<Rat> b;
    std::vector<int> row_sign;           // -1 where the original row was negated
    std::vector<SparseCol> cols;         // structural splits, then slacks
    std::vector<std::size_t> var_pos;    // declared var -> column
    std::vector<std::size_t> var_neg;    // declared var -> negative split, or kNone
    std::vector<std::size_t> slack_col;  // per row; kNone on equality rows
    std::vector<int> slack_sign;         // slack coefficient after row normalization
};

StandardForm standardize(const LinearProgram& lp) {
    StandardForm sf;
    sf.m = lp.num_rows();
    sf.b.resize(sf.m);
    sf.row_sign.assign(sf.m, 1);
    for (std::size_t i = 0; i < sf.m; ++i) {
        const Rat& rhs = lp.row(i).rhs;
        if (rhs < 0) {
            sf.row_sign[i] = -1;
            sf.b[i] = -rhs;
        } else {
            sf.b[i] = rhs;
        }
    }
    const int obj_sign = (lp.sense() == Sense::Maximize) ? -1 : 1;
    sf.var_pos.resize(lp.num_variables());
    sf.var_neg.assign(lp.num_variables(), kNone);
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        auto entries = lp.column(j);
        std::sort(entries.begin(), entries.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        for (std::size_t k = 1; k < entries.size(); ++k)
            if (entries[k].first == entries[k - 1].first)
                throw Error(ErrorCode::InvalidArgument,
                            "duplicate coefficient for variable '" + lp.variable(j).name +
                                "' in row '" + lp.row(entries[k].first).name + "'");
        SparseCol pos;
        pos.cost = Rat(obj_sign) * lp.variable(j).objective;
        for (const auto& [row, val] : entries)
            pos.entries.emplace_back(row, Rat(sf.row_sign[row]) * val);
        sf.var_pos[j] = sf.cols.size();
        sf.cols.push_back(pos);
        if (!lp.variable(j).nonneg) {
            SparseCol neg;
            neg.cost = -sf.cols.back().cost;
            for (const auto& [row, val] : sf.cols[sf.var_pos[j]].entries)
                neg.entries.emplace_back(row, -val);
            sf.var_neg[j] = sf.cols.size();
            sf.cols.push_back(std::move(neg));
        }
    }
    sf.slack_col.assign(sf.m, kNone);
    sf.slack_sign.assign(sf.m, 0);
    for (std::size_t i = 0; i < sf.m; ++i) {
        const Rel rel = lp.row(i).rel;
        if (rel == Rel::Eq) continue;
        SparseCol slack;
        slack.cost = Rat(0);
        const int dir = (rel == Rel::Le) ? 1 : -1;
        sf.slack_col[i] = sf.cols.size();
        sf.slack_sign[i] = sf.row_sign[i] * dir;
        slack.entries.emplace_back(i, Rat(sf.slack_sign[i]));
        sf.cols.push_back(std::move(slack));
    }
    return sf;
}

// Revised simplex with an explicit rational basis inverse and Bland's rule.
// Degenerate polytopes (convex hulls of deterministic strategies) cycle under
// cheaper rules, so smallest-index selection is load-bearing here.
class Simplex {
  public:
    Simplex(const StandardForm& sf, long max_pivots)
        : sf_(sf), m_(sf.m), n_(sf.cols.size()), max_pivots_(max_pivots) {
        binv_.assign(m_, std::vector<Rat>(m_, Rat(0)));
        for (std::size_t i = 0; i < m_; ++i) binv_[i][i] = 1;
        basis_.resize(m_);
        is_basic_.assign(n_ + m_, 0);
        xb_ = sf_.b;
        for (std::size_t i = 0; i < m_; ++i) {
            // A +1 slack is an identity column, so it can seed the basis and
            // spare phase 1 a pivot; otherwise fall back to an artificial.
            if (sf_.slack_col[i] != kNone && sf_.slack_sign[i] == 1)
                basis_[i] = sf_.slack_col[i];
            else
                basis_[i] = n_ + i;
            is_basic_[basis_[i]] = 1;
        }
    }

    // Phase 1 minimizes the artificial sum; phase 2 the real cost. Artificial
    // columns never re-enter once nonbasic.
    LpStatus run_two_phase() {
        bool any_artificial = false;
        for (std::size_t i = 0; i < m_; ++i) any_artificial |= (basis_[i] >= n_);
        if (any_artificial) {
            std::vector<Rat> phase1_cost(n_ + m_, Rat(0));
            for (std::size_t i = 0; i < m_; ++i) phase1_cost[n_ + i] = 1;
            const LpStatus p1 = iterate(phase1_cost);
            if (p1 == LpStatus::Limit) return p1;
            BELLBOUND_CHECK(p1 == LpStatus::Optimal, ErrorCode::GuaranteeViolated,
                            "phase 1 cannot be unbounded");
            Rat infeas(0);
            for (std::size_t i = 0; i < m_; ++i)
                if (basis_[i] >= n_) infeas += xb_[i];
            if (infeas > 0) {
                farkas_y_ = dual_values(phase1_cost);
                return LpStatus::Infeasible;
            }
            drive_out_artificials();
        }
        std::vector<Rat> phase2_cost(n_ + m_, Rat(0));
        for (std::size_t j = 0; j < n_; ++j) phase2_cost[j] = sf_.cols[j].cost;
        const LpStatus p2 = iterate(phase2_cost);
        if (p2 == LpStatus::Optimal) dual_y_ = dual_values(phase2_cost);
        return p2;
    }

    const std::vector<Rat>& farkas_y() const { return farkas_y_; }
    const std::vector<Rat>& dual_y() const { return dual_y_; }
    long pivots() const { return pivots_; }

    std::vector<Rat> primal_std() const {
        std::vector<Rat> x(n_, Rat(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = xb_[i];
        return x;
    }

  private:
    // Column of the working matrix, artificials included.
    void column_entries(std::size_t j, std::vector<std::pair<std::size_t, Rat>>& out) const {
        out.clear();
        if (j < n_) {
            for (const auto& e : sf_.cols[j].entries) out.push_back(e);
        } else {
            out.emplace_back(j - n_, Rat(1));
        }
    }

    std::vector<Rat> dual_values(const std::vector<Rat>& cost) const {
        std::vector<Rat> y(m_, Rat(0));
        for (std::size_t r = 0; r < m_; ++r) {
            const Rat& cb = cost[basis_[r]];
            if (cb == 0) continue;
            for (std::size_t i = 0; i < m_; ++i) {
                if (binv_[r][i] == 0) continue;
                y[i] += cb * binv_[r][i];
            }
        }
        return y;
    }

    LpStatus iterate(const std::vector<Rat>& cost) {
        std::vector<std::pair<std::size_t, Rat>> col;
        while (true) {
            if (pivots_ >= max_pivots_) return LpStatus::Limit;
            const std::vector<Rat> y = dual_values(cost);
            // Bland: first (smallest-index) column with negative reduced cost.
            std::size_t entering = kNone;
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic_[j]) continue;
                Rat rc = cost[j];
                for (const auto& [row, val] : sf_.cols[j].entries) {
                    if (y[row] == 0) continue;
                    rc -= y[row] * val;
                }
                if (rc < 0) {
                    entering = j;
                    break;
                }
            }
            if (entering == kNone) return LpStatus::Optimal;
            column_entries(entering, col);
            std::vector<Rat> d(m_, Rat(0));
            for (std::size_t i = 0; i < m_; ++i) {
                Rat acc(0);
                for (const auto& [row, val] : col) {
                    if (binv_[i][row] == 0) continue;
                    acc += binv_[i][row] * val;
                }
                d[i] = std::move(acc);
            }
            // Ratio test; ties leave the smallest basic variable index.
            std::size_t leave = kNone;
            Rat best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (d[i] <= 0) continue;
                Rat t = xb_[i] / d[i];
                if (leave == kNone || t < best || (t == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = std::move(t);
                }
            }
            if (leave == kNone) return LpStatus::Unbounded;
            pivot(entering, leave, d);
        }
    }

    void pivot(std::size_t entering, std::size_t leave, const std::vector<Rat>& d) {
        const Rat step = xb_[leave] / d[leave];
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave) continue;
            if (d[i] != 0) xb_[i] -= d[i] * step;
        }
        xb_[leave] = step;
        const Rat inv = Rat(1) / d[leave];
        for (std::size_t k = 0; k < m_; ++k) binv_[leave][k] *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave || d[i] == 0) continue;
            const Rat factor = d[i];
            for (std::size_t k = 0; k < m_; ++k) {
                if (binv_[leave][k] == 0) continue;
                binv_[i][k] -= factor * binv_[leave][k];
            }
        }
        is_basic_[basis_[leave]] = 0;
        is_basic_[entering] = 1;
        basis_[leave] = entering;
        ++pivots_;
    }

    // Pivot zero-valued artificials out where a structural column can take
    // their place; rows admitting none are redundant and keep a zero
    // artificial in the basis, which phase 2 never moves.
    void drive_out_artificials() {
        std::vector<std::pair<std::size_t, Rat>> col;
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            BELLBOUND_CHECK(xb_[r] == 0, ErrorCode::GuaranteeViolated,
                            "positive artificial after feasible phase 1");
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic_[j]) continue;
                column_entries(j, col);
                Rat dr(0);
                for (const auto& [row, val] : col) {
                    if (binv_[r][row] == 0) continue;
                    dr += binv_[r][row] * val;
                }
                if (dr == 0) continue;
                std::vector<Rat> d(m_, Rat(0));
                for (std::size_t i = 0; i < m_; ++i) {
                    Rat acc(0);
                    for (const auto& [row, val] : col) {
                        if (binv_[i][row] == 0) continue;
                        acc += binv_[i][row] * val;
                    }
                    d[i] = std::move(acc);
                }
                pivot(j, r, d);
                break;
            }
        }
    }

    const StandardForm& sf_;
    std::size_t m_;
    std::size_t n_;
    long max_pivots_;
    std::vector<std::vector<Rat>> binv_;
    std::vector<std::size_t> basis_;
    std::vector<char> is_basic_;
    std::vector<Rat> xb_;
    std::vector<Rat> farkas_y_;
    std::vector<Rat> dual_y_;
    long pivots_ = 0;
};

std::vector<Rat> row_activities(const LinearProgram& lp, const std::vector<Rat>& x) {
    std::vector<Rat> acc(lp.num_rows(), Rat(0));
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        if (x[j] == 0) continue;
        for (const auto& [row, val] : lp.column(j)) acc[row] += val * x[j];
    }
    return acc;
}

void verify_optimal(const LinearProgram& lp, const LpSolution& sol) {
    // Primal feasibility, dual feasibility, and exact objective equality;
    // together these certify optimality independently of the pivot path.
    for (std::size_t j = 0; j < lp.num_variables(); ++j)
        BELLBOUND_CHECK(!lp.variable(j).nonneg || sol.primal[j] >= 0,
                        ErrorCode::GuaranteeViolated, "negative primal value");
    Rat primal_obj(0);
    for (std::size_t j = 0; j < lp.num_variables(); ++j)
        primal_obj += lp.variable(j).objective * sol.primal[j];
    BELLBOUND_CHECK(primal_obj == sol.objective, ErrorCode::GuaranteeViolated,
                    "objective mismatch");
    Rat dual_obj(0);
    const std::vector<Rat> activities = row_activities(lp, sol.primal);
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        const auto& row = lp.row(i);
        const Rat& activity = activities[i];
        const bool feasible = (row.rel == Rel::Le)   ? activity <= row.rhs
                              : (row.rel == Rel::Ge) ? activity >= row.rhs
                                                     : activity == row.rhs;
        BELLBOUND_CHECK(feasible, ErrorCode::GuaranteeViolated,
                        "primal infeasible at row '" + row.name + "'");
        const Rat& y = sol.dual[i];
        if (row.rel != Rel::Eq && y != 0) {
            const bool le = (row.rel == Rel::Le);
            const bool want_pos = (lp.sense() == Sense::Maximize) == le;
            BELLBOUND_CHECK(want_pos ? y > 0 : y < 0, ErrorCode::GuaranteeViolated,
                            "dual sign violated at row '" + row.name + "'");
        }
        dual_obj += y * row.rhs;
    }
    BELLBOUND_CHECK(dual_obj == sol.objective, ErrorCode::GuaranteeViolated,
                    "strong duality violated");
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        Rat s(0);
        for (const auto& [row, val] : lp.column(j)) s += sol.dual[row] * val;
        const Rat& c = lp.variable(j).objective;
        const auto& var = lp.variable(j);
        if (var.nonneg) {
            const bool ok = (lp.sense() == Sense::Maximize) ? s >= c : s <= c;
            BELLBOUND_CHECK(ok, ErrorCode::GuaranteeViolated,
                            "dual infeasible at variable '" + var.name + "'");
        } else {
            BELLBOUND_CHECK(s == c, ErrorCode::GuaranteeViolated,
                            "dual equality violated at free variable '" + var.name + "'");
        }
    }
}

void verify_farkas(const LinearProgram& lp, const LpSolution& sol) {
    Rat yb(0);
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        const auto& row = lp.row(i);
        const Rat& y = sol.farkas[i];
        if (row.rel == Rel::Le)
            BELLBOUND_CHECK(y <= 0, ErrorCode::GuaranteeViolated, "farkas sign on <= row");
        if (row.rel == Rel::Ge)
            BELLBOUND_CHECK(y >= 0, ErrorCode::GuaranteeViolated, "farkas sign on >= row");
        yb += y * row.rhs;
    }
    BELLBOUND_CHECK(yb > 0, ErrorCode::GuaranteeViolated, "farkas rhs not positive");
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        Rat s(0);
        for (const auto& [row, val] : lp.column(j)) s += sol.farkas[row] * val;
        if (lp.variable(j).nonneg)
            BELLBOUND_CHECK(s <= 0, ErrorCode::GuaranteeViolated, "farkas column sign");
        else
            BELLBOUND_CHECK(s == 0, ErrorCode::GuaranteeViolated, "farkas free column");
    }
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& options) {
    const StandardForm sf = standardize(lp);
    Simplex simplex(sf, options.max_pivots);
    LpSolution sol;
    sol.status = simplex.run_two_phase();
    sol.pivots = simplex.pivots();
    if (sol.status == LpStatus::Infeasible) {
        sol.farkas.resize(lp.num_rows());
        const auto& y = simplex.farkas_y();
        // Phase 1 reduced costs give y with y.A <= 0 and y.b > 0 in
        // standardized space; undo the row sign flips for the caller.
        for (std::size_t i = 0; i < lp.num_rows(); ++i)
            sol.farkas[i] = Rat(sf.row_sign[i]) * y[i];
        if (options.verify_certificates) verify_farkas(lp, sol);
        return sol;
    }
    if (sol.status != LpStatus::Optimal) return sol;
    const std::vector<Rat> x = simplex.primal_std();
    sol.primal.resize(lp.num_variables());
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        sol.primal[j] = x[sf.var_pos[j]];
        if (sf.var_neg[j] != kNone) sol.primal[j] -= x[sf.var_neg[j]];
    }
    sol.objective = Rat(0);
    for (std::size_t j = 0; j < lp.num_variables(); ++j)
        sol.objective += lp.variable(j).objective * sol.primal[j];
    sol.dual.resize(lp.num_rows());
    const auto& y = simplex.dual_y();
    const int obj_sign = (lp.sense() == Sense::Maximize) ? -1 : 1;
    for (std::size_t i = 0; i < lp.num_rows(); ++i)
        sol.dual[i] = Rat(obj_sign * sf.row_sign[i]) * y[i];
    if (options.verify_certificates) verify_optimal(lp, sol);
    return sol;
}

std::string dump_lp(const LinearProgram& lp) {
    std::ostringstream out;
    out << (lp.sense() == Sense::Maximize ? "maximize:" : "minimize:");
    for (std::size_t j = 0; j < lp.num_variables(); ++j) {
        const auto& var = lp.variable(j);
        if (var.objective == 0) continue;
        out << " " << (var.objective > 0 ? "+" : "") << rat_to_string(var.objective) << " "
            << var.name;
    }
    out << "\n";
    // Row-major listing; columns store the matrix, so invert once.
    std::vector<std::vector<std::pair<std::size_t, Rat>>> by_row(lp.num_rows());
    for (std::size_t j = 0; j < lp.num_variables(); ++j)
        for (const auto& [row, val] : lp.column(j)) by_row[row].emplace_back(j, val);
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        const auto& row = lp.row(i);
        out << row.name << ":";
        for (const auto& [j, val] : by_row[i])
            out << " " << (val > 0 ? "+" : "") << rat_to_string(val) << " "
                << lp.variable(j).name;
        out << (row.rel == Rel::Le ? " <= " : row.rel == Rel::Ge ? " >= " : " = ")
            << rat_to_string(row.rhs) << "\n";
    }
    for (std::size_t j = 0; j < lp.num_variables(); ++j)
        if (!lp.variable(j).nonneg) out << lp.variable(j).name << " free\n";
    return out.str();
}

}  // namespace bellbound
