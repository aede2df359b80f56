#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bellbound/rat.hpp"

namespace bellbound {

enum class Sense { Maximize, Minimize };
enum class Rel { Le, Ge, Eq };

// Rich model: named rows and columns, exact rational data. Standard-form
// conversion (slacks, free-variable splits, row sign normalization) happens
// inside solve(); callers only ever see this model.
//
// Dual value conventions, used by every bound module when reading
// certificates off row names:
//   Maximize: sum_i y_i b_i = objective, sum_i y_i a_ij >= c_j for
//             nonnegative variables (= for free), y_i >= 0 on <= rows,
//             y_i <= 0 on >= rows, free on = rows.
//   Minimize: sum_i y_i b_i = objective, sum_i y_i a_ij <= c_j for
//             nonnegative variables (= for free), y_i >= 0 on >= rows,
//             y_i <= 0 on <= rows, free on = rows.
// Farkas certificates (infeasible case) are reported on the original rows:
//   y_i <= 0 on <= rows, y_i >= 0 on >= rows, free on = rows;
//   sum_i y_i a_ij <= 0 for every nonnegative variable (= 0 for free);
//   sum_i y_i b_i > 0.
class LinearProgram {
  public:
    struct Variable {
        std::string name;
        bool nonneg = true;
        Rat objective;
    };
    struct Row {
        std::string name;
        Rel rel = Rel::Eq;
        Rat rhs;
    };

    explicit LinearProgram(Sense sense) : sense_(sense) {}

    std::size_t add_variable(const std::string& name, bool nonneg, Rat objective = Rat(0));
    std::size_t add_row(const std::string& name, Rel rel, Rat rhs);
    // Duplicate (row, col) pairs are rejected at solve time.
    void set_coeff(std::size_t row, std::size_t col, Rat value);

    Sense sense() const { return sense_; }
    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_rows() const { return rows_.size(); }
    const Variable& variable(std::size_t j) const { return variables_[j]; }
    const Row& row(std::size_t i) const { return rows_[i]; }
    // Sparse column entries (row, coefficient), unsorted.
    const std::vector<std::pair<std::size_t, Rat>>& column(std::size_t j) const {
        return columns_[j];
    }

  private:
    Sense sense_;
    std::vector<Variable> variables_;
    std::vector<Row> rows_;
    std::vector<std::vector<std::pair<std::size_t, Rat>>> columns_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, Limit };

const char* lp_status_name(LpStatus status);

struct LpSolution {
    LpStatus status = LpStatus::Limit;
    Rat objective;
    std::vector<Rat> primal;  // per declared variable
    std::vector<Rat> dual;    // per declared row, conventions above
    std::vector<Rat> farkas;  // per declared row, infeasible case only
    long pivots = 0;

    Rat primal_value(const LinearProgram& lp, const std::string& variable_name) const;
    Rat dual_value(const LinearProgram& lp, const std::string& row_name) const;
};

struct SolveOptions {
    // Bland's rule guarantees finite termination, so the cap only guards
    // against runaway model sizes; hitting it yields LpStatus::Limit.
    long max_pivots = 2000000;
    // Re-check primal/dual feasibility and strong duality (or the Farkas
    // inequalities) exactly before returning. Cheap next to the solve.
    bool verify_certificates = true;
};

LpSolution solve(const LinearProgram& lp, const SolveOptions& options = {});

// Plain-text rendering of the model for external cross-checking.
std::string dump_lp(const LinearProgram& lp);

}  // namespace bellbound
