#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "bellbound/core.hpp"
#include "bellbound/scenario.hpp"

namespace bellbound {

// Deterministic product strategy: one output (possibly the abort slot) per
// input on each side.
struct LocalDetStrategy {
    std::vector<std::size_t> map_a;  // per x, output index into the full set
    std::vector<std::size_t> map_b;  // per y

    bool operator==(const LocalDetStrategy& other) const = default;
};

inline constexpr std::size_t kDefaultEnumerationBudget = 10'000'000;

// Indexed view of the deterministic strategy set, in lexicographic order of
// (map_a, map_b) with earlier inputs more significant. Index access keeps the
// stream restartable and partitionable.
class LdetRange {
  public:
    // `scenario` must already carry the abort slot when with_abort is set.
    LdetRange(Scenario scenario, bool with_abort,
              std::size_t budget = kDefaultEnumerationBudget);

    const Scenario& scenario() const { return scenario_; }
    bool with_abort() const { return with_abort_; }
    std::size_t size() const { return size_; }
    std::size_t size_a() const { return size_a_; }
    std::size_t size_b() const { return size_b_; }

    LocalDetStrategy at(std::size_t index) const;
    std::vector<std::size_t> map_a_at(std::size_t index_a) const;
    std::vector<std::size_t> map_b_at(std::size_t index_b) const;

  private:
    Scenario scenario_;
    bool with_abort_;
    std::size_t base_a_, base_b_;
    std::size_t size_a_, size_b_, size_;
};

// Point mass p(a,b|x,y) = [a = map_a(x)][b = map_b(y)] on the given scenario.
DistributionFamily strategy_to_distribution(const Scenario& scenario,
                                            const LocalDetStrategy& s);

// Standard evaluation ignores abort-indexed coefficients; Full includes them
// (needed when auditing functionals that deliberately carry abort weight).
enum class EvalMode { Standard, Full };

// RowDecomposition fixes Bob's map and maximizes Alice per input, costing
// |B_maps| * table instead of |A_maps| * |B_maps| evaluations; Naive walks
// every strategy and is kept as a cross-check.
enum class MaxMethod { RowDecomposition, Naive };

struct LdetMax {
    Rat value;
    LocalDetStrategy argmax;  // first attaining strategy in enumeration order
    std::size_t count = 0;    // size of the searched strategy set
};

// Exact max of B(l) (or |B(l)| when absolute) over deterministic strategies,
// with or without the abort output. The budget meters the dominant loop:
// Bob-map count for RowDecomposition, full strategy count for Naive.
LdetMax max_bell_over_ldet(const BellFunctional& b, bool with_abort, bool absolute,
                           std::size_t budget = kDefaultEnumerationBudget,
                           EvalMode mode = EvalMode::Standard,
                           MaxMethod method = MaxMethod::RowDecomposition);

struct LocalityReport {
    bool local = false;
    // Nonzero convex weights over strategies when local.
    std::vector<std::pair<LocalDetStrategy, Rat>> weights;
    // Farkas-derived separating functional when not local; satisfies
    // B(l) <= threshold < B(p) exactly (full evaluation).
    std::optional<BellFunctional> separating;
    Rat separating_threshold;
    Rat separating_value;
};

// Membership of p in the convex hull of the deterministic strategy set.
LocalityReport is_local(const DistributionFamily& p, bool with_abort,
                        std::size_t budget = kDefaultEnumerationBudget);

}  // namespace bellbound
