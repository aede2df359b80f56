#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bellbound/error.hpp"

namespace bellbound {

// Reserved label for the abort outcome. It never appears among the declared
// output labels; serialization writes it literally.
inline const std::string kAbortLabel = "BOT";

// A bipartite measurement scenario: input label sets X, Y and output label
// sets A, B, each in declaration order. When abort_allowed is set, both
// output sets are implicitly extended by the abort outcome, which always
// sits at the last index (out_a() == |A|, out_b() == |B|).
struct Scenario {
    std::vector<std::string> inputs_a;
    std::vector<std::string> inputs_b;
    std::vector<std::string> outputs_a;
    std::vector<std::string> outputs_b;
    bool abort_allowed = false;

    Scenario() = default;
    Scenario(std::vector<std::string> xs, std::vector<std::string> ys,
             std::vector<std::string> as, std::vector<std::string> bs,
             bool abort = false);

    // Throws Error(InvalidScenario) on empty or duplicated labels, or if a
    // label collides with the reserved abort label.
    void validate() const;

    std::size_t nx() const { return inputs_a.size(); }
    std::size_t ny() const { return inputs_b.size(); }
    // Declared (non-abort) output counts.
    std::size_t na() const { return outputs_a.size(); }
    std::size_t nb() const { return outputs_b.size(); }
    // Output counts including the abort slot when allowed.
    std::size_t na_full() const { return na() + (abort_allowed ? 1 : 0); }
    std::size_t nb_full() const { return nb() + (abort_allowed ? 1 : 0); }

    std::size_t abort_a() const { return na(); }
    std::size_t abort_b() const { return nb(); }
    bool is_abort_a(std::size_t a) const { return abort_allowed && a == na(); }
    bool is_abort_b(std::size_t b) const { return abort_allowed && b == nb(); }

    // Dense table index; (a, b) range over the full output sets.
    std::size_t index(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
        return ((a * nb_full() + b) * nx() + x) * ny() + y;
    }
    std::size_t table_size() const { return na_full() * nb_full() * nx() * ny(); }

    const std::string& output_label_a(std::size_t a) const;
    const std::string& output_label_b(std::size_t b) const;

    // Label -> index lookups (abort label maps to the abort slot).
    std::size_t input_index_a(const std::string& label) const;
    std::size_t input_index_b(const std::string& label) const;
    std::size_t output_index_a(const std::string& label) const;
    std::size_t output_index_b(const std::string& label) const;

    Scenario with_abort() const;
    Scenario without_abort() const;

    bool operator==(const Scenario& other) const = default;
};

// Fails with Error(ScenarioMismatch) unless the two scenarios are equal.
void require_same_scenario(const Scenario& lhs, const Scenario& rhs, const char* where);

// Convenience builder: inputs "0".."nx-1", outputs "0".."na-1" per side.
Scenario make_numeric_scenario(std::size_t nx, std::size_t ny, std::size_t na,
                               std::size_t nb, bool abort_allowed = false);

}  // namespace bellbound
