#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bellbound/rat.hpp"
#include "bellbound/scenario.hpp"

namespace bellbound {

// Table of conditional probabilities p(a,b|x,y), stored densely in the index
// order fixed by the scenario (abort outcomes, when allowed, occupy the last
// output slot on each side). Immutable by convention after validate().
struct DistributionFamily {
    Scenario scenario;
    std::vector<Rat> table;

    DistributionFamily() = default;
    explicit DistributionFamily(Scenario s)
        : scenario(std::move(s)), table(scenario.table_size(), Rat(0)) {}

    const Rat& at(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
        return table[scenario.index(a, b, x, y)];
    }
    Rat& at(std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
        return table[scenario.index(a, b, x, y)];
    }

    // Entrywise nonnegativity and exact per-(x,y) normalization (abort
    // outcomes included when allowed). Throws Error(InvalidDistribution).
    void validate() const;

    bool operator==(const DistributionFamily& other) const = default;
};

// Coefficient tensor B_{a,b,x,y}. Coefficients on abort outcomes are stored
// but the standard evaluation skips them; evaluate_full includes them (the
// abort-padding identities need the full sum).
struct BellFunctional {
    Scenario scenario;
    std::vector<Rat> coeffs;

    BellFunctional() = default;
    explicit BellFunctional(Scenario s)
        : scenario(std::move(s)), coeffs(scenario.table_size(), Rat(0)) {}

    const Rat& at(std::size_t a, std::size_t b, std::size_t x, std::size_t y) const {
        return coeffs[scenario.index(a, b, x, y)];
    }
    Rat& at(std::size_t a, std::size_t b, std::size_t x, std::size_t y) {
        return coeffs[scenario.index(a, b, x, y)];
    }

    bool has_abort_coeffs() const;

    bool operator==(const BellFunctional& other) const = default;
};

// Per-input conditional marginals: first component maps (a,x,y), second maps
// (b,x,y); both sum over the full output range of the other party.
struct Marginals {
    // Indexed [a][x][y] and [b][x][y]; a, b include the abort slot.
    std::vector<std::vector<std::vector<Rat>>> alice;
    std::vector<std::vector<std::vector<Rat>>> bob;
};

struct SignalingWitness {
    // First tuple found where a marginal depends on the other party's input.
    bool on_alice_side = false;  // true: p_A(a|x,y) varies with y
    std::size_t output = 0;
    std::size_t input_own = 0;
    std::size_t input_other_1 = 0;
    std::size_t input_other_2 = 0;
    Rat value_1;
    Rat value_2;
};

struct NonsignalingReport {
    bool nonsignaling = true;
    std::optional<SignalingWitness> witness;
};

// Sum of B * p over non-abort outcome pairs (the standard evaluation; abort
// events carry no weight).
Rat evaluate(const BellFunctional& b, const DistributionFamily& p);

// Sum including abort-indexed coefficients.
Rat evaluate_full(const BellFunctional& b, const DistributionFamily& p);

Marginals marginals(const DistributionFamily& p);

NonsignalingReport is_nonsignaling(const DistributionFamily& p);

// max over (x,y) of sum_{a,b} |p - p'| (total variation style L1, taking the
// worst input pair).
Rat l1_distance(const DistributionFamily& p, const DistributionFamily& q);

// Partial boolean function on X x Y: table of 0/1 values, absent = outside
// the promise.
struct PartialFunction {
    std::vector<std::string> inputs_a;
    std::vector<std::string> inputs_b;
    // value[x][y]: -1 for off-promise, else 0/1.
    std::vector<std::vector<int>> value;

    bool defined(std::size_t x, std::size_t y) const { return value[x][y] >= 0; }
    std::size_t domain_size() const;
};

// p(a,b|x,y) = 1/2 if a XOR b = f(x,y), else 0, with outputs {"0","1"}.
// Off-promise inputs get the uniform distribution over the four outcomes so
// the family stays total and nonsignaling.
DistributionFamily build_pf(const PartialFunction& f);

// (1-delta) p + delta u with u uniform over the declared outputs. Requires a
// no-abort family and 0 <= delta <= 1.
DistributionFamily mix_uniform(const DistributionFamily& p, const Rat& delta);

// Uniform family u(a,b|x,y) = 1/(|A||B|) on p's scenario (no abort).
DistributionFamily uniform_family(const Scenario& scenario);

}  // namespace bellbound
