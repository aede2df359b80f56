#include "bellbound/scenario.hpp"

#include <algorithm>
#include <set>

namespace bellbound {

namespace {

void check_label_set(const std::vector<std::string>& labels, const char* which) {
    if (labels.empty())
        throw Error(ErrorCode::InvalidScenario, std::string(which) + " label set is empty");
    std::set<std::string> seen;
    for (const auto& label : labels) {
        if (label == kAbortLabel)
            throw Error(ErrorCode::InvalidScenario,
                        std::string(which) + " uses the reserved abort label " + kAbortLabel);
        if (!seen.insert(label).second)
            throw Error(ErrorCode::InvalidScenario,
                        std::string(which) + " has duplicate label '" + label + "'");
    }
}

std::size_t find_label(const std::vector<std::string>& labels, const std::string& label,
                       const char* which) {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
        throw Error(ErrorCode::InvalidArgument,
                    std::string("label '") + label + "' not in " + which);
    return static_cast<std::size_t>(it - labels.begin());
}

}  // namespace

Scenario::Scenario(std::vector<std::string> xs, std::vector<std::string> ys,
                   std::vector<std::string> as, std::vector<std::string> bs, bool abort)
    : inputs_a(std::move(xs)),
      inputs_b(std::move(ys)),
      outputs_a(std::move(as)),
      outputs_b(std::move(bs)),
      abort_allowed(abort) {
    validate();
}

void Scenario::validate() const {
    check_label_set(inputs_a, "inputs_a");
    check_label_set(inputs_b, "inputs_b");
    check_label_set(outputs_a, "outputs_a");
    check_label_set(outputs_b, "outputs_b");
}

const std::string& Scenario::output_label_a(std::size_t a) const {
    if (is_abort_a(a)) return kAbortLabel;
    return outputs_a.at(a);
}

const std::string& Scenario::output_label_b(std::size_t b) const {
    if (is_abort_b(b)) return kAbortLabel;
    return outputs_b.at(b);
}

std::size_t Scenario::input_index_a(const std::string& label) const {
    return find_label(inputs_a, label, "inputs_a");
}

std::size_t Scenario::input_index_b(const std::string& label) const {
    return find_label(inputs_b, label, "inputs_b");
}

std::size_t Scenario::output_index_a(const std::string& label) const {
    if (label == kAbortLabel) {
        if (!abort_allowed)
            throw Error(ErrorCode::InvalidArgument, "abort label in a no-abort scenario");
        return abort_a();
    }
    return find_label(outputs_a, label, "outputs_a");
}

std::size_t Scenario::output_index_b(const std::string& label) const {
    if (label == kAbortLabel) {
        if (!abort_allowed)
            throw Error(ErrorCode::InvalidArgument, "abort label in a no-abort scenario");
        return abort_b();
    }
    return find_label(outputs_b, label, "outputs_b");
}

Scenario Scenario::with_abort() const {
    Scenario s = *this;
    s.abort_allowed = true;
    return s;
}

Scenario Scenario::without_abort() const {
    Scenario s = *this;
    s.abort_allowed = false;
    return s;
}

void require_same_scenario(const Scenario& lhs, const Scenario& rhs, const char* where) {
    if (!(lhs == rhs))
        throw Error(ErrorCode::ScenarioMismatch, std::string(where));
}

Scenario make_numeric_scenario(std::size_t nx, std::size_t ny, std::size_t na,
                               std::size_t nb, bool abort_allowed) {
    auto labels = [](std::size_t n) {
        std::vector<std::string> out;
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
        return out;
    };
    return Scenario(labels(nx), labels(ny), labels(na), labels(nb), abort_allowed);
}

}  // namespace bellbound
