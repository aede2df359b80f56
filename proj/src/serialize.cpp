#include "bellbound/serialize.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "bellbound/error.hpp"

namespace bellbound {

namespace {

nlohmann::json mpz_to_json(const mpz_class& z) {
    if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
    return z.get_str();
}

mpz_class mpz_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        try {
            return mpz_class(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw Error(ErrorCode::ParseError, "bad integer literal: " + j.get<std::string>());
        }
    }
    throw Error(ErrorCode::ParseError, "expected an integer or integer string, got " +
                                           std::string(j.type_name()));
}

std::vector<std::string> labels_from_json(const nlohmann::json& j, const char* field) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, std::string(field) + " must be an array");
    std::vector<std::string> out;
    for (const auto& item : j) {
        if (!item.is_string())
            throw Error(ErrorCode::ParseError, std::string(field) + " entries must be strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

const nlohmann::json& require_field(const nlohmann::json& j, const char* field) {
    const auto it = j.find(field);
    if (it == j.end()) throw Error(ErrorCode::ParseError, std::string("missing field ") + field);
    return *it;
}

// Shared table form of families and functionals.
nlohmann::json table_to_json(const Scenario& scenario, const std::vector<Rat>& table) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t a = 0; a < scenario.na_full(); ++a)
        for (std::size_t b = 0; b < scenario.nb_full(); ++b)
            for (std::size_t x = 0; x < scenario.nx(); ++x)
                for (std::size_t y = 0; y < scenario.ny(); ++y) {
                    const Rat& v = table[scenario.index(a, b, x, y)];
                    if (v == 0) continue;
                    entries.push_back(nlohmann::json::array(
                        {scenario.output_label_a(a), scenario.output_label_b(b),
                         scenario.inputs_a[x], scenario.inputs_b[y], rat_to_json_num(v),
                         rat_to_json_den(v)}));
                }
    return nlohmann::json{{"scenario", scenario_to_json(scenario)}, {"entries", entries}};
}

std::pair<Scenario, std::vector<Rat>> table_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "expected a JSON object");
    Scenario scenario = scenario_from_json(require_field(j, "scenario"));
    const nlohmann::json& entries = require_field(j, "entries");
    if (!entries.is_array()) throw Error(ErrorCode::ParseError, "entries must be an array");
    std::vector<Rat> table(scenario.table_size(), Rat(0));
    std::vector<bool> seen(scenario.table_size(), false);
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 6)
            throw Error(ErrorCode::ParseError, "each entry must be [a,b,x,y,num,den]");
        for (int k = 0; k < 4; ++k)
            if (!e[k].is_string())
                throw Error(ErrorCode::ParseError, "entry labels must be strings");
        const std::size_t a = scenario.output_index_a(e[0].get<std::string>());
        const std::size_t b = scenario.output_index_b(e[1].get<std::string>());
        const std::size_t x = scenario.input_index_a(e[2].get<std::string>());
        const std::size_t y = scenario.input_index_b(e[3].get<std::string>());
        const std::size_t i = scenario.index(a, b, x, y);
        if (seen[i])
            throw Error(ErrorCode::ParseError,
                        "duplicate entry for (" + e[0].get<std::string>() + "," +
                            e[1].get<std::string>() + "|" + e[2].get<std::string>() + "," +
                            e[3].get<std::string>() + ")");
        seen[i] = true;
        table[i] = rat_from_json_pair(e[4], e[5]);
    }
    return {std::move(scenario), std::move(table)};
}

}  // namespace

nlohmann::json rat_to_json_num(const Rat& value) { return mpz_to_json(value.get_num()); }

nlohmann::json rat_to_json_den(const Rat& value) { return mpz_to_json(value.get_den()); }

Rat rat_from_json_pair(const nlohmann::json& num, const nlohmann::json& den) {
    const mpz_class n = mpz_from_json(num);
    const mpz_class d = mpz_from_json(den);
    if (d == 0) throw Error(ErrorCode::ParseError, "zero denominator");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

nlohmann::json scenario_to_json(const Scenario& scenario) {
    return nlohmann::json{{"inputs_a", scenario.inputs_a},
                          {"inputs_b", scenario.inputs_b},
                          {"outputs_a", scenario.outputs_a},
                          {"outputs_b", scenario.outputs_b},
                          {"abort_allowed", scenario.abort_allowed}};
}

Scenario scenario_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "scenario must be an object");
    const nlohmann::json& abort = require_field(j, "abort_allowed");
    if (!abort.is_boolean())
        throw Error(ErrorCode::ParseError, "abort_allowed must be a boolean");
    return Scenario(labels_from_json(require_field(j, "inputs_a"), "inputs_a"),
                    labels_from_json(require_field(j, "inputs_b"), "inputs_b"),
                    labels_from_json(require_field(j, "outputs_a"), "outputs_a"),
                    labels_from_json(require_field(j, "outputs_b"), "outputs_b"),
                    abort.get<bool>());
}

nlohmann::json family_to_json(const DistributionFamily& p) {
    return table_to_json(p.scenario, p.table);
}

DistributionFamily family_from_json(const nlohmann::json& j) {
    auto [scenario, table] = table_from_json(j);
    DistributionFamily p(std::move(scenario));
    p.table = std::move(table);
    p.validate();
    return p;
}

nlohmann::json functional_to_json(const BellFunctional& b) {
    return table_to_json(b.scenario, b.coeffs);
}

BellFunctional functional_from_json(const nlohmann::json& j) {
    auto [scenario, table] = table_from_json(j);
    BellFunctional b(std::move(scenario));
    b.coeffs = std::move(table);
    return b;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::IoError, "write failed on " + path);
}

std::string text_digest_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string file_digest_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return text_digest_hex(buf.str());
}

}  // namespace bellbound
