#pragma once

#include <string>

#include <json.hpp>

#include "bellbound/core.hpp"
#include "bellbound/scenario.hpp"

namespace bellbound {

// File format for tables: {"scenario": {...}, "entries": [[a,b,x,y,num,den],...]}.
// Labels are strings (the abort outcome appears literally as "BOT"), rationals
// are numerator/denominator pairs, zero entries are omitted, and entries are
// written in dense index order so equal objects serialize byte-identically.

nlohmann::json rat_to_json_num(const Rat& value);  // numerator as int or string
nlohmann::json rat_to_json_den(const Rat& value);
Rat rat_from_json_pair(const nlohmann::json& num, const nlohmann::json& den);

nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& j);

nlohmann::json family_to_json(const DistributionFamily& p);
// Parses and validates (nonnegativity, per-input normalization).
DistributionFamily family_from_json(const nlohmann::json& j);

nlohmann::json functional_to_json(const BellFunctional& b);
BellFunctional functional_from_json(const nlohmann::json& j);

// Throws Error(IoError) on unreadable files, Error(ParseError) with the
// parser's position diagnostic on malformed JSON.
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

// FNV-1a 64-bit digest, 16 hex digits; used to pin report inputs.
std::string file_digest_hex(const std::string& path);
std::string text_digest_hex(const std::string& text);

}  // namespace bellbound
