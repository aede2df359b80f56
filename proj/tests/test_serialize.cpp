#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "bellbound/core.hpp"
#include "bellbound/error.hpp"
#include "bellbound/serialize.hpp"
#include "test_util.hpp"

using namespace bellbound;
using namespace bellbound::testing;

TEST_CASE("family round-trip preserves structure and omits zeros") {
    const DistributionFamily pr = pr_box();
    const nlohmann::json j = family_to_json(pr);
    CHECK(j.at("entries").size() == 8);  // half the 16 cells are zero
    const DistributionFamily back = family_from_json(j);
    CHECK(back == pr);
    // Deterministic rendering: equal objects, equal bytes.
    CHECK(j.dump() == family_to_json(pr).dump());
}

TEST_CASE("functional round-trip carries negatives and big rationals") {
    BellFunctional b(make_numeric_scenario(2, 2, 2, 2));
    b.at(0, 0, 0, 0) = rat(-7, 2);
    b.at(1, 1, 1, 1) = rat(1, 3);
    b.at(0, 1, 1, 0) = Rat(mpz_class("1237940039285380274899124224"), mpz_class(3));
    const nlohmann::json j = functional_to_json(b);
    // The oversized numerator must serialize as a string, not overflow.
    bool saw_string = false;
    for (const auto& e : j.at("entries")) saw_string = saw_string || e[4].is_string();
    CHECK(saw_string);
    CHECK(functional_from_json(j) == b);
}

TEST_CASE("abort outcomes serialize under the reserved label") {
    const Scenario s = make_numeric_scenario(1, 1, 1, 1, true);
    DistributionFamily p(s);
    p.at(s.abort_a(), s.abort_b(), 0, 0) = 1;
    const nlohmann::json j = family_to_json(p);
    REQUIRE(j.at("entries").size() == 1);
    CHECK(j.at("entries")[0][0] == "BOT");
    CHECK(j.at("entries")[0][1] == "BOT");
    CHECK(family_from_json(j) == p);
}

TEST_CASE("parser rejects malformed tables") {
    const DistributionFamily pr = pr_box();
    nlohmann::json j = family_to_json(pr);

    nlohmann::json dup = j;
    dup["entries"].push_back(dup["entries"][0]);
    CHECK_THROWS_AS(family_from_json(dup), Error);

    nlohmann::json zero_den = j;
    zero_den["entries"][0][5] = 0;
    CHECK_THROWS_AS(family_from_json(zero_den), Error);

    nlohmann::json bad_label = j;
    bad_label["entries"][0][0] = "nope";
    CHECK_THROWS_AS(family_from_json(bad_label), Error);

    nlohmann::json missing = j;
    missing.erase("scenario");
    CHECK_THROWS_AS(family_from_json(missing), Error);

    // Sub-normalized table parses structurally but fails validation.
    nlohmann::json short_mass = j;
    short_mass["entries"].erase(0);
    CHECK_THROWS_AS(family_from_json(short_mass), Error);
}

TEST_CASE("file round-trip and parse diagnostics") {
    const std::string path = "serialize_roundtrip_tmp.json";
    const DistributionFamily pr = pr_box();
    save_json_file(path, family_to_json(pr));
    CHECK(family_from_json(load_json_file(path)) == pr);
    CHECK(file_digest_hex(path) == text_digest_hex([&] {
              std::ifstream in(path, std::ios::binary);
              return std::string(std::istreambuf_iterator<char>(in), {});
          }()));

    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_json_file(path), Error);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_json_file(path), Error);
}

TEST_CASE("digest is the 64-bit FNV-1a reference") {
    CHECK(text_digest_hex("") == "cbf29ce484222325");
    CHECK(text_digest_hex("a") == "af63dc4c8601ec8c");
}
