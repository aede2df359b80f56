#include "bellbound/rat.hpp"

#include "bellbound/error.hpp"

namespace bellbound {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ScenarioMismatch: return "scenario mismatch";
        case ErrorCode::InvalidScenario: return "invalid scenario";
        case ErrorCode::InvalidDistribution: return "invalid distribution";
        case ErrorCode::InvalidFunctional: return "invalid functional";
        case ErrorCode::InvalidArgument: return "invalid argument";
        case ErrorCode::BudgetExceeded: return "budget exceeded";
        case ErrorCode::SignalingInput: return "signaling input";
        case ErrorCode::ConstantFunctional: return "constant functional";
        case ErrorCode::AbortCoefficients: return "abort coefficients";
        case ErrorCode::GuaranteeViolated: return "guarantee violated";
        case ErrorCode::RectangleCondition: return "rectangle condition";
        case ErrorCode::LabelInUse: return "label in use";
        case ErrorCode::EmbeddingMismatch: return "embedding mismatch";
        case ErrorCode::ParseError: return "parse error";
        case ErrorCode::IoError: return "io error";
    }
    return "unknown error";
}

Rat rat_from_string(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            mpz_class num(text);
            return Rat(num);
        }
        mpz_class num(text.substr(0, slash));
        mpz_class den(text.substr(slash + 1));
        if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
        Rat r(num, den);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::ParseError, "not a rational: '" + text + "'");
    }
}

std::string rat_to_string(const Rat& value) {
    if (value.get_den() == 1) return value.get_num().get_str();
    return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string rat_to_decimal(const Rat& value, int digits) {
    mpz_class num = value.get_num();
    const mpz_class& den = value.get_den();
    std::string sign;
    if (num < 0) {
        sign = "-";
        num = -num;
    }
    mpz_class whole = num / den;
    mpz_class rem = num % den;
    std::string out = sign + whole.get_str();
    if (rem == 0) return out;
    out += ".";
    for (int i = 0; i < digits && rem != 0; ++i) {
        rem *= 10;
        mpz_class digit = rem / den;
        rem %= den;
        out += digit.get_str();
    }
    return out;
}

bool fits_int64(const mpz_class& value) {
    static const mpz_class kMin(std::string("-9223372036854775808"));
    static const mpz_class kMax(std::string("9223372036854775807"));
    return value >= kMin && value <= kMax;
}

std::int64_t RatRng::uniform_int(std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> dist(lo, hi);
    return dist(engine_);
}

Rat RatRng::unit(int max_den) {
    const std::int64_t den = uniform_int(1, max_den);
    const std::int64_t num = uniform_int(0, den);
    return rat(num, den);
}

Rat RatRng::signed_unit(int max_den) {
    const std::int64_t den = uniform_int(1, max_den);
    const std::int64_t num = uniform_int(-den, den);
    return rat(num, den);
}

RatRng RatRng::fork(std::uint64_t salt) {
    // splitmix-style scramble of one draw; keeps sibling forks decorrelated.
    std::uint64_t x = engine_() + 0x9e3779b97f4a7c15ULL * (salt + 1);
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return RatRng(x ^ (x >> 31));
}

}  // namespace bellbound
