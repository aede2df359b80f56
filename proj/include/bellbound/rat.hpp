#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace bellbound {

// All bound computation runs on exact rationals. mpq_class canonicalizes
// (reduced fraction, positive denominator) after every operation, which the
// LP certificates rely on when comparing values bit-exactly.
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "n", "-n", or "n/d". Throws Error(ParseError) on anything else or
// on a zero denominator.
Rat rat_from_string(const std::string& text);

// "n/d" with canonical sign, or plain "n" when the denominator is 1.
std::string rat_to_string(const Rat& value);

// Display-only decimal rendering (round toward zero), e.g. 1/3 -> "0.333333".
// Files never carry these; they are for reports and logs.
std::string rat_to_decimal(const Rat& value, int digits = 12);

bool fits_int64(const mpz_class& value);

// Deterministic rational sampler. All randomized verification is seeded so
// reports are reproducible byte for byte.
class RatRng {
  public:
    explicit RatRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform over {lo, lo+1, ..., hi}.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Random fraction in [0, 1] with denominator at most max_den.
    Rat unit(int max_den = 64);

    // Random fraction in [-1, 1] with denominator at most max_den.
    Rat signed_unit(int max_den = 64);

    // Splits the engine off for a named sub-task so adding a new sampling
    // site does not shift every later draw.
    RatRng fork(std::uint64_t salt);

  private:
    std::mt19937_64 engine_;
};

}  // namespace bellbound
