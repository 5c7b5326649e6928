#pragma once

// Arbitrary-precision integers. The canonical representation is GMP's mpz,
// which keeps magnitudes normalized (no leading zero limbs, zero is +0).

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace shimura {

using BigInt = mpz_class;

BigInt pow(const BigInt& base, unsigned long exponent);

/// Floor of the square root of a nonnegative integer.
BigInt isqrt(const BigInt& n);

bool is_square(const BigInt& n);

inline int sign(const BigInt& n) { return sgn(n); }

inline BigInt abs_value(const BigInt& n) { return abs(n); }

/// Removes every factor p from n and returns how many were removed.
unsigned long remove_factor(BigInt& n, const BigInt& p);

/// Least nonnegative residue of a modulo m (m > 0).
BigInt mod_floor(const BigInt& a, const BigInt& m);

BigInt gcd(const BigInt& a, const BigInt& b);

BigInt powmod(const BigInt& base, const BigInt& exponent, const BigInt& modulus);

std::string to_string(const BigInt& n);

/// Parses an optionally signed decimal integer; throws std::invalid_argument.
BigInt parse_bigint(std::string_view text);

bool fits_int64(const BigInt& n);
std::int64_t to_int64(const BigInt& n);

}  // namespace shimura
