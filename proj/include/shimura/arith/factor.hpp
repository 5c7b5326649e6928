#pragma once

#include "shimura/arith/bigint.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace shimura {

/// Primality test.
///
/// Below 3.317e24 the answer is exact: strong probable-prime tests to the
/// thirteen prime bases 2..41 admit no composite below that bound. Above it,
/// 24 further bases drawn from a fixed-seed generator are added, so a
/// composite survives with probability at most 4^-37.
bool is_prime(const BigInt& n);

/// Largest input for which is_prime() is deterministic.
const BigInt& deterministic_primality_bound();

/// Primes up to `limit` by a plain sieve.
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

struct PrimePower {
  BigInt prime;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct FactorizationResult {
  int unit = 1;                    ///< sign of the input
  std::vector<PrimePower> factors; ///< strictly increasing primes

  BigInt recompose() const;
  std::vector<BigInt> primes() const;

  friend bool operator==(const FactorizationResult&, const FactorizationResult&) = default;
};

struct FactorOptions {
  std::uint32_t trial_bound = 1'000'000;
  /// Total Pollard-Brent iterations allowed across all cofactors of one input.
  std::uint64_t rho_iterations = 50'000'000;
};

/// Raised when the rho budget runs out. `partial` holds the primes found so far
/// and `unfactored` the composite cofactors that remain.
class FactorizationIncomplete : public std::runtime_error {
 public:
  FactorizationIncomplete(FactorizationResult partial, std::vector<BigInt> unfactored);

  const FactorizationResult& partial() const { return partial_; }
  const std::vector<BigInt>& unfactored() const { return unfactored_; }

 private:
  FactorizationResult partial_;
  std::vector<BigInt> unfactored_;
};

/// Complete factorization: trial division up to options.trial_bound, then
/// Pollard-Brent rho. Every reported prime is re-verified with is_prime()
/// and the product is checked against n before returning.
FactorizationResult factorize(const BigInt& n, const FactorOptions& options = {});

}  // namespace shimura
