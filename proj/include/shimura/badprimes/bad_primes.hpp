#pragma once

// Bad-prime sets built from class-group generators.
//
// For every generator q in S (with q^h = alpha O_k), every exponent vector
// eps in {0, 8, 12, 16, 24}^Gal(k/Q) and every Weil number beta of size
// sqrt N(q), the integer
//
//   Norm_{k(beta)/Q}( prod_sigma sigma(alpha)^eps_sigma - beta^(24 h) )
//
// is an element of M2 unless it vanishes. N0 is the union of the prime
// supports of M2, T the primes below S together with 2 and 3, and
// N1 = N0 u T u Ram(k).
//
// With g = gcd(eps_sigma, 24 h), X = alpha^(eps/g) and Y = beta^(24h/g) the
// difference factors as prod_{m | g} Phi_m(X, Y) (homogenized cyclotomic
// polynomials), and each factor has an integral norm. Only these smaller
// integers are factored.

#include "shimura/arith/bigint.hpp"
#include "shimura/arith/factor.hpp"
#include "shimura/classgrp/class_group.hpp"
#include "shimura/numfield/number_field.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace shimura {

/// A root of x^2 + a x + n with a^2 <= 4n: (-a + root sqrt(a^2 - 4n)) / 2.
struct WeilCandidate {
  std::int64_t a = 0;
  std::int64_t n = 0;
  int root = 1;  ///< +1 or -1; 0 for the double root when a^2 = 4n

  bool double_root() const { return root == 0; }
  nlohmann::json to_json() const;

  friend bool operator==(const WeilCandidate&, const WeilCandidate&) = default;
};

/// FR(n): every distinct root over all admissible a, ordered by a then root.
std::vector<WeilCandidate> fr_set(std::int64_t n);

/// The alphabet of exponent-vector coefficients.
inline constexpr int kEpsilonAlphabet[5] = {0, 8, 12, 16, 24};

/// Coefficients a_sigma indexed like the conjugate list of the class data.
using EpsilonVector = std::vector<int>;

/// The i-th vector in base-5 order, least significant digit first.
EpsilonVector epsilon_from_index(std::uint64_t index, int degree);

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(BigInt estimate, BigInt budget);
  const BigInt& estimate() const { return estimate_; }
  const BigInt& budget() const { return budget_; }

 private:
  BigInt estimate_;
  BigInt budget_;
};

struct EnumerationOptions {
  /// Maximum number of (q, eps, beta) triples.
  BigInt budget = 100'000'000;
  unsigned threads = 0;  ///< 0 means std::thread::hardware_concurrency()
  /// Evaluate conjugate roots once when x^2 + a x + n is irreducible over k.
  bool dedupe_conjugates = true;
  FactorOptions factor;
};

struct M2Record {
  std::size_t generator = 0;   ///< index into S
  std::uint64_t epsilon_index = 0;
  EpsilonVector epsilon;
  WeilCandidate beta;
  bool degenerate = false;     ///< beta lies in k
  BigInt value;                ///< the norm; zero means excluded
  std::vector<BigInt> pieces;  ///< norms of the cyclotomic factors, product = value

  bool excluded() const { return value == 0; }
};

/// Number of triples the enumeration would visit.
BigInt enumeration_size(const ClassGroupData& cg);

/// All M2 values in deterministic order (generator, epsilon index, beta).
/// Throws BudgetExceeded before doing any work if the size is over budget.
std::vector<M2Record> m2_values(const NumberField& k, const ClassGroupData& cg, const EnumerationOptions& options = {});

struct BadPrimeSets {
  NumberField field = NumberField::rationals();
  nlohmann::json class_data;
  std::vector<BigInt> N0;
  std::vector<BigInt> T;
  std::vector<BigInt> ram;
  std::vector<BigInt> N1;
  bool complete = true;
  std::vector<BigInt> unfactored;  ///< composites left when incomplete

  std::uint64_t triples = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t excluded = 0;
  std::uint64_t distinct_pieces = 0;
  nlohmann::json excluded_triples = nlohmann::json::array();

  /// Canonical JSON; sets are ascending lists of decimal strings.
  nlohmann::json to_json() const;
};

/// Factorization of every M2 value, rebuilt from its pieces.
struct FactoredValue {
  BigInt value;
  FactorizationResult factorization;
};

/// N1 = N0 u T u Ram. Incomplete factorizations clear `complete` instead of throwing.
/// When `factored` is given, it receives every nonzero M2 value with its factorization.
BadPrimeSets n1_set(const NumberField& k, const ClassGroupData& cg, const EnumerationOptions& options = {},
                    std::vector<FactoredValue>* factored = nullptr);

}  // namespace shimura
