#pragma once

// Rational quaternion algebras (a, b / Q): Hilbert symbols, discriminants,
// splitting over abelian fields and local solvability of ternary conics.

#include "shimura/arith/bigint.hpp"
#include "shimura/numfield/number_field.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shimura {

/// A place of Q: a prime p, or the real place (p == 0).
struct Place {
  std::int64_t p = 0;

  static Place infinity() { return {0}; }
  static Place prime(std::int64_t p);
  bool is_infinite() const { return p == 0; }
  std::string to_string() const;

  friend bool operator==(const Place&, const Place&) = default;
};

/// Parses "inf", "infinity" or a prime.
Place parse_place(const std::string& text);

/// Hilbert symbol (a, b)_v in {+1, -1}; a, b nonzero.
///
/// Odd p, a = p^alpha u, b = p^beta v:
///   (-1)^(alpha beta (p-1)/2) (u|p)^beta (v|p)^alpha
/// p = 2: (-1)^(e(u) e(v) + alpha w(v) + beta w(u)),
///   e(x) = (x-1)/2 mod 2, w(x) = (x^2-1)/8 mod 2
/// infinity: -1 iff a < 0 and b < 0.
int hilbert_symbol(const BigInt& a, const BigInt& b, const Place& v);

class QuaternionAlgebra {
 public:
  /// (a, b / Q); throws std::invalid_argument if a or b is zero.
  static QuaternionAlgebra from_pair(const BigInt& a, const BigInt& b);
  /// Indefinite algebra of squarefree discriminant d with an even number of prime factors.
  static QuaternionAlgebra from_discriminant(std::int64_t d);

  bool indefinite() const { return indefinite_; }
  /// Finite ramified primes, ascending.
  const std::vector<std::int64_t>& ramified_primes() const { return ramified_; }
  std::optional<std::pair<BigInt, BigInt>> pair() const { return pair_; }

 private:
  QuaternionAlgebra() = default;
  std::optional<std::pair<BigInt, BigInt>> pair_;
  std::vector<std::int64_t> ramified_;
  bool indefinite_ = true;
};

/// Product of the finite ramified primes. Throws std::domain_error for definite algebras.
std::int64_t discriminant(const QuaternionAlgebra& B);

struct LocalSplitting {
  std::int64_t p = 0;
  int e = 1;
  int f = 1;
  bool splits = false;  ///< local degree e f is even

  int local_degree() const { return e * f; }
};

struct SplittingReport {
  bool splits = true;
  std::vector<LocalSplitting> evidence;  ///< one entry per prime of disc(B)

  /// First prime of disc(B) where B stays ramified, if any.
  std::optional<LocalSplitting> witness() const;
  nlohmann::json to_json() const;
};

/// B tensor k is split iff every prime above every p | disc(B) has even local degree.
SplittingReport splits_over(const QuaternionAlgebra& B, const NumberField& k);

/// Solvability of r x^2 + s y^2 + t z^2 = 0 over the completion at `place`, or
/// over an unramified extension of it of degree `local_degree`. At the real
/// place degree 2 means C. A ramification index above 1 is not supported and
/// throws std::domain_error.
bool conic_local_solvable(const BigInt& r, const BigInt& s, const BigInt& t, const Place& place, int local_degree,
                          int ramification = 1);

}  // namespace shimura
