#pragma once

// Abelian number fields modelled as fixed fields inside a cyclotomic field.
//
// Every field k here is Q(zeta_N)^H for a modulus N and a subgroup
// H <= (Z/NZ)^x, so Gal(k/Q) = (Z/NZ)^x / H. Splitting of primes, quadratic
// subfields and containment all reduce to finite group computations on H.

#include "shimura/arith/bigint.hpp"
#include "shimura/arith/polynomial.hpp"
#include "shimura/classgrp/quadform.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shimura {

enum class FieldKind { rationals, quadratic, cyclotomic, compositum };

struct PrimeSplitting {
  std::int64_t p = 0;
  int e = 1;  ///< ramification index
  int f = 1;  ///< residue degree
  int g = 1;  ///< number of primes above p

  friend bool operator==(const PrimeSplitting&, const PrimeSplitting&) = default;
};

/// A prime ideal of k, described by the rational prime below it.
struct PrimeIdealHandle {
  std::int64_t q = 0;
  int e = 1;
  int f = 1;
  BigInt norm;                    ///< q^f
  std::optional<QuadForm> form;   ///< ideal (q, (-b + sqrt D)/2) for quadratic fields

  /// Residue field of odd degree over F_q, i.e. N = q^f with f odd.
  bool odd_degree() const { return f % 2 == 1; }

  friend bool operator==(const PrimeIdealHandle&, const PrimeIdealHandle&) = default;
};

class NumberField {
 public:
  static NumberField rationals();
  /// D must be a fundamental discriminant.
  static NumberField quadratic(std::int64_t discriminant);
  /// n >= 3, n != 2 mod 4.
  static NumberField cyclotomic(std::int64_t n);
  /// Nested composita are flattened; parts must be pairwise distinct.
  static NumberField compositum(std::vector<NumberField> parts);

  /// Parses {"type":"rationals"} | {"type":"quadratic","D":-24} |
  /// {"type":"cyclotomic","n":31} | {"type":"compositum","parts":[...]}.
  static NumberField from_json(const nlohmann::json& spec);
  nlohmann::json to_json() const;

  FieldKind kind() const { return kind_; }
  std::int64_t discriminant() const;      ///< quadratic fields only
  std::int64_t cyclotomic_index() const;  ///< cyclotomic fields only
  const std::vector<NumberField>& parts() const { return parts_; }

  int degree() const { return degree_; }
  std::int64_t conductor() const { return conductor_; }
  /// Ram(k): the primes dividing the conductor, ascending.
  const std::vector<std::int64_t>& ramified_primes() const { return ramified_; }
  bool is_ramified(std::int64_t p) const;
  bool is_imaginary_quadratic() const { return kind_ == FieldKind::quadratic && discriminant_ < 0; }

  /// Invariant factors d1 | d2 | ... of Gal(k/Q); empty for Q.
  std::vector<std::int64_t> galois_invariants() const;
  int two_rank() const;

  std::int64_t modulus() const { return modulus_; }
  /// Whether the residue class x mod N (coprime to N) fixes k.
  bool fixes(std::int64_t x) const;
  /// Whether Q(sqrt D) is a subfield, D a fundamental discriminant.
  bool contains_quadratic(std::int64_t D) const;
  bool contains(const NumberField& other) const;
  bool same_field(const NumberField& other) const { return contains(other) && other.contains(*this); }

  /// Minimal polynomial of the canonical generator: x for Q, x^2 - D/4 or
  /// x^2 - x + (1 - D)/4 for quadratic fields (the generator of the maximal
  /// order), Phi_n for Q(zeta_n), and for a compositum the minimal polynomial
  /// of the sum of the parts' generators.
  IntPolynomial generator_minpoly() const;

  /// Images of the generator under all of Gal(k/Q), as polynomials in the
  /// generator. Available for Q, quadratic and cyclotomic fields; composita
  /// throw std::domain_error.
  std::vector<IntPolynomial> generator_conjugates() const;

  /// Short human-readable name, e.g. "Q(sqrt(-6))", "Q(zeta_31)".
  std::string name() const;

  friend bool operator==(const NumberField& a, const NumberField& b) { return a.to_json() == b.to_json(); }

 private:
  NumberField() = default;
  void finish();  // derive modulus-level data from the subgroup

  FieldKind kind_ = FieldKind::rationals;
  std::int64_t discriminant_ = 0;
  std::int64_t index_ = 0;
  std::vector<NumberField> parts_;

  std::int64_t modulus_ = 1;
  std::vector<char> in_subgroup_;        // indexed by residue mod N
  std::vector<std::int64_t> subgroup_;   // H, ascending
  std::vector<std::int64_t> units_;      // (Z/N)^x, ascending
  int degree_ = 1;
  std::int64_t conductor_ = 1;
  std::vector<std::int64_t> ramified_;

  friend PrimeSplitting splitting_data(const NumberField& k, std::int64_t p);
};

bool is_fundamental_discriminant(std::int64_t D);

/// Fundamental discriminant of Q(sqrt m) for a nonzero non-square integer m.
std::int64_t fundamental_discriminant_of(const BigInt& m);

/// Splitting type (e, f, g) of the rational prime p in k.
PrimeSplitting splitting_data(const NumberField& k, std::int64_t p);

struct QuadraticSubfields {
  std::vector<NumberField> imaginary;  ///< ordered by |D|
  std::vector<NumberField> real;

  std::size_t size() const { return imaginary.size() + real.size(); }
};

QuadraticSubfields quadratic_subfields(const NumberField& k);

/// Primes q <= bound that split completely in k (e = f = 1).
std::vector<std::int64_t> split_completely_primes(const NumberField& k, std::int64_t bound);

/// Any prime ideal above q (all are Galois conjugate, so e and f agree).
PrimeIdealHandle prime_above(const NumberField& k, std::int64_t q);

std::vector<std::int64_t> prime_divisors(std::int64_t n);
bool is_prime_small(std::int64_t n);

}  // namespace shimura
