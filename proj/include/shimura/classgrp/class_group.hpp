#pragma once

// Class groups of quadratic fields through binary quadratic forms.
//
// Negative discriminants use positive definite reduced forms. Positive
// discriminants use cycles of reduced indefinite forms under rho; a class of
// Cl(O_k) (the wide group) is a narrow class taken modulo the class of
// the form (-1, b0, c0).

#include "shimura/arith/polynomial.hpp"
#include "shimura/classgrp/quadform.hpp"
#include "shimura/numfield/number_field.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace shimura {

/// Principal form: (1, 0, -D/4) or (1, 1, (1-D)/4).
QuadForm principal_form(std::int64_t D);

/// Reduced definite form: |b| <= a <= c, with b >= 0 if |b| = a or a = c.
bool is_reduced_definite(const QuadForm& f);
QuadForm reduce_definite(QuadForm f);

/// Reduced indefinite form: |sqrt D - 2|a|| < b < sqrt D.
bool is_reduced_indefinite(const QuadForm& f);
QuadForm rho(const QuadForm& f);

struct ClassGroupResult {
  std::int64_t discriminant = 0;
  std::int64_t h = 0;
  std::vector<QuadForm> forms;  ///< one canonical representative per class, sorted
};

/// Class group of Q(sqrt D). For D < 0 the representatives are exactly the
/// reduced forms. For D > 0 they are canonical wide-class representatives.
ClassGroupResult class_group(std::int64_t D);

/// Canonical representative of the class of f in Cl(O_k).
QuadForm canonical_form(const QuadForm& f);

/// Composition of classes; the result is the canonical representative.
QuadForm compose_reduced(const QuadForm& f, const QuadForm& g);

/// Fundamental unit (t + u sqrt D)/2 > 1 of a real quadratic order, with its norm.
struct FundamentalUnit {
  BigInt t;
  BigInt u;
  int norm = 1;
};
FundamentalUnit fundamental_unit(std::int64_t D);

/// One element of the generating set S together with its alpha.
struct ClassGroupGenerator {
  PrimeIdealHandle prime;                 ///< q splits completely; form set for quadratic k
  IntPolynomial alpha;                    ///< polynomial in the field generator
  /// sigma(alpha) = conjugates[j] / conjugate_denominator over all sigma in
  /// Gal(k/Q). The denominator is 1 unless Z[theta] is not Galois stable.
  std::vector<IntPolynomial> conjugates;
  BigInt conjugate_denominator = 1;

  friend bool operator==(const ClassGroupGenerator&, const ClassGroupGenerator&) = default;
};

struct ClassGroupData {
  NumberField field = NumberField::rationals();
  std::int64_t h = 1;
  std::vector<ClassGroupGenerator> S;
  std::string provenance;  ///< "computed" or "ingested"

  /// Schema of the class-data file. Provenance is included.
  nlohmann::json to_json() const;
};

class ClassDataRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimal generating set of split primes and generators alpha with
/// q^h = alpha O_k. Throws std::runtime_error when no generating set is found
/// among primes <= search_bound.
ClassGroupData generating_primes(const NumberField& k, std::int64_t search_bound = 10000);

/// Loads class data from the JSON schema of ClassGroupData::to_json() and
/// re-verifies every invariant. Throws ClassDataRejected naming the failed check.
ClassGroupData ingest_class_data(const NumberField& k, const nlohmann::json& payload);

/// Norm_{k/Q} of an element given as a polynomial in the field generator.
BigInt field_norm(const NumberField& k, const IntPolynomial& element);

}  // namespace shimura
