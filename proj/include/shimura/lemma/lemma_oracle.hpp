#pragma once

// Residue case analysis for candidate Frobenius traces.
//
// With s = N^((p-1)/2) mod p, the two congruences
//   beta^2 + conj(beta)^2 = -N^((p+1)/2) or 2 N^((p+1)/2)   (mod p)
// become (beta + conj(beta))^2 = (2 - s) N or (2 + 2s) N   (mod p).
// When 4N < p an integer in [0, 4N] is pinned down by its residue.

#include "shimura/quatalg/quaternion.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace shimura {

/// N^((p-1)/2) mod p as +1, -1 or 0. p must be an odd prime.
int residue_sign(const BigInt& N, std::int64_t p);

struct TraceBranch {
  int sign = 0;                            ///< assumed value of N^((p-1)/2)
  std::vector<std::int64_t> residues;      ///< (beta + conj beta)^2 mod p
  std::vector<std::int64_t> resolutions;   ///< exact values in [0, 4N], when resolvable
  std::vector<std::int64_t> impossible;    ///< residues with no integer in [0, 4N]
};

struct TraceCases {
  std::int64_t N = 0;
  std::int64_t p = 0;
  bool size_bound_applies = false;  ///< 4N < p
  TraceBranch plus;
  TraceBranch minus;

  nlohmann::json to_json() const;
};

/// Both branches; resolutions stay empty when 4N >= p.
TraceCases trace_cases(std::int64_t N, std::int64_t p);

struct LemmaScenario {
  std::int64_t N = 0;  ///< norm of the witness prime
  std::int64_t q = 0;  ///< its residual characteristic
  std::int64_t p = 0;
};

enum class Verdict { contradiction_reached, consistent, not_applicable };

std::string to_string(Verdict v);

struct EliminationResult {
  Verdict verdict = Verdict::not_applicable;
  std::string reason;
  nlohmann::json trace;
};

/// Replays the elimination: the +1 branch gives no square trace when N is an
/// odd power of q, so only (beta + conj beta)^2 in {3N, 0} survives, which
/// forces B to split over Q(sqrt -q). The verdict is a contradiction exactly
/// when B does not split there. Precondition failures give not_applicable.
EliminationResult elimination_verdict(const LemmaScenario& scenario, const QuaternionAlgebra& B);

/// Fundamental discriminant of Q(sqrt -q) for a prime q.
std::int64_t imaginary_discriminant_of_prime(std::int64_t q);

}  // namespace shimura
