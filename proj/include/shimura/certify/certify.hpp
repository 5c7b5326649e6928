#pragma once

// Hypothesis audit and certificate assembly for Shimura curves M_0^B(p) over
// abelian fields.
//
// Two routes. If B splits over k, the certificate is about k itself. If not,
// a quadratic field W = Q(sqrt N) with d q | N is adjoined so that B splits
// over kW and the witness prime ramifies, keeping an odd-degree prime of the
// same norm; the certificate is then about kW (which also covers k).

#include "shimura/badprimes/bad_primes.hpp"
#include "shimura/numfield/number_field.hpp"
#include "shimura/quatalg/quaternion.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shimura {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kCertificateSchemaVersion = 1;

enum class AuditStatus { pass, fail, external };
std::string to_string(AuditStatus s);

struct HypothesisEntry {
  std::string name;
  AuditStatus status = AuditStatus::pass;
  nlohmann::json evidence;
};

struct HypothesisAudit {
  std::vector<HypothesisEntry> entries;

  bool all_pass() const;
  /// First entry that is not a pass.
  const HypothesisEntry* first_failure() const;
  nlohmann::json to_json() const;
};

/// Prime discriminants whose product is D, e.g. -24 -> {-3, 8}.
std::vector<std::int64_t> prime_discriminant_factors(std::int64_t D);

struct HcfResult {
  bool pass = true;
  std::optional<NumberField> witness;  ///< L with H_L inside k
  nlohmann::json evidence;             ///< one entry per imaginary quadratic subfield
};

/// Whether k contains the Hilbert class field of no imaginary quadratic field.
/// For L inside k, H_L is inside k iff Cl_L is elementary 2-abelian of order
/// 2^(mu-1) and every prime discriminant dividing disc L gives a subfield of k.
HcfResult hcf_free(const NumberField& k);

struct Witness {
  std::int64_t q = 0;
  PrimeSplitting splitting;  ///< of q in the field searched
  BigInt norm;               ///< q^f
  SplittingReport nonsplit;  ///< B over Q(sqrt -q); splits == false

  nlohmann::json to_json() const;
};

/// Least-norm prime of k of odd residue degree whose characteristic q has B
/// non-split over Q(sqrt -q), among q <= bound. Ties go to the smaller q.
/// q must be unramified in `unramified_in` (default: k itself); pass the base
/// field when k = k0 W to search for primes above q unramified in k0.
std::optional<Witness> find_witness(const NumberField& k, const QuaternionAlgebra& B, std::int64_t bound = 1000,
                                    const std::optional<NumberField>& unramified_in = std::nullopt);

struct WField {
  std::int64_t N = 0;
  NumberField W = NumberField::rationals();
  NumberField kW = NumberField::rationals();
  HcfResult hcf;
  PrimeSplitting q_in_k;
  PrimeSplitting q_in_kW;
  SplittingReport splitting;

  nlohmann::json to_json() const;
};

/// First squarefree N, by |N| then sign (negative first), with d | N and q | N
/// such that kW_N contains no imaginary Hilbert class field, q ramifies in
/// kW_N with unchanged residue degree, and B splits over kW_N.
/// Throws std::runtime_error when |N| exceeds scan_bound.
WField find_W(const NumberField& k, const QuaternionAlgebra& B, std::int64_t q, std::int64_t scan_bound = 100000);

/// Threshold max(4 N, 13).
BigInt threshold(const BigInt& witness_norm);

struct CertifyOptions {
  std::int64_t witness_bound = 1000;
  std::int64_t w_scan_bound = 100000;
  EnumerationOptions enumeration;
  /// Class data for the working field; otherwise computed when possible.
  std::optional<nlohmann::json> class_data;
  /// Emit a certificate whose exclusion set is defined but not enumerated.
  bool allow_symbolic = false;
};

struct Certificate {
  nlohmann::json body;

  /// Canonical serialization: sorted keys, two-space indent, trailing newline.
  std::string dump() const;
};

/// A hypothesis failed; the audit records which.
class Inapplicable : public std::runtime_error {
 public:
  Inapplicable(std::string hypothesis, HypothesisAudit audit);
  const std::string& hypothesis() const { return hypothesis_; }
  const HypothesisAudit& audit() const { return audit_; }

 private:
  std::string hypothesis_;
  HypothesisAudit audit_;
};

/// Every hypothesis holds but the exclusion set was not enumerated and
/// symbolic output was not allowed. `draft` is the certificate that was held back.
class CertificateWithheld : public std::runtime_error {
 public:
  CertificateWithheld(std::string reason, Certificate draft);
  const Certificate& draft() const { return draft_; }

 private:
  Certificate draft_;
};

Certificate certify(const NumberField& k, const QuaternionAlgebra& B, const CertifyOptions& options = {});

}  // namespace shimura
