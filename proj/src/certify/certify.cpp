#include "shimura/certify/certify.hpp"

#include "shimura/arith/factor.hpp"
#include "shimura/classgrp/class_group.hpp"
#include "shimura/lemma/lemma_oracle.hpp"

#include <numeric>

namespace shimura {

namespace {

nlohmann::json splitting_json(const PrimeSplitting& s) { return {{"p", s.p}, {"e", s.e}, {"f", s.f}, {"g", s.g}}; }

nlohmann::json bigint_list(const std::vector<BigInt>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

bool squarefree(std::int64_t n) {
  n = n < 0 ? -n : n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

bool elementary_two_group(const ClassGroupResult& cg) {
  const QuadForm one = canonical_form(principal_form(cg.discriminant));
  for (const auto& f : cg.forms) {
    if (!(compose_reduced(f, f) == one)) return false;
  }
  return true;
}

HypothesisEntry hcf_entry(const std::string& name, const HcfResult& r) {
  return {name, r.pass ? AuditStatus::pass : AuditStatus::fail, r.evidence};
}

struct Exclusion {
  nlohmann::json json;
  std::optional<std::string> symbolic_reason;
};

Exclusion exclusion_set(const NumberField& wf, const QuaternionAlgebra& B, const CertifyOptions& options) {
  Exclusion ex;
  nlohmann::json disc_primes = nlohmann::json::array();
  for (auto p : B.ramified_primes()) disc_primes.push_back(p);

  auto symbolic = [&](std::string reason, nlohmann::json inputs) {
    inputs["working_field"] = wf.to_json();
    inputs["budget"] = to_string(options.enumeration.budget);
    ex.json = {{"status", "defined_not_enumerated"},
               {"definition", "N1 = N0 u T u Ram of the working field"},
               {"reason", reason},
               {"inputs", inputs},
               {"disc_primes", disc_primes}};
    ex.symbolic_reason = std::move(reason);
    return ex;
  };

  std::optional<ClassGroupData> cg;
  if (options.class_data) {
    cg = ingest_class_data(wf, *options.class_data);
  } else if (wf.kind() == FieldKind::quadratic) {
    cg = generating_primes(wf);
  } else if (wf.degree() == 1) {
    cg = ClassGroupData{wf, 1, {}, "computed"};
  }
  if (!cg) {
    const BigInt eps = pow(BigInt(5), static_cast<unsigned long>(wf.degree()));
    return symbolic("class data for a field of degree " + std::to_string(wf.degree()) + " is not computed natively",
                    {{"class_data", nullptr}, {"epsilon_vectors_per_generator", to_string(eps)}});
  }
  if (cg->S.empty()) {
    // h = 1 over Q: no generator, so N1 = T u Ram with T = {2, 3}.
    ex.json = {{"status", "enumerated"}, {"N1", {"2", "3"}}, {"N0", nlohmann::json::array()}, {"disc_primes", disc_primes}};
    return ex;
  }
  const BigInt estimate = enumeration_size(*cg);
  if (estimate > options.enumeration.budget) {
    return symbolic("enumeration of " + to_string(estimate) + " triples exceeds the budget",
                    {{"class_data", cg->to_json()}, {"estimate", to_string(estimate)}});
  }
  const BadPrimeSets sets = n1_set(wf, *cg, options.enumeration);
  if (!sets.complete) {
    return symbolic("factorization incomplete", {{"class_data", cg->to_json()},
                                                  {"N0_partial", bigint_list(sets.N0)},
                                                  {"unfactored", bigint_list(sets.unfactored)}});
  }
  ex.json = sets.to_json();
  ex.json.erase("field");
  ex.json["status"] = "enumerated";
  ex.json["disc_primes"] = disc_primes;
  return ex;
}

}  // namespace

std::string to_string(AuditStatus s) {
  switch (s) {
    case AuditStatus::pass:
      return "pass";
    case AuditStatus::fail:
      return "fail";
    case AuditStatus::external:
      return "external";
  }
  return "unknown";
}

bool HypothesisAudit::all_pass() const { return first_failure() == nullptr; }

const HypothesisEntry* HypothesisAudit::first_failure() const {
  for (const auto& e : entries) {
    if (e.status != AuditStatus::pass) return &e;
  }
  return nullptr;
}

nlohmann::json HypothesisAudit::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : entries) out.push_back({{"name", e.name}, {"status", to_string(e.status)}, {"evidence", e.evidence}});
  return out;
}

std::vector<std::int64_t> prime_discriminant_factors(std::int64_t D) {
  if (!is_fundamental_discriminant(D)) throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(D));
  std::vector<std::int64_t> out;
  std::int64_t rest = D;
  std::int64_t m = D < 0 ? -D : D;
  while (m % 2 == 0) m /= 2;
  for (std::int64_t p = 3; p * p <= m; p += 2) {
    if (m % p != 0) continue;
    m /= p;
    const std::int64_t star = p % 4 == 1 ? p : -p;
    out.push_back(star);
    rest /= star;
  }
  if (m > 1) {
    const std::int64_t star = m % 4 == 1 ? m : -m;
    out.push_back(star);
    rest /= star;
  }
  if (rest != 1) out.push_back(rest);  // -4, 8 or -8
  std::sort(out.begin(), out.end());
  return out;
}

HcfResult hcf_free(const NumberField& k) {
  HcfResult r;
  r.evidence = nlohmann::json::array();
  for (const auto& L : quadratic_subfields(k).imaginary) {
    const std::int64_t D = L.discriminant();
    const auto cg = class_group(D);
    const auto primes = prime_discriminant_factors(D);
    const std::int64_t mu = static_cast<std::int64_t>(primes.size());
    const bool genus_order = cg.h == (std::int64_t{1} << (mu - 1));
    const bool elementary = elementary_two_group(cg);
    bool genus_in_k = true;
    for (auto p : primes) genus_in_k = genus_in_k && k.contains_quadratic(p);
    const bool contained = genus_order && elementary && genus_in_k;
    r.evidence.push_back({{"L", L.name()},
                          {"D", D},
                          {"h", cg.h},
                          {"mu", mu},
                          {"h_is_2^(mu-1)", genus_order},
                          {"elementary", elementary},
                          {"genus_generators", primes},
                          {"genus_field_in_k", genus_in_k},
                          {"hilbert_class_field_in_k", contained}});
    if (contained && r.pass) {
      r.pass = false;
      r.witness = L;
    }
  }
  return r;
}

nlohmann::json Witness::to_json() const {
  return {{"q", q}, {"splitting", splitting_json(splitting)}, {"norm", to_string(norm)}, {"B_over_Q(sqrt(-q))", nonsplit.to_json()}};
}

std::optional<Witness> find_witness(const NumberField& k, const QuaternionAlgebra& B, std::int64_t bound,
                                    const std::optional<NumberField>& unramified_in) {
  const NumberField& base = unramified_in ? *unramified_in : k;
  if (bound < 2) throw std::invalid_argument("find_witness: bound must be at least 2");
  std::optional<Witness> best;
  for (std::int64_t q = 2; q <= bound; ++q) {
    if (best && best->norm <= q) break;  // N(q) >= q
    if (!is_prime(BigInt(static_cast<long>(q)))) continue;
    const PrimeSplitting s = splitting_data(k, q);
    if (base.is_ramified(q)) continue;
    if (s.f % 2 == 0) continue;
    const BigInt norm = pow(BigInt(static_cast<long>(q)), static_cast<unsigned long>(s.f));
    if (best && best->norm <= norm) continue;
    auto report = splits_over(B, NumberField::quadratic(imaginary_discriminant_of_prime(q)));
    if (report.splits) continue;
    best = Witness{q, s, norm, std::move(report)};
  }
  return best;
}

nlohmann::json WField::to_json() const {
  return {{"N", N},
          {"W", W.to_json()},
          {"kW", kW.to_json()},
          {"hcf_free", hcf.evidence},
          {"q_in_k", splitting_json(q_in_k)},
          {"q_in_kW", splitting_json(q_in_kW)},
          {"B_over_kW", splitting.to_json()}};
}

WField find_W(const NumberField& k, const QuaternionAlgebra& B, std::int64_t q, std::int64_t scan_bound) {
  const std::int64_t d = discriminant(B);
  if (splits_over(B, k).splits) throw std::invalid_argument("find_W: B already splits over k");
  const PrimeSplitting q_in_k = splitting_data(k, q);
  if (q_in_k.e > 1) throw std::invalid_argument("find_W: q is ramified in k");
  const std::int64_t step = std::lcm(d, q);
  for (std::int64_t n = step; n <= scan_bound; n += step) {
    if (!squarefree(n)) continue;
    for (std::int64_t N : {-n, n}) {
      if (N == 1) continue;
      WField w;
      w.N = N;
      w.W = NumberField::quadratic(fundamental_discriminant_of(BigInt(static_cast<long>(N))));
      w.kW = k.degree() == 1 ? w.W : (k.contains(w.W) ? k : NumberField::compositum({k, w.W}));
      w.q_in_k = q_in_k;
      w.q_in_kW = splitting_data(w.kW, q);
      if (w.q_in_kW.e != 2 * q_in_k.e || w.q_in_kW.f != q_in_k.f) continue;
      w.splitting = splits_over(B, w.kW);
      if (!w.splitting.splits) continue;
      w.hcf = hcf_free(w.kW);
      if (!w.hcf.pass) continue;
      return w;
    }
  }
  throw std::runtime_error("find_W: no admissible N with |N| <= " + std::to_string(scan_bound));
}

BigInt threshold(const BigInt& witness_norm) {
  const BigInt four_n = 4 * witness_norm;
  return four_n > 13 ? four_n : BigInt(13);
}

std::string Certificate::dump() const { return body.dump(2) + "\n"; }

Inapplicable::Inapplicable(std::string hypothesis, HypothesisAudit audit)
    : std::runtime_error("inapplicable: hypothesis '" + hypothesis + "' fails"),
      hypothesis_(std::move(hypothesis)),
      audit_(std::move(audit)) {}

CertificateWithheld::CertificateWithheld(std::string reason, Certificate draft)
    : std::runtime_error("certificate withheld: exclusion set not enumerated (" + reason + ")"), draft_(std::move(draft)) {}

Certificate certify(const NumberField& k, const QuaternionAlgebra& B, const CertifyOptions& options) {
  const std::int64_t d = discriminant(B);
  HypothesisAudit audit;
  audit.entries.push_back({"k_abelian", AuditStatus::pass, {{"modulus", k.modulus()}, {"degree", k.degree()}}});

  const HcfResult hcf_k = hcf_free(k);
  audit.entries.push_back(hcf_entry("k_contains_no_imaginary_hilbert_class_field", hcf_k));
  if (!hcf_k.pass) throw Inapplicable(audit.entries.back().name, audit);

  const auto witness = find_witness(k, B, options.witness_bound);
  if (!witness) {
    audit.entries.push_back({"odd_degree_witness_prime", AuditStatus::fail,
                             {{"reason", "no witness below bound"}, {"bound", options.witness_bound}}});
    throw Inapplicable(audit.entries.back().name, audit);
  }
  audit.entries.push_back({"odd_degree_witness_prime", AuditStatus::pass, witness->to_json()});

  const SplittingReport over_k = splits_over(B, k);
  nlohmann::json body;
  NumberField working = k;
  BigInt norm = witness->norm;
  nlohmann::json witness_json = {{"q", witness->q}, {"norm", to_string(norm)}, {"prime_in_k", splitting_json(witness->splitting)}};
  if (over_k.splits) {
    audit.entries.push_back({"B_split_over_k", AuditStatus::pass, over_k.to_json()});
    body["route"] = "direct";
    body["W"] = nullptr;
  } else {
    // Not a failure: it selects the route through W.
    audit.entries.push_back({"B_nonsplit_over_k_route_via_W", AuditStatus::pass, over_k.to_json()});
    WField w;
    try {
      w = find_W(k, B, witness->q, options.w_scan_bound);
    } catch (const std::runtime_error& e) {
      audit.entries.push_back({"splitting_field_W", AuditStatus::fail, {{"reason", e.what()}}});
      throw Inapplicable(audit.entries.back().name, audit);
    }
    // Re-check every property of W rather than trusting the scan.
    const bool shape = squarefree(w.N) && w.N % d == 0 && w.N % witness->q == 0;
    audit.entries.push_back({"W_squarefree_with_d_and_q_dividing_N", shape ? AuditStatus::pass : AuditStatus::fail,
                             {{"N", w.N}, {"d", d}, {"q", witness->q}}});
    const HcfResult hcf_kw = hcf_free(w.kW);
    audit.entries.push_back(hcf_entry("kW_contains_no_imaginary_hilbert_class_field", hcf_kw));
    const PrimeSplitting q_kw = splitting_data(w.kW, witness->q);
    const bool ramifies = q_kw.e == 2 * witness->splitting.e && q_kw.f == witness->splitting.f && q_kw.f % 2 == 1;
    audit.entries.push_back({"witness_ramifies_in_kW_with_same_norm", ramifies ? AuditStatus::pass : AuditStatus::fail,
                             {{"q_in_k", splitting_json(witness->splitting)}, {"q_in_kW", splitting_json(q_kw)}}});
    const SplittingReport over_kw = splits_over(B, w.kW);
    audit.entries.push_back({"B_split_over_kW", over_kw.splits ? AuditStatus::pass : AuditStatus::fail, over_kw.to_json()});
    if (const auto* f = audit.first_failure()) throw Inapplicable(f->name, audit);
    working = w.kW;
    witness_json["prime_in_kW"] = splitting_json(q_kw);
    body["route"] = "via_W";
    body["W"] = {{"N", w.N}, {"field", w.W.to_json()}, {"name", w.W.name()}};
  }

  const BigInt p0 = threshold(norm);
  const Exclusion ex = exclusion_set(working, B, options);

  nlohmann::json disc_primes = nlohmann::json::array();
  for (auto p : B.ramified_primes()) disc_primes.push_back(p);
  body["schema"] = "shimura-gate/certificate";
  body["schema_version"] = kCertificateSchemaVersion;
  body["tool_version"] = kToolVersion;
  body["field"] = {{"spec", k.to_json()}, {"name", k.name()}, {"degree", k.degree()}};
  body["working_field"] = {{"spec", working.to_json()}, {"name", working.name()}, {"degree", working.degree()}};
  body["quaternion"] = {{"disc", d}, {"ramified_primes", disc_primes}};
  body["witness"] = witness_json;
  body["threshold"] = {{"P0", to_string(p0)},
                       {"rule", "P0 = max(4 N, 13), p > P0"},
                       {"four_N", to_string(4 * norm)},
                       {"implies_p_at_least_11", true},
                       {"implies_p_not_13", true}};
  body["exclusion"] = ex.json;
  body["audit"] = audit.to_json();
  body["conclusion"] = "for every prime p with p > " + to_string(p0) + ", p not dividing " + std::to_string(d) +
                       ", p not in E: M_0^B(p)(" + k.name() + ") is empty";
  Certificate cert{std::move(body)};
  if (ex.symbolic_reason && !options.allow_symbolic) throw CertificateWithheld(*ex.symbolic_reason, cert);
  return cert;
}

}  // namespace shimura
