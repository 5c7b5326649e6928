// Acceptance run: one PASS/FAIL line per criterion, with its time limit.
// Exit status is the number of failed criteria.

#include "shimura/arith/factor.hpp"
#include "shimura/badprimes/bad_primes.hpp"
#include "shimura/certify/certify.hpp"
#include "shimura/classgrp/class_group.hpp"
#include "shimura/lemma/lemma_oracle.hpp"
#include "shimura/numfield/number_field.hpp"
#include "shimura/quatalg/quaternion.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifndef SHIMURA_TEST_DATA_DIR
#define SHIMURA_TEST_DATA_DIR "tests/data"
#endif

using namespace shimura;

namespace {

// Collects failed checks for one criterion.
struct Checks {
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<void(Checks&)> body;
};

NumberField zeta31() { return NumberField::cyclotomic(31); }

bool is_perfect_square(std::int64_t n) {
  if (n < 0) return false;
  std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

bool prime_small(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Reduced positive definite forms of discriminant D by exhaustive search over
// a <= sqrt(|D|/3) and |b| <= a.
std::int64_t reduced_form_count(std::int64_t D) {
  std::int64_t count = 0;
  for (std::int64_t a = 1; 3 * a * a <= -D; ++a) {
    for (std::int64_t b = -a + 1; b <= a; ++b) {
      const std::int64_t num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const std::int64_t c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      ++count;
    }
  }
  return count;
}

nlohmann::json read_json(const std::string& name) {
  std::ifstream in(std::string(SHIMURA_TEST_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("missing test data " + name);
  return nlohmann::json::parse(in);
}

std::vector<std::string> to_strings(const std::vector<BigInt>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

// Values emitted during criterion 9, reused by criterion 11.
std::vector<FactoredValue> g_factored;

void criterion9_field(Checks& c, std::int64_t D, const std::string& oracle_file, const std::vector<long>& must_contain) {
  const auto k = NumberField::quadratic(D);
  const auto cg = generating_primes(k);
  const std::string tag = "D=" + std::to_string(D) + ": ";
  std::vector<FactoredValue> factored;
  const auto sets = n1_set(k, cg, {}, &factored);
  c.require(sets.complete, tag + "N1 incomplete");
  std::set<BigInt> n1(sets.N1.begin(), sets.N1.end());
  for (long p : must_contain) c.require(n1.count(BigInt(p)) == 1, tag + "N1 lacks " + std::to_string(p));

  const auto oracle = read_json(oracle_file);
  c.require(oracle["N1"].get<std::vector<std::string>>() == to_strings(sets.N1), tag + "N1 differs from the oracle");
  c.require(oracle["N0"].get<std::vector<std::string>>() == to_strings(sets.N0), tag + "N0 differs from the oracle");
  c.require(oracle["q"].get<std::int64_t>() == cg.S.at(0).prime.q, tag + "generating prime differs from the oracle");
  c.require(oracle["zeros"].get<std::uint64_t>() == sets.excluded, tag + "excluded count differs from the oracle");

  std::set<std::string> values;
  for (const auto& r : m2_values(k, cg)) {
    if (!r.excluded()) values.insert(to_string(abs(r.value)));
  }
  const auto ov = oracle["values"].get<std::vector<std::string>>();
  c.require(std::set<std::string>(ov.begin(), ov.end()) == values, tag + "M2 values differ from the oracle");
  for (auto& f : factored) g_factored.push_back(std::move(f));
}

std::vector<Criterion> criteria() {
  std::vector<Criterion> out;

  out.push_back({1, "splitting data of 2, 3, 11 in Q(zeta_31)", 1.0, [](Checks& c) {
                   const auto k = zeta31();
                   c.require(splitting_data(k, 2) == PrimeSplitting{2, 1, 5, 6}, "p=2 is not (1,5,6)");
                   c.require(splitting_data(k, 3) == PrimeSplitting{3, 1, 30, 1}, "p=3 is not (1,30,1)");
                   c.require(splitting_data(k, 11) == PrimeSplitting{11, 1, 30, 1}, "p=11 is not (1,30,1)");
                 }});

  out.push_back({2, "quaternion discriminants and splitting", 1.0, [](Checks& c) {
                   c.require(discriminant(QuaternionAlgebra::from_pair(6, 5)) == 6, "disc(6,5) != 6");
                   c.require(discriminant(QuaternionAlgebra::from_pair(22, 13)) == 22, "disc(22,13) != 22");
                   const auto r = splits_over(QuaternionAlgebra::from_discriminant(6), zeta31());
                   c.require(!r.splits, "d=6 splits over Q(zeta_31)");
                   const auto w = r.witness();
                   c.require(w && w->p == 2 && w->local_degree() == 5, "witness is not p=2 with local degree 5");
                   for (std::int64_t d : {6, 22}) {
                     const auto L = NumberField::quadratic(fundamental_discriminant_of(BigInt(static_cast<long>(-d))));
                     c.require(splits_over(QuaternionAlgebra::from_discriminant(d), L).splits,
                               "d=" + std::to_string(d) + " does not split over Q(sqrt(-d))");
                   }
                 }});

  out.push_back({3, "class numbers and reduced-form oracle", 30.0, [](Checks& c) {
                   c.require(class_group(-24).h == 2, "h(-24) != 2");
                   c.require(class_group(-31).h == 3, "h(-31) != 3");
                   int checked = 0;
                   for (std::int64_t D = -3; D >= -2000; --D) {
                     if (!is_fundamental_discriminant(D)) continue;
                     ++checked;
                     const auto cg = class_group(D);
                     const auto n = reduced_form_count(D);
                     c.require(cg.h == n && static_cast<std::int64_t>(cg.forms.size()) == n,
                               "class count mismatch at D=" + std::to_string(D));
                   }
                   c.require(checked > 600, "too few discriminants checked");
                 }});

  out.push_back({4, "imaginary quadratic subfields of Q(zeta_31)Q(sqrt(-6))", 1.0, [](Checks& c) {
                   const auto k = NumberField::compositum({zeta31(), NumberField::quadratic(-24)});
                   std::set<std::int64_t> found;
                   for (const auto& L : quadratic_subfields(k).imaginary) found.insert(L.discriminant());
                   c.require(found == std::set<std::int64_t>{-24, -31}, "subfields are not {Q(sqrt(-6)), Q(sqrt(-31))}");
                 }});

  out.push_back({5, "worked certificates for d = 6, 22 over Q(zeta_31)", 5.0, [](Checks& c) {
                   CertifyOptions opts;
                   opts.allow_symbolic = true;
                   for (std::int64_t d : {6, 22}) {
                     const std::string tag = "d=" + std::to_string(d) + ": ";
                     const auto body = certify(zeta31(), QuaternionAlgebra::from_discriminant(d), opts).body;
                     const auto W = NumberField::quadratic(fundamental_discriminant_of(BigInt(static_cast<long>(-d))));
                     c.require(body["route"] == "via_W", tag + "route is not via W");
                     c.require(body["W"]["N"] == -d && body["W"]["field"] == W.to_json(), tag + "W is not Q(sqrt(-d))");
                     c.require(body["witness"]["norm"] == "32", tag + "witness norm is not 32");
                     c.require(body["threshold"]["P0"] == "128", tag + "P0 is not 128");
                     c.require(body["exclusion"]["status"] == "defined_not_enumerated", tag + "E is not symbolic");
                   }
                 }});

  out.push_back({6, "conic local solvability", 1.0, [](Checks& c) {
                   c.require(!conic_local_solvable(1, 1, 3, Place::prime(3), 1), "(1,1,3) solvable at 3, degree 1");
                   c.require(conic_local_solvable(1, 1, 3, Place::prime(5), 1), "(1,1,3) not solvable at 5, degree 1");
                   c.require(conic_local_solvable(1, 1, 3, Place::prime(3), 30), "(1,1,3) not solvable at 3, degree 30");
                   for (std::int64_t p = 2; p < 1000; ++p) {
                     if (!prime_small(p)) continue;
                     const bool ok = conic_local_solvable(1, 1, 11, Place::prime(p), 1);
                     c.require(ok == (p != 11), "(1,1,11) at p=" + std::to_string(p));
                   }
                 }});

  out.push_back({7, "Hilbert product formula on 500 random pairs", 10.0, [](Checks& c) {
                   std::mt19937_64 rng(20240607);
                   std::uniform_int_distribution<long> dist(-10000, 10000);
                   int done = 0;
                   while (done < 500) {
                     const long a = dist(rng), b = dist(rng);
                     if (a == 0 || b == 0) continue;
                     ++done;
                     std::set<std::int64_t> places{2};
                     for (long m : {a, b}) {
                       long r = m < 0 ? -m : m;
                       for (long p = 2; p * p <= r; ++p) {
                         while (r % p == 0) {
                           places.insert(p);
                           r /= p;
                         }
                       }
                       if (r > 1) places.insert(r);
                     }
                     int product = hilbert_symbol(a, b, Place::infinity());
                     for (auto p : places) product *= hilbert_symbol(a, b, Place::prime(p));
                     c.require(product == 1, "product formula fails for (" + std::to_string(a) + ", " + std::to_string(b) + ")");
                   }
                 }});

  out.push_back({8, "lemma sweep over p = 3 mod 4 in [11, 500]", 60.0, [](Checks& c) {
                   long cases = 0;
                   for (std::int64_t p = 11; p <= 500; ++p) {
                     if (p % 4 != 3 || p == 13 || !prime_small(p)) continue;
                     for (std::int64_t q = 2; 4 * q < p; ++q) {
                       if (!prime_small(q)) continue;
                       for (std::int64_t N = q; 4 * N < p; N *= q * q) {
                         ++cases;
                         const auto tc = trace_cases(N, p);
                         const std::string tag = "p=" + std::to_string(p) + " N=" + std::to_string(N);
                         c.require(tc.size_bound_applies, tag + ": size bound not applied");
                         for (auto r : tc.plus.resolutions) c.require(!is_perfect_square(r), tag + ": square in +1 branch");
                         for (auto r : tc.minus.resolutions) c.require(r == 0 || r == 3 * N, tag + ": -1 branch outside {0, 3N}");
                         c.require(!tc.minus.resolutions.empty(), tag + ": -1 branch unresolved");
                       }
                     }
                   }
                   c.require(cases > 100, "sweep too small");
                 }});

  out.push_back({9, "N1 of Q(i) and Q(sqrt 5) against the brute-force oracle", 600.0, [](Checks& c) {
                   g_factored.clear();
                   criterion9_field(c, -4, "n1_oracle_Dm4.json", {2, 3, 5});
                   criterion9_field(c, 5, "n1_oracle_D5.json", {2, 3, 5, 11});
                 }});

  out.push_back({10, "certificate for Q(sqrt 5), d = 6: content and byte stability", 600.0, [](Checks& c) {
                    const auto k = NumberField::quadratic(5);
                    const auto B = QuaternionAlgebra::from_discriminant(6);
                    CertifyOptions opts;
                    opts.enumeration.threads = 1;
                    const std::string one = certify(k, B, opts).dump();
                    const std::string again = certify(k, B, opts).dump();
                    opts.enumeration.threads = 4;
                    const std::string four = certify(k, B, opts).dump();
                    opts.enumeration.threads = 0;
                    const std::string all = certify(k, B, opts).dump();
                    c.require(one == again, "two runs differ");
                    c.require(one == four && one == all, "thread counts change the certificate");
                    const auto body = nlohmann::json::parse(one);
                    c.require(body["route"] == "direct", "route is not direct");
                    c.require(body["witness"]["q"] == 11, "witness q is not 11");
                    c.require(body["threshold"]["P0"] == "44", "P0 is not 44");
                    c.require(body["exclusion"]["status"] == "enumerated" && body["exclusion"]["complete"] == true,
                              "E is not fully enumerated");
                  }});

  out.push_back({11, "factorization soundness", 5.0, [](Checks& c) {
                    c.require(!g_factored.empty(), "criterion 9 produced no values");
                    for (const auto& f : g_factored) {
                      c.require(f.factorization.recompose() == f.value, "recomposition fails for " + to_string(f.value));
                      for (const auto& pp : f.factorization.factors) c.require(is_prime(pp.prime), "non-prime factor");
                    }
                    const BigInt n = pow(BigInt(5), 12) - 1;
                    const auto fr = factorize(n);
                    c.require(fr.primes() == std::vector<BigInt>{2, 3, 7, 13, 31, 601}, "support of 5^12 - 1");
                    c.require(fr.recompose() == n, "5^12 - 1 does not recompose");
                  }});
  return out;
}

}  // namespace

int main() {
  int failed = 0;
  for (const auto& cr : criteria()) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(checks);
    } catch (const std::exception& e) {
      checks.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.limit_seconds) {
      std::ostringstream os;
      os << "took " << secs << " s";
      checks.failures.push_back(os.str());
    }
    const bool ok = checks.failures.empty();
    if (!ok) ++failed;
    std::printf("%s criterion %2d: %s [%.2f s / limit %.0f s]%s%s\n", ok ? "PASS" : "FAIL", cr.id, cr.title.c_str(), secs,
                cr.limit_seconds, ok ? "" : " -- ", ok ? "" : checks.failures.front().c_str());
    for (std::size_t i = 1; i < checks.failures.size() && i < 5; ++i) std::printf("    also: %s\n", checks.failures[i].c_str());
  }
  std::printf("%d of 11 criteria failed\n", failed);
  return failed;
}
