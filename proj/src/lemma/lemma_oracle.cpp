#include "shimura/lemma/lemma_oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace shimura {

namespace {

std::int64_t mod_p(__int128 x, std::int64_t p) {
  __int128 r = x % p;
  if (r < 0) r += p;
  return static_cast<std::int64_t>(r);
}

bool is_perfect_square(std::int64_t n) { return n >= 0 && is_square(BigInt(static_cast<long>(n))); }

// Exponent e with N = q^e, or 0 if N is not a power of q.
int power_of(std::int64_t N, std::int64_t q) {
  if (N < q || q < 2) return 0;
  int e = 0;
  while (N % q == 0) {
    N /= q;
    ++e;
  }
  return N == 1 ? e : 0;
}

TraceBranch make_branch(int sign, std::int64_t N, std::int64_t p, bool resolvable) {
  TraceBranch b;
  b.sign = sign;
  for (std::int64_t mult : {2 - sign, 2 + 2 * sign}) {
    const std::int64_t r = mod_p(static_cast<__int128>(mult) * N, p);
    if (std::find(b.residues.begin(), b.residues.end(), r) == b.residues.end()) b.residues.push_back(r);
  }
  if (resolvable) {
    for (std::int64_t r : b.residues) {
      (r <= 4 * N ? b.resolutions : b.impossible).push_back(r);
    }
  }
  std::sort(b.resolutions.begin(), b.resolutions.end());
  return b;
}

nlohmann::json branch_json(const TraceBranch& b) {
  return {{"sign", b.sign}, {"residues", b.residues}, {"resolutions", b.resolutions}, {"impossible", b.impossible}};
}

}  // namespace

int residue_sign(const BigInt& N, std::int64_t p) {
  if (p < 3 || !is_prime_small(p)) throw std::invalid_argument("residue_sign needs an odd prime, got " + std::to_string(p));
  const BigInt P = static_cast<long>(p);
  const BigInt r = powmod(mod_floor(N, P), BigInt((p - 1) / 2), P);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

TraceCases trace_cases(std::int64_t N, std::int64_t p) {
  if (p < 11 || !is_prime_small(p)) throw std::invalid_argument("trace_cases needs a prime p >= 11");
  if (N < 1) throw std::invalid_argument("trace_cases needs N >= 1");
  TraceCases tc;
  tc.N = N;
  tc.p = p;
  tc.size_bound_applies = static_cast<__int128>(4) * N < p;
  tc.plus = make_branch(1, N, p, tc.size_bound_applies);
  tc.minus = make_branch(-1, N, p, tc.size_bound_applies);
  return tc;
}

nlohmann::json TraceCases::to_json() const {
  nlohmann::json j{{"N", N}, {"p", p}, {"size_bound_applies", size_bound_applies}, {"plus", branch_json(plus)},
                   {"minus", branch_json(minus)}};
  if (!size_bound_applies) j["note"] = "size bound inapplicable";
  return j;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::contradiction_reached:
      return "contradiction_reached";
    case Verdict::consistent:
      return "consistent";
    case Verdict::not_applicable:
      return "not_applicable";
  }
  return "?";
}

std::int64_t imaginary_discriminant_of_prime(std::int64_t q) {
  if (!is_prime_small(q)) throw std::invalid_argument("not a prime: " + std::to_string(q));
  if (q == 2) return -8;
  return q % 4 == 3 ? -q : -4 * q;
}

EliminationResult elimination_verdict(const LemmaScenario& sc, const QuaternionAlgebra& B) {
  EliminationResult out;
  out.trace = {{"N", sc.N}, {"q", sc.q}, {"p", sc.p}};
  auto reject = [&](const std::string& why) {
    out.verdict = Verdict::not_applicable;
    out.reason = why;
    return out;
  };
  if (!is_prime_small(sc.q)) return reject("q is not prime");
  const int e = power_of(sc.N, sc.q);
  if (e == 0) return reject("N is not a power of q");
  if (e % 2 == 0) return reject("N is an even power of q");
  if (!is_prime_small(sc.p)) return reject("p is not prime");
  if (sc.p < 11) return reject("p < 11");
  if (sc.p == 13) return reject("p = 13");
  if (sc.p % 4 != 3) return reject("p is not 3 mod 4");
  if (sc.p == sc.q) return reject("p = q");
  if (static_cast<__int128>(4) * sc.N >= sc.p) return reject("N >= p/4");

  const TraceCases tc = trace_cases(sc.N, sc.p);
  out.trace["residue_sign"] = residue_sign(BigInt(static_cast<long>(sc.N)), sc.p);
  out.trace["trace_cases"] = tc.to_json();

  // Branch +1: a square trace^2 would be N or 4N, impossible for an odd power.
  nlohmann::json plus_squares = nlohmann::json::array();
  for (auto v : tc.plus.resolutions) {
    if (is_perfect_square(v)) plus_squares.push_back(v);
  }
  out.trace["plus_branch_squares"] = plus_squares;
  if (!plus_squares.empty()) throw std::logic_error("odd power of q produced a square in the +1 branch");

  // Branch -1: trace^2 in {3N, 0}; 3N is a square only for q = 3.
  nlohmann::json surviving = nlohmann::json::array();
  for (auto v : tc.minus.resolutions) {
    if (is_perfect_square(v)) surviving.push_back(v == 0 ? "trace = 0" : "q = 3 and trace^2 = 3N");
  }
  out.trace["surviving_cases"] = surviving;

  const std::int64_t D = imaginary_discriminant_of_prime(sc.q);
  const SplittingReport split = splits_over(B, NumberField::quadratic(D));
  out.trace["splits_over_Q_sqrt_minus_q"] = {{"D", D}, {"report", split.to_json()}};
  if (split.splits) {
    out.verdict = Verdict::consistent;
    out.reason = "surviving trace cases are compatible: B splits over Q(sqrt(-" + std::to_string(sc.q) + "))";
  } else {
    out.verdict = Verdict::contradiction_reached;
    const auto w = split.witness();
    out.reason = "B does not split over Q(sqrt(-" + std::to_string(sc.q) + ")); witness p = " + std::to_string(w->p);
  }
  return out;
}

}  // namespace shimura
