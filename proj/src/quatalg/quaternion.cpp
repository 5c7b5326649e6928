#include "shimura/quatalg/quaternion.hpp"

#include "shimura/arith/factor.hpp"
#include "shimura/arith/kronecker.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace shimura {

namespace {

// x mod 8 for odd x, as 1, 3, 5 or 7.
unsigned long mod8(const BigInt& x) {
  return static_cast<unsigned long>(mpz_fdiv_ui(x.get_mpz_t(), 8));
}

int eps2(const BigInt& u) { return mod8(u) % 4 == 3 ? 1 : 0; }

int omega2(const BigInt& u) {
  const unsigned long r = mod8(u);
  return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace

Place Place::prime(std::int64_t p) {
  if (!is_prime_small(p)) throw std::invalid_argument("not a prime place: " + std::to_string(p));
  return {p};
}

std::string Place::to_string() const { return is_infinite() ? "inf" : std::to_string(p); }

Place parse_place(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return Place::infinity();
  std::size_t used = 0;
  std::int64_t p = 0;
  try {
    p = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw std::invalid_argument("bad place: " + text);
  return Place::prime(p);
}

int hilbert_symbol(const BigInt& a, const BigInt& b, const Place& v) {
  if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol needs nonzero arguments");
  if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
  const BigInt p = static_cast<long>(v.p);
  BigInt u = a;
  BigInt w = b;
  const unsigned long alpha = remove_factor(u, p);
  const unsigned long beta = remove_factor(w, p);
  if (v.p == 2) {
    const int e = eps2(u) * eps2(w) + static_cast<int>(alpha % 2) * omega2(w) + static_cast<int>(beta % 2) * omega2(u);
    return e % 2 == 0 ? 1 : -1;
  }
  int result = 1;
  if ((alpha % 2 == 1) && (beta % 2 == 1) && (v.p % 4 == 3)) result = -result;
  if (beta % 2 == 1) result *= kronecker(u, p);
  if (alpha % 2 == 1) result *= kronecker(w, p);
  return result;
}

QuaternionAlgebra QuaternionAlgebra::from_pair(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) throw std::invalid_argument("quaternion algebra (a, b) needs nonzero a and b");
  QuaternionAlgebra B;
  B.pair_ = std::make_pair(a, b);
  std::set<std::int64_t> candidates{2};
  for (const auto& x : {a, b}) {
    for (const auto& p : factorize(x).primes()) candidates.insert(to_int64(p));
  }
  for (std::int64_t p : candidates) {
    if (hilbert_symbol(a, b, Place::prime(p)) == -1) B.ramified_.push_back(p);
  }
  B.indefinite_ = hilbert_symbol(a, b, Place::infinity()) == 1;
  return B;
}

QuaternionAlgebra QuaternionAlgebra::from_discriminant(std::int64_t d) {
  if (d < 1) throw std::invalid_argument("discriminant must be a positive integer");
  const auto primes = prime_divisors(d);
  std::int64_t prod = 1;
  for (auto p : primes) prod *= p;
  if (prod != d) throw std::invalid_argument("discriminant must be squarefree: " + std::to_string(d));
  if (primes.size() % 2 != 0) {
    throw std::invalid_argument("an indefinite algebra has an even number of ramified primes; d = " + std::to_string(d));
  }
  QuaternionAlgebra B;
  B.ramified_ = primes;
  B.indefinite_ = true;
  return B;
}

std::int64_t discriminant(const QuaternionAlgebra& B) {
  if (!B.indefinite()) throw std::domain_error("definite quaternion algebra (ramified at infinity)");
  std::int64_t d = 1;
  for (auto p : B.ramified_primes()) d *= p;
  return d;
}

std::optional<LocalSplitting> SplittingReport::witness() const {
  for (const auto& e : evidence) {
    if (!e.splits) return e;
  }
  return std::nullopt;
}

nlohmann::json SplittingReport::to_json() const {
  nlohmann::json ev = nlohmann::json::array();
  for (const auto& e : evidence) {
    ev.push_back({{"p", e.p}, {"e", e.e}, {"f", e.f}, {"local_degree", e.local_degree()}, {"splits", e.splits}});
  }
  return {{"splits", splits}, {"evidence", ev}};
}

SplittingReport splits_over(const QuaternionAlgebra& B, const NumberField& k) {
  if (!B.indefinite()) throw std::domain_error("splits_over supports indefinite algebras only");
  SplittingReport report;
  for (std::int64_t p : B.ramified_primes()) {
    const PrimeSplitting s = splitting_data(k, p);
    LocalSplitting ls{p, s.e, s.f, (s.e * s.f) % 2 == 0};
    report.splits = report.splits && ls.splits;
    report.evidence.push_back(ls);
  }
  return report;
}

bool conic_local_solvable(const BigInt& r, const BigInt& s, const BigInt& t, const Place& place, int local_degree,
                          int ramification) {
  if (r == 0 || s == 0 || t == 0) throw std::invalid_argument("conic coefficients must be nonzero");
  if (local_degree < 1) throw std::invalid_argument("local degree must be >= 1");
  if (ramification != 1) throw std::domain_error("ramified local extensions are not supported");
  if (place.is_infinite() && local_degree > 2) throw std::invalid_argument("the real place has local degree 1 or 2");
  // r x^2 + s y^2 + t z^2 = 0 is solvable iff (-s/r, -t/r) = (-rs, -rt) splits.
  if (hilbert_symbol(-r * s, -r * t, place) == 1) return true;
  return local_degree % 2 == 0;
}

}  // namespace shimura
