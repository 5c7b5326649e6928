#include "shimura/numfield/number_field.hpp"

#include "shimura/arith/kronecker.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace shimura {

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / gcd64(a, b) * b; }

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}


bool is_squarefree(std::int64_t n) {
  n = n < 0 ? -n : n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
    if (n % p == 0) n /= p;
  }
  return true;
}

std::vector<std::int64_t> unit_residues(std::int64_t N) {
  std::vector<std::int64_t> out;
  if (N == 1) return {0};
  for (std::int64_t x = 1; x < N; ++x) {
    if (gcd64(x, N) == 1) out.push_back(x);
  }
  return out;
}

// Chinese remainder for coprime moduli.
std::int64_t crt(std::int64_t r1, std::int64_t m1, std::int64_t r2, std::int64_t m2) {
  // Find x = r1 mod m1, x = r2 mod m2.
  std::int64_t M = m1 * m2;
  for (std::int64_t x = ((r1 % m1) + m1) % m1; x < M; x += m1) {
    if (((x - r2) % m2 + m2) % m2 == 0) return x;
  }
  throw std::logic_error("crt: no solution");
}

// Quadratic character of Q(sqrt D) evaluated at a positive x coprime to D.
int quadratic_character(std::int64_t D, std::int64_t x) { return kronecker(BigInt(static_cast<long>(D)), BigInt(static_cast<long>(x))); }

// Substitute x -> x - y into m(y): returns m(x - y) as a polynomial in y with Z[x] coefficients.
BiPolynomial shift_substitute(const IntPolynomial& m) {
  // (x - y) as a polynomial in y with Z[x] coefficients.
  const BiPolynomial linear{IntPolynomial::x(), IntPolynomial::constant(BigInt(-1))};
  BiPolynomial acc;
  BiPolynomial power = BiPolynomial::constant(ring_one<IntPolynomial>());
  for (std::size_t i = 0; i < m.coefficients().size(); ++i) {
    acc += power.scaled(IntPolynomial::constant(m.coefficient(i)));
    power = power * linear;
  }
  return acc;
}

BiPolynomial lift_constant(const IntPolynomial& m) {
  std::vector<IntPolynomial> v;
  for (const auto& c : m.coefficients()) v.push_back(IntPolynomial::constant(c));
  return BiPolynomial(std::move(v));
}

}  // namespace

bool is_prime_small(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  n = n < 0 ? -n : n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1) return false;
  const std::int64_t r = ((D % 4) + 4) % 4;
  if (r == 1) return is_squarefree(D);
  if (r != 0) return false;
  const std::int64_t m = D / 4;
  const std::int64_t rm = ((m % 4) + 4) % 4;
  return (rm == 2 || rm == 3) && is_squarefree(m);
}

std::int64_t fundamental_discriminant_of(const BigInt& m_in) {
  if (m_in == 0 || is_square(m_in)) throw std::domain_error("Q(sqrt m) is not quadratic for m = " + to_string(m_in));
  // Squarefree part of m.
  BigInt m = m_in;
  BigInt core = sgn(m);
  m = abs(m);
  for (unsigned long p = 2; BigInt(p) * p <= m; ++p) {
    unsigned long e = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
      m /= p;
      ++e;
    }
    if (e % 2 == 1) core *= p;
  }
  core *= m;
  const std::int64_t c = to_int64(core);
  const std::int64_t r = ((c % 4) + 4) % 4;
  return r == 1 ? c : 4 * c;
}

// ---- construction ------------------------------------------------------------

NumberField NumberField::rationals() {
  NumberField k;
  k.kind_ = FieldKind::rationals;
  k.modulus_ = 1;
  k.in_subgroup_ = {1};
  k.finish();
  return k;
}

NumberField NumberField::quadratic(std::int64_t D) {
  if (!is_fundamental_discriminant(D)) {
    throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(D));
  }
  NumberField k;
  k.kind_ = FieldKind::quadratic;
  k.discriminant_ = D;
  k.modulus_ = D < 0 ? -D : D;
  k.in_subgroup_.assign(static_cast<std::size_t>(k.modulus_), 0);
  for (std::int64_t x : unit_residues(k.modulus_)) {
    if (quadratic_character(D, x) == 1) k.in_subgroup_[static_cast<std::size_t>(x)] = 1;
  }
  k.finish();
  return k;
}

NumberField NumberField::cyclotomic(std::int64_t n) {
  if (n < 3 || n % 4 == 2) {
    throw std::invalid_argument("cyclotomic index must be >= 3 and not 2 mod 4, got " + std::to_string(n));
  }
  NumberField k;
  k.kind_ = FieldKind::cyclotomic;
  k.index_ = n;
  k.modulus_ = n;
  k.in_subgroup_.assign(static_cast<std::size_t>(n), 0);
  k.in_subgroup_[1] = 1;
  k.finish();
  return k;
}

NumberField NumberField::compositum(std::vector<NumberField> parts) {
  std::vector<NumberField> flat;
  for (auto& part : parts) {
    if (part.kind_ == FieldKind::compositum) {
      for (auto& sub : part.parts_) flat.push_back(sub);
    } else {
      flat.push_back(std::move(part));
    }
  }
  if (flat.size() < 2) throw std::invalid_argument("a compositum needs at least two parts");
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (flat[i].kind_ == FieldKind::rationals) throw std::invalid_argument("Q is not a valid compositum part");
    for (std::size_t j = 0; j < i; ++j) {
      if (flat[i] == flat[j]) throw std::invalid_argument("compositum parts must be pairwise distinct");
    }
  }
  NumberField k;
  k.kind_ = FieldKind::compositum;
  k.parts_ = flat;
  std::int64_t N = 1;
  for (const auto& part : flat) N = lcm64(N, part.modulus_);
  if (N > 50'000'000) throw std::invalid_argument("compositum modulus too large");
  k.modulus_ = N;
  k.in_subgroup_.assign(static_cast<std::size_t>(N), 0);
  for (std::int64_t x : unit_residues(N)) {
    bool all = true;
    for (const auto& part : flat) {
      if (!part.fixes(x % part.modulus_)) {
        all = false;
        break;
      }
    }
    if (all) k.in_subgroup_[static_cast<std::size_t>(x)] = 1;
  }
  k.finish();
  return k;
}

void NumberField::finish() {
  const std::int64_t N = modulus_;
  units_ = unit_residues(N);
  subgroup_.clear();
  for (std::int64_t x : units_) {
    if (in_subgroup_[static_cast<std::size_t>(x)] != 0) subgroup_.push_back(x);
  }
  degree_ = static_cast<int>(units_.size() / subgroup_.size());

  // Conductor: shrink each prime-power part of N while the kernel of
  // (Z/N)^x -> (Z/m)^x stays inside H.
  auto kernel_inside = [&](std::int64_t m) {
    for (std::int64_t x = 1 % N; x < N || (N == 1 && x == 0); x += m) {
      if (N == 1) return true;
      if (gcd64(x, N) == 1 && in_subgroup_[static_cast<std::size_t>(x)] == 0) return false;
    }
    return true;
  };
  std::int64_t f = N;
  for (std::int64_t p : prime_divisors(N)) {
    while (f % p == 0 && kernel_inside(f / p)) f /= p;
  }
  conductor_ = f;
  ramified_ = f == 1 ? std::vector<std::int64_t>{} : prime_divisors(f);
}

NumberField NumberField::from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string()) {
    throw std::invalid_argument("field spec must be an object with a string \"type\"");
  }
  const std::string type = spec["type"].get<std::string>();
  if (type == "rationals") return rationals();
  if (type == "quadratic") {
    if (!spec.contains("D") || !spec["D"].is_number_integer()) throw std::invalid_argument("quadratic field spec needs integer \"D\"");
    return quadratic(spec["D"].get<std::int64_t>());
  }
  if (type == "cyclotomic") {
    if (!spec.contains("n") || !spec["n"].is_number_integer()) throw std::invalid_argument("cyclotomic field spec needs integer \"n\"");
    return cyclotomic(spec["n"].get<std::int64_t>());
  }
  if (type == "compositum") {
    if (!spec.contains("parts") || !spec["parts"].is_array()) throw std::invalid_argument("compositum spec needs array \"parts\"");
    std::vector<NumberField> parts;
    for (const auto& p : spec["parts"]) parts.push_back(from_json(p));
    return compositum(std::move(parts));
  }
  throw std::invalid_argument("unsupported field type: " + type);
}

nlohmann::json NumberField::to_json() const {
  switch (kind_) {
    case FieldKind::rationals:
      return {{"type", "rationals"}};
    case FieldKind::quadratic:
      return {{"type", "quadratic"}, {"D", discriminant_}};
    case FieldKind::cyclotomic:
      return {{"type", "cyclotomic"}, {"n", index_}};
    case FieldKind::compositum: {
      nlohmann::json parts = nlohmann::json::array();
      for (const auto& p : parts_) parts.push_back(p.to_json());
      return {{"type", "compositum"}, {"parts", parts}};
    }
  }
  throw std::logic_error("unreachable field kind");
}

std::int64_t NumberField::discriminant() const {
  if (kind_ != FieldKind::quadratic) throw std::domain_error("discriminant() needs a quadratic field");
  return discriminant_;
}

std::int64_t NumberField::cyclotomic_index() const {
  if (kind_ != FieldKind::cyclotomic) throw std::domain_error("cyclotomic_index() needs a cyclotomic field");
  return index_;
}

bool NumberField::is_ramified(std::int64_t p) const {
  return std::binary_search(ramified_.begin(), ramified_.end(), p);
}

bool NumberField::fixes(std::int64_t x) const {
  if (modulus_ == 1) return true;
  x %= modulus_;
  if (x < 0) x += modulus_;
  return in_subgroup_[static_cast<std::size_t>(x)] != 0;
}

bool NumberField::contains_quadratic(std::int64_t D) const {
  const std::int64_t absD = D < 0 ? -D : D;
  if (modulus_ % absD != 0) return false;
  for (std::int64_t h : subgroup_) {
    if (quadratic_character(D, h) != 1) return false;
  }
  return true;
}

bool NumberField::contains(const NumberField& other) const {
  // other <= k  iff  H_k <= H_other, compared modulo lcm of the moduli.
  const std::int64_t N = lcm64(modulus_, other.modulus_);
  for (std::int64_t x : unit_residues(N)) {
    if (fixes(x % modulus_) && !other.fixes(x % other.modulus_)) return false;
  }
  return true;
}

std::vector<std::int64_t> NumberField::galois_invariants() const {
  if (degree_ == 1) return {};
  // Order of every coset, then the l-primary parts from counts of l^j-torsion.
  std::vector<std::int64_t> orders;
  orders.reserve(units_.size());
  for (std::int64_t x : units_) {
    std::int64_t y = x;
    std::int64_t o = 1;
    while (in_subgroup_[static_cast<std::size_t>(y)] == 0) {
      y = mulmod(y, x, modulus_);
      ++o;
    }
    orders.push_back(o);
  }
  const auto hsize = static_cast<std::int64_t>(subgroup_.size());
  std::vector<std::vector<std::int64_t>> primary;  // per prime, list of l-power orders
  for (std::int64_t l : prime_divisors(degree_)) {
    std::vector<int> rank_at;  // rank_at[j] = log_l #{x : x^{l^j} = 1}
    rank_at.push_back(0);
    std::int64_t lj = 1;
    for (;;) {
      lj *= l;
      std::int64_t count = 0;
      for (std::int64_t o : orders) {
        if (lj % o == 0) ++count;
      }
      count /= hsize;
      int r = 0;
      for (std::int64_t c = count; c > 1; c /= l) ++r;
      if (r == rank_at.back()) break;
      rank_at.push_back(r);
    }
    // Number of cyclic factors of order >= l^j is rank_at[j] - rank_at[j-1].
    std::vector<std::int64_t> factors;
    for (std::size_t j = 1; j < rank_at.size(); ++j) {
      const int at_least_j = rank_at[j] - rank_at[j - 1];
      const int at_least_next = j + 1 < rank_at.size() ? rank_at[j + 1] - rank_at[j] : 0;
      std::int64_t lpow = 1;
      for (std::size_t t = 0; t < j; ++t) lpow *= l;
      for (int c = 0; c < at_least_j - at_least_next; ++c) factors.push_back(lpow);
    }
    std::sort(factors.begin(), factors.end(), std::greater<>());
    primary.push_back(factors);
  }
  std::size_t count = 0;
  for (const auto& v : primary) count = std::max(count, v.size());
  std::vector<std::int64_t> invariants(count, 1);
  for (const auto& v : primary) {
    for (std::size_t i = 0; i < v.size(); ++i) invariants[count - 1 - i] *= v[i];
  }
  return invariants;
}

int NumberField::two_rank() const {
  int r = 0;
  for (std::int64_t d : galois_invariants()) {
    if (d % 2 == 0) ++r;
  }
  return r;
}

IntPolynomial NumberField::generator_minpoly() const {
  switch (kind_) {
    case FieldKind::rationals:
      return IntPolynomial::x();
    case FieldKind::quadratic:
      if (discriminant_ % 4 == 0) return IntPolynomial{BigInt(static_cast<long>(-discriminant_ / 4)), 0, 1};
      return IntPolynomial{BigInt(static_cast<long>((1 - discriminant_) / 4)), -1, 1};
    case FieldKind::cyclotomic:
      return cyclotomic_polynomial(static_cast<unsigned long>(index_));
    case FieldKind::compositum: {
      IntPolynomial acc = parts_.front().generator_minpoly();
      for (std::size_t i = 1; i < parts_.size(); ++i) {
        // minpoly of theta + g is Res_y(m_theta(y), m_g(x - y)).
        acc = resultant(lift_constant(acc), shift_substitute(parts_[i].generator_minpoly()));
      }
      if (acc.degree() != degree_ || resultant(acc, acc.derivative()) == 0) {
        throw std::domain_error("sum of part generators is not primitive for " + name());
      }
      if (acc.leading() < 0) acc = -acc;
      return acc;
    }
  }
  throw std::logic_error("unreachable field kind");
}

std::vector<IntPolynomial> NumberField::generator_conjugates() const {
  switch (kind_) {
    case FieldKind::rationals:
      return {IntPolynomial::x()};
    case FieldKind::quadratic:
      if (discriminant_ % 4 == 0) return {IntPolynomial::x(), IntPolynomial{0, -1}};
      return {IntPolynomial::x(), IntPolynomial{1, -1}};
    case FieldKind::cyclotomic: {
      const IntPolynomial phi = generator_minpoly();
      std::vector<IntPolynomial> out;
      for (std::int64_t j : units_) {
        out.push_back(reduce_monic(IntPolynomial::monomial(BigInt(1), static_cast<std::size_t>(j)), phi));
      }
      return out;
    }
    case FieldKind::compositum:
      throw std::domain_error("Galois conjugates are not computed natively for composita");
  }
  throw std::logic_error("unreachable field kind");
}

std::string NumberField::name() const {
  switch (kind_) {
    case FieldKind::rationals:
      return "Q";
    case FieldKind::quadratic: {
      const std::int64_t m = discriminant_ % 4 == 0 ? discriminant_ / 4 : discriminant_;
      return "Q(sqrt(" + std::to_string(m) + "))";
    }
    case FieldKind::cyclotomic:
      return "Q(zeta_" + std::to_string(index_) + ")";
    case FieldKind::compositum: {
      std::string s;
      for (const auto& p : parts_) s += (s.empty() ? "" : "*") + p.name();
      return s;
    }
  }
  return "?";
}

// ---- splitting -----------------------------------------------------------------

PrimeSplitting splitting_data(const NumberField& k, std::int64_t p) {
  if (!is_prime_small(p)) throw std::invalid_argument("splitting_data needs a prime, got " + std::to_string(p));
  const std::int64_t N = k.modulus_;
  PrimeSplitting s;
  s.p = p;
  if (N % p != 0) {
    std::int64_t y = p % N;
    int f = 1;
    while (!k.fixes(y)) {
      y = mulmod(y, p, N);
      ++f;
    }
    s.e = 1;
    s.f = f;
    s.g = k.degree_ / f;
    return s;
  }
  std::int64_t pv = 1;
  while (N % (pv * p) == 0) pv *= p;
  const std::int64_t m = N / pv;

  // Inertia: kernel of reduction mod m. e = |I| / |I cap H|.
  std::int64_t inertia = 0;
  std::int64_t inertia_in_h = 0;
  for (std::int64_t x : k.units_) {
    if (x % m == 1 % m) {
      ++inertia;
      if (k.in_subgroup_[static_cast<std::size_t>(x)] != 0) ++inertia_in_h;
    }
  }
  s.e = static_cast<int>(inertia / inertia_in_h);

  // Decomposition modulo I*H = preimage of (H mod m).
  std::vector<char> h_mod_m(static_cast<std::size_t>(m), 0);
  for (std::int64_t h : k.subgroup_) h_mod_m[static_cast<std::size_t>(h % m)] = 1;
  const std::int64_t frob = m == 1 ? 1 % N : crt(p % m, m, 1, pv);
  std::int64_t y = frob;
  int f = 1;
  while (h_mod_m[static_cast<std::size_t>(y % m)] == 0) {
    y = mulmod(y, frob, N);
    ++f;
  }
  s.f = f;
  s.g = k.degree_ / (s.e * s.f);
  return s;
}

QuadraticSubfields quadratic_subfields(const NumberField& k) {
  QuadraticSubfields out;
  if (k.degree() % 2 == 1) return out;
  // Prime discriminants that can occur in a quadratic subfield.
  std::vector<std::int64_t> odd_parts;
  std::vector<std::int64_t> two_parts{1};
  const std::int64_t f = k.conductor();
  for (std::int64_t p : k.ramified_primes()) {
    if (p == 2) {
      if (f % 4 == 0) two_parts.push_back(-4);
      if (f % 8 == 0) {
        two_parts.push_back(8);
        two_parts.push_back(-8);
      }
    } else {
      odd_parts.push_back(p % 4 == 1 ? p : -p);
    }
  }
  std::vector<std::int64_t> found;
  const std::size_t subsets = std::size_t{1} << odd_parts.size();
  for (std::int64_t t : two_parts) {
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      std::int64_t D = t;
      for (std::size_t i = 0; i < odd_parts.size(); ++i) {
        if (mask & (std::size_t{1} << i)) D *= odd_parts[i];
      }
      if (D == 1) continue;
      if (k.contains_quadratic(D)) found.push_back(D);
    }
  }
  std::sort(found.begin(), found.end(), [](std::int64_t a, std::int64_t b) {
    const std::int64_t aa = a < 0 ? -a : a;
    const std::int64_t bb = b < 0 ? -b : b;
    return aa != bb ? aa < bb : a < b;
  });
  for (std::int64_t D : found) {
    (D < 0 ? out.imaginary : out.real).push_back(NumberField::quadratic(D));
  }
  return out;
}

std::vector<std::int64_t> split_completely_primes(const NumberField& k, std::int64_t bound) {
  if (bound < 2) throw std::invalid_argument("split_completely_primes needs bound >= 2");
  std::vector<std::int64_t> out;
  for (std::int64_t q = 2; q <= bound; ++q) {
    if (!is_prime_small(q)) continue;
    const PrimeSplitting s = splitting_data(k, q);
    if (s.e == 1 && s.f == 1) out.push_back(q);
  }
  return out;
}

PrimeIdealHandle prime_above(const NumberField& k, std::int64_t q) {
  const PrimeSplitting s = splitting_data(k, q);
  PrimeIdealHandle h;
  h.q = q;
  h.e = s.e;
  h.f = s.f;
  h.norm = pow(BigInt(static_cast<long>(q)), static_cast<unsigned long>(s.f));
  return h;
}

}  // namespace shimura
