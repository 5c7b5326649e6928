#include "shimura/classgrp/class_group.hpp"

#include "shimura/arith/factor.hpp"
#include "shimura/arith/kronecker.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace shimura {

namespace {

using i128 = __int128;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_pos(i128 a, std::int64_t m) {
  i128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

struct Xgcd {
  std::int64_t g, u, v;  // u a + v b = g >= 0
};

Xgcd xgcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::int64_t isqrt64(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square64(i128 n, std::int64_t& root) {
  if (n < 0) return false;
  if (n > static_cast<i128>(INT64_MAX)) throw std::overflow_error("square test out of 64-bit range");
  root = isqrt64(static_cast<std::int64_t>(n));
  return static_cast<i128>(root) * root == n;
}

std::int64_t checked(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("quadratic form coefficient overflow");
  return static_cast<std::int64_t>(v);
}

void require_discriminant(std::int64_t D) {
  if (!is_fundamental_discriminant(D)) throw std::invalid_argument("not a fundamental discriminant: " + std::to_string(D));
}

// Raw Dirichlet composition; no reduction.
QuadForm compose_raw(const QuadForm& f, const QuadForm& g) {
  const std::int64_t D = f.discriminant();
  if (g.discriminant() != D) throw std::invalid_argument("compose: discriminants differ");
  const std::int64_t s = (f.b + g.b) / 2;
  const Xgcd x1 = xgcd(f.a, g.a);
  const Xgcd x2 = xgcd(x1.g, s);
  const std::int64_t e = x2.g;
  const i128 u = static_cast<i128>(x2.u) * x1.u;
  const i128 v = static_cast<i128>(x2.u) * x1.v;
  const i128 w = x2.v;
  const std::int64_t a3 = checked(static_cast<i128>(f.a / e) * (g.a / e));
  const std::int64_t two_a3 = 2 * (a3 < 0 ? -a3 : a3);
  const i128 num = u * f.a * g.b + v * g.a * f.b + w * ((static_cast<i128>(f.b) * g.b + D) / 2);
  if (num % e != 0) throw std::logic_error("compose: inexact middle coefficient");
  const std::int64_t B = mod_pos(num / e, two_a3);
  const i128 c_num = static_cast<i128>(B) * B - D;
  if (c_num % (4 * static_cast<i128>(a3)) != 0) throw std::logic_error("compose: inexact last coefficient");
  return {a3, B, checked(c_num / (4 * static_cast<i128>(a3)))};
}

std::vector<QuadForm> rho_cycle(QuadForm f) {
  std::vector<QuadForm> cycle{f};
  for (QuadForm g = rho(f); g != f; g = rho(g)) {
    cycle.push_back(g);
    if (cycle.size() > 10'000'000) throw std::runtime_error("rho cycle too long");
  }
  return cycle;
}

QuadForm reduce_indefinite(QuadForm f) {
  for (int i = 0; !is_reduced_indefinite(f); ++i) {
    if (i > 100000) throw std::runtime_error("indefinite reduction did not terminate");
    f = rho(f);
  }
  return f;
}

QuadForm narrow_canonical(const QuadForm& f) {
  const auto cycle = rho_cycle(reduce_indefinite(f));
  return *std::min_element(cycle.begin(), cycle.end());
}

QuadForm negative_principal(std::int64_t D) {
  const QuadForm p = principal_form(D);
  return {-1, p.b, -p.c};
}

// The two roots of the generator's minimal polynomial modulo a split prime q.
std::pair<std::int64_t, std::int64_t> generator_roots_mod(std::int64_t D, std::int64_t q) {
  std::vector<std::int64_t> roots;
  const QuadForm p = principal_form(D);
  // generator satisfies t^2 - p.b t + p.c = 0 for D = 1 mod 4, t^2 + p.c = 0 otherwise
  for (std::int64_t r = 0; r < q; ++r) {
    const i128 val = D % 4 == 0 ? static_cast<i128>(r) * r + p.c : static_cast<i128>(r) * r - r + p.c;
    if (mod_pos(val, q) == 0) roots.push_back(r);
  }
  if (roots.size() != 2) throw std::logic_error("generator_roots_mod: prime does not split");
  return {roots[0], roots[1]};
}

// Form (q, b, c) of the ideal (q, omega - r).
QuadForm ideal_form(std::int64_t D, std::int64_t q, std::int64_t r) {
  std::int64_t b = D % 4 == 0 ? 2 * r : 2 * r - 1;
  b = mod_pos(b, 2 * q);
  const i128 c_num = static_cast<i128>(b) * b - D;
  if (c_num % (4 * q) != 0) throw std::logic_error("ideal_form: b^2 != D mod 4q");
  return {q, b, checked(c_num / (4 * q))};
}

// Root r of the generator mod q with (q, omega - r) the ideal of the form (q, b, c).
std::int64_t ideal_root(std::int64_t D, const QuadForm& f) {
  const std::int64_t b = D % 4 == 0 ? f.b / 2 : (f.b + 1) / 2;
  return mod_pos(b, f.a);
}

IntPolynomial compose_mod(const IntPolynomial& a, const IntPolynomial& c, const IntPolynomial& m) {
  IntPolynomial acc;
  const auto coeffs = a.coefficients();
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = reduce_monic(acc * c + IntPolynomial::constant(*it), m);
  }
  return acc;
}

std::vector<QuadForm> subgroup_closure(std::vector<QuadForm> group, const QuadForm& g) {
  std::set<QuadForm> seen(group.begin(), group.end());
  std::vector<QuadForm> frontier = group;
  auto add = [&](const QuadForm& f) {
    if (seen.insert(f).second) frontier.push_back(f);
  };
  add(g);
  while (!frontier.empty()) {
    const QuadForm f = frontier.back();
    frontier.pop_back();
    const std::vector<QuadForm> snapshot(seen.begin(), seen.end());
    for (const auto& x : snapshot) add(compose_reduced(f, x));
  }
  return {seen.begin(), seen.end()};
}

struct AlphaChoice {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t root = 0;  // alpha lies in (q, omega - root)
};

// Whether x + y*omega lies in exactly one of the two primes above q.
std::optional<std::int64_t> single_prime(std::int64_t D, std::int64_t q, std::int64_t x, std::int64_t y) {
  const auto [r1, r2] = generator_roots_mod(D, q);
  const bool in1 = mod_pos(static_cast<i128>(x) + static_cast<i128>(y) * r1, q) == 0;
  const bool in2 = mod_pos(static_cast<i128>(x) + static_cast<i128>(y) * r2, q) == 0;
  if (in1 == in2) return std::nullopt;
  return in1 ? r1 : r2;
}

// All (x, y) with F(x, y) = target for the principal form F, fixed y.
void solve_x(std::int64_t D, std::int64_t y, i128 target, std::vector<std::pair<std::int64_t, std::int64_t>>& out) {
  const std::int64_t b = D % 4 == 0 ? 0 : 1;
  // (2x + b y)^2 = 4 target + D y^2
  const i128 rhs = 4 * target + static_cast<i128>(D) * y * y;
  std::int64_t t = 0;
  if (!is_square64(rhs, t)) return;
  for (std::int64_t s : {t, -t}) {
    const i128 twice = static_cast<i128>(s) - static_cast<i128>(b) * y;
    if (twice % 2 == 0) out.emplace_back(checked(twice / 2), y);
    if (t == 0) break;
  }
}

AlphaChoice find_alpha(std::int64_t D, std::int64_t q, std::int64_t h) {
  const BigInt target_big = pow(BigInt(static_cast<long>(q)), static_cast<unsigned long>(h));
  if (!fits_int64(target_big) || target_big > BigInt("1000000000000000000")) {
    throw std::runtime_error("q^h too large for generator search");
  }
  const std::int64_t N = to_int64(target_big);
  std::vector<std::pair<std::int64_t, std::int64_t>> sols;
  std::int64_t ymax = 0;
  if (D < 0) {
    ymax = isqrt64(4 * N / -D) + 1;
    for (std::int64_t y = -ymax; y <= ymax; ++y) solve_x(D, y, N, sols);
  } else {
    const FundamentalUnit eps = fundamental_unit(D);
    const double e = (eps.t.get_d() + eps.u.get_d() * std::sqrt(static_cast<double>(D))) / 2.0;
    ymax = static_cast<std::int64_t>(std::ceil(2.0 * e * std::sqrt(static_cast<double>(N) / static_cast<double>(D)))) + 1;
    for (std::int64_t y = -ymax; y <= ymax; ++y) {
      solve_x(D, y, N, sols);
      solve_x(D, y, -static_cast<i128>(N), sols);
    }
  }
  // Least y then least x among nonnegative solutions; otherwise by absolute values.
  auto key = [](const std::pair<std::int64_t, std::int64_t>& s) {
    const auto [x, y] = s;
    const bool nonneg = x >= 0 && y >= 0;
    return std::make_tuple(nonneg ? 0 : 1, std::abs(y), std::abs(x), y, x);
  };
  std::sort(sols.begin(), sols.end(), [&](const auto& l, const auto& r) { return key(l) < key(r); });
  for (const auto& [x, y] : sols) {
    if (auto root = single_prime(D, q, x, y)) return {x, y, *root};
  }
  throw std::runtime_error("no generator of norm " + std::to_string(N) + " found");
}

std::vector<BigInt> coeffs_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw ClassDataRejected(what + ": expected a nonempty coefficient array");
  std::vector<BigInt> out;
  for (const auto& c : j) {
    if (c.is_number_integer()) {
      out.emplace_back(static_cast<long>(c.get<std::int64_t>()));
    } else if (c.is_string()) {
      try {
        out.push_back(parse_bigint(c.get<std::string>()));
      } catch (const std::invalid_argument&) {
        throw ClassDataRejected(what + ": bad integer " + c.get<std::string>());
      }
    } else {
      throw ClassDataRejected(what + ": coefficients must be integers or decimal strings");
    }
  }
  return out;
}

nlohmann::json coeffs_to_json(const IntPolynomial& p) {
  nlohmann::json out = nlohmann::json::array();
  if (p.is_zero()) out.push_back("0");
  for (const auto& c : p.coefficients()) out.push_back(to_string(c));
  return out;
}

// Multiset check: prod (d X - c_j) in k[X] equals d^n times the characteristic
// polynomial of alpha, so the c_j / d are exactly the Galois conjugates.
bool conjugates_match_charpoly(const IntPolynomial& m, const IntPolynomial& alpha, const std::vector<IntPolynomial>& conj,
                               const BigInt& d) {
  // charpoly(X) = Res_t(m(t), X - alpha(t)), computed with Z[X] coefficients.
  std::vector<IntPolynomial> mt;
  for (const auto& c : m.coefficients()) mt.push_back(IntPolynomial::constant(c));
  std::vector<IntPolynomial> lin;
  for (std::size_t i = 0; i < alpha.coefficients().size() || i == 0; ++i) {
    IntPolynomial c = IntPolynomial::constant(-alpha.coefficient(i));
    if (i == 0) c += IntPolynomial::x();
    lin.push_back(c);
  }
  IntPolynomial charpoly = resultant(BiPolynomial(mt), BiPolynomial(lin));
  if (charpoly.leading() < 0) charpoly = -charpoly;

  std::vector<IntPolynomial> prod{IntPolynomial::constant(BigInt(1))};
  for (const auto& c : conj) {
    std::vector<IntPolynomial> next(prod.size() + 1);
    for (std::size_t i = 0; i < prod.size(); ++i) {
      next[i + 1] += prod[i].scaled(d);
      next[i] = reduce_monic(next[i] - prod[i] * c, m);
    }
    prod = std::move(next);
  }
  if (static_cast<int>(prod.size()) - 1 != charpoly.degree()) return false;
  const BigInt dn = pow(d, conj.size());
  for (std::size_t i = 0; i < prod.size(); ++i) {
    if (prod[i].degree() > 0) return false;
    if (prod[i].coefficient(0) != dn * charpoly.coefficient(i)) return false;
  }
  return true;
}

}  // namespace

QuadForm principal_form(std::int64_t D) {
  if (D % 4 == 0) return {1, 0, -D / 4};
  return {1, 1, (1 - D) / 4};
}

bool is_reduced_definite(const QuadForm& f) {
  if (f.a <= 0) return false;
  const std::int64_t ab = f.b < 0 ? -f.b : f.b;
  if (ab > f.a || f.a > f.c) return false;
  if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

QuadForm reduce_definite(QuadForm f) {
  if (f.discriminant() >= 0 || f.a <= 0) throw std::invalid_argument("reduce_definite needs a positive definite form");
  const std::int64_t D = f.discriminant();
  auto normalize = [&](QuadForm& g) {
    const std::int64_t r = floor_div(g.a - g.b, 2 * g.a);
    g.b += 2 * r * g.a;
    g.c = checked((static_cast<i128>(g.b) * g.b - D) / (4 * static_cast<i128>(g.a)));
  };
  normalize(f);
  while (f.a > f.c) {
    f = {f.c, -f.b, f.a};
    normalize(f);
  }
  if (f.a == f.c && f.b < 0) f.b = -f.b;
  return f;
}

bool is_reduced_indefinite(const QuadForm& f) {
  const std::int64_t D = f.discriminant();
  if (D <= 0) return false;
  const std::int64_t s = isqrt64(D);
  const std::int64_t a2 = 2 * (f.a < 0 ? -f.a : f.a);
  return f.b > 0 && f.b <= s && s < f.b + a2 && a2 - f.b <= s;
}

QuadForm rho(const QuadForm& f) {
  const std::int64_t D = f.discriminant();
  if (D <= 0 || f.c == 0) throw std::invalid_argument("rho needs an indefinite form with c != 0");
  const std::int64_t s = isqrt64(D);
  const std::int64_t ac = f.c < 0 ? -f.c : f.c;
  const std::int64_t m = 2 * ac;
  std::int64_t r;
  if (ac <= s) {
    // largest r <= s with r = -b mod 2|c|
    r = s - mod_pos(static_cast<i128>(s) + f.b, m);
  } else {
    // -|c| < r <= |c|
    r = ac - mod_pos(static_cast<i128>(ac) + f.b, m);
  }
  const i128 num = static_cast<i128>(r) * r - D;
  return {f.c, r, checked(num / (4 * static_cast<i128>(f.c)))};
}

QuadForm canonical_form(const QuadForm& f) {
  const std::int64_t D = f.discriminant();
  if (D < 0) return reduce_definite(f);
  std::int64_t root = 0;
  if (is_square64(D, root)) throw std::invalid_argument("square discriminant");
  const QuadForm a = narrow_canonical(f);
  const QuadForm b = narrow_canonical(compose_raw(f, negative_principal(D)));
  return std::min(a, b);
}

QuadForm compose_reduced(const QuadForm& f, const QuadForm& g) {
  if (f.discriminant() != g.discriminant()) throw std::invalid_argument("compose_reduced: discriminants differ");
  return canonical_form(compose_raw(f, g));
}

ClassGroupResult class_group(std::int64_t D) {
  require_discriminant(D);
  ClassGroupResult out;
  out.discriminant = D;
  if (D < 0) {
    const std::int64_t absD = -D;
    for (std::int64_t a = 1; 3 * a * a <= absD; ++a) {
      for (std::int64_t b = -a + 1; b <= a; ++b) {
        const std::int64_t num = b * b - D;
        if (num % (4 * a) != 0) continue;
        const QuadForm f{a, b, num / (4 * a)};
        if (is_reduced_definite(f)) out.forms.push_back(f);
      }
    }
  } else {
    const std::int64_t s = isqrt64(D);
    std::set<QuadForm> classes;
    for (std::int64_t b = 1; b <= s; ++b) {
      if ((b - D) % 2 != 0) continue;
      const std::int64_t ac = (b * b - D) / 4;  // negative
      for (std::int64_t a = 1; a <= s && a <= -ac; ++a) {
        if (ac % a != 0) continue;
        for (std::int64_t sa : {a, -a}) {
          const QuadForm f{sa, b, ac / sa};
          if (is_reduced_indefinite(f)) classes.insert(canonical_form(f));
        }
      }
    }
    out.forms.assign(classes.begin(), classes.end());
  }
  std::sort(out.forms.begin(), out.forms.end());
  out.h = static_cast<std::int64_t>(out.forms.size());
  return out;
}

FundamentalUnit fundamental_unit(std::int64_t D) {
  if (D <= 0) throw std::invalid_argument("fundamental_unit needs D > 0");
  std::int64_t root = 0;
  if (is_square64(D, root)) throw std::invalid_argument("fundamental_unit needs a non-square D");
  // A unit x + y omega > 1 has x / y a convergent of theta = (sqrt D - b) / 2.
  const std::int64_t b = D % 2 == 0 ? 0 : 1;
  const BigInt c = BigInt(static_cast<long>((b * b - D) / 4));
  const BigInt s = isqrt(BigInt(static_cast<long>(D)));
  BigInt P = -b, Q = 2;
  BigInt h_prev = 0, h = 1, k_prev = 1, k = 0;  // convergents h/k of theta
  for (int i = 0; i < 1'000'000; ++i) {
    BigInt a;
    if (Q > 0) {
      mpz_fdiv_q(a.get_mpz_t(), BigInt(P + s).get_mpz_t(), Q.get_mpz_t());
    } else {
      BigInt nq = -Q;
      mpz_fdiv_q(a.get_mpz_t(), BigInt(P + s).get_mpz_t(), nq.get_mpz_t());
      a = -(a + 1);
    }
    BigInt h_next = a * h + h_prev;
    BigInt k_next = a * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    P = a * Q - P;
    Q = (BigInt(static_cast<long>(D)) - P * P) / Q;
    // x + y omega with y = k, x = h
    const BigInt norm = h * h + b * h * k + c * k * k;
    if (k > 0 && (norm == 1 || norm == -1)) {
      return {2 * h + b * k, k, norm == 1 ? 1 : -1};
    }
  }
  throw std::runtime_error("fundamental unit search exhausted for D = " + std::to_string(D));
}

BigInt field_norm(const NumberField& k, const IntPolynomial& element) {
  if (element.is_zero()) return BigInt(0);
  return resultant(k.generator_minpoly(), element);
}

nlohmann::json ClassGroupData::to_json() const {
  nlohmann::json S_json = nlohmann::json::array();
  nlohmann::json alpha_json = nlohmann::json::array();
  for (const auto& g : S) {
    nlohmann::json entry{{"q", g.prime.q}, {"f", g.prime.f}};
    if (g.prime.form) {
      entry["form_or_ideal"] = {g.prime.form->a, g.prime.form->b, g.prime.form->c};
    } else {
      entry["form_or_ideal"] = nullptr;
    }
    S_json.push_back(entry);
    nlohmann::json conj = nlohmann::json::array();
    for (const auto& c : g.conjugates) conj.push_back(coeffs_to_json(c));
    alpha_json.push_back({{"q", g.prime.q},
                          {"minpoly_coeffs_in_field_generator", coeffs_to_json(g.alpha)},
                          {"conjugates", conj},
                          {"conjugate_denominator", to_string(g.conjugate_denominator)}});
  }
  return {{"field_spec", field.to_json()}, {"h", h}, {"S", S_json}, {"alpha", alpha_json}, {"provenance", provenance}};
}

ClassGroupData generating_primes(const NumberField& k, std::int64_t search_bound) {
  if (k.kind() != FieldKind::quadratic) {
    throw std::domain_error("class groups are computed natively only for quadratic fields; supply --class-data");
  }
  if (search_bound < 2) throw std::invalid_argument("search_bound must be >= 2");
  const std::int64_t D = k.discriminant();
  const ClassGroupResult cg = class_group(D);
  const QuadForm principal = canonical_form(principal_form(D));

  std::vector<QuadForm> subgroup{principal};
  std::vector<std::int64_t> chosen;
  for (std::int64_t q = 2; q <= search_bound && static_cast<std::int64_t>(subgroup.size()) < cg.h; ++q) {
    if (!is_prime_small(q) || kronecker(BigInt(static_cast<long>(D)), BigInt(static_cast<long>(q))) != 1) continue;
    const auto [r1, r2] = generator_roots_mod(D, q);
    (void)r2;
    const QuadForm cls = canonical_form(ideal_form(D, q, r1));
    if (std::find(subgroup.begin(), subgroup.end(), cls) != subgroup.end()) continue;
    subgroup = subgroup_closure(subgroup, cls);
    chosen.push_back(q);
  }
  if (cg.h == 1) {
    for (std::int64_t q = 2; q <= search_bound; ++q) {
      if (is_prime_small(q) && kronecker(BigInt(static_cast<long>(D)), BigInt(static_cast<long>(q))) == 1) {
        chosen.push_back(q);
        break;
      }
    }
  }
  if (static_cast<std::int64_t>(subgroup.size()) < cg.h || chosen.empty()) {
    throw std::runtime_error("no generating set of split primes below " + std::to_string(search_bound));
  }

  ClassGroupData data;
  data.field = k;
  data.h = cg.h;
  data.provenance = "computed";
  const IntPolynomial m = k.generator_minpoly();
  const auto sigma = k.generator_conjugates();
  for (std::int64_t q : chosen) {
    const AlphaChoice a = find_alpha(D, q, cg.h);
    ClassGroupGenerator g;
    g.prime = prime_above(k, q);
    g.prime.form = ideal_form(D, q, a.root);
    g.alpha = IntPolynomial{BigInt(static_cast<long>(a.x)), BigInt(static_cast<long>(a.y))};
    for (const auto& s : sigma) g.conjugates.push_back(compose_mod(g.alpha, s, m));
    data.S.push_back(std::move(g));
  }
  return data;
}

ClassGroupData ingest_class_data(const NumberField& k, const nlohmann::json& payload) {
  if (!payload.is_object()) throw ClassDataRejected("class data must be a JSON object");
  for (const char* key : {"field_spec", "h", "S", "alpha"}) {
    if (!payload.contains(key)) throw ClassDataRejected(std::string("missing key \"") + key + "\"");
  }
  NumberField declared = NumberField::rationals();
  try {
    declared = NumberField::from_json(payload["field_spec"]);
  } catch (const std::exception& e) {
    throw ClassDataRejected(std::string("field_spec: ") + e.what());
  }
  if (!declared.same_field(k)) throw ClassDataRejected("field_spec does not describe the requested field");
  if (!payload["h"].is_number_integer() || payload["h"].get<std::int64_t>() < 1) {
    throw ClassDataRejected("h must be a positive integer");
  }
  const std::int64_t h = payload["h"].get<std::int64_t>();
  const auto& S = payload["S"];
  const auto& alphas = payload["alpha"];
  if (!S.is_array() || S.empty()) throw ClassDataRejected("S must be a nonempty array");
  if (!alphas.is_array() || alphas.size() != S.size()) throw ClassDataRejected("alpha must list one entry per element of S");

  const bool quadratic = k.kind() == FieldKind::quadratic;
  std::optional<ClassGroupResult> cg;
  if (quadratic) {
    cg = class_group(k.discriminant());
    if (cg->h != h) throw ClassDataRejected("h = " + std::to_string(h) + " but the class number is " + std::to_string(cg->h));
  }

  const IntPolynomial m = k.generator_minpoly();
  std::optional<std::vector<IntPolynomial>> sigma;
  if (k.kind() != FieldKind::compositum) sigma = k.generator_conjugates();

  ClassGroupData data;
  data.field = k;
  data.h = h;
  data.provenance = "ingested";
  std::vector<QuadForm> subgroup;
  if (quadratic) subgroup.push_back(canonical_form(principal_form(k.discriminant())));

  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto& s = S[i];
    const auto& a = alphas[i];
    if (!s.contains("q") || !s["q"].is_number_integer()) throw ClassDataRejected("S entry without integer q");
    const std::int64_t q = s["q"].get<std::int64_t>();
    const std::string tag = "S[" + std::to_string(i) + "] (q = " + std::to_string(q) + ")";
    if (!is_prime_small(q)) throw ClassDataRejected(tag + ": q is not prime");
    if (!a.contains("q") || a["q"] != s["q"]) throw ClassDataRejected(tag + ": alpha entry lists a different q");
    const PrimeSplitting split = splitting_data(k, q);
    if (split.e != 1 || split.f != 1) {
      throw ClassDataRejected(tag + ": q does not split completely (e = " + std::to_string(split.e) +
                              ", f = " + std::to_string(split.f) + ")");
    }
    if (s.contains("f") && s["f"] != 1) throw ClassDataRejected(tag + ": f must be 1 for a split prime");

    ClassGroupGenerator g;
    g.prime = prime_above(k, q);
    if (!a.contains("minpoly_coeffs_in_field_generator")) throw ClassDataRejected(tag + ": alpha coefficients missing");
    g.alpha = reduce_monic(IntPolynomial(coeffs_from_json(a["minpoly_coeffs_in_field_generator"], tag)), m);

    const BigInt norm = field_norm(k, g.alpha);
    const BigInt expected = pow(BigInt(static_cast<long>(q)), static_cast<unsigned long>(h));
    if (abs(norm) != expected) {
      throw ClassDataRejected(tag + ": |Norm(alpha)| = " + to_string(abs(norm)) + " but N(q)^h = " + to_string(expected));
    }

    if (quadratic) {
      const std::int64_t D = k.discriminant();
      const auto& fj = s.contains("form_or_ideal") ? s["form_or_ideal"] : nlohmann::json();
      if (!fj.is_array() || fj.size() != 3) throw ClassDataRejected(tag + ": quadratic fields need form_or_ideal [a, b, c]");
      const QuadForm form{fj[0].get<std::int64_t>(), fj[1].get<std::int64_t>(), fj[2].get<std::int64_t>()};
      if (form.a != q || form.discriminant() != D) throw ClassDataRejected(tag + ": form is not a prime ideal above q");
      const std::int64_t r = ideal_root(D, form);
      const std::int64_t x = to_int64(g.alpha.coefficient(0) % q);
      const std::int64_t y = to_int64(g.alpha.coefficient(1) % q);
      const auto root = single_prime(D, q, x, y);
      if (!root || *root != r) throw ClassDataRejected(tag + ": alpha does not generate a power of the listed prime");
      g.prime.form = form;
      const QuadForm cls = canonical_form(form);
      if (std::find(subgroup.begin(), subgroup.end(), cls) == subgroup.end()) subgroup = subgroup_closure(subgroup, cls);
    }

    std::vector<IntPolynomial> supplied;
    BigInt denominator = 1;
    if (a.contains("conjugate_denominator")) {
      denominator = coeffs_from_json(nlohmann::json::array({a["conjugate_denominator"]}), tag)[0];
      if (denominator <= 0) throw ClassDataRejected(tag + ": conjugate_denominator must be positive");
    }
    if (a.contains("conjugates") && !a["conjugates"].is_null()) {
      if (!a["conjugates"].is_array()) throw ClassDataRejected(tag + ": conjugates must be an array");
      for (const auto& c : a["conjugates"]) supplied.push_back(reduce_monic(IntPolynomial(coeffs_from_json(c, tag)), m));
    }
    if (sigma) {
      for (const auto& sg : *sigma) g.conjugates.push_back(compose_mod(g.alpha, sg, m));
      if (!supplied.empty()) {
        auto lhs = supplied;
        std::vector<IntPolynomial> rhs;
        for (const auto& c : g.conjugates) rhs.push_back(c.scaled(denominator));
        auto less = [](const IntPolynomial& l, const IntPolynomial& r) { return to_string(l) < to_string(r); };
        std::sort(lhs.begin(), lhs.end(), less);
        std::sort(rhs.begin(), rhs.end(), less);
        if (lhs != rhs) throw ClassDataRejected(tag + ": supplied conjugates differ from the Galois orbit of alpha");
      }
    } else {
      if (static_cast<int>(supplied.size()) != k.degree()) {
        throw ClassDataRejected(tag + ": this field needs all " + std::to_string(k.degree()) + " conjugates of alpha");
      }
      if (!conjugates_match_charpoly(m, g.alpha, supplied, denominator)) {
        throw ClassDataRejected(tag + ": conjugates are not the roots of the characteristic polynomial of alpha");
      }
      g.conjugates = supplied;
      g.conjugate_denominator = denominator;
    }
    data.S.push_back(std::move(g));
  }
  if (quadratic && static_cast<std::int64_t>(subgroup.size()) != h) {
    throw ClassDataRejected("the classes of S generate a subgroup of order " + std::to_string(subgroup.size()) +
                            ", not " + std::to_string(h));
  }
  return data;
}

}  // namespace shimura
