#pragma once

// Dense univariate polynomials over an exact integral domain R, stored lowest
// degree first. R is BigInt or, for iterated resultants, Polynomial<BigInt>.
// The only ring operation beyond +, -, * that the algorithms need is exact
// division, provided by exact_div() overloads.

#include "shimura/arith/bigint.hpp"

#include <initializer_list>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace shimura {

template <class R>
class Polynomial;

inline bool is_zero(const BigInt& x) { return x == 0; }

template <class R>
bool is_zero(const Polynomial<R>& p);

/// a / b, which must be exact.
BigInt exact_div(const BigInt& a, const BigInt& b);

template <class R>
R ring_one();

template <>
inline BigInt ring_one<BigInt>() {
  return BigInt(1);
}

template <class R>
class Polynomial {
 public:
  using Coefficient = R;

  Polynomial() = default;
  explicit Polynomial(std::vector<R> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }
  Polynomial(std::initializer_list<R> coeffs) : coeffs_(coeffs) { normalize(); }

  static Polynomial constant(R c) { return Polynomial(std::vector<R>{std::move(c)}); }

  static Polynomial monomial(R c, std::size_t degree) {
    std::vector<R> v(degree + 1);
    v[degree] = std::move(c);
    return Polynomial(std::move(v));
  }

  static Polynomial x() { return monomial(ring_one<R>(), 1); }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }

  const R& leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading coefficient of the zero polynomial");
    return coeffs_.back();
  }

  R coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : R{}; }
  std::span<const R> coefficients() const { return coeffs_; }

  template <class S>
  S evaluate(const S& point) const {
    S acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * point + S(*it);
    return acc;
  }

  Polynomial operator-() const {
    std::vector<R> v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -coeffs_[i];
    return Polynomial(std::move(v));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<R> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (shimura::is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const R& c) const {
    std::vector<R> v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeffs_[i] * c;
    return Polynomial(std::move(v));
  }

  /// Shift by x^k.
  Polynomial shifted(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<R> v(coeffs_.size() + k);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i + k] = coeffs_[i];
    return Polynomial(std::move(v));
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<R> v(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * R(BigInt(static_cast<long>(i)));
    return Polynomial(std::move(v));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void normalize() {
    while (!coeffs_.empty() && shimura::is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::vector<R> coeffs_;
};

using IntPolynomial = Polynomial<BigInt>;
using BiPolynomial = Polynomial<IntPolynomial>;

template <class R>
bool is_zero(const Polynomial<R>& p) {
  return p.is_zero();
}

template <>
inline IntPolynomial ring_one<IntPolynomial>() {
  return IntPolynomial::constant(BigInt(1));
}

template <class R>
R ring_pow(const R& base, unsigned long e) {
  R result = ring_one<R>();
  R b = base;
  while (e > 0) {
    if (e & 1UL) result = result * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return result;
}

/// Exact division of polynomials; throws std::domain_error on a nonzero remainder.
template <class R>
Polynomial<R> exact_div(const Polynomial<R>& a, const Polynomial<R>& b) {
  if (b.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (a.is_zero()) return {};
  if (a.degree() < b.degree()) throw std::domain_error("inexact polynomial division");
  std::vector<R> rem(a.coefficients().begin(), a.coefficients().end());
  std::vector<R> quot(static_cast<std::size_t>(a.degree() - b.degree() + 1));
  const int db = b.degree();
  const R& lb = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (is_zero(rem[i])) continue;
    R q = exact_div(rem[i], lb);
    for (int j = 0; j <= db; ++j) rem[i - db + j] -= q * b.coefficient(static_cast<std::size_t>(j));
    quot[static_cast<std::size_t>(i - db)] = std::move(q);
  }
  for (const auto& r : rem) {
    if (!is_zero(r)) throw std::domain_error("inexact polynomial division");
  }
  return Polynomial<R>(std::move(quot));
}

/// Exact division of every coefficient by a scalar.
template <class R>
Polynomial<R> exact_div_scalar(const Polynomial<R>& a, const R& c) {
  std::vector<R> v;
  v.reserve(a.coefficients().size());
  for (const auto& x : a.coefficients()) v.push_back(exact_div(x, c));
  return Polynomial<R>(std::move(v));
}

/// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q * b + r.
template <class R>
Polynomial<R> pseudo_remainder(const Polynomial<R>& a, const Polynomial<R>& b) {
  if (b.is_zero()) throw std::domain_error("pseudo-remainder by the zero polynomial");
  if (a.degree() < b.degree()) return a;
  const R lb = b.leading();
  int e = a.degree() - b.degree() + 1;
  Polynomial<R> r = a;
  while (!r.is_zero() && r.degree() >= b.degree()) {
    Polynomial<R> t = b.scaled(r.leading()).shifted(static_cast<std::size_t>(r.degree() - b.degree()));
    r = r.scaled(lb) - t;
    --e;
  }
  if (e > 0) r = r.scaled(ring_pow(lb, static_cast<unsigned long>(e)));
  return r;
}

/// Remainder modulo a monic polynomial (no pseudo-scaling needed).
template <class R>
Polynomial<R> reduce_monic(const Polynomial<R>& a, const Polynomial<R>& modulus) {
  if (modulus.is_zero() || !(modulus.leading() == ring_one<R>())) {
    throw std::domain_error("reduce_monic needs a monic modulus");
  }
  if (a.degree() < modulus.degree()) return a;
  std::vector<R> rem(a.coefficients().begin(), a.coefficients().end());
  const int dm = modulus.degree();
  for (int i = a.degree(); i >= dm; --i) {
    if (is_zero(rem[i])) continue;
    R q = rem[i];
    for (int j = 0; j <= dm; ++j) rem[i - dm + j] -= q * modulus.coefficient(static_cast<std::size_t>(j));
  }
  rem.resize(static_cast<std::size_t>(dm));
  return Polynomial<R>(std::move(rem));
}

/// Resultant by the subresultant pseudo-remainder sequence (fraction-free).
/// Res(f, g) = lc(f)^deg(g) * prod g(root_i(f)). Zero inputs are rejected.
template <class R>
R resultant(const Polynomial<R>& f, const Polynomial<R>& g) {
  if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant of a zero polynomial");
  if (f.degree() == 0) return ring_pow(f.leading(), static_cast<unsigned long>(g.degree()));
  if (g.degree() == 0) return ring_pow(g.leading(), static_cast<unsigned long>(f.degree()));

  Polynomial<R> a = f;
  Polynomial<R> b = g;
  bool negate = false;
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if (a.degree() % 2 == 1 && b.degree() % 2 == 1) negate = true;
  }

  R gg = ring_one<R>();
  R h = ring_one<R>();
  for (;;) {
    const int delta = a.degree() - b.degree();
    if (a.degree() % 2 == 1 && b.degree() % 2 == 1) negate = !negate;
    Polynomial<R> r = pseudo_remainder(a, b);
    a = std::move(b);
    if (r.is_zero()) return R{};
    R divisor = gg * ring_pow(h, static_cast<unsigned long>(delta));
    b = exact_div_scalar(r, divisor);
    gg = a.leading();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = gg;
    } else {
      h = exact_div(ring_pow(gg, static_cast<unsigned long>(delta)), ring_pow(h, static_cast<unsigned long>(delta - 1)));
    }
    if (b.degree() == 0) break;
  }
  // Final step: b is a nonzero constant.
  const int da = a.degree();
  R result;
  if (da == 1) {
    result = b.leading();
  } else {
    result = exact_div(ring_pow(b.leading(), static_cast<unsigned long>(da)), ring_pow(h, static_cast<unsigned long>(da - 1)));
  }
  return negate ? R(-result) : result;
}

std::string to_string(const IntPolynomial& p, char var = 'x');
std::ostream& operator<<(std::ostream& os, const IntPolynomial& p);

/// Content (gcd of coefficients, nonnegative) of an integer polynomial.
BigInt content(const IntPolynomial& p);

/// The n-th cyclotomic polynomial, n >= 1.
IntPolynomial cyclotomic_polynomial(unsigned long n);

}  // namespace shimura
