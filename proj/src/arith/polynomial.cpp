#include "shimura/arith/polynomial.hpp"

#include <sstream>

namespace shimura {

BigInt exact_div(const BigInt& a, const BigInt& b) {
  if (b == 0) throw std::domain_error("division by zero");
  if (mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()) == 0) {
    throw std::domain_error("inexact integer division " + to_string(a) + " / " + to_string(b));
  }
  BigInt q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

std::string to_string(const IntPolynomial& p, char var) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    BigInt c = p.coefficient(static_cast<std::size_t>(i));
    if (c == 0) continue;
    if (c < 0) {
      os << (first ? "-" : " - ");
      c = -c;
    } else if (!first) {
      os << " + ";
    }
    if (c != 1 || i == 0) os << c.get_str();
    if (i >= 1) os << var;
    if (i >= 2) os << '^' << i;
    first = false;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const IntPolynomial& p) { return os << to_string(p); }

BigInt content(const IntPolynomial& p) {
  BigInt g = 0;
  for (const auto& c : p.coefficients()) g = gcd(g, c);
  return g;
}

IntPolynomial cyclotomic_polynomial(unsigned long n) {
  if (n == 0) throw std::domain_error("cyclotomic polynomial of index 0");
  // x^n - 1 = prod_{d | n} Phi_d(x); divide out the proper divisors.
  IntPolynomial result = IntPolynomial::monomial(BigInt(1), n) - IntPolynomial::constant(BigInt(1));
  for (unsigned long d = 1; d < n; ++d) {
    if (n % d == 0) result = exact_div(result, cyclotomic_polynomial(d));
  }
  return result;
}

}  // namespace shimura
