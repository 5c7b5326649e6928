#include "shimura/arith/kronecker.hpp"

#include <array>
#include <stdexcept>

namespace shimura {

namespace {

// (2|b) indexed by b mod 8, for odd b.
constexpr std::array<int, 8> kTwoTable{0, 1, 0, -1, 0, -1, 0, 1};

int two_symbol(const BigInt& b) {
  return kTwoTable[mpz_fdiv_ui(b.get_mpz_t(), 8)];
}

bool is_three_mod_four(const BigInt& x) { return mpz_fdiv_ui(x.get_mpz_t(), 4) == 3; }

}  // namespace

// Binary Kronecker algorithm: strip powers of two from the denominator using
// (a|2), then alternate reduction and reciprocity on odd positive n.
int kronecker(const BigInt& a_in, const BigInt& n_in) {
  if (n_in == 0) throw std::domain_error("kronecker symbol with n = 0");

  BigInt a = a_in;
  BigInt b = n_in;
  if (mpz_even_p(a.get_mpz_t()) && mpz_even_p(b.get_mpz_t())) return 0;

  int k = 1;
  unsigned long v = mpz_scan1(b.get_mpz_t(), 0);
  if (v > 0) {
    mpz_tdiv_q_2exp(b.get_mpz_t(), b.get_mpz_t(), v);
    if (v % 2 == 1) k = two_symbol(a);
  }
  if (b < 0) {
    b = -b;
    if (a < 0) k = -k;
  }

  // Invariant: b odd and positive.
  a = mod_floor(a, b);
  while (a != 0) {
    unsigned long w = mpz_scan1(a.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(a.get_mpz_t(), a.get_mpz_t(), w);
    if (w % 2 == 1) k *= two_symbol(b);
    if (is_three_mod_four(a) && is_three_mod_four(b)) k = -k;
    BigInt r = a;
    a = mod_floor(b, r);
    b = r;
  }
  return b == 1 ? k : 0;
}

}  // namespace shimura
