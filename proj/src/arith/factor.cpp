#include "shimura/arith/factor.hpp"

#include <algorithm>
#include <map>

namespace shimura {

namespace {

constexpr unsigned kDeterministicBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
constexpr int kExtraBases = 24;

bool strong_probable_prime(const BigInt& n, const BigInt& base, const BigInt& d, unsigned long s) {
  const BigInt n_minus_1 = n - 1;
  BigInt x = powmod(base, d, n);
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

const std::vector<std::uint32_t>& small_primes(std::uint32_t limit) {
  static const std::vector<std::uint32_t> primes = primes_up_to(1'000'000);
  if (limit > 1'000'000) throw std::invalid_argument("trial bound above 10^6 is not supported");
  return primes;
}

// ---- 64-bit rho -------------------------------------------------------------

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 gcd64(u64 a, u64 b) {
  while (b != 0) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Returns a nontrivial divisor of composite n, or 0 once the budget is spent.
u64 brent64(u64 n, u64 c, std::uint64_t& budget) {
  if (n % 2 == 0) return 2;
  constexpr u64 kBatch = 128;
  u64 y = 2, x = 2, ys = 2, q = 1, g = 1;
  auto f = [&](u64 v) { return (mulmod64(v, v, n) + c) % n; };
  for (u64 r = 1; g == 1; r <<= 1) {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    for (u64 k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      const u64 steps = std::min(kBatch, r - k);
      for (u64 i = 0; i < steps; ++i) {
        y = f(y);
        q = mulmod64(q, x > y ? x - y : y - x, n);
      }
      g = gcd64(q, n);
      if (budget <= steps) return 0;
      budget -= steps;
    }
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd64(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

// ---- multiprecision rho -----------------------------------------------------

BigInt brent_big(const BigInt& n, unsigned long c, std::uint64_t& budget) {
  if (mpz_even_p(n.get_mpz_t())) return BigInt(2);
  constexpr std::uint64_t kBatch = 128;
  BigInt y = 2, x = 2, ys = 2, q = 1, g = 1, diff;
  auto step = [&](BigInt& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  for (std::uint64_t r = 1; g == 1; r <<= 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) step(y);
    for (std::uint64_t k = 0; k < r && g == 1; k += kBatch) {
      ys = y;
      const std::uint64_t steps = std::min(kBatch, r - k);
      for (std::uint64_t i = 0; i < steps; ++i) {
        step(y);
        diff = x - y;
        q = q * diff;
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      g = gcd(q, n);
      if (budget <= steps) return BigInt(0);
      budget -= steps;
    }
  }
  if (g == n) {
    do {
      step(ys);
      g = gcd(x - ys, n);
    } while (g == 1);
  }
  return g;
}

// Nontrivial divisor of a composite n (not a perfect power), or 0 on budget exhaustion.
BigInt find_divisor(const BigInt& n, std::uint64_t& budget) {
  for (unsigned long c = 1; budget > 0; ++c) {
    BigInt d;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 62) {
      u64 nn = mpz_get_ui(n.get_mpz_t());
      d = static_cast<unsigned long>(brent64(nn, c, budget));
    } else {
      d = brent_big(n, c, budget);
    }
    if (d == 0) return BigInt(0);
    if (d != n && d != 1) return d;
  }
  return BigInt(0);
}

// If n = r^k with k >= 2 maximal, returns (r, k); otherwise (n, 1).
std::pair<BigInt, unsigned> perfect_power(const BigInt& n) {
  if (mpz_perfect_power_p(n.get_mpz_t()) == 0) return {n, 1};
  const auto bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (unsigned long k = bits; k >= 2; --k) {
    BigInt root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) return {root, static_cast<unsigned>(k)};
  }
  return {n, 1};
}

bool independent_prime_check(const BigInt& p) { return mpz_probab_prime_p(p.get_mpz_t(), 30) != 0; }

}  // namespace

const BigInt& deterministic_primality_bound() {
  static const BigInt bound("3317044064679887385961981", 10);
  return bound;
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  for (unsigned p : kDeterministicBases) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) return false;
  }
  BigInt d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned b : kDeterministicBases) {
    if (!strong_probable_prime(n, BigInt(b), d, s)) return false;
  }
  if (n < deterministic_primality_bound()) return true;

  gmp_randclass gen(gmp_randinit_default);
  gen.seed(0x5eed5eedUL);
  const BigInt span = n - 3;
  for (int i = 0; i < kExtraBases; ++i) {
    BigInt base = gen.get_z_range(span) + 2;
    if (!strong_probable_prime(n, base, d, s)) return false;
  }
  return true;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

FactorizationIncomplete::FactorizationIncomplete(FactorizationResult partial, std::vector<BigInt> unfactored)
    : std::runtime_error("factorization incomplete: rho iteration budget exhausted"),
      partial_(std::move(partial)),
      unfactored_(std::move(unfactored)) {}

BigInt FactorizationResult::recompose() const {
  BigInt out = unit;
  for (const auto& pp : factors) out *= pow(pp.prime, pp.exponent);
  return out;
}

std::vector<BigInt> FactorizationResult::primes() const {
  std::vector<BigInt> out;
  out.reserve(factors.size());
  for (const auto& pp : factors) out.push_back(pp.prime);
  return out;
}

FactorizationResult factorize(const BigInt& n, const FactorOptions& options) {
  if (n == 0) throw std::domain_error("factorize(0) is undefined");

  std::map<BigInt, unsigned> found;
  BigInt rest = abs(n);
  const int unit = sgn(n);

  for (std::uint32_t p : small_primes(options.trial_bound)) {
    if (p > options.trial_bound) break;
    if (rest == 1) break;
    if (mpz_sizeinbase(rest.get_mpz_t(), 2) <= 40 && mpz_get_ui(rest.get_mpz_t()) < std::uint64_t{p} * p) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      found[BigInt(p)] += static_cast<unsigned>(remove_factor(rest, BigInt(p)));
    }
  }

  std::uint64_t budget = options.rho_iterations;
  std::vector<std::pair<BigInt, unsigned>> work;
  if (rest != 1) work.emplace_back(rest, 1);
  std::vector<BigInt> unfactored;

  while (!work.empty()) {
    auto [m, mult] = work.back();
    work.pop_back();
    if (m == 1) continue;
    if (is_prime(m)) {
      found[m] += mult;
      continue;
    }
    auto [root, k] = perfect_power(m);
    if (k > 1) {
      work.emplace_back(root, mult * k);
      continue;
    }
    BigInt d = budget > 0 ? find_divisor(m, budget) : BigInt(0);
    if (d == 0) {
      for (unsigned i = 0; i < mult; ++i) unfactored.push_back(m);
      continue;
    }
    BigInt other = m / d;
    work.emplace_back(d, mult);
    work.emplace_back(other, mult);
  }

  FactorizationResult result;
  result.unit = unit;
  for (const auto& [p, e] : found) {
    if (!independent_prime_check(p)) throw std::logic_error("factor failed re-verification: " + to_string(p));
    result.factors.push_back({p, e});
  }
  if (!unfactored.empty()) {
    std::sort(unfactored.begin(), unfactored.end());
    throw FactorizationIncomplete(std::move(result), std::move(unfactored));
  }
  if (result.recompose() != n) throw std::logic_error("factorization does not recompose to " + to_string(n));
  return result;
}

}  // namespace shimura
