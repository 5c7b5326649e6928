#include "shimura/badprimes/bad_primes.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <thread>

namespace shimura {

namespace {

// Element u + v x of Z[x] / (x^2 + a x + n).
struct QuadElt {
  BigInt u = 1;
  BigInt v = 0;
};

QuadElt mul(const QuadElt& s, const QuadElt& t, const BigInt& a, const BigInt& n) {
  const BigInt vv = s.v * t.v;
  return {s.u * t.u - n * vv, s.u * t.v + s.v * t.u - a * vv};
}

QuadElt quad_pow(QuadElt base, unsigned long e, const BigInt& a, const BigInt& n) {
  QuadElt result;
  while (e > 0) {
    if (e & 1UL) result = mul(result, base, a, n);
    e >>= 1;
    if (e > 0) base = mul(base, base, a, n);
  }
  return result;
}

IntPolynomial pow_mod(IntPolynomial base, unsigned long e, const IntPolynomial& m) {
  IntPolynomial result = IntPolynomial::constant(BigInt(1));
  base = reduce_monic(base, m);
  while (e > 0) {
    if (e & 1UL) result = reduce_monic(result * base, m);
    e >>= 1;
    if (e > 0) base = reduce_monic(base * base, m);
  }
  return result;
}


std::vector<unsigned long> divisors(unsigned long n) {
  std::vector<unsigned long> out;
  for (unsigned long d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

nlohmann::json bigint_list(const std::vector<BigInt>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

std::uint64_t pow5(int n) {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) r *= 5;
  return r;
}

// How beta sits relative to k.
struct BetaShape {
  bool degenerate = false;
  IntPolynomial in_field;  // beta as a polynomial in the generator when degenerate
};

BetaShape classify(const NumberField& k, const WeilCandidate& beta) {
  const std::int64_t disc = beta.a * beta.a - 4 * beta.n;
  BetaShape s;
  if (disc == 0) {
    s.degenerate = true;
    s.in_field = IntPolynomial::constant(BigInt(static_cast<long>(-beta.a / 2)));
    return s;
  }
  if (k.degree() % 2 == 1) return s;
  const std::int64_t fd = fundamental_discriminant_of(BigInt(static_cast<long>(disc)));
  if (!k.contains_quadratic(fd)) return s;
  if (k.kind() != FieldKind::quadratic) {
    throw std::domain_error("Weil number x^2 + " + std::to_string(beta.a) + "x + " + std::to_string(beta.n) +
                            " has its roots in k; this is only supported for quadratic k");
  }
  // disc = D s^2 and sqrt D = 2 omega - b, so beta = (-a - root s b)/2 + root s omega.
  const std::int64_t D = k.discriminant();
  const std::int64_t ratio = disc / D;
  const BigInt sq = isqrt(BigInt(static_cast<long>(ratio)));
  if (sq * sq != ratio || ratio * D != disc) throw std::logic_error("classify: a^2 - 4n is not D times a square");
  const long sv = to_int64(sq);
  const long b = D % 4 == 0 ? 0 : 1;
  const long num = -beta.a - beta.root * sv * b;
  if (num % 2 != 0) throw std::logic_error("classify: beta is not integral in Z[omega]");
  s.degenerate = true;
  s.in_field = IntPolynomial{BigInt(num / 2), BigInt(static_cast<long>(beta.root) * sv)};
  return s;
}

struct GeneratorContext {
  const NumberField* field = nullptr;
  IntPolynomial m;
  int degree = 0;
  std::int64_t h = 1;
  std::int64_t norm = 0;  // N(q)
  std::vector<IntPolynomial> conjugates;
  BigInt denominator = 1;
  std::vector<WeilCandidate> fr;
  std::vector<BetaShape> shapes;
};

BigInt field_norm_of(const IntPolynomial& m, const IntPolynomial& w) {
  if (w.is_zero()) return BigInt(0);
  return resultant(m, w);
}

// Norm_{k(beta)/Q} of Phi_mm^hom(C / d, Y) with Y = beta^e_y, scaled back by d.
BigInt piece_norm(const GeneratorContext& ctx, unsigned long mm, const IntPolynomial& C, const BigInt& d,
                  const WeilCandidate& beta, const BetaShape& shape, unsigned long e_y) {
  const IntPolynomial phi = cyclotomic_polynomial(mm);
  const auto deg_phi = static_cast<std::size_t>(phi.degree());
  std::vector<IntPolynomial> cpow{IntPolynomial::constant(BigInt(1))};
  for (std::size_t i = 1; i <= deg_phi; ++i) cpow.push_back(reduce_monic(cpow.back() * C, ctx.m));

  BigInt total_degree;
  BigInt raw;
  if (shape.degenerate) {
    const IntPolynomial Y = reduce_monic(pow_mod(shape.in_field, e_y, ctx.m).scaled(d), ctx.m);
    std::vector<IntPolynomial> ypow{IntPolynomial::constant(BigInt(1))};
    for (std::size_t i = 1; i <= deg_phi; ++i) ypow.push_back(reduce_monic(ypow.back() * Y, ctx.m));
    IntPolynomial u;
    for (std::size_t i = 0; i <= deg_phi; ++i) {
      if (phi.coefficient(i) == 0) continue;
      u += reduce_monic(cpow[i] * ypow[deg_phi - i], ctx.m).scaled(phi.coefficient(i));
    }
    raw = field_norm_of(ctx.m, u);
    total_degree = ctx.degree;
  } else {
    const BigInt a = static_cast<long>(beta.a);
    const BigInt n = static_cast<long>(beta.n);
    QuadElt y = quad_pow(QuadElt{0, 1}, e_y, a, n);
    y.u *= d;
    y.v *= d;
    std::vector<QuadElt> ypow{QuadElt{}};
    for (std::size_t i = 1; i <= deg_phi; ++i) ypow.push_back(mul(ypow.back(), y, a, n));
    IntPolynomial u, v;
    for (std::size_t i = 0; i <= deg_phi; ++i) {
      const BigInt& c = phi.coefficient(i);
      if (c == 0) continue;
      const QuadElt& yp = ypow[deg_phi - i];
      if (yp.u != 0) u += cpow[i].scaled(c * yp.u);
      if (yp.v != 0) v += cpow[i].scaled(c * yp.v);
    }
    // Norm_{k(beta)/k}(u + v beta) = u^2 - a u v + n v^2.
    const IntPolynomial w = reduce_monic(u * u - (u * v).scaled(a) + (v * v).scaled(n), ctx.m);
    raw = field_norm_of(ctx.m, w);
    total_degree = 2 * ctx.degree;
  }
  if (d == 1 || raw == 0) return raw;
  const BigInt scale = pow(d, static_cast<unsigned long>(deg_phi) * total_degree.get_ui());
  return exact_div(raw, scale);
}

// alpha^eps numerator and its denominator.
std::pair<IntPolynomial, BigInt> alpha_power(const GeneratorContext& ctx, const EpsilonVector& eps, unsigned long divisor) {
  IntPolynomial C = IntPolynomial::constant(BigInt(1));
  unsigned long total = 0;
  for (std::size_t j = 0; j < eps.size(); ++j) {
    const unsigned long e = static_cast<unsigned long>(eps[j]) / divisor;
    if (e == 0) continue;
    C = reduce_monic(C * pow_mod(ctx.conjugates[j], e, ctx.m), ctx.m);
    total += e;
  }
  return {C, pow(ctx.denominator, total)};
}

GeneratorContext make_context(const NumberField& k, const ClassGroupData& cg, std::size_t index) {
  GeneratorContext ctx;
  ctx.field = &k;
  ctx.m = k.generator_minpoly();
  ctx.degree = k.degree();
  ctx.h = cg.h;
  const auto& g = cg.S[index];
  if (!fits_int64(g.prime.norm)) throw std::invalid_argument("N(q) out of range");
  ctx.norm = to_int64(g.prime.norm);
  ctx.conjugates = g.conjugates;
  ctx.denominator = g.conjugate_denominator;
  if (static_cast<int>(ctx.conjugates.size()) != ctx.degree) {
    throw std::invalid_argument("class data lists " + std::to_string(ctx.conjugates.size()) + " conjugates for a field of degree " +
                                std::to_string(ctx.degree));
  }
  ctx.fr = fr_set(ctx.norm);
  for (const auto& beta : ctx.fr) ctx.shapes.push_back(classify(k, beta));
  return ctx;
}

// Every record for one (generator, epsilon).
std::vector<M2Record> evaluate_epsilon(const GeneratorContext& ctx, std::size_t gen, std::uint64_t eps_index, bool dedupe,
                                       std::uint64_t& evaluations) {
  const EpsilonVector eps = epsilon_from_index(eps_index, ctx.degree);
  const auto full_exp = static_cast<unsigned long>(24 * ctx.h);
  unsigned long g = full_exp;
  for (int a : eps) g = std::gcd(g, static_cast<unsigned long>(a));
  const auto [C_full, d_full] = alpha_power(ctx, eps, 1);
  const auto [C, d] = alpha_power(ctx, eps, g);
  const auto divs = divisors(g);

  std::vector<M2Record> out;
  out.reserve(ctx.fr.size());
  for (std::size_t i = 0; i < ctx.fr.size(); ++i) {
    const WeilCandidate& beta = ctx.fr[i];
    const BetaShape& shape = ctx.shapes[i];
    M2Record rec;
    rec.generator = gen;
    rec.epsilon_index = eps_index;
    rec.epsilon = eps;
    rec.beta = beta;
    rec.degenerate = shape.degenerate;
    // The conjugate root of an irreducible x^2 + a x + n gives the same norm.
    if (dedupe && !shape.degenerate && beta.root == -1 && !out.empty() && out.back().beta.a == beta.a &&
        out.back().beta.root == 1) {
      rec.value = out.back().value;
      rec.pieces = out.back().pieces;
      out.push_back(std::move(rec));
      continue;
    }
    ++evaluations;
    rec.value = piece_norm(ctx, 1, C_full, d_full, beta, shape, full_exp);
    if (rec.value != 0) {
      BigInt product = 1;
      for (unsigned long mm : divs) {
        rec.pieces.push_back(piece_norm(ctx, mm, C, d, beta, shape, full_exp / g));
        product *= rec.pieces.back();
      }
      if (product != rec.value) throw std::logic_error("cyclotomic pieces do not multiply to the norm");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

unsigned thread_count(const EnumerationOptions& options) {
  unsigned t = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
  return std::max(1U, t);
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&](unsigned id) {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i, id);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
        return;
      }
    }
  };
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void check_inputs(const NumberField& k, const ClassGroupData& cg) {
  if (cg.S.empty()) throw std::invalid_argument("class data missing: S is empty");
  if (!cg.field.same_field(k)) throw std::invalid_argument("class data belongs to a different field");
}

}  // namespace

nlohmann::json WeilCandidate::to_json() const {
  return {{"a", a}, {"n", n}, {"root", root == 0 ? "double" : (root > 0 ? "+" : "-")}};
}

std::vector<WeilCandidate> fr_set(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("fr_set needs n >= 1");
  const std::int64_t amax = to_int64(isqrt(BigInt(static_cast<long>(4 * n))));
  std::vector<WeilCandidate> out;
  for (std::int64_t a = -amax; a <= amax; ++a) {
    if (a * a == 4 * n) {
      out.push_back({a, n, 0});
    } else {
      out.push_back({a, n, 1});
      out.push_back({a, n, -1});
    }
  }
  return out;
}

EpsilonVector epsilon_from_index(std::uint64_t index, int degree) {
  EpsilonVector eps(static_cast<std::size_t>(degree));
  for (int j = 0; j < degree; ++j) {
    eps[static_cast<std::size_t>(j)] = kEpsilonAlphabet[index % 5];
    index /= 5;
  }
  return eps;
}

BudgetExceeded::BudgetExceeded(BigInt estimate, BigInt budget)
    : std::runtime_error("enumeration needs " + to_string(estimate) + " norm evaluations, over the budget of " +
                         to_string(budget)),
      estimate_(std::move(estimate)),
      budget_(std::move(budget)) {}

BigInt enumeration_size(const ClassGroupData& cg) {
  BigInt total = 0;
  const BigInt eps = pow(BigInt(5), static_cast<unsigned long>(cg.field.degree()));
  for (const auto& g : cg.S) {
    if (!fits_int64(g.prime.norm)) throw std::invalid_argument("N(q) out of range");
    total += eps * static_cast<unsigned long>(fr_set(to_int64(g.prime.norm)).size());
  }
  return total;
}

std::vector<M2Record> m2_values(const NumberField& k, const ClassGroupData& cg, const EnumerationOptions& options) {
  check_inputs(k, cg);
  const BigInt size = enumeration_size(cg);
  if (size > options.budget) throw BudgetExceeded(size, options.budget);
  std::vector<GeneratorContext> ctx;
  for (std::size_t i = 0; i < cg.S.size(); ++i) ctx.push_back(make_context(k, cg, i));
  const std::uint64_t n_eps = pow5(k.degree());
  const std::size_t tasks = cg.S.size() * n_eps;
  std::vector<std::vector<M2Record>> slots(tasks);
  parallel_for(tasks, thread_count(options), [&](std::size_t t, unsigned) {
    std::uint64_t evals = 0;
    slots[t] = evaluate_epsilon(ctx[t / n_eps], t / n_eps, t % n_eps, options.dedupe_conjugates, evals);
  });
  std::vector<M2Record> out;
  for (auto& s : slots) {
    for (auto& r : s) out.push_back(std::move(r));
  }
  return out;
}

BadPrimeSets n1_set(const NumberField& k, const ClassGroupData& cg, const EnumerationOptions& options,
                    std::vector<FactoredValue>* factored) {
  check_inputs(k, cg);
  const BigInt size = enumeration_size(cg);
  if (size > options.budget) throw BudgetExceeded(size, options.budget);

  std::vector<GeneratorContext> ctx;
  for (std::size_t i = 0; i < cg.S.size(); ++i) ctx.push_back(make_context(k, cg, i));
  const std::uint64_t n_eps = pow5(k.degree());
  const std::size_t tasks = cg.S.size() * n_eps;
  const unsigned threads = thread_count(options);

  struct Local {
    std::set<BigInt> pieces;
    std::map<BigInt, std::vector<BigInt>> values;  // |value| -> its pieces
    std::vector<std::pair<std::size_t, M2Record>> excluded;
    std::uint64_t triples = 0;
    std::uint64_t evaluations = 0;
  };
  std::vector<Local> locals(threads);
  parallel_for(tasks, threads, [&](std::size_t t, unsigned id) {
    Local& L = locals[id];
    auto recs = evaluate_epsilon(ctx[t / n_eps], t / n_eps, t % n_eps, options.dedupe_conjugates, L.evaluations);
    for (auto& r : recs) {
      ++L.triples;
      if (r.excluded()) {
        L.excluded.emplace_back(t, std::move(r));
        continue;
      }
      for (const auto& p : r.pieces) {
        const BigInt ap = abs(p);
        if (ap > 1) L.pieces.insert(ap);
      }
      if (factored != nullptr) L.values.emplace(r.value, r.pieces);
    }
  });

  BadPrimeSets out;
  out.field = k;
  out.class_data = cg.to_json();
  std::set<BigInt> all_pieces;
  std::map<BigInt, std::vector<BigInt>> all_values;
  std::vector<std::pair<std::size_t, M2Record>> excluded;
  for (auto& L : locals) {
    out.triples += L.triples;
    out.evaluations += L.evaluations;
    all_pieces.insert(L.pieces.begin(), L.pieces.end());
    all_values.merge(L.values);
    for (auto& e : L.excluded) excluded.push_back(std::move(e));
  }
  std::sort(excluded.begin(), excluded.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return std::make_pair(x.second.beta.a, -x.second.beta.root) < std::make_pair(y.second.beta.a, -y.second.beta.root);
  });
  out.excluded = excluded.size();
  for (const auto& [t, r] : excluded) {
    out.excluded_triples.push_back({{"q", cg.S[r.generator].prime.q}, {"epsilon", r.epsilon}, {"beta", r.beta.to_json()}});
  }
  out.distinct_pieces = all_pieces.size();

  // Factor every distinct piece.
  const std::vector<BigInt> pieces(all_pieces.begin(), all_pieces.end());
  std::vector<std::optional<FactorizationResult>> results(pieces.size());
  std::vector<std::vector<BigInt>> partial_primes(pieces.size());
  std::vector<std::vector<BigInt>> leftovers(pieces.size());
  parallel_for(pieces.size(), threads, [&](std::size_t i, unsigned) {
    try {
      results[i] = factorize(pieces[i], options.factor);
    } catch (const FactorizationIncomplete& e) {
      partial_primes[i] = e.partial().primes();
      leftovers[i] = e.unfactored();
    }
  });
  std::set<BigInt> n0;
  std::set<BigInt> unfactored;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (results[i]) {
      for (const auto& p : results[i]->primes()) n0.insert(p);
    } else {
      out.complete = false;
      n0.insert(partial_primes[i].begin(), partial_primes[i].end());
      unfactored.insert(leftovers[i].begin(), leftovers[i].end());
    }
  }
  out.N0.assign(n0.begin(), n0.end());
  out.unfactored.assign(unfactored.begin(), unfactored.end());

  std::set<BigInt> t{2, 3};
  for (const auto& g : cg.S) t.insert(BigInt(static_cast<long>(g.prime.q)));
  out.T.assign(t.begin(), t.end());
  for (auto p : k.ramified_primes()) out.ram.emplace_back(static_cast<long>(p));
  std::set<BigInt> n1(n0);
  n1.insert(t.begin(), t.end());
  n1.insert(out.ram.begin(), out.ram.end());
  out.N1.assign(n1.begin(), n1.end());

  if (factored != nullptr) {
    factored->clear();
    std::map<BigInt, const FactorizationResult*> by_piece;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (results[i]) by_piece[pieces[i]] = &*results[i];
    }
    for (const auto& [value, value_pieces] : all_values) {
      std::map<BigInt, unsigned> exps;
      int sign = 1;
      bool ok = true;
      for (const auto& p : value_pieces) {
        if (p < 0) sign = -sign;
        const BigInt ap = abs(p);
        if (ap == 1) continue;
        auto it = by_piece.find(ap);
        if (it == by_piece.end()) {
          ok = false;
          break;
        }
        for (const auto& pp : it->second->factors) exps[pp.prime] += pp.exponent;
      }
      if (!ok) continue;
      FactoredValue fv;
      fv.value = value;
      fv.factorization.unit = sign;
      for (const auto& [p, e] : exps) fv.factorization.factors.push_back({p, e});
      factored->push_back(std::move(fv));
    }
  }
  return out;
}

nlohmann::json BadPrimeSets::to_json() const {
  return {{"field", field.to_json()},
          {"class_data", class_data},
          {"N0", bigint_list(N0)},
          {"T", bigint_list(T)},
          {"ram", bigint_list(ram)},
          {"N1", bigint_list(N1)},
          {"complete", complete},
          {"unfactored", bigint_list(unfactored)},
          {"enumeration",
           {{"triples", triples},
            {"norm_evaluations", evaluations},
            {"conjugate_pairs_identified", triples - evaluations},
            {"excluded_zero", excluded},
            {"distinct_factored_pieces", distinct_pieces}}},
          {"excluded", excluded_triples}};
}

}  // namespace shimura
