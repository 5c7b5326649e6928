// shimura-gate: command line front end.
//
// Exit codes: 0 answered or certified, 2 inapplicable, 3 resource refusal, 1 error.

#include "shimura/arith/factor.hpp"
#include "shimura/badprimes/bad_primes.hpp"
#include "shimura/certify/certify.hpp"
#include "shimura/classgrp/class_group.hpp"
#include "shimura/lemma/lemma_oracle.hpp"
#include "shimura/numfield/number_field.hpp"
#include "shimura/quatalg/quaternion.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

using namespace shimura;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kInapplicable = 2;
constexpr int kRefused = 3;

// Flags shared by several subcommands.
struct Common {
  std::string field;
  std::optional<std::int64_t> disc;
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::string class_data;
  std::string budget;
  unsigned threads = 0;
  bool allow_symbolic = false;
  std::string out;
};

// A path, or the JSON text itself when it starts with '{'.
json load_json(const std::string& source) {
  if (!source.empty() && source.front() == '{') return json::parse(source);
  std::ifstream in(source);
  if (!in) throw std::runtime_error("cannot open " + source);
  return json::parse(in);
}

NumberField field_of(const Common& c) {
  if (c.field.empty()) throw std::invalid_argument("--field is required");
  return NumberField::from_json(load_json(c.field));
}

QuaternionAlgebra algebra_of(const Common& c) {
  if (c.disc && (c.a || c.b)) throw std::invalid_argument("give either --disc or --a/--b, not both");
  if (c.disc) return QuaternionAlgebra::from_discriminant(*c.disc);
  if (c.a && c.b) return QuaternionAlgebra::from_pair(parse_bigint(*c.a), parse_bigint(*c.b));
  throw std::invalid_argument("a quaternion algebra needs --disc or both --a and --b");
}

EnumerationOptions enumeration_of(const Common& c) {
  EnumerationOptions o;
  if (!c.budget.empty()) o.budget = parse_bigint(c.budget);
  o.threads = c.threads;
  return o;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

void emit(const Common& c, const json& j) { emit(c, j.dump(2) + "\n"); }

void add_field(CLI::App* app, Common& c) { app->add_option("--field", c.field, "field spec: JSON file or inline JSON"); }

void add_out(CLI::App* app, Common& c) { app->add_option("--out", c.out, "write the result here instead of stdout"); }

void add_algebra(CLI::App* app, Common& c) {
  app->add_option("--disc", c.disc, "discriminant of an indefinite quaternion algebra over Q");
  app->add_option("--a", c.a, "first entry of the pair (a, b / Q)");
  app->add_option("--b", c.b, "second entry of the pair (a, b / Q)");
}

void add_enumeration(CLI::App* app, Common& c) {
  app->add_option("--class-data", c.class_data, "class data JSON for the field (file or inline)");
  app->add_option("--budget", c.budget, "maximum number of (q, eps, beta) triples");
  app->add_option("--threads", c.threads, "worker threads, 0 = all cores");
  app->add_flag("--allow-symbolic", c.allow_symbolic, "accept an exclusion set that is defined but not enumerated");
}

std::optional<ClassGroupData> class_data_of(const Common& c, const NumberField& k) {
  if (c.class_data.empty()) return std::nullopt;
  return ingest_class_data(k, load_json(c.class_data));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-existence certificates for rational points on Shimura curves over abelian fields"};
  app.require_subcommand(1);
  Common c;
  std::int64_t prime = 0, norm = 0, q = 0, degree = 1, ram = 1, bound = 1000;
  std::string place, r, s, t;

  auto* split = app.add_subcommand("split", "splitting type (e, f, g) of a prime");
  add_field(split, c);
  add_out(split, c);
  split->add_option("--prime", prime, "rational prime")->required();

  auto* hilbert = app.add_subcommand("hilbert", "Hilbert symbol (a, b)_v, or all places with the product");
  add_algebra(hilbert, c);
  add_out(hilbert, c);
  hilbert->add_option("--place", place, "prime or inf; omit for every relevant place");

  auto* quatsplit = app.add_subcommand("quatsplit", "does B split over k");
  add_field(quatsplit, c);
  add_algebra(quatsplit, c);
  add_out(quatsplit, c);

  auto* classgroup = app.add_subcommand("classgroup", "class group and generating primes of a quadratic field");
  add_field(classgroup, c);
  add_out(classgroup, c);
  classgroup->add_option("--class-data", c.class_data, "verify this class data instead of computing it");
  classgroup->add_option("--search-bound", bound, "largest prime tried for S");

  auto* fr = app.add_subcommand("fr", "the Weil numbers of size sqrt(n)");
  add_out(fr, c);
  fr->add_option("--norm", norm, "n = N(q)")->required();

  auto* badprimes = app.add_subcommand("badprimes", "N0, T, Ram and N1 of a field");
  add_field(badprimes, c);
  add_enumeration(badprimes, c);
  add_out(badprimes, c);

  auto* lemma = app.add_subcommand("lemma-check", "trace cases and elimination verdict");
  add_out(lemma, c);
  lemma->add_option("--norm", norm, "N = N(q)")->required();
  lemma->add_option("--q", q, "residual characteristic of q")->required();
  lemma->add_option("--prime", prime, "the prime p")->required();
  add_algebra(lemma, c);

  auto* conic = app.add_subcommand("conic", "local solvability of r x^2 + s y^2 + t z^2 = 0");
  add_field(conic, c);
  add_out(conic, c);
  conic->add_option("--r", r)->required();
  conic->add_option("--s", s)->required();
  conic->add_option("--t", t)->required();
  conic->add_option("--place", place, "prime or inf")->required();
  conic->add_option("--degree", degree, "local degree (ignored with --field)");
  conic->add_option("--ram", ram, "ramification index (ignored with --field)");

  auto* cert = app.add_subcommand("certify", "audit the hypotheses and emit a certificate");
  add_field(cert, c);
  add_algebra(cert, c);
  add_enumeration(cert, c);
  add_out(cert, c);
  cert->add_option("--witness-bound", bound, "largest residual characteristic tried for the witness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kError;
  }

  try {
    if (*split) {
      const auto k = field_of(c);
      const auto sd = splitting_data(k, prime);
      emit(c, json{{"field", k.to_json()}, {"p", sd.p}, {"e", sd.e}, {"f", sd.f}, {"g", sd.g}});
    } else if (*hilbert) {
      if (!c.a || !c.b) throw std::invalid_argument("hilbert needs --a and --b");
      const BigInt a = parse_bigint(*c.a), b = parse_bigint(*c.b);
      if (!place.empty()) {
        const Place v = parse_place(place);
        emit(c, json{{"a", *c.a}, {"b", *c.b}, {"place", v.to_string()}, {"symbol", hilbert_symbol(a, b, v)}});
      } else {
        std::set<std::int64_t> primes{2};
        for (const BigInt& x : {a, b}) {
          BigInt m = abs(x);
          for (auto p : factorize(m).primes()) primes.insert(to_int64(p));
        }
        json symbols = json::object();
        int product = hilbert_symbol(a, b, Place::infinity());
        symbols["inf"] = product;
        for (auto p : primes) {
          const int h = hilbert_symbol(a, b, Place::prime(p));
          symbols[std::to_string(p)] = h;
          product *= h;
        }
        emit(c, json{{"a", *c.a}, {"b", *c.b}, {"symbols", symbols}, {"product", product}});
      }
    } else if (*quatsplit) {
      const auto k = field_of(c);
      const auto B = algebra_of(c);
      json out = splits_over(B, k).to_json();
      out["field"] = k.to_json();
      out["disc"] = discriminant(B);
      emit(c, out);
    } else if (*classgroup) {
      const auto k = field_of(c);
      if (k.kind() != FieldKind::quadratic) throw std::domain_error("classgroup computes quadratic fields only");
      const auto data = c.class_data.empty() ? generating_primes(k, bound) : ingest_class_data(k, load_json(c.class_data));
      json out = data.to_json();
      json forms = json::array();
      for (const auto& f : class_group(k.discriminant()).forms) forms.push_back({f.a, f.b, f.c});
      out["forms"] = forms;
      emit(c, out);
    } else if (*fr) {
      json out = json::array();
      for (const auto& w : fr_set(norm)) out.push_back(w.to_json());
      emit(c, json{{"n", norm}, {"size", out.size()}, {"roots", out}});
    } else if (*badprimes) {
      const auto k = field_of(c);
      auto data = class_data_of(c, k);
      if (!data) data = generating_primes(k);
      const auto sets = n1_set(k, *data, enumeration_of(c));
      emit(c, sets.to_json());
      if (!sets.complete && !c.allow_symbolic) {
        std::cerr << "factorization incomplete; rerun with --allow-symbolic to accept a partial N0\n";
        return kRefused;
      }
    } else if (*lemma) {
      const auto B = algebra_of(c);
      const auto res = elimination_verdict({norm, q, prime}, B);
      emit(c, json{{"N", norm}, {"q", q}, {"p", prime}, {"disc", discriminant(B)}, {"verdict", to_string(res.verdict)},
                   {"reason", res.reason}, {"trace", res.trace}});
    } else if (*conic) {
      const Place v = parse_place(place);
      if (!c.field.empty()) {
        const auto k = field_of(c);
        if (v.is_infinite()) {
          // Complex places exist iff k is not totally real; abelian fields are one or the other.
          degree = (k.degree() == 1 || k.fixes(k.modulus() - 1)) ? 1 : 2;
          ram = 1;
        } else {
          const auto sd = splitting_data(k, v.p);
          degree = sd.f;
          ram = sd.e;
        }
      }
      const bool ok = conic_local_solvable(parse_bigint(r), parse_bigint(s), parse_bigint(t), v, static_cast<int>(degree),
                                           static_cast<int>(ram));
      emit(c, json{{"r", r}, {"s", s}, {"t", t}, {"place", v.to_string()}, {"local_degree", degree}, {"ramification", ram},
                   {"solvable", ok}});
    } else if (*cert) {
      const auto k = field_of(c);
      const auto B = algebra_of(c);
      CertifyOptions opts;
      opts.witness_bound = bound;
      opts.enumeration = enumeration_of(c);
      opts.allow_symbolic = c.allow_symbolic;
      if (!c.class_data.empty()) opts.class_data = load_json(c.class_data);
      emit(c, certify(k, B, opts).dump());
    }
    return kOk;
  } catch (const Inapplicable& e) {
    std::cerr << e.what() << "\n";
    emit(c, json{{"status", "inapplicable"}, {"hypothesis", e.hypothesis()}, {"audit", e.audit().to_json()}});
    return kInapplicable;
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return kRefused;
  } catch (const CertificateWithheld& e) {
    std::cerr << e.what() << "\nrerun with --allow-symbolic to emit it\n";
    return kRefused;
  } catch (const std::domain_error& e) {
    std::cerr << "inapplicable: " << e.what() << "\n";
    return kInapplicable;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}
