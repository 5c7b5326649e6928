#include "doctest.h"

#include "shimura/arith/kronecker.hpp"
#include "shimura/classgrp/class_group.hpp"

#include <cmath>
#include <set>

using namespace shimura;

namespace {

// Counts reduced triples directly, looping over c as the outer variable.
std::int64_t brute_force_count(std::int64_t D) {
  std::int64_t count = 0;
  const std::int64_t absD = -D;
  for (std::int64_t b = 0; b * b <= absD; ++b) {
    if ((b * b - D) % 4 != 0) continue;
    const std::int64_t ac = (b * b - D) / 4;
    for (std::int64_t a = std::max<std::int64_t>(b, 1); a * a <= ac; ++a) {
      if (ac % a != 0) continue;
      const std::int64_t c = ac / a;
      // (a, b, c) and (a, -b, c) are both reduced unless b = 0, b = a or a = c.
      count += (b == 0 || b == a || a == c) ? 1 : 2;
    }
  }
  return count;
}

// Analytic class number formula for D < -4: h = -(1/|D|) sum_{a=1}^{|D|} chi(a) a.
std::int64_t analytic_class_number(std::int64_t D) {
  std::int64_t sum = 0;
  for (std::int64_t a = 1; a < -D; ++a) sum += kronecker(BigInt(static_cast<long>(D)), BigInt(static_cast<long>(a))) * a;
  const std::int64_t w = D == -3 ? 6 : (D == -4 ? 4 : 2);
  return -sum * w / 2 / (-D);
}

}  // namespace

TEST_CASE("class_group fixtures") {
  auto cg = class_group(-24);
  CHECK(cg.h == 2);
  CHECK(cg.forms == std::vector<QuadForm>{{1, 0, 6}, {2, 0, 3}});
  CHECK(class_group(-31).h == 3);
  CHECK(class_group(-3).h == 1);
  CHECK(class_group(-4).h == 1);
  CHECK(class_group(-163).h == 1);
  CHECK(class_group(-3299).h == 27);
  CHECK_THROWS_AS(class_group(-12), std::invalid_argument);
}

TEST_CASE("class numbers: reduced forms vs brute force and analytic formula") {
  for (std::int64_t D = -3; D >= -2000; --D) {
    if (!is_fundamental_discriminant(D)) continue;
    const auto h = class_group(D).h;
    CHECK(h == brute_force_count(D));
    CHECK(h == analytic_class_number(D));
  }
}

TEST_CASE("compose_reduced fixtures and group law") {
  CHECK(compose_reduced({1, 0, 6}, {2, 0, 3}) == QuadForm{2, 0, 3});
  CHECK(compose_reduced({2, 0, 3}, {2, 0, 3}) == QuadForm{1, 0, 6});
  CHECK(compose_reduced({2, 1, 4}, {2, -1, 4}) == QuadForm{1, 1, 8});
  CHECK_THROWS_AS(compose_reduced({1, 0, 6}, {1, 1, 8}), std::invalid_argument);

  for (std::int64_t D : {-23L, -47L, -71L, -84L, -199L, -420L, -3299L}) {
    const auto cg = class_group(D);
    const QuadForm e = principal_form(D);
    std::set<QuadForm> all(cg.forms.begin(), cg.forms.end());
    for (const auto& f : cg.forms) {
      CHECK(reduce_definite(f) == f);
      CHECK(compose_reduced(f, e) == f);
      // inverse (a, -b, c)
      CHECK(compose_reduced(f, reduce_definite({f.a, -f.b, f.c})) == e);
      for (const auto& g : cg.forms) {
        const QuadForm fg = compose_reduced(f, g);
        CHECK(all.count(fg) == 1);
        CHECK(fg == compose_reduced(g, f));
      }
    }
    // associativity on a sample
    for (std::size_t i = 0; i + 2 < cg.forms.size() && i < 5; ++i) {
      const auto& a = cg.forms[i];
      const auto& b = cg.forms[i + 1];
      const auto& c = cg.forms[i + 2];
      CHECK(compose_reduced(compose_reduced(a, b), c) == compose_reduced(a, compose_reduced(b, c)));
    }
  }
}

TEST_CASE("real quadratic class numbers against the analytic formula") {
  // h log(eps) = -1/2 sum_{a=1}^{D-1} chi(a) log sin(pi a / D)
  const double pi = std::acos(-1.0);
  int checked_fields = 0;
  for (std::int64_t D = 5; D <= 1500; ++D) {
    if (!is_fundamental_discriminant(D)) continue;
    const auto eps = fundamental_unit(D);
    const double log_eps = std::log((eps.t.get_d() + eps.u.get_d() * std::sqrt(static_cast<double>(D))) / 2.0);
    double sum = 0;
    for (std::int64_t a = 1; a < D; ++a) {
      const int chi = kronecker(BigInt(static_cast<long>(D)), BigInt(static_cast<long>(a)));
      if (chi != 0) sum += chi * std::log(std::sin(pi * static_cast<double>(a) / static_cast<double>(D)));
    }
    const double h = -0.5 * sum / log_eps;
    CHECK_MESSAGE(class_group(D).h == std::llround(h), "D = " << D);
    CHECK(std::abs(h - std::round(h)) < 1e-6);
    ++checked_fields;
  }
  CHECK(checked_fields > 400);
  CHECK(class_group(229).h == 3);
  CHECK(fundamental_unit(5).norm == -1);
  CHECK(fundamental_unit(5).t == 1);
  CHECK(fundamental_unit(12).norm == 1);
  CHECK(fundamental_unit(12).t == 4);
}

TEST_CASE("generating_primes fixtures") {
  auto cg = generating_primes(NumberField::quadratic(-4));
  CHECK(cg.h == 1);
  REQUIRE(cg.S.size() == 1);
  CHECK(cg.S[0].prime.q == 5);
  CHECK(cg.S[0].alpha == IntPolynomial{2, 1});

  cg = generating_primes(NumberField::quadratic(-24));
  CHECK(cg.h == 2);
  REQUIRE(cg.S.size() == 1);
  CHECK(cg.S[0].prime.q == 5);
  CHECK(cg.S[0].alpha == IntPolynomial{1, 2});
  CHECK(field_norm(cg.field, cg.S[0].alpha) == 25);

  cg = generating_primes(NumberField::quadratic(5));
  CHECK(cg.h == 1);
  REQUIRE(cg.S.size() == 1);
  CHECK(cg.S[0].prime.q == 11);
  CHECK(cg.S[0].alpha == IntPolynomial{3, 1});
  CHECK(field_norm(cg.field, cg.S[0].alpha) == 11);
  CHECK(cg.S[0].conjugates == std::vector<IntPolynomial>{{3, 1}, {4, -1}});

  CHECK_THROWS_AS(generating_primes(NumberField::cyclotomic(31)), std::domain_error);
}

TEST_CASE("generating_primes invariants") {
  for (std::int64_t D : {-3L, -4L, -7L, -8L, -15L, -20L, -23L, -24L, -31L, -56L, -84L, -420L, -260L, 5L, 8L, 12L, 40L, 60L, 65L, 229L, 401L}) {
    const auto k = NumberField::quadratic(D);
    const auto cg = generating_primes(k);
    std::vector<QuadForm> classes;
    for (const auto& g : cg.S) {
      const BigInt N = pow(BigInt(static_cast<long>(g.prime.q)), static_cast<unsigned long>(cg.h));
      CHECK(abs(field_norm(k, g.alpha)) == N);
      CHECK(kronecker(BigInt(D), BigInt(g.prime.q)) == 1);
      REQUIRE(g.prime.form.has_value());
      CHECK(g.prime.form->discriminant() == D);
      classes.push_back(canonical_form(*g.prime.form));
    }
    // closure of the classes of S has order h
    std::set<QuadForm> group{canonical_form(principal_form(D))};
    bool grew = true;
    while (grew) {
      grew = false;
      const std::vector<QuadForm> snapshot(group.begin(), group.end());
      for (const auto& x : snapshot)
        for (const auto& c : classes) grew |= group.insert(compose_reduced(x, c)).second;
    }
    CHECK_MESSAGE(static_cast<std::int64_t>(group.size()) == cg.h, "D = " << D);
    // q^h is principal: class of the form to the h-th power is trivial
    for (const auto& c : classes) {
      QuadForm acc = canonical_form(principal_form(D));
      for (std::int64_t i = 0; i < cg.h; ++i) acc = compose_reduced(acc, c);
      CHECK(acc == canonical_form(principal_form(D)));
    }
  }
}

TEST_CASE("ingest_class_data") {
  const auto k = NumberField::quadratic(-24);
  const auto computed = generating_primes(k);
  nlohmann::json payload = computed.to_json();
  auto ingested = ingest_class_data(k, payload);
  CHECK(ingested.provenance == "ingested");
  ingested.provenance = "computed";
  CHECK(ingested.to_json().dump() == computed.to_json().dump());

  auto bad = payload;
  bad["alpha"][0]["minpoly_coeffs_in_field_generator"] = {"2", "2"};
  CHECK_THROWS_WITH_AS(ingest_class_data(k, bad), doctest::Contains("Norm(alpha)"), ClassDataRejected);

  bad = payload;
  bad["S"][0]["q"] = 13;
  bad["alpha"][0]["q"] = 13;
  CHECK_THROWS_WITH_AS(ingest_class_data(k, bad), doctest::Contains("does not split completely"), ClassDataRejected);

  bad = payload;
  bad["h"] = 1;
  CHECK_THROWS_AS(ingest_class_data(k, bad), ClassDataRejected);

  bad = payload;
  bad.erase("alpha");
  CHECK_THROWS_AS(ingest_class_data(k, bad), ClassDataRejected);

  CHECK_THROWS_AS(ingest_class_data(NumberField::quadratic(-4), payload), ClassDataRejected);
}

TEST_CASE("ingest_class_data for a compositum checks supplied conjugates") {
  // k = Q(i, sqrt 2), theta = i + sqrt 2, theta^3 = 5i - sqrt 2, so
  // s i + t sqrt 2 = ((s - t) theta^3 + (s + 5t) theta) / 6.
  const auto k = NumberField::compositum({NumberField::quadratic(-4), NumberField::quadratic(8)});
  const IntPolynomial m = k.generator_minpoly();
  REQUIRE(m == IntPolynomial{9, 0, -2, 0, 1});
  std::vector<IntPolynomial> sigma_theta;
  for (long s : {1L, -1L})
    for (long t : {1L, -1L}) sigma_theta.push_back(IntPolynomial{0, s + 5 * t, 0, s - t});
  // alpha = -2 + theta; sigma(alpha) = (-12 + c_sigma) / 6.
  const IntPolynomial alpha{-2, 1};
  const BigInt N = field_norm(k, alpha);
  REQUIRE(abs(N) == 17);
  nlohmann::json conj = nlohmann::json::array();
  for (const auto& c : sigma_theta) {
    nlohmann::json coeffs = nlohmann::json::array();
    const IntPolynomial num = reduce_monic(IntPolynomial{-12} + c, m);
    for (const auto& x : num.coefficients()) coeffs.push_back(to_string(x));
    conj.push_back(coeffs);
  }
  nlohmann::json payload{{"field_spec", k.to_json()},
                         {"h", 1},
                         {"S", {{{"q", 17}, {"f", 1}}}},
                         {"alpha", {{{"q", 17}, {"minpoly_coeffs_in_field_generator", {-2, 1}}}}}};
  CHECK_THROWS_WITH_AS(ingest_class_data(k, payload), doctest::Contains("conjugates"), ClassDataRejected);
  payload["alpha"][0]["conjugates"] = conj;
  payload["alpha"][0]["conjugate_denominator"] = "6";
  const auto data = ingest_class_data(k, payload);
  CHECK(data.S[0].conjugates.size() == 4);
  CHECK(data.S[0].conjugate_denominator == 6);
  // a wrong conjugate is caught
  payload["alpha"][0]["conjugates"][1] = payload["alpha"][0]["conjugates"][0];
  CHECK_THROWS_WITH_AS(ingest_class_data(k, payload), doctest::Contains("characteristic polynomial"), ClassDataRejected);
}
