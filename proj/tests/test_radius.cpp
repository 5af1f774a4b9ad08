#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hjsr/radius.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <random>

using namespace hjsr;

namespace {

const NonNegMatrix T0 = NonNegMatrix::from_rows({{0, 0}, {1, 1}});
const NonNegMatrix E12 = NonNegMatrix::from_rows({{0, 1}, {0, 0}});
const NonNegMatrix E21 = NonNegMatrix::from_rows({{0, 0}, {1, 0}});

NonNegMatrix random_matrix(std::mt19937_64& rng, std::size_t n, double sparsity = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e(n * n);
  for (double& x : e) x = u(rng) < sparsity ? 0.0 : u(rng);
  return NonNegMatrix(n, e);
}

OperatorSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t size, double sparsity = 0.0) {
  std::vector<NonNegMatrix> m;
  for (std::size_t i = 0; i < size; ++i) m.push_back(random_matrix(rng, n, sparsity));
  return OperatorSet("R", m);
}

Bracket pow_bracket(const Bracket& b, double p) { return rounding::pow(b, p); }

}  // namespace

TEST_CASE("config validation") {
  JsrConfig c;
  CHECK_NOTHROW(validate(c));
  c.max_depth = 0;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c = {};
  c.target_width = 0;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
}

TEST_CASE("gsr_lower examples") {
  auto ones = OperatorSet("A1", {NonNegMatrix::ones(2)});
  CHECK(std::abs(gsr_lower(ones, 1).value - 2.0) <= 1e-9);
  auto e = OperatorSet("E", {E12, E21});
  CHECK(std::abs(gsr_lower(e, 2).value - 1.0) <= 1e-9);
  CHECK(gsr_lower(e, 1).value == 0.0);
  CHECK_THROWS_AS(gsr_lower(e, 0), InvalidArgument);
}

TEST_CASE("jsr_upper examples") {
  JsrConfig c;
  c.max_depth = 1;
  auto ones = OperatorSet("A1", {NonNegMatrix::ones(2)});
  CHECK(std::abs(jsr_upper(ones, c).value - 2.0) <= 1e-9);
  auto e = OperatorSet("E", {E12, E21});
  CHECK(std::abs(jsr_upper(e, c).value - 1.0) <= 1e-9);
}

TEST_CASE("jsr_bracket examples") {
  JsrConfig c;
  auto a = NonNegMatrix::from_rows({{1, 2}, {0.5, 3}});
  auto b = jsr_bracket(OperatorSet("A", {a}), c);
  CHECK(b.contains(oracle::spectral_radius(a)));

  c.max_depth = 4;
  auto ones = jsr_bracket(OperatorSet("A1", {NonNegMatrix::ones(2)}), c);
  CHECK(ones.contains(2.0));
  CHECK(ones.width() <= 1e-6);

  c.max_depth = 2;
  auto e = jsr_bracket(OperatorSet("E", {E12, E21}), c);
  CHECK(std::abs(e.lo - 1.0) <= 1e-9);
  CHECK(std::abs(e.hi - 1.0) <= 1e-9);

  auto z = jsr_bracket(OperatorSet("Z", {NonNegMatrix(2)}), c);
  CHECK(z.lo == 0.0);
  CHECK(z.hi == 0.0);

  // Nilpotent family: every product of length 2 vanishes.
  c.max_depth = 6;
  auto nil = jsr_bracket(OperatorSet("N", {E12, E12.scaled(3.0)}), c);
  CHECK(nil.lo == 0.0);
  CHECK(nil.hi == 0.0);
}

TEST_CASE("set norm") {
  CHECK(set_norm(OperatorSet("T", {T0})).contains(std::sqrt(2.0)));
  CHECK(set_norm(OperatorSet("IT", {NonNegMatrix::identity(2), T0})).contains(std::sqrt(2.0)));
  auto z = set_norm(OperatorSet("Z", {NonNegMatrix(2)}));
  CHECK(z.lo == 0.0);
  CHECK(z.hi == 0.0);
}

TEST_CASE("brute force oracle") {
  auto a = NonNegMatrix::from_rows({{1, 2}, {0.5, 3}});
  auto b = brute_force_oracle(OperatorSet("A", {a}), 1);
  auto s = spectral_radius_bracket(a);
  CHECK(b.lo <= s.hi);
  CHECK(s.lo <= b.hi);
  CHECK(b.contains(oracle::spectral_radius(a)) == true);
  CHECK(brute_force_oracle(OperatorSet("A1", {NonNegMatrix::ones(2)}), 3).contains(2.0));
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(brute_force_oracle(random_set(rng, 2, 10), 8), BudgetExceeded);
}

TEST_CASE("engine agrees with the exhaustive oracle on random pairs") {
  std::mt19937_64 rng(21);
  JsrConfig c;
  for (int k = 0; k < 100; ++k) {
    auto s = random_set(rng, 2, 2, k % 3 == 0 ? 0.3 : 0.0);
    auto e = jsr_bracket(s, c);
    auto o = brute_force_oracle(s, 8);
    INFO("k=" << k << " engine=[" << e.lo << "," << e.hi << "] oracle=[" << o.lo << "," << o.hi << "]");
    CHECK(e.lo <= e.hi);
    CHECK(e.overlaps(o));
    double prev = 0.0;
    for (std::size_t d = 1; d <= 8; ++d) {
      const double v = gsr_lower(s, d).value;
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("engine reaches the target width on typical sets") {
  std::mt19937_64 rng(22);
  JsrConfig c;
  int tight = 0, total = 0;
  for (std::size_t n : {2u, 3u, 4u}) {
    for (std::size_t size : {2u, 3u}) {
      for (int k = 0; k < 20; ++k) {
        auto s = random_set(rng, n, size, k % 4 == 0 ? 0.3 : 0.0);
        auto b = jsr_bracket(s, c);
        ++total;
        if (b.hi <= b.lo * (1 + 1.01e-3)) ++tight;
        CHECK(b.lo <= b.hi);
        CHECK(b.hi <= b.lo * 1.03);
      }
    }
  }
  MESSAGE("tight " << tight << " / " << total);
  CHECK(tight >= total * 3 / 4);
}

TEST_CASE("power identity r(S^m) = r(S)^m") {
  std::mt19937_64 rng(23);
  JsrConfig c;
  for (int k = 0; k < 20; ++k) {
    auto s = random_set(rng, 2 + k % 2, 2);
    auto b = jsr_bracket(s, c);
    for (std::size_t m : {2u, 3u}) {
      auto bm = jsr_bracket(set_power(s, m), c);
      CHECK(bm.overlaps(pow_bracket(b, static_cast<double>(m))));
    }
  }
}

TEST_CASE("commutation r(PS) = r(SP) and adjoint invariance") {
  std::mt19937_64 rng(24);
  JsrConfig c;
  for (int k = 0; k < 20; ++k) {
    auto p = random_set(rng, 3, 2), s = random_set(rng, 3, 2, 0.2);
    CHECK(jsr_bracket(set_product(p, s), c).overlaps(jsr_bracket(set_product(s, p), c)));
    CHECK(jsr_bracket(s, c).overlaps(jsr_bracket(adjoint_set(s), c)));
  }
}

TEST_CASE("set norm equals sqrt of r(Psi* Psi)") {
  std::mt19937_64 rng(25);
  JsrConfig c;
  for (int k = 0; k < 30; ++k) {
    auto psi = random_set(rng, 2 + k % 2, 1 + k % 3, k % 5 == 0 ? 0.4 : 0.0);
    auto n = set_norm(psi);
    auto r = rounding::sqrt(jsr_bracket(set_product(adjoint_set(psi), psi), c));
    INFO("norm=[" << n.lo << "," << n.hi << "] sqrt r=[" << r.lo << "," << r.hi << "]");
    CHECK(n.overlaps(r));
    CHECK(r.width() <= 1e-9);
  }
}

TEST_CASE("deduplication does not change brackets") {
  std::mt19937_64 rng(26);
  JsrConfig c;
  for (int k = 0; k < 10; ++k) {
    auto s = random_set(rng, 3, 2);
    std::vector<NonNegMatrix> dup(s.mats().begin(), s.mats().end());
    dup.push_back(s.mats()[0]);
    auto a = jsr_bracket(s, c), b = jsr_bracket(OperatorSet("D", dup), c);
    CHECK(a.overlaps(b));
  }
}

TEST_CASE("plain enumeration without branch and bound stays valid") {
  std::mt19937_64 rng(27);
  JsrConfig c;
  c.refine = false;
  c.max_depth = 6;
  for (int k = 0; k < 10; ++k) {
    auto s = random_set(rng, 2, 2);
    auto b = jsr_bracket(s, c);
    CHECK(b.overlaps(brute_force_oracle(s, 6)));
  }
}

TEST_CASE("large entries do not overflow") {
  auto a = NonNegMatrix::from_rows({{1e150, 2e150}, {0, 1e150}});
  auto b = NonNegMatrix::from_rows({{1e150, 0}, {3e150, 1e150}});
  auto r = jsr_bracket(OperatorSet("Big", {a, b}), JsrConfig{});
  CHECK(std::isfinite(r.hi));
  CHECK(r.lo >= 1e150);
}

TEST_CASE("budget exhaustion yields a partial but valid bracket") {
  std::mt19937_64 rng(28);
  JsrConfig c;
  c.budget_products = 10;
  c.target_width = 1e-12;
  auto s = random_set(rng, 3, 3);
  auto b = jsr_bracket(s, c);
  auto o = brute_force_oracle(s, 6);
  CHECK(b.partial);
  CHECK(b.overlaps(o));
}
