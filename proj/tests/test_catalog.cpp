#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hjsr/catalog.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace hjsr;

namespace {

const NonNegMatrix T0 = NonNegMatrix::from_rows({{0, 0}, {1, 1}});

/// Smallest admissible parameters for an entry.
ChainParams admissible(const CatalogEntry& e) {
  const Signature& s = e.sig;
  ChainParams p;
  p.m = s.fixed_arity ? s.fixed_arity : (s.parity == Parity::Even ? 4 : (s.parity == Parity::Odd ? 3 : 3));
  if (s.two_index) {
    p.m = 2;
    p.k = 2;
  }
  const double md = static_cast<double>(p.m);
  if (s.weights == WeightRegime::SumOne) p.weights.assign(p.m, 1.0 / md);
  if (s.weights == WeightRegime::SumAtLeastOne) p.weights.assign(p.m, 1.5 / md);
  if (s.uses_alpha) p.alpha = std::max({s.alpha_min_m / md, s.alpha_min, 0.3});
  if (s.uses_t) p.t = 1.5;
  return p;
}

std::vector<OperatorSet> family_of(std::size_t count, const NonNegMatrix& a) {
  std::vector<OperatorSet> f;
  for (std::size_t i = 0; i < count; ++i) f.emplace_back("Psi" + std::to_string(i + 1), std::vector{a});
  return f;
}

NonNegMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e(n * n);
  for (double& x : e) x = u(rng) < 0.2 ? 0.0 : u(rng);
  return NonNegMatrix(n, e);
}

}  // namespace

TEST_CASE("registry shape") {
  const auto& all = list_entries();
  CHECK(all.size() == 26);
  std::set<std::string> ids;
  for (const auto& e : all) {
    ids.insert(e.id);
    const ChainParams p = admissible(e);
    const Built b = e.build(p);
    REQUIRE(!b.chains.empty());
    for (const auto& c : b.chains) {
      CHECK(c.terms.size() >= 2);
      for (const auto& t : c.terms) CHECK(t->is_scalar());
    }
    CHECK(applicability_check(e, p).ok);
  }
  CHECK(ids.size() == all.size());
  CHECK(find_entry("T3.3odd") != nullptr);
  CHECK(find_entry("T9.9") == nullptr);
}

TEST_CASE("applicability reasons") {
  ChainParams p;
  p.m = 3;
  p.alpha = 0.2;
  auto a = applicability_check(*find_entry("T3.6"), p);
  CHECK_FALSE(a.ok);
  CHECK(a.reason == "alpha < 1/m");
  CHECK_FALSE(a.structural);

  ChainParams c;
  c.m = 3;
  c.weights = {0.4, 0.4, 0.4};
  CHECK(applicability_check(*find_entry("C2.3"), c).ok);
  auto c1 = applicability_check(*find_entry("C2.1"), c);
  CHECK(c1.reason == "weights must sum to 1");

  ChainParams e;
  e.m = 5;
  auto b = applicability_check(*find_entry("T3.8i"), e);
  CHECK_FALSE(b.ok);
  CHECK(b.reason == "m must be even");
  CHECK(b.structural);

  ChainParams t;
  t.m = 4;
  t.alpha = 0.4;
  CHECK(applicability_check(*find_entry("T3.11"), t).reason == "alpha < 2/m");
  t.alpha = 0.3;
  CHECK(applicability_check(*find_entry("L3.16"), t).reason == "alpha < 1/2");
  CHECK(applicability_check(*find_entry("C3.7ii"), t).reason == "alpha < 1/3");

  ChainParams u;
  u.m = 2;
  u.t = 0.5;
  CHECK(applicability_check(*find_entry("T1.2iii"), u).reason == "t < 1");

  ChainParams perm;
  perm.m = 4;
  perm.alpha = 0.5;
  perm.tau = Permutation({2, 1, 3});
  CHECK(applicability_check(*find_entry("T3.8ii"), perm).reason == "tau must permute 1..m");

  auto fam = std::vector{OperatorSet("A", {T0, NonNegMatrix::ones(2)}), OperatorSet("B", {T0})};
  ChainParams s;
  s.m = 2;
  s.weights = {0.5, 0.5};
  CHECK(applicability_check(*find_entry("T1.2i"), s, fam).reason == "sets must be singletons");
}

TEST_CASE("parameter resolution") {
  const CatalogEntry& t11 = *find_entry("T1.1");
  ChainParams p;
  p.weights = {0.5, 0.5};
  auto q = t11.resolve(p, 6);
  CHECK(q.m == 2);
  CHECK(q.k == 3);
  CHECK(t11.arity(q) == 6);
  CHECK_THROWS_AS(t11.resolve(p, 5), InvalidArgument);
  auto l = find_entry("L3.1")->resolve(ChainParams{}, 1);
  CHECK(find_entry("L3.1")->arity(l) == 1);
  CHECK(find_entry("T3.5")->resolve(ChainParams{}, 5).m == 5);
}

TEST_CASE("identity family: every chain term brackets 1") {
  EvalOptions opts;
  for (const auto& e : list_entries()) {
    const ChainParams p = admissible(e);
    auto fam = family_of(e.arity(p), NonNegMatrix::identity(2));
    Evaluator ev(fam, opts);
    const Built b = e.build(p);
    for (const auto& c : b.chains) {
      for (const auto& t : c.terms) {
        const Bracket v = ev.scalar(t);
        INFO(e.id << " " << t->to_string() << " = [" << v.lo << ", " << v.hi << "]");
        CHECK(v.contains(1.0));
      }
    }
    for (const auto& w : b.elementwise) {
      CHECK(ev.set(w.lhs).mats()[0] == NonNegMatrix::identity(2));
    }
  }
}

TEST_CASE("example 3.4 expressions") {
  using namespace ex;
  const std::vector fam{OperatorSet("Psi", {T0})};
  EvalOptions opts;
  const Bracket n = evaluate_expression(norm(set(0)), fam, opts);
  CHECK(n.contains(std::sqrt(2.0)));
  CHECK(n.width() <= 1e-9);

  const std::vector fam3{OperatorSet("P1", {T0}), OperatorSet("P2", {T0}), OperatorSet("P3", {T0})};
  const Word w{{{1, false}, {2, true}, {3, false}, {1, true}, {2, false}, {3, true}}};
  const Bracket r8 = evaluate_expression(r(word(w)), fam3, opts);
  CHECK(std::abs(r8.lo - 8.0) <= 1e-9);
  CHECK(std::abs(r8.hi - 8.0) <= 1e-9);
  const Bracket root = evaluate_expression(pow(r(word(w)), 1.0 / 6.0), fam3, opts);
  CHECK(root.contains(std::sqrt(2.0)));

  const Bracket same = evaluate_expression(pow(norm(set(0)), 1.0), fam, opts);
  CHECK(same.lo == n.lo);
  CHECK(same.hi == n.hi);

  // The Hadamard mean of three copies of {T0} is T0 itself for every exponent.
  Evaluator ev(fam3, opts);
  CHECK(ev.set(hmean({set(0), set(1), set(2)}, {0.4, 0.4, 0.4})).mats()[0] == T0);
}

TEST_CASE("canonical keys identify equal values") {
  using namespace ex;
  const auto a = set(0), b = set(1), c = set(2);
  CHECK(canonical_key(r(product({a, b, c}))) == canonical_key(r(product({b, c, a}))));
  CHECK(canonical_key(r(product({a, adjoint(b)}))) == canonical_key(r(product({b, adjoint(a)}))));
  CHECK(canonical_key(r(product({a, b}))) != canonical_key(r(product({a, c}))));
  CHECK(canonical_key(norm(product({a, b}))) == canonical_key(norm(product({adjoint(b), adjoint(a)}))));
  CHECK(canonical_key(norm(product({a, b}))) != canonical_key(norm(product({b, a}))));
  CHECK(canonical_key(r(hmean({a, b}, {0.5, 0.25}))) == canonical_key(r(hmean({b, a}, {0.25, 0.5}))));
  CHECK(canonical_key(r(hmean({a, b}, {0.5, 0.25}))) != canonical_key(r(hmean({a, b}, {0.25, 0.5}))));
  CHECK(canonical_key(r(power(product({a, b}), 2))) == canonical_key(r(product({a, b, a, b}))));
  CHECK(canonical_key(r(adjoint(product({a, b})))) == canonical_key(r(product({b, a}))));
  CHECK(canonical_key(mul({r(a), norm(b)})) == canonical_key(mul({norm(b), r(a)})));
  CHECK(canonical_key(pow(r(a), 1.0)) == canonical_key(r(a)));

  // Structural equalities inside chains become identical terms.
  ChainParams p;
  p.m = 4;
  auto even = find_entry("T3.2even")->build(p).chains[0].terms;
  CHECK(canonical_key(even[1]) == canonical_key(even[2]));
  p.m = 5;
  p.alpha = 0.3;
  auto cor = find_entry("C3.15ii")->build(p).chains[0].terms;
  CHECK(canonical_key(cor[3]) == canonical_key(cor[4]));
}

TEST_CASE("rotation-equivalent r-values agree numerically") {
  std::mt19937_64 rng(5);
  JsrConfig cfg;
  for (int k = 0; k < 10; ++k) {
    std::vector<OperatorSet> fam;
    for (int i = 0; i < 3; ++i) fam.emplace_back("P", std::vector{random_matrix(rng, 3), random_matrix(rng, 3)});
    const Word w{{{1, false}, {2, true}, {3, false}}};
    const auto s0 = evaluate_word(w, fam), s1 = evaluate_word(rotate_word(w, 1), fam);
    CHECK(jsr_bracket(s0, cfg).overlaps(jsr_bracket(s1, cfg)));
  }
}

TEST_CASE("estimated cardinality") {
  using namespace ex;
  const std::vector<std::size_t> sizes{2, 3};
  CHECK(estimated_cardinality(set(1), sizes) == 3.0);
  CHECK(estimated_cardinality(product({set(0), adjoint(set(1))}), sizes) == 6.0);
  CHECK(estimated_cardinality(hmean({set(0), set(0)}, {0.5, 0.5}), sizes) == 4.0);
  CHECK(estimated_cardinality(power(set(1), 3), sizes) == 27.0);
  CHECK(estimated_cardinality(r(power(set(1), 3)), sizes) == 27.0);
}

TEST_CASE("interval combinators are monotone") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const double a = u(rng), b = u(rng), p = 0.1 + u(rng);
    const Bracket x{a, a + u(rng)}, y{b, b + u(rng)};
    const Bracket xw{x.lo * 0.9, x.hi * 1.1}, yw{y.lo * 0.8, y.hi * 1.2};
    const Bracket m = bracket_mul(x, y), mw = bracket_mul(xw, yw);
    CHECK(mw.lo <= m.lo);
    CHECK(mw.hi >= m.hi);
    CHECK(m.contains(a * b));
    const Bracket q = rounding::pow(x, p), qw = rounding::pow(xw, p);
    CHECK(qw.lo <= q.lo);
    CHECK(qw.hi >= q.hi);
  }
}

TEST_CASE("entrywise claims hold on random tuples") {
  std::mt19937_64 rng(31);
  EvalOptions opts;
  for (int trial = 0; trial < 50; ++trial) {
    for (const char* id : {"T1.1", "T1.2iii"}) {
      const CatalogEntry& e = *find_entry(id);
      ChainParams p;
      p.m = 2 + trial % 2;
      p.k = 2 + (trial / 2) % 2;
      p.weights.assign(p.m, 1.0 / static_cast<double>(p.m) * (1.0 + 0.1 * (trial % 5)));
      p.t = 1.0 + 0.5 * (trial % 3);
      std::vector<OperatorSet> fam;
      for (std::size_t i = 0; i < e.arity(p); ++i) fam.emplace_back("A", std::vector{random_matrix(rng, 3)});
      REQUIRE(applicability_check(e, p, fam).ok);
      Evaluator ev(fam, opts);
      for (const auto& w : e.build(p).elementwise) {
        const auto lhs = ev.set(w.lhs).mats()[0], rhs = ev.set(w.rhs).mats()[0];
        CHECK(pointwise_leq(lhs, rhs, 1e-12 * std::max(1.0, rhs.max_entry())));
      }
    }
  }
}

TEST_CASE("expression construction errors") {
  using namespace ex;
  CHECK_THROWS_AS(r(r(set(0))), InvalidArgument);
  CHECK_THROWS_AS(pow(set(0), 2.0), InvalidArgument);
  CHECK_THROWS_AS(hmean({set(0)}, {0.0}), InvalidArgument);
  CHECK_THROWS_AS(product({}), InvalidArgument);
  const std::vector fam{OperatorSet("Psi", {T0})};
  CHECK_THROWS_AS(evaluate_expression(r(set(3)), fam, EvalOptions{}), InvalidArgument);
}
