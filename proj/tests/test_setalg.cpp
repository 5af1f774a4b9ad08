#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hjsr/setalg.hpp"

#include <algorithm>
#include <random>

using namespace hjsr;

namespace {

const NonNegMatrix T0 = NonNegMatrix::from_rows({{0, 0}, {1, 1}});

OperatorSet single(const NonNegMatrix& a, std::string name = "S") { return OperatorSet(std::move(name), {a}); }

bool contains(const OperatorSet& s, const NonNegMatrix& a) {
  return std::find(s.mats().begin(), s.mats().end(), a) != s.mats().end();
}

NonNegMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> e(n * n);
  for (double& x : e) x = u(rng);
  return NonNegMatrix(n, e);
}

Permutation random_perm(std::mt19937_64& rng, std::size_t m) {
  std::vector<std::size_t> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = i + 1;
  std::shuffle(v.begin(), v.end(), rng);
  return Permutation(v);
}

Letter L(std::size_t i, bool adj = false) { return {i, adj}; }

// Transcription of the three printed index regimes for the odd-m Omega words:
//   j <= (m-1)/2 : Psi_{2j-1} Psi_{2j}^* ... Psi_{m-2} Psi_{m-1}^* | Psi_m Psi_1^* Psi_2 ... Psi_{m-1} Psi_m^* |
//                  Psi_1 Psi_2^* ... Psi_{2j-3} Psi_{2j-2}^*
//   j = (m+1)/2  : Psi_m Psi_1^* Psi_2 Psi_3^* ... Psi_{m-1} Psi_m^* | Psi_1 Psi_2^* ... Psi_{m-2} Psi_{m-1}^*
//   j >= (m+3)/2 : Psi_{2j-m-1} Psi_{2j-m}^* ... Psi_{m-1} Psi_m^* | Psi_1 Psi_2^* ... Psi_m Psi_1^* ... |
//                  ... Psi_{2j-m-3} Psi_{2j-m-2}^*
Word printed_omega_odd(std::size_t m, std::size_t j) {
  Word w;
  auto pairs = [&](std::size_t from, std::size_t to) {  // Psi_from Psi_{from+1}^* ... Psi_{to-1} Psi_to^*
    for (std::size_t i = from; i + 1 <= to; i += 2) {
      w.letters.push_back(L(i));
      w.letters.push_back(L(i + 1, true));
    }
  };
  auto middle = [&] {  // Psi_m Psi_1^* Psi_2 Psi_3^* ... Psi_{m-1} Psi_m^*
    w.letters.push_back(L(m));
    w.letters.push_back(L(1, true));
    for (std::size_t i = 2; i + 1 <= m; i += 2) {
      w.letters.push_back(L(i));
      w.letters.push_back(L(i + 1, true));
    }
  };
  if (j <= (m - 1) / 2) {
    pairs(2 * j - 1, m - 1);
    middle();
    pairs(1, 2 * j - 2);
  } else if (j == (m + 1) / 2) {
    middle();
    pairs(1, m - 1);
  } else {
    pairs(2 * j - m - 1, m);
    // Psi_1 Psi_2^* Psi_3 ... Psi_m Psi_1^* ... up to Psi_{2j-m-2}^*: a run of
    // alternating letters starting at Psi_1 (plain) of length m + (2j-m-2).
    const std::size_t len = m + (2 * j - m - 2);
    for (std::size_t k = 0; k < len; ++k) w.letters.push_back(L(k % m + 1, k % 2 == 1));
  }
  return w;
}

}  // namespace

TEST_CASE("operator set basics") {
  CHECK_THROWS_AS(OperatorSet("empty", {}), InvalidArgument);
  CHECK_THROWS_AS(OperatorSet("mixed", {T0, NonNegMatrix::ones(3)}), DimensionMismatch);
  OperatorSet s("S", {T0, NonNegMatrix::ones(2), T0});
  CHECK(s.size() == 3);
  CHECK(s.deduplicated().size() == 2);
  CHECK(s.dim() == 2);
}

TEST_CASE("set product") {
  std::mt19937_64 rng(11);
  OperatorSet psi("Psi", {random_matrix(rng, 2), random_matrix(rng, 2)});
  auto p = set_product(single(NonNegMatrix::identity(2)), psi);
  CHECK(p.mats().size() == 2);
  for (const auto& a : psi.mats()) CHECK(contains(p, a));

  auto q = set_product(single(T0.transpose()), single(T0));
  REQUIRE(q.size() == 1);
  CHECK(q.mats()[0] == NonNegMatrix::ones(2));

  for (int k = 0; k < 20; ++k) {
    OperatorSet a("A", {random_matrix(rng, 3), random_matrix(rng, 3)});
    OperatorSet b("B", {random_matrix(rng, 3), random_matrix(rng, 3), random_matrix(rng, 3)});
    CHECK(set_product(a, b).size() <= 6);
  }
  CHECK_THROWS_AS(set_product(single(T0), single(NonNegMatrix::ones(3))), DimensionMismatch);
}

TEST_CASE("set power") {
  std::mt19937_64 rng(12);
  OperatorSet psi("Psi", {random_matrix(rng, 2), random_matrix(rng, 2)});
  CHECK(set_power(psi, 1).size() == psi.deduplicated().size());

  OperatorSet e("E", {NonNegMatrix::from_rows({{0, 1}, {0, 0}}), NonNegMatrix::from_rows({{0, 0}, {1, 0}})});
  auto sq = set_power(e, 2);
  CHECK(contains(sq, NonNegMatrix::from_rows({{1, 0}, {0, 0}})));
  CHECK(contains(sq, NonNegMatrix::from_rows({{0, 0}, {0, 1}})));

  for (std::size_t m = 1; m <= 5; ++m) {
    auto p = set_power(single(NonNegMatrix::ones(2)), m);
    REQUIRE(p.size() == 1);
    const double v = static_cast<double>(1u << (m - 1));
    CHECK(p.mats()[0] == NonNegMatrix(2, {v, v, v, v}));
  }
  CHECK_THROWS_AS(set_power(psi, 0), InvalidArgument);
  OperatorSet big("Big", {random_matrix(rng, 2), random_matrix(rng, 2), random_matrix(rng, 2)});
  CHECK_THROWS_AS(set_power(big, 6, 100), BudgetExceeded);
}

TEST_CASE("adjoint set") {
  auto sym = NonNegMatrix::from_rows({{1, 2}, {2, 5}});
  CHECK(adjoint_set(single(sym)).mats()[0] == sym);
  CHECK(adjoint_set(single(T0)).mats()[0] == NonNegMatrix::from_rows({{0, 1}, {0, 1}}));
  std::mt19937_64 rng(13);
  OperatorSet psi("Psi", {random_matrix(rng, 3), random_matrix(rng, 3)});
  auto back = adjoint_set(adjoint_set(psi));
  CHECK(std::equal(back.mats().begin(), back.mats().end(), psi.mats().begin(), psi.mats().end()));
}

TEST_CASE("set hadamard mean") {
  auto a = NonNegMatrix::from_rows({{4, 1}, {9, 0}});
  auto b = NonNegMatrix::from_rows({{1, 4}, {1, 2}});
  std::vector<OperatorSet> sets{single(a), single(b)};
  std::vector<double> half{0.5, 0.5};
  auto h = set_hadamard_mean(sets, half);
  REQUIRE(h.size() == 1);
  CHECK(h.mats()[0] == NonNegMatrix::from_rows({{2, 2}, {3, 0}}));

  std::vector<OperatorSet> three{single(T0), single(T0), single(T0)};
  std::vector<double> third{1.0 / 3, 1.0 / 3, 1.0 / 3};
  auto t = set_hadamard_mean(three, third);
  REQUIRE(t.size() == 1);
  CHECK(t.mats()[0] == T0);

  std::mt19937_64 rng(14);
  std::vector<OperatorSet> mixed{OperatorSet("A", {random_matrix(rng, 2), random_matrix(rng, 2)}),
                                 OperatorSet("B", {random_matrix(rng, 2), random_matrix(rng, 2), random_matrix(rng, 2)})};
  CHECK(set_hadamard_mean(mixed, half).size() <= 6);
  std::vector<double> bad{0.5, -0.5};
  CHECK_THROWS_AS(set_hadamard_mean(mixed, bad), InvalidArgument);
}

TEST_CASE("permutations") {
  CHECK_THROWS_AS(Permutation({1, 1}), InvalidArgument);
  CHECK_THROWS_AS(Permutation({0, 1}), InvalidArgument);
  CHECK_THROWS_AS(Permutation({1, 3}), InvalidArgument);
  Permutation p({2, 3, 1});
  CHECK(p(1) == 2);
  CHECK(p(3) == 1);
  CHECK(Permutation::identity(3).images() == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("word rotation") {
  Word w{{L(1), L(2, true), L(3), L(1, true)}};
  CHECK(rotate_word(w, 0) == w);
  Word r = w;
  for (std::size_t k = 0; k < w.size(); ++k) r = rotate_word(r, 1);
  CHECK(r == w);
  CHECK(rotate_word(w, 1).to_string() == "2* 3 1* 1");
  CHECK_THROWS_AS(rotate_word(w, 4), InvalidArgument);
  CHECK(adjoint_word(w).to_string() == "1 3* 2 1*");
}

TEST_CASE("construction ids round-trip") {
  for (auto id : {"cyclic_sigma", "phi_cyclic", "omega_odd", "sigma_even", "omega_even", "theta_half",
                  "omega_tau_nu", "corollary_315_perms"}) {
    auto k = parse_construction(id);
    REQUIRE(k.has_value());
    CHECK(to_string(*k) == id);
  }
  CHECK_FALSE(parse_construction("nope").has_value());
}

TEST_CASE("odd Omega words match the printed index formulas") {
  for (std::size_t m : {3u, 5u, 7u}) {
    auto words = construction_words(ConstructionKind::OmegaOdd, m);
    REQUIRE(words.size() == m);
    for (std::size_t j = 1; j <= m; ++j) {
      INFO("m=" << m << " j=" << j);
      CHECK(words[j - 1].to_string() == printed_omega_odd(m, j).to_string());
      CHECK(words[j - 1] == rotate_word(words[0], 2 * (j - 1)));
    }
  }
  CHECK_THROWS_AS(construction_words(ConstructionKind::OmegaOdd, 4), InvalidArgument);
}

TEST_CASE("cyclic Phi words") {
  for (std::size_t m : {2u, 3u, 4u, 5u}) {
    auto words = construction_words(ConstructionKind::PhiCyclic, m);
    REQUIRE(words.size() == m);
    for (std::size_t j = 1; j <= m; ++j) {
      Word printed;  // Psi_j ... Psi_m Psi_1 ... Psi_{j-1}
      for (std::size_t i = j; i <= m; ++i) printed.letters.push_back(L(i));
      for (std::size_t i = 1; i < j; ++i) printed.letters.push_back(L(i));
      CHECK(words[j - 1] == printed);
    }
  }
}

TEST_CASE("even Sigma, Omega and Theta words match the printed formulas") {
  std::mt19937_64 rng(15);
  for (std::size_t m : {2u, 4u, 6u, 8u}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Permutation tau = trial == 0 ? Permutation::identity(m) : random_perm(rng, m);
      const Permutation nu = trial == 0 ? Permutation::identity(m) : random_perm(rng, m);
      INFO("m=" << m << " trial=" << trial);

      auto sigma = construction_words(ConstructionKind::SigmaEven, m, tau);
      REQUIRE(sigma.size() == m);
      for (std::size_t j = 1; j <= m / 2; ++j) {
        CHECK(sigma[j - 1] == Word{{L(tau(2 * j - 1), true), L(tau(2 * j))}});
        CHECK(sigma[m / 2 + j - 1] == Word{{L(tau(2 * j), true), L(tau(2 * j - 1))}});
        CHECK(sigma[m / 2 + j - 1] == adjoint_word(sigma[j - 1]));
      }

      auto omega = construction_words(ConstructionKind::OmegaEven, m, tau, nu);
      REQUIRE(omega.size() == m);
      for (std::size_t i = 1; i <= m; ++i) {
        Word printed;  // Sigma_{nu(i)} ... Sigma_{nu(m)} Sigma_{nu(1)} ... Sigma_{nu(i-1)}
        for (std::size_t k = i; k <= m; ++k) printed = concat(printed, sigma[nu(k) - 1]);
        for (std::size_t k = 1; k < i; ++k) printed = concat(printed, sigma[nu(k) - 1]);
        CHECK(omega[i - 1] == printed);
      }

      auto theta = construction_words(ConstructionKind::ThetaHalf, m, tau);
      REQUIRE(theta.size() == m / 2);
      for (std::size_t i = 1; i <= m / 2; ++i) {
        Word printed;  // Sigma_i ... Sigma_{m/2} Sigma_1 ... Sigma_{i-1}
        for (std::size_t k = i; k <= m / 2; ++k) printed = concat(printed, sigma[k - 1]);
        for (std::size_t k = 1; k < i; ++k) printed = concat(printed, sigma[k - 1]);
        CHECK(theta[i - 1] == printed);
      }
    }
  }
  CHECK_THROWS_AS(construction_words(ConstructionKind::SigmaEven, 3), InvalidArgument);
  CHECK_THROWS_AS(construction_words(ConstructionKind::ThetaHalf, 5), InvalidArgument);
  CHECK_THROWS_AS(construction_words(ConstructionKind::OmegaEven, 4, Permutation::identity(3)), InvalidArgument);
}

TEST_CASE("tau/nu Omega words match the printed formula") {
  std::mt19937_64 rng(16);
  for (std::size_t m : {2u, 3u, 4u, 5u}) {
    const Permutation tau = random_perm(rng, m), nu = random_perm(rng, m);
    auto omega = construction_words(ConstructionKind::OmegaTauNu, m, tau, nu);
    REQUIRE(omega.size() == m);
    for (std::size_t j = 1; j <= m; ++j) {
      Word printed;  // Psi_tau(j)^* Psi_nu(j) ... Psi_tau(m)^* Psi_nu(m) ... Psi_tau(j-1)^* Psi_nu(j-1)
      for (std::size_t k = j; k <= m; ++k) printed.letters.insert(printed.letters.end(), {L(tau(k), true), L(nu(k))});
      for (std::size_t k = 1; k < j; ++k) printed.letters.insert(printed.letters.end(), {L(tau(k), true), L(nu(k))});
      CHECK(omega[j - 1] == printed);
    }
  }
}

TEST_CASE("odd-m permutation pair yields a rotation of the alternating word") {
  auto [t3, n3] = corollary_permutations(3);
  CHECK(t3.images() == std::vector<std::size_t>{1, 3, 2});
  CHECK(n3.images() == std::vector<std::size_t>{2, 1, 3});
  auto [t5, n5] = corollary_permutations(5);
  CHECK(t5.images() == std::vector<std::size_t>{1, 3, 5, 2, 4});
  CHECK(n5.images() == std::vector<std::size_t>{2, 4, 1, 3, 5});
  for (std::size_t m : {3u, 5u, 7u}) {
    auto words = construction_words(ConstructionKind::Corollary315Perms, m);
    REQUIRE(words.size() == m);
    auto b = construction_words(ConstructionKind::OmegaOdd, m)[0];
    bool found = false;
    for (std::size_t k = 0; k < b.size(); ++k) found = found || rotate_word(words[0], k) == b;
    CHECK(found);
  }
  CHECK_THROWS_AS(corollary_permutations(4), InvalidArgument);
}

TEST_CASE("cyclic Sigma factors follow the printed weight order") {
  // Sigma_i = Psi_i^(a1) o Psi_{i+1}^(a2) o ... o Psi_m^(a_{m-i+1}) o Psi_1^(a_{m-i+2}) o ... o Psi_{i-1}^(a_m)
  for (std::size_t m : {2u, 3u, 5u}) {
    for (std::size_t i = 1; i <= m; ++i) {
      auto idx = cyclic_sigma_indices(m, i);
      CHECK(idx[0] == i);
      CHECK(idx[m - i] == m);  // weight a_{m-i+1}
      if (i > 1) {
        CHECK(idx[m - i + 1] == 1);  // weight a_{m-i+2}
        CHECK(idx[m - 1] == i - 1);  // weight a_m
      }
    }
  }
}

TEST_CASE("build_construction examples") {
  auto a = NonNegMatrix::from_rows({{4, 1}, {9, 0}});
  auto b = NonNegMatrix::from_rows({{1, 4}, {1, 2}});
  std::vector<OperatorSet> two{single(a, "Psi1"), single(b, "Psi2")};
  std::vector<double> half{0.5, 0.5};
  auto sig = build_construction(ConstructionKind::CyclicSigma, two, half);
  REQUIRE(sig.size() == 2);
  CHECK(sig[0].mats()[0] == NonNegMatrix::from_rows({{2, 2}, {3, 0}}));
  CHECK(sig[1].mats()[0] == sig[0].mats()[0]);
  std::vector<double> none;
  CHECK_THROWS_AS(build_construction(ConstructionKind::CyclicSigma, two, none), InvalidArgument);

  std::vector<OperatorSet> t3(3, single(T0));
  auto omega = build_construction(ConstructionKind::OmegaOdd, t3, none);
  REQUIRE(omega.size() == 3);
  for (const auto& o : omega) {
    REQUIRE(o.size() == 1);
    CHECK(o.mats()[0] == NonNegMatrix::from_rows({{0, 0}, {0, 8}}));
  }

  std::vector<OperatorSet> t4(4, single(T0));
  auto sigma = build_construction(ConstructionKind::SigmaEven, t4, none, Permutation::identity(4));
  REQUIRE(sigma.size() == 4);
  CHECK(sigma[0].mats()[0] == NonNegMatrix::ones(2));
  CHECK(sigma[1].mats()[0] == NonNegMatrix::ones(2));
  for (std::size_t j = 0; j < 2; ++j) {
    auto adj = adjoint_set(sigma[j]).deduplicated();
    CHECK(std::equal(adj.mats().begin(), adj.mats().end(), sigma[2 + j].mats().begin(), sigma[2 + j].mats().end()));
  }

  CHECK(build_construction(ConstructionKind::ThetaHalf, t4, none).size() == 2);
  CHECK(build_construction(ConstructionKind::OmegaEven, t4, none).size() == 4);
  CHECK(build_construction(ConstructionKind::OmegaTauNu, t4, none).size() == 4);
  CHECK(build_construction(ConstructionKind::PhiCyclic, t4, none).size() == 4);
  CHECK(build_construction(ConstructionKind::Corollary315Perms, t3, none).size() == 3);
}

TEST_CASE("sigma_even adjoint pairing holds exactly on random sets") {
  std::mt19937_64 rng(17);
  for (std::size_t m : {2u, 4u}) {
    std::vector<OperatorSet> sets;
    for (std::size_t i = 0; i < m; ++i) sets.push_back(OperatorSet("P", {random_matrix(rng, 3), random_matrix(rng, 3)}));
    const Permutation tau = random_perm(rng, m);
    auto sigma = build_construction(ConstructionKind::SigmaEven, sets, {}, tau);
    for (std::size_t j = 0; j < m / 2; ++j) {
      auto adj = adjoint_set(sigma[j]).deduplicated();
      CHECK(std::equal(adj.mats().begin(), adj.mats().end(), sigma[m / 2 + j].mats().begin(),
                       sigma[m / 2 + j].mats().end()));
    }
  }
}
