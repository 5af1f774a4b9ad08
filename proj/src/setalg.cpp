#include "hjsr/setalg.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace hjsr {

namespace {

void sort_unique(std::vector<NonNegMatrix>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void require_same_dim(const OperatorSet& a, const OperatorSet& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(op) + ": sets '" + a.name() + "' and '" + b.name() +
                            "' have different dimensions");
  }
}

void check_cap(std::size_t n, std::size_t max_members, const char* op) {
  if (n > max_members) {
    throw BudgetExceeded(std::string(op) + ": result would exceed " + std::to_string(max_members) + " members");
  }
}

}  // namespace

OperatorSet::OperatorSet(std::string name, std::vector<NonNegMatrix> mats)
    : name_(std::move(name)), mats_(std::move(mats)) {
  if (mats_.empty()) throw InvalidArgument("OperatorSet '" + name_ + "': must have at least one member");
  for (const auto& m : mats_) {
    if (m.dim() != mats_.front().dim()) {
      throw DimensionMismatch("OperatorSet '" + name_ + "': members have different dimensions");
    }
  }
}

OperatorSet OperatorSet::deduplicated() const {
  std::vector<NonNegMatrix> v = mats_;
  sort_unique(v);
  return OperatorSet(name_, std::move(v));
}

OperatorSet OperatorSet::renamed(std::string name) const { return OperatorSet(std::move(name), mats_); }

OperatorSet set_product(const OperatorSet& phi, const OperatorSet& psi, std::size_t max_members) {
  require_same_dim(phi, psi, "set_product");
  // Raw pairs may exceed the cap before dedup; bound the work at a few times the cap.
  check_cap(phi.size() * psi.size(), 8 * max_members, "set_product");
  std::vector<NonNegMatrix> out;
  out.reserve(phi.size() * psi.size());
  for (const auto& a : phi.mats())
    for (const auto& b : psi.mats()) out.push_back(mat_product(a, b));
  sort_unique(out);
  check_cap(out.size(), max_members, "set_product");
  return OperatorSet(phi.name() + psi.name(), std::move(out));
}

OperatorSet set_power(const OperatorSet& psi, std::size_t m, std::size_t max_members) {
  if (m == 0) throw InvalidArgument("set_power: exponent must be >= 1");
  OperatorSet base = psi.deduplicated();
  OperatorSet acc = base;
  for (std::size_t k = 1; k < m; ++k) acc = set_product(acc, base, max_members);
  return acc.renamed("(" + psi.name() + ")^" + std::to_string(m));
}

OperatorSet adjoint_set(const OperatorSet& psi) {
  std::vector<NonNegMatrix> out;
  out.reserve(psi.size());
  for (const auto& a : psi.mats()) out.push_back(a.transpose());
  return OperatorSet(psi.name() + "*", std::move(out));
}

OperatorSet set_hadamard_mean(std::span<const OperatorSet> sets, std::span<const double> alphas,
                              std::size_t max_members) {
  if (sets.empty()) throw InvalidArgument("set_hadamard_mean: no factors");
  if (sets.size() != alphas.size()) {
    throw InvalidArgument("set_hadamard_mean: " + std::to_string(sets.size()) + " sets but " +
                          std::to_string(alphas.size()) + " weights");
  }
  for (double w : alphas) {
    if (!(w > 0.0)) throw InvalidArgument("set_hadamard_mean: weights must be > 0");
  }
  std::vector<OperatorSet> uniq;
  std::size_t total = 1;
  for (const auto& s : sets) {
    require_same_dim(sets[0], s, "set_hadamard_mean");
    uniq.push_back(s.deduplicated());
    total *= uniq.back().size();
    check_cap(total, 8 * max_members, "set_hadamard_mean");
  }

  std::vector<NonNegMatrix> out;
  out.reserve(total);
  std::vector<std::size_t> choice(uniq.size(), 0);
  std::vector<NonNegMatrix> factors;
  factors.reserve(uniq.size());
  for (;;) {
    factors.clear();
    for (std::size_t j = 0; j < uniq.size(); ++j) factors.push_back(uniq[j].mats()[choice[j]]);
    out.push_back(weighted_hadamard_mean(factors, alphas));
    std::size_t j = 0;
    while (j < choice.size() && ++choice[j] == uniq[j].size()) choice[j++] = 0;
    if (j == choice.size()) break;
  }
  sort_unique(out);
  check_cap(out.size(), max_members, "set_hadamard_mean");

  std::string name = "H(";
  for (std::size_t j = 0; j < sets.size(); ++j) name += (j ? "," : "") + sets[j].name();
  return OperatorSet(name + ")", std::move(out));
}

// ---------------------------------------------------------------------------

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  if (images_.empty()) throw InvalidArgument("Permutation: must have at least one element");
  std::vector<bool> seen(images_.size() + 1, false);
  for (std::size_t v : images_) {
    if (v < 1 || v > images_.size() || seen[v]) {
      throw InvalidArgument("Permutation: images must be a bijection of 1.." + std::to_string(images_.size()));
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t m) {
  std::vector<std::size_t> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = i + 1;
  return Permutation(std::move(v));
}

std::string Word::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < letters.size(); ++k) {
    if (k) s += ' ';
    s += std::to_string(letters[k].set);
    if (letters[k].adjoint) s += '*';
  }
  return s;
}

Word rotate_word(const Word& w, std::size_t offset) {
  if (w.letters.empty()) return w;
  if (offset >= w.size()) throw InvalidArgument("rotate_word: offset out of range");
  Word r = w;
  std::rotate(r.letters.begin(), r.letters.begin() + static_cast<std::ptrdiff_t>(offset), r.letters.end());
  return r;
}

Word adjoint_word(const Word& w) {
  Word r;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back({it->set, !it->adjoint});
  return r;
}

Word alternating_word(std::span<const std::size_t> indices, bool first_adjoint) {
  Word w;
  bool adj = first_adjoint;
  for (std::size_t i : indices) {
    w.letters.push_back({i, adj});
    adj = !adj;
  }
  return w;
}

Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.letters.insert(r.letters.end(), b.letters.begin(), b.letters.end());
  return r;
}

OperatorSet evaluate_word(const Word& w, std::span<const OperatorSet> sets, std::size_t max_members) {
  if (w.letters.empty()) throw InvalidArgument("evaluate_word: empty word");
  auto letter_set = [&](const Letter& l) {
    if (l.set < 1 || l.set > sets.size()) {
      throw InvalidArgument("evaluate_word: set index " + std::to_string(l.set) + " out of range 1.." +
                            std::to_string(sets.size()));
    }
    const OperatorSet& s = sets[l.set - 1];
    return l.adjoint ? adjoint_set(s) : s.deduplicated();
  };
  OperatorSet acc = letter_set(w.letters.front()).deduplicated();
  for (std::size_t k = 1; k < w.letters.size(); ++k) acc = set_product(acc, letter_set(w.letters[k]), max_members);
  return acc.renamed("[" + w.to_string() + "]");
}

// ---------------------------------------------------------------------------
// Constructions

namespace {

constexpr std::array<std::pair<ConstructionKind, std::string_view>, 8> kKindNames{{
    {ConstructionKind::CyclicSigma, "cyclic_sigma"},
    {ConstructionKind::PhiCyclic, "phi_cyclic"},
    {ConstructionKind::OmegaOdd, "omega_odd"},
    {ConstructionKind::SigmaEven, "sigma_even"},
    {ConstructionKind::OmegaEven, "omega_even"},
    {ConstructionKind::ThetaHalf, "theta_half"},
    {ConstructionKind::OmegaTauNu, "omega_tau_nu"},
    {ConstructionKind::Corollary315Perms, "corollary_315_perms"},
}};

Permutation resolve(const std::optional<Permutation>& p, std::size_t m, const char* what) {
  if (!p) return Permutation::identity(m);
  if (p->size() != m) {
    throw InvalidArgument(std::string(what) + " has " + std::to_string(p->size()) + " elements, expected " +
                          std::to_string(m));
  }
  return *p;
}

void require_even(ConstructionKind kind, std::size_t m) {
  if (m == 0 || m % 2 != 0) throw InvalidArgument(std::string(to_string(kind)) + ": m must be even");
}

void require_odd(ConstructionKind kind, std::size_t m) {
  if (m % 2 != 1) throw InvalidArgument(std::string(to_string(kind)) + ": m must be odd");
}

// Sigma_j = tau(2j-1)* tau(2j) and Sigma_{m/2+j} = tau(2j)* tau(2j-1), j = 1..m/2.
std::vector<Word> sigma_even_words(std::size_t m, const Permutation& tau) {
  std::vector<Word> out(m);
  for (std::size_t j = 1; j <= m / 2; ++j) {
    out[j - 1].letters = {{tau(2 * j - 1), true}, {tau(2 * j), false}};
    out[m / 2 + j - 1].letters = {{tau(2 * j), true}, {tau(2 * j - 1), false}};
  }
  return out;
}

// Concatenations Z_{o(1)} ... Z_{o(k)} rotated by whole blocks.
std::vector<Word> block_rotations(const std::vector<Word>& blocks, std::size_t count) {
  std::vector<Word> out;
  const std::size_t k = blocks.size();
  for (std::size_t i = 0; i < count; ++i) {
    Word w;
    for (std::size_t b = 0; b < k; ++b) w = concat(w, blocks[(i + b) % k]);
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

std::string_view to_string(ConstructionKind kind) noexcept {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<ConstructionKind> parse_construction(std::string_view id) noexcept {
  for (const auto& [k, name] : kKindNames)
    if (name == id) return k;
  return std::nullopt;
}

std::vector<std::size_t> cyclic_sigma_indices(std::size_t m, std::size_t i) {
  if (i < 1 || i > m) throw InvalidArgument("cyclic_sigma_indices: i out of range");
  std::vector<std::size_t> v(m);
  for (std::size_t p = 0; p < m; ++p) v[p] = (i - 1 + p) % m + 1;
  return v;
}

std::pair<Permutation, Permutation> corollary_permutations(std::size_t m) {
  require_odd(ConstructionKind::Corollary315Perms, m);
  std::vector<std::size_t> tau(m), nu(m);
  for (std::size_t j = 1; j <= m; ++j) {
    tau[j - 1] = j <= (m + 1) / 2 ? 2 * j - 1 : 2 * (j - (m + 1) / 2);
    nu[j - 1] = j <= (m - 1) / 2 ? 2 * j : 2 * (j - (m - 1) / 2) - 1;
  }
  return {Permutation(std::move(tau)), Permutation(std::move(nu))};
}

std::vector<Word> construction_words(ConstructionKind kind, std::size_t m, const std::optional<Permutation>& tau_in,
                                     const std::optional<Permutation>& nu_in) {
  if (m == 0) throw InvalidArgument("construction_words: m must be >= 1");
  std::vector<Word> out;
  switch (kind) {
    case ConstructionKind::CyclicSigma:
      throw InvalidArgument("cyclic_sigma is a Hadamard mean, not a product word");

    case ConstructionKind::PhiCyclic: {
      Word base;
      for (std::size_t i = 1; i <= m; ++i) base.letters.push_back({i, false});
      for (std::size_t j = 0; j < m; ++j) out.push_back(rotate_word(base, j));
      return out;
    }

    case ConstructionKind::OmegaOdd: {
      // 1 2* 3 ... m 1* 2 ... m*, rotated by two letters per step.
      require_odd(kind, m);
      Word base;
      for (std::size_t k = 0; k < 2 * m; ++k) base.letters.push_back({k % m + 1, k % 2 == 1});
      for (std::size_t j = 0; j < m; ++j) out.push_back(rotate_word(base, 2 * j));
      return out;
    }

    case ConstructionKind::SigmaEven:
      require_even(kind, m);
      return sigma_even_words(m, resolve(tau_in, m, "tau"));

    case ConstructionKind::OmegaEven: {
      require_even(kind, m);
      const auto sigma = sigma_even_words(m, resolve(tau_in, m, "tau"));
      const Permutation nu = resolve(nu_in, m, "nu");
      std::vector<Word> ordered;
      for (std::size_t i = 1; i <= m; ++i) ordered.push_back(sigma[nu(i) - 1]);
      return block_rotations(ordered, m);
    }

    case ConstructionKind::ThetaHalf: {
      require_even(kind, m);
      auto sigma = sigma_even_words(m, resolve(tau_in, m, "tau"));
      sigma.resize(m / 2);
      return block_rotations(sigma, m / 2);
    }

    case ConstructionKind::OmegaTauNu:
    case ConstructionKind::Corollary315Perms: {
      Permutation tau = Permutation::identity(m), nu = Permutation::identity(m);
      if (kind == ConstructionKind::Corollary315Perms) {
        std::tie(tau, nu) = corollary_permutations(m);
      } else {
        tau = resolve(tau_in, m, "tau");
        nu = resolve(nu_in, m, "nu");
      }
      Word base;
      for (std::size_t j = 1; j <= m; ++j) {
        base.letters.push_back({tau(j), true});
        base.letters.push_back({nu(j), false});
      }
      for (std::size_t j = 0; j < m; ++j) out.push_back(rotate_word(base, 2 * j));
      return out;
    }
  }
  throw InvalidArgument("construction_words: unknown kind");
}

std::vector<OperatorSet> build_construction(ConstructionKind kind, std::span<const OperatorSet> sets,
                                            std::span<const double> weights, const std::optional<Permutation>& tau,
                                            const std::optional<Permutation>& nu, std::size_t max_members) {
  const std::size_t m = sets.size();
  if (m == 0) throw InvalidArgument("build_construction: no sets");
  std::vector<OperatorSet> out;
  if (kind == ConstructionKind::CyclicSigma) {
    if (weights.size() != m) {
      throw InvalidArgument("cyclic_sigma: expected " + std::to_string(m) + " weights, got " +
                            std::to_string(weights.size()));
    }
    for (std::size_t i = 1; i <= m; ++i) {
      std::vector<OperatorSet> factors;
      for (std::size_t idx : cyclic_sigma_indices(m, i)) factors.push_back(sets[idx - 1]);
      out.push_back(set_hadamard_mean(factors, weights, max_members).renamed("Sigma" + std::to_string(i)));
    }
    return out;
  }
  for (const Word& w : construction_words(kind, m, tau, nu)) out.push_back(evaluate_word(w, sets, max_members));
  return out;
}

}  // namespace hjsr
