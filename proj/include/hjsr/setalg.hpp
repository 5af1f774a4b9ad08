#pragma once

#include "hjsr/numat.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hjsr {

/// Cap on the number of distinct members any intermediate set may hold.
inline constexpr std::size_t kDefaultMaxMembers = 20000;

/// Finite nonempty family of equally sized nonnegative matrices.
class OperatorSet {
 public:
  OperatorSet(std::string name, std::vector<NonNegMatrix> mats);

  const std::string& name() const noexcept { return name_; }
  std::span<const NonNegMatrix> mats() const noexcept { return mats_; }
  std::size_t size() const noexcept { return mats_.size(); }
  std::size_t dim() const noexcept { return mats_.front().dim(); }

  /// Members sorted by the canonical bit-pattern order, exact duplicates removed.
  OperatorSet deduplicated() const;
  OperatorSet renamed(std::string name) const;

 private:
  std::string name_;
  std::vector<NonNegMatrix> mats_;
};

/// {AB : A in phi, B in psi}, deduplicated.
OperatorSet set_product(const OperatorSet& phi, const OperatorSet& psi,
                        std::size_t max_members = kDefaultMaxMembers);
/// All products of length m, deduplicated.
OperatorSet set_power(const OperatorSet& psi, std::size_t m, std::size_t max_members = kDefaultMaxMembers);
OperatorSet adjoint_set(const OperatorSet& psi);
/// One member per choice (A_1 in sets[0], ..., A_k in sets[k-1]), deduplicated.
OperatorSet set_hadamard_mean(std::span<const OperatorSet> sets, std::span<const double> alphas,
                              std::size_t max_members = kDefaultMaxMembers);

/// Bijection of {1..m}, stored as its list of images.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> images);
  static Permutation identity(std::size_t m);

  std::size_t size() const noexcept { return images_.size(); }
  /// Image of j, both 1-based.
  std::size_t operator()(std::size_t j) const { return images_.at(j - 1); }
  const std::vector<std::size_t>& images() const noexcept { return images_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> images_;
};

struct Letter {
  std::size_t set = 1;  ///< 1-based index into the set family
  bool adjoint = false;
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Symbolic product of (possibly adjoint) sets, evaluated left to right.
struct Word {
  std::vector<Letter> letters;

  std::size_t size() const noexcept { return letters.size(); }
  /// "1 2* 3" style rendering, 1-based.
  std::string to_string() const;
  friend bool operator==(const Word&, const Word&) = default;
};

/// Cyclic left rotation by `offset` letters; 0 <= offset < size.
Word rotate_word(const Word& w, std::size_t offset);
/// Word of the adjoint product: reversed, adjoint flags flipped.
Word adjoint_word(const Word& w);
/// indices[0] indices[1]* indices[2] ... (or starting with an adjoint).
Word alternating_word(std::span<const std::size_t> indices, bool first_adjoint);
Word concat(const Word& a, const Word& b);

OperatorSet evaluate_word(const Word& w, std::span<const OperatorSet> sets,
                          std::size_t max_members = kDefaultMaxMembers);

enum class ConstructionKind {
  CyclicSigma,
  PhiCyclic,
  OmegaOdd,
  SigmaEven,
  OmegaEven,
  ThetaHalf,
  OmegaTauNu,
  Corollary315Perms,
};

std::string_view to_string(ConstructionKind kind) noexcept;
std::optional<ConstructionKind> parse_construction(std::string_view id) noexcept;

/// Set indices (1-based) of the factors of the i-th cyclic Hadamard mean, in
/// weight order: i, i+1, ..., m, 1, ..., i-1.
std::vector<std::size_t> cyclic_sigma_indices(std::size_t m, std::size_t i);

/// The odd-m permutation pair (tau, nu) for which the tau/nu product word is a
/// rotation of the alternating word 1 2* 3 ... m 1* 2 ... m*.
std::pair<Permutation, Permutation> corollary_permutations(std::size_t m);

/// Symbolic words for every product-type construction (all kinds but CyclicSigma).
/// Missing permutations default to the identity.
std::vector<Word> construction_words(ConstructionKind kind, std::size_t m,
                                     const std::optional<Permutation>& tau = std::nullopt,
                                     const std::optional<Permutation>& nu = std::nullopt);

/// Evaluates a construction on the family `sets` (m = sets.size()).
std::vector<OperatorSet> build_construction(ConstructionKind kind, std::span<const OperatorSet> sets,
                                            std::span<const double> weights,
                                            const std::optional<Permutation>& tau = std::nullopt,
                                            const std::optional<Permutation>& nu = std::nullopt,
                                            std::size_t max_members = kDefaultMaxMembers);

}  // namespace hjsr
