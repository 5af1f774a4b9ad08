#pragma once

#include "hjsr/numat.hpp"
#include "hjsr/radius.hpp"
#include "hjsr/setalg.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hjsr {

enum class ExprKind { SetRef, Adjoint, Product, HadamardMean, PowerN, RValue, ScalarPow, ScalarMul };
enum class RKind { GsrJsr, Norm };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Set-valued kinds: SetRef, Adjoint, Product,
/// HadamardMean, PowerN. Scalar-valued kinds: RValue, ScalarPow, ScalarMul.
struct Expr {
  ExprKind kind = ExprKind::SetRef;
  std::size_t index = 0;  ///< SetRef: 0-based position in the instance family
  std::vector<ExprPtr> children;
  std::vector<double> weights;  ///< HadamardMean, one per child
  std::size_t power = 1;        ///< PowerN
  RKind rkind = RKind::GsrJsr;  ///< RValue
  double exponent = 1.0;        ///< ScalarPow

  bool is_scalar() const noexcept;
  /// Readable rendering; sets are named Psi1, Psi2, ... unless `names` is given.
  std::string to_string(std::span<const std::string> names = {}) const;
};

namespace ex {
ExprPtr set(std::size_t index);
ExprPtr adjoint(ExprPtr e);
ExprPtr product(std::vector<ExprPtr> factors);
ExprPtr hmean(std::vector<ExprPtr> children, std::vector<double> weights);
/// Hadamard power: a one-child mean.
ExprPtr hpow(ExprPtr e, double t);
ExprPtr power(ExprPtr e, std::size_t n);
ExprPtr r(ExprPtr e);
ExprPtr norm(ExprPtr e);
ExprPtr pow(ExprPtr e, double p);
ExprPtr mul(std::vector<ExprPtr> factors);
/// Product of the (1-based) letters of a word.
ExprPtr word(const Word& w);
}  // namespace ex

/// Canonical form: adjoints pushed to the leaves, products flattened, powers
/// expanded, mean children sorted. For r-values the argument is further
/// reduced over cyclic rotations and adjoints, for norms over adjoints, so
/// equal keys mean equal values.
ExprPtr canonical(const ExprPtr& e);
std::string canonical_key(const ExprPtr& e);

/// Upper estimate of the member count of a set-valued expression, given the
/// member counts of the instance sets (before deduplication; saturates).
double estimated_cardinality(const ExprPtr& e, std::span<const std::size_t> set_sizes);

/// Parameters of one instantiation of a catalog entry.
struct ChainParams {
  std::size_t m = 0;  ///< number of Hadamard factors (0: inferred from the family)
  std::size_t k = 0;  ///< product length in the two-index families (0: inferred)
  std::vector<double> weights;
  double alpha = 0.0;
  double t = 1.0;
  std::size_t n = 2;  ///< power refinement
  std::optional<Permutation> tau;
  std::optional<Permutation> nu;
};

struct Chain {
  std::string label;
  /// Scalar expressions asserted e_0 <= e_1 <= ...
  std::vector<ExprPtr> terms;
};

/// Set-valued pair asserted entrywise lhs <= rhs (singleton families only).
struct ElementwiseClaim {
  std::string label;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Built {
  std::vector<Chain> chains;
  std::vector<ElementwiseClaim> elementwise;
};

enum class Parity { Any, Even, Odd };
enum class WeightRegime { None, SumOne, SumAtLeastOne };

/// Hypotheses of an entry, also used by the fuzzer to draw in-regime parameters.
struct Signature {
  Parity parity = Parity::Any;
  std::size_t min_m = 1;
  /// Number of sets when it does not depend on m (0 otherwise).
  std::size_t fixed_arity = 0;
  bool two_index = false;  ///< family indexed by (i, j), arity k*m
  WeightRegime weights = WeightRegime::None;
  /// Common exponent: fixed at 1/m, or bounded below by alpha_min_m/m and alpha_min.
  bool alpha_fixed = false;
  bool uses_alpha = false;
  double alpha_min_m = 0.0;
  double alpha_min = 0.0;
  bool uses_t = false;
  bool uses_tau = false;
  bool uses_nu = false;
  bool singletons = false;
};

struct CatalogEntry {
  std::string id;
  std::string anchor;
  std::string regime;
  Signature sig;
  /// Fills m and k from the family size; throws InvalidArgument if impossible.
  ChainParams resolve(const ChainParams& p, std::size_t family_size) const;
  std::size_t arity(const ChainParams& resolved) const;
  std::function<Built(const ChainParams&)> build;
};

const std::vector<CatalogEntry>& list_entries();
/// nullptr for an unknown id.
const CatalogEntry* find_entry(std::string_view id);

struct Applicability {
  bool ok = true;
  std::string reason;
  /// The violated hypothesis is about shape (parity, arity, counts), so the
  /// chain cannot even be formed; otherwise it is a regime bound on a number.
  bool structural = false;
};

/// Checks the hypotheses of `entry` on resolved parameters; the reason names
/// the first one violated. `family` (optional) enables the singleton check.
Applicability applicability_check(const CatalogEntry& entry, const ChainParams& resolved,
                                  std::span<const OperatorSet> family = {});

struct EvalOptions {
  JsrConfig jsr;
  std::size_t max_members = kDefaultMaxMembers;
  /// Replace the engine by the exhaustive enumeration at `oracle_depth`.
  bool use_oracle = false;
  std::size_t oracle_depth = 6;
};

/// Evaluates expressions over one family, caching every set and r-value by
/// canonical key.
class Evaluator {
 public:
  Evaluator(std::vector<OperatorSet> family, EvalOptions opts);

  Bracket scalar(const ExprPtr& e);
  OperatorSet set(const ExprPtr& e);
  const EvalOptions& options() const noexcept { return opts_; }

 private:
  Bracket scalar_canonical(const ExprPtr& c);
  OperatorSet set_canonical(const ExprPtr& c);

  std::vector<OperatorSet> family_;
  EvalOptions opts_;
  std::map<std::string, OperatorSet> sets_;
  std::map<std::string, Bracket> values_;
};

/// Free-standing form of Evaluator::scalar.
Bracket evaluate_expression(const ExprPtr& e, std::span<const OperatorSet> env, const EvalOptions& opts);

/// Interval product with outward rounding.
Bracket bracket_mul(const Bracket& a, const Bracket& b) noexcept;

}  // namespace hjsr
