#pragma once

#include "hjsr/catalog.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hjsr {

enum class Status { Confirmed, ViolationCertified, Inconclusive };

std::string_view to_string(Status s) noexcept;

/// One theorem instance: the operator family plus the parameters of the chain.
struct InstanceSpec {
  std::size_t dimension = 0;
  std::vector<OperatorSet> sets;
  ChainParams params;
  /// Overrides the search depth of the JSR engine for this instance.
  std::optional<std::size_t> depth;
};

struct CheckOptions {
  JsrConfig jsr;
  /// Absolute slack on bracket comparisons.
  double tol = 1e-9;
  bool allow_out_of_regime = false;
  std::size_t max_members = kDefaultMaxMembers;
  /// Run a first pass at half depth and retry at full depth if inconclusive.
  bool retry = true;
  bool use_oracle = false;
  std::size_t oracle_depth = 6;
};

struct TermResult {
  std::string expr;
  Bracket value;
};

struct ChainResult {
  std::string label;
  std::vector<TermResult> terms;
};

/// Comparison of terms `position` and `position + 1` of chain `chain`.
struct PairMargin {
  std::size_t chain = 0;
  std::size_t position = 0;
  /// lo(next) - hi(this): nonnegative once the pair is settled.
  double gap = 0.0;
  /// lo(this) - hi(next): positive when the pair is violated.
  double excess = 0.0;
  /// Both terms have the same canonical form, so they are equal by construction.
  bool identical = false;
  Status status = Status::Inconclusive;
};

struct ElementwiseResult {
  std::string label;
  /// max over entries of lhs - rhs.
  double max_excess = 0.0;
  double slack = 0.0;
  bool holds = true;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::string entry;
  bool in_regime = true;
  /// First violated hypothesis when out of regime.
  std::string regime_note;
  std::vector<ChainResult> chains;
  std::vector<PairMargin> margins;
  std::vector<ElementwiseResult> elementwise;
  std::size_t depth_used = 0;
  bool retried = false;
  /// Some engine ran out of budget; affected brackets are wider but valid.
  bool partial = false;
  /// Set when a set construction exceeded max_members.
  std::string note;
  /// FNV-1a digest of the instance, for reproducers.
  std::string digest;
};

/// Throws InvalidArgument for an unknown entry, an arity mismatch, a structural
/// hypothesis failure, or a regime failure unless allow_out_of_regime is set.
Verdict check_instance(std::string_view entry_id, const InstanceSpec& inst, const CheckOptions& opts = {});

std::string instance_digest(const InstanceSpec& inst);

// ---------------------------------------------------------------------------
// Published examples

struct Expectation {
  /// "lhs" (first chain term) or "rhs_base" (the r-value raised in the last term).
  std::string quantity;
  std::string name;
  double value = 0.0;
  /// "printed" for values stated with the example, "oracle" for values
  /// recomputed from the printed matrices by an independent route (direct
  /// multiplication, closed-form eigenvalues).
  std::string provenance;
  /// False for values recorded but not required to match (printed value that
  /// disagrees with the printed matrices).
  bool asserted = true;
};

struct PaperExample {
  std::string id;
  std::string entry;
  std::string description;
  InstanceSpec base;
  /// The swept parameter is t (all weights equal t) instead of alpha.
  bool sweeps_t = false;
  double threshold = 0.0;
  std::string threshold_text;
  double value_in = 0.0;   ///< in-regime demonstration value
  double value_out = 0.0;  ///< out-of-regime demonstration value
  ExprPtr rhs_base;        ///< r-value whose power is the last chain term
  std::vector<Expectation> expectations;

  InstanceSpec at(double value) const;
};

const std::vector<std::string>& paper_example_ids();
/// Throws InvalidArgument for an unknown id.
PaperExample paper_example(std::string_view id);

struct ExpectationCheck {
  Expectation expected;
  Bracket computed;
  bool met = false;
};

struct ExampleOutcome {
  std::string id;
  Bracket lhs;
  Bracket rhs_base;
  Verdict in_regime;
  Verdict out_of_regime;
  std::vector<ExpectationCheck> checks;
  bool ok = false;
};

/// Value expectations are met when |computed - expected| <= 1e-9 (the
/// computed bracket is at most 1e-9 wide on these instances).
ExampleOutcome run_example(const PaperExample& ex, const CheckOptions& opts = {});

// ---------------------------------------------------------------------------
// Fuzzing

struct GenParams {
  std::size_t dim_min = 2, dim_max = 4;
  std::size_t size_min = 1, size_max = 3;
  double sparsity = 0.3;
  /// Set sizes are reduced until no subexpression of the chain is estimated to
  /// have more members than this.
  double max_cardinality = 256;
};

/// Throws InvalidArgument when the ranges are outside dim [1,5], size [1,4],
/// sparsity [0,1).
void validate(const GenParams& gen);

/// Deterministic in-regime instance number `index` for `entry`.
InstanceSpec generate_instance(const CatalogEntry& entry, std::uint64_t seed, std::size_t index,
                               const GenParams& gen);

struct CaseRecord {
  std::size_t index = 0;
  std::string digest;
  ChainParams params;
  std::vector<std::size_t> set_sizes;
  std::size_t dimension = 0;
  std::vector<PairMargin> margins;
  std::vector<ElementwiseResult> elementwise;
};

struct EntryReport {
  std::string entry;
  std::size_t count = 0;
  std::size_t confirmed = 0;
  std::size_t inconclusive = 0;
  std::vector<CaseRecord> violations;
  std::vector<CaseRecord> inconclusive_cases;
  double runtime_ms = 0.0;
};

struct FuzzReport {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  GenParams gen;
  CheckOptions opts;
  std::vector<EntryReport> entries;

  std::size_t total_violations() const;
  std::size_t total_inconclusive() const;
};

/// `threads` = 0 uses the hardware concurrency; results do not depend on it.
FuzzReport fuzz_campaign(const std::vector<std::string>& entry_ids, std::size_t count, std::uint64_t seed,
                         const GenParams& gen, const CheckOptions& opts = {}, unsigned threads = 0);

}  // namespace hjsr
