#pragma once

#include "hjsr/numat.hpp"
#include "hjsr/setalg.hpp"

#include <cstddef>
#include <string_view>

namespace hjsr {

enum class NormKind { L2, L1, Linf };

std::string_view to_string(NormKind kind) noexcept;

struct JsrConfig {
  std::size_t max_depth = 10;
  /// Relative: the engine stops once hi <= lo * (1 + target_width).
  double target_width = 1e-3;
  /// Norm of the unbalanced upper-bound search.
  NormKind norm = NormKind::L2;
  /// Cap on matrix products formed, over all phases of one call.
  std::size_t budget_products = 2'000'000;
  /// Branch and bound over product prefixes; false gives the plain
  /// min over m <= max_depth of (max over length-m products of the norm)^(1/m).
  bool refine = true;
  /// Additionally search in norms balanced by a diagonal similarity built from
  /// Perron vectors of the best product found so far.
  bool balance = true;
};

/// Throws InvalidArgument on max_depth == 0, target_width <= 0 or budget == 0.
void validate(const JsrConfig& cfg);

struct BoundResult {
  double value = 0.0;
  bool partial = false;
  std::size_t depth_used = 0;
};

/// max over m <= depth of max over the (deduplicated) length-m products of
/// lo(rho(A))^(1/m). Always a valid lower bound for the joint spectral radius.
BoundResult gsr_lower(const OperatorSet& sigma, std::size_t depth,
                      std::size_t budget_products = JsrConfig{}.budget_products);

/// Upper bound for the joint spectral radius; see JsrConfig.
BoundResult jsr_upper(const OperatorSet& sigma, const JsrConfig& cfg);

/// Enclosure of the joint (= generalized) spectral radius.
Bracket jsr_bracket(const OperatorSet& sigma, const JsrConfig& cfg);

/// max over members of the l2-induced norm.
Bracket set_norm(const OperatorSet& psi);

/// Exhaustive reference enclosure: every product of length <= depth, no
/// deduplication, no pruning. Throws BudgetExceeded past 10^7 products.
Bracket brute_force_oracle(const OperatorSet& sigma, std::size_t depth);

}  // namespace hjsr
