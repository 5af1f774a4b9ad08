#pragma once

#include "hjsr/verify.hpp"

#include <string_view>
#include <vector>

namespace hjsr {

enum class KernelKind { ExpAbs, Gauss, Poly, Const };

std::string_view to_string(KernelKind k) noexcept;
/// Accepts "exp_abs", "gauss", "poly", "const"; throws InvalidArgument otherwise.
KernelKind parse_kernel_kind(std::string_view s);

struct KernelSpec {
  KernelKind kind = KernelKind::Const;
  double c = 1.0;
  std::size_t grid_n = 1;
};

void validate(const KernelSpec& spec);

/// a(x, y) for the kernel of `spec`: exp(-c|x-y|), exp(-c(x-y)^2), (1+xy)^c or 1.
double kernel_value(const KernelSpec& spec, double x, double y);

/// Midpoint rule on [0,1]: M[i,j] = a(x_i, x_j) / n with x_i = (i + 1/2) / n.
NonNegMatrix nystrom_matrix(const KernelSpec& spec);

/// One singleton set per spec, named Psi1, Psi2, ...; throws InvalidArgument on
/// mixed grids, an unknown entry or an arity mismatch.
InstanceSpec kernel_instance(const std::vector<KernelSpec>& specs, std::string_view entry_id,
                             const ChainParams& params);

}  // namespace hjsr
