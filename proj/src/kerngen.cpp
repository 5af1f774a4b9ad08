#include "hjsr/kerngen.hpp"

#include <cmath>
#include <string>

namespace hjsr {

std::string_view to_string(KernelKind k) noexcept {
  switch (k) {
    case KernelKind::ExpAbs: return "exp_abs";
    case KernelKind::Gauss: return "gauss";
    case KernelKind::Poly: return "poly";
    case KernelKind::Const: return "const";
  }
  return "?";
}

KernelKind parse_kernel_kind(std::string_view s) {
  for (KernelKind k : {KernelKind::ExpAbs, KernelKind::Gauss, KernelKind::Poly, KernelKind::Const}) {
    if (s == to_string(k)) return k;
  }
  throw InvalidArgument("unknown kernel kind: " + std::string(s));
}

void validate(const KernelSpec& spec) {
  if (!(spec.c > 0.0) || !std::isfinite(spec.c)) throw InvalidArgument("kernel parameter c must be > 0");
  if (spec.grid_n < 1) throw InvalidArgument("grid_n must be >= 1");
}

double kernel_value(const KernelSpec& spec, double x, double y) {
  switch (spec.kind) {
    case KernelKind::ExpAbs: return std::exp(-spec.c * std::abs(x - y));
    case KernelKind::Gauss: return std::exp(-spec.c * (x - y) * (x - y));
    case KernelKind::Poly: return std::pow(1.0 + x * y, spec.c);
    case KernelKind::Const: return 1.0;
  }
  return 0.0;
}

NonNegMatrix nystrom_matrix(const KernelSpec& spec) {
  validate(spec);
  const std::size_t n = spec.grid_n;
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> e(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = (static_cast<double>(i) + 0.5) * h;
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = (static_cast<double>(j) + 0.5) * h;
      e[i * n + j] = kernel_value(spec, xi, xj) * h;
    }
  }
  return NonNegMatrix(n, std::move(e));
}

InstanceSpec kernel_instance(const std::vector<KernelSpec>& specs, std::string_view entry_id,
                             const ChainParams& params) {
  if (specs.empty()) throw InvalidArgument("kernel_instance: no kernels given");
  const CatalogEntry* e = find_entry(entry_id);
  if (!e) throw InvalidArgument("unknown entry id: " + std::string(entry_id));
  InstanceSpec s;
  s.dimension = specs.front().grid_n;
  s.params = params;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].grid_n != s.dimension) {
      throw InvalidArgument("grid mismatch: kernel " + std::to_string(i + 1) + " has grid_n " +
                            std::to_string(specs[i].grid_n) + ", expected " + std::to_string(s.dimension));
    }
    s.sets.emplace_back("Psi" + std::to_string(i + 1), std::vector{nystrom_matrix(specs[i])});
  }
  const ChainParams q = e->resolve(params, s.sets.size());
  if (e->arity(q) != s.sets.size()) {
    throw InvalidArgument("arity mismatch: " + e->id + " expects " + std::to_string(e->arity(q)) + " sets, got " +
                          std::to_string(s.sets.size()));
  }
  return s;
}

}  // namespace hjsr
