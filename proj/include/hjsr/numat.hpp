#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjsr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Raised when a set or enumeration would exceed its configured resource cap.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Dense square matrix whose entries are finite and >= 0, stored row-major.
class NonNegMatrix {
 public:
  /// Zero matrix of the given dimension.
  explicit NonNegMatrix(std::size_t dim);
  NonNegMatrix(std::size_t dim, std::vector<double> entries);

  static NonNegMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static NonNegMatrix identity(std::size_t dim);
  static NonNegMatrix ones(std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * dim_ + j]; }
  std::span<const double> entries() const noexcept { return a_; }

  bool is_zero() const noexcept;
  double max_entry() const noexcept;
  NonNegMatrix transpose() const;
  NonNegMatrix scaled(double s) const;
  std::vector<std::vector<double>> rows() const;

  /// Exact entrywise equality (after -0.0 is normalised to +0.0 on construction).
  friend bool operator==(const NonNegMatrix& a, const NonNegMatrix& b) noexcept {
    return a.dim_ == b.dim_ && a.a_ == b.a_;
  }
  /// Canonical total order on bit patterns; used for deduplication.
  friend std::strong_ordering operator<=>(const NonNegMatrix& a, const NonNegMatrix& b) noexcept;

 private:
  struct Unchecked {};
  NonNegMatrix(Unchecked, std::size_t dim, std::vector<double> entries) noexcept
      : dim_(dim), a_(std::move(entries)) {}

  friend NonNegMatrix mat_product(const NonNegMatrix&, const NonNegMatrix&);
  friend NonNegMatrix hadamard_product(const NonNegMatrix&, const NonNegMatrix&);

  std::size_t dim_;
  std::vector<double> a_;
};

/// Certified enclosure of a nonnegative real quantity.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  /// Spectral iteration did not reach the requested width; the bracket is still valid.
  bool loose = false;
  /// A JSR engine ran out of budget before reaching the target width.
  bool partial = false;
  int depth_used = 0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool overlaps(const Bracket& o) const noexcept { return lo <= o.hi && o.lo <= hi; }
};

NonNegMatrix hadamard_product(const NonNegMatrix& a, const NonNegMatrix& b);
NonNegMatrix hadamard_power(const NonNegMatrix& a, double t);
NonNegMatrix weighted_hadamard_mean(std::span<const NonNegMatrix> mats, std::span<const double> alphas);
NonNegMatrix mat_product(const NonNegMatrix& a, const NonNegMatrix& b);

/// True iff a[i,j] <= b[i,j] + slack for all entries.
bool pointwise_leq(const NonNegMatrix& a, const NonNegMatrix& b, double slack);

/// Collatz-Wielandt enclosure of the spectral radius; hi - lo <= tol * max(1, hi)
/// unless `loose` is set.
Bracket spectral_radius_bracket(const NonNegMatrix& a, double tol = 1e-9);

/// Enclosure of the l2-induced norm as sqrt of the spectral radius of a^T a.
Bracket spectral_norm_bracket(const NonNegMatrix& a, double tol = 1e-9);

/// Max column sum.
double norm_l1(const NonNegMatrix& a) noexcept;
/// Max row sum.
double norm_linf(const NonNegMatrix& a) noexcept;

/// Approximate right Perron vector (nonnegative, max component 1). Not certified.
std::vector<double> perron_vector(const NonNegMatrix& a);

namespace rounding {
/// Move x down/up by `ulps` units in the last place; down() never goes below zero.
double down(double x, int ulps = 4) noexcept;
double up(double x, int ulps = 4) noexcept;
/// Outward-rounded x^p for x >= 0, p > 0, as [lo, hi].
Bracket pow(const Bracket& x, double p) noexcept;
Bracket sqrt(const Bracket& x) noexcept;
}  // namespace rounding

}  // namespace hjsr
