#include "hjsr/numat.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>

namespace hjsr {

namespace {

void require_same_dim(const NonNegMatrix& a, const NonNegMatrix& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                            " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// NonNegMatrix

NonNegMatrix::NonNegMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {
  if (dim == 0) throw InvalidArgument("NonNegMatrix: dimension must be >= 1");
}

NonNegMatrix::NonNegMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), a_(std::move(entries)) {
  if (dim == 0) throw InvalidArgument("NonNegMatrix: dimension must be >= 1");
  if (a_.size() != dim * dim) {
    throw InvalidArgument("NonNegMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                          std::to_string(a_.size()));
  }
  for (std::size_t k = 0; k < a_.size(); ++k) {
    double& x = a_[k];
    if (!std::isfinite(x)) {
      throw InvalidArgument("NonNegMatrix: entry (" + std::to_string(k / dim) + "," +
                            std::to_string(k % dim) + ") is not finite");
    }
    if (x < 0.0) {
      throw InvalidArgument("NonNegMatrix: entry (" + std::to_string(k / dim) + "," +
                            std::to_string(k % dim) + ") is negative");
    }
    if (x == 0.0) x = 0.0;  // drop the sign of -0.0
  }
}

NonNegMatrix NonNegMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> e;
  e.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw InvalidArgument("NonNegMatrix: row " + std::to_string(i) + " has " +
                            std::to_string(rows[i].size()) + " entries, expected " + std::to_string(n));
    }
    e.insert(e.end(), rows[i].begin(), rows[i].end());
  }
  return NonNegMatrix(n, std::move(e));
}

NonNegMatrix NonNegMatrix::identity(std::size_t dim) {
  NonNegMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m.a_[i * dim + i] = 1.0;
  return m;
}

NonNegMatrix NonNegMatrix::ones(std::size_t dim) {
  return NonNegMatrix(dim, std::vector<double>(dim * dim, 1.0));
}

bool NonNegMatrix::is_zero() const noexcept {
  return std::all_of(a_.begin(), a_.end(), [](double x) { return x == 0.0; });
}

double NonNegMatrix::max_entry() const noexcept { return *std::max_element(a_.begin(), a_.end()); }

NonNegMatrix NonNegMatrix::transpose() const {
  std::vector<double> t(a_.size());
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t[j * dim_ + i] = a_[i * dim_ + j];
  return NonNegMatrix(Unchecked{}, dim_, std::move(t));
}

NonNegMatrix NonNegMatrix::scaled(double s) const {
  std::vector<double> t(a_);
  for (double& x : t) x *= s;
  return NonNegMatrix(dim_, std::move(t));
}

std::vector<std::vector<double>> NonNegMatrix::rows() const {
  std::vector<std::vector<double>> r(dim_);
  for (std::size_t i = 0; i < dim_; ++i) r[i].assign(a_.begin() + i * dim_, a_.begin() + (i + 1) * dim_);
  return r;
}

std::strong_ordering operator<=>(const NonNegMatrix& a, const NonNegMatrix& b) noexcept {
  if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
  for (std::size_t k = 0; k < a.a_.size(); ++k) {
    // Nonnegative doubles order the same way as their bit patterns.
    auto x = std::bit_cast<std::uint64_t>(a.a_[k]);
    auto y = std::bit_cast<std::uint64_t>(b.a_[k]);
    if (auto c = x <=> y; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Entrywise and ordinary products

NonNegMatrix hadamard_product(const NonNegMatrix& a, const NonNegMatrix& b) {
  require_same_dim(a, b, "hadamard_product");
  std::vector<double> e(a.a_.size());
  for (std::size_t k = 0; k < e.size(); ++k) e[k] = a.a_[k] * b.a_[k];
  return NonNegMatrix(a.dim(), std::move(e));
}

NonNegMatrix hadamard_power(const NonNegMatrix& a, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("hadamard_power: exponent must be > 0");
  std::vector<double> e(a.entries().begin(), a.entries().end());
  if (t != 1.0) {
    for (double& x : e) x = (x == 0.0) ? 0.0 : std::pow(x, t);
  }
  return NonNegMatrix(a.dim(), std::move(e));
}

NonNegMatrix weighted_hadamard_mean(std::span<const NonNegMatrix> mats, std::span<const double> alphas) {
  if (mats.empty()) throw InvalidArgument("weighted_hadamard_mean: no factors");
  if (mats.size() != alphas.size()) {
    throw InvalidArgument("weighted_hadamard_mean: " + std::to_string(mats.size()) + " factors but " +
                          std::to_string(alphas.size()) + " weights");
  }
  for (double w : alphas) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("weighted_hadamard_mean: weights must be > 0");
  }
  const std::size_t n = mats[0].dim();
  for (const auto& m : mats) require_same_dim(mats[0], m, "weighted_hadamard_mean");
  std::vector<double> e(n * n, 1.0);
  for (std::size_t j = 0; j < mats.size(); ++j) {
    auto src = mats[j].entries();
    const double w = alphas[j];
    for (std::size_t k = 0; k < e.size(); ++k) {
      const double x = src[k];
      e[k] *= (x == 0.0) ? 0.0 : (w == 1.0 ? x : std::pow(x, w));
    }
  }
  return NonNegMatrix(n, std::move(e));
}

NonNegMatrix mat_product(const NonNegMatrix& a, const NonNegMatrix& b) {
  require_same_dim(a, b, "mat_product");
  const std::size_t n = a.dim();
  std::vector<double> c(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a.a_[i * n + k];
      if (aik == 0.0) continue;
      const double* brow = &b.a_[k * n];
      double* crow = &c[i * n];
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  for (double x : c) {
    if (!std::isfinite(x)) throw InvalidArgument("mat_product: overflow");
  }
  return NonNegMatrix(NonNegMatrix::Unchecked{}, n, std::move(c));
}

bool pointwise_leq(const NonNegMatrix& a, const NonNegMatrix& b, double slack) {
  require_same_dim(a, b, "pointwise_leq");
  if (!(slack >= 0.0)) throw InvalidArgument("pointwise_leq: slack must be >= 0");
  auto x = a.entries();
  auto y = b.entries();
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] > y[k] + slack) return false;
  }
  return true;
}

double norm_l1(const NonNegMatrix& a) noexcept {
  const std::size_t n = a.dim();
  double best = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a(i, j);
    best = std::max(best, s);
  }
  return best;
}

double norm_linf(const NonNegMatrix& a) noexcept {
  const std::size_t n = a.dim();
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j);
    best = std::max(best, s);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Outward rounding

namespace rounding {

double down(double x, int ulps) noexcept {
  if (x <= 0.0) return 0.0;
  for (int k = 0; k < ulps; ++k) x = std::nextafter(x, 0.0);
  return x;
}

double up(double x, int ulps) noexcept {
  if (std::isinf(x)) return x;
  if (x == 0.0) return 0.0;
  for (int k = 0; k < ulps; ++k) x = std::nextafter(x, std::numeric_limits<double>::infinity());
  return x;
}

Bracket pow(const Bracket& x, double p) noexcept {
  Bracket r = x;
  if (p == 1.0) return r;
  r.lo = x.lo == 0.0 ? 0.0 : down(std::pow(x.lo, p));
  r.hi = x.hi == 0.0 ? 0.0 : up(std::pow(x.hi, p));
  return r;
}

Bracket sqrt(const Bracket& x) noexcept {
  Bracket r = x;
  r.lo = x.lo == 0.0 ? 0.0 : down(std::sqrt(x.lo), 2);
  r.hi = x.hi == 0.0 ? 0.0 : up(std::sqrt(x.hi), 2);
  return r;
}

}  // namespace rounding

// ---------------------------------------------------------------------------
// Spectral radius

namespace {

using Vec = std::vector<double>;

Eigen::MatrixXd to_eigen(const NonNegMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = a(i, j);
  return m;
}

// Eigenvector of the eigenvalue with largest real part, taken in modulus. For a
// nonnegative matrix that eigenvalue is the Perron root.
Vec eigen_candidate(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, true);
  if (es.info() != Eigen::Success) return Vec(n, 1.0);
  const auto& ev = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < n; ++k) {
    if (ev[k].real() > ev[best].real()) best = k;
  }
  Vec v(n);
  double mx = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    v[i] = std::abs(es.eigenvectors()(i, best));
    mx = std::max(mx, v[i]);
  }
  if (!(mx > 0.0) || !std::isfinite(mx)) return Vec(n, 1.0);
  for (double& x : v) x /= mx;
  return v;
}

void matvec(const NonNegMatrix& a, const Vec& x, Vec& y) {
  const std::size_t n = a.dim();
  y.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
}

struct CwBounds {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

// Collatz-Wielandt: for x >= 0, x != 0, rho >= min over supp(x) of (Ax)_i/x_i;
// for x > 0, rho <= max_i (Ax)_i/x_i.
CwBounds cw_bounds(const Vec& x, const Vec& ax) {
  CwBounds b;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  bool positive = true;
  bool any = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0) {
      const double r = ax[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      any = true;
    } else {
      positive = false;
    }
  }
  if (any) b.lo = lo;
  if (positive && any) b.hi = hi;
  return b;
}

class CwTracker {
 public:
  CwTracker(const NonNegMatrix& a, double tol) : a_(a), tol_(tol) {}

  void consider(const Vec& x) {
    matvec(a_, x, ax_);
    auto b = cw_bounds(x, ax_);
    best_.lo = std::max(best_.lo, b.lo);
    best_.hi = std::min(best_.hi, b.hi);
  }
  const Vec& last_image() const { return ax_; }
  bool done() const { return best_.hi - best_.lo <= tol_ * std::max(1.0, best_.hi); }
  const CwBounds& best() const { return best_; }

 private:
  const NonNegMatrix& a_;
  double tol_;
  Vec ax_;
  CwBounds best_;
};

Vec positive_floor(Vec v) {
  double mx = *std::max_element(v.begin(), v.end());
  if (!(mx > 0.0)) return Vec(v.size(), 1.0);
  const double floor = mx * 1e-300;
  for (double& x : v) x = std::max(x, floor);
  return v;
}

// Bracket for an irreducible matrix (positive Perron vector exists).
Bracket irreducible_bracket(const NonNegMatrix& a, double tol) {
  const std::size_t n = a.dim();
  const int ulps = 4 * static_cast<int>(n + 1);
  CwTracker cw(a, tol);

  Vec x = positive_floor(eigen_candidate(to_eigen(a)));
  cw.consider(x);

  constexpr int kIterations = 10000;
  constexpr int kUnshifted = 100;
  Vec y;
  for (int it = 0; it < kIterations && !cw.done(); ++it) {
    // Past the unshifted phase, iterate with A + sI so periodic blocks converge;
    // the bounds themselves are always taken for A.
    const double shift = it < kUnshifted ? 0.0 : 0.5 * (cw.best().lo + std::min(cw.best().hi, norm_linf(a)));
    y = cw.last_image();
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += shift * x[i];
      mx = std::max(mx, y[i]);
    }
    if (!(mx > 0.0)) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(y[i] / mx, 1e-300);
    cw.consider(x);
  }

  if (!cw.done()) {
    // rho(A) <= rho(A + eps J); the positive Perron vector of A + eps J is a
    // valid Collatz-Wielandt test vector for A itself.
    const double scale = a.max_entry();
    for (double eps : {1e-8, 1e-10, 1e-12}) {
      Eigen::MatrixXd m = to_eigen(a).array() + eps * scale;
      cw.consider(positive_floor(eigen_candidate(m)));
    }
  }

  Bracket r;
  r.lo = rounding::down(cw.best().lo, ulps);
  r.hi = rounding::up(cw.best().hi, ulps);
  if (!std::isfinite(r.hi)) r.hi = rounding::up(norm_linf(a), ulps);
  r.loose = r.hi - r.lo > tol * std::max(1.0, r.hi);
  return r;
}

// Tarjan's algorithm on the support digraph (edge i -> j iff a[i,j] > 0).
std::vector<std::vector<std::size_t>> strong_components(const NonNegMatrix& a) {
  const std::size_t n = a.dim();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (a(v, w) == 0.0) continue;
      if (index[w] == kUnset) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] == kUnset) visit(v);
  }
  return comps;
}

NonNegMatrix principal_submatrix(const NonNegMatrix& a, const std::vector<std::size_t>& idx) {
  const std::size_t k = idx.size();
  std::vector<double> e(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) e[i * k + j] = a(idx[i], idx[j]);
  return NonNegMatrix(k, std::move(e));
}

}  // namespace

Bracket spectral_radius_bracket(const NonNegMatrix& a, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("spectral_radius_bracket: tol must be > 0");
  if (a.is_zero()) return Bracket{};
  if (a.dim() == 1) {
    Bracket r;
    r.lo = r.hi = a(0, 0);
    return r;
  }

  // rho(A) is the maximum over the irreducible diagonal blocks of the Frobenius
  // normal form; acyclic components contribute 0.
  Bracket r;
  for (const auto& comp : strong_components(a)) {
    Bracket b;
    if (comp.size() == 1) {
      const double d = a(comp[0], comp[0]);
      b.lo = b.hi = d;
    } else {
      b = irreducible_bracket(principal_submatrix(a, comp), tol);
    }
    r.lo = std::max(r.lo, b.lo);
    r.hi = std::max(r.hi, b.hi);
    r.loose = r.loose || b.loose;
  }
  r.loose = r.hi - r.lo > tol * std::max(1.0, r.hi);
  return r;
}

Bracket spectral_norm_bracket(const NonNegMatrix& a, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("spectral_norm_bracket: tol must be > 0");
  const NonNegMatrix ata = mat_product(a.transpose(), a);
  Bracket r = rounding::sqrt(spectral_radius_bracket(ata, tol));
  r.lo = rounding::down(r.lo, 4);
  r.hi = rounding::up(r.hi, 4);
  return r;
}

std::vector<double> perron_vector(const NonNegMatrix& a) {
  if (a.dim() == 1) return {1.0};
  if (a.is_zero()) return Vec(a.dim(), 1.0);
  return eigen_candidate(to_eigen(a));
}

}  // namespace hjsr
