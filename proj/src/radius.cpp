#include "hjsr/radius.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <vector>

namespace hjsr {

namespace {

// Inner spectral computations run tighter than the public default so that
// composing them (roots, scaling) stays well inside 1e-9.
constexpr double kPreciseTol = 1e-12;
// Candidate products kept per enumeration level for a precise radius.
constexpr std::size_t kRefineCandidates = 2;
// Products formed by the exhaustive lower-bound scan before branch and bound.
constexpr std::size_t kScanProducts = 4096;
// Open nodes allowed in one branch-and-bound search.
constexpr std::size_t kFrontierCap = 200'000;
// Products whose entries all fall below this are not normed directly (underflow).
constexpr double kUnderflowGuard = 1e-200;

double precise_rho_lo(const NonNegMatrix& p) { return spectral_radius_bracket(p, kPreciseTol).lo; }

// Collatz-Wielandt lower bound after a few power steps from the all-ones vector.
double cheap_rho_lo(const NonNegMatrix& p) {
  const std::size_t n = p.dim();
  double x[8], y[8];
  std::vector<double> xs, ys;
  double* xp = x;
  double* yp = y;
  if (n > 8) {
    xs.resize(n);
    ys.resize(n);
    xp = xs.data();
    yp = ys.data();
  }
  for (std::size_t i = 0; i < n; ++i) xp[i] = 1.0;
  double best = 0.0;
  for (int it = 0; it < 4; ++it) {
    double mx = 0.0, lo = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += p(i, j) * xp[j];
      yp[i] = s;
      mx = std::max(mx, s);
      if (xp[i] > 0.0) lo = std::min(lo, s / xp[i]);
    }
    if (std::isfinite(lo)) best = std::max(best, lo);
    if (!(mx > 0.0)) break;
    for (std::size_t i = 0; i < n; ++i) xp[i] = yp[i] / mx;
  }
  return best;
}

double frobenius(const NonNegMatrix& a) {
  double s = 0.0;
  for (double x : a.entries()) s += x * x;
  return std::sqrt(s);
}

double norm_cheap(const NonNegMatrix& a, NormKind kind) {
  switch (kind) {
    case NormKind::L1: return norm_l1(a);
    case NormKind::Linf: return norm_linf(a);
    case NormKind::L2: return std::min(std::sqrt(norm_l1(a) * norm_linf(a)), frobenius(a));
  }
  return INFINITY;
}

double norm_precise(const NonNegMatrix& a, NormKind kind) {
  if (kind == NormKind::L2) return spectral_norm_bracket(a, kPreciseTol).hi;
  return norm_cheap(a, kind);
}

// Power of two p with max_A ||A||_inf * p in (1/2, 1]; scaling by it is exact.
double pow2_scale(std::span<const NonNegMatrix> mats) {
  double m = 0.0;
  for (const auto& a : mats) m = std::max(m, norm_linf(a));
  if (!(m > 0.0)) return 1.0;
  int e = 0;
  std::frexp(m, &e);  // m = f * 2^e, f in [1/2, 1)
  return std::ldexp(1.0, -e);
}

std::vector<NonNegMatrix> scaled_all(std::span<const NonNegMatrix> mats, double s) {
  std::vector<NonNegMatrix> out;
  out.reserve(mats.size());
  for (const auto& a : mats) out.push_back(a.scaled(s));
  return out;
}

struct Candidate {
  NonNegMatrix p;
  std::size_t len;
  double unit;  // the set p was formed from is the working set scaled by `unit`
  double cheap;
};

// Running lower bound for the joint spectral radius of the working set.
class LowerTracker {
 public:
  double value() const noexcept { return best_; }
  const Candidate* best_raw() const noexcept { return best_raw_ ? &*best_raw_ : nullptr; }

  void offer(const NonNegMatrix& p, std::size_t len, double unit) {
    const double c = cheap_rho_lo(p);
    if (!(c > 0.0)) return;
    const double v = std::pow(c, 1.0 / static_cast<double>(len)) / unit;
    best_ = std::max(best_, v);
    if (level_.size() < kRefineCandidates || v > level_.back().cheap) {
      Candidate cand{p, len, unit, v};
      auto pos = std::upper_bound(level_.begin(), level_.end(), v,
                                  [](double x, const Candidate& c2) { return x > c2.cheap; });
      level_.insert(pos, std::move(cand));
      if (level_.size() > kRefineCandidates) level_.pop_back();
    }
  }

  // Precise radius for the best candidates offered since the last call.
  void refine() {
    for (const auto& c : level_) {
      const double lo = precise_rho_lo(c.p);
      if (!(lo > 0.0)) continue;
      const double v = std::pow(lo, 1.0 / static_cast<double>(c.len)) / c.unit;
      if (v > best_) best_ = v;
      if (c.unit == 1.0 && (!best_raw_ || v > best_raw_->cheap)) {
        best_raw_ = c;
        best_raw_->cheap = v;
      }
    }
    level_.clear();
  }

 private:
  double best_ = 0.0;
  std::vector<Candidate> level_;
  std::optional<Candidate> best_raw_;
};

struct Budget {
  std::size_t left;
  bool exhausted = false;
  bool take(std::size_t k) {
    if (k > left) {
      exhausted = true;
      return false;
    }
    left -= k;
    return true;
  }
};

// Exhaustive deduplicated enumeration for lower bounds at small depths.
std::size_t scan_lower(const std::vector<NonNegMatrix>& set, std::size_t max_depth, LowerTracker& lo,
                       Budget& budget) {
  std::vector<NonNegMatrix> level = set;
  std::size_t depth = 0;
  std::size_t formed = 0;
  for (std::size_t k = 1; k <= max_depth; ++k) {
    for (const auto& p : level) lo.offer(p, k, 1.0);
    lo.refine();
    depth = k;
    if (k == max_depth) break;
    const std::size_t next = level.size() * set.size();
    if (formed + next > kScanProducts || !budget.take(next)) break;
    formed += next;
    std::vector<NonNegMatrix> nl;
    nl.reserve(next);
    for (const auto& p : level)
      for (const auto& a : set) nl.push_back(mat_product(p, a));
    std::sort(nl.begin(), nl.end());
    nl.erase(std::unique(nl.begin(), nl.end()), nl.end());
    level = std::move(nl);
  }
  return depth;
}

struct Node {
  NonNegMatrix p;
  double val;
  double fallback;
  std::size_t depth;
  bool cheap;
  std::uint64_t seq;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.val != b.val) return a.val < b.val;
    return a.seq > b.seq;
  }
};

struct SearchResult {
  double hi = INFINITY;  // in units of the searched set
  bool partial = false;
  std::size_t depth = 0;
};

// Best-first branch and bound over product prefixes. A node for the word w has
// value val(w) = min over factorizations of w of the largest normalized factor
// norm; the maximum of val over the leaves of any complete prefix tree bounds the
// joint spectral radius from above.
SearchResult bb_search(const std::vector<NonNegMatrix>& set, NormKind kind, double unit, LowerTracker& lo,
                       const JsrConfig& cfg, Budget& budget) {
  std::priority_queue<Node, std::vector<Node>, NodeOrder> heap;
  std::uint64_t seq = 0;
  std::vector<double> member_norm;
  for (const auto& a : set) {
    const double nrm = norm_precise(a, kind);
    member_norm.push_back(nrm);
    heap.push(Node{a, nrm, nrm, 1, false, seq++});
  }

  SearchResult r;
  for (;;) {
    const Node& top = heap.top();
    r.depth = std::max(r.depth, top.depth);
    const double threshold = lo.value() * unit * (1.0 + cfg.target_width);
    if (top.val <= threshold) {
      r.hi = top.val;
      return r;
    }
    if (top.cheap) {
      Node n = top;
      heap.pop();
      const double nrm = norm_precise(n.p, kind);
      n.val = std::min(std::pow(nrm, 1.0 / static_cast<double>(n.depth)), n.fallback);
      n.cheap = false;
      heap.push(std::move(n));
      continue;
    }
    if (top.depth >= cfg.max_depth) {
      r.hi = top.val;
      return r;
    }
    if (heap.size() > kFrontierCap || !budget.take(set.size())) {
      budget.exhausted = true;
      r.hi = top.val;
      r.partial = true;
      return r;
    }
    Node parent = top;
    heap.pop();
    const std::size_t d = parent.depth + 1;
    const double inv = 1.0 / static_cast<double>(d);
    for (std::size_t j = 0; j < set.size(); ++j) {
      NonNegMatrix p = mat_product(parent.p, set[j]);
      lo.offer(p, d, unit);
      const double fallback = std::max(parent.val, member_norm[j]);
      Node child{std::move(p), fallback, fallback, d, false, seq++};
      if (child.p.is_zero()) {
        child.val = 0.0;
      } else if (child.p.max_entry() >= kUnderflowGuard) {
        const double v = std::pow(norm_cheap(child.p, kind), inv);
        child.val = std::min(v, fallback);
        child.cheap = kind == NormKind::L2;
      }
      heap.push(std::move(child));
    }
  }
}

// Diagonal similarity D^-1 A D for every member, with d built from Perron
// vectors of the best product found so far.
std::vector<NonNegMatrix> balanced(const std::vector<NonNegMatrix>& set, const NonNegMatrix& best, NormKind kind) {
  std::vector<double> v = perron_vector(best);
  std::vector<double> u = perron_vector(best.transpose());
  const std::size_t n = best.dim();
  auto clamp = [](std::vector<double>& x) {
    const double mx = *std::max_element(x.begin(), x.end());
    for (double& e : x) e = std::max(e, 1e-12 * mx);
  };
  clamp(v);
  clamp(u);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    switch (kind) {
      case NormKind::Linf: d[i] = v[i]; break;
      case NormKind::L1: d[i] = 1.0 / u[i]; break;
      case NormKind::L2: d[i] = std::sqrt(v[i] / u[i]); break;
    }
  }
  std::vector<NonNegMatrix> out;
  out.reserve(set.size());
  for (const auto& a : set) {
    std::vector<double> e(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) e[i * n + j] = a(i, j) * d[j] / d[i];
    out.emplace_back(n, std::move(e));
  }
  return out;
}

// Relative widening covering rounding in products of up to `depth` factors,
// norms, roots and the balancing similarity.
double rounding_slack(std::size_t depth, std::size_t n) {
  return 16.0 * static_cast<double>((depth + 4) * (n + 2)) * DBL_EPSILON;
}

std::vector<NonNegMatrix> nonzero_members(const OperatorSet& sigma) {
  std::vector<NonNegMatrix> out;
  const OperatorSet uniq = sigma.deduplicated();
  for (const auto& a : uniq.mats())
    if (!a.is_zero()) out.push_back(a);
  return out;
}

struct EngineResult {
  double lo = 0.0, hi = 0.0;
  bool partial = false;
  std::size_t depth = 0;
};

// Works on the nonzero members scaled into the unit l_inf ball.
EngineResult run_engine(const std::vector<NonNegMatrix>& set, const JsrConfig& cfg) {
  EngineResult res;
  Budget budget{cfg.budget_products};
  LowerTracker lo;
  res.depth = scan_lower(set, cfg.max_depth, lo, budget);

  if (!cfg.refine) {
    // min over m of (max over length-m products of the norm)^(1/m), by plain enumeration.
    double hi = INFINITY;
    std::vector<NonNegMatrix> level = set;
    for (std::size_t k = 1; k <= cfg.max_depth; ++k) {
      double mx = 0.0;
      bool underflow = false;
      for (const auto& p : level) {
        underflow = underflow || (p.max_entry() < kUnderflowGuard && !p.is_zero());
        mx = std::max(mx, norm_precise(p, cfg.norm));
      }
      if (!underflow) hi = std::min(hi, std::pow(mx, 1.0 / static_cast<double>(k)));
      res.depth = std::max(res.depth, k);
      if (k == cfg.max_depth) break;
      if (!budget.take(level.size() * set.size())) break;
      std::vector<NonNegMatrix> nl;
      nl.reserve(level.size() * set.size());
      for (const auto& p : level)
        for (const auto& a : set) nl.push_back(mat_product(p, a));
      std::sort(nl.begin(), nl.end());
      nl.erase(std::unique(nl.begin(), nl.end()), nl.end());
      level = std::move(nl);
    }
    res.lo = lo.value();
    res.hi = hi;
    res.partial = budget.exhausted;
    return res;
  }

  struct Plan {
    NormKind kind;
    bool balance;
  };
  std::vector<Plan> plans;
  if (cfg.balance) {
    plans.push_back({NormKind::Linf, true});
    plans.push_back({NormKind::L2, true});
    plans.push_back({NormKind::L1, true});
  }
  plans.push_back({cfg.norm, false});

  double hi = INFINITY;
  bool hi_partial = false;
  for (std::size_t k = 0; k < plans.size(); ++k) {
    if (hi <= lo.value() * (1.0 + cfg.target_width)) break;
    std::vector<NonNegMatrix> work;
    double unit = 1.0;
    if (plans[k].balance) {
      const Candidate* best = lo.best_raw();
      if (!best) continue;
      work = balanced(set, best->p, plans[k].kind);
      unit = pow2_scale(work);
      work = scaled_all(work, unit);
    } else {
      work = set;
    }
    Budget share{budget.left / (plans.size() - k)};
    const std::size_t before = share.left;
    SearchResult sr = bb_search(work, plans[k].kind, unit, lo, cfg, share);
    budget.left -= before - share.left;
    lo.refine();
    res.depth = std::max(res.depth, sr.depth);
    const double h = sr.hi / unit;
    if (h < hi) {
      hi = h;
      hi_partial = sr.partial;
    }
  }
  res.lo = lo.value();
  res.hi = hi;
  res.partial = hi_partial || (budget.exhausted && hi > res.lo * (1.0 + cfg.target_width));
  return res;
}

}  // namespace

std::string_view to_string(NormKind kind) noexcept {
  switch (kind) {
    case NormKind::L2: return "l2";
    case NormKind::L1: return "l1";
    case NormKind::Linf: return "linf";
  }
  return "unknown";
}

void validate(const JsrConfig& cfg) {
  if (cfg.max_depth == 0) throw InvalidArgument("JsrConfig: max_depth must be >= 1");
  if (!(cfg.target_width > 0.0)) throw InvalidArgument("JsrConfig: target_width must be > 0");
  if (cfg.budget_products == 0) throw InvalidArgument("JsrConfig: budget_products must be >= 1");
}

BoundResult gsr_lower(const OperatorSet& sigma, std::size_t depth, std::size_t budget_products) {
  if (depth == 0) throw InvalidArgument("gsr_lower: depth must be >= 1");
  const auto members = nonzero_members(sigma);
  BoundResult r;
  if (members.empty()) {
    r.depth_used = depth;
    return r;
  }
  const double s = pow2_scale(members);
  const auto set = scaled_all(members, s);
  const std::size_t n = set.front().dim();
  Budget budget{budget_products};
  std::vector<NonNegMatrix> level = set;
  double best = 0.0;
  for (std::size_t k = 1; k <= depth; ++k) {
    // Each level is widened for its own product length, then folded into a running max.
    LowerTracker lo;
    for (const auto& p : level) lo.offer(p, k, 1.0);
    lo.refine();
    best = std::max(best, rounding::down(lo.value() * (1.0 - rounding_slack(k, n)) / s));
    r.depth_used = k;
    if (k == depth) break;
    if (!budget.take(level.size() * set.size())) {
      r.partial = true;
      break;
    }
    std::vector<NonNegMatrix> nl;
    nl.reserve(level.size() * set.size());
    for (const auto& p : level)
      for (const auto& a : set) nl.push_back(mat_product(p, a));
    std::sort(nl.begin(), nl.end());
    nl.erase(std::unique(nl.begin(), nl.end()), nl.end());
    level = std::move(nl);
  }
  r.value = best;
  return r;
}

Bracket jsr_bracket(const OperatorSet& sigma, const JsrConfig& cfg) {
  validate(cfg);
  const auto members = nonzero_members(sigma);
  Bracket b;
  b.depth_used = 1;
  if (members.empty()) return b;
  if (members.size() == 1) {
    b = spectral_radius_bracket(members[0], kPreciseTol);
    b.depth_used = 1;
    b.loose = false;
    return b;
  }
  const double s = pow2_scale(members);
  const auto res = run_engine(scaled_all(members, s), cfg);
  const double c = rounding_slack(cfg.max_depth, members.front().dim());
  b.lo = rounding::down(res.lo * (1.0 - c) / s);
  b.hi = rounding::up(res.hi * (1.0 + c) / s);
  if (b.hi < b.lo) b.hi = b.lo;
  b.partial = res.partial;
  b.depth_used = static_cast<int>(res.depth);
  return b;
}

BoundResult jsr_upper(const OperatorSet& sigma, const JsrConfig& cfg) {
  const Bracket b = jsr_bracket(sigma, cfg);
  return BoundResult{b.hi, b.partial, static_cast<std::size_t>(b.depth_used)};
}

Bracket set_norm(const OperatorSet& psi) {
  Bracket r;
  for (const auto& a : psi.mats()) {
    const Bracket b = spectral_norm_bracket(a, kPreciseTol);
    r.lo = std::max(r.lo, b.lo);
    r.hi = std::max(r.hi, b.hi);
  }
  return r;
}

Bracket brute_force_oracle(const OperatorSet& sigma, std::size_t depth) {
  if (depth == 0) throw InvalidArgument("brute_force_oracle: depth must be >= 1");
  const std::size_t q = sigma.size();
  double total = 0.0, layer = 1.0;
  for (std::size_t k = 1; k <= depth; ++k) {
    layer *= static_cast<double>(q);
    total += layer;
  }
  if (total > 1e7) throw BudgetExceeded("brute_force_oracle: more than 10^7 products");

  const auto mats = sigma.mats();
  double lo = 0.0;
  std::vector<double> max_norm(depth + 1, 0.0);
  // Depth-first over member indices; stack[k] holds the product of length k+1.
  std::vector<NonNegMatrix> stack;
  std::vector<std::size_t> idx;
  stack.push_back(mats[0]);
  idx.push_back(0);
  for (;;) {
    const std::size_t k = stack.size();
    const NonNegMatrix& p = stack.back();
    const double rho = spectral_radius_bracket(p).lo;
    lo = std::max(lo, std::pow(rho, 1.0 / static_cast<double>(k)));
    max_norm[k] = std::max(max_norm[k], spectral_norm_bracket(p).hi);
    if (k < depth) {
      stack.push_back(mat_product(p, mats[0]));
      idx.push_back(0);
      continue;
    }
    // Advance to the next word in lexicographic order.
    while (!idx.empty() && idx.back() + 1 == q) {
      idx.pop_back();
      stack.pop_back();
    }
    if (idx.empty()) break;
    ++idx.back();
    stack.pop_back();
    stack.push_back(stack.empty() ? mats[idx.back()] : mat_product(stack.back(), mats[idx.back()]));
  }
  double hi = INFINITY;
  for (std::size_t k = 1; k <= depth; ++k) hi = std::min(hi, std::pow(max_norm[k], 1.0 / static_cast<double>(k)));
  Bracket b;
  b.lo = rounding::down(lo);
  b.hi = rounding::up(hi);
  b.depth_used = static_cast<int>(depth);
  return b;
}

}  // namespace hjsr
