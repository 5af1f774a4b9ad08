#include "hjsr/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace hjsr {

// ---------------------------------------------------------------------------
// Expressions

bool Expr::is_scalar() const noexcept {
  return kind == ExprKind::RValue || kind == ExprKind::ScalarPow || kind == ExprKind::ScalarMul;
}

namespace {

std::string fmt_num(double x, bool precise) {
  char buf[40];
  std::snprintf(buf, sizeof buf, precise ? "%.17g" : "%.6g", x);
  return buf;
}

std::string render(const Expr& e, std::span<const std::string> names, bool precise) {
  auto sub = [&](const ExprPtr& c) { return render(*c, names, precise); };
  switch (e.kind) {
    case ExprKind::SetRef:
      return e.index < names.size() ? names[e.index] : "Psi" + std::to_string(e.index + 1);
    case ExprKind::Adjoint: {
      const auto& c = *e.children[0];
      const bool atomic = c.kind == ExprKind::SetRef;
      return (atomic ? sub(e.children[0]) : "(" + sub(e.children[0]) + ")") + "*";
    }
    case ExprKind::Product: {
      std::string s = "(";
      for (std::size_t i = 0; i < e.children.size(); ++i) s += (i ? " " : "") + sub(e.children[i]);
      return s + ")";
    }
    case ExprKind::HadamardMean: {
      std::string s = "H[";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        s += (i ? ", " : "") + sub(e.children[i]) + "^(" + fmt_num(e.weights[i], precise) + ")";
      }
      return s + "]";
    }
    case ExprKind::PowerN:
      return sub(e.children[0]) + "^" + std::to_string(e.power);
    case ExprKind::RValue:
      return (e.rkind == RKind::GsrJsr ? "r(" : "norm(") + sub(e.children[0]) + ")";
    case ExprKind::ScalarPow:
      return sub(e.children[0]) + "^{" + fmt_num(e.exponent, precise) + "}";
    case ExprKind::ScalarMul: {
      std::string s = "[";
      for (std::size_t i = 0; i < e.children.size(); ++i) s += (i ? " * " : "") + sub(e.children[i]);
      return s + "]";
    }
  }
  return "?";
}

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

void require_set(const ExprPtr& e, const char* where) {
  if (!e || e->is_scalar()) throw InvalidArgument(std::string(where) + ": expected a set-valued operand");
}

void require_scalar(const ExprPtr& e, const char* where) {
  if (!e || !e->is_scalar()) throw InvalidArgument(std::string(where) + ": expected a scalar operand");
}

}  // namespace

std::string Expr::to_string(std::span<const std::string> names) const { return render(*this, names, false); }

namespace ex {

ExprPtr set(std::size_t index) {
  Expr e;
  e.kind = ExprKind::SetRef;
  e.index = index;
  return make(std::move(e));
}

ExprPtr adjoint(ExprPtr c) {
  require_set(c, "adjoint");
  Expr e;
  e.kind = ExprKind::Adjoint;
  e.children = {std::move(c)};
  return make(std::move(e));
}

ExprPtr product(std::vector<ExprPtr> factors) {
  if (factors.empty()) throw InvalidArgument("product: no factors");
  for (const auto& f : factors) require_set(f, "product");
  Expr e;
  e.kind = ExprKind::Product;
  e.children = std::move(factors);
  return make(std::move(e));
}

ExprPtr hmean(std::vector<ExprPtr> children, std::vector<double> weights) {
  if (children.empty() || children.size() != weights.size()) {
    throw InvalidArgument("hmean: need one weight per child");
  }
  for (const auto& c : children) require_set(c, "hmean");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidArgument("hmean: weights must be positive");
  }
  Expr e;
  e.kind = ExprKind::HadamardMean;
  e.children = std::move(children);
  e.weights = std::move(weights);
  return make(std::move(e));
}

ExprPtr hpow(ExprPtr c, double t) { return hmean({std::move(c)}, {t}); }

ExprPtr power(ExprPtr c, std::size_t n) {
  require_set(c, "power");
  if (n == 0) throw InvalidArgument("power: n must be >= 1");
  Expr e;
  e.kind = ExprKind::PowerN;
  e.children = {std::move(c)};
  e.power = n;
  return make(std::move(e));
}

namespace {
ExprPtr rvalue(RKind k, ExprPtr c) {
  require_set(c, "rvalue");
  Expr e;
  e.kind = ExprKind::RValue;
  e.rkind = k;
  e.children = {std::move(c)};
  return make(std::move(e));
}
}  // namespace

ExprPtr r(ExprPtr c) { return rvalue(RKind::GsrJsr, std::move(c)); }
ExprPtr norm(ExprPtr c) { return rvalue(RKind::Norm, std::move(c)); }

ExprPtr pow(ExprPtr c, double p) {
  require_scalar(c, "pow");
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidArgument("pow: exponent must be positive");
  Expr e;
  e.kind = ExprKind::ScalarPow;
  e.children = {std::move(c)};
  e.exponent = p;
  return make(std::move(e));
}

ExprPtr mul(std::vector<ExprPtr> factors) {
  if (factors.empty()) throw InvalidArgument("mul: no factors");
  for (const auto& f : factors) require_scalar(f, "mul");
  Expr e;
  e.kind = ExprKind::ScalarMul;
  e.children = std::move(factors);
  return make(std::move(e));
}

ExprPtr word(const Word& w) {
  std::vector<ExprPtr> f;
  for (const Letter& l : w.letters) {
    if (l.set == 0) throw InvalidArgument("word: set indices are 1-based");
    ExprPtr s = set(l.set - 1);
    f.push_back(l.adjoint ? adjoint(s) : s);
  }
  return product(std::move(f));
}

}  // namespace ex

// ---------------------------------------------------------------------------
// Canonical forms

namespace {

std::string key_of(const ExprPtr& e) { return render(*e, {}, true); }

ExprPtr product_or_single(std::vector<ExprPtr> f) {
  if (f.size() == 1) return f.front();
  Expr e;
  e.kind = ExprKind::Product;
  e.children = std::move(f);
  return make(std::move(e));
}

void append_flat(std::vector<ExprPtr>& out, const ExprPtr& f) {
  if (f->kind == ExprKind::Product) {
    out.insert(out.end(), f->children.begin(), f->children.end());
  } else {
    out.push_back(f);
  }
}

/// Canonical form of the set expression `e`, or of its adjoint when `adj`.
ExprPtr set_nf(const ExprPtr& e, bool adj) {
  switch (e->kind) {
    case ExprKind::SetRef: {
      if (!adj) return e;
      Expr a;
      a.kind = ExprKind::Adjoint;
      a.children = {e};
      return make(std::move(a));
    }
    case ExprKind::Adjoint:
      return set_nf(e->children[0], !adj);
    case ExprKind::Product: {
      std::vector<ExprPtr> f;
      const auto& ch = e->children;
      for (std::size_t i = 0; i < ch.size(); ++i) append_flat(f, set_nf(adj ? ch[ch.size() - 1 - i] : ch[i], adj));
      return product_or_single(std::move(f));
    }
    case ExprKind::PowerN: {
      const ExprPtr base = set_nf(e->children[0], adj);
      std::vector<ExprPtr> f;
      for (std::size_t i = 0; i < e->power; ++i) append_flat(f, base);
      return product_or_single(std::move(f));
    }
    case ExprKind::HadamardMean: {
      std::vector<std::pair<std::string, std::size_t>> order;
      std::vector<ExprPtr> ch;
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        ch.push_back(set_nf(e->children[i], adj));
        order.emplace_back(key_of(ch.back()) + "@" + fmt_num(e->weights[i], true), i);
      }
      std::sort(order.begin(), order.end());
      Expr h;
      h.kind = ExprKind::HadamardMean;
      for (const auto& [k, i] : order) {
        h.children.push_back(ch[i]);
        h.weights.push_back(e->weights[i]);
      }
      return make(std::move(h));
    }
    default:
      throw InvalidArgument("canonical: scalar node below a set operator");
  }
}

ExprPtr min_by_key(const std::vector<ExprPtr>& cands) {
  ExprPtr best;
  std::string best_key;
  for (const auto& c : cands) {
    std::string k = key_of(c);
    if (!best || k < best_key) {
      best = c;
      best_key = std::move(k);
    }
  }
  return best;
}

ExprPtr rvalue_nf(RKind kind, const ExprPtr& arg) {
  const ExprPtr x = set_nf(arg, false);
  std::vector<ExprPtr> cands;
  if (kind == RKind::Norm) {
    cands = {x, set_nf(x, true)};
  } else {
    // r is invariant under cyclic rotation of a product and under adjoints.
    const ExprPtr xa = set_nf(x, true);
    for (const ExprPtr& v : {x, xa}) {
      std::vector<ExprPtr> f;
      append_flat(f, v);
      for (std::size_t s = 0; s < f.size(); ++s) {
        std::vector<ExprPtr> rot(f.begin() + static_cast<std::ptrdiff_t>(s), f.end());
        rot.insert(rot.end(), f.begin(), f.begin() + static_cast<std::ptrdiff_t>(s));
        cands.push_back(product_or_single(std::move(rot)));
      }
    }
  }
  Expr e;
  e.kind = ExprKind::RValue;
  e.rkind = kind;
  e.children = {min_by_key(cands)};
  return make(std::move(e));
}

ExprPtr scalar_nf(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::RValue:
      return rvalue_nf(e->rkind, e->children[0]);
    case ExprKind::ScalarPow: {
      ExprPtr c = scalar_nf(e->children[0]);
      if (e->exponent == 1.0) return c;
      Expr p;
      p.kind = ExprKind::ScalarPow;
      p.exponent = e->exponent;
      p.children = {std::move(c)};
      return make(std::move(p));
    }
    case ExprKind::ScalarMul: {
      std::vector<std::pair<std::string, ExprPtr>> f;
      for (const auto& c : e->children) {
        ExprPtr n = scalar_nf(c);
        if (n->kind == ExprKind::ScalarMul) {
          for (const auto& g : n->children) f.emplace_back(key_of(g), g);
        } else {
          f.emplace_back(key_of(n), n);
        }
      }
      if (f.size() == 1) return f.front().second;
      std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      Expr m;
      m.kind = ExprKind::ScalarMul;
      for (auto& [k, c] : f) m.children.push_back(std::move(c));
      return make(std::move(m));
    }
    default:
      return set_nf(e, false);
  }
}

}  // namespace

ExprPtr canonical(const ExprPtr& e) { return scalar_nf(e); }
std::string canonical_key(const ExprPtr& e) { return key_of(canonical(e)); }

double estimated_cardinality(const ExprPtr& e, std::span<const std::size_t> set_sizes) {
  constexpr double kCap = 1e300;
  switch (e->kind) {
    case ExprKind::SetRef:
      if (e->index >= set_sizes.size()) throw InvalidArgument("estimated_cardinality: set index out of range");
      return static_cast<double>(set_sizes[e->index]);
    case ExprKind::Adjoint:
      return estimated_cardinality(e->children[0], set_sizes);
    case ExprKind::Product:
    case ExprKind::HadamardMean: {
      double c = 1.0;
      for (const auto& ch : e->children) c = std::min(kCap, c * estimated_cardinality(ch, set_sizes));
      return c;
    }
    case ExprKind::PowerN:
      return std::min(kCap, std::pow(estimated_cardinality(e->children[0], set_sizes), static_cast<double>(e->power)));
    default: {
      double c = 0.0;
      for (const auto& ch : e->children) c = std::max(c, estimated_cardinality(ch, set_sizes));
      return c;
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

Bracket bracket_mul(const Bracket& a, const Bracket& b) noexcept {
  Bracket r;
  r.lo = rounding::down(a.lo * b.lo, 1);
  r.hi = rounding::up(a.hi * b.hi, 1);
  r.loose = a.loose || b.loose;
  r.partial = a.partial || b.partial;
  r.depth_used = std::max(a.depth_used, b.depth_used);
  return r;
}

Evaluator::Evaluator(std::vector<OperatorSet> family, EvalOptions opts)
    : family_(std::move(family)), opts_(std::move(opts)) {
  validate(opts_.jsr);
  for (std::size_t i = 1; i < family_.size(); ++i) {
    if (family_[i].dim() != family_[0].dim()) throw DimensionMismatch("Evaluator: sets of different dimension");
  }
}

Bracket Evaluator::scalar(const ExprPtr& e) {
  require_scalar(e, "Evaluator::scalar");
  return scalar_canonical(canonical(e));
}

OperatorSet Evaluator::set(const ExprPtr& e) {
  require_set(e, "Evaluator::set");
  return set_canonical(canonical(e));
}

Bracket Evaluator::scalar_canonical(const ExprPtr& c) {
  const std::string key = key_of(c);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  Bracket out;
  switch (c->kind) {
    case ExprKind::RValue: {
      const OperatorSet s = set_canonical(c->children[0]);
      if (c->rkind == RKind::Norm) {
        out = set_norm(s);
      } else if (opts_.use_oracle) {
        out = brute_force_oracle(s, opts_.oracle_depth);
      } else {
        out = jsr_bracket(s, opts_.jsr);
      }
      break;
    }
    case ExprKind::ScalarPow:
      out = rounding::pow(scalar_canonical(c->children[0]), c->exponent);
      break;
    case ExprKind::ScalarMul:
      out = scalar_canonical(c->children[0]);
      for (std::size_t i = 1; i < c->children.size(); ++i) out = bracket_mul(out, scalar_canonical(c->children[i]));
      break;
    default:
      throw InvalidArgument("Evaluator: set-valued node where a scalar was expected");
  }
  values_.emplace(key, out);
  return out;
}

OperatorSet Evaluator::set_canonical(const ExprPtr& c) {
  if (c->kind == ExprKind::SetRef) {
    if (c->index >= family_.size()) {
      throw InvalidArgument("expression references set " + std::to_string(c->index + 1) + " of " +
                            std::to_string(family_.size()));
    }
    return family_[c->index];
  }
  const std::string key = key_of(c);
  if (auto it = sets_.find(key); it != sets_.end()) return it->second;
  std::optional<OperatorSet> out;
  switch (c->kind) {
    case ExprKind::Adjoint:
      out = adjoint_set(set_canonical(c->children[0]));
      break;
    case ExprKind::Product:
      out = set_canonical(c->children[0]);
      for (std::size_t i = 1; i < c->children.size(); ++i) {
        out = set_product(*out, set_canonical(c->children[i]), opts_.max_members);
      }
      break;
    case ExprKind::HadamardMean: {
      std::vector<OperatorSet> ch;
      for (const auto& x : c->children) ch.push_back(set_canonical(x));
      out = set_hadamard_mean(ch, c->weights, opts_.max_members);
      break;
    }
    default:
      throw InvalidArgument("Evaluator: unexpected node in a canonical set expression");
  }
  sets_.emplace(key, *out);
  return *out;
}

Bracket evaluate_expression(const ExprPtr& e, std::span<const OperatorSet> env, const EvalOptions& opts) {
  Evaluator ev(std::vector<OperatorSet>(env.begin(), env.end()), opts);
  return ev.scalar(e);
}

// ---------------------------------------------------------------------------
// Entries

namespace {

using namespace ex;

ExprPtr S(std::size_t i) { return set(i - 1); }

std::vector<ExprPtr> all_sets(std::size_t m) {
  std::vector<ExprPtr> v;
  for (std::size_t j = 1; j <= m; ++j) v.push_back(S(j));
  return v;
}

std::vector<ExprPtr> words(const std::vector<Word>& ws) {
  std::vector<ExprPtr> v;
  for (const Word& w : ws) v.push_back(word(w));
  return v;
}

ExprPtr hm(std::vector<ExprPtr> ch, double a) {
  std::vector<double> w(ch.size(), a);
  return hmean(std::move(ch), std::move(w));
}

/// Alternating word over the cyclic index run start, start+1, ... (mod m).
Word cyclic_alternating(std::size_t start, std::size_t len, std::size_t m, bool first_adjoint) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < len; ++i) idx.push_back((start - 1 + i) % m + 1);
  return alternating_word(idx, first_adjoint);
}

/// 1 2* 3 ... m 1* 2 ... m* (odd m).
Word long_word(std::size_t m) { return cyclic_alternating(1, 2 * m, m, false); }

double weight_sum(const ChainParams& p) { return std::accumulate(p.weights.begin(), p.weights.end(), 0.0); }

double exponent_of(const Signature& sig, const ChainParams& p) {
  return sig.alpha_fixed ? 1.0 / static_cast<double>(p.m) : p.alpha;
}

Built two_index(const ChainParams& p, bool refinement) {
  const std::size_t m = p.m, k = p.k;
  auto A = [m](std::size_t i, std::size_t j) { return S((i - 1) * m + j); };
  std::vector<ExprPtr> rows, cols;
  for (std::size_t i = 1; i <= k; ++i) {
    std::vector<ExprPtr> r;
    for (std::size_t j = 1; j <= m; ++j) r.push_back(A(i, j));
    rows.push_back(hmean(std::move(r), p.weights));
  }
  for (std::size_t j = 1; j <= m; ++j) {
    std::vector<ExprPtr> c;
    for (std::size_t i = 1; i <= k; ++i) c.push_back(A(i, j));
    cols.push_back(product(std::move(c)));
  }
  const ExprPtr lhs = product(rows);
  const ExprPtr mean = hmean(cols, p.weights);
  auto weighted = [&](ExprPtr (*f)(ExprPtr)) {
    std::vector<ExprPtr> t;
    for (std::size_t j = 0; j < m; ++j) t.push_back(pow(f(cols[j]), p.weights[j]));
    return mul(std::move(t));
  };
  Built b;
  if (!refinement) {
    b.elementwise.push_back({"entrywise", lhs, mean});
    b.chains.push_back({"norm", {norm(lhs), norm(mean), weighted(&ex::norm)}});
    b.chains.push_back({"spectral radius", {r(lhs), r(mean), weighted(&ex::r)}});
  } else {
    std::vector<ExprPtr> powered;
    for (const auto& c : cols) powered.push_back(power(c, p.n));
    b.chains.push_back({"r",
                        {r(lhs), r(mean), pow(r(hmean(std::move(powered), p.weights)), 1.0 / static_cast<double>(p.n)),
                         weighted(&ex::r)}});
  }
  return b;
}

Built single_means(const ChainParams& p) {
  const ExprPtr h = hmean(all_sets(p.m), p.weights);
  std::vector<ExprPtr> nr, rr;
  for (std::size_t j = 1; j <= p.m; ++j) {
    nr.push_back(pow(norm(S(j)), p.weights[j - 1]));
    rr.push_back(pow(r(S(j)), p.weights[j - 1]));
  }
  Built b;
  b.chains.push_back({"norm", {norm(h), mul(std::move(nr))}});
  b.chains.push_back({"spectral radius", {r(h), mul(std::move(rr))}});
  return b;
}

Built hadamard_power_products(const ChainParams& p) {
  std::vector<ExprPtr> powered;
  for (std::size_t j = 1; j <= p.m; ++j) powered.push_back(hpow(S(j), p.t));
  const ExprPtr lhs = product(std::move(powered));
  const ExprPtr prod = product(all_sets(p.m));
  Built b;
  b.elementwise.push_back({"entrywise", lhs, hpow(prod, p.t)});
  b.chains.push_back({"spectral radius", {r(lhs), pow(r(prod), p.t)}});
  b.chains.push_back({"norm", {norm(lhs), pow(norm(prod), p.t)}});
  return b;
}

Built hadamard_power_sets(const ChainParams& p) {
  std::vector<ExprPtr> powered;
  for (std::size_t j = 1; j <= p.m; ++j) powered.push_back(hpow(S(j), p.t));
  const ExprPtr prod = product(all_sets(p.m));
  Built b;
  b.chains.push_back({"r",
                      {r(product(std::move(powered))), r(hpow(prod, p.t)),
                       pow(r(hpow(power(prod, p.n), p.t)), 1.0 / static_cast<double>(p.n)), pow(r(prod), p.t)}});
  return b;
}

Built cyclic_means(const ChainParams& p, int variant) {
  const std::size_t m = p.m;
  std::vector<ExprPtr> sig;
  for (std::size_t i = 1; i <= m; ++i) {
    std::vector<ExprPtr> f;
    for (std::size_t idx : cyclic_sigma_indices(m, i)) f.push_back(S(idx));
    sig.push_back(hmean(std::move(f), p.weights));
  }
  const ExprPtr lhs = r(product(std::move(sig)));
  const ExprPtr prod = product(all_sets(m));
  Built b;
  if (variant == 0) {
    b.chains.push_back({"r", {lhs, r(prod)}});
    return b;
  }
  const auto phi = words(construction_words(ConstructionKind::PhiCyclic, m));
  std::vector<ExprPtr> phin;
  for (const auto& f : phi) phin.push_back(power(f, p.n));
  const ExprPtr last = variant == 1 ? r(prod) : pow(r(prod), weight_sum(p));
  b.chains.push_back({"r",
                      {lhs, r(hmean(phi, p.weights)),
                       pow(r(hmean(std::move(phin), p.weights)), 1.0 / static_cast<double>(p.n)), last}});
  return b;
}

Built lemma_norm(const ChainParams&) {
  Built b;
  b.chains.push_back({"norm", {norm(S(1)), pow(r(product({adjoint(S(1)), S(1)})), 0.5), norm(S(1))}});
  return b;
}

Built alternating_even_fixed(const ChainParams& p) {
  const std::size_t m = p.m;
  const double md = static_cast<double>(m);
  const Word P = cyclic_alternating(1, m, m, true);
  const Word Q = cyclic_alternating(1, m, m, false);
  Built b;
  b.chains.push_back({"norm",
                      {norm(hm(all_sets(m), 1.0 / md)), pow(mul({r(word(P)), r(word(Q))}), 1.0 / (2 * md)),
                       pow(mul({r(word(P)), r(word(adjoint_word(Q)))}), 1.0 / (2 * md))}});
  return b;
}

Built alternating_odd_fixed(const ChainParams& p) {
  const double md = static_cast<double>(p.m);
  Built b;
  b.chains.push_back({"norm", {norm(hm(all_sets(p.m), 1.0 / md)), pow(r(word(long_word(p.m))), 1.0 / (2 * md))}});
  return b;
}

Built alternating_even_alpha(const ChainParams& p) {
  const std::size_t m = p.m;
  const double md = static_cast<double>(m);
  std::vector<ExprPtr> sig;
  for (std::size_t j = 1; j <= m; ++j) sig.push_back(word(cyclic_alternating(j, m, m, true)));
  const Word P = cyclic_alternating(1, m, m, true);
  const Word Qr = adjoint_word(cyclic_alternating(1, m, m, false));
  Built b;
  b.chains.push_back({"norm",
                      {norm(hm(all_sets(m), p.alpha)), pow(r(hm(std::move(sig), p.alpha)), 1.0 / md),
                       pow(mul({r(word(P)), r(word(Qr))}), p.alpha / 2)}});
  return b;
}

Built alternating_odd_alpha(const ChainParams& p) {
  const std::size_t m = p.m;
  const double md = static_cast<double>(m);
  std::vector<ExprPtr> om;
  for (std::size_t j = 1; j <= m; ++j) om.push_back(word(cyclic_alternating(j, 2 * m, m, true)));
  Built b;
  b.chains.push_back({"norm",
                      {norm(hm(all_sets(m), p.alpha)), pow(r(hm(std::move(om), p.alpha)), 1.0 / (2 * md)),
                       pow(r(word(long_word(m))), p.alpha / 2)}});
  return b;
}

/// Shared shape of the pair/rotation refinements: ||H_a|| <= r(pairs)^(1/2)
/// <= r(rotations)^(1/2m) <= r(base)^(a/2).
Built pair_rotation_chain(std::size_t m, double a, std::vector<ExprPtr> pairs, const std::vector<Word>& rotations) {
  const double md = static_cast<double>(m);
  Built b;
  b.chains.push_back({"norm",
                      {norm(hm(all_sets(m), a)), pow(r(hm(std::move(pairs), a)), 0.5),
                       pow(r(hm(words(rotations), a)), 1.0 / (2 * md)), pow(r(word(rotations.front())), a / 2)}});
  return b;
}

Built odd_pairs(const ChainParams& p, const Signature& sig) {
  const Word B = long_word(p.m);
  std::vector<ExprPtr> pairs;
  for (std::size_t i = 0; i < p.m; ++i) pairs.push_back(word(Word{{B.letters[2 * i], B.letters[2 * i + 1]}}));
  return pair_rotation_chain(p.m, exponent_of(sig, p), std::move(pairs),
                             construction_words(ConstructionKind::OmegaOdd, p.m));
}

Built two_set_odd(const ChainParams& p, const Signature& sig) {
  const double a = sig.alpha_fixed ? 1.0 / 3.0 : p.alpha;
  auto w = [](std::initializer_list<Letter> l) { return word(Word{std::vector<Letter>(l)}); };
  constexpr Letter P{1, false}, Ps{1, true}, Q{2, false}, Qs{2, true};
  Built b;
  b.chains.push_back({"norm",
                      {norm(hm({S(1), adjoint(S(2)), S(1)}, a)), pow(r(hm({w({Ps, Qs}), w({Ps, P}), w({Q, P})}, a)), 0.5),
                       pow(r(hm({w({Ps, Qs, Ps, P, Q, P}), w({Ps, P, Q, P, Ps, Qs}), w({Q, P, Ps, Qs, Ps, P})}, a)),
                           1.0 / 6.0),
                       pow(norm(product({S(1), S(2), S(1)})), a)}});
  return b;
}

Permutation perm_or_identity(const std::optional<Permutation>& p, std::size_t m) {
  return p ? *p : Permutation::identity(m);
}

Built sigma_rotations(const ChainParams& p, const Signature& sig) {
  const std::size_t m = p.m;
  const auto sigma = construction_words(ConstructionKind::SigmaEven, m, p.tau);
  return pair_rotation_chain(m, exponent_of(sig, p), words(sigma),
                             construction_words(ConstructionKind::OmegaEven, m, p.tau, p.nu));
}

Built theta_half(const ChainParams& p) {
  const std::size_t m = p.m;
  const double a = p.alpha;
  const auto sigma = construction_words(ConstructionKind::SigmaEven, m, p.tau);
  const auto theta = construction_words(ConstructionKind::ThetaHalf, m, p.tau);
  std::vector<ExprPtr> half = words(sigma);
  half.resize(m / 2);
  Built b;
  b.chains.push_back({"norm",
                      {norm(hm(all_sets(m), a)), pow(r(hm(words(sigma), a)), 0.5), r(hm(std::move(half), a)),
                       pow(r(hm(words(theta), a)), 2.0 / static_cast<double>(m)), pow(r(word(theta.front())), a)}});
  return b;
}

Built tau_nu_pairs(const ChainParams& p, const Signature& sig, bool corollary) {
  const std::size_t m = p.m;
  Permutation tau = perm_or_identity(p.tau, m), nu = perm_or_identity(p.nu, m);
  if (corollary) std::tie(tau, nu) = corollary_permutations(m);
  std::vector<ExprPtr> pairs;
  for (std::size_t j = 1; j <= m; ++j) pairs.push_back(word(Word{{{tau(j), true}, {nu(j), false}}}));
  const double a = exponent_of(sig, p);
  Built b = pair_rotation_chain(m, a, std::move(pairs), construction_words(ConstructionKind::OmegaTauNu, m, tau, nu));
  if (corollary) b.chains.front().terms.push_back(pow(r(word(long_word(m))), a / 2));
  return b;
}

Built hadamard_self(const ChainParams& p) {
  const double a = p.alpha;
  Built b;
  b.chains.push_back({"r",
                      {r(hm({S(1), adjoint(S(1))}, a)), r(hm({S(1), S(1)}, a)), pow(r(S(1)), 2 * a)}});
  return b;
}

Built two_set_pairs(const ChainParams& p) {
  const double a = p.alpha;
  const ExprPtr x = product({adjoint(S(1)), S(2)});
  const ExprPtr y = product({adjoint(S(2)), S(1)});
  Built b;
  b.chains.push_back({"norm",
                      {norm(hm({S(1), S(2)}, a)), pow(r(hm({x, y}, a)), 0.5), pow(r(hm({x, x}, a)), 0.5),
                       pow(r(x), a)}});
  return b;
}

Signature sig_weights(WeightRegime w, bool singletons = false, bool two = false) {
  Signature s;
  s.weights = w;
  s.singletons = singletons;
  s.two_index = two;
  return s;
}

Signature sig_alpha(Parity par, double min_m, bool fixed, bool tau = false, bool nu = false) {
  Signature s;
  s.parity = par;
  s.min_m = par == Parity::Even ? 2 : 1;
  s.alpha_fixed = fixed;
  s.uses_alpha = !fixed;
  s.alpha_min_m = fixed ? 0.0 : min_m;
  s.uses_tau = tau;
  s.uses_nu = nu;
  return s;
}

Signature sig_fixed(std::size_t arity, double alpha_min, bool fixed = false) {
  Signature s;
  s.fixed_arity = arity;
  s.alpha_fixed = fixed;
  s.uses_alpha = !fixed;
  s.alpha_min = fixed ? 0.0 : alpha_min;
  return s;
}

std::vector<CatalogEntry> make_entries() {
  std::vector<CatalogEntry> v;
  auto add = [&v](std::string id, std::string anchor, std::string regime, Signature sig,
                  std::function<Built(const ChainParams&, const Signature&)> f) {
    CatalogEntry e;
    e.id = std::move(id);
    e.anchor = std::move(anchor);
    e.regime = std::move(regime);
    e.sig = sig;
    e.build = [f = std::move(f), sig](const ChainParams& p) { return f(p, sig); };
    v.push_back(std::move(e));
  };
  using P = const ChainParams&;
  using G = const Signature&;

  Signature t11 = sig_weights(WeightRegime::SumAtLeastOne, true, true);
  add("T1.1", "Theorem 1.1: A = prod_i H_j A_ij^(a_j) <= H_j (A_1j...A_kj)^(a_j), norm and rho chains",
      "singletons, sum(a) >= 1", t11, [](P p, G) { return two_index(p, false); });
  add("T1.2i", "Theorem 1.2(i),(ii): ||H_j A_j^(a_j)|| <= prod ||A_j||^a_j, same for rho",
      "singletons, sum(a) >= 1", sig_weights(WeightRegime::SumAtLeastOne, true), [](P p, G) { return single_means(p); });
  Signature t12iii;
  t12iii.uses_t = true;
  t12iii.singletons = true;
  add("T1.2iii", "Theorem 1.2(iii): A_1^(t)...A_m^(t) <= (A_1...A_m)^(t), rho and norm", "singletons, t >= 1",
      t12iii, [](P p, G) { return hadamard_power_products(p); });
  add("T1.3i", "Theorem 1.3: r(prod_i H_j Psi_ij) <= r(H_j (Psi_1j...Psi_kj)) <= ... <= prod r(Psi_1j...Psi_kj)^a_j",
      "sum(a) >= 1", sig_weights(WeightRegime::SumAtLeastOne, false, true), [](P p, G) { return two_index(p, true); });
  Signature t13ii;
  t13ii.uses_t = true;
  add("T1.3ii", "Theorem 1.3: r(Psi_1^(t)...Psi_k^(t)) <= r((Psi_1...Psi_k)^(t)) <= ... <= r(Psi_1...Psi_k)^t",
      "t >= 1", t13ii, [](P p, G) { return hadamard_power_sets(p); });
  add("C2.1", "Corollary 2.1: r(Sigma_1...Sigma_m) <= r(Psi_1...Psi_m)", "sum(a) = 1",
      sig_weights(WeightRegime::SumOne), [](P p, G) { return cyclic_means(p, 0); });
  add("C2.2", "Corollary 2.2: r(Sigma_1...Sigma_m) <= r(H Phi_j) <= r(H Phi_j^n)^(1/n) <= r(Psi_1...Psi_m)",
      "sum(a) = 1", sig_weights(WeightRegime::SumOne), [](P p, G) { return cyclic_means(p, 1); });
  add("C2.3", "Corollary 2.3: as Corollary 2.2 with last term r(Psi_1...Psi_m)^sum(a)", "sum(a) >= 1",
      sig_weights(WeightRegime::SumAtLeastOne), [](P p, G) { return cyclic_means(p, 2); });
  add("L3.1", "Lemma 3.1: ||Psi|| = r(Psi* Psi)^(1/2)", "any set", sig_fixed(1, 0.0, true),
      [](P p, G) { return lemma_norm(p); });
  add("T3.2even", "Theorem 3.2, m even: ||H_(1/m)|| <= (r(1* 2 ... m) r(1 2* ... m*))^(1/2m)", "m even",
      sig_alpha(Parity::Even, 0, true), [](P p, G) { return alternating_even_fixed(p); });
  add("T3.2odd", "Theorem 3.2, m odd: ||H_(1/m)|| <= r(1 2* ... m 1* ... m*)^(1/2m)", "m odd",
      sig_alpha(Parity::Odd, 0, true), [](P p, G) { return alternating_odd_fixed(p); });
  add("T3.3even", "Theorem 3.3, m even: ||H_a|| <= r(Sigma_a)^(1/m) <= (r(P) r(Q))^(a/2)", "m even, alpha >= 1/m",
      sig_alpha(Parity::Even, 1, false), [](P p, G) { return alternating_even_alpha(p); });
  add("T3.3odd", "Theorem 3.3, m odd: ||H_a|| <= r(Omega_a)^(1/2m) <= r(1 2* ... m*)^(a/2)", "m odd, alpha >= 1/m",
      sig_alpha(Parity::Odd, 1, false), [](P p, G) { return alternating_odd_alpha(p); });
  add("T3.5", "Theorem 3.5: ||H_(1/m)|| <= r(H pairs)^(1/2) <= r(H Omega_j)^(1/2m) <= r(1 2* ... m*)^(1/2m)",
      "m odd", sig_alpha(Parity::Odd, 0, true), [](P p, G g) { return odd_pairs(p, g); });
  add("T3.6", "Theorem 3.6: as Theorem 3.5 with exponent alpha, last term r(1 2* ... m*)^(a/2)",
      "m odd, alpha >= 1/m", sig_alpha(Parity::Odd, 1, false), [](P p, G g) { return odd_pairs(p, g); });
  add("C3.7i", "Corollary 3.7(i): ||Psi^(1/3) o Sigma*^(1/3) o Psi^(1/3)|| <= ... <= ||Psi Sigma Psi||^(1/3)",
      "two sets", sig_fixed(2, 0.0, true), [](P p, G g) { return two_set_odd(p, g); });
  add("C3.7ii", "Corollary 3.7(ii): as (i) with exponent alpha, last term ||Psi Sigma Psi||^alpha",
      "two sets, alpha >= 1/3", sig_fixed(2, 1.0 / 3.0), [](P p, G g) { return two_set_odd(p, g); });
  add("T3.8i", "Theorem 3.8(i): ||H_(1/m)|| <= r(H Sigma_j)^(1/2) <= r(H Omega_i)^(1/2m) <= r(Sigma_nu(1)...)^(1/2m)",
      "m even, tau, nu", sig_alpha(Parity::Even, 0, true, true, true), [](P p, G g) { return sigma_rotations(p, g); });
  add("T3.8ii", "Theorem 3.8(ii): as (i) with exponent alpha, last term r(Sigma_nu(1)...Sigma_nu(m))^(a/2)",
      "m even, alpha >= 1/m, tau, nu", sig_alpha(Parity::Even, 1, false, true, true),
      [](P p, G g) { return sigma_rotations(p, g); });
  add("T3.11", "Theorem 3.11: ||H_a|| <= r(H Sigma_j)^(1/2) <= r(H Sigma_1..m/2) <= r(H Theta_i)^(2/m) <= r(...)^a",
      "m even, alpha >= 2/m, tau", sig_alpha(Parity::Even, 2, false, true, false),
      [](P p, G) { return theta_half(p); });
  add("T3.13i", "Theorem 3.13(i): ||H_(1/m)|| <= r(H tau(j)* nu(j))^(1/2) <= r(H Omega_j)^(1/2m) <= r(...)^(1/2m)",
      "tau, nu", sig_alpha(Parity::Any, 0, true, true, true), [](P p, G g) { return tau_nu_pairs(p, g, false); });
  add("T3.13ii", "Theorem 3.13(ii): as (i) with exponent alpha, last term r(tau(1)* nu(1) ... tau(m)* nu(m))^(a/2)",
      "alpha >= 1/m, tau, nu", sig_alpha(Parity::Any, 1, false, true, true),
      [](P p, G g) { return tau_nu_pairs(p, g, false); });
  add("C3.15i", "Corollary 3.15(i): Theorem 3.13(i) with the interleaving permutations, = r(1 2* ... m*)^(1/2m)",
      "m odd", sig_alpha(Parity::Odd, 0, true), [](P p, G g) { return tau_nu_pairs(p, g, true); });
  add("C3.15ii", "Corollary 3.15(ii): as (i) with exponent alpha, = r(1 2* ... m*)^(a/2)", "m odd, alpha >= 1/m",
      sig_alpha(Parity::Odd, 1, false), [](P p, G g) { return tau_nu_pairs(p, g, true); });
  add("L3.16", "Lemma 3.16: r(Psi^(a) o Psi*^(a)) <= r(Psi^(a) o Psi^(a)) <= r(Psi)^(2a)", "alpha >= 1/2",
      sig_fixed(1, 0.5), [](P p, G) { return hadamard_self(p); });
  add("C3.17", "Corollary 3.17: ||Psi^(a) o Sigma^(a)|| <= ... <= r(Psi* Sigma)^a", "two sets, alpha >= 1/2",
      sig_fixed(2, 0.5), [](P p, G) { return two_set_pairs(p); });
  return v;
}

std::string fraction_text(double x) {
  const double inv = 1.0 / x;
  if (std::abs(inv - std::round(inv)) < 1e-9) return "1/" + std::to_string(static_cast<long>(std::round(inv)));
  return fmt_num(x, false);
}

}  // namespace

ChainParams CatalogEntry::resolve(const ChainParams& p, std::size_t family_size) const {
  ChainParams q = p;
  if (sig.fixed_arity) {
    if (q.m == 0) q.m = family_size;
    q.k = 1;
  } else if (sig.two_index) {
    if (q.m == 0) q.m = q.weights.size();
    if (q.m == 0) throw InvalidArgument(id + ": weights are required");
    if (q.k == 0) {
      if (family_size % q.m != 0) {
        throw InvalidArgument(id + ": " + std::to_string(family_size) + " sets do not form k rows of m = " +
                              std::to_string(q.m));
      }
      q.k = family_size / q.m;
    }
  } else {
    if (q.m == 0) q.m = family_size;
    q.k = 1;
  }
  return q;
}

std::size_t CatalogEntry::arity(const ChainParams& q) const {
  if (sig.fixed_arity) return sig.fixed_arity;
  if (sig.two_index) return q.k * q.m;
  return q.m;
}

const std::vector<CatalogEntry>& list_entries() {
  static const std::vector<CatalogEntry> entries = make_entries();
  return entries;
}

const CatalogEntry* find_entry(std::string_view id) {
  for (const auto& e : list_entries()) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

Applicability applicability_check(const CatalogEntry& entry, const ChainParams& q,
                                  std::span<const OperatorSet> family) {
  const Signature& s = entry.sig;
  auto fail = [](std::string reason, bool structural) { return Applicability{false, std::move(reason), structural}; };
  const double md = static_cast<double>(q.m);

  if (q.m < s.min_m) return fail("m must be >= " + std::to_string(s.min_m), true);
  if (s.parity == Parity::Even && q.m % 2 != 0) return fail("m must be even", true);
  if (s.parity == Parity::Odd && q.m % 2 == 0) return fail("m must be odd", true);
  if (s.two_index && q.k == 0) return fail("k must be >= 1", true);
  if (!family.empty() && family.size() != entry.arity(q)) {
    return fail("expected " + std::to_string(entry.arity(q)) + " sets, got " + std::to_string(family.size()), true);
  }
  if (q.n == 0) return fail("n must be >= 1", true);
  if (s.uses_tau && q.tau && q.tau->size() != q.m) return fail("tau must permute 1..m", true);
  if (s.uses_nu && q.nu && q.nu->size() != q.m) return fail("nu must permute 1..m", true);
  if (s.singletons) {
    for (const auto& f : family) {
      if (f.size() != 1) return fail("sets must be singletons", true);
    }
  }
  if (s.weights != WeightRegime::None) {
    if (q.weights.size() != q.m) return fail("expected " + std::to_string(q.m) + " weights", true);
    for (double w : q.weights) {
      if (!(w > 0.0) || !std::isfinite(w)) return fail("weights must be positive", true);
    }
    const double sum = weight_sum(q);
    if (s.weights == WeightRegime::SumOne && std::abs(sum - 1.0) > 1e-12) return fail("weights must sum to 1", false);
    if (s.weights == WeightRegime::SumAtLeastOne && sum < 1.0 - 1e-12) return fail("sum of weights < 1", false);
  }
  if (s.uses_alpha) {
    if (!(q.alpha > 0.0) || !std::isfinite(q.alpha)) return fail("alpha must be positive", true);
    if (s.alpha_min_m > 0.0 && q.alpha < s.alpha_min_m / md - 1e-12) {
      return fail("alpha < " + fmt_num(s.alpha_min_m, false) + "/m", false);
    }
    if (s.alpha_min > 0.0 && q.alpha < s.alpha_min - 1e-12) return fail("alpha < " + fraction_text(s.alpha_min), false);
  }
  if (s.uses_t) {
    if (!(q.t > 0.0) || !std::isfinite(q.t)) return fail("t must be positive", true);
    if (q.t < 1.0) return fail("t < 1", false);
  }
  return {};
}

}  // namespace hjsr
