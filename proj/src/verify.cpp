#include "hjsr/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

namespace hjsr {

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Confirmed:
      return "Confirmed";
    case Status::ViolationCertified:
      return "ViolationCertified";
    case Status::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

namespace {

class Fnv1a {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= c[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      const unsigned char b = static_cast<unsigned char>(v >> (8 * i));
      bytes(&b, 1);
    }
  }
  void f64(double x) { u64(std::bit_cast<std::uint64_t>(x)); }
  void str(std::string_view s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void hash_perm(Fnv1a& h, const std::optional<Permutation>& p) {
  h.u64(p ? p->size() : 0);
  if (p) {
    for (std::size_t x : p->images()) h.u64(x);
  }
}


Verdict evaluate_pass(const CatalogEntry& e, const Built& b, const InstanceSpec& inst, const CheckOptions& opts,
                      std::size_t depth) {
  Verdict v;
  v.entry = e.id;
  v.depth_used = depth;
  EvalOptions eo;
  eo.jsr = opts.jsr;
  eo.jsr.max_depth = depth;
  eo.max_members = opts.max_members;
  eo.use_oracle = opts.use_oracle;
  eo.oracle_depth = opts.oracle_depth;
  Evaluator ev(inst.sets, eo);
  std::vector<std::string> names;
  for (const auto& s : inst.sets) names.push_back(s.name());

  bool inconclusive = false, violated = false;
  try {
    for (std::size_t ci = 0; ci < b.chains.size(); ++ci) {
      const Chain& c = b.chains[ci];
      ChainResult cr;
      cr.label = c.label;
      std::vector<std::string> keys;
      for (const auto& t : c.terms) {
        const Bracket val = ev.scalar(t);
        v.partial = v.partial || val.partial;
        cr.terms.push_back({t->to_string(names), val});
        keys.push_back(canonical_key(t));
      }
      for (std::size_t i = 0; i + 1 < c.terms.size(); ++i) {
        const Bracket& a = cr.terms[i].value;
        const Bracket& n = cr.terms[i + 1].value;
        PairMargin pm;
        pm.chain = ci;
        pm.position = i;
        pm.gap = n.lo - a.hi;
        pm.excess = a.lo - n.hi;
        pm.identical = keys[i] == keys[i + 1];
        if (pm.identical || a.hi <= n.lo + opts.tol) {
          pm.status = Status::Confirmed;
        } else if (a.lo > n.hi + opts.tol) {
          pm.status = Status::ViolationCertified;
          violated = true;
        } else {
          pm.status = Status::Inconclusive;
          inconclusive = true;
        }
        v.margins.push_back(pm);
      }
      v.chains.push_back(std::move(cr));
    }
    for (const auto& w : b.elementwise) {
      const OperatorSet l = ev.set(w.lhs), r = ev.set(w.rhs);
      if (l.size() != 1 || r.size() != 1) throw InvalidArgument("entrywise claims need singleton sets");
      const NonNegMatrix& lm = l.mats()[0];
      const NonNegMatrix& rm = r.mats()[0];
      ElementwiseResult er;
      er.label = w.label;
      er.slack = 1e-12 * std::max(1.0, rm.max_entry());
      er.max_excess = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < lm.entries().size(); ++i) {
        er.max_excess = std::max(er.max_excess, lm.entries()[i] - rm.entries()[i]);
      }
      er.holds = pointwise_leq(lm, rm, er.slack);
      violated = violated || !er.holds;
      v.elementwise.push_back(er);
    }
  } catch (const BudgetExceeded& ex) {
    v.note = ex.what();
    v.status = Status::Inconclusive;
    return v;
  }
  v.status = violated ? Status::ViolationCertified : (inconclusive ? Status::Inconclusive : Status::Confirmed);
  return v;
}

}  // namespace

std::string instance_digest(const InstanceSpec& inst) {
  Fnv1a h;
  h.u64(inst.dimension);
  h.u64(inst.sets.size());
  for (const auto& s : inst.sets) {
    h.str(s.name());
    h.u64(s.size());
    for (const auto& m : s.mats()) {
      h.u64(m.dim());
      for (double x : m.entries()) h.f64(x);
    }
  }
  const ChainParams& p = inst.params;
  h.u64(p.m);
  h.u64(p.k);
  h.u64(p.weights.size());
  for (double w : p.weights) h.f64(w);
  h.f64(p.alpha);
  h.f64(p.t);
  h.u64(p.n);
  hash_perm(h, p.tau);
  hash_perm(h, p.nu);
  h.u64(inst.depth.value_or(0));
  return hex64(h.value());
}

Verdict check_instance(std::string_view entry_id, const InstanceSpec& inst, const CheckOptions& opts) {
  const CatalogEntry* e = find_entry(entry_id);
  if (!e) throw InvalidArgument("unknown entry id: " + std::string(entry_id));
  if (inst.sets.empty()) throw InvalidArgument("instance has no sets");
  for (const auto& s : inst.sets) {
    if (inst.dimension != 0 && s.dim() != inst.dimension) {
      throw InvalidArgument("set " + s.name() + " has dimension " + std::to_string(s.dim()) + ", instance declares " +
                            std::to_string(inst.dimension));
    }
  }
  validate(opts.jsr);
  if (!(opts.tol > 0.0)) throw InvalidArgument("tol must be > 0");
  const ChainParams q = e->resolve(inst.params, inst.sets.size());
  if (inst.sets.size() != e->arity(q)) {
    throw InvalidArgument("arity mismatch: " + e->id + " expects " + std::to_string(e->arity(q)) + " sets, got " +
                          std::to_string(inst.sets.size()));
  }
  const Applicability app = applicability_check(*e, q, inst.sets);
  if (!app.ok && (app.structural || !opts.allow_out_of_regime)) {
    throw InvalidArgument(e->id + " is not applicable: " + app.reason);
  }
  const Built b = e->build(q);
  const std::size_t full = inst.depth.value_or(opts.jsr.max_depth);
  if (full == 0) throw InvalidArgument("depth must be >= 1");
  std::vector<std::size_t> depths;
  if (opts.retry && full >= 2) depths.push_back(full / 2);
  depths.push_back(full);

  Verdict v;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    v = evaluate_pass(*e, b, inst, opts, depths[i]);
    v.retried = i > 0;
    if (v.status != Status::Inconclusive) break;
  }
  v.in_regime = app.ok;
  v.regime_note = app.reason;
  v.digest = instance_digest(inst);
  return v;
}

// ---------------------------------------------------------------------------
// Published examples

namespace {

const NonNegMatrix kT0 = NonNegMatrix::from_rows({{0, 0}, {1, 1}});
const NonNegMatrix kLower = NonNegMatrix::from_rows({{1, 0}, {1, 1}});
const NonNegMatrix kSym = NonNegMatrix::from_rows({{0, 1}, {1, 1}});

InstanceSpec singletons(const std::vector<NonNegMatrix>& mats) {
  InstanceSpec s;
  s.dimension = mats.front().dim();
  for (std::size_t i = 0; i < mats.size(); ++i) s.sets.emplace_back("Psi" + std::to_string(i + 1), std::vector{mats[i]});
  s.params.m = mats.size();
  return s;
}

/// Spectral radius of a word in 2x2 singleton sets by direct multiplication
/// in extended precision and the closed-form eigenvalue; independent of the
/// engines, used where a printed number is cross-checked.
double direct_word_radius(const InstanceSpec& inst, const Word& w) {
  using M = std::array<long double, 4>;
  M acc{1, 0, 0, 1};
  for (const Letter& l : w.letters) {
    const NonNegMatrix& a = inst.sets.at(l.set - 1).mats()[0];
    if (a.dim() != 2) throw InvalidArgument("direct_word_radius: 2x2 only");
    M f{a(0, 0), a(0, 1), a(1, 0), a(1, 1)};
    if (l.adjoint) std::swap(f[1], f[2]);
    acc = M{acc[0] * f[0] + acc[1] * f[2], acc[0] * f[1] + acc[1] * f[3], acc[2] * f[0] + acc[3] * f[2],
            acc[2] * f[1] + acc[3] * f[3]};
  }
  const long double tr = acc[0] + acc[3], det = acc[0] * acc[3] - acc[1] * acc[2];
  return static_cast<double>((tr + std::sqrt(std::max(0.0L, tr * tr - 4 * det))) / 2);
}

PaperExample make_example(std::string_view id) {
  using namespace ex;
  PaperExample p;
  p.id = std::string(id);
  const double sqrt2 = std::sqrt(2.0);
  if (id == "2.4") {
    p.entry = "C2.3";
    p.description = "three copies of {ones(2)}, every weight equal to t; the chain needs sum of weights = 3t >= 1";
    p.base = singletons({NonNegMatrix::ones(2), NonNegMatrix::ones(2), NonNegMatrix::ones(2)});
    p.sweeps_t = true;
    p.threshold = 1.0 / 3.0;
    p.threshold_text = "fails for t < 1/m";
    p.value_in = 0.4;
    p.value_out = 0.2;
    p.rhs_base = r(product({set(0), set(1), set(2)}));
    p.expectations = {{"lhs", "r(Sigma_1 Sigma_2 Sigma_3) = 2^m", 8.0, "printed", true},
                      {"rhs_base", "r(Psi_1 Psi_2 Psi_3) = 2^m", 8.0, "printed", true}};
  } else if (id == "3.4") {
    p.entry = "T3.3odd";
    p.description = "three copies of {T0}, T0 = [[0,0],[1,1]]";
    p.base = singletons({kT0, kT0, kT0});
    p.threshold = 1.0 / 3.0;
    p.threshold_text = "fails for alpha < 1/3";
    p.value_in = 0.4;
    p.value_out = 0.3;
    p.rhs_base = r(word(Word{{{1, false}, {2, true}, {3, false}, {1, true}, {2, false}, {3, true}}}));
    p.expectations = {{"lhs", "||T1|| = sqrt(2)", sqrt2, "printed", true},
                      {"rhs_base", "r(Psi_1 Psi_2* Psi_3 Psi_1* Psi_2 Psi_3*) = 8", 8.0, "printed", true}};
  } else if (id == "3.10") {
    p.entry = "T3.8ii";
    p.description = "four copies of {T0}, tau identity, nu = (1,2,4,3)";
    p.base = singletons({kT0, kT0, kT0, kT0});
    p.base.params.tau = Permutation::identity(4);
    p.base.params.nu = Permutation({1, 2, 4, 3});
    p.threshold = 0.25;
    p.threshold_text = "fails for alpha < 1/4";
    p.value_in = 0.3;
    p.value_out = 0.2;
    p.rhs_base = r(word(construction_words(ConstructionKind::OmegaEven, 4, p.base.params.tau, p.base.params.nu)[0]));
    p.expectations = {{"lhs", "||Psi_1^(a) o ... o Psi_4^(a)|| = sqrt(2)", sqrt2, "printed", true},
                      {"rhs_base", "r(Sigma_nu(1) ... Sigma_nu(4)) = 16, printed as r^(a/2) = 4^a", 16.0, "printed",
                       true}};
  } else if (id == "3.12") {
    p.entry = "T3.11";
    p.description = "Psi_1 = Psi_4 = {T0}, Psi_2 = {[[1,0],[1,1]]}, Psi_3 = {[[0,1],[1,1]]}, tau identity";
    p.base = singletons({kT0, kLower, kSym, kT0});
    p.base.params.tau = Permutation::identity(4);
    p.threshold = 0.5 * std::log(2.0) / std::log(3.0);
    p.threshold_text = "printed: fails for alpha < (1/2) log_3 2";
    p.value_in = 0.5;
    p.value_out = 0.2;
    const Word w{{{1, true}, {2, false}, {3, true}, {4, false}}};
    p.rhs_base = r(word(w));
    p.expectations = {{"lhs", "||Psi_1^(a) o ... o Psi_4^(a)|| = sqrt(2)", sqrt2, "printed", true},
                      {"rhs_base", "r(Psi_1* Psi_2 Psi_3* Psi_4), printed value", 3.0, "printed", false},
                      {"rhs_base", "r(Psi_1* Psi_2 Psi_3* Psi_4), direct multiplication of the printed matrices",
                       direct_word_radius(p.base, w), "oracle", true}};
  } else if (id == "3.14") {
    p.entry = "T3.13ii";
    p.description = "matrices of Example 3.12, tau = (4,3,2,1), nu = (2,1,4,3)";
    p.base = singletons({kT0, kLower, kSym, kT0});
    p.base.params.tau = Permutation({4, 3, 2, 1});
    p.base.params.nu = Permutation({2, 1, 4, 3});
    p.threshold = 0.25;
    p.threshold_text = "fails for alpha < 1/4";
    p.value_in = 0.3;
    p.value_out = 0.2;
    const Word w = construction_words(ConstructionKind::OmegaTauNu, 4, p.base.params.tau, p.base.params.nu)[0];
    p.rhs_base = r(word(w));
    p.expectations = {{"lhs", "||Psi_1^(a) o ... o Psi_4^(a)|| = sqrt(2)", sqrt2, "printed", true},
                      {"rhs_base", "r(Psi_tau(1)* Psi_nu(1) ... Psi_tau(4)* Psi_nu(4)) = 16, printed as 4^a", 16.0,
                       "printed", true},
                      {"rhs_base", "same value, direct multiplication of the printed matrices",
                       direct_word_radius(p.base, w), "oracle", true}};
  } else {
    throw InvalidArgument("unknown example id: " + std::string(id));
  }
  return p;
}

}  // namespace

InstanceSpec PaperExample::at(double value) const {
  InstanceSpec s = base;
  if (sweeps_t) {
    s.params.weights.assign(s.sets.size(), value);
  } else {
    s.params.alpha = value;
  }
  return s;
}

const std::vector<std::string>& paper_example_ids() {
  static const std::vector<std::string> ids{"2.4", "3.4", "3.10", "3.12", "3.14"};
  return ids;
}

PaperExample paper_example(std::string_view id) { return make_example(id); }

ExampleOutcome run_example(const PaperExample& ex, const CheckOptions& opts) {
  ExampleOutcome out;
  out.id = ex.id;
  CheckOptions in_opts = opts;
  in_opts.allow_out_of_regime = false;
  CheckOptions out_opts = opts;
  out_opts.allow_out_of_regime = true;
  out.in_regime = check_instance(ex.entry, ex.at(ex.value_in), in_opts);
  out.out_of_regime = check_instance(ex.entry, ex.at(ex.value_out), out_opts);
  out.lhs = out.out_of_regime.chains.front().terms.front().value;
  EvalOptions eo;
  eo.jsr = opts.jsr;
  Evaluator ev(ex.base.sets, eo);
  out.rhs_base = ev.scalar(ex.rhs_base);
  out.ok = out.in_regime.status == Status::Confirmed && out.out_of_regime.status == Status::ViolationCertified;
  for (const auto& e : ex.expectations) {
    ExpectationCheck c;
    c.expected = e;
    c.computed = e.quantity == "lhs" ? out.lhs : out.rhs_base;
    c.met = c.computed.lo >= e.value - 1e-9 && c.computed.hi <= e.value + 1e-9;
    if (e.asserted && !c.met) out.ok = false;
    out.checks.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fuzzing

void validate(const GenParams& g) {
  if (g.dim_min < 1 || g.dim_max > 5 || g.dim_min > g.dim_max) throw InvalidArgument("dimension range must lie in [1,5]");
  if (g.size_min < 1 || g.size_max > 4 || g.size_min > g.size_max) throw InvalidArgument("set-size range must lie in [1,4]");
  if (!(g.sparsity >= 0.0 && g.sparsity < 1.0)) throw InvalidArgument("sparsity must lie in [0,1)");
  if (!(g.max_cardinality >= 1.0)) throw InvalidArgument("max_cardinality must be >= 1");
}

namespace {

/// Platform-independent draws on top of mt19937_64 (the standard distributions
/// are implementation-defined).
class Draw {
 public:
  Draw(std::uint64_t seed, std::string_view entry, std::size_t index) {
    Fnv1a h;
    h.str(entry);
    const std::uint64_t e = h.value();
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(e), static_cast<std::uint32_t>(e >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(std::uint64_t{index} >> 32)};
    rng_.seed(seq);
  }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }
  double exponential() { return -std::log1p(-uniform()); }
  /// Uniform integer in [lo, hi].
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return lo + std::min(hi - lo, static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1)));
  }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[integer(0, v.size() - 1)];
  }
  Permutation permutation(std::size_t m) {
    std::vector<std::size_t> img(m);
    for (std::size_t i = 0; i < m; ++i) img[i] = i + 1;
    for (std::size_t i = m; i > 1; --i) std::swap(img[i - 1], img[integer(0, i - 1)]);
    return Permutation(std::move(img));
  }

 private:
  std::mt19937_64 rng_;
};

void collect_sets(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (!e->is_scalar()) out.push_back(e);
  for (const auto& c : e->children) collect_sets(c, out);
}

double max_cardinality(const Built& b, const std::vector<std::size_t>& sizes) {
  std::vector<ExprPtr> nodes;
  for (const auto& c : b.chains) {
    for (const auto& t : c.terms) collect_sets(t, nodes);
  }
  for (const auto& w : b.elementwise) {
    collect_sets(w.lhs, nodes);
    collect_sets(w.rhs, nodes);
  }
  double mx = 1.0;
  for (const auto& n : nodes) mx = std::max(mx, estimated_cardinality(n, sizes));
  return mx;
}

}  // namespace

InstanceSpec generate_instance(const CatalogEntry& entry, std::uint64_t seed, std::size_t index, const GenParams& gen) {
  validate(gen);
  Draw d(seed, entry.id, index);
  const Signature& s = entry.sig;
  ChainParams p;
  if (s.fixed_arity) {
    p.m = s.fixed_arity;
  } else if (s.two_index) {
    p.m = d.pick(std::vector<std::size_t>{2, 3});
    p.k = d.pick(std::vector<std::size_t>{1, 2, 3});
  } else if (s.parity == Parity::Even) {
    p.m = d.pick(std::vector<std::size_t>{2, 4});
  } else if (s.parity == Parity::Odd) {
    p.m = d.pick(std::vector<std::size_t>{3, 5});
  } else {
    p.m = d.pick(std::vector<std::size_t>{2, 3, 4});
  }
  const double md = static_cast<double>(p.m);
  if (s.weights != WeightRegime::None) {
    double sum = 0.0;
    for (std::size_t j = 0; j < p.m; ++j) {
      p.weights.push_back(std::max(d.exponential(), 1e-3));
      sum += p.weights.back();
    }
    const double scale = s.weights == WeightRegime::SumOne ? 1.0 : 1.0 + d.uniform();
    for (double& w : p.weights) w = w / sum * scale;
    if (s.weights == WeightRegime::SumOne) {
      // Put the rounding residue on the last weight so the sum is 1 exactly
      // up to one more rounding.
      double rest = 1.0;
      for (std::size_t j = 0; j + 1 < p.m; ++j) rest -= p.weights[j];
      p.weights.back() = rest;
    }
  }
  if (s.uses_alpha) {
    const double lower = std::max(s.alpha_min_m / md, s.alpha_min);
    p.alpha = lower * (1.0 + d.uniform());
  }
  if (s.uses_t) p.t = 1.0 + d.uniform();
  if (s.uses_tau) p.tau = d.permutation(p.m);
  if (s.uses_nu) p.nu = d.permutation(p.m);

  const std::size_t arity = entry.arity(p);
  std::vector<std::size_t> sizes(arity, 1);
  if (!s.singletons) {
    for (auto& z : sizes) z = d.integer(gen.size_min, gen.size_max);
  }
  const Built b = entry.build(p);
  while (max_cardinality(b, sizes) > gen.max_cardinality) {
    auto it = std::max_element(sizes.begin(), sizes.end());
    if (*it == 1) break;
    --*it;
  }

  InstanceSpec inst;
  inst.dimension = d.integer(gen.dim_min, gen.dim_max);
  inst.params = p;
  const std::size_t n = inst.dimension;
  for (std::size_t i = 0; i < arity; ++i) {
    std::vector<NonNegMatrix> mats;
    for (std::size_t k = 0; k < sizes[i]; ++k) {
      std::vector<double> e(n * n);
      for (double& x : e) {
        const double zero = d.uniform();
        const double v = d.uniform();
        x = zero < gen.sparsity ? 0.0 : v;
      }
      mats.emplace_back(n, std::move(e));
    }
    inst.sets.emplace_back("Psi" + std::to_string(i + 1), std::move(mats));
  }
  return inst;
}

std::size_t FuzzReport::total_violations() const {
  std::size_t t = 0;
  for (const auto& e : entries) t += e.violations.size();
  return t;
}

std::size_t FuzzReport::total_inconclusive() const {
  std::size_t t = 0;
  for (const auto& e : entries) t += e.inconclusive;
  return t;
}

FuzzReport fuzz_campaign(const std::vector<std::string>& entry_ids, std::size_t count, std::uint64_t seed,
                         const GenParams& gen, const CheckOptions& opts, unsigned threads) {
  validate(gen);
  validate(opts.jsr);
  if (count == 0) throw InvalidArgument("count must be >= 1");
  std::vector<const CatalogEntry*> entries;
  for (const auto& id : entry_ids) {
    const CatalogEntry* e = find_entry(id);
    if (!e) throw InvalidArgument("unknown entry id: " + id);
    entries.push_back(e);
  }

  struct Job {
    Status status = Status::Inconclusive;
    CaseRecord record;
    double ms = 0.0;
  };
  std::vector<Job> jobs(entries.size() * count);
  std::atomic<std::size_t> next{0};
  CheckOptions in_regime = opts;
  in_regime.allow_out_of_regime = false;

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const CatalogEntry& e = *entries[j / count];
      const std::size_t index = j % count;
      const auto t0 = std::chrono::steady_clock::now();
      const InstanceSpec inst = generate_instance(e, seed, index, gen);
      Job& job = jobs[j];
      job.record.index = index;
      job.record.digest = instance_digest(inst);
      job.record.params = e.resolve(inst.params, inst.sets.size());
      job.record.dimension = inst.dimension;
      for (const auto& s : inst.sets) job.record.set_sizes.push_back(s.size());
      const Verdict v = check_instance(e.id, inst, in_regime);
      job.status = v.status;
      if (v.status != Status::Confirmed) {
        job.record.margins = v.margins;
        job.record.elementwise = v.elementwise;
      }
      job.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  unsigned nt = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  FuzzReport rep;
  rep.seed = seed;
  rep.count = count;
  rep.gen = gen;
  rep.opts = opts;
  for (std::size_t ei = 0; ei < entries.size(); ++ei) {
    EntryReport er;
    er.entry = entries[ei]->id;
    er.count = count;
    for (std::size_t i = 0; i < count; ++i) {
      Job& job = jobs[ei * count + i];
      er.runtime_ms += job.ms;
      switch (job.status) {
        case Status::Confirmed:
          ++er.confirmed;
          break;
        case Status::Inconclusive:
          ++er.inconclusive;
          er.inconclusive_cases.push_back(std::move(job.record));
          break;
        case Status::ViolationCertified:
          er.violations.push_back(std::move(job.record));
          break;
      }
    }
    rep.entries.push_back(std::move(er));
  }
  return rep;
}

}  // namespace hjsr
