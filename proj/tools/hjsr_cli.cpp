// hjsr: command-line front end.
// Exit codes: 0 all Confirmed, 1 some Inconclusive (for `examples`: an unmet
// expectation), 2 some ViolationCertified, 3 input or configuration error.

#include "hjsr/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace hjsr;

namespace {

constexpr int kOk = 0, kInconclusive = 1, kViolation = 2, kInputError = 3;

int exit_code(Status s) {
  switch (s) {
    case Status::Confirmed: return kOk;
    case Status::Inconclusive: return kInconclusive;
    case Status::ViolationCertified: return kViolation;
  }
  return kInputError;
}

/// "2..4" or "3".
std::pair<std::size_t, std::size_t> parse_range(const std::string& s, const char* flag) {
  const auto dots = s.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const unsigned long v = std::stoul(s, &used);
      if (used == s.size()) return {v, v};
    } else {
      const unsigned long a = std::stoul(s.substr(0, dots), &used);
      if (used == dots) {
        const std::string rest = s.substr(dots + 2);
        const unsigned long b = std::stoul(rest, &used);
        if (used == rest.size()) return {a, b};
      }
    }
  } catch (const std::exception&) {
  }
  throw InvalidArgument(std::string(flag) + ": expected a range like 2..4, got '" + s + "'");
}

std::vector<std::string> split_ids(const std::string& s) {
  if (s == "all") {
    std::vector<std::string> ids;
    for (const auto& e : list_entries()) ids.push_back(e.id);
    return ids;
  }
  std::vector<std::string> ids;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string id = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (id.empty()) throw InvalidArgument("--entries: empty id in '" + s + "'");
    if (!find_entry(id)) throw InvalidArgument("unknown entry id: " + id);
    ids.push_back(id);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return ids;
}

std::string fmt(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string fmt_bracket(const Bracket& b, int digits = 12) {
  return "[" + fmt(b.lo, digits) + ", " + fmt(b.hi, digits) + "]";
}

struct EngineFlags {
  std::optional<std::size_t> depth;
  double tol = CheckOptions{}.tol;
  double target_width = JsrConfig{}.target_width;
  std::size_t budget = JsrConfig{}.budget_products;
  std::string norm = "l2";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--depth", depth, "maximum product length (default 10)")->check(CLI::PositiveNumber);
    cmd->add_option("--tol", tol, "absolute slack on bracket comparisons")->capture_default_str();
    cmd->add_option("--target-width", target_width, "relative bracket width at which engines stop")
        ->capture_default_str();
    cmd->add_option("--budget", budget, "cap on matrix products per engine call")->capture_default_str();
    cmd->add_option("--norm", norm, "norm of the upper-bound search")
        ->check(CLI::IsMember({"l2", "l1", "linf"}))
        ->capture_default_str();
  }

  CheckOptions options() const {
    CheckOptions o;
    if (!(tol > 0.0)) throw InvalidArgument("--tol must be > 0");
    o.tol = tol;
    if (depth) o.jsr.max_depth = *depth;
    o.jsr.target_width = target_width;
    o.jsr.budget_products = budget;
    o.jsr.norm = norm == "l1" ? NormKind::L1 : (norm == "linf" ? NormKind::Linf : NormKind::L2);
    validate(o.jsr);
    return o;
  }
};

void emit(const std::string& out, const Json& j) {
  if (!out.empty()) write_json(out, j);
}

void print_verdict(const Verdict& v) {
  std::cout << v.entry << ": " << to_string(v.status) << (v.in_regime ? " (in regime" : " (out of regime: ")
            << (v.in_regime ? "" : v.regime_note) << ", depth " << v.depth_used << (v.retried ? ", retried" : "")
            << (v.partial ? ", partial" : "") << ")\n";
  for (std::size_t c = 0; c < v.chains.size(); ++c) {
    std::cout << "  " << v.chains[c].label << "\n";
    for (const auto& t : v.chains[c].terms) std::cout << "    " << fmt_bracket(t.value) << "  " << t.expr << "\n";
  }
  for (const auto& m : v.margins) {
    if (m.status == Status::Confirmed) continue;
    std::cout << "  chain " << m.chain << " pair " << m.position << ": " << to_string(m.status)
              << " (excess " << fmt(m.excess, 6) << ")\n";
  }
  for (const auto& e : v.elementwise) {
    std::cout << "  entrywise " << e.label << ": " << (e.holds ? "holds" : "fails") << " (max excess "
              << fmt(e.max_excess, 6) << ")\n";
  }
  if (!v.note.empty()) std::cout << "  note: " << v.note << "\n";
  std::cout << "  digest " << v.digest << "\n";
}

int run_check(const std::string& entry, const std::string& instance, const EngineFlags& flags, bool allow,
              const std::string& out) {
  CheckOptions opts = flags.options();
  opts.allow_out_of_regime = allow;
  InstanceSpec inst = load_instance(instance);
  if (flags.depth) inst.depth = flags.depth;
  const Verdict v = check_instance(entry, inst, opts);
  Json j = verdict_to_json(v, opts, inst.params);
  j["command"] = "check";
  emit(out, j);
  print_verdict(v);
  return exit_code(v.status);
}

int run_fuzz(const std::string& entries, std::size_t count, std::uint64_t seed, const std::string& dim,
             const std::string& size, double sparsity, unsigned threads, bool timing, const EngineFlags& flags,
             const std::string& out) {
  if (count == 0) throw InvalidArgument("--count must be >= 1");
  GenParams gen;
  std::tie(gen.dim_min, gen.dim_max) = parse_range(dim, "--dim");
  std::tie(gen.size_min, gen.size_max) = parse_range(size, "--set-size");
  gen.sparsity = sparsity;
  validate(gen);
  const CheckOptions opts = flags.options();
  const FuzzReport r = fuzz_campaign(split_ids(entries), count, seed, gen, opts, threads);
  Json j = fuzz_report_to_json(r, timing);
  j["command"] = "fuzz";
  emit(out, j);
  for (const auto& e : r.entries) {
    std::cout << e.entry << ": " << e.confirmed << " confirmed, " << e.inconclusive << " inconclusive, "
              << e.violations.size() << " violations";
    if (timing) std::cout << " (" << fmt(e.runtime_ms, 6) << " ms)";
    std::cout << "\n";
    for (const auto& c : e.violations) {
      std::cout << "  VIOLATION seed " << seed << " index " << c.index << " digest " << c.digest << "\n";
    }
  }
  std::cout << "total: " << r.total_violations() << " violations, " << r.total_inconclusive() << " inconclusive\n";
  if (r.total_violations() > 0) return kViolation;
  return r.total_inconclusive() > 0 ? kInconclusive : kOk;
}

int run_examples(const std::vector<std::string>& ids_in, const std::string& out) {
  const std::vector<std::string> ids = ids_in.empty() ? paper_example_ids() : ids_in;
  std::vector<PaperExample> examples;
  for (const auto& id : ids) examples.push_back(paper_example(id));
  Json all = Json::array();
  bool ok = true;
  for (const auto& ex : examples) {
    const ExampleOutcome o = run_example(ex);
    all.push_back(example_to_json(ex, o));
    ok = ok && o.ok;
    const char* param = ex.sweeps_t ? "t" : "alpha";
    std::cout << "Example " << ex.id << " (" << ex.entry << "): " << ex.description << "\n";
    for (const auto& c : o.checks) {
      std::cout << "  [" << c.expected.provenance << "] " << c.expected.name << ": expected " << fmt(c.expected.value)
                << ", computed " << fmt_bracket(c.computed) << (c.met ? "  met" : "  not met")
                << (c.expected.asserted ? "" : " (recorded, not asserted)") << "\n";
    }
    auto side = [&](const Verdict& v, double value) {
      const auto& terms = v.chains.back().terms;
      std::cout << "  " << param << " = " << fmt(value) << ": first term " << fmt_bracket(terms.front().value, 10)
                << " vs last term " << fmt_bracket(terms.back().value, 10) << " -> " << to_string(v.status) << "\n";
    };
    std::cout << "  threshold: " << ex.threshold_text << "\n";
    side(o.in_regime, ex.value_in);
    side(o.out_of_regime, ex.value_out);
    std::cout << "  " << (o.ok ? "ok" : "FAILED") << "\n";
  }
  emit(out, Json{{"schema", kSchemaVersion}, {"command", "examples"}, {"examples", all}, {"ok", ok}});
  return ok ? kOk : kInconclusive;
}

int run_jsr(const std::string& instance, const EngineFlags& flags, std::size_t oracle_depth, const std::string& out) {
  const CheckOptions opts = flags.options();
  const InstanceSpec inst = load_instance(instance);
  Json sets = Json::array();
  for (const auto& s : inst.sets) {
    JsrConfig cfg = opts.jsr;
    if (inst.depth && !flags.depth) cfg.max_depth = *inst.depth;
    const Bracket b = jsr_bracket(s, cfg);
    const Bracket n = set_norm(s);
    Json js{{"name", s.name()}, {"size", s.size()}, {"jsr", bracket_to_json(b)}, {"norm", bracket_to_json(n)}};
    std::cout << s.name() << " (" << s.size() << " members): rho in " << fmt_bracket(b) << ", norm in "
              << fmt_bracket(n) << (b.partial ? " (partial)" : "") << "\n";
    if (oracle_depth > 0) {
      const Bracket o = brute_force_oracle(s, oracle_depth);
      js["oracle"] = bracket_to_json(o);
      std::cout << "  exhaustive depth " << oracle_depth << ": " << fmt_bracket(o) << "\n";
    }
    sets.push_back(std::move(js));
  }
  emit(out, Json{{"schema", kSchemaVersion}, {"command", "jsr"}, {"config", options_to_json(opts)}, {"sets", sets}});
  return kOk;
}

std::string arity_text(const CatalogEntry& e) {
  if (e.sig.fixed_arity) return std::to_string(e.sig.fixed_arity);
  return e.sig.two_index ? "k*m" : "m";
}

int run_catalog_list(const std::string& out) {
  Json arr = Json::array();
  for (const auto& e : list_entries()) {
    std::cout << e.id << "\t" << e.anchor << "\tarity " << arity_text(e) << "\t" << e.regime << "\n";
    arr.push_back({{"id", e.id}, {"anchor", e.anchor}, {"arity", arity_text(e)}, {"regime", e.regime}});
  }
  emit(out, Json{{"schema", kSchemaVersion}, {"command", "catalog list"}, {"entries", arr}});
  return kOk;
}

int run_gen_kernel(const std::vector<std::string>& kinds, std::vector<double> cs, std::size_t n,
                   const std::string& out) {
  if (cs.size() == 1 && kinds.size() > 1) cs.assign(kinds.size(), cs.front());
  if (cs.size() != kinds.size()) throw InvalidArgument("--c: give one value, or one per --kind");
  InstanceSpec inst;
  inst.dimension = n;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const KernelSpec spec{parse_kernel_kind(kinds[i]), cs[i], n};
    inst.sets.emplace_back("Psi" + std::to_string(i + 1), std::vector{nystrom_matrix(spec)});
    std::cout << "Psi" << i + 1 << ": " << kinds[i] << " c=" << fmt(cs[i]) << " on " << n << " nodes\n";
  }
  write_json(out, instance_to_json(inst));
  std::cout << "wrote " << out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified checks of Hadamard-product spectral radius inequalities"};
  app.require_subcommand(1);

  std::string out;
  std::string entry, instance;
  bool allow = false;
  EngineFlags check_flags, fuzz_flags, jsr_flags;

  auto* check = app.add_subcommand("check", "verify one instance against a catalog entry");
  check->add_option("--entry", entry, "catalog entry id")->required();
  check->add_option("--instance", instance, "instance JSON file")->required();
  check->add_flag("--allow-out-of-regime", allow, "evaluate even when a numeric hypothesis fails");
  check->add_option("--out", out, "report JSON path");
  check_flags.add_to(check);

  std::string entries = "all", dim = "2..4", size = "1..3";
  std::size_t count = 0;
  std::uint64_t seed = 0;
  double sparsity = 0.3;
  unsigned threads = 0;
  bool timing = false;
  auto* fuzz = app.add_subcommand("fuzz", "random in-regime instances for catalog entries");
  fuzz->add_option("--entries", entries, "all, or comma-separated ids")->capture_default_str();
  fuzz->add_option("--count", count, "instances per entry")->required();
  fuzz->add_option("--seed", seed, "campaign seed")->required();
  fuzz->add_option("--dim", dim, "dimension range")->capture_default_str();
  fuzz->add_option("--set-size", size, "set size range")->capture_default_str();
  fuzz->add_option("--sparsity", sparsity, "probability that an entry is zero")->capture_default_str();
  fuzz->add_option("--threads", threads, "worker threads, 0 for all cores")->capture_default_str();
  fuzz->add_flag("--timing", timing, "add runtime_ms to the report (makes it nondeterministic)");
  fuzz->add_option("--out", out, "report JSON path");
  fuzz_flags.add_to(fuzz);

  std::vector<std::string> example_ids;
  auto* examples = app.add_subcommand("examples", "reproduce the published examples");
  examples->add_option("--id", example_ids, "example id (repeatable); default all");
  examples->add_option("--out", out, "report JSON path");

  std::size_t oracle_depth = 0;
  auto* jsr = app.add_subcommand("jsr", "joint spectral radius bracket of each set of an instance");
  jsr->add_option("--instance", instance, "instance JSON file")->required();
  jsr->add_option("--oracle-depth", oracle_depth, "also run exhaustive enumeration to this depth");
  jsr->add_option("--out", out, "report JSON path");
  jsr_flags.add_to(jsr);

  auto* catalog = app.add_subcommand("catalog", "catalog operations");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "one line per entry: id, anchor, arity, regime");
  list->add_option("--out", out, "JSON path");

  std::vector<std::string> kinds;
  std::vector<double> cs{1.0};
  std::size_t grid = 0;
  auto* gen = app.add_subcommand("gen-kernel", "Nystrom matrices of kernels on [0,1] as an instance file");
  gen->add_option("--kind", kinds, "exp_abs, gauss, poly or const (repeatable, one set each)")->required();
  gen->add_option("--c", cs, "kernel parameter, one value or one per kind")->capture_default_str();
  gen->add_option("--n", grid, "grid size")->required()->check(CLI::PositiveNumber);
  gen->add_option("--out", out, "instance JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*check) return run_check(entry, instance, check_flags, allow, out);
    if (*fuzz) return run_fuzz(entries, count, seed, dim, size, sparsity, threads, timing, fuzz_flags, out);
    if (*examples) return run_examples(example_ids, out);
    if (*jsr) return run_jsr(instance, jsr_flags, oracle_depth, out);
    if (*list) return run_catalog_list(out);
    if (*gen) return run_gen_kernel(kinds, cs, grid, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
