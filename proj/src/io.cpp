#include "hjsr/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace hjsr {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw InvalidArgument("field '" + field + "': " + what);
}

void only_fields(const Json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(where.empty() ? "<root>" : where, "must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) fail(where.empty() ? key : where + "." + key, "unknown field");
  }
}

const Json& required(const Json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where.empty() ? key : where + "." + key, "missing");
  return j.at(key);
}

std::size_t read_count(const Json& j, const std::string& field, std::size_t min) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail(field, "must be a non-negative integer");
  const auto v = j.get<std::uint64_t>();
  if (v < min) fail(field, "must be >= " + std::to_string(min));
  return static_cast<std::size_t>(v);
}

double read_number(const Json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

Permutation read_permutation(const Json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "must be an array of 1-based images");
  std::vector<std::size_t> images;
  for (std::size_t i = 0; i < j.size(); ++i) images.push_back(read_count(j[i], field + "[" + std::to_string(i) + "]", 1));
  std::vector<bool> seen(images.size() + 1, false);
  for (std::size_t v : images) {
    if (v > images.size() || seen[v]) fail(field, "must list each of 1.." + std::to_string(images.size()) + " once");
    seen[v] = true;
  }
  return Permutation(std::move(images));
}

NonNegMatrix read_matrix(const Json& j, const std::string& where, std::size_t dimension) {
  only_fields(j, where, {"dim", "rows"});
  const std::size_t dim = read_count(required(j, where, "dim"), where + ".dim", 1);
  if (dim != dimension) {
    fail(where + ".dim", "is " + std::to_string(dim) + ", instance dimension is " + std::to_string(dimension));
  }
  const Json& rows = required(j, where, "rows");
  const std::string rf = where + ".rows";
  if (!rows.is_array() || rows.size() != dim) fail(rf, "must be an array of " + std::to_string(dim) + " rows");
  std::vector<double> e;
  e.reserve(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const std::string row = rf + "[" + std::to_string(r) + "]";
    if (!rows[r].is_array() || rows[r].size() != dim) fail(row, "must have " + std::to_string(dim) + " entries");
    for (std::size_t c = 0; c < dim; ++c) {
      const std::string cell = row + "[" + std::to_string(c) + "]";
      const double v = read_number(rows[r][c], cell);
      if (v < 0.0) fail(cell, "must be >= 0");
      e.push_back(v);
    }
  }
  return NonNegMatrix(dim, std::move(e));
}

Json margins_to_json(const std::vector<PairMargin>& ms) {
  Json a = Json::array();
  for (const auto& m : ms) {
    a.push_back({{"chain", m.chain},
                 {"position", m.position},
                 {"gap", m.gap},
                 {"excess", m.excess},
                 {"identical", m.identical},
                 {"status", to_string(m.status)}});
  }
  return a;
}

Json elementwise_to_json(const std::vector<ElementwiseResult>& es) {
  Json a = Json::array();
  for (const auto& e : es) {
    a.push_back({{"label", e.label}, {"max_excess", e.max_excess}, {"slack", e.slack}, {"holds", e.holds}});
  }
  return a;
}

Json case_to_json(const CaseRecord& c, std::uint64_t seed) {
  Json sizes = Json::array();
  for (auto s : c.set_sizes) sizes.push_back(s);
  return {{"seed", seed},
          {"index", c.index},
          {"digest", c.digest},
          {"dimension", c.dimension},
          {"set_sizes", sizes},
          {"params", params_to_json(c.params)},
          {"margins", margins_to_json(c.margins)},
          {"elementwise", elementwise_to_json(c.elementwise)}};
}

}  // namespace

InstanceSpec instance_from_json(const Json& j) {
  only_fields(j, "", {"schema", "dimension", "sets", "weights", "params", "permutations"});
  const Json& schema = required(j, "", "schema");
  if (!schema.is_number_integer() || schema.get<std::int64_t>() != kSchemaVersion) {
    fail("schema", "must be " + std::to_string(kSchemaVersion));
  }
  InstanceSpec s;
  s.dimension = read_count(required(j, "", "dimension"), "dimension", 1);
  const Json& sets = required(j, "", "sets");
  if (!sets.is_array() || sets.empty()) fail("sets", "must be a non-empty array");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string where = "sets[" + std::to_string(i) + "]";
    only_fields(sets[i], where, {"name", "matrices"});
    const Json& name = required(sets[i], where, "name");
    if (!name.is_string() || name.get<std::string>().empty()) fail(where + ".name", "must be a non-empty string");
    const Json& mats = required(sets[i], where, "matrices");
    if (!mats.is_array() || mats.empty()) fail(where + ".matrices", "must be a non-empty array");
    std::vector<NonNegMatrix> members;
    for (std::size_t k = 0; k < mats.size(); ++k) {
      members.push_back(read_matrix(mats[k], where + ".matrices[" + std::to_string(k) + "]", s.dimension));
    }
    s.sets.emplace_back(name.get<std::string>(), std::move(members));
  }
  if (j.contains("weights")) {
    const Json& w = j.at("weights");
    if (!w.is_array()) fail("weights", "must be an array of numbers");
    for (std::size_t i = 0; i < w.size(); ++i) s.params.weights.push_back(read_number(w[i], "weights[" + std::to_string(i) + "]"));
  }
  if (j.contains("params")) {
    const Json& p = j.at("params");
    only_fields(p, "params", {"m", "k", "alpha", "t", "n", "depth"});
    if (p.contains("m")) s.params.m = read_count(p.at("m"), "params.m", 1);
    if (p.contains("k")) s.params.k = read_count(p.at("k"), "params.k", 1);
    if (p.contains("alpha")) s.params.alpha = read_number(p.at("alpha"), "params.alpha");
    if (p.contains("t")) s.params.t = read_number(p.at("t"), "params.t");
    if (p.contains("n")) s.params.n = read_count(p.at("n"), "params.n", 1);
    if (p.contains("depth")) s.depth = read_count(p.at("depth"), "params.depth", 1);
  }
  if (j.contains("permutations")) {
    const Json& p = j.at("permutations");
    only_fields(p, "permutations", {"tau", "nu"});
    if (p.contains("tau")) s.params.tau = read_permutation(p.at("tau"), "permutations.tau");
    if (p.contains("nu")) s.params.nu = read_permutation(p.at("nu"), "permutations.nu");
  }
  return s;
}

InstanceSpec load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read instance file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

Json params_to_json(const ChainParams& p) {
  Json j{{"m", p.m}, {"k", p.k}, {"weights", p.weights}, {"alpha", p.alpha}, {"t", p.t}, {"n", p.n}};
  if (p.tau) j["tau"] = p.tau->images();
  if (p.nu) j["nu"] = p.nu->images();
  return j;
}

Json instance_to_json(const InstanceSpec& inst) {
  Json sets = Json::array();
  for (const auto& s : inst.sets) {
    Json mats = Json::array();
    for (const auto& a : s.mats()) {
      Json rows = Json::array();
      for (std::size_t r = 0; r < a.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < a.dim(); ++c) row.push_back(a(r, c));
        rows.push_back(std::move(row));
      }
      mats.push_back({{"dim", a.dim()}, {"rows", std::move(rows)}});
    }
    sets.push_back({{"name", s.name()}, {"matrices", std::move(mats)}});
  }
  Json j{{"schema", kSchemaVersion}, {"dimension", inst.dimension}, {"sets", std::move(sets)}};
  if (!inst.params.weights.empty()) j["weights"] = inst.params.weights;
  Json params = Json::object();
  if (inst.params.m) params["m"] = inst.params.m;
  if (inst.params.k) params["k"] = inst.params.k;
  if (inst.params.alpha != 0.0) params["alpha"] = inst.params.alpha;
  if (inst.params.t != 1.0) params["t"] = inst.params.t;
  if (inst.params.n != 2) params["n"] = inst.params.n;
  if (inst.depth) params["depth"] = *inst.depth;
  if (!params.empty()) j["params"] = std::move(params);
  if (inst.params.tau || inst.params.nu) {
    Json perms = Json::object();
    if (inst.params.tau) perms["tau"] = inst.params.tau->images();
    if (inst.params.nu) perms["nu"] = inst.params.nu->images();
    j["permutations"] = std::move(perms);
  }
  return j;
}

Json bracket_to_json(const Bracket& b) {
  return {{"lo", b.lo}, {"hi", b.hi}, {"partial", b.partial}, {"depth_used", b.depth_used}};
}

Json options_to_json(const CheckOptions& o) {
  return {{"tol", o.tol},
          {"max_depth", o.jsr.max_depth},
          {"target_width", o.jsr.target_width},
          {"norm", to_string(o.jsr.norm)},
          {"budget_products", o.jsr.budget_products},
          {"refine", o.jsr.refine},
          {"balance", o.jsr.balance},
          {"retry", o.retry},
          {"max_members", o.max_members},
          {"allow_out_of_regime", o.allow_out_of_regime},
          {"use_oracle", o.use_oracle},
          {"oracle_depth", o.oracle_depth}};
}

Json gen_to_json(const GenParams& g) {
  return {{"dim_min", g.dim_min},   {"dim_max", g.dim_max},   {"size_min", g.size_min},
          {"size_max", g.size_max}, {"sparsity", g.sparsity}, {"max_cardinality", g.max_cardinality}};
}

Json verdict_to_json(const Verdict& v, const CheckOptions& opts, const ChainParams& params) {
  Json chains = Json::array();
  for (const auto& c : v.chains) {
    Json terms = Json::array();
    for (const auto& t : c.terms) {
      Json b = bracket_to_json(t.value);
      b["expr"] = t.expr;
      terms.push_back(std::move(b));
    }
    chains.push_back({{"label", c.label}, {"terms", std::move(terms)}});
  }
  Json j{{"schema", kSchemaVersion},
         {"entry", v.entry},
         {"status", to_string(v.status)},
         {"in_regime", v.in_regime},
         {"regime_note", v.regime_note},
         {"digest", v.digest},
         {"depth_used", v.depth_used},
         {"retried", v.retried},
         {"partial", v.partial},
         {"note", v.note},
         {"config", options_to_json(opts)},
         {"chains", std::move(chains)},
         {"margins", margins_to_json(v.margins)},
         {"elementwise", elementwise_to_json(v.elementwise)}};
  if (v.status == Status::ViolationCertified) j["witness"] = {{"digest", v.digest}, {"params", params_to_json(params)}};
  return j;
}

Json fuzz_report_to_json(const FuzzReport& r, bool timing) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json viol = Json::array();
    for (const auto& c : e.violations) viol.push_back(case_to_json(c, r.seed));
    Json inc = Json::array();
    for (const auto& c : e.inconclusive_cases) inc.push_back(case_to_json(c, r.seed));
    Json je{{"entry", e.entry},
            {"count", e.count},
            {"confirmed", e.confirmed},
            {"inconclusive", e.inconclusive},
            {"violations", std::move(viol)},
            {"inconclusive_cases", std::move(inc)}};
    if (timing) je["runtime_ms"] = e.runtime_ms;
    entries.push_back(std::move(je));
  }
  return {{"schema", kSchemaVersion},
          {"seed", r.seed},
          {"count", r.count},
          {"generator", gen_to_json(r.gen)},
          {"config", options_to_json(r.opts)},
          {"total_violations", r.total_violations()},
          {"total_inconclusive", r.total_inconclusive()},
          {"entries", std::move(entries)}};
}

Json example_to_json(const PaperExample& ex, const ExampleOutcome& out) {
  Json checks = Json::array();
  for (const auto& c : out.checks) {
    checks.push_back({{"quantity", c.expected.quantity},
                      {"name", c.expected.name},
                      {"value", c.expected.value},
                      {"provenance", c.expected.provenance},
                      {"asserted", c.expected.asserted},
                      {"computed", bracket_to_json(c.computed)},
                      {"met", c.met}});
  }
  const char* swept = ex.sweeps_t ? "t" : "alpha";
  return {{"id", ex.id},
          {"entry", ex.entry},
          {"description", ex.description},
          {"parameter", swept},
          {"threshold", ex.threshold},
          {"threshold_text", ex.threshold_text},
          {"lhs", bracket_to_json(out.lhs)},
          {"rhs_base", bracket_to_json(out.rhs_base)},
          {"expectations", std::move(checks)},
          {"in_regime", {{"value", ex.value_in}, {"status", to_string(out.in_regime.status)}}},
          {"out_of_regime",
           {{"value", ex.value_out},
            {"status", to_string(out.out_of_regime.status)},
            {"regime_note", out.out_of_regime.regime_note}}},
          {"ok", out.ok}};
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw InvalidArgument("cannot write " + path.string());
}

}  // namespace hjsr
