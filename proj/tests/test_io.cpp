#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hjsr/io.hpp"

#include <cstdio>
#include <fstream>

using namespace hjsr;

namespace {

Json example34() {
  return Json::parse(R"({
    "schema": 1, "dimension": 2,
    "sets": [
      {"name": "Psi1", "matrices": [{"dim": 2, "rows": [[0, 0], [1, 1]]}]},
      {"name": "Psi2", "matrices": [{"dim": 2, "rows": [[0, 0], [1, 1]]}]},
      {"name": "Psi3", "matrices": [{"dim": 2, "rows": [[0, 0], [1, 1]]}]}
    ],
    "params": {"alpha": 0.4}
  })");
}

/// Message of the InvalidArgument thrown while reading `j`, or "" if none.
std::string error_of(const Json& j) {
  try {
    instance_from_json(j);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

bool mentions(const std::string& msg, const std::string& field) {
  return msg.find("'" + field + "'") != std::string::npos;
}

}  // namespace

TEST_CASE("reading a valid instance") {
  const InstanceSpec s = instance_from_json(example34());
  CHECK(s.dimension == 2);
  REQUIRE(s.sets.size() == 3);
  CHECK(s.sets[2].name() == "Psi3");
  CHECK(s.sets[0].mats()[0] == NonNegMatrix::from_rows({{0, 0}, {1, 1}}));
  CHECK(s.params.alpha == 0.4);
  CHECK(s.params.n == 2);
  CHECK_FALSE(s.depth.has_value());
  CHECK(check_instance("T3.3odd", s).status == Status::Confirmed);
}

TEST_CASE("instances round-trip") {
  InstanceSpec s = instance_from_json(example34());
  s.params.weights = {0.25, 0.5, 0.25};
  s.params.m = 3;
  s.params.t = 1.5;
  s.params.n = 3;
  s.depth = 7;
  s.params.tau = Permutation({3, 1, 2});
  s.params.nu = Permutation({1, 2, 3});
  const InstanceSpec back = instance_from_json(instance_to_json(s));
  CHECK(instance_digest(back) == instance_digest(s));
  CHECK(back.depth == 7u);
  CHECK(back.params.tau->images() == std::vector<std::size_t>{3, 1, 2});
  CHECK(instance_to_json(back).dump() == instance_to_json(s).dump());
}

TEST_CASE("rejections name the offending field") {
  Json j = example34();
  j["extra"] = 1;
  CHECK(mentions(error_of(j), "extra"));

  j = example34();
  j["params"]["beta"] = 1;
  CHECK(mentions(error_of(j), "params.beta"));

  j = example34();
  j.erase("schema");
  CHECK(mentions(error_of(j), "schema"));
  j["schema"] = 2;
  CHECK(mentions(error_of(j), "schema"));

  j = example34();
  j.erase("dimension");
  CHECK(mentions(error_of(j), "dimension"));

  j = example34();
  j["sets"][1]["matrices"][0]["rows"][1][0] = -1;
  CHECK(mentions(error_of(j), "sets[1].matrices[0].rows[1][0]"));

  j = example34();
  j["sets"][2]["matrices"][0]["rows"][0] = {1};
  CHECK(mentions(error_of(j), "sets[2].matrices[0].rows[0]"));

  j = example34();
  j["sets"][0]["matrices"][0]["dim"] = 3;
  CHECK(mentions(error_of(j), "sets[0].matrices[0].dim"));

  j = example34();
  j["sets"][0]["matrices"][0]["color"] = "red";
  CHECK(mentions(error_of(j), "sets[0].matrices[0].color"));

  j = example34();
  j["sets"][0].erase("name");
  CHECK(mentions(error_of(j), "sets[0].name"));

  j = example34();
  j["sets"] = Json::array();
  CHECK(mentions(error_of(j), "sets"));

  j = example34();
  j["params"]["m"] = 2.5;
  CHECK(mentions(error_of(j), "params.m"));

  j = example34();
  j["params"]["n"] = 0;
  CHECK(mentions(error_of(j), "params.n"));

  j = example34();
  j["params"]["alpha"] = "0.4";
  CHECK(mentions(error_of(j), "params.alpha"));

  j = example34();
  j["weights"] = {0.5, "x"};
  CHECK(mentions(error_of(j), "weights[1]"));

  j = example34();
  j["permutations"] = {{"tau", {1, 1, 2}}};
  CHECK(mentions(error_of(j), "permutations.tau"));

  j = example34();
  j["permutations"] = {{"sigma", {1, 2, 3}}};
  CHECK(mentions(error_of(j), "permutations.sigma"));

  CHECK(mentions(error_of(Json::array()), "<root>"));
}

TEST_CASE("loading files") {
  CHECK_THROWS_AS(load_instance("/nonexistent/instance.json"), InvalidArgument);
  const std::string path = "test_io_tmp.json";
  {
    std::ofstream out(path);
    out << "{\"schema\": 1, ";
  }
  CHECK_THROWS_AS(load_instance(path), InvalidArgument);
  write_json(path, example34());
  CHECK(load_instance(path).sets.size() == 3);
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_json("/nonexistent/dir/out.json", example34()), InvalidArgument);
}

TEST_CASE("report shapes") {
  const Json b = bracket_to_json(Bracket{1.0, 2.0, false, true, 4});
  CHECK(b.dump() == R"({"lo":1.0,"hi":2.0,"partial":true,"depth_used":4})");

  InstanceSpec s = instance_from_json(example34());
  CheckOptions o;
  const Json ok = verdict_to_json(check_instance("T3.3odd", s, o), o, s.params);
  CHECK(ok["schema"] == 1);
  CHECK(ok["status"] == "Confirmed");
  CHECK(ok["config"]["tol"] == 1e-9);
  CHECK(ok["config"]["max_depth"] == 10);
  CHECK(ok["config"]["budget_products"] == 2000000);
  CHECK_FALSE(ok.contains("witness"));

  s.params.alpha = 0.3;
  o.allow_out_of_regime = true;
  const Verdict bad = check_instance("T3.3odd", s, o);
  const Json vj = verdict_to_json(bad, o, s.params);
  CHECK(vj["status"] == "ViolationCertified");
  CHECK(vj["witness"]["digest"] == bad.digest);
  CHECK(vj["witness"]["params"]["alpha"] == 0.3);
  CHECK(vj["regime_note"] == "alpha < 1/m");

  const FuzzReport r = fuzz_campaign({"T3.6"}, 3, 1, GenParams{});
  const Json plain = fuzz_report_to_json(r, false);
  const Json timed = fuzz_report_to_json(r, true);
  CHECK_FALSE(plain["entries"][0].contains("runtime_ms"));
  CHECK(timed["entries"][0].contains("runtime_ms"));
  CHECK(plain["entries"][0]["count"] == 3);
  CHECK(plain["generator"]["sparsity"] == 0.3);
  CHECK(plain.dump() == fuzz_report_to_json(fuzz_campaign({"T3.6"}, 3, 1, GenParams{}), false).dump());

  const PaperExample ex = paper_example("3.12");
  const Json ej = example_to_json(ex, run_example(ex));
  CHECK(ej["ok"] == true);
  std::size_t bases = 0;
  for (const auto& c : ej["expectations"]) bases += c["quantity"] == "rhs_base";
  CHECK(bases == 2);
}
