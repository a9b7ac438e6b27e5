#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "flowlogic/flow.hpp"
#include "flowlogic/network.hpp"

using namespace flowlogic;
using nlohmann::json;

namespace {

const std::string kData = FLOWLOGIC_TEST_DATA;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "flowlogic");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return kData + "/" + name; }

FlowNetwork load(const std::string& name) {
  std::ifstream in(data(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

}  // namespace

TEST_CASE("check exit codes and report") {
  Run neg = run_cli({"check", "--network", data("two_successors.json"), "--formula", "Ef(= 1 & A X > 0)", "--json"});
  CHECK(neg.code == cli::kExitNegative);
  json d = neg.doc();
  CHECK(d["schema"] == "flowlogic.run_report/1");
  CHECK(d["status"] == "unsatisfied");
  CHECK(d["result"]["satisfied"] == false);
  CHECK(d["command"]["subcommand"] == "check");

  Run pos = run_cli({"check", "--network", data("two_successors.json"), "--formula", "EfR(= 1 & A X > 0)", "--json"});
  CHECK(pos.code == cli::kExitPositive);
  json p = pos.doc();
  REQUIRE_FALSE(p["witness"].is_null());
  FlowNetwork net = load("two_successors.json");
  FlowFunction w = parse_flow(net, p["witness"].dump());
  CHECK(check_flow(net, w).empty());
  CHECK(w.vertex_value(net, net.source()) == make_rational(1));
}

TEST_CASE("engines") {
  for (const char* engine : {"auto", "general", "cbfl", "oracle"}) {
    CAPTURE(std::string(engine));
    Run r = run_cli({"check", "--network", data("diamond.json"), "--formula", "Ef(= 7 & A X >= 3)", "--engine",
                     engine, "--json"});
    CHECK(r.code == cli::kExitPositive);
    CHECK(r.doc()["status"] == "satisfied");
  }
  Run fallback = run_cli({"check", "--network", data("diamond.json"), "--formula", "Ef(A (p -> >= 1))", "--json"});
  CHECK(fallback.doc()["result"]["engine"] == "general");
  Run strict = run_cli({"check", "--network", data("diamond.json"), "--formula", "Ef(A (p -> >= 1))", "--engine",
                        "cbfl", "--json"});
  CHECK(strict.code == cli::kExitError);
  CHECK(strict.doc()["error"]["stage"] == "classify");
  CHECK(strict.doc()["error"]["code"] == "NOT_NORMAL_FORM");
}

TEST_CASE("maxflow and synthesis") {
  Run mf = run_cli({"maxflow", "--network", data("diamond.json"), "--engine", "oracle", "--json"});
  CHECK(mf.code == cli::kExitPositive);
  CHECK(mf.doc()["result"]["value"] == 7);

  Run syn = run_cli({"synth", "--network", data("single_edge_5.json"), "--formula", "Ef(= 5)", "--json"});
  CHECK(syn.code == cli::kExitPositive);
  CHECK_FALSE(syn.doc()["witness"].is_null());
  Run none = run_cli({"synth", "--network", data("single_edge_5.json"), "--formula", "Ef(= 6)"});
  CHECK(none.code == cli::kExitNegative);
  CHECK(none.out.find("witness: NONE") != std::string::npos);
  Run shape = run_cli({"synth", "--network", data("single_edge_5.json"), "--formula", "Af(= 5)", "--json"});
  CHECK(shape.code == cli::kExitError);
  CHECK(shape.doc()["error"]["code"] == "NOT_EBFL1");
}

TEST_CASE("queries") {
  Run v = run_cli({"query-value", "--network", data("single_edge_5.json"), "--formula", "Ef(>= ?)", "--json"});
  CHECK(v.code == cli::kExitPositive);
  json d = v.doc();
  CHECK(d["result"]["solution"]["strongest"] == 5);
  CHECK(d["result"]["class"] == "lower_bound");

  Run p = run_cli({"query-prop", "--network", data("labeled.json"), "--formula", "Ef(>= 3 & A X ?)", "--engine",
                   "oracle", "--json"});
  CHECK(p.code == cli::kExitPositive);
  CHECK_FALSE(p.doc()["result"]["antichain"].empty());
  Run limit = run_cli({"query-prop", "--network", data("labeled.json"), "--formula", "Ef(?)", "--ap-limit", "1",
                       "--json"});
  CHECK(limit.code == cli::kExitError);
  CHECK(limit.doc()["error"]["code"] == "AP_LIMIT_EXCEEDED");
}

TEST_CASE("validation") {
  Run bad = run_cli({"validate", "--network", data("invalid.json"), "--json"});
  CHECK(bad.code == cli::kExitNegative);
  CHECK(bad.doc()["result"]["violations"].size() == 4);
  Run good = run_cli({"validate", "--network", data("diamond.json")});
  CHECK(good.code == cli::kExitPositive);
  Run refuse = run_cli({"check", "--network", data("invalid.json"), "--formula", "Ef(= 0)", "--json"});
  CHECK(refuse.code == cli::kExitError);
  CHECK(refuse.doc()["error"]["stage"] == "validate");
}

TEST_CASE("errors") {
  Run syntax = run_cli({"check", "--network", data("diamond.json"), "--formula", "Ef(>= ", "--json"});
  CHECK(syntax.code == cli::kExitError);
  CHECK(syntax.doc()["error"]["stage"] == "parse");
  Run missing = run_cli({"check", "--network", data("nope.json"), "--formula", "Ef(= 0)"});
  CHECK(missing.code == cli::kExitError);
  CHECK_FALSE(missing.err.empty());
  CHECK(run_cli({}).code == cli::kExitError);
  CHECK(run_cli({"check", "--network", data("diamond.json")}).code == cli::kExitError);
  CHECK(run_cli({"check", "--network", data("diamond.json"), "--formula", "Ef(= 0)", "--engine", "magic"}).code ==
        cli::kExitError);
}

TEST_CASE("formula files") {
  auto path = std::filesystem::temp_directory_path() / "flowlogic_test_formula.txt";
  {
    std::ofstream f(path);
    f << "Ef(>= 7)\n";
  }
  Run r = run_cli({"check", "--network", data("diamond.json"), "--formula-file", path.string(), "--json"});
  CHECK(r.code == cli::kExitPositive);
  CHECK(r.doc()["command"]["formula_file"] == path.string());
  std::filesystem::remove(path);
}
