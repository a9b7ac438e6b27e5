#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flowlogic/cbfl.hpp"
#include "flowlogic/checker.hpp"
#include "flowlogic/error.hpp"
#include "flowlogic/flow.hpp"
#include "flowlogic/formula.hpp"
#include "flowlogic/formula_analysis.hpp"
#include "flowlogic/maxflow.hpp"
#include "flowlogic/network.hpp"
#include "flowlogic/oracle.hpp"
#include "flowlogic/query.hpp"

namespace flowlogic::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSchema = "flowlogic.run_report/1";

struct Options {
  std::string subcommand;
  std::string network_path;
  std::string formula_text;
  std::string formula_path;
  std::string engine = "auto";
  std::size_t ap_limit = 3;
  bool json_output = false;
};

// Failure attributed to one pipeline stage: parse, validate, classify,
// evaluate or cross-check.
struct StageError {
  std::string stage;
  std::string code;
  std::string message;
};

struct Report {
  json result = json::object();
  std::optional<FlowFunction> witness;
  std::vector<std::string> warnings;
  std::string status;
  int exit_code = kExitPositive;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMalformed, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename F>
auto in_stage(const std::string& stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw StageError{stage, std::string(to_string(e.code())), e.what()};
  } catch (const std::exception& e) {
    throw StageError{stage, "internal", e.what()};
  }
}

FlowNetwork load_network(const Options& opt) {
  if (opt.network_path.empty()) throw StageError{"parse", "usage", "--network is required"};
  FlowNetwork net = in_stage("parse", [&] { return parse_network_unchecked(read_file(opt.network_path)); });
  auto violations = validate(net);
  if (!violations.empty()) {
    std::string message = violations.front();
    for (std::size_t i = 1; i < violations.size(); ++i) message += "; " + violations[i];
    throw StageError{"validate", std::string(to_string(ErrorCode::kInvalidNetwork)), message};
  }
  return net;
}

FormulaPtr load_formula(const Options& opt) {
  if (opt.formula_text.empty() == opt.formula_path.empty()) {
    throw StageError{"parse", "usage", "give exactly one of --formula and --formula-file"};
  }
  return in_stage("parse", [&] {
    std::string text = opt.formula_text.empty() ? read_file(opt.formula_path) : opt.formula_text;
    return parse_formula(text);
  });
}

json names_of(const FlowNetwork& net, const VertexSet& set) {
  json out = json::array();
  for (VertexId v = 0; v < set.size(); ++v) {
    if (set[v]) out.push_back(net.vertex_name(v));
  }
  return out;
}

json flow_json(const FlowNetwork& net, const FlowFunction& flow) {
  return json::parse(serialize_flow(net, flow));
}

Verdict check_with(const std::string& engine, const FlowNetwork& net, const FormulaPtr& phi,
                   std::string& used) {
  if (engine == "general") {
    used = "general";
    return check(net, phi);
  }
  if (engine == "cbfl") {
    used = "cbfl";
    return check_cbfl(net, phi);
  }
  try {
    Verdict v = check_cbfl(net, phi);
    used = "cbfl";
    return v;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotNormalForm) throw;
  }
  used = "general";
  return check(net, phi);
}

Decider decider_for(const std::string& engine) {
  return [engine](const FlowNetwork& net, const FormulaPtr& f) {
    std::string used;
    return check_with(engine, net, f, used).satisfied;
  };
}

Decider oracle_decider() {
  return [](const FlowNetwork& net, const FormulaPtr& f) { return brute_check(net, f); };
}

// Runs the brute-force oracle; nullopt with a warning when it cannot
// handle the instance.
template <typename T>
std::optional<T> try_oracle(Report& report, const std::function<T()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kPrecondition && e.code() != ErrorCode::kBudgetExceeded) throw;
    report.warnings.push_back(std::string("oracle cross-check skipped: ") + e.what());
    return std::nullopt;
  }
}

void disagree(const std::string& what) {
  throw StageError{"cross-check", "disagreement", what};
}

void check_witness(Report& report, const FlowNetwork& net) {
  if (!report.witness) return;
  auto problems = check_flow(net, *report.witness);
  for (const auto& p : problems) report.warnings.push_back("witness violates " + p);
}

Report do_validate(const Options& opt) {
  Report r;
  if (opt.network_path.empty()) throw StageError{"parse", "usage", "--network is required"};
  FlowNetwork net = in_stage("parse", [&] { return parse_network_unchecked(read_file(opt.network_path)); });
  auto violations = validate(net);
  r.result["valid"] = violations.empty();
  r.result["violations"] = violations;
  r.result["vertices"] = net.num_vertices();
  r.result["edges"] = net.num_edges();
  r.status = violations.empty() ? "valid" : "invalid";
  r.exit_code = violations.empty() ? kExitPositive : kExitNegative;
  return r;
}

Report do_maxflow(const Options& opt, const FlowNetwork& net) {
  Report r;
  MaxFlowResult mf = in_stage("evaluate", [&] { return max_flow(net); });
  r.result["value"] = mf.value;
  r.witness = mf.witness;
  r.status = "solution";
  if (opt.engine == "oracle") {
    auto best = try_oracle<std::int64_t>(r, [&] {
      std::int64_t m = 0;
      for (const auto& f : enumerate_flows(net)) {
        m = std::max(m, to_int64(f.vertex_value(net, net.source())));
      }
      return m;
    });
    if (best && *best != mf.value) {
      disagree("max flow " + std::to_string(mf.value) + " but enumeration finds " +
               std::to_string(*best));
    }
  }
  return r;
}

Report do_check(const Options& opt, const FlowNetwork& net) {
  Report r;
  FormulaPtr phi = load_formula(opt);
  std::string used;
  std::string engine = opt.engine == "oracle" ? "auto" : opt.engine;
  Verdict v = in_stage(engine == "cbfl" ? "classify" : "evaluate",
                       [&] { return check_with(engine, net, phi, used); });
  r.result["satisfied"] = v.satisfied;
  r.result["engine"] = used;
  r.result["formula"] = to_string(phi);
  json labels = json::array();
  for (const auto& l : v.vertex_labels) {
    labels.push_back({{"name", l.name}, {"formula", l.formula}, {"vertices", names_of(net, l.vertices)}});
  }
  r.result["labels"] = std::move(labels);
  if (!v.diagnostics.empty()) r.result["diagnostics"] = v.diagnostics;
  r.witness = v.witness;
  r.warnings = v.warnings;
  r.status = v.satisfied ? "satisfied" : "unsatisfied";
  r.exit_code = v.satisfied ? kExitPositive : kExitNegative;
  if (opt.engine == "oracle") {
    auto expected = in_stage("cross-check", [&] {
      return try_oracle<bool>(r, [&] { return brute_check(net, phi); });
    });
    if (expected) {
      r.result["oracle"] = *expected;
      if (*expected != v.satisfied) {
        disagree(used + " engine says " + (v.satisfied ? "satisfied" : "unsatisfied") +
                 ", oracle says " + (*expected ? "satisfied" : "unsatisfied"));
      }
    }
  }
  check_witness(r, net);
  return r;
}

Report do_synth(const Options& opt, const FlowNetwork& net) {
  Report r;
  FormulaPtr phi = load_formula(opt);
  in_stage("classify", [&] {
    if (!classify_formula(phi).is_exists_bfl1) {
      throw Error(ErrorCode::kNotExistentialBfl1, "synthesis needs an existential BFL*_1 formula");
    }
    return 0;
  });
  auto witness = in_stage("evaluate", [&] { return synthesize(net, phi); });
  r.result["found"] = witness.has_value();
  r.witness = witness;
  r.status = witness ? "solution" : "no_solution";
  r.exit_code = witness ? kExitPositive : kExitNegative;
  if (opt.engine == "oracle") {
    auto expected = in_stage("cross-check", [&] {
      return try_oracle<bool>(r, [&] { return brute_check(net, phi); });
    });
    if (expected && *expected != witness.has_value()) {
      disagree(std::string("synthesis ") + (witness ? "found a witness" : "found none") +
               ", oracle says the formula is " + (*expected ? "satisfied" : "unsatisfied"));
    }
  }
  check_witness(r, net);
  return r;
}

json solution_json(const ValueSolution& s) {
  return {{"strongest", s.strongest}, {"interval", {s.lo, s.hi}}, {"check_calls", s.check_calls}};
}

Report do_query_value(const Options& opt, const FlowNetwork& net) {
  Report r;
  FormulaPtr f = load_formula(opt);
  ValueQuery q = in_stage("classify", [&] { return classify_value_query(f); });
  std::string engine = opt.engine == "oracle" ? "auto" : opt.engine;
  auto sol = in_stage("evaluate", [&] { return strongest_value_solution(net, q, decider_for(engine)); });
  r.result["class"] = std::string(to_string(q.query_class));
  r.result["polarity"] = std::string(to_string(q.polarity));
  r.result["solution"] = sol ? solution_json(*sol) : json(nullptr);
  r.status = sol ? "solution" : "no_solution";
  r.exit_code = sol ? kExitPositive : kExitNegative;
  if (opt.engine == "oracle") {
    auto expected = in_stage("cross-check", [&] {
      return try_oracle<std::optional<ValueSolution>>(
          r, [&] { return strongest_value_solution(net, q, oracle_decider()); });
    });
    if (expected) {
      bool same = expected->has_value() == sol.has_value() &&
                  (!sol || (*expected)->strongest == sol->strongest);
      if (!same) disagree("strongest value differs from the oracle");
    }
  }
  return r;
}

Report do_query_prop(const Options& opt, const FlowNetwork& net) {
  Report r;
  FormulaPtr f = load_formula(opt);
  PropQuery q = in_stage("classify", [&] { return classify_prop_query(f); });
  std::string engine = opt.engine == "oracle" ? "auto" : opt.engine;
  auto sols = in_stage("evaluate", [&] {
    return strongest_prop_solutions(net, q, opt.ap_limit, decider_for(engine));
  });
  json list = json::array();
  for (const auto& t : sols) {
    list.push_back({{"formula", to_string(to_formula(t))}, {"table", t.table}});
  }
  r.result["polarity"] = std::string(to_string(q.polarity));
  r.result["ap"] = net.ap();
  r.result["antichain"] = std::move(list);
  r.status = sols.empty() ? "no_solution" : "solution";
  r.exit_code = sols.empty() ? kExitNegative : kExitPositive;
  if (opt.engine == "oracle") {
    auto expected = in_stage("cross-check", [&] {
      return try_oracle<std::vector<TruthTable>>(
          r, [&] { return strongest_prop_solutions(net, q, opt.ap_limit, oracle_decider()); });
    });
    if (expected) {
      bool same = expected->size() == sols.size();
      for (std::size_t i = 0; same && i < sols.size(); ++i) same = (*expected)[i].table == sols[i].table;
      if (!same) disagree("strongest propositional solutions differ from the oracle");
    }
  }
  return r;
}

json command_json(const Options& opt) {
  json c = {{"subcommand", opt.subcommand}, {"engine", opt.engine}};
  if (!opt.network_path.empty()) c["network"] = opt.network_path;
  if (!opt.formula_text.empty()) c["formula"] = opt.formula_text;
  if (!opt.formula_path.empty()) c["formula_file"] = opt.formula_path;
  if (opt.subcommand == "query-prop") c["ap_limit"] = opt.ap_limit;
  return c;
}

void print_text(std::ostream& out, const Options& opt, const Report& r,
                const std::optional<FlowNetwork>& net) {
  out << opt.subcommand << ": " << r.status << "\n";
  for (const auto& [key, value] : r.result.items()) {
    out << "  " << key << ": " << value.dump() << "\n";
  }
  if (r.witness && net) {
    out << "  witness:\n";
    const auto& values = r.witness->values();
    for (EdgeId e = 0; e < values.size(); ++e) {
      const Edge& edge = net->edge(e);
      out << "    " << net->vertex_name(edge.from) << " -> " << net->vertex_name(edge.to) << ": "
          << to_string(values[e]) << "\n";
    }
  } else if (opt.subcommand == "synth" && !r.witness) {
    out << "  witness: NONE\n";
  }
  for (const auto& w : r.warnings) out << "  warning: " << w << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Model checker and query engine for flow logic over flow networks", "flowlogic"};
  app.require_subcommand(1, 1);

  auto add_common = [&](CLI::App* sub, bool formula) {
    sub->add_option("--network", opt.network_path, "Network JSON file")->required();
    if (formula) {
      auto* text = sub->add_option("--formula", opt.formula_text, "Formula text");
      auto* file = sub->add_option("--formula-file", opt.formula_path, "File holding the formula");
      text->excludes(file);
    }
    sub->add_option("--engine", opt.engine, "auto, general, cbfl or oracle")
        ->check(CLI::IsMember({"auto", "general", "cbfl", "oracle"}));
    sub->add_flag("--json", opt.json_output, "Print the run report as JSON");
  };
  add_common(app.add_subcommand("validate", "List violated network invariants"), false);
  add_common(app.add_subcommand("maxflow", "Maximum flow value and witness"), false);
  add_common(app.add_subcommand("check", "Decide a closed formula at the source"), true);
  add_common(app.add_subcommand("synth", "Witness flow for an existential formula"), true);
  add_common(app.add_subcommand("query-value", "Strongest value for a placeholder such as >= ?"), true);
  auto* prop = app.add_subcommand("query-prop", "Strongest propositional solutions for ?");
  add_common(prop, true);
  prop->add_option("--ap-limit", opt.ap_limit, "Largest proposition count to enumerate")
      ->check(CLI::Range(0, 5));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPositive : kExitError;
  }
  opt.subcommand = app.get_subcommands().front()->get_name();

  json doc = {{"schema", kSchema}, {"command", command_json(opt)}};
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  Report report;
  std::optional<FlowNetwork> net;
  try {
    if (opt.subcommand == "validate") {
      report = do_validate(opt);
    } else {
      net = load_network(opt);
      if (opt.subcommand == "maxflow") report = do_maxflow(opt, *net);
      if (opt.subcommand == "check") report = do_check(opt, *net);
      if (opt.subcommand == "synth") report = do_synth(opt, *net);
      if (opt.subcommand == "query-value") report = do_query_value(opt, *net);
      if (opt.subcommand == "query-prop") report = do_query_prop(opt, *net);
    }
  } catch (const StageError& e) {
    doc["status"] = "error";
    doc["error"] = {{"stage", e.stage}, {"code", e.code}, {"message", e.message}};
    doc["timing_ms"] = elapsed_ms();
    if (opt.json_output) out << doc.dump(2) << "\n";
    err << "flowlogic: " << e.stage << " failed (" << e.code << "): " << e.message << "\n";
    return kExitError;
  }

  doc["status"] = report.status;
  doc["result"] = report.result;
  doc["witness"] = report.witness && net ? flow_json(*net, *report.witness) : json(nullptr);
  doc["timing_ms"] = elapsed_ms();
  doc["warnings"] = report.warnings;
  if (opt.json_output) {
    out << doc.dump(2) << "\n";
  } else {
    print_text(out, opt, report, net);
  }
  return report.exit_code;
}

}  // namespace flowlogic::cli
