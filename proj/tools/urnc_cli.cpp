#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "urnc/codes.hpp"
#include "urnc/error.hpp"
#include "urnc/identity.hpp"
#include "urnc/network.hpp"
#include "urnc/sim.hpp"
#include "urnc/szcheck.hpp"
#include "urnc/transform.hpp"

namespace {

using nlohmann::json;
using namespace urnc;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kDesignBug = 3;
constexpr int kBoundExceeded = 4;

// Raised for input problems that must map to exit code 2.
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Network load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
  Network net = network_from_json(j);
  validate(net);
  return net;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

int validation_code(Errc c) {
  switch (c) {
    case Errc::MalformedNetwork:
    case Errc::CycleDetected:
    case Errc::UnreachableSink:
    case Errc::UnknownNode:
    case Errc::UnknownEdge:
    case Errc::InvalidInstance:
      return kInvalid;
    case Errc::ParameterOutOfRange:
    case Errc::BadEpsilon:
      return kUsage;
    default:
      return kDesignBug;
  }
}

struct Common {
  std::string design = "r2d2";
  double epsilon = 0.5;
  int rate = 2;
  std::uint64_t seed = 0;
};

std::vector<std::string> parse_messages(const std::vector<std::string>& hex, int rate, std::uint64_t seed, int bits) {
  if (hex.empty()) return random_messages(seed, rate, bits);
  if (static_cast<int>(hex.size()) != rate) throw Error(Errc::ParameterOutOfRange, "--messages needs exactly R values");
  std::vector<std::string> out;
  for (const auto& h : hex) {
    std::string text = h.rfind("0x", 0) == 0 ? h : "0x" + h;
    const BinaryPoly p = BinaryPoly::parse(text);
    out.push_back(p.to_bitstring(4 * (text.size() - 2)));
  }
  return out;
}

// Deterministic designs must decode every sink whose min-cut reaches R.
bool design_failed(Design design, const RunReport& report, int rate) {
  if (!is_deterministic(design)) return false;
  for (const auto& s : report.sinks) {
    if (s.min_cut >= rate && !s.decodable) return true;
  }
  return false;
}

int cmd_transform(const std::string& net_path, int rate, const std::string& out) {
  const Network net = load_network(net_path);
  if (rate <= 0) {
    rate = 0;
    for (const auto& l : net.unit_links()) rate += l.tail == net.source ? 1 : 0;
    rate = std::max(rate, 1);
  }
  const VirtualGraph vg = transform(net, rate);
  const auto bad = check_invariants(vg);
  for (const auto& b : bad) std::cerr << "invariant: " << b << "\n";
  emit(to_json(vg), out);
  return bad.empty() ? kOk : kDesignBug;
}

int cmd_run(const std::string& net_path, const Common& c, const std::vector<std::string>& hex, int bits,
            const std::string& out) {
  const Network net = load_network(net_path);
  const Design design = parse_design(c.design);
  CodeParams params{c.epsilon, c.rate, static_cast<int>(net.sinks.size())};
  const VirtualGraph vg = transform(net, c.rate);
  const IdRegistry reg = assign_ids(vg);
  const CodeAssignment ca = make_assignment(vg, reg, design, params, c.seed);
  const RunReport report = run_report(vg, ca, parse_messages(hex, c.rate, c.seed, bits));
  emit(report.to_json(), out);
  if (design_failed(design, report, c.rate)) {
    std::cerr << "undecodable sink with adequate min-cut under a deterministic design\n";
    return kDesignBug;
  }
  return kOk;
}

int cmd_montecarlo(const std::string& net_path, const Common& c, int trials, unsigned threads,
                   const std::string& csv_path, const std::string& summary_path) {
  const Network net = load_network(net_path);
  const Design design = parse_design(c.design);
  CodeParams params{c.epsilon, c.rate, static_cast<int>(net.sinks.size())};
  const MonteCarloResult mc = monte_carlo(net, design, params, trials, c.seed, threads);
  std::ostringstream csv;
  csv << "trial,seed,failures\n";
  for (std::size_t t = 0; t < mc.per_trial.size(); ++t) {
    csv << t << "," << mc.per_trial[t].first << "," << mc.per_trial[t].second << "\n";
  }
  if (csv_path.empty() || csv_path == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream f(csv_path);
    if (!f) throw InvalidInput("cannot write '" + csv_path + "'");
    f << csv.str();
  }
  const double limit = (is_deterministic(design) ? 0.0 : c.epsilon) + 3.0 * mc.ci95;
  const bool exceeded = is_deterministic(design) ? mc.failures > 0 : mc.rate > limit;
  json summary{{"design", c.design}, {"epsilon", c.epsilon}, {"rate", c.rate},         {"trials", mc.trials},
               {"failures", mc.failures}, {"failure_rate", mc.rate}, {"ci95", mc.ci95}, {"limit", limit},
               {"within_bound", !exceeded}};
  if (!summary_path.empty()) emit(summary, summary_path);
  else std::cerr << summary.dump() << "\n";
  return exceeded ? kBoundExceeded : kOk;
}

int cmd_churn(const std::string& net_path, const std::string& script_path, const Common& c, int bits,
              const std::string& out) {
  const Network net = load_network(net_path);
  const Design design = parse_design(c.design);
  CodeParams params{c.epsilon, c.rate, static_cast<int>(net.sinks.size())};
  const auto script = churn_from_json(load_json(script_path));
  const auto steps = robustness_scenario(net, design, params, script, c.seed, bits);
  json arr = json::array();
  bool bug = false;
  for (const auto& s : steps) {
    json ev{{"op", s.event.kind == ChurnEvent::Kind::Join ? "join" : "leave"}, {"id", s.event.edge.id}};
    if (s.event.kind == ChurnEvent::Kind::Join) {
      ev["tail"] = s.event.edge.tail;
      ev["head"] = s.event.edge.head;
    }
    arr.push_back({{"event", ev}, {"coeff_diff", s.coeff_diffs}, {"invariants_ok", s.invariants_ok},
                   {"report", s.report.to_json()}});
    bug = bug || !s.coeff_diffs.empty() || !s.invariants_ok || design_failed(design, s.report, c.rate);
  }
  emit(arr, out);
  return bug ? kDesignBug : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Universal robust network code simulator"};
  app.require_subcommand(1);
  std::string out = "-";
  Common c;
  bool have_seed = false;

  auto add_seed = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--seed", c.seed, "master seed");
    if (required) opt->required();
  };
  auto add_design = [&](CLI::App* sub) {
    sub->add_option("--design", c.design, "wup | sup | r2d2 | c3p0")
        ->check(CLI::IsMember({"wup", "sup", "r2d2", "c3p0"}))
        ->required();
    sub->add_option("--epsilon", c.epsilon, "target failure probability")->check(CLI::Range(1e-9, 1.0));
    sub->add_option("--rate", c.rate, "source rate R")->check(CLI::PositiveNumber);
  };

  std::string net_path;
  std::string script_path;
  int rate_override = 0;
  auto* transform_cmd = app.add_subcommand("transform", "build the low-degree virtual graph");
  transform_cmd->add_option("network", net_path, "network JSON")->required();
  transform_cmd->add_option("--rate", rate_override, "source copies (default: source out-degree)");
  transform_cmd->add_option("-o,--output", out, "output path");

  std::vector<std::string> hex;
  int bits = 64;
  auto* run_cmd = app.add_subcommand("run", "transform, assign, percolate and decode");
  run_cmd->add_option("network", net_path, "network JSON")->required();
  add_design(run_cmd);
  add_seed(run_cmd, true);
  run_cmd->add_option("--messages", hex, "R hex messages (default: random from the seed)");
  run_cmd->add_option("--bits", bits, "random message length")->check(CLI::Range(1, 1 << 16));
  run_cmd->add_option("-o,--output", out, "report path");

  int trials = 0;
  unsigned threads = 0;
  std::string csv_path = "-";
  std::string summary_path;
  auto* mc_cmd = app.add_subcommand("montecarlo", "estimate the failure rate");
  mc_cmd->add_option("network", net_path, "network JSON")->required();
  add_design(mc_cmd);
  add_seed(mc_cmd, true);
  mc_cmd->add_option("--trials", trials, "number of trials")->required()->check(CLI::PositiveNumber);
  mc_cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
  mc_cmd->add_option("--csv", csv_path, "per-trial CSV path");
  mc_cmd->add_option("--summary", summary_path, "summary JSON path");

  std::string family;
  RandomDagParams dag;
  int depth = 3;
  std::string mode = "many-sinks";
  std::vector<int> pair{0, 1};
  int comb_n = 4;
  int comb_k = 2;
  auto* gen_cmd = app.add_subcommand("gen", "generate a network");
  gen_cmd->add_option("--family", family, "butterfly | random | lowerbound | combination")
      ->check(CLI::IsMember({"butterfly", "random", "lowerbound", "combination"}))
      ->required();
  auto* gen_seed = gen_cmd->add_option("--seed", c.seed, "master seed (random family)");
  gen_cmd->add_option("--nodes", dag.n_nodes, "random: node count");
  gen_cmd->add_option("--edge-prob", dag.edge_prob, "random: edge probability");
  gen_cmd->add_option("--sinks", dag.n_sinks, "random: sink count");
  gen_cmd->add_option("--min-cut", dag.min_cut, "random: minimum per-sink cut");
  gen_cmd->add_option("--max-cap", dag.max_cap, "random: maximum edge capacity");
  gen_cmd->add_option("--depth", depth, "lowerbound: tree depth");
  gen_cmd->add_option("--mode", mode, "lowerbound: many-sinks | one-sink")
      ->check(CLI::IsMember({"many-sinks", "one-sink"}));
  gen_cmd->add_option("--pair", pair, "lowerbound one-sink: leaf pair")->expected(2);
  gen_cmd->add_option("--n", comb_n, "combination: relay count");
  gen_cmd->add_option("--k", comb_k, "combination: relays per sink");
  gen_cmd->add_option("-o,--output", out, "output path");

  int instances = 200;
  int sz_trials = 1000;
  auto* sz_cmd = app.add_subcommand("szcheck", "verify the generalized Schwartz-Zippel bound");
  sz_cmd->add_option("--instances", instances, "instance count")->check(CLI::PositiveNumber);
  sz_cmd->add_option("--trials", sz_trials, "sampling trials per instance")->check(CLI::PositiveNumber);
  add_seed(sz_cmd, true);
  sz_cmd->add_option("-o,--output", out, "report path");

  auto* churn_cmd = app.add_subcommand("churn", "replay join/leave events");
  churn_cmd->add_option("network", net_path, "network JSON")->required();
  churn_cmd->add_option("script", script_path, "churn script JSON")->required();
  add_design(churn_cmd);
  add_seed(churn_cmd, true);
  churn_cmd->add_option("--bits", bits, "message length")->check(CLI::Range(1, 1 << 16));
  churn_cmd->add_option("-o,--output", out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  have_seed = gen_seed->count() > 0;

  try {
    if (*transform_cmd) return cmd_transform(net_path, rate_override, out);
    if (*run_cmd) return cmd_run(net_path, c, hex, bits, out);
    if (*mc_cmd) return cmd_montecarlo(net_path, c, trials, threads, csv_path, summary_path);
    if (*churn_cmd) return cmd_churn(net_path, script_path, c, bits, out);
    if (*sz_cmd) {
      const SzCorpusReport report = sz_corpus(instances, sz_trials, c.seed);
      emit(report.to_json(), out);
      return report.violations == 0 ? kOk : kDesignBug;
    }
    if (*gen_cmd) {
      Network net;
      if (family == "butterfly") {
        net = gen_butterfly();
      } else if (family == "random") {
        if (!have_seed) {
          std::cerr << "--seed is required for the random family\n";
          return kUsage;
        }
        net = gen_random_dag(c.seed, dag);
      } else if (family == "lowerbound") {
        net = gen_lower_bound(depth, mode == "one-sink" ? LowerBoundMode::OneSink : LowerBoundMode::ManySinks,
                              pair.at(0), pair.at(1));
      } else {
        net = gen_combination(comb_n, comb_k);
      }
      emit(to_json(net), out);
      return kOk;
    }
  } catch (const InvalidInput& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return validation_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "bad JSON input: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
