// Command-line front end: graph numerics, code construction, protocol
// simulation, config sweeps, and canned reproduce checks.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "banditlink/config.hpp"
#include "banditlink/errors.hpp"
#include "banditlink/graphs.hpp"
#include "banditlink/harness.hpp"
#include "banditlink/protocols.hpp"

namespace {

using namespace banditlink;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << text;
}

// Shared channel/graph selection for the graph and code subcommands.
struct GraphArgs {
  int cycle = 0;
  int k = 0;
  double eps = 0.0;
  std::string channel_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--cycle", cycle, "use the cycle graph on this many vertices");
    cmd->add_option("--k", k, "typewriter channel alphabet size");
    cmd->add_option("--eps", eps, "typewriter channel slip probability");
    cmd->add_option("--channel", channel_file, "JSON file with a channel object");
  }

  ConfusabilityGraph build() const {
    if (cycle > 0) return ConfusabilityGraph::cycle(cycle);
    if (!has_channel()) {
      throw ConfigError("select a graph: --cycle K, --k K --eps E, or --channel FILE");
    }
    return ConfusabilityGraph::from_support(SupportSet(build_channel()));
  }

  // A bare cycle has no transition rows, so paths that decode outputs
  // (code construction) cannot accept --cycle.
  TransitionMatrix build_channel() const {
    if (!channel_file.empty()) return parse_channel_json(slurp(channel_file)).build();
    if (k > 0) return make_typewriter(k, eps);
    throw ConfigError("select a channel: --k K --eps E or --channel FILE");
  }

  bool has_channel() const { return !channel_file.empty() || k > 0; }
};

int cmd_graph_alpha(const GraphArgs& gargs, int power, bool greedy, std::int64_t vertex_cap,
                    std::int64_t solver_cap) {
  const ConfusabilityGraph g = gargs.build();
  const StrongPower p(g, power, vertex_cap);
  const AlphaResult res = greedy ? greedy_independent_set(p) : independence_number(p, solver_cap);
  std::printf("order      %lld\n", static_cast<long long>(p.order()));
  std::printf("%s %lld\n", res.exact ? "alpha     " : "lower bnd ",
              static_cast<long long>(res.value));
  std::printf("exact      %s\n", res.exact ? "yes" : "no (greedy lower bound)");
  const std::size_t shown = std::min<std::size_t>(res.witness.size(), 64);
  for (std::size_t i = 0; i < shown; ++i) {
    const std::vector<int> tup = p.tuple_of(res.witness[i]);
    std::string t;
    for (std::size_t j = 0; j < tup.size(); ++j) {
      t += (j ? "," : "") + std::to_string(tup[j]);
    }
    std::printf("witness    (%s)\n", t.c_str());
  }
  if (shown < res.witness.size()) {
    std::printf("... %zu more witness vertices\n", res.witness.size() - shown);
  }
  return 0;
}

int cmd_graph_nstar(const GraphArgs& gargs, std::int64_t messages, int n_max,
                    std::int64_t vertex_cap, std::int64_t solver_cap) {
  const ConfusabilityGraph g = gargs.build();
  const BlocklengthResult res = minimal_blocklength(g, messages, n_max, vertex_cap, solver_cap);
  if (res.blocklength.has_value()) {
    std::printf("blocklength %d\n", *res.blocklength);
    return 0;
  }
  if (res.reason == BlocklengthResult::Reason::graph_complete) {
    std::printf("unreachable: %s\n", res.note.c_str());
  } else {
    std::printf("undecided: %s\n", res.note.c_str());
  }
  return 1;
}

int cmd_code_build(const std::string& scheme, const GraphArgs& gargs, std::int64_t messages,
                   const std::string& out_path) {
  std::string text;
  if (scheme == "slope-c5") {
    text = slope_code_c5().dump_text();
  } else if (scheme == "parity-c6") {
    text = parity_schedule(6).dump_text();
  } else if (scheme == "from-indset") {
    const TransitionMatrix w = gargs.build_channel();
    const std::int64_t m = messages > 0 ? messages : w.k();
    text = auto_code(w, static_cast<int>(m)).dump_text();
  } else {
    throw ConfigError("unknown scheme \"" + scheme +
                      "\" (use slope-c5, parity-c6, or from-indset)");
  }
  emit(text, out_path);
  return 0;
}

int finish_sweep(const ExperimentSpec& spec, const std::string& csv_path,
                 const std::string& json_path) {
  const AggregateReport report = run_sweep(spec);
  if (!csv_path.empty()) emit(report_csv(report), csv_path);
  emit(report_json(report) + "\n", json_path);
  if (report.identity_checked > 0 && report.identity_passed != report.identity_checked) {
    std::fprintf(stderr, "identity audits failed: %lld of %lld\n",
                 static_cast<long long>(report.identity_checked - report.identity_passed),
                 static_cast<long long>(report.identity_checked));
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-error actuation-channel bandit simulator"};
  app.require_subcommand(1);
  int rc = 0;

  // graph
  auto* graph = app.add_subcommand("graph", "confusability graph numerics");
  graph->require_subcommand(1);

  GraphArgs alpha_args;
  int alpha_power = 1;
  bool alpha_greedy = false;
  std::int64_t alpha_vcap = 1'000'000;
  std::int64_t alpha_scap = 4096;
  auto* alpha = graph->add_subcommand("alpha", "independence number of a strong power");
  alpha_args.attach(alpha);
  alpha->add_option("--power", alpha_power, "strong power exponent")->default_val(1);
  alpha->add_flag("--greedy", alpha_greedy, "greedy lower bound instead of the exact solver");
  alpha->add_option("--vertex-cap", alpha_vcap, "refuse powers larger than this");
  alpha->add_option("--solver-cap", alpha_scap, "exact solver vertex limit");
  alpha->callback([&] {
    rc = cmd_graph_alpha(alpha_args, alpha_power, alpha_greedy, alpha_vcap, alpha_scap);
  });

  GraphArgs nstar_args;
  std::int64_t nstar_messages = 0;
  int nstar_nmax = 8;
  std::int64_t nstar_vcap = 1'000'000;
  std::int64_t nstar_scap = 4096;
  auto* nstar = graph->add_subcommand("nstar", "minimal blocklength for a message count");
  nstar_args.attach(nstar);
  nstar->add_option("--messages", nstar_messages, "number of messages to carry")->required();
  nstar->add_option("--n-max", nstar_nmax, "largest blocklength to try");
  nstar->add_option("--vertex-cap", nstar_vcap, "refuse powers larger than this");
  nstar->add_option("--solver-cap", nstar_scap, "exact solver vertex limit");
  nstar->callback([&] {
    rc = cmd_graph_nstar(nstar_args, nstar_messages, nstar_nmax, nstar_vcap, nstar_scap);
  });

  // code
  auto* code = app.add_subcommand("code", "zero-error code construction");
  code->require_subcommand(1);
  GraphArgs code_args;
  std::string code_scheme;
  std::int64_t code_messages = 0;
  std::string code_out;
  auto* build = code->add_subcommand("build", "build and dump a code or calendar");
  build->add_option("--scheme", code_scheme, "slope-c5 | parity-c6 | from-indset")->required();
  code_args.attach(build);
  build->add_option("--messages", code_messages, "messages for from-indset (default: alphabet)");
  build->add_option("--out", code_out, "write to file instead of stdout");
  build->callback([&] { rc = cmd_code_build(code_scheme, code_args, code_messages, code_out); });

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one protocol, replicated");
  std::string sim_case;
  std::vector<double> sim_mu;
  std::string sim_law = "gaussian";
  double sim_delta = 0.1;
  double sim_eps = -1.0;
  std::string sim_channel_file;
  std::string sim_code = "auto", sim_schedule = "auto", sim_digit = "auto";
  std::int64_t sim_reps = 1;
  std::uint64_t sim_seed = 1;
  int sim_threads = 1;
  std::int64_t sim_round_cap = PhasedSeEngine::kDefaultRoundCap;
  double sim_sigma_threshold = 1e-9;
  bool sim_no_audit = false;
  std::string sim_dump_trace, sim_csv, sim_json;
  bool sim_print_config = false;
  sim->add_option("--case", sim_case, "clean | 1 | 2a | 2b | 3")->required();
  sim->add_option("--mu", sim_mu, "arm means (comma separated)")
      ->required()
      ->delimiter(',');
  sim->add_option("--law", sim_law, "gaussian | bernoulli | deterministic");
  sim->add_option("--delta", sim_delta, "confidence level");
  sim->add_option("--eps", sim_eps, "typewriter channel slip probability");
  sim->add_option("--channel", sim_channel_file, "JSON file with a channel object");
  sim->add_option("--code", sim_code, "request code selector (case 2a)");
  sim->add_option("--schedule", sim_schedule, "calendar selector (case 2b)");
  sim->add_option("--digit", sim_digit, "packet digit selector (case 3)");
  sim->add_option("--reps", sim_reps, "replications");
  sim->add_option("--seed", sim_seed, "base seed");
  sim->add_option("--threads", sim_threads, "worker threads");
  sim->add_option("--round-cap", sim_round_cap, "abort a run past this many rounds");
  sim->add_option("--sigma-threshold", sim_sigma_threshold,
                  "treat channels at or below this singular value as singular");
  sim->add_flag("--no-audit", sim_no_audit, "skip per-rep trace audits");
  sim->add_option("--dump-trace", sim_dump_trace, "directory for rep 0's trace CSV");
  sim->add_option("--csv", sim_csv, "write per-rep CSV here ('-' for stdout)");
  sim->add_option("--json", sim_json, "write the JSON summary here (default stdout)");
  sim->add_flag("--print-config", sim_print_config,
                "print the equivalent sweep config and exit");
  sim->callback([&] {
    ExperimentSpec spec;
    if (sim_case == "clean") spec.protocol = "clean";
    else if (sim_case == "1") spec.protocol = "case1";
    else if (sim_case == "2a") spec.protocol = "case2-scheme1";
    else if (sim_case == "2b") spec.protocol = "case2-scheme2";
    else if (sim_case == "3") spec.protocol = "case3";
    else throw ConfigError("unknown --case \"" + sim_case + "\"");
    spec.instance.mu = sim_mu;
    spec.instance.law = parse_reward_law(sim_law);
    spec.instance.delta = sim_delta;
    if (!sim_channel_file.empty()) {
      spec.channel = parse_channel_json(slurp(sim_channel_file));
    } else if (sim_eps >= 0.0) {
      spec.channel.type = "typewriter";
      spec.channel.k = static_cast<int>(sim_mu.size());
      spec.channel.eps = sim_eps;
    } else if (spec.protocol != "clean") {
      throw ConfigError("protocols over a channel need --eps or --channel");
    }
    spec.code = sim_code;
    spec.schedule = sim_schedule;
    spec.digit = sim_digit;
    spec.reps = sim_reps;
    spec.seed = sim_seed;
    spec.threads = sim_threads;
    spec.round_cap = sim_round_cap;
    spec.sigma_threshold = sim_sigma_threshold;
    spec.audit = !sim_no_audit;
    spec.dump_trace_dir = sim_dump_trace;
    if (sim_print_config) {
      std::cout << experiment_to_json(spec) << "\n";
      return;
    }
    rc = finish_sweep(spec, sim_csv, sim_json);
  });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run an experiment config file");
  std::string sweep_config, sweep_csv, sweep_json;
  sweep->add_option("config", sweep_config, "experiment JSON file")->required();
  sweep->add_option("--csv", sweep_csv, "write per-rep CSV here ('-' for stdout)");
  sweep->add_option("--json", sweep_json, "write the JSON summary here (default stdout)");
  sweep->callback(
      [&] { rc = finish_sweep(load_experiment_file(sweep_config), sweep_csv, sweep_json); });

  // reproduce
  auto* repro = app.add_subcommand("reproduce", "run a canned end-to-end check");
  std::string repro_id;
  bool repro_list = false;
  repro->add_option("id", repro_id, "check id");
  repro->add_flag("--list", repro_list, "list available checks");
  repro->callback([&] {
    if (repro_list || repro_id.empty()) {
      for (const ReproduceEntry& e : reproduce_catalog()) {
        std::printf("%-18s %s\n", e.id.c_str(), e.what.c_str());
      }
      rc = repro_list || repro_id.empty() ? 0 : 1;
      return;
    }
    std::string log;
    const bool ok = run_reproduce(repro_id, log);
    std::fputs(log.c_str(), stdout);
    std::printf("%s: %s\n", repro_id.c_str(), ok ? "PASS" : "FAIL");
    rc = ok ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return rc;
}
