// Command line front end: solve / verify / oracle / bench.
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kgroup/runner.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Options that override config-file values only when given on the command
// line.
struct SolveFlags {
  std::string config_path;
  std::string problem, input, format, backend, output, trace;
  int k = 0, layers = 0, hidden_dim = 0, feature_dim = 0, fc_layers = 0;
  int epochs = 0, restarts = 0, t_zero = 0, snapshot_interval = 0, threads = 0;
  double alpha = 0, beta = 0, mis_penalty = 0, init_scale = 0;
  double learning_rate = 0, gamma0 = 0, gamma_cap = 0, lambda_cap = 0;
  std::uint64_t seed = 0;
  bool no_anneal = false, no_normalize_balance = false;
};

void add_solve_options(CLI::App* sc, SolveFlags& f,
                       std::vector<std::pair<CLI::Option*, std::function<void(kgroup::RunConfig&)>>>& apply) {
  auto opt = [&](CLI::Option* o, std::function<void(kgroup::RunConfig&)> fn) {
    apply.emplace_back(o, std::move(fn));
  };
  sc->add_option("--config", f.config_path, "JSON run configuration");
  opt(sc->add_option("--problem", f.problem,
                     "coloring | strong-coloring | proper-coloring | partition | "
                     "hypergraph-partition | maxcut | mis"),
      [&f](kgroup::RunConfig& c) { c.problem = f.problem; });
  opt(sc->add_option("--input", f.input, "instance file"),
      [&f](kgroup::RunConfig& c) { c.input = f.input; });
  opt(sc->add_option("--format", f.format, "auto | edgelist | hgr"),
      [&f](kgroup::RunConfig& c) { c.format = f.format; });
  opt(sc->add_option("--k", f.k, "number of groups (0 = problem default)"),
      [&f](kgroup::RunConfig& c) { c.k = f.k; });
  opt(sc->add_option("--alpha", f.alpha, "partition cut weight"),
      [&f](kgroup::RunConfig& c) { c.alpha = f.alpha; });
  opt(sc->add_option("--beta", f.beta, "partition balance weight"),
      [&f](kgroup::RunConfig& c) { c.beta = f.beta; });
  opt(sc->add_flag("--raw-balance", f.no_normalize_balance,
                   "use the unnormalized balance term"),
      [](kgroup::RunConfig& c) { c.normalize_balance = false; });
  opt(sc->add_option("--mis-penalty", f.mis_penalty, "independence penalty (> 1)"),
      [&f](kgroup::RunConfig& c) { c.mis_penalty = f.mis_penalty; });
  opt(sc->add_option("--backend", f.backend, "direct | message-passing"),
      [&f](kgroup::RunConfig& c) { c.backend = f.backend; });
  opt(sc->add_option("--layers", f.layers, "message-passing rounds (0 = default)"),
      [&f](kgroup::RunConfig& c) { c.layers = f.layers; });
  opt(sc->add_option("--hidden-dim", f.hidden_dim, "encoder hidden width"),
      [&f](kgroup::RunConfig& c) { c.hidden_dim = f.hidden_dim; });
  opt(sc->add_option("--feature-dim", f.feature_dim, "random input feature width"),
      [&f](kgroup::RunConfig& c) { c.feature_dim = f.feature_dim; });
  opt(sc->add_option("--fc-layers", f.fc_layers, "readout depth"),
      [&f](kgroup::RunConfig& c) { c.fc_layers = f.fc_layers; });
  opt(sc->add_option("--init-scale", f.init_scale, "weight init scale"),
      [&f](kgroup::RunConfig& c) { c.init_scale = f.init_scale; });
  opt(sc->add_option("--lr", f.learning_rate, "learning rate"),
      [&f](kgroup::RunConfig& c) { c.learning_rate = f.learning_rate; });
  opt(sc->add_option("--epochs", f.epochs, "epochs per restart"),
      [&f](kgroup::RunConfig& c) { c.epochs = f.epochs; });
  opt(sc->add_option("--restarts", f.restarts, "independent restarts"),
      [&f](kgroup::RunConfig& c) { c.restarts = f.restarts; });
  opt(sc->add_flag("--no-anneal", f.no_anneal, "disable the concentration schedule"),
      [](kgroup::RunConfig& c) { c.anneal = false; });
  opt(sc->add_option("--gamma0", f.gamma0, "initial concentration weight (0 = default)"),
      [&f](kgroup::RunConfig& c) { c.gamma0 = f.gamma0; });
  opt(sc->add_option("--t-zero", f.t_zero, "epoch where the schedule crosses zero"),
      [&f](kgroup::RunConfig& c) { c.t_zero = f.t_zero; });
  opt(sc->add_option("--gamma-cap", f.gamma_cap, "late-phase weight cap (0 = |gamma0|)"),
      [&f](kgroup::RunConfig& c) { c.gamma_cap = f.gamma_cap; });
  opt(sc->add_option("--lambda-cap", f.lambda_cap, "penalty ramp cap"),
      [&f](kgroup::RunConfig& c) { c.lambda_cap = f.lambda_cap; });
  opt(sc->add_option("--seed", f.seed, "master seed"),
      [&f](kgroup::RunConfig& c) { c.seed = f.seed; });
  opt(sc->add_option("--snapshot-interval", f.snapshot_interval,
                     "epochs between hardened evaluations"),
      [&f](kgroup::RunConfig& c) { c.snapshot_interval = f.snapshot_interval; });
  opt(sc->add_option("--threads", f.threads, "restart worker threads (0 = auto)"),
      [&f](kgroup::RunConfig& c) { c.threads = f.threads; });
  opt(sc->add_option("--output", f.output, "result JSON path"),
      [&f](kgroup::RunConfig& c) { c.output = f.output; });
  opt(sc->add_option("--trace", f.trace, "epoch trace CSV path"),
      [&f](kgroup::RunConfig& c) { c.trace = f.trace; });
}

kgroup::RunConfig resolve_config(
    const SolveFlags& f,
    const std::vector<std::pair<CLI::Option*, std::function<void(kgroup::RunConfig&)>>>& apply) {
  kgroup::RunConfig cfg;
  if (!f.config_path.empty()) cfg = kgroup::run_config_from_json(slurp(f.config_path));
  for (const auto& [option, fn] : apply)
    if (option->count() > 0) fn(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-grouping solver: relaxed one-hot polynomial minimization with "
               "exhaustive and greedy baselines"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "train a relaxed assignment and harden it");
  SolveFlags solve_flags;
  std::vector<std::pair<CLI::Option*, std::function<void(kgroup::RunConfig&)>>> solve_apply;
  add_solve_options(solve, solve_flags, solve_apply);

  auto* verify = app.add_subcommand("verify", "re-check a stored result from first principles");
  std::string solution_path, verify_input;
  verify->add_option("--solution", solution_path, "result JSON produced by solve")->required();
  verify->add_option("--input", verify_input, "instance file override");

  auto* oracle = app.add_subcommand("oracle", "exhaustive optimum for small instances");
  SolveFlags oracle_flags;
  std::vector<std::pair<CLI::Option*, std::function<void(kgroup::RunConfig&)>>> oracle_apply;
  add_solve_options(oracle, oracle_flags, oracle_apply);
  std::uint64_t limit = 10'000'000;
  oracle->add_option("--limit", limit, "maximum states to enumerate");

  auto* bench = app.add_subcommand("bench", "run a seeded config sweep and tabulate results");
  std::string sweep_path, bench_csv;
  bench->add_option("--sweep", sweep_path, "sweep description JSON")->required();
  bench->add_option("--output", bench_csv, "CSV output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits cleanly; any usage error maps onto the documented code.
    const int code = app.exit(e);
    return code == 0 ? 0 : kgroup::kExitError;
  }

  try {
    if (solve->parsed()) return kgroup::cmd_solve(resolve_config(solve_flags, solve_apply), std::cout);
    if (verify->parsed()) return kgroup::cmd_verify(solution_path, verify_input, std::cout);
    if (oracle->parsed())
      return kgroup::cmd_oracle(resolve_config(oracle_flags, oracle_apply), limit, std::cout);
    if (bench->parsed()) return kgroup::cmd_bench(sweep_path, bench_csv, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kgroup::kExitError;
  }
  return kgroup::kExitError;
}
