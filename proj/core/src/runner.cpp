#include "kgroup/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "kgroup/generators.hpp"

namespace kgroup {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

const std::set<std::string>& run_config_keys() {
  static const std::set<std::string> keys = {
      "problem",       "input",         "format",     "k",
      "alpha",         "beta",          "normalize_balance", "mis_penalty",
      "backend",       "layers",        "hidden_dim", "feature_dim",
      "fc_layers",     "init_scale",    "learning_rate", "epochs",
      "restarts",      "anneal",        "gamma0",     "t_zero",
      "gamma_cap",     "lambda_cap",    "seed",       "snapshot_interval",
      "threads",       "output",        "trace"};
  return keys;
}

// Applies only the keys present in `j`; unknown keys (other than the ones in
// `ignore`) are configuration typos and throw.
void apply_run_config(RunConfig& c, const json& j, const std::set<std::string>& ignore = {}) {
  if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
  for (const auto& item : j.items()) {
    if (ignore.count(item.key())) continue;
    if (!run_config_keys().count(item.key()))
      throw std::runtime_error("unknown config key: " + item.key());
  }
  c.problem = j.value("problem", c.problem);
  c.input = j.value("input", c.input);
  c.format = j.value("format", c.format);
  c.k = j.value("k", c.k);
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  c.normalize_balance = j.value("normalize_balance", c.normalize_balance);
  c.mis_penalty = j.value("mis_penalty", c.mis_penalty);
  c.backend = j.value("backend", c.backend);
  c.layers = j.value("layers", c.layers);
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.feature_dim = j.value("feature_dim", c.feature_dim);
  c.fc_layers = j.value("fc_layers", c.fc_layers);
  c.init_scale = j.value("init_scale", c.init_scale);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.restarts = j.value("restarts", c.restarts);
  c.anneal = j.value("anneal", c.anneal);
  c.gamma0 = j.value("gamma0", c.gamma0);
  c.t_zero = j.value("t_zero", c.t_zero);
  c.gamma_cap = j.value("gamma_cap", c.gamma_cap);
  c.lambda_cap = j.value("lambda_cap", c.lambda_cap);
  c.seed = j.value("seed", c.seed);
  c.snapshot_interval = j.value("snapshot_interval", c.snapshot_interval);
  c.threads = j.value("threads", c.threads);
  c.output = j.value("output", c.output);
  c.trace = j.value("trace", c.trace);
}

json run_config_json(const RunConfig& c) {
  return json{{"problem", c.problem},
              {"input", c.input},
              {"format", c.format},
              {"k", c.k},
              {"alpha", c.alpha},
              {"beta", c.beta},
              {"normalize_balance", c.normalize_balance},
              {"mis_penalty", c.mis_penalty},
              {"backend", c.backend},
              {"layers", c.layers},
              {"hidden_dim", c.hidden_dim},
              {"feature_dim", c.feature_dim},
              {"fc_layers", c.fc_layers},
              {"init_scale", c.init_scale},
              {"learning_rate", c.learning_rate},
              {"epochs", c.epochs},
              {"restarts", c.restarts},
              {"anneal", c.anneal},
              {"gamma0", c.gamma0},
              {"t_zero", c.t_zero},
              {"gamma_cap", c.gamma_cap},
              {"lambda_cap", c.lambda_cap},
              {"seed", c.seed},
              {"snapshot_interval", c.snapshot_interval},
              {"threads", c.threads},
              {"output", c.output},
              {"trace", c.trace}};
}

json solve_result_json(const SolveResult& r) {
  json restarts = json::array();
  for (const auto& s : r.restarts) {
    restarts.push_back(json{{"restart", s.restart},
                            {"seed", s.seed},
                            {"feasible", s.feasible},
                            {"objective", s.objective},
                            {"metric", s.metric},
                            {"first_feasible_epoch", s.first_feasible_epoch},
                            {"diverged", s.diverged}});
  }
  return json{{"schema", r.schema},
              {"tool_version", r.tool_version},
              {"feasible", r.feasible},
              {"objective", r.objective},
              {"assignment", r.assignment},
              {"metrics",
               json{{"violated_terms", r.violated_terms},
                    {"cut", r.cut},
                    {"colors", r.colors},
                    {"mis_size", r.mis_size},
                    {"balance", r.balance},
                    {"b1", r.b1},
                    {"b2", r.b2},
                    {"group_sizes", r.group_sizes}}},
              {"first_feasible_epoch", r.first_feasible_epoch},
              {"best_restart", r.best_restart},
              {"best_epoch", r.best_epoch},
              {"diverged_restarts", r.diverged_restarts},
              {"wall_seconds", r.wall_seconds},
              {"restarts", restarts},
              {"config", run_config_json(r.config)}};
}

long metric_of(ObjectiveKind kind, const VerifyReport& rep) {
  switch (kind) {
    case ObjectiveKind::kColoring: return rep.colors_used;
    case ObjectiveKind::kPartition: return rep.cut_count;
    case ObjectiveKind::kMaxcut: return rep.cut_count;
    case ObjectiveKind::kMis: return rep.mis_size;
  }
  return 0;
}

long metric_of(ObjectiveKind kind, const HardEval& eval) {
  switch (kind) {
    case ObjectiveKind::kColoring: return eval.colors_used;
    case ObjectiveKind::kPartition: return eval.constraint_count;
    case ObjectiveKind::kMaxcut: return eval.constraint_count;
    case ObjectiveKind::kMis: return eval.mis_size;
  }
  return 0;
}

bool close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

void require_match(bool ok, const std::string& field) {
  if (!ok) throw std::runtime_error("stored result does not match recomputation: " + field);
}

std::string csv_double(double v) {
  std::ostringstream s;
  s << std::setprecision(12) << v;
  return s.str();
}

}  // namespace

std::string run_config_to_json(const RunConfig& config) {
  return run_config_json(config).dump(2) + "\n";
}

RunConfig run_config_from_json(const std::string& text) {
  RunConfig c;
  apply_run_config(c, json::parse(text));
  return c;
}

ProblemInstance make_problem(const RunConfig& config) {
  ProblemInstance p;
  p.kind = problem_kind_from_string(config.problem);
  p.k = config.k;
  p.alpha = config.alpha;
  p.beta = config.beta;
  p.normalize_balance = config.normalize_balance;
  p.mis_penalty = config.mis_penalty;
  if (config.input.empty()) throw std::runtime_error("no input file given");
  switch (p.kind) {
    case ProblemKind::kStrongColoring:
    case ProblemKind::kProperColoring:
    case ProblemKind::kHypergraphPartition:
      p.structure = load_hypergraph(config.input, config.format);
      break;
    default:
      p.structure = load_graph(config.input, config.format).as_hypergraph();
      break;
  }
  return p;
}

double default_gamma0(ObjectiveKind objective) {
  return objective == ObjectiveKind::kPartition ? -0.25 : -2.5;
}

TrainConfig make_train_config(const RunConfig& config, ObjectiveKind objective) {
  TrainConfig tc;
  tc.opt.learning_rate = config.learning_rate;
  tc.opt.epochs = config.epochs;
  tc.opt.restarts = config.restarts;
  if (config.anneal) {
    double g0 = config.gamma0 != 0.0 ? config.gamma0 : default_gamma0(objective);
    tc.anneal = AnnealSchedule::linear(g0, config.t_zero);
    if (config.gamma_cap > 0.0) tc.anneal.cap = config.gamma_cap;
  } else {
    tc.anneal = AnnealSchedule::off();
  }
  int ramp_epochs = config.t_zero > 0 ? config.t_zero : 1;
  tc.conflict_ramp = PenaltyRamp::over(config.lambda_cap, ramp_epochs);
  tc.usage_ramp = PenaltyRamp::over(config.lambda_cap, ramp_epochs);
  tc.encoder.backend = encoder_backend_from_string(config.backend);
  tc.encoder.layers =
      config.layers > 0 ? config.layers : (objective == ObjectiveKind::kPartition ? 4 : 2);
  tc.encoder.hidden_dim = config.hidden_dim;
  tc.encoder.feature_dim = config.feature_dim;
  tc.encoder.fc_layers = config.fc_layers;
  tc.encoder.init_scale = config.init_scale;
  tc.seed = config.seed;
  tc.snapshot_interval = config.snapshot_interval;
  tc.threads = config.threads;
  return tc;
}

void apply_report(SolveResult& result, const VerifyReport& report) {
  result.feasible = report.feasible;
  result.objective = report.objective;
  result.violated_terms = report.violated_terms;
  result.cut = report.cut_count;
  result.colors = report.colors_used;
  result.mis_size = report.mis_size;
  result.balance = report.balance;
  result.b1 = report.b1;
  result.b2 = report.b2;
  result.group_sizes = report.group_sizes;
}

std::string solve_result_to_json(const SolveResult& result) {
  return solve_result_json(result).dump(2) + "\n";
}

SolveResult solve_result_from_json(const std::string& text) {
  json j = json::parse(text);
  SolveResult r;
  r.schema = j.value("schema", 0);
  if (r.schema != kResultSchema)
    throw std::runtime_error("unsupported result schema " + std::to_string(r.schema));
  r.tool_version = j.value("tool_version", std::string());
  r.feasible = j.value("feasible", false);
  r.objective = j.value("objective", 0.0);
  r.assignment = j.value("assignment", std::vector<int>{});
  if (j.contains("metrics")) {
    const json& m = j["metrics"];
    r.violated_terms = m.value("violated_terms", 0L);
    r.cut = m.value("cut", -1L);
    r.colors = m.value("colors", -1);
    r.mis_size = m.value("mis_size", -1L);
    r.balance = m.value("balance", 0.0);
    r.b1 = m.value("b1", 0.0);
    r.b2 = m.value("b2", 0.0);
    r.group_sizes = m.value("group_sizes", std::vector<int>{});
  }
  r.first_feasible_epoch = j.value("first_feasible_epoch", -1);
  r.best_restart = j.value("best_restart", -1);
  r.best_epoch = j.value("best_epoch", -1);
  r.diverged_restarts = j.value("diverged_restarts", 0);
  r.wall_seconds = j.value("wall_seconds", 0.0);
  if (j.contains("restarts")) {
    for (const json& s : j["restarts"]) {
      RestartSummary sum;
      sum.restart = s.value("restart", 0);
      sum.seed = s.value("seed", std::uint64_t{0});
      sum.feasible = s.value("feasible", false);
      sum.objective = s.value("objective", 0.0);
      sum.metric = s.value("metric", 0L);
      sum.first_feasible_epoch = s.value("first_feasible_epoch", -1);
      sum.diverged = s.value("diverged", false);
      r.restarts.push_back(sum);
    }
  }
  if (j.contains("config")) apply_run_config(r.config, j["config"]);
  return r;
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out << "epoch,loss,mean_gini,metric,gamma,lambda1,lambda2\n";
  for (const auto& row : trace) {
    out << row.epoch << ',' << csv_double(row.loss) << ',' << csv_double(row.mean_gini) << ',';
    if (row.has_metric) out << csv_double(row.metric);
    out << ',' << csv_double(row.gamma) << ',' << csv_double(row.lambda1) << ','
        << csv_double(row.lambda2) << '\n';
  }
  return out.str();
}

int cmd_solve(const RunConfig& config, std::ostream& out) {
  ProblemInstance p = make_problem(config);
  CompiledLoss loss = compile(p);
  TrainConfig tc = make_train_config(config, loss.objective_kind);
  TrainResult tr = train(loss, tc);

  SolveResult res;
  res.config = config;
  res.first_feasible_epoch = tr.first_feasible_epoch;
  res.best_restart = tr.best_restart;
  res.best_epoch = tr.best_epoch;
  res.diverged_restarts = tr.diverged_restarts;
  res.wall_seconds = tr.wall_seconds;
  for (const auto& ro : tr.restarts) {
    RestartSummary sum;
    sum.restart = ro.restart;
    sum.seed = ro.seed;
    sum.feasible = ro.has_best && ro.best_eval.feasible;
    sum.objective = ro.has_best ? ro.best_eval.objective : 0.0;
    sum.metric = ro.has_best ? metric_of(loss.objective_kind, ro.best_eval) : -1;
    sum.first_feasible_epoch = ro.first_feasible_epoch;
    sum.diverged = ro.diverged;
    res.restarts.push_back(sum);
  }
  if (tr.has_solution) {
    res.assignment = tr.labels;
    VerifyReport rep = verify(loss.problem, tr.labels);
    // The independent verifier must agree with the compiled evaluation that
    // selected this assignment; a mismatch is a solver bug, not a bad run.
    if (rep.feasible != tr.eval.feasible)
      throw std::runtime_error("verifier feasibility disagrees with compiled evaluation");
    if (!close(rep.objective, tr.eval.objective))
      throw std::runtime_error("verifier objective disagrees with compiled evaluation");
    apply_report(res, rep);
  }

  if (!config.trace.empty()) {
    int source = tr.best_restart >= 0 ? tr.best_restart : 0;
    if (source < static_cast<int>(tr.restarts.size()))
      write_file(config.trace, trace_to_csv(tr.restarts[source].trace));
  }
  std::string text = solve_result_to_json(res);
  if (!config.output.empty()) write_file(config.output, text);
  out << text;
  return res.feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_verify(const std::string& solution_path, const std::string& input_override,
               std::ostream& out) {
  SolveResult stored = solve_result_from_json(read_file(solution_path));
  RunConfig cfg = stored.config;
  if (!input_override.empty()) cfg.input = input_override;
  ProblemInstance p = compile(make_problem(cfg)).problem;
  if (stored.assignment.empty()) {
    out << "{\"verified\": false, \"reason\": \"no assignment stored\"}\n";
    return kExitInfeasible;
  }
  VerifyReport rep = verify(p, stored.assignment);
  require_match(rep.feasible == stored.feasible, "feasible");
  require_match(close(rep.objective, stored.objective), "objective");
  require_match(rep.violated_terms == stored.violated_terms, "violated_terms");
  require_match(stored.cut < 0 || rep.cut_count == stored.cut, "cut");
  require_match(stored.colors < 0 || rep.colors_used == stored.colors, "colors");
  require_match(stored.mis_size < 0 || rep.mis_size == stored.mis_size, "mis_size");
  require_match(close(rep.balance, stored.balance), "balance");
  require_match(close(rep.b1, stored.b1), "b1");
  require_match(close(rep.b2, stored.b2), "b2");
  require_match(stored.group_sizes.empty() || rep.group_sizes == stored.group_sizes,
                "group_sizes");
  json verdict{{"verified", true},
               {"feasible", rep.feasible},
               {"objective", rep.objective},
               {"violated_terms", rep.violated_terms}};
  out << verdict.dump() << "\n";
  return rep.feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_oracle(const RunConfig& config, std::uint64_t limit, std::ostream& out) {
  ProblemInstance p = make_problem(config);
  CompiledLoss loss = compile(p);
  BruteForceResult bf = brute_force(loss, limit);
  VerifyReport rep = verify(loss.problem, bf.labels);
  json j{{"schema", kResultSchema},
         {"tool_version", kToolVersion},
         {"exhaustive", true},
         {"feasible", bf.found_feasible},
         {"objective", bf.objective},
         {"assignment", bf.labels},
         {"states_visited", bf.states_visited},
         {"metrics",
          json{{"violated_terms", rep.violated_terms},
               {"cut", rep.cut_count},
               {"colors", rep.colors_used},
               {"mis_size", rep.mis_size},
               {"balance", rep.balance},
               {"b1", rep.b1},
               {"b2", rep.b2},
               {"group_sizes", rep.group_sizes}}},
         {"config", run_config_json(config)}};
  std::string text = j.dump(2) + "\n";
  if (!config.output.empty()) write_file(config.output, text);
  out << text;
  return bf.found_feasible ? kExitFeasible : kExitInfeasible;
}

int cmd_bench(const std::string& sweep_path, const std::string& csv_path, std::ostream& out) {
  json sweep = json::parse(read_file(sweep_path));
  if (!sweep.is_object()) throw std::runtime_error("sweep must be a JSON object");

  RunConfig base;
  if (sweep.contains("base")) apply_run_config(base, sweep["base"]);

  std::string inst_kind = "graph";
  int vertices = 0, edges = 0, min_size = 2, max_size = 3;
  std::vector<std::uint64_t> seeds;
  if (sweep.contains("instances")) {
    const json& inst = sweep["instances"];
    inst_kind = inst.value("kind", inst_kind);
    vertices = inst.value("vertices", 0);
    edges = inst.value("edges", 0);
    min_size = inst.value("min_size", min_size);
    max_size = inst.value("max_size", max_size);
    seeds = inst.value("seeds", seeds);
  }
  if (inst_kind != "graph" && inst_kind != "hypergraph")
    throw std::runtime_error("unknown instance kind: " + inst_kind);

  struct NamedConfig {
    std::string name;
    RunConfig cfg;
  };
  std::vector<NamedConfig> configs;
  if (sweep.contains("configs")) {
    for (const json& entry : sweep["configs"]) {
      NamedConfig nc;
      nc.name = entry.value("name", "config" + std::to_string(configs.size()));
      nc.cfg = base;
      apply_run_config(nc.cfg, entry, {"name"});
      configs.push_back(nc);
    }
  }

  std::ostringstream csv;
  csv << "# kgroup " << kToolVersion << " " << kGeneratorVersion << "\n";
  csv << "config,instance_seed,feasible,violated,metric,objective,wall_s\n";

  for (const auto& nc : configs) {
    std::vector<double> metrics, objectives, walls, feas, violated;
    for (std::uint64_t s : seeds) {
      ProblemInstance p;
      p.kind = problem_kind_from_string(nc.cfg.problem);
      p.k = nc.cfg.k;
      p.alpha = nc.cfg.alpha;
      p.beta = nc.cfg.beta;
      p.normalize_balance = nc.cfg.normalize_balance;
      p.mis_penalty = nc.cfg.mis_penalty;
      if (inst_kind == "graph")
        p.structure = random_graph(vertices, edges, s).as_hypergraph();
      else
        p.structure = random_hypergraph(vertices, edges, min_size, max_size, s);

      CompiledLoss loss = compile(p);
      TrainConfig tc = make_train_config(nc.cfg, loss.objective_kind);
      tc.seed = nc.cfg.seed ^ s;  // distinct restart streams per instance
      TrainResult tr = train(loss, tc);

      double metric = -1.0, objective = 0.0, viol = 0.0;
      bool ok = false;
      if (tr.has_solution) {
        VerifyReport rep = verify(loss.problem, tr.labels);
        metric = static_cast<double>(metric_of(loss.objective_kind, rep));
        objective = rep.objective;
        viol = static_cast<double>(rep.violated_terms);
        ok = rep.feasible;
      }
      csv << nc.name << ',' << s << ',' << (ok ? 1 : 0) << ',' << csv_double(viol) << ','
          << csv_double(metric) << ',' << csv_double(objective) << ','
          << csv_double(tr.wall_seconds) << '\n';
      metrics.push_back(metric);
      objectives.push_back(objective);
      walls.push_back(tr.wall_seconds);
      feas.push_back(ok ? 1.0 : 0.0);
      violated.push_back(viol);
    }
    if (!seeds.empty()) {
      auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
      };
      auto stddev = [&](const std::vector<double>& v) {
        double m = mean(v), s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return std::sqrt(s / static_cast<double>(v.size()));
      };
      csv << nc.name << ",mean," << csv_double(mean(feas)) << ',' << csv_double(mean(violated))
          << ',' << csv_double(mean(metrics)) << ',' << csv_double(mean(objectives)) << ','
          << csv_double(mean(walls)) << '\n';
      csv << nc.name << ",stddev,," << csv_double(stddev(violated)) << ','
          << csv_double(stddev(metrics)) << ',' << csv_double(stddev(objectives)) << ','
          << csv_double(stddev(walls)) << '\n';
    }
  }

  std::string text = csv.str();
  if (!csv_path.empty()) {
    write_file(csv_path, text);
    out << "wrote " << csv_path << "\n";
  } else {
    out << text;
  }
  return kExitFeasible;
}

}  // namespace kgroup
