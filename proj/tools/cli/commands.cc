#include "cli/commands.h"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli/config.h"
#include "oti/analysis.h"
#include "oti/errors.h"
#include "oti/format.h"
#include "oti/instance_gen.h"
#include "oti/instance_io.h"
#include "oti/trace_io.h"

namespace oti::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Output directory that refuses to clobber existing files unless forced.
class OutputDir {
 public:
  OutputDir(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {
    fs::create_directories(dir_);
  }

  std::ofstream open(const std::string& name) const {
    const fs::path p = dir_ / name;
    if (fs::exists(p) && !force_) {
      throw ConfigError(p.string() + " already exists (use --force to overwrite)");
    }
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + p.string());
    return out;
  }

  void write_json(const std::string& name, const json& j) const {
    auto out = open(name);
    out << j.dump(2) << '\n';
  }

  OutputDir sub(const std::string& name) const { return OutputDir(dir_ / name, force_); }
  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  bool force_;
};

struct Check {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  std::string relation;
  bool pass = false;
};

json verdict_json(const std::vector<Check>& checks) {
  json arr = json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"check", c.name},
                   {"statistic", c.statistic},
                   {"threshold", c.threshold},
                   {"relation", c.relation},
                   {"pass", c.pass}});
    all = all && c.pass;
  }
  return {{"checks", arr}, {"pass", all}};
}

bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

void print_checks(const std::vector<Check>& checks, std::ostream& log) {
  for (const auto& c : checks) {
    log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << format_double(c.statistic)
        << ' ' << c.relation << ' ' << format_double(c.threshold) << '\n';
  }
}

struct LoadedInstance {
  LocalInstanceSet instance;
  std::string source;
};

LoadedInstance load(const ExperimentConfig& cfg) {
  if (cfg.instance_file) {
    return {load_instance(*cfg.instance_file).instance, cfg.instance_file->string()};
  }
  return {LocalInstanceSet::toy(), "toy"};
}

void write_traces(const OutputDir& out, const AggregateResult& agg) {
  {
    auto f = out.open("episodes.csv");
    write_episodes_csv(f, agg.traces);
  }
  {
    auto f = out.open("c_pair.csv");
    write_pair_matrix_csv(f, agg.traces, PairMatrix::kIncentives);
  }
  {
    auto f = out.open("free_pulls.csv");
    write_pair_matrix_csv(f, agg.traces, PairMatrix::kFreePulls);
  }
}

AggregateResult run_batch(const LocalInstanceSet& inst, const SimConfig& sim,
                          PrincipalMode mode, const OutputDir& out, bool full_trace) {
  if (!full_trace) return run_monte_carlo(inst, sim, mode);
  auto trace = out.open("trace.csv");
  trace << "run,";
  write_step_header(trace);
  std::vector<EpisodeTrace> traces;
  for (int i = 0; i < sim.runs; ++i) {
    Episode ep(inst, sim, episode_seed(sim.master_seed, i), mode);
    EpisodeHooks hooks;
    hooks.on_action = [&](const StepRecord& rec) {
      trace << i + 1 << ',';
      write_step_record(trace, rec);
    };
    ep.run(hooks);
    traces.push_back(ep.trace());
  }
  return aggregate(std::move(traces));
}

bool cmd_simulate(const ExperimentConfig& cfg, const OutputDir& out, bool full_trace,
                  PrincipalMode mode, std::ostream& log) {
  const LoadedInstance li = load(cfg);
  const GlobalView view = derive_global_view(li.instance);
  const AggregateResult agg = run_batch(li.instance, cfg.sim, mode, out, full_trace);
  write_traces(out, agg);

  const auto report = free_pull_report(li.instance, cfg.sim.alpha,
                                       cfg.sim.kappa_steps(), agg);
  {
    auto f = out.open("free_pull_report.csv");
    f << "m,k,measured_mean,kl_reference,ucb_threshold\n";
    for (const auto& r : report) {
      f << r.m + 1 << ',' << r.k + 1 << ',' << format_double(r.measured) << ','
        << format_double(r.kl_reference) << ',' << format_double(r.ucb_threshold)
        << '\n';
    }
  }
  const double coverage = coverage_check(agg.traces);
  json summary = {
      {"command", mode == PrincipalMode::kOti ? "simulate" : "passive"},
      {"instance", li.source},
      {"config", to_json(cfg.sim)},
      {"global_view", to_json(view)},
      {"aggregate", to_json(agg)},
      {"coverage", coverage},
      {"coverage_target", 1.0 - cfg.sim.delta},
  };
  out.write_json("summary.json", summary);
  log << (mode == PrincipalMode::kOti ? "OTI" : "passive") << ": accuracy "
      << format_double(agg.accuracy) << ", mean C(T) " << format_double(agg.mean_cost)
      << ", coverage " << format_double(coverage) << " over " << agg.runs << " runs\n";
  return true;
}

bool cmd_sweep_delta(const ExperimentConfig& cfg, const OutputDir& out, std::ostream& log) {
  const LoadedInstance li = load(cfg);
  const DeltaSweepResult res = delta_sweep(li.instance, cfg.sim, cfg.deltas);
  {
    auto f = out.open("delta_sweep.csv");
    f << "delta,log_inv_delta,mean_C_total,stddev_C_total,accuracy\n";
    for (const auto& p : res.points) {
      f << format_double(p.delta) << ',' << format_double(p.log_inv_delta) << ','
        << format_double(p.mean_cost) << ',' << format_double(p.stddev_cost) << ','
        << format_double(p.accuracy) << '\n';
    }
  }
  std::vector<Check> checks;
  const double r2 = res.fit.r_squared.value_or(0.0);
  checks.push_back({"delta_scaling_r_squared", r2, 0.9, ">=", res.applicable && r2 >= 0.9});
  checks.push_back({"delta_scaling_slope", res.fit.slope, 0.0, ">", res.fit.slope > 0.0});
  json v = verdict_json(checks);
  v["fit"] = {{"slope", res.fit.slope},
              {"intercept", res.fit.intercept},
              {"r_squared", res.fit.r_squared ? json(*res.fit.r_squared) : json(nullptr)},
              {"applicable", res.applicable}};
  v["config"] = to_json(cfg.sim);
  out.write_json("verdict.json", v);
  print_checks(checks, log);
  return all_pass(checks);
}

bool cmd_sweep_m(const ExperimentConfig& cfg, const OutputDir& out, std::ostream& log) {
  const MSweepResult res = m_sweep(cfg.generator, cfg.sim, cfg.m_values);
  {
    auto f = out.open("m_sweep.csv");
    f << "M,mean_C_total,stddev_C_total,accuracy,delta_min,attempts\n";
    for (const auto& r : res.rows) {
      f << r.num_agents << ',' << format_double(r.mean_cost) << ','
        << format_double(r.stddev_cost) << ',' << format_double(r.accuracy) << ','
        << format_double(r.delta_min) << ',' << r.attempts << '\n';
    }
  }
  std::vector<Check> checks;
  checks.push_back({"m_sweep_spearman", res.spearman_rho, 0.0, "<=", res.spearman_rho <= 0.0});
  json v = verdict_json(checks);
  v["first_zero_cost_M"] = res.first_zero_cost_m ? json(*res.first_zero_cost_m) : json(nullptr);
  v["config"] = to_json(cfg.sim);
  v["generator"] = to_json(cfg.generator);
  out.write_json("verdict.json", v);
  print_checks(checks, log);
  return all_pass(checks);
}

bool cmd_verify_ucb(const ExperimentConfig& cfg, const OutputDir& out, std::ostream& log) {
  const UcbBoundReport rep =
      verify_ucb_lower_bound(cfg.ucb_means, cfg.sim.alpha, cfg.ucb_lambda, cfg.ucb_runs,
                             cfg.sim.master_seed, cfg.sim.threads);
  if (!rep.condition_ok) {
    log << "warning: Lambda does not satisfy the horizon condition; running anyway\n";
  }
  const LocalGaps gaps = gaps_of_row(cfg.ucb_means);
  {
    auto f = out.open("ucb_bound.csv");
    f << "k,mean,gap,threshold,min_pulls\n";
    for (size_t k = 0; k < cfg.ucb_means.size(); ++k) {
      f << k + 1 << ',' << format_double(cfg.ucb_means[k]) << ','
        << format_double(gaps.gaps[k]) << ',' << format_double(rep.thresholds[k]) << ','
        << rep.min_pulls[k] << '\n';
    }
  }
  std::vector<Check> checks;
  checks.push_back(
      {"ucb_lower_bound_violation_rate", rep.violation_rate, rep.tolerance, "<=", rep.pass()});
  json v = verdict_json(checks);
  v["violation_count"] = rep.violation_count;
  v["runs"] = rep.runs;
  v["bound_2K_over_Lambda"] = rep.bound;
  v["condition_ok"] = rep.condition_ok;
  v["alpha"] = rep.alpha;
  v["Lambda"] = rep.lambda;
  out.write_json("verdict.json", v);
  print_checks(checks, log);
  return all_pass(checks);
}

bool cmd_lemma1(const ExperimentConfig& cfg, const OutputDir& out, std::ostream& log) {
  const LoadedInstance li = load(cfg);
  const std::int64_t from =
      cfg.lemma1_refuse_from > 0 ? cfg.lemma1_refuse_from : cfg.sim.kappa_steps() + 1;
  const Lemma1Report rep = lemma1_empirical_check(li.instance, cfg.sim, cfg.lemma1_agent, from);
  {
    auto f = out.open("lemma1.csv");
    f << "behavior,mean_R,stderr_R,runs_used\n";
    f << "always_follow," << format_double(rep.mean_follow) << ','
      << format_double(rep.se_follow) << ',' << rep.runs_used << '\n';
    f << "refuse_once," << format_double(rep.mean_refuse) << ','
      << format_double(rep.se_refuse) << ',' << rep.runs_used << '\n';
  }
  if (rep.runs_excluded > 0) {
    log << "note: " << rep.runs_excluded
        << " run(s) excluded: the agent received no offer after step " << from << '\n';
  }
  std::vector<Check> checks;
  checks.push_back({"lemma1_follow_minus_refuse", rep.mean_diff, -2.0 * rep.se_diff, ">=",
                    rep.pass()});
  checks.push_back({"lemma1_bonus_after_refusal",
                    static_cast<double>(rep.max_bonus_after_refusal), 0.0, "<=",
                    cfg.sim.never_ban || rep.max_bonus_after_refusal == 0});
  json v = verdict_json(checks);
  v["agent"] = rep.agent + 1;
  v["refuse_from"] = from;
  v["runs_used"] = rep.runs_used;
  v["runs_excluded"] = rep.runs_excluded;
  v["mean_follow_all_runs"] = rep.mean_follow_all;
  v["mean_refuse_all_runs"] = rep.mean_refuse_all;
  out.write_json("verdict.json", v);
  print_checks(checks, log);
  return all_pass(checks);
}

void cmd_generate(const ExperimentConfig& cfg, const OutputDir& out, std::ostream& log) {
  Rng rng(cfg.generator_seed);
  const GeneratedInstance g = generate_random_instance(cfg.generator, rng);
  InstanceFile file{g.instance, {}};
  file.metadata.emplace_back("seed", std::to_string(cfg.generator_seed));
  file.metadata.emplace_back("attempts", std::to_string(g.attempts));
  file.metadata.emplace_back("generator.K", std::to_string(cfg.generator.num_arms));
  file.metadata.emplace_back("generator.M", std::to_string(cfg.generator.num_agents));
  file.metadata.emplace_back("generator.base_low", format_double(cfg.generator.base_low));
  file.metadata.emplace_back("generator.base_high", format_double(cfg.generator.base_high));
  file.metadata.emplace_back("generator.local_variance",
                             format_double(cfg.generator.local_variance));
  file.metadata.emplace_back("generator.dmin_low", format_double(cfg.generator.dmin_low));
  file.metadata.emplace_back("generator.dmin_high", format_double(cfg.generator.dmin_high));
  auto f = out.open("instance.txt");
  write_instance(f, file);
  log << "instance with M = " << cfg.generator.num_agents << ", K = " << cfg.generator.num_arms
      << ", delta_min = " << format_double(derive_global_view(g.instance).delta_min)
      << " accepted after " << g.attempts << " attempt(s)\n";
}

const char* kReproReadme = R"(# Reproduction run

Sub-directories:

- toy_oti/          OTI on the 2-agent, 3-arm toy instance. Expected: accuracy 1.0,
                    no incentives on (agent 1, arm 1) or (agent 2, arm 3), most
                    incentives on arm 2 (mean_C_pair in summary.json).
- toy_passive/      Passive principal on the same instance. Expected: accuracy
                    roughly one half.
- delta_sweep/      Mean C(T) against ln(1/delta). Expected: increasing, close to linear.
- m_sweep/          Mean C(T) against M on generated 30-arm instances. Expected:
                    non-increasing in M.
- stochastic/       Agents accept offers with probability 0.8, no bans. Expected:
                    accuracy 1.0 and the same zero pattern as toy_oti.
- ucb_bound/        Spontaneous exploration of standalone alpha-UCB against its
                    logarithmic threshold. Expected: at most 2K/Lambda violations.

Each directory holds CSV tables plus summary.json or verdict.json.
)";

bool cmd_repro(const ExperimentConfig& cfg, const OutputDir& out, std::ostream& log) {
  bool ok = true;
  log << "[toy] OTI on the toy instance\n";
  cmd_simulate(cfg, out.sub("toy_oti"), false, PrincipalMode::kOti, log);
  log << "[toy] passive principal\n";
  cmd_simulate(cfg, out.sub("toy_passive"), false, PrincipalMode::kPassive, log);
  log << "[delta] sweep over delta\n";
  ok = cmd_sweep_delta(cfg, out.sub("delta_sweep"), log) && ok;
  log << "[m] sweep over M\n";
  {
    ExperimentConfig m = cfg;
    m.sim.track_confidence = false;
    ok = cmd_sweep_m(m, out.sub("m_sweep"), log) && ok;
  }
  log << "[stochastic] stochastic compliance without bans\n";
  {
    ExperimentConfig s = cfg;
    s.sim.behaviors = {IncentiveBehavior::stochastic_follow(0.8)};
    s.sim.never_ban = true;
    cmd_simulate(s, out.sub("stochastic"), false, PrincipalMode::kOti, log);
  }
  log << "[ucb] alpha-UCB spontaneous exploration\n";
  ok = cmd_verify_ucb(cfg, out.sub("ucb_bound"), log) && ok;
  auto readme = out.open("README.md");
  readme << kReproReadme;
  return ok;
}

ExperimentConfig resolve_config(const RunManifest& mf, std::ostream& log) {
  std::vector<std::string> overrides = mf.overrides;
  if (mf.seed) overrides.push_back("sim.seed=" + std::to_string(*mf.seed));
  if (mf.runs) overrides.push_back("sim.runs=" + std::to_string(*mf.runs));
  if (mf.threads) overrides.push_back("sim.threads=" + std::to_string(*mf.threads));
  if (mf.instance) overrides.push_back("instance.file=" + mf.instance->string());
  ExperimentConfig cfg = parse_config(mf.config_path, overrides);
  for (const auto& w : cfg.warnings) log << "warning: " << w << '\n';
  return cfg;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "simulate",          "passive",      "sweep-delta", "sweep-m", "verify-ucb-bound",
      "generate-instance", "lemma1-check", "repro"};
  return names;
}

int run_manifest(const RunManifest& mf, std::ostream& log) {
  try {
    const ExperimentConfig cfg = resolve_config(mf, log);
    const OutputDir out(mf.output_dir, mf.force);
    bool ok = true;
    if (mf.command == "simulate") {
      cmd_simulate(cfg, out, mf.full_trace, PrincipalMode::kOti, log);
    } else if (mf.command == "passive") {
      cmd_simulate(cfg, out, mf.full_trace, PrincipalMode::kPassive, log);
    } else if (mf.command == "sweep-delta") {
      ok = cmd_sweep_delta(cfg, out, log);
    } else if (mf.command == "sweep-m") {
      ok = cmd_sweep_m(cfg, out, log);
    } else if (mf.command == "verify-ucb-bound") {
      ok = cmd_verify_ucb(cfg, out, log);
    } else if (mf.command == "generate-instance") {
      cmd_generate(cfg, out, log);
    } else if (mf.command == "lemma1-check") {
      ok = cmd_lemma1(cfg, out, log);
    } else if (mf.command == "repro") {
      ok = cmd_repro(cfg, out, log);
    } else {
      log << "error: unknown command '" << mf.command << "'\n";
      return kExitUsage;
    }
    return ok ? kExitOk : kExitCheckFailed;
  } catch (const GenerationExhausted& e) {
    log << "error: " << e.what() << '\n';
    return kExitGenerationExhausted;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Observe-then-incentivize bandit simulator"};
  app.require_subcommand(1);
  RunManifest mf;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", mf.config_path, "Config file (key = value with [sections])");
    sub->add_option("--out", mf.output_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", mf.seed, "Master seed");
    sub->add_option("--runs", mf.runs, "Monte Carlo runs");
    sub->add_option("--set", mf.overrides, "Override SECTION.KEY=VALUE (repeatable)");
    sub->add_option("--threads", mf.threads, "Worker threads");
    sub->add_option("--instance", mf.instance, "Instance file (default: toy instance)");
    sub->add_flag("--full-trace", mf.full_trace, "Write per-step records to trace.csv");
    sub->add_flag("--force", mf.force, "Overwrite existing output files");
    sub->callback([&mf, sub] { mf.command = sub->get_name(); });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  return run_manifest(mf, std::cerr);
}

}  // namespace oti::cli
