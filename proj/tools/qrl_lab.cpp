#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrl/acceptance.hpp"
#include "qrl/analysis.hpp"
#include "qrl/config.hpp"
#include "qrl/harness.hpp"

namespace {

using namespace qrl;

Config load_config(const std::string& path, const std::vector<std::string>& sets) {
  Config cfg = path.empty() ? Config{} : Config::parse_file(path);
  for (const std::string& s : sets) cfg.apply_override(s);
  return cfg;
}

std::vector<double> parse_sigma_grid(const std::string& grid_spec) {
  // "lo:hi:log" or "lo:hi:points:log" or "lo:hi:points".
  std::vector<std::string> parts;
  std::string cur;
  for (char c : grid_spec) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2) throw ConfigError("sigma grid must look like lo:hi[:points][:log]");
  const double lo = std::stod(parts[0]);
  const double hi = std::stod(parts[1]);
  int points = 20;
  bool log_scale = false;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    if (parts[i] == "log")
      log_scale = true;
    else
      points = std::stoi(parts[i]);
  }
  if (log_scale) return log_grid(lo, hi, points);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * i / (points - 1);
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational quantum reinforcement learning lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "runs/out", checkpoint, run_dir;
  std::vector<std::string> overrides;
  std::vector<double> sigmas;
  std::string sigma_grid_spec;
  int episodes = 200, samples = 10000, grid_steps = 50, bench_runs = 10000;
  int window = 100;
  double threshold = 195.0;
  bool at_most = false;
  bool long_suite = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config file");
    cmd->add_option("--set", overrides, "override config entries (section.key=value)");
    cmd->add_option("--out", out_dir, "output directory");
  };

  CLI::App* train = app.add_subcommand("train", "train agents across seeds");
  add_common(train);

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint on a noise grid");
  add_common(evaluate);
  evaluate->add_option("--checkpoint", checkpoint, "trained parameters")->required();
  evaluate->add_option("--eval-sigmas", sigmas, "perturbation levels")->delimiter(',');
  evaluate->add_option("--episodes", episodes, "episodes per grid point");

  CLI::App* sweep = app.add_subcommand("sweep", "train across a sigma grid");
  add_common(sweep);
  sweep->add_option("--sigmas", sigmas, "training perturbation levels")->delimiter(',');

  CLI::App* analyze = app.add_subcommand("analyze", "circuit noise analysis");
  analyze->require_subcommand(1);
  CLI::App* perturbation = analyze->add_subcommand("perturbation", "mean output shift vs sigma");
  perturbation->add_option("--sigma-grid", sigma_grid_spec, "lo:hi[:points][:log]");
  perturbation->add_option("--sigmas", sigmas, "explicit sigma list")->delimiter(',');
  perturbation->add_option("--samples", samples, "perturbation draws per sigma");
  perturbation->add_option("--out", out_dir, "output directory");
  CLI::App* hessian_cmd = analyze->add_subcommand("hessian", "trace-of-Hessian distribution");
  hessian_cmd->add_option("--samples", samples, "random parameter draws");
  hessian_cmd->add_option("--out", out_dir, "output directory");

  CLI::App* shots_bench = app.add_subcommand("shots-bench", "shot-allocation benchmark");
  shots_bench->add_option("--runs", bench_runs, "runs per gap value");
  shots_bench->add_option("--out", out_dir, "output directory");

  CLI::App* surface = app.add_subcommand("export-surface", "policy / Q-value surfaces");
  add_common(surface);
  surface->add_option("--checkpoint", checkpoint, "trained parameters")->required();
  surface->add_option("--grid", grid_steps, "grid steps per axis");

  CLI::App* aggregate = app.add_subcommand("aggregate", "summarize a run directory");
  aggregate->add_option("--run-dir", run_dir, "directory with per-seed outputs")->required();
  aggregate->add_option("--window", window, "trailing window");
  aggregate->add_option("--threshold", threshold, "solved threshold");
  aggregate->add_flag("--at-most", at_most, "solved when the trailing mean drops below");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_flag("--long", long_suite, "include the training-scale checks");
  verify->add_option("--out", out_dir, "work directory for data files");

  CLI::App* gen_tsp = app.add_subcommand("gen-tsp-data", "write the frozen instance files");
  gen_tsp->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      return run_train(load_config(config_path, overrides), out_dir);
    }
    if (evaluate->parsed()) {
      if (sigmas.empty()) sigmas = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.5};
      return run_evaluate(load_config(config_path, overrides), checkpoint, sigmas,
                          episodes, out_dir);
    }
    if (sweep->parsed()) {
      if (sigmas.empty()) sigmas = {0.0, 0.1, 0.15, 0.16, 0.17, 0.18, 0.19, 0.2};
      return run_sweep(load_config(config_path, overrides), sigmas, out_dir);
    }
    if (perturbation->parsed()) {
      std::vector<double> grid = sigmas;
      if (grid.empty())
        grid = sigma_grid_spec.empty() ? log_grid(1e-3, 0.7, 20)
                                       : parse_sigma_grid(sigma_grid_spec);
      const auto spec = AnsatzSpec::build(AnsatzKind::HwePg, 4, 5, HeadKind::Policy);
      const PerturbationStudy study = perturbation_study(
          spec, feature_input({1.0, 1.0, 1.0, 1.0}),
          Observable::z_string({0, 1, 2, 3}), grid, samples, 0.3, 31);
      ensure_dir(out_dir);
      write_perturbation_csv(out_dir + "/perturbation_sweep.csv", study,
                             spec.circuit_params(), 1.0);
      std::printf("wrote %s (f0 %.4f, TrH %.3f)\n",
                  (out_dir + "/perturbation_sweep.csv").c_str(), study.f_theta0,
                  study.trace_h);
      return 0;
    }
    if (hessian_cmd->parsed()) {
      const auto spec = AnsatzSpec::build(AnsatzKind::HwePg, 4, 5, HeadKind::Policy);
      const HessianDistribution dist = hessian_distribution(
          spec, feature_input({1.0, 1.0, 1.0, 1.0}),
          Observable::z_string({0, 1, 2, 3}), samples, 21);
      ensure_dir(out_dir);
      write_hessian_csv(out_dir + "/hessian_distribution.csv", dist);
      std::printf("wrote %s (mean %.4f, std %.3f, predicted %.3f)\n",
                  (out_dir + "/hessian_distribution.csv").c_str(), dist.mean,
                  dist.stddev, dist.predicted_std);
      return 0;
    }
    if (shots_bench->parsed()) {
      return run_shots_bench(out_dir, bench_runs);
    }
    if (surface->parsed()) {
      return run_export_surface(load_config(config_path, overrides), checkpoint,
                                grid_steps, out_dir);
    }
    if (aggregate->parsed()) {
      return run_aggregate(run_dir, window, threshold, !at_most);
    }
    if (verify->parsed()) {
      auto results = run_fast_acceptance(out_dir);
      if (long_suite) {
        auto more = run_long_acceptance(out_dir);
        results.insert(results.end(), more.begin(), more.end());
      }
      return print_and_score(results) == 0 ? 0 : 3;
    }
    if (gen_tsp->parsed()) {
      ensure_dir(out_dir + "/train");
      ensure_dir(out_dir + "/eval");
      const auto train_set = tsp_instance_set(7, 0, 100, 5);
      const auto eval_set = tsp_instance_set(7, 100, 100, 5);
      char name[64];
      for (int i = 0; i < 100; ++i) {
        std::snprintf(name, sizeof(name), "/train/instance_%03d.txt", i);
        save_tsp_instance(out_dir + name, train_set[i]);
        std::snprintf(name, sizeof(name), "/eval/instance_%03d.txt", i);
        save_tsp_instance(out_dir + name, eval_set[i]);
      }
      std::printf("wrote 200 instances under %s\n", out_dir.c_str());
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
