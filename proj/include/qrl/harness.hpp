#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qrl/agents.hpp"
#include "qrl/ansatz.hpp"
#include "qrl/config.hpp"
#include "qrl/noise.hpp"

namespace qrl {

inline constexpr const char* kCodeVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Checkpoints: versioned header, named slot table, little-endian doubles,
// optional optimizer state.

struct Checkpoint {
  std::vector<ParamSlot> slots;
  std::vector<double> params;
  std::vector<double> adam_m, adam_v;  // empty when absent
  long adam_steps = 0;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// ---------------------------------------------------------------------------
// Experiment assembly from a parsed config

struct ExperimentSetup {
  std::string env;    // "cartpole" | "tsp"
  std::string agent;  // "q" | "pg"
  AnsatzSpec spec;
  NoiseConfig noise;
  QLearningConfig q_config;
  ReinforceConfig pg_config;
  int episodes = 1000;
  SolvedCriterion solved;
  std::vector<std::uint64_t> seeds;
  int n_cities = 5;
  bool clip_velocities = true;
  std::uint64_t instance_seed = 7;
  int train_instances = 100;
  int eval_instances = 100;
};

ExperimentSetup setup_from_config(const Config& cfg);
NoiseConfig noise_from_config(const Config& cfg, const std::string& table = "noise");

// Frozen instance sets regenerate deterministically from (seed, index):
// training instances use indices 0..n-1, evaluation instances n..2n-1.
std::vector<TspInstance> tsp_instance_set(std::uint64_t seed, int first_index,
                                          int count, int n_cities);

std::unique_ptr<RlTask> make_task(const ExperimentSetup& setup, bool evaluation);

// ---------------------------------------------------------------------------
// Output plumbing

void ensure_dir(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

void write_training_csv(const std::string& path,
                        const std::vector<TrainingLogRow>& rows);
void write_updates_jsonl(const std::string& path,
                         const std::vector<UpdateLogRow>& rows);

void write_manifest(const std::string& path, const Config& cfg,
                    const std::vector<std::string>& outputs);

// ---------------------------------------------------------------------------
// Commands (each returns a process exit code)

int run_train(const Config& cfg, const std::string& out_dir);
int run_evaluate(const Config& cfg, const std::string& checkpoint_path,
                 const std::vector<double>& eval_sigmas, int episodes,
                 const std::string& out_dir);
int run_sweep(const Config& cfg, const std::vector<double>& train_sigmas,
              const std::string& out_dir);
int run_aggregate(const std::string& run_dir, int window = 100,
                  double threshold = 195.0, bool at_least = true);
int run_shots_bench(const std::string& out_dir, int runs_per_gap);
int run_export_surface(const Config& cfg, const std::string& checkpoint_path,
                       int grid_steps, const std::string& out_dir);

struct AggregateSummary {
  int n_runs = 0;
  std::vector<double> mean_per_episode;
  std::vector<double> std_per_episode;
  std::vector<double> trailing_mean;  // window from the solved criterion
  int solved_episode = -1;
  std::int64_t total_shots = 0;
};

AggregateSummary aggregate_runs(const std::vector<std::string>& training_csvs,
                                int window, double threshold, bool at_least);

}  // namespace qrl
