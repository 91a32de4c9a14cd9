#include "qrl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qrl/executor.hpp"
#include "qrl/shots.hpp"

namespace qrl {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr char kMagic[8] = {'Q', 'R', 'L', 'C', 'K', 'P', 'T', '\x01'};

void put_u32(std::ofstream& f, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  f.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::ifstream& f) {
  unsigned char b[4];
  f.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ofstream& f, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  f.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::ifstream& f) {
  unsigned char b[8];
  f.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(kMagic, 8);
  put_u32(f, static_cast<std::uint32_t>(ckpt.slots.size()));
  for (const ParamSlot& s : ckpt.slots) {
    put_u32(f, static_cast<std::uint32_t>(s.name.size()));
    f.write(s.name.data(), static_cast<std::streamsize>(s.name.size()));
    put_u32(f, static_cast<std::uint32_t>(s.offset));
    put_u32(f, static_cast<std::uint32_t>(s.count));
  }
  put_u32(f, static_cast<std::uint32_t>(ckpt.params.size()));
  for (double v : ckpt.params) put_f64(f, v);
  const bool with_opt = !ckpt.adam_m.empty();
  put_u32(f, with_opt ? 1 : 0);
  if (with_opt) {
    put_u32(f, static_cast<std::uint32_t>(ckpt.adam_steps));
    for (double v : ckpt.adam_m) put_f64(f, v);
    for (double v : ckpt.adam_v) put_f64(f, v);
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open checkpoint " + path);
  char magic[8];
  f.read(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw std::runtime_error("not a checkpoint file: " + path);
  Checkpoint ckpt;
  const std::uint32_t n_slots = get_u32(f);
  for (std::uint32_t i = 0; i < n_slots; ++i) {
    ParamSlot s;
    const std::uint32_t len = get_u32(f);
    s.name.resize(len);
    f.read(s.name.data(), len);
    s.offset = static_cast<int>(get_u32(f));
    s.count = static_cast<int>(get_u32(f));
    ckpt.slots.push_back(std::move(s));
  }
  const std::uint32_t total = get_u32(f);
  ckpt.params.resize(total);
  for (double& v : ckpt.params) v = get_f64(f);
  if (get_u32(f) == 1) {
    ckpt.adam_steps = static_cast<long>(get_u32(f));
    ckpt.adam_m.resize(total);
    for (double& v : ckpt.adam_m) v = get_f64(f);
    ckpt.adam_v.resize(total);
    for (double& v : ckpt.adam_v) v = get_f64(f);
  }
  if (!f) throw std::runtime_error("truncated checkpoint " + path);
  return ckpt;
}

// ---------------------------------------------------------------------------
// Config -> experiment

NoiseConfig noise_from_config(const Config& cfg, const std::string& table) {
  NoiseConfig noise;
  noise.gaussian_sigma = cfg.get_double(table + ".sigma", 0.0);

  const std::string channel = cfg.get_string(table + ".channel", "none");
  if (channel == "depolarizing") {
    noise.channel = ChannelKind::Depolarizing;
    noise.depol_p = cfg.get_double(table + ".depol_p", 0.0);
  } else if (channel == "custom") {
    noise.channel = ChannelKind::CustomHardware;
    const std::string preset = cfg.get_string(table + ".preset", "");
    HardwareParams hw;
    if (!preset.empty()) {
      if (preset.size() != 1) throw ConfigError("hardware preset must be a..d");
      hw = hardware_preset(preset[0]);
    }
    hw.depol_1q = cfg.get_double(table + ".depol_1q", hw.depol_1q);
    hw.depol_2q = cfg.get_double(table + ".depol_2q", hw.depol_2q);
    hw.amp_damp = cfg.get_double(table + ".amp_damp", hw.amp_damp);
    hw.meas_bitflip = cfg.get_double(table + ".meas_bitflip", hw.meas_bitflip);
    noise.hardware = hw;
  } else if (channel != "none") {
    throw ConfigError("unknown noise channel '" + channel + "'");
  }
  noise.trajectories = static_cast<int>(cfg.get_int(table + ".trajectories", 100));

  if (cfg.get_bool(table + ".flexible", false)) {
    ShotAllocConfig alloc;
    alloc.m_init = static_cast<int>(cfg.get_int(table + ".m_init", 100));
    alloc.m_inc = static_cast<int>(cfg.get_int(table + ".m_inc", 100));
    alloc.m_max = static_cast<int>(cfg.get_int(table + ".m_max", 10000));
    noise.shots = ShotSetting::flexible(alloc);
  } else {
    const int shots = static_cast<int>(cfg.get_int(table + ".shots", 0));
    if (shots > 0) noise.shots = ShotSetting::fixed(shots);
  }
  noise.validate();
  return noise;
}

ExperimentSetup setup_from_config(const Config& cfg) {
  const std::string env = cfg.get_string("env.kind", "cartpole");
  const std::string agent = cfg.get_string("agent.kind", "q");
  if (env != "cartpole" && env != "tsp")
    throw ConfigError("env.kind must be cartpole or tsp");
  if (agent != "q" && agent != "pg")
    throw ConfigError("agent.kind must be q or pg");

  const HeadKind head = agent == "q" ? HeadKind::QValue : HeadKind::Policy;
  const int n_cities = static_cast<int>(cfg.get_int("env.n_cities", 5));

  AnsatzKind kind;
  int n_qubits, default_layers;
  if (env == "cartpole") {
    kind = agent == "q" ? AnsatzKind::HweQ : AnsatzKind::HwePg;
    n_qubits = 4;
    default_layers = 5;
  } else {
    kind = AnsatzKind::Eqc;
    n_qubits = n_cities;
    default_layers = 1;
  }
  const int layers = static_cast<int>(cfg.get_int("ansatz.layers", default_layers));

  ExperimentSetup setup{.env = env,
                        .agent = agent,
                        .spec = AnsatzSpec::build(kind, n_qubits, layers, head),
                        .noise = noise_from_config(cfg),
                        .q_config = {},
                        .pg_config = {},
                        .episodes = static_cast<int>(cfg.get_int("agent.episodes", 1000)),
                        .solved = {},
                        .seeds = {},
                        .n_cities = n_cities,
                        .clip_velocities = cfg.get_bool("env.clip_velocities", true),
                        .instance_seed =
                            static_cast<std::uint64_t>(cfg.get_int("env.instance_seed", 7)),
                        .train_instances =
                            static_cast<int>(cfg.get_int("env.train_instances", 100)),
                        .eval_instances =
                            static_cast<int>(cfg.get_int("env.eval_instances", 100))};

  const double default_gamma = env == "cartpole" ? 0.99 : 0.9;
  AdamConfig adam;
  adam.lr_circuit = cfg.get_double("agent.lr_circuit", 0.001);
  adam.lr_input_scaling = cfg.get_double("agent.lr_input_scaling", 0.001);
  adam.lr_head = cfg.get_double("agent.lr_head", 0.1);

  setup.q_config.gamma = cfg.get_double("agent.gamma", default_gamma);
  setup.q_config.batch_size =
      static_cast<int>(cfg.get_int("agent.batch_size", env == "cartpole" ? 16 : 32));
  setup.q_config.replay_capacity =
      static_cast<int>(cfg.get_int("agent.replay_capacity", 10000));
  setup.q_config.train_every = static_cast<int>(cfg.get_int("agent.train_every", 1));
  setup.q_config.target_sync_steps = static_cast<int>(
      cfg.get_int("agent.target_sync_steps", env == "cartpole" ? 30 : 0));
  setup.q_config.target_sync_episodes = static_cast<int>(
      cfg.get_int("agent.target_sync_episodes", env == "cartpole" ? 0 : 1));
  setup.q_config.epsilon.start = cfg.get_double("agent.eps_start", 1.0);
  setup.q_config.epsilon.end = cfg.get_double("agent.eps_end", 0.01);
  setup.q_config.epsilon.decay = cfg.get_double("agent.eps_decay", 0.99);
  setup.q_config.adam = adam;

  setup.pg_config.gamma = cfg.get_double("agent.gamma", default_gamma);
  setup.pg_config.episodes_per_update =
      static_cast<int>(cfg.get_int("agent.episodes_per_update", 10));
  setup.pg_config.adam = adam;
  setup.pg_config.constant_baseline = cfg.get_bool("agent.baseline", false);
  setup.pg_config.baseline = cfg.get_double("agent.baseline_value", 0.0);

  setup.solved.window = static_cast<int>(cfg.get_int("agent.solved_window", 100));
  if (env == "cartpole") {
    setup.solved.threshold = cfg.get_double("agent.solved_threshold", 195.0);
    setup.solved.at_least = true;
  } else {
    setup.solved.threshold = cfg.get_double("agent.solved_threshold", 1.05);
    setup.solved.at_least = false;
  }

  const std::vector<double> seed_list =
      cfg.get_double_list("experiment.seeds", {0.0});
  for (double s : seed_list)
    setup.seeds.push_back(static_cast<std::uint64_t>(s));
  return setup;
}

std::vector<TspInstance> tsp_instance_set(std::uint64_t seed, int first_index,
                                          int count, int n_cities) {
  std::vector<TspInstance> out;
  out.reserve(count);
  Rng root(seed, 400);
  for (int i = 0; i < count; ++i) {
    Rng inst_rng = root.derive(static_cast<std::uint64_t>(first_index + i));
    out.push_back(tsp_generate_instance(n_cities, inst_rng));
  }
  return out;
}

std::unique_ptr<RlTask> make_task(const ExperimentSetup& setup, bool evaluation) {
  const HeadKind head = setup.agent == "q" ? HeadKind::QValue : HeadKind::Policy;
  if (setup.env == "cartpole")
    return std::make_unique<CartPoleTask>(head, setup.clip_velocities);
  if (evaluation) {
    return std::make_unique<TspTask>(
        tsp_instance_set(setup.instance_seed, setup.train_instances,
                         setup.eval_instances, setup.n_cities),
        /*sequential=*/true);
  }
  return std::make_unique<TspTask>(
      tsp_instance_set(setup.instance_seed, 0, setup.train_instances, setup.n_cities),
      /*sequential=*/false);
}

// ---------------------------------------------------------------------------
// Output plumbing

void ensure_dir(const std::string& path) { fs::create_directories(path); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
}

void write_training_csv(const std::string& path,
                        const std::vector<TrainingLogRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "episode,score,epsilon,shots,wall_ms\n";
  char buf[160];
  for (const TrainingLogRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%lld,%.3f\n", r.episode, r.score,
                  r.epsilon, static_cast<long long>(r.shots), r.wall_ms);
    f << buf;
  }
}

void write_updates_jsonl(const std::string& path,
                         const std::vector<UpdateLogRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  for (const UpdateLogRow& r : rows) {
    json j{{"update", r.update}, {"loss", r.loss}, {"grad_norm", r.grad_norm}};
    f << j.dump() << "\n";
  }
}

void write_manifest(const std::string& path, const Config& cfg,
                    const std::vector<std::string>& outputs) {
  char hash_hex[32];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(cfg.hash()));
  json j{{"config_hash", hash_hex},
         {"code_version", kCodeVersion},
         {"outputs", outputs},
         {"config", cfg.canonical_dump()}};
  write_text_file(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Commands

namespace {

TrainingResult run_single_training(const ExperimentSetup& setup, std::uint64_t seed,
                                   ShotLedger* ledger) {
  auto task = make_task(setup, /*evaluation=*/false);
  if (setup.agent == "q")
    return train_q_agent(setup.spec, *task, setup.noise, setup.q_config,
                         setup.episodes, setup.solved, seed, ledger);
  return train_pg_agent(setup.spec, *task, setup.noise, setup.pg_config,
                        setup.episodes, setup.solved, seed, ledger);
}

std::string seed_dir(const std::string& out_dir, std::uint64_t seed) {
  return out_dir + "/seed_" + std::to_string(seed);
}

void write_seed_outputs(const ExperimentSetup& setup, const std::string& dir,
                        const TrainingResult& result) {
  ensure_dir(dir);
  write_training_csv(dir + "/training_log.csv", result.episodes);
  write_updates_jsonl(dir + "/updates.jsonl", result.updates);
  Checkpoint ckpt;
  ckpt.slots = setup.spec.layout().slots;
  ckpt.params = result.final_params;
  ckpt.adam_m = result.adam_m;
  ckpt.adam_v = result.adam_v;
  ckpt.adam_steps = result.adam_steps;
  save_checkpoint(dir + "/checkpoint.bin", ckpt);
}

}  // namespace

int run_train(const Config& cfg, const std::string& out_dir) {
  const ExperimentSetup setup = setup_from_config(cfg);
  ensure_dir(out_dir);
  std::vector<std::string> outputs;
  for (std::uint64_t seed : setup.seeds) {
    const std::string dir = seed_dir(out_dir, seed);
    const TrainingResult result = run_single_training(setup, seed, nullptr);
    write_seed_outputs(setup, dir, result);
    outputs.push_back(dir + "/training_log.csv");
  }
  write_manifest(out_dir + "/manifest.json", cfg, outputs);
  return 0;
}

int run_evaluate(const Config& cfg, const std::string& checkpoint_path,
                 const std::vector<double>& eval_sigmas, int episodes,
                 const std::string& out_dir) {
  ExperimentSetup setup = setup_from_config(cfg);
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  if (static_cast<int>(ckpt.params.size()) != setup.spec.layout().total)
    throw ConfigError("checkpoint does not match the configured ansatz");
  ensure_dir(out_dir);

  std::ofstream f(out_dir + "/eval_grid.csv");
  if (!f) throw std::runtime_error("cannot open eval_grid.csv for writing");
  f << "eval_sigma,mean,std,episodes\n";
  char buf[120];
  for (double sigma : eval_sigmas) {
    NoiseConfig noise = setup.noise;
    noise.gaussian_sigma = sigma;
    auto task = make_task(setup, /*evaluation=*/true);
    const EvalStats stats = evaluate_agent(setup.spec, ckpt.params, *task, noise,
                                           episodes, setup.seeds.front());
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d\n", sigma, stats.mean,
                  stats.stddev, episodes);
    f << buf;
  }
  f.close();
  write_manifest(out_dir + "/manifest.json", cfg, {out_dir + "/eval_grid.csv"});
  return 0;
}

int run_sweep(const Config& cfg, const std::vector<double>& train_sigmas,
              const std::string& out_dir) {
  ensure_dir(out_dir);
  std::vector<std::string> outputs;
  for (double sigma : train_sigmas) {
    Config sub = cfg;
    sub.set("noise.sigma", sigma);
    char label[48];
    std::snprintf(label, sizeof(label), "sigma_%g", sigma);
    const std::string dir = out_dir + "/" + label;
    const int rc = run_train(sub, dir);
    if (rc != 0) return rc;
    outputs.push_back(dir);
  }
  write_manifest(out_dir + "/manifest.json", cfg, outputs);
  return 0;
}

AggregateSummary aggregate_runs(const std::vector<std::string>& training_csvs,
                                int window, double threshold, bool at_least) {
  AggregateSummary summary;
  std::vector<std::vector<double>> scores_per_run;
  for (const std::string& path : training_csvs) {
    std::ifstream f(path);
    if (!f) continue;  // missing/corrupt logs are skipped with a warning
    std::string line;
    std::getline(f, line);  // header
    std::vector<double> scores;
    std::int64_t last_shots = 0;
    while (std::getline(f, line)) {
      std::istringstream ss(line);
      std::string field;
      std::vector<std::string> fields;
      while (std::getline(ss, field, ',')) fields.push_back(field);
      if (fields.size() < 4) continue;
      scores.push_back(std::stod(fields[1]));
      last_shots = std::stoll(fields[3]);
    }
    if (scores.empty()) {
      std::fprintf(stderr, "warning: skipping empty log %s\n", path.c_str());
      continue;
    }
    summary.total_shots += last_shots;
    scores_per_run.push_back(std::move(scores));
  }
  summary.n_runs = static_cast<int>(scores_per_run.size());
  if (summary.n_runs == 0) return summary;

  std::size_t max_len = 0;
  for (const auto& s : scores_per_run) max_len = std::max(max_len, s.size());
  summary.mean_per_episode.resize(max_len, 0.0);
  summary.std_per_episode.resize(max_len, 0.0);
  for (std::size_t e = 0; e < max_len; ++e) {
    double sum = 0.0, sum_sq = 0.0;
    int n = 0;
    for (const auto& s : scores_per_run) {
      if (e < s.size()) {
        sum += s[e];
        sum_sq += s[e] * s[e];
        ++n;
      }
    }
    const double mean = sum / n;
    summary.mean_per_episode[e] = mean;
    summary.std_per_episode[e] =
        n > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1))) : 0.0;
  }

  // Trailing mean of the across-run average curve.
  summary.trailing_mean.resize(max_len, 0.0);
  double acc = 0.0;
  for (std::size_t e = 0; e < max_len; ++e) {
    acc += summary.mean_per_episode[e];
    if (e >= static_cast<std::size_t>(window)) acc -= summary.mean_per_episode[e - window];
    if (e + 1 >= static_cast<std::size_t>(window)) {
      summary.trailing_mean[e] = acc / window;
      const bool hit = at_least ? summary.trailing_mean[e] >= threshold
                                : summary.trailing_mean[e] <= threshold;
      if (hit && summary.solved_episode < 0)
        summary.solved_episode = static_cast<int>(e);
    }
  }
  return summary;
}

int run_aggregate(const std::string& run_dir, int window, double threshold,
                  bool at_least) {
  std::vector<std::string> csvs;
  for (const auto& entry : fs::recursive_directory_iterator(run_dir))
    if (entry.is_regular_file() && entry.path().filename() == "training_log.csv")
      csvs.push_back(entry.path().string());
  std::sort(csvs.begin(), csvs.end());
  if (csvs.empty()) {
    std::fprintf(stderr, "no training logs under %s\n", run_dir.c_str());
    return 2;
  }
  const AggregateSummary summary = aggregate_runs(csvs, window, threshold, at_least);

  std::ofstream f(run_dir + "/aggregate.csv");
  f << "episode,mean,std,trailing_mean\n";
  char buf[160];
  for (std::size_t e = 0; e < summary.mean_per_episode.size(); ++e) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", e,
                  summary.mean_per_episode[e], summary.std_per_episode[e],
                  summary.trailing_mean[e]);
    f << buf;
  }
  f.close();

  json j{{"runs", summary.n_runs},
         {"solved_episode", summary.solved_episode},
         {"total_shots", summary.total_shots}};
  write_text_file(run_dir + "/summary.json", j.dump(2) + "\n");
  return 0;
}

int run_shots_bench(const std::string& out_dir, int runs_per_gap) {
  ensure_dir(out_dir);
  const ShotAllocConfig alloc{100, 100, 10000};
  const std::vector<double> gaps = {0.0, 0.02, 0.05, 0.1, 0.2, 0.4, 0.6};

  std::ofstream f(out_dir + "/shots_bench.csv");
  f << "gap,mean_m_est,argmax_accuracy,runs\n";
  char buf[120];
  for (double gap : gaps) {
    double m_sum = 0.0;
    int correct = 0;
    for (int r = 0; r < runs_per_gap; ++r) {
      Rng rng(2024, static_cast<std::uint64_t>(r) * 100 + 11);
      // Independent Gaussian estimates, std 1/sqrt(m) each.
      struct GaussianPair final : public PooledEstimator {
        double mu0, mu1;
        Rng* rng;
        double sum0 = 0.0, sum1 = 0.0;
        int m = 0;
        void add_shots(int k) override {
          for (int i = 0; i < k; ++i) {
            sum0 += mu0 + rng->normal();
            sum1 += mu1 + rng->normal();
          }
          m += k;
        }
        std::vector<double> estimates() const override {
          return {sum0 / m, sum1 / m};
        }
      } est;
      est.mu0 = gap;
      est.mu1 = 0.0;
      est.rng = &rng;
      const AllocationResult res = allocate_shots(est, alloc);
      m_sum += res.m_est;
      if (res.estimates[0] >= res.estimates[1]) ++correct;
    }
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d\n", gap,
                  m_sum / runs_per_gap,
                  static_cast<double>(correct) / runs_per_gap, runs_per_gap);
    f << buf;
  }
  return 0;
}

int run_export_surface(const Config& cfg, const std::string& checkpoint_path,
                       int grid_steps, const std::string& out_dir) {
  ExperimentSetup setup = setup_from_config(cfg);
  if (setup.env != "cartpole") throw ConfigError("surface export reads CartPole agents");
  const Checkpoint ckpt = load_checkpoint(checkpoint_path);
  if (static_cast<int>(ckpt.params.size()) != setup.spec.layout().total)
    throw ConfigError("checkpoint does not match the configured ansatz");
  ensure_dir(out_dir);

  // Pairs of state dimensions scanned with the remaining inputs at zero:
  // (angle, position), (angle, cart velocity), (angle, pole velocity).
  struct Axis {
    int dim;
    double lo, hi;
    const char* name;
  };
  const Axis angle{2, -0.25, 0.25, "pole_angle"};
  const std::vector<Axis> others = {{0, -2.4, 2.4, "cart_position"},
                                    {1, -2.5, 2.5, "cart_velocity"},
                                    {3, -2.5, 2.5, "pole_velocity"}};

  // Perturbations stay off during export.
  const NoiseConfig noise = NoiseConfig::exact();
  const auto obs_q = cartpole_q_observables();
  const Observable obs_pg = cartpole_pg_observable();

  std::ofstream f(out_dir + "/policy_surface.csv");
  f << "pair,v1,v2,value_right\n";
  char buf[200];
  Rng rng(0, 0);
  for (const Axis& other : others) {
    for (int i = 0; i < grid_steps; ++i) {
      const double v1 = angle.lo + (angle.hi - angle.lo) * i / (grid_steps - 1);
      for (int j = 0; j < grid_steps; ++j) {
        const double v2 = other.lo + (other.hi - other.lo) * j / (grid_steps - 1);
        std::vector<double> state(4, 0.0);
        state[angle.dim] = v1;
        state[other.dim] = v2;
        const AnsatzInput input = feature_input(state);
        double value;
        if (setup.agent == "q") {
          const auto est = q_values(setup.spec, ckpt.params, input,
                                    {&obs_q[0], &obs_q[1]}, noise, rng);
          value = est.values[1];
        } else {
          const auto pol = policy_probs_complement(setup.spec, ckpt.params, input,
                                                   obs_pg, noise, rng);
          value = pol.probs[1];
        }
        std::snprintf(buf, sizeof(buf), "%s_vs_%s,%.17g,%.17g,%.17g\n", angle.name,
                      other.name, v1, v2, value);
        f << buf;
      }
    }
  }
  f.close();
  write_manifest(out_dir + "/manifest.json", cfg, {out_dir + "/policy_surface.csv"});
  return 0;
}

}  // namespace qrl
