#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qrl/analysis.hpp"
#include "qrl/config.hpp"
#include "qrl/harness.hpp"

using namespace qrl;

namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& tag) {
  const auto dir = fs::temp_directory_path() / ("qrl_harness_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing covers tables, arrays, and comments") {
  const Config cfg = Config::parse_string(R"(
# experiment file
top = 3
[agent]
kind = "q"          # trailing comment
gamma = 0.99
episodes = 500
flag = true
[noise]
sigmas = [0.0, 0.1, 0.2]
names = ["a", "b"]
)");
  CHECK(cfg.get_int("top", -1) == 3);
  CHECK(cfg.get_string("agent.kind", "") == "q");
  CHECK(cfg.get_double("agent.gamma", 0) == doctest::Approx(0.99));
  CHECK(cfg.get_int("agent.episodes", 0) == 500);
  CHECK(cfg.get_bool("agent.flag", false));
  CHECK(cfg.get_double_list("noise.sigmas", {}).size() == 3);
  CHECK(cfg.get_string_list("noise.names", {})[1] == "b");
  CHECK(cfg.get_int("missing", 7) == 7);
}

TEST_CASE("config errors are reported as such") {
  CHECK_THROWS_AS(Config::parse_string("key"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("[broken\nk = 1"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("k = \"unterminated"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("k = [1, \"a\"]"), ConfigError);
  const Config cfg = Config::parse_string("k = 1");
  CHECK_THROWS_AS(cfg.get_string("k", ""), ConfigError);
  CHECK_THROWS_AS(Config::parse_file("/nonexistent/qrl.toml"), ConfigError);
}

TEST_CASE("hash is stable under reordering and sensitive to changes") {
  const Config a = Config::parse_string("[x]\na = 1\nb = 2.5\n[y]\nc = \"s\"\n");
  const Config b = Config::parse_string("[y]\nc = \"s\"\n[x]\nb = 2.5\na = 1\n");
  CHECK(a.hash() == b.hash());
  Config c = a;
  c.set("x.a", std::int64_t{2});
  CHECK(a.hash() != c.hash());
  Config d = a;
  d.apply_override("x.b=2.5");
  CHECK(a.hash() == d.hash());
}

TEST_CASE("setup_from_config assembles the right ansatz") {
  const Config cfg = Config::parse_string(R"(
[experiment]
seeds = [0, 1]
[env]
kind = "tsp"
n_cities = 5
[agent]
kind = "q"
episodes = 50
)");
  const ExperimentSetup setup = setup_from_config(cfg);
  CHECK(setup.spec.kind() == AnsatzKind::Eqc);
  CHECK(setup.spec.n_qubits() == 5);
  CHECK(setup.spec.n_layers() == 1);
  CHECK(setup.q_config.gamma == doctest::Approx(0.9));
  CHECK(setup.q_config.target_sync_episodes == 1);
  CHECK(setup.seeds.size() == 2);
  CHECK_FALSE(setup.solved.at_least);

  const Config cp = Config::parse_string("[env]\nkind = \"cartpole\"\n[agent]\nkind = \"pg\"\n");
  const ExperimentSetup s2 = setup_from_config(cp);
  CHECK(s2.spec.kind() == AnsatzKind::HwePg);
  CHECK(s2.spec.circuit_params() == 92);
  CHECK(s2.q_config.gamma == doctest::Approx(0.99));

  CHECK_THROWS_AS(setup_from_config(Config::parse_string("[env]\nkind = \"pong\"\n")),
                  ConfigError);
}

TEST_CASE("noise config parsing covers the channel table") {
  const Config cfg = Config::parse_string(R"(
[noise]
sigma = 0.1
channel = "custom"
preset = "a"
amp_damp = 0.5
trajectories = 64
)");
  const NoiseConfig noise = noise_from_config(cfg);
  CHECK(noise.gaussian_sigma == doctest::Approx(0.1));
  CHECK(noise.channel == ChannelKind::CustomHardware);
  CHECK(noise.hardware.depol_1q == doctest::Approx(0.001));  // preset value
  CHECK(noise.hardware.amp_damp == doctest::Approx(0.5));    // explicit override
  CHECK(noise.trajectories == 64);

  const Config flex = Config::parse_string("[noise]\nflexible = true\nm_max = 500\n");
  const NoiseConfig fx = noise_from_config(flex);
  CHECK(fx.shots.kind == EstimationKind::FlexibleShots);
  CHECK(fx.shots.alloc.m_max == 500);

  CHECK_THROWS_AS(noise_from_config(Config::parse_string("[noise]\nchannel = \"x\"\n")),
                  ConfigError);
}

TEST_CASE("checkpoints round-trip parameters and optimizer state") {
  const std::string dir = temp_dir("ckpt");
  Checkpoint ckpt;
  ckpt.slots = {{"rotations", 0, 3}, {"output_weights", 3, 1}};
  ckpt.params = {0.25, -1.5, 3.25, 1.0};
  ckpt.adam_m = {0.1, 0.2, 0.3, 0.4};
  ckpt.adam_v = {1e-4, 2e-4, 3e-4, 4e-4};
  ckpt.adam_steps = 17;
  save_checkpoint(dir + "/c.bin", ckpt);
  const Checkpoint back = load_checkpoint(dir + "/c.bin");
  CHECK(back.slots.size() == 2);
  CHECK(back.slots[0].name == "rotations");
  CHECK(back.slots[1].offset == 3);
  CHECK(back.params == ckpt.params);
  CHECK(back.adam_m == ckpt.adam_m);
  CHECK(back.adam_v == ckpt.adam_v);
  CHECK(back.adam_steps == 17);
  CHECK_THROWS_AS(load_checkpoint(dir + "/missing.bin"), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("frozen tsp instance sets regenerate identically") {
  const auto a = tsp_instance_set(7, 0, 3, 5);
  const auto b = tsp_instance_set(7, 0, 3, 5);
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 5; ++i) {
      CHECK(a[k].coordinates[i].first == b[k].coordinates[i].first);
      CHECK(a[k].coordinates[i].second == b[k].coordinates[i].second);
    }
  // Train indices and eval indices never collide.
  const auto eval = tsp_instance_set(7, 3, 3, 5);
  bool all_same = true;
  for (int k = 0; k < 3; ++k)
    all_same &= a[k].coordinates[0].first == eval[k].coordinates[0].first;
  CHECK_FALSE(all_same);
}

TEST_CASE("training command writes logs, checkpoints, and a manifest") {
  const std::string dir = temp_dir("train");
  const Config cfg = Config::parse_string(R"(
[experiment]
seeds = [0, 1]
[env]
kind = "tsp"
n_cities = 4
train_instances = 4
eval_instances = 4
[agent]
kind = "q"
episodes = 3
batch_size = 3
[ansatz]
layers = 1
)");
  CHECK(run_train(cfg, dir) == 0);
  CHECK(fs::exists(dir + "/seed_0/training_log.csv"));
  CHECK(fs::exists(dir + "/seed_1/checkpoint.bin"));
  CHECK(fs::exists(dir + "/manifest.json"));

  const std::string log = slurp(dir + "/seed_0/training_log.csv");
  CHECK(log.rfind("episode,score,epsilon,shots,wall_ms", 0) == 0);

  // Aggregation over the two seeds.
  CHECK(run_aggregate(dir, 2, 10.0, false) == 0);
  CHECK(fs::exists(dir + "/aggregate.csv"));
  CHECK(fs::exists(dir + "/summary.json"));
  fs::remove_all(dir);
}

TEST_CASE("aggregate of identical logs has zero spread") {
  const std::string dir = temp_dir("agg");
  std::vector<TrainingLogRow> rows;
  for (int e = 0; e < 5; ++e) rows.push_back({e, 10.0 + e, 0.5, 100, 1.0});
  ensure_dir(dir + "/a");
  ensure_dir(dir + "/b");
  write_training_csv(dir + "/a/training_log.csv", rows);
  write_training_csv(dir + "/b/training_log.csv", rows);
  const AggregateSummary summary = aggregate_runs(
      {dir + "/a/training_log.csv", dir + "/b/training_log.csv"}, 2, 11.0, true);
  CHECK(summary.n_runs == 2);
  for (std::size_t e = 0; e < summary.mean_per_episode.size(); ++e) {
    CHECK(summary.mean_per_episode[e] == doctest::Approx(10.0 + e));
    CHECK(summary.std_per_episode[e] == doctest::Approx(0.0));
  }
  // Trailing-2 mean crosses 11 at episode 2 ((11 + 12) / 2 = 11.5 ... episode
  // index 2 is the first window whose mean is >= 11).
  CHECK(summary.solved_episode == 2);
  fs::remove_all(dir);
}

TEST_CASE("policy surface export writes the grid") {
  const std::string dir = temp_dir("surface");
  const Config cfg = Config::parse_string(
      "[env]\nkind = \"cartpole\"\n[agent]\nkind = \"pg\"\n[ansatz]\nlayers = 1\n");
  const ExperimentSetup setup = setup_from_config(cfg);
  Rng rng(1, 0);
  Checkpoint ckpt;
  ckpt.slots = setup.spec.layout().slots;
  ckpt.params = setup.spec.init_params(rng);
  save_checkpoint(dir + "/c.bin", ckpt);

  CHECK(run_export_surface(cfg, dir + "/c.bin", 5, dir) == 0);
  const std::string csv = slurp(dir + "/policy_surface.csv");
  CHECK(csv.rfind("pair,v1,v2,value_right", 0) == 0);
  // Three pairs x 5 x 5 grid plus the header line.
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 3 * 25 + 1);

  // Probabilities for both actions sum to one: value_right must be in [0,1].
  std::istringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  while (std::getline(ss, line)) {
    const auto pos = line.rfind(',');
    const double v = std::stod(line.substr(pos + 1));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  fs::remove_all(dir);
}

TEST_CASE("log grid spans the requested decades") {
  const auto grid = log_grid(1e-3, 0.7, 20);
  CHECK(grid.size() == 20);
  CHECK(grid.front() == doctest::Approx(1e-3));
  CHECK(grid.back() == doctest::Approx(0.7));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}
