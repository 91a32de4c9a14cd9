#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrl/agents.hpp"
#include "qrl/harness.hpp"

using namespace qrl;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("greedy selection takes the argmax with lowest-index tie-break") {
  Rng rng(1, 0);
  CHECK(select_action_egreedy(std::vector<double>{0.2, 0.7}, 0.0, rng) == 1);
  CHECK(select_action_egreedy(std::vector<double>{0.5, 0.5}, 0.0, rng) == 0);
  CHECK(select_action_egreedy(std::vector<double>{0.9, 0.5, 0.9}, 0.0, rng) == 0);
}

TEST_CASE("full exploration is uniform") {
  Rng rng(2, 0);
  int counts[3] = {0, 0, 0};
  const int n = 30000;
  for (int k = 0; k < n; ++k)
    ++counts[select_action_egreedy(std::vector<double>{0.0, 1.0, 2.0}, 1.0, rng)];
  for (int c : counts) {
    // Within 3 sigma of n/3.
    const double sigma = std::sqrt(n * (1.0 / 3) * (2.0 / 3));
    CHECK(std::abs(c - n / 3.0) < 3.0 * sigma);
  }
}

TEST_CASE("epsilon schedule decays monotonically to its floor") {
  const EpsilonSchedule sched{1.0, 0.01, 0.99};
  double prev = 2.0;
  for (int t = 0; t < 1200; ++t) {
    const double e = sched.at(t);
    CHECK(e <= prev);
    CHECK(e >= 0.01);
    prev = e;
  }
  CHECK(sched.at(0) == doctest::Approx(1.0));
  CHECK(sched.at(100000) == doctest::Approx(0.01));
}

TEST_CASE("q targets bootstrap from the next state") {
  CHECK(q_target_value(1.0, true, 0.99, {}) == doctest::Approx(1.0));
  CHECK(q_target_value(1.0, false, 0.99, std::vector<double>{10.0, 3.0}) ==
        doctest::Approx(10.9));
  CHECK(q_target_value(2.0, false, 0.0, std::vector<double>{10.0}) ==
        doctest::Approx(2.0));
  CHECK_THROWS_AS(q_target_value(1.0, false, 0.9, {}), std::invalid_argument);
}

TEST_CASE("adam takes a plain first step of size lr") {
  ParamLayout layout;
  layout.slots = {{"rotations", 0, 2}, {"output_weights", 2, 1}};
  layout.circuit_params = 2;
  layout.total = 3;
  AdamConfig cfg;
  cfg.lr_circuit = 0.1;
  cfg.lr_head = 0.5;
  Adam opt(layout, cfg);
  std::vector<double> params = {1.0, 1.0, 1.0};
  opt.step(params, std::vector<double>{1.0, -1.0, 1.0});
  // First Adam step moves by lr / (1 + eps-ish) in the gradient sign.
  CHECK(params[0] == doctest::Approx(0.9).epsilon(1e-3));
  CHECK(params[1] == doctest::Approx(1.1).epsilon(1e-3));
  CHECK(params[2] == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("q loss gradient matches finite differences") {
  const auto spec = AnsatzSpec::build(AnsatzKind::HweQ, 2, 1, HeadKind::QValue);
  Rng rng(3, 0);
  std::vector<double> params = spec.init_params(rng);

  QBatchSample sample;
  sample.state = feature_input({0.4, -0.7});
  sample.obs = {Observable::z_string({0}), Observable::z_string({1})};
  sample.action_index = 1;
  sample.weight_index = 1;
  sample.target = 0.8;
  const std::vector<QBatchSample> batch = {sample};

  const LossGradient lg =
      q_loss_gradient(spec, params, batch, NoiseConfig::exact(), Rng(4, 0));

  // Central differences on the full scalar loss.
  auto loss_at = [&](const std::vector<double>& p) {
    const auto est = q_values(spec, p, sample.state,
                              {&sample.obs[0], &sample.obs[1]},
                              NoiseConfig::exact(), Rng(5, 0));
    const double diff = est.values[1] - sample.target;
    return diff * diff;
  };
  const double h = 1e-4;
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::vector<double> p = params;
    p[i] = params[i] + h;
    const double plus = loss_at(p);
    p[i] = params[i] - h;
    const double minus = loss_at(p);
    const double fd = (plus - minus) / (2 * h);
    CHECK(std::abs(lg.grad[i] - fd) < 1e-5);
  }
}

TEST_CASE("zero temporal-difference error gives a zero gradient") {
  const auto spec = AnsatzSpec::build(AnsatzKind::HweQ, 2, 1, HeadKind::QValue);
  Rng rng(6, 0);
  std::vector<double> params = spec.init_params(rng);

  QBatchSample sample;
  sample.state = feature_input({0.2, 0.1});
  sample.obs = {Observable::z_string({0}), Observable::z_string({1})};
  sample.action_index = 0;
  sample.weight_index = 0;
  const auto est = q_values(spec, params, sample.state,
                            {&sample.obs[0], &sample.obs[1]}, NoiseConfig::exact(),
                            Rng(7, 0));
  sample.target = est.values[0];

  const LossGradient lg =
      q_loss_gradient(spec, params, {sample}, NoiseConfig::exact(), Rng(8, 0));
  CHECK(lg.loss == doctest::Approx(0.0));
  for (double g : lg.grad) CHECK(std::abs(g) < 1e-12);
}

TEST_CASE("q loss decreases over repeated steps on a frozen batch") {
  const auto spec = AnsatzSpec::build(AnsatzKind::HweQ, 2, 1, HeadKind::QValue);
  Rng rng(9, 0);
  std::vector<double> params = spec.init_params(rng);

  std::vector<QBatchSample> batch;
  for (int k = 0; k < 4; ++k) {
    QBatchSample s;
    s.state = feature_input({0.1 * k, -0.05 * k});
    s.obs = {Observable::z_string({0}), Observable::z_string({1})};
    s.action_index = k % 2;
    s.weight_index = k % 2;
    s.target = 0.3 + 0.1 * k;
    batch.push_back(std::move(s));
  }

  Adam opt(spec.layout(), AdamConfig{});
  double first_loss = 0.0, last_loss = 0.0;
  for (int it = 0; it < 50; ++it) {
    const LossGradient lg =
        q_loss_gradient(spec, params, batch, NoiseConfig::exact(), Rng(10, it));
    if (it == 0) first_loss = lg.loss;
    last_loss = lg.loss;
    opt.step(params, lg.grad);
  }
  CHECK(last_loss < first_loss);
}

TEST_CASE("log-policy gradient matches finite differences (both policies)") {
  // Two-action complement head.
  {
    const auto spec = AnsatzSpec::build(AnsatzKind::HwePg, 2, 1, HeadKind::Policy);
    Rng rng(11, 0);
    std::vector<double> params = spec.init_params(rng);
    params[spec.head_offset()] = 1.3;
    const AnsatzInput input = feature_input({0.6, -0.2});
    const std::vector<Observable> obs = {Observable::z_string({0, 1})};

    const LogPolicyGradient lpg = log_policy_gradient(
        spec, params, input, obs, true, 0, NoiseConfig::exact(), Rng(12, 0));

    auto logpi_at = [&](const std::vector<double>& p) {
      const auto res = policy_probs_complement(spec, p, input, obs[0],
                                               NoiseConfig::exact(), Rng(13, 0));
      return std::log(res.probs[0]);
    };
    const double h = 1e-4;
    for (std::size_t i = 0; i < params.size(); ++i) {
      std::vector<double> p = params;
      p[i] = params[i] + h;
      const double plus = logpi_at(p);
      p[i] = params[i] - h;
      const double minus = logpi_at(p);
      CHECK(std::abs(lpg.grad[i] - (plus - minus) / (2 * h)) < 1e-5);
    }
  }
  // Per-action observables.
  {
    std::vector<std::vector<double>> w(4, std::vector<double>(4, 0.0));
    Rng wr(14, 0);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) w[i][j] = w[j][i] = wr.uniform(0.2, 1.0);
    const auto spec = AnsatzSpec::build(AnsatzKind::Eqc, 4, 1, HeadKind::Policy);
    Rng rng(15, 0);
    std::vector<double> params = spec.init_params(rng);
    const AnsatzInput input = graph_input(w, {0.0, kPi, kPi, kPi});
    const std::vector<Observable> obs = {tsp_edge_observable(0, 1),
                                         tsp_edge_observable(0, 2),
                                         tsp_edge_observable(0, 3)};
    const int chosen = 2;
    const LogPolicyGradient lpg = log_policy_gradient(
        spec, params, input, obs, false, chosen, NoiseConfig::exact(), Rng(16, 0));

    auto logpi_at = [&](const std::vector<double>& p) {
      const auto res = policy_probs(spec, p, input,
                                    {&obs[0], &obs[1], &obs[2]},
                                    NoiseConfig::exact(), Rng(17, 0));
      return std::log(res.probs[chosen]);
    };
    const double h = 1e-4;
    for (std::size_t i = 0; i < params.size(); ++i) {
      std::vector<double> p = params;
      p[i] = params[i] + h;
      const double plus = logpi_at(p);
      p[i] = params[i] - h;
      const double minus = logpi_at(p);
      CHECK(std::abs(lpg.grad[i] - (plus - minus) / (2 * h)) < 1e-5);
    }
  }
}

TEST_CASE("score-function identity: expected log-policy gradient vanishes") {
  const auto spec = AnsatzSpec::build(AnsatzKind::HwePg, 2, 1, HeadKind::Policy);
  Rng rng(18, 0);
  std::vector<double> params = spec.init_params(rng);
  const AnsatzInput input = feature_input({0.3, 0.8});
  const std::vector<Observable> obs = {Observable::z_string({0, 1})};

  std::vector<double> acc(params.size(), 0.0);
  std::vector<double> probs;
  for (int a = 0; a < 2; ++a) {
    const LogPolicyGradient lpg = log_policy_gradient(
        spec, params, input, obs, true, a, NoiseConfig::exact(), Rng(19, a));
    if (a == 0) probs = lpg.probs;
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += probs[a] * lpg.grad[i];
  }
  for (double v : acc) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("gamma zero weights only immediate rewards") {
  // G_t = r_{t+1} when gamma = 0: check via the returns recursion used by the
  // trainer on a tiny fabricated episode.
  const std::vector<double> rewards = {1.0, -2.0, 3.0};
  std::vector<double> returns(rewards.size());
  double g = 0.0;
  for (int t = static_cast<int>(rewards.size()) - 1; t >= 0; --t) {
    g = rewards[t] + 0.0 * g;
    returns[t] = g;
  }
  CHECK(returns[0] == 1.0);
  CHECK(returns[1] == -2.0);
  CHECK(returns[2] == 3.0);
}

TEST_CASE("training runs are reproducible and respect the episode budget") {
  const auto spec = AnsatzSpec::build(AnsatzKind::Eqc, 4, 1, HeadKind::QValue);
  QLearningConfig cfg;
  cfg.gamma = 0.9;
  cfg.batch_size = 4;
  cfg.replay_capacity = 128;
  cfg.target_sync_steps = 8;
  const SolvedCriterion never{50, 0.0, false};

  auto run_once = [&]() {
    TspTask task(tsp_instance_set(3, 0, 4, 4), false);
    return train_q_agent(spec, task, NoiseConfig::exact(), cfg, 6, never, 42);
  };
  const TrainingResult a = run_once();
  const TrainingResult b = run_once();
  CHECK(a.episodes.size() == 6);
  REQUIRE(a.final_params.size() == b.final_params.size());
  for (std::size_t i = 0; i < a.final_params.size(); ++i)
    CHECK(a.final_params[i] == b.final_params[i]);
  for (std::size_t e = 0; e < a.episodes.size(); ++e)
    CHECK(a.episodes[e].score == b.episodes[e].score);

  // Budget zero produces an empty log.
  TspTask task(tsp_instance_set(3, 0, 4, 4), false);
  const TrainingResult empty =
      train_q_agent(spec, task, NoiseConfig::exact(), cfg, 0, never, 1);
  CHECK(empty.episodes.empty());
}

TEST_CASE("pg training on cartpole runs and logs per-episode scores") {
  const auto spec = AnsatzSpec::build(AnsatzKind::HwePg, 4, 1, HeadKind::Policy);
  ReinforceConfig cfg;
  cfg.episodes_per_update = 2;
  CartPoleTask task(HeadKind::Policy);
  const SolvedCriterion never{100, 1e9, true};
  const TrainingResult result =
      train_pg_agent(spec, task, NoiseConfig::exact(), cfg, 4, never, 5);
  CHECK(result.episodes.size() == 4);
  CHECK(result.updates.size() == 2);
  for (const auto& row : result.episodes) CHECK(row.score >= 1.0);
}

TEST_CASE("evaluation is deterministic for a greedy agent") {
  const auto spec = AnsatzSpec::build(AnsatzKind::Eqc, 4, 1, HeadKind::QValue);
  Rng rng(20, 0);
  const std::vector<double> params = spec.init_params(rng);
  TspTask task(tsp_instance_set(3, 4, 4, 4), true);
  const EvalStats a = evaluate_agent(spec, params, task, NoiseConfig::exact(), 4, 9);
  TspTask task2(tsp_instance_set(3, 4, 4, 4), true);
  const EvalStats b = evaluate_agent(spec, params, task2, NoiseConfig::exact(), 4, 9);
  REQUIRE(a.scores.size() == b.scores.size());
  for (std::size_t i = 0; i < a.scores.size(); ++i) CHECK(a.scores[i] == b.scores[i]);
  for (double s : a.scores) CHECK(s >= 1.0 - 1e-12);
}

TEST_CASE("flexible shot allocation flows through action selection") {
  const auto spec = AnsatzSpec::build(AnsatzKind::Eqc, 4, 1, HeadKind::QValue);
  QLearningConfig cfg;
  cfg.gamma = 0.9;
  cfg.batch_size = 3;
  cfg.replay_capacity = 64;
  NoiseConfig noise = NoiseConfig::flexible_shots({20, 20, 200});
  const SolvedCriterion never{50, 0.0, false};
  ShotLedger ledger;
  TspTask task(tsp_instance_set(3, 0, 4, 4), false);
  const TrainingResult result =
      train_q_agent(spec, task, noise, cfg, 3, never, 11, &ledger);
  CHECK(result.total_shots > 0);
  CHECK(result.total_executions > 0);
  // Pooled batches serve commuting observables: executions < observable reads.
  CHECK(result.total_executions <= result.total_shots);
}
