#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrl/ansatz.hpp"
#include "qrl/cartpole.hpp"
#include "qrl/executor.hpp"
#include "qrl/noise.hpp"
#include "qrl/rng.hpp"
#include "qrl/shots.hpp"
#include "qrl/tsp.hpp"

namespace qrl {

// ---------------------------------------------------------------------------
// Optimization plumbing

struct AdamConfig {
  double lr_circuit = 0.001;
  double lr_input_scaling = 0.001;
  double lr_head = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
};

class Adam {
 public:
  Adam(const ParamLayout& layout, const AdamConfig& config);

  // One minimization step along grad.
  void step(std::vector<double>& params, std::span<const double> grad);
  long updates() const { return t_; }
  const std::vector<double>& first_moment() const { return m_; }
  const std::vector<double>& second_moment() const { return v_; }

 private:
  AdamConfig cfg_;
  std::vector<double> lr_;  // per parameter
  std::vector<double> m_, v_;
  long t_ = 0;
};

// epsilon(t) = max(end, start * decay^t), t counted in episodes.
struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.01;
  double decay = 0.99;

  double at(int episode) const;
};

// With probability epsilon a uniform valid action (no circuit evaluation on
// that branch); otherwise the argmax with lowest-index tie-break.
int select_action_egreedy(std::span<const double> values, double epsilon,
                          Rng& rng);

// ---------------------------------------------------------------------------
// Environment adapter shared by both trainers

class RlTask {
 public:
  virtual ~RlTask() = default;
  virtual void reset(Rng& rng) = 0;
  virtual bool done() const = 0;
  virtual std::vector<int> valid_actions() const = 0;
  virtual AnsatzInput encode() const = 0;
  // One observable per valid action; empty means no circuit evaluation
  // applies in this state (all candidates tie by construction).
  virtual std::vector<Observable> action_observables() const = 0;
  virtual double step(int action) = 0;
  virtual double episode_score() const = 0;
  // Two actions scored from one observable as <O> and 1 - <O>.
  virtual bool pg_complement() const { return false; }
};

class CartPoleTask final : public RlTask {
 public:
  explicit CartPoleTask(HeadKind head, bool clip_velocities = true);
  void reset(Rng& rng) override;
  bool done() const override;
  std::vector<int> valid_actions() const override;
  AnsatzInput encode() const override;
  std::vector<Observable> action_observables() const override;
  double step(int action) override;
  double episode_score() const override;
  bool pg_complement() const override { return head_ == HeadKind::Policy; }

 private:
  CartPole env_;
  HeadKind head_;
  bool clip_;
};

class TspTask final : public RlTask {
 public:
  // Training draws instances uniformly per episode; sequential mode walks
  // the set in order (evaluation over a held-out set).
  TspTask(std::vector<TspInstance> instances, bool sequential = false);
  void reset(Rng& rng) override;
  bool done() const override;
  std::vector<int> valid_actions() const override;
  AnsatzInput encode() const override;
  std::vector<Observable> action_observables() const override;
  double step(int action) override;
  double episode_score() const override;

 private:
  std::vector<TspInstance> instances_;
  bool sequential_;
  std::size_t next_index_ = 0;
  std::optional<TspEnv> env_;
};

// ---------------------------------------------------------------------------
// Training loops

struct TrainingLogRow {
  int episode = 0;
  double score = 0.0;
  double epsilon = 0.0;
  std::int64_t shots = 0;  // cumulative measurement count
  double wall_ms = 0.0;
};

struct UpdateLogRow {
  long update = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
};

struct SolvedCriterion {
  int window = 100;
  double threshold = 195.0;
  bool at_least = true;  // false: trailing mean must drop to the threshold

  bool check(const std::vector<double>& scores) const;
};

struct TrainingResult {
  std::vector<TrainingLogRow> episodes;
  std::vector<UpdateLogRow> updates;
  std::vector<double> final_params;
  std::vector<double> adam_m, adam_v;  // optimizer moments for checkpointing
  long adam_steps = 0;
  int solved_episode = -1;
  std::int64_t total_shots = 0;
  std::int64_t total_executions = 0;
};

struct QLearningConfig {
  double gamma = 0.99;
  int batch_size = 16;
  int replay_capacity = 10000;
  int train_every = 1;           // environment steps between updates
  int target_sync_steps = 30;    // 0 disables step-based syncing
  int target_sync_episodes = 0;  // 0 disables episode-based syncing
  EpsilonSchedule epsilon;
  AdamConfig adam;
};

TrainingResult train_q_agent(const AnsatzSpec& spec, RlTask& task,
                             const NoiseConfig& noise, const QLearningConfig& config,
                             int episode_budget, const SolvedCriterion& solved,
                             std::uint64_t seed, ShotLedger* ledger = nullptr,
                             std::vector<double> initial_params = {});

struct ReinforceConfig {
  double gamma = 0.99;
  int episodes_per_update = 10;
  AdamConfig adam;
  bool constant_baseline = false;
  double baseline = 0.0;
};

TrainingResult train_pg_agent(const AnsatzSpec& spec, RlTask& task,
                              const NoiseConfig& noise, const ReinforceConfig& config,
                              int episode_budget, const SolvedCriterion& solved,
                              std::uint64_t seed, ShotLedger* ledger = nullptr,
                              std::vector<double> initial_params = {});

struct EvalStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::vector<double> scores;
};

// Greedy behaviour for Q-value heads, softmax sampling for policy heads.
// No learning.
EvalStats evaluate_agent(const AnsatzSpec& spec, std::span<const double> params,
                         RlTask& task, const NoiseConfig& noise, int n_episodes,
                         std::uint64_t seed);

// ---------------------------------------------------------------------------
// Gradient hooks (exposed for the finite-difference checks)

// y = r + gamma * max_a Qtarget(s', a) for non-terminal transitions, y = r
// otherwise; the max runs over the valid actions only.
double q_target_value(double reward, bool terminal, double gamma,
                      std::span<const double> next_q_values);

struct QBatchSample {
  AnsatzInput state;
  std::vector<Observable> obs;  // all valid actions at the state
  int action_index = 0;         // index of the taken action within obs
  int weight_index = 0;         // output weight of the taken action
  double target = 0.0;
};

struct LossGradient {
  double loss = 0.0;
  std::vector<double> grad;  // full parameter vector layout
};

// Mean squared error between Q(s, a) and the fixed targets, with the circuit
// part differentiated by parameter shifts and the head part analytically.
LossGradient q_loss_gradient(const AnsatzSpec& spec, std::span<const double> params,
                             const std::vector<QBatchSample>& batch,
                             const NoiseConfig& noise, Rng rng);

// grad log pi(action | state) for a policy head, circuit part by parameter
// shifts, inverse-temperature part analytic.
struct LogPolicyGradient {
  std::vector<double> grad;          // full parameter vector layout
  std::vector<double> probs;
  std::vector<double> expectations;
};

LogPolicyGradient log_policy_gradient(const AnsatzSpec& spec,
                                      std::span<const double> params,
                                      const AnsatzInput& input,
                                      const std::vector<Observable>& action_obs,
                                      bool complement_two_actions,
                                      int action_index, const NoiseConfig& noise,
                                      Rng rng);

}  // namespace qrl
