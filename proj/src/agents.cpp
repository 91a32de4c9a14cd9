#include "qrl/agents.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "qrl/gradients.hpp"

namespace qrl {

// ---------------------------------------------------------------------------
// Adam

Adam::Adam(const ParamLayout& layout, const AdamConfig& config) : cfg_(config) {
  lr_.assign(layout.total, config.lr_head);
  for (const ParamSlot& s : layout.slots) {
    double lr = cfg_.lr_head;
    if (s.name == "rotations" || s.name == "node" || s.name == "edge")
      lr = cfg_.lr_circuit;
    else if (s.name == "input_scaling")
      lr = cfg_.lr_input_scaling;
    for (int i = 0; i < s.count; ++i) lr_[s.offset + i] = lr;
  }
  m_.assign(layout.total, 0.0);
  v_.assign(layout.total, 0.0);
}

void Adam::step(std::vector<double>& params, std::span<const double> grad) {
  if (params.size() != lr_.size() || grad.size() != lr_.size())
    throw std::invalid_argument("parameter/gradient size mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double c2 = 1.0 - std::pow(cfg_.beta2, t_);
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
    const double mhat = m_[i] / c1;
    const double vhat = v_[i] / c2;
    params[i] -= lr_[i] * mhat / (std::sqrt(vhat) + cfg_.epsilon);
  }
}

double EpsilonSchedule::at(int episode) const {
  return std::max(end, start * std::pow(decay, episode));
}

int select_action_egreedy(std::span<const double> values, double epsilon,
                          Rng& rng) {
  if (values.empty()) throw std::invalid_argument("no actions to choose from");
  if (rng.uniform() < epsilon) return rng.uniform_int(static_cast<int>(values.size()));
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = static_cast<int>(i);
  return best;
}

// ---------------------------------------------------------------------------
// Tasks

CartPoleTask::CartPoleTask(HeadKind head, bool clip_velocities)
    : head_(head), clip_(clip_velocities) {}

void CartPoleTask::reset(Rng& rng) { env_.reset(rng); }
bool CartPoleTask::done() const { return env_.state().done; }
std::vector<int> CartPoleTask::valid_actions() const { return {0, 1}; }
AnsatzInput CartPoleTask::encode() const {
  return feature_input(CartPole::features(env_.state(), clip_));
}
std::vector<Observable> CartPoleTask::action_observables() const {
  if (head_ == HeadKind::Policy) return {cartpole_pg_observable()};
  return cartpole_q_observables();
}
double CartPoleTask::step(int action) { return env_.step(action).reward; }
double CartPoleTask::episode_score() const { return env_.state().steps; }

TspTask::TspTask(std::vector<TspInstance> instances, bool sequential)
    : instances_(std::move(instances)), sequential_(sequential) {
  if (instances_.empty()) throw std::invalid_argument("need at least one instance");
}

void TspTask::reset(Rng& rng) {
  std::size_t pick;
  if (sequential_) {
    pick = next_index_ % instances_.size();
    ++next_index_;
  } else {
    pick = static_cast<std::size_t>(rng.uniform_int(static_cast<int>(instances_.size())));
  }
  env_.emplace(instances_[pick]);
}

bool TspTask::done() const { return env_->done(); }

std::vector<int> TspTask::valid_actions() const { return env_->valid_actions(); }

AnsatzInput TspTask::encode() const {
  return graph_input(env_->instance().edge_weights, env_->node_flags());
}

std::vector<Observable> TspTask::action_observables() const {
  const int last = env_->last_city();
  if (last < 0) return {};  // empty tour: every first pick ties
  std::vector<Observable> obs;
  for (int city : env_->valid_actions())
    obs.push_back(tsp_edge_observable(last, city));
  return obs;
}

double TspTask::step(int action) { return env_->step(action).reward; }
double TspTask::episode_score() const { return env_->ratio(); }

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

std::vector<const Observable*> pointers(const std::vector<Observable>& obs) {
  std::vector<const Observable*> p;
  p.reserve(obs.size());
  for (const Observable& o : obs) p.push_back(&o);
  return p;
}

int argmax_lowest(std::span<const double> v) {
  int best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = static_cast<int>(i);
  return best;
}

struct Transition {
  AnsatzInput state;
  std::vector<Observable> obs;
  int action_index = 0;
  int weight_index = 0;
  double reward = 0.0;
  AnsatzInput next_state;
  std::vector<Observable> next_obs;
  bool terminal = false;
};

// FIFO ring with uniform without-replacement batch sampling.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {}

  void push(Transition t) {
    if (data_.size() < capacity_) {
      data_.push_back(std::move(t));
    } else {
      data_[write_] = std::move(t);
    }
    write_ = (write_ + 1) % capacity_;
  }

  std::size_t size() const { return data_.size(); }

  std::vector<const Transition*> sample(std::size_t k, Rng& rng) const {
    std::vector<std::size_t> idx(data_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(
                                    rng.uniform_int(static_cast<int>(idx.size() - i)));
      std::swap(idx[i], idx[j]);
    }
    std::vector<const Transition*> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(&data_[idx[i]]);
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t write_ = 0;
  std::vector<Transition> data_;
};

double grad_norm(std::span<const double> g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

}  // namespace

bool SolvedCriterion::check(const std::vector<double>& scores) const {
  if (static_cast<int>(scores.size()) < window) return false;
  double mean = 0.0;
  for (std::size_t i = scores.size() - window; i < scores.size(); ++i)
    mean += scores[i];
  mean /= window;
  return at_least ? mean >= threshold : mean <= threshold;
}

double q_target_value(double reward, bool terminal, double gamma,
                      std::span<const double> next_q_values) {
  if (terminal) return reward;
  if (next_q_values.empty())
    throw std::invalid_argument("non-terminal target needs successor values");
  double best = next_q_values[0];
  for (double v : next_q_values) best = std::max(best, v);
  return reward + gamma * best;
}

LossGradient q_loss_gradient(const AnsatzSpec& spec, std::span<const double> params,
                             const std::vector<QBatchSample>& batch,
                             const NoiseConfig& noise, Rng rng) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const QHead& head = spec.q_head();
  const int head_off = spec.head_offset();
  const std::span<const double> theta = params.subspan(0, spec.circuit_params());

  LossGradient out;
  out.grad.assign(params.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(batch.size());

  for (std::size_t k = 0; k < batch.size(); ++k) {
    const QBatchSample& sample = batch[k];
    Rng sub = rng.derive(k);

    const auto est = q_values(spec, params, sample.state, pointers(sample.obs),
                              noise, sub.derive(0));
    const double e = est.expectations[sample.action_index];
    const int widx = head.shared_weight ? 0 : sample.weight_index;
    const double w = params[head_off + widx];
    const double q = head.q_value(e, w);
    const double diff = q - sample.target;
    out.loss += diff * diff * inv_b;
    const double c = 2.0 * diff * inv_b;

    // Shift evaluations reuse the shot count the estimate settled on.
    NoiseConfig shift_noise = noise;
    if (noise.shots.kind == EstimationKind::FlexibleShots)
      shift_noise.shots = ShotSetting::fixed(est.shots);

    CircuitFunction f(spec, sample.state, sample.obs[sample.action_index],
                      shift_noise, sub.derive(1));
    const std::vector<double> g = param_shift_gradient(f, theta);
    const double de = head.dq_dexp(w);
    for (int p = 0; p < spec.circuit_params(); ++p) out.grad[p] += c * de * g[p];
    out.grad[head_off + widx] += c * head.dq_dweight(e);
  }
  return out;
}

LogPolicyGradient log_policy_gradient(const AnsatzSpec& spec,
                                      std::span<const double> params,
                                      const AnsatzInput& input,
                                      const std::vector<Observable>& action_obs,
                                      bool complement_two_actions,
                                      int action_index, const NoiseConfig& noise,
                                      Rng rng) {
  if (spec.head() != HeadKind::Policy)
    throw std::invalid_argument("log-policy gradient needs a policy head");
  const int head_off = spec.head_offset();
  const double beta = params[head_off];
  const std::span<const double> theta = params.subspan(0, spec.circuit_params());

  LogPolicyGradient out;
  if (complement_two_actions) {
    const auto fwd = policy_probs_complement(spec, params, input, action_obs[0],
                                             noise, rng.derive(0));
    out.probs = fwd.probs;
    out.expectations = fwd.expectations;
  } else {
    const auto fwd = policy_probs(spec, params, input, pointers(action_obs),
                                  noise, rng.derive(0));
    out.probs = fwd.probs;
    out.expectations = fwd.expectations;
  }
  const std::size_t n_actions = out.probs.size();
  if (action_index < 0 || static_cast<std::size_t>(action_index) >= n_actions)
    throw std::invalid_argument("action index out of range");

  out.grad.assign(params.size(), 0.0);

  // d log pi(c) / d beta = <O_c> - sum_a pi(a) <O_a>.
  double mean_e = 0.0;
  for (std::size_t a = 0; a < n_actions; ++a) mean_e += out.probs[a] * out.expectations[a];
  out.grad[head_off] = out.expectations[action_index] - mean_e;

  // d log pi(c) / d e_a = beta (delta_{a,c} - pi(a)).
  if (complement_two_actions) {
    // e_1 = 1 - e_0 folds both coefficients onto the measured observable.
    const double coef0 = (action_index == 0 ? 1.0 : 0.0) - out.probs[0];
    const double coef1 = (action_index == 1 ? 1.0 : 0.0) - out.probs[1];
    const double coef = beta * (coef0 - coef1);
    CircuitFunction f(spec, input, action_obs[0], noise, rng.derive(1));
    const std::vector<double> g = param_shift_gradient(f, theta);
    for (int p = 0; p < spec.circuit_params(); ++p) out.grad[p] = coef * g[p];
  } else {
    for (std::size_t a = 0; a < n_actions; ++a) {
      const double coef =
          beta * ((static_cast<int>(a) == action_index ? 1.0 : 0.0) - out.probs[a]);
      CircuitFunction f(spec, input, action_obs[a], noise, rng.derive(2 + a));
      const std::vector<double> g = param_shift_gradient(f, theta);
      for (int p = 0; p < spec.circuit_params(); ++p) out.grad[p] += coef * g[p];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Q-learning

TrainingResult train_q_agent(const AnsatzSpec& spec, RlTask& task,
                             const NoiseConfig& noise, const QLearningConfig& config,
                             int episode_budget, const SolvedCriterion& solved,
                             std::uint64_t seed, ShotLedger* ledger,
                             std::vector<double> initial_params) {
  if (spec.head() != HeadKind::QValue)
    throw std::invalid_argument("Q-learning needs a Q-value head");
  noise.validate();

  Rng init_rng(seed, 0);
  Rng env_rng(seed, 1);
  Rng sample_rng(seed, 2);
  Rng eval_root(seed, 3);
  std::uint64_t eval_counter = 0;
  auto next_stream = [&]() { return eval_root.derive(eval_counter++); };

  ShotLedger local_ledger;
  ShotLedger* led = ledger ? ledger : &local_ledger;

  TrainingResult result;
  std::vector<double> params =
      initial_params.empty() ? spec.init_params(init_rng) : std::move(initial_params);
  if (static_cast<int>(params.size()) != spec.layout().total)
    throw std::invalid_argument("parameter vector does not match the layout");
  std::vector<double> target = params;

  Adam opt(spec.layout(), config.adam);
  ReplayBuffer replay(static_cast<std::size_t>(config.replay_capacity));
  std::vector<double> scores;
  long global_step = 0;

  EstimateOptions opts;
  opts.ledger = led;

  auto train_step = [&]() {
    const auto batch =
        replay.sample(static_cast<std::size_t>(config.batch_size), sample_rng);
    std::vector<QBatchSample> samples;
    samples.reserve(batch.size());
    for (const Transition* t : batch) {
      QBatchSample s;
      s.state = t->state;
      s.obs = t->obs;
      s.action_index = t->action_index;
      s.weight_index = t->weight_index;
      if (t->terminal) {
        s.target = t->reward;
      } else {
        const auto est = q_values(spec, target, t->next_state, pointers(t->next_obs),
                                  noise, next_stream(), opts);
        s.target = q_target_value(t->reward, false, config.gamma, est.values);
      }
      samples.push_back(std::move(s));
    }
    const LossGradient lg = q_loss_gradient(spec, params, samples, noise, next_stream());
    opt.step(params, lg.grad);
    result.updates.push_back({opt.updates(), lg.loss, grad_norm(lg.grad)});
  };

  for (int ep = 0; ep < episode_budget; ++ep) {
    const double eps = config.epsilon.at(ep);
    const auto t0 = std::chrono::steady_clock::now();
    task.reset(env_rng);
    int step_in_episode = 0;
    while (!task.done()) {
      led->set_context(ep, step_in_episode);
      const std::vector<int> valid = task.valid_actions();
      const std::vector<Observable> obs = task.action_observables();
      const AnsatzInput state = task.encode();

      int action_index;
      const bool explore = env_rng.uniform() < eps;
      if (obs.empty()) {
        // All first picks tie; greedy takes the lowest index.
        action_index = explore ? env_rng.uniform_int(static_cast<int>(valid.size())) : 0;
      } else if (explore) {
        action_index = env_rng.uniform_int(static_cast<int>(valid.size()));
      } else {
        const auto est =
            q_values(spec, params, state, pointers(obs), noise, next_stream(), opts);
        action_index = argmax_lowest(est.values);
      }

      const double reward = task.step(valid[action_index]);
      const bool terminal = task.done();

      if (!obs.empty()) {
        Transition t;
        t.state = state;
        t.obs = obs;
        t.action_index = action_index;
        t.weight_index = spec.q_head().shared_weight ? 0 : valid[action_index];
        t.reward = reward;
        t.next_state = task.encode();
        if (!terminal) t.next_obs = task.action_observables();
        t.terminal = terminal;
        replay.push(std::move(t));
      }

      ++global_step;
      ++step_in_episode;
      if (replay.size() >= static_cast<std::size_t>(config.batch_size) &&
          global_step % config.train_every == 0)
        train_step();
      if (config.target_sync_steps > 0 && global_step % config.target_sync_steps == 0)
        target = params;
    }
    if (config.target_sync_episodes > 0 && (ep + 1) % config.target_sync_episodes == 0)
      target = params;

    const auto t1 = std::chrono::steady_clock::now();
    const double wall =
        std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0;
    scores.push_back(task.episode_score());
    result.episodes.push_back({ep, scores.back(), eps, led->total_shots(), wall});
    if (solved.check(scores)) {
      result.solved_episode = ep;
      break;
    }
  }

  result.final_params = std::move(params);
  result.adam_m = opt.first_moment();
  result.adam_v = opt.second_moment();
  result.adam_steps = opt.updates();
  result.total_shots = led->total_shots();
  result.total_executions = led->total_executions();
  return result;
}

// ---------------------------------------------------------------------------
// REINFORCE

namespace {

struct PgStep {
  AnsatzInput state;
  std::vector<Observable> obs;
  bool complement = false;
  int action_index = 0;
  double reward = 0.0;
};

}  // namespace

TrainingResult train_pg_agent(const AnsatzSpec& spec, RlTask& task,
                              const NoiseConfig& noise, const ReinforceConfig& config,
                              int episode_budget, const SolvedCriterion& solved,
                              std::uint64_t seed, ShotLedger* ledger,
                              std::vector<double> initial_params) {
  if (spec.head() != HeadKind::Policy)
    throw std::invalid_argument("REINFORCE needs a policy head");
  noise.validate();

  Rng init_rng(seed, 0);
  Rng env_rng(seed, 1);
  Rng eval_root(seed, 3);
  std::uint64_t eval_counter = 0;
  auto next_stream = [&]() { return eval_root.derive(eval_counter++); };

  ShotLedger local_ledger;
  ShotLedger* led = ledger ? ledger : &local_ledger;
  EstimateOptions opts;
  opts.ledger = led;

  TrainingResult result;
  std::vector<double> params =
      initial_params.empty() ? spec.init_params(init_rng) : std::move(initial_params);
  if (static_cast<int>(params.size()) != spec.layout().total)
    throw std::invalid_argument("parameter vector does not match the layout");
  Adam opt(spec.layout(), config.adam);

  std::vector<double> scores;
  int episode = 0;
  bool done_training = false;

  while (episode < episode_budget && !done_training) {
    std::vector<std::vector<PgStep>> episodes_batch;
    for (int b = 0; b < config.episodes_per_update && episode < episode_budget; ++b) {
      const auto t0 = std::chrono::steady_clock::now();
      task.reset(env_rng);
      std::vector<PgStep> steps;
      int step_in_episode = 0;
      while (!task.done()) {
        led->set_context(episode, step_in_episode);
        PgStep st;
        st.state = task.encode();
        st.obs = task.action_observables();
        st.complement = task.pg_complement();
        const std::vector<int> valid = task.valid_actions();

        std::vector<double> probs;
        if (st.obs.empty()) {
          probs.assign(valid.size(), 1.0 / static_cast<double>(valid.size()));
        } else if (st.complement) {
          probs = policy_probs_complement(spec, params, st.state, st.obs[0], noise,
                                          next_stream(), opts)
                      .probs;
        } else {
          probs = policy_probs(spec, params, st.state, pointers(st.obs), noise,
                               next_stream(), opts)
                      .probs;
        }
        double u = env_rng.uniform();
        int pick = 0;
        for (std::size_t a = 0; a < probs.size(); ++a) {
          u -= probs[a];
          if (u < 0.0) {
            pick = static_cast<int>(a);
            break;
          }
        }
        st.action_index = pick;
        st.reward = task.step(valid[pick]);
        if (!st.obs.empty()) steps.push_back(std::move(st));
        ++step_in_episode;
      }
      const auto t1 = std::chrono::steady_clock::now();
      const double wall =
          std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() /
          1000.0;
      scores.push_back(task.episode_score());
      result.episodes.push_back(
          {episode, scores.back(), 0.0, led->total_shots(), wall});
      episodes_batch.push_back(std::move(steps));
      ++episode;
      if (solved.check(scores)) {
        result.solved_episode = episode - 1;
        done_training = true;
        break;
      }
    }

    // theta <- theta + lr * gamma^t * G_t * grad log pi; Adam minimizes, so
    // the ascent direction enters negated.
    std::vector<double> grad(params.size(), 0.0);
    for (const auto& steps : episodes_batch) {
      std::vector<double> returns(steps.size(), 0.0);
      double g = 0.0;
      for (int t = static_cast<int>(steps.size()) - 1; t >= 0; --t) {
        g = steps[t].reward + config.gamma * g;
        returns[t] = g;
      }
      double discount = 1.0;
      for (std::size_t t = 0; t < steps.size(); ++t) {
        const double weight =
            discount * (returns[t] - (config.constant_baseline ? config.baseline : 0.0));
        const auto lpg =
            log_policy_gradient(spec, params, steps[t].state, steps[t].obs,
                                steps[t].complement, steps[t].action_index, noise,
                                next_stream());
        for (std::size_t p = 0; p < grad.size(); ++p)
          grad[p] -= weight * lpg.grad[p];
        discount *= config.gamma;
      }
    }
    if (!episodes_batch.empty()) {
      const double inv = 1.0 / static_cast<double>(episodes_batch.size());
      for (double& v : grad) v *= inv;
      opt.step(params, grad);
      double loss = 0.0;  // REINFORCE has no scalar loss; log the step size proxy
      result.updates.push_back({opt.updates(), loss, grad_norm(grad)});
    }
  }

  result.final_params = std::move(params);
  result.adam_m = opt.first_moment();
  result.adam_v = opt.second_moment();
  result.adam_steps = opt.updates();
  result.total_shots = led->total_shots();
  result.total_executions = led->total_executions();
  return result;
}

EvalStats evaluate_agent(const AnsatzSpec& spec, std::span<const double> params,
                         RlTask& task, const NoiseConfig& noise, int n_episodes,
                         std::uint64_t seed) {
  noise.validate();
  Rng env_rng(seed, 10);
  Rng eval_root(seed, 11);
  std::uint64_t eval_counter = 0;

  EvalStats stats;
  for (int ep = 0; ep < n_episodes; ++ep) {
    task.reset(env_rng);
    while (!task.done()) {
      const std::vector<int> valid = task.valid_actions();
      const std::vector<Observable> obs = task.action_observables();
      int pick = 0;
      if (!obs.empty()) {
        if (spec.head() == HeadKind::QValue) {
          const auto est = q_values(spec, params, task.encode(), pointers(obs), noise,
                                    eval_root.derive(eval_counter++));
          pick = argmax_lowest(est.values);
        } else {
          std::vector<double> probs;
          if (task.pg_complement()) {
            probs = policy_probs_complement(spec, params, task.encode(), obs[0],
                                            noise, eval_root.derive(eval_counter++))
                        .probs;
          } else {
            probs = policy_probs(spec, params, task.encode(), pointers(obs), noise,
                                 eval_root.derive(eval_counter++))
                        .probs;
          }
          double u = env_rng.uniform();
          for (std::size_t a = 0; a < probs.size(); ++a) {
            u -= probs[a];
            if (u < 0.0) {
              pick = static_cast<int>(a);
              break;
            }
          }
        }
      }
      task.step(valid[pick]);
    }
    stats.scores.push_back(task.episode_score());
  }

  double sum = 0.0, sum_sq = 0.0;
  for (double s : stats.scores) {
    sum += s;
    sum_sq += s * s;
  }
  stats.mean = sum / n_episodes;
  stats.stddev = n_episodes > 1
                     ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n_episodes) /
                                                   (n_episodes - 1)))
                     : 0.0;
  return stats;
}

}  // namespace qrl
