#include "qrl/executor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qrl/statevector.hpp"
#include "qrl/trajectory.hpp"

namespace qrl {

namespace {

// Samples pooled bitstring batches for the escalation loop. One instance
// serves all observables of the estimation event; with per-observable
// prepared states (coherent noise) each observable samples its own state.
class PooledShotSampler final : public PooledEstimator {
 public:
  PooledShotSampler(std::vector<StateVector> states,
                    const std::vector<const Observable*>& observables,
                    double meas_bitflip, Rng rng)
      : states_(std::move(states)),
        observables_(observables),
        meas_bitflip_(meas_bitflip),
        rng_(rng),
        sums_(observables.size(), 0.0) {}

  void add_shots(int additional) override {
    for (int s = 0; s < additional; ++s) {
      if (states_.size() == 1) {
        const auto v = sample_expectations(states_[0], observables_, 1, rng_,
                                           meas_bitflip_);
        for (std::size_t k = 0; k < sums_.size(); ++k) sums_[k] += v[k];
      } else {
        for (std::size_t k = 0; k < sums_.size(); ++k)
          sums_[k] += sample_expectation(states_[k], *observables_[k], 1, rng_,
                                         meas_bitflip_);
      }
    }
    total_ += additional;
  }

  std::vector<double> estimates() const override {
    std::vector<double> out(sums_.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = sums_[k] / total_;
    return out;
  }

  int total() const { return total_; }
  bool shared_batch() const { return states_.size() == 1; }

 private:
  std::vector<StateVector> states_;
  std::vector<const Observable*> observables_;
  double meas_bitflip_;
  Rng rng_;
  std::vector<double> sums_;
  int total_ = 0;
};

void record_ledger(const EstimateOptions& opts, std::size_t n_obs,
                   std::int64_t shots_each, std::int64_t executions) {
  if (!opts.ledger) return;
  for (std::size_t k = 0; k < n_obs; ++k) {
    const std::string id = opts.observable_ids && k < opts.observable_ids->size()
                               ? (*opts.observable_ids)[k]
                               : "obs" + std::to_string(k);
    // Physical executions are booked once per shared batch.
    opts.ledger->record(id, shots_each, k == 0 ? executions : 0);
  }
}

}  // namespace

EstimateResult estimate_expectations(BoundAnsatz& bound,
                                     std::span<const double> circuit_params,
                                     const std::vector<const Observable*>& observables,
                                     const NoiseConfig& noise, Rng rng,
                                     const EstimateOptions& opts) {
  if (observables.empty()) throw std::invalid_argument("no observables to estimate");
  noise.validate();

  ShotSetting shots = noise.shots;
  if (opts.shots_override >= 0) shots = ShotSetting::fixed(opts.shots_override);
  const double sigma = noise.gaussian_sigma;
  const int n_params = static_cast<int>(bound.occurrences.size());
  const double pm = noise.meas_bitflip();

  // Prepared states: one shared state, or one per observable under coherent
  // noise (each estimate carries its own fixed perturbation).
  const std::size_t n_states = sigma > 0.0 ? observables.size() : 1;
  std::vector<Rng> streams;
  streams.reserve(n_states);
  for (std::size_t k = 0; k < n_states; ++k) streams.push_back(rng.derive(k));

  auto angles_for = [&](std::size_t k) -> std::vector<double> {
    std::vector<double> p(circuit_params.begin(), circuit_params.end());
    if (sigma > 0.0) {
      const auto delta = sample_perturbation(n_params, sigma, streams[k]);
      for (int i = 0; i < n_params; ++i) p[i] += delta[i];
    }
    return p;
  };

  EstimateResult result;
  result.values.assign(observables.size(), 0.0);

  if (noise.has_channel()) {
    // Channel runs rebuild the state per trajectory from the bound circuit.
    const std::optional<int> per_traj =
        shots.kind == EstimationKind::FixedShots ? std::optional<int>(shots.shots)
                                                 : std::nullopt;
    if (shots.kind == EstimationKind::FlexibleShots)
      throw std::invalid_argument(
          "flexible shot allocation with channel noise runs through q_values");
    for (std::size_t k = 0; k < observables.size(); ++k) {
      const std::size_t sk = sigma > 0.0 ? k : 0;
      const auto p = angles_for(sk);
      bound.set_angles(p, opts.shifts);
      Rng traj_rng = streams[sk].derive(1000 + k);
      result.values[k] = trajectory_expectation(bound.circuit, *observables[k],
                                                noise, noise.trajectories,
                                                per_traj, traj_rng);
    }
    result.shots_per_observable = per_traj ? *per_traj * noise.trajectories : 0;
    record_ledger(opts, observables.size(), result.shots_per_observable,
                  static_cast<std::int64_t>(noise.trajectories) *
                      static_cast<std::int64_t>(observables.size()));
    return result;
  }

  // Pure-state paths.
  std::vector<StateVector> states;
  states.reserve(n_states);
  for (std::size_t k = 0; k < n_states; ++k) {
    const auto p = angles_for(k);
    bound.set_angles(p, opts.shifts);
    StateVector sv(bound.circuit.n_qubits());
    sv.apply(bound.circuit);
    states.push_back(std::move(sv));
  }

  switch (shots.kind) {
    case EstimationKind::Exact: {
      for (std::size_t k = 0; k < observables.size(); ++k) {
        const StateVector& sv = states[sigma > 0.0 ? k : 0];
        const Observable obs = pm > 0.0 ? observables[k]->with_bitflip(pm)
                                        : *observables[k];
        result.values[k] = sv.expectation(obs);
      }
      result.shots_per_observable = 0;
      record_ledger(opts, observables.size(), 0,
                    static_cast<std::int64_t>(n_states));
      return result;
    }
    case EstimationKind::FixedShots: {
      const int m = shots.shots;
      if (sigma > 0.0) {
        for (std::size_t k = 0; k < observables.size(); ++k)
          result.values[k] = sample_expectation(states[k], *observables[k], m,
                                                streams[k], pm);
        record_ledger(opts, observables.size(), m,
                      static_cast<std::int64_t>(m) *
                          static_cast<std::int64_t>(observables.size()));
      } else {
        Rng srng = streams[0].derive(1);
        result.values = sample_expectations(states[0], observables, m, srng, pm);
        record_ledger(opts, observables.size(), m, m);
      }
      result.shots_per_observable = m;
      return result;
    }
    case EstimationKind::FlexibleShots: {
      if (observables.size() < 2) {
        // Nothing to separate; fall back to the initial count.
        EstimateOptions sub = opts;
        sub.shots_override = shots.alloc.m_init;
        NoiseConfig base = noise;
        base.shots = ShotSetting::exact();
        return estimate_expectations(bound, circuit_params, observables, base,
                                     rng.derive(7), sub);
      }
      Rng srng = streams[0].derive(2);
      PooledShotSampler sampler(std::move(states), observables, pm, srng);
      const AllocationResult alloc = allocate_shots(sampler, shots.alloc);
      result.values = alloc.estimates;
      result.shots_per_observable = alloc.m_est;
      const std::int64_t execs =
          sampler.shared_batch()
              ? alloc.m_est
              : static_cast<std::int64_t>(alloc.m_est) *
                    static_cast<std::int64_t>(observables.size());
      record_ledger(opts, observables.size(), alloc.m_est, execs);
      return result;
    }
  }
  throw std::logic_error("unreachable");
}

ActionValueResult q_values(const AnsatzSpec& spec, std::span<const double> params,
                           const AnsatzInput& input,
                           const std::vector<const Observable*>& action_obs,
                           const NoiseConfig& noise, Rng rng,
                           const EstimateOptions& opts) {
  if (spec.head() != HeadKind::QValue)
    throw std::invalid_argument("q_values needs a Q-value head");
  BoundAnsatz bound = spec.bind(input);
  const std::span<const double> circuit_params = params.subspan(0, spec.circuit_params());
  EstimateResult est = estimate_expectations(bound, circuit_params, action_obs,
                                             noise, rng, opts);
  const QHead& head = spec.q_head();
  ActionValueResult out;
  out.expectations = est.values;
  out.shots = est.shots_per_observable;
  out.values.resize(est.values.size());
  for (std::size_t a = 0; a < est.values.size(); ++a) {
    const int widx = head.shared_weight ? 0 : static_cast<int>(a);
    const double w = params[spec.head_offset() + widx];
    out.values[a] = head.q_value(est.values[a], w);
  }
  return out;
}

PolicyResult policy_probs(const AnsatzSpec& spec, std::span<const double> params,
                          const AnsatzInput& input,
                          const std::vector<const Observable*>& action_obs,
                          const NoiseConfig& noise, Rng rng,
                          const EstimateOptions& opts) {
  if (spec.head() != HeadKind::Policy)
    throw std::invalid_argument("policy_probs needs a policy head");
  BoundAnsatz bound = spec.bind(input);
  const std::span<const double> circuit_params = params.subspan(0, spec.circuit_params());
  EstimateResult est = estimate_expectations(bound, circuit_params, action_obs,
                                             noise, rng, opts);
  PolicyResult out;
  out.expectations = est.values;
  out.shots = est.shots_per_observable;
  out.probs = softmax_policy(est.values, params[spec.head_offset()]);
  return out;
}

PolicyResult policy_probs_complement(const AnsatzSpec& spec,
                                     std::span<const double> params,
                                     const AnsatzInput& input,
                                     const Observable& obs,
                                     const NoiseConfig& noise, Rng rng,
                                     const EstimateOptions& opts) {
  if (spec.head() != HeadKind::Policy)
    throw std::invalid_argument("policy_probs needs a policy head");
  BoundAnsatz bound = spec.bind(input);
  const std::span<const double> circuit_params = params.subspan(0, spec.circuit_params());
  EstimateResult est = estimate_expectations(bound, circuit_params, {&obs},
                                             noise, rng, opts);
  PolicyResult out;
  out.expectations = {est.values[0], 1.0 - est.values[0]};
  out.shots = est.shots_per_observable;
  out.probs = softmax_policy(out.expectations, params[spec.head_offset()]);
  return out;
}

}  // namespace qrl
