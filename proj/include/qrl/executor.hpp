#pragma once

#include <span>
#include <string>
#include <vector>

#include "qrl/ansatz.hpp"
#include "qrl/noise.hpp"
#include "qrl/observable.hpp"
#include "qrl/rng.hpp"
#include "qrl/shots.hpp"

namespace qrl {

struct EstimateOptions {
  std::span<const AngleShift> shifts{};  // parameter-shift displacements
  int shots_override = -1;               // >= 0 forces that fixed shot count
  ShotLedger* ledger = nullptr;
  const std::vector<std::string>* observable_ids = nullptr;
};

struct EstimateResult {
  std::vector<double> values;     // one expectation per observable
  int shots_per_observable = 0;   // 0 for exact readout
};

// One estimation event. Coherent noise draws a fresh perturbation per
// observable and keeps it fixed for all shots/trajectories of that estimate;
// channel noise averages over the configured trajectory count; finite-shot
// readout samples bitstrings (commuting observables share one batch when the
// prepared state is the same). The rng is taken by value: the event consumes
// its own stream, so repeated calls with the same stream are identical.
EstimateResult estimate_expectations(BoundAnsatz& bound,
                                     std::span<const double> circuit_params,
                                     const std::vector<const Observable*>& observables,
                                     const NoiseConfig& noise, Rng rng,
                                     const EstimateOptions& opts = {});

struct ActionValueResult {
  std::vector<double> values;        // head-transformed Q-values
  std::vector<double> expectations;  // raw observable estimates
  int shots = 0;
};

// Q(s, a) for every provided action observable. With a flexible shot
// setting the escalation procedure runs on the raw expectations and the
// settled count is reported back.
ActionValueResult q_values(const AnsatzSpec& spec, std::span<const double> params,
                           const AnsatzInput& input,
                           const std::vector<const Observable*>& action_obs,
                           const NoiseConfig& noise, Rng rng,
                           const EstimateOptions& opts = {});

struct PolicyResult {
  std::vector<double> probs;
  std::vector<double> expectations;
  int shots = 0;
};

// Softmax policy over per-action expectations.
PolicyResult policy_probs(const AnsatzSpec& spec, std::span<const double> params,
                          const AnsatzInput& input,
                          const std::vector<const Observable*>& action_obs,
                          const NoiseConfig& noise, Rng rng,
                          const EstimateOptions& opts = {});

// Two-action variant measuring a single observable O; the second action's
// expectation is 1 - <O>.
PolicyResult policy_probs_complement(const AnsatzSpec& spec,
                                     std::span<const double> params,
                                     const AnsatzInput& input,
                                     const Observable& obs,
                                     const NoiseConfig& noise, Rng rng,
                                     const EstimateOptions& opts = {});

}  // namespace qrl
