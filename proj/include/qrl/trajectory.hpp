#pragma once

#include <optional>

#include "qrl/circuit.hpp"
#include "qrl/noise.hpp"
#include "qrl/observable.hpp"
#include "qrl/rng.hpp"
#include "qrl/statevector.hpp"

namespace qrl {

// One stochastic pure-state run of the circuit under the configured channel.
// Pauli events are drawn per channel application; amplitude damping uses
// quantum-jump unraveling (Kraus branch chosen with its Born probability,
// state renormalized afterwards). Measurement bitflip is not applied here,
// it belongs to the readout.
StateVector run_trajectory(const Circuit& circuit, const NoiseConfig& noise,
                           Rng& rng);

struct TrajectoryStats {
  double mean = 0.0;
  double std_error = 0.0;
  int n_trajectories = 0;
};

// Mean over n_traj trajectory expectations. shots_per_traj empty = exact
// per-trajectory expectation; otherwise each trajectory is read out with that
// many samples. Measurement bitflip (hardware mode) enters the readout: as a
// (1-2p) scale per Z factor in the exact case, as sampled bit flips otherwise.
// Trajectory t uses the rng substream t, so results do not depend on
// evaluation order.
TrajectoryStats trajectory_expectation_stats(const Circuit& circuit,
                                             const Observable& obs,
                                             const NoiseConfig& noise,
                                             int n_traj,
                                             std::optional<int> shots_per_traj,
                                             Rng& rng);

double trajectory_expectation(const Circuit& circuit, const Observable& obs,
                              const NoiseConfig& noise, int n_traj,
                              std::optional<int> shots_per_traj, Rng& rng);

}  // namespace qrl
