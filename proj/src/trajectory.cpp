#include "qrl/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace qrl {

namespace {

const Pauli kPaulis[3] = {Pauli::X, Pauli::Y, Pauli::Z};

void apply_depol1(StateVector& state, int q, double p, Rng& rng) {
  const double u = rng.uniform();
  if (u >= p) return;
  state.apply_pauli(q, kPaulis[static_cast<int>(u / p * 3.0) % 3]);
}

void apply_depol2(StateVector& state, int q0, int q1, double p, Rng& rng) {
  const double u = rng.uniform();
  if (u >= p) return;
  // 15 non-identity two-qubit Pauli pairs, each with weight p/15.
  int idx = static_cast<int>(u / p * 15.0) % 15 + 1;  // 1..15
  const int p0 = idx % 4;  // 0 = identity on that qubit
  const int p1 = idx / 4;
  if (p0 > 0) state.apply_pauli(q0, kPaulis[p0 - 1]);
  if (p1 > 0) state.apply_pauli(q1, kPaulis[p1 - 1]);
}

void apply_damping(StateVector& state, int q, double gamma, Rng& rng) {
  const double p1 = state.prob_one(q);
  const double p_jump = gamma * p1;
  const std::uint64_t bit = 1ull << q;
  if (rng.uniform() < p_jump) {
    // |1> component decays to |0>.
    const double inv = 1.0 / std::sqrt(p1);
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (i & bit) {
        state[i ^ bit] = state[i] * inv;
        state[i] = 0.0;
      }
    }
  } else {
    const double keep = std::sqrt(1.0 - gamma);
    for (std::size_t i = 0; i < state.size(); ++i)
      if (i & bit) state[i] *= keep;
    state.renormalize();
  }
}

void run_program(const std::vector<NoiseOp>& program, StateVector& state,
                 Rng& rng) {
  state.reset();
  for (const NoiseOp& op : program) {
    switch (op.kind) {
      case NoiseOp::Kind::Unitary: state.apply(op.gate); break;
      case NoiseOp::Kind::Depol1: apply_depol1(state, op.q0, op.strength, rng); break;
      case NoiseOp::Kind::Depol2: apply_depol2(state, op.q0, op.q1, op.strength, rng); break;
      case NoiseOp::Kind::AmpDamp: apply_damping(state, op.q0, op.strength, rng); break;
    }
  }
}

}  // namespace

StateVector run_trajectory(const Circuit& circuit, const NoiseConfig& noise,
                           Rng& rng) {
  StateVector state(circuit.n_qubits());
  run_program(build_noise_program(circuit, noise), state, rng);
  return state;
}

TrajectoryStats trajectory_expectation_stats(const Circuit& circuit,
                                             const Observable& obs,
                                             const NoiseConfig& noise,
                                             int n_traj,
                                             std::optional<int> shots_per_traj,
                                             Rng& rng) {
  if (n_traj < 1) throw std::invalid_argument("need at least one trajectory");
  const double pm = noise.meas_bitflip();
  const Observable scaled = pm > 0.0 ? obs.with_bitflip(pm) : obs;
  const auto program = build_noise_program(circuit, noise);

  StateVector state(circuit.n_qubits());
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < n_traj; ++t) {
    Rng traj_rng = rng.derive(static_cast<std::uint64_t>(t));
    run_program(program, state, traj_rng);
    double v;
    if (shots_per_traj.has_value()) {
      v = sample_expectation(state, obs, *shots_per_traj, traj_rng, pm);
    } else {
      v = state.expectation(scaled);
    }
    sum += v;
    sum_sq += v * v;
  }
  TrajectoryStats s;
  s.n_trajectories = n_traj;
  s.mean = sum / n_traj;
  const double var = std::max(0.0, sum_sq / n_traj - s.mean * s.mean);
  s.std_error = n_traj > 1 ? std::sqrt(var / (n_traj - 1)) : 0.0;
  return s;
}

double trajectory_expectation(const Circuit& circuit, const Observable& obs,
                              const NoiseConfig& noise, int n_traj,
                              std::optional<int> shots_per_traj, Rng& rng) {
  return trajectory_expectation_stats(circuit, obs, noise, n_traj,
                                      shots_per_traj, rng)
      .mean;
}

}  // namespace qrl
