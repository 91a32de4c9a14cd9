#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qrl/density.hpp"
#include "qrl/noise.hpp"
#include "qrl/trajectory.hpp"

using namespace qrl;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Circuit random_circuit(Rng& rng, int n_qubits, int n_moments) {
  Circuit c(n_qubits);
  for (int m = 0; m < n_moments; ++m) {
    c.begin_moment();
    const int pick = rng.uniform_int(5);
    const int q = rng.uniform_int(n_qubits);
    const int q2 = (q + 1 + rng.uniform_int(n_qubits - 1)) % n_qubits;
    switch (pick) {
      case 0: c.push(rx(q, rng.uniform(0, kTwoPi))); break;
      case 1: c.push(ry(q, rng.uniform(0, kTwoPi))); break;
      case 2: c.push(cnot(q, q2)); break;
      case 3: c.push(cz(q, q2)); break;
      default: c.push(zz(q, q2, rng.uniform(0, kTwoPi))); break;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("p = 0 leaves the trajectory identical to the noiseless run") {
  Rng rng(1, 0);
  const Circuit c = random_circuit(rng, 2, 5);
  StateVector ideal(2);
  ideal.apply(c);
  Rng traj_rng(2, 0);
  const StateVector traj = run_trajectory(c, NoiseConfig::depolarizing(0.0, 1), traj_rng);
  for (std::size_t i = 0; i < ideal.size(); ++i)
    CHECK(std::abs(ideal[i] - traj[i]) < 1e-12);
}

TEST_CASE("single idle moment with depolarizing noise relaxes <Z> to 1 - 4p/3") {
  // One empty moment still receives the per-moment channel layer.
  Circuit idle(1);
  const Observable z0 = Observable::z_string({0});
  for (double p : {0.05, 0.3}) {
    const NoiseConfig noise = NoiseConfig::depolarizing(p, 1);
    CHECK(density_matrix_expectation(idle, z0, noise) ==
          doctest::Approx(1.0 - 4.0 * p / 3.0).epsilon(1e-12));

    Rng rng(3, static_cast<std::uint64_t>(p * 1000));
    const TrajectoryStats stats =
        trajectory_expectation_stats(idle, z0, noise, 40000, std::nullopt, rng);
    CHECK(std::abs(stats.mean - (1.0 - 4.0 * p / 3.0)) < 4.0 * stats.std_error);
  }
}

TEST_CASE("amplitude damping pulls |1> toward |0>") {
  Circuit flip(1);
  flip.add_moment(std::vector<Gate>{pauli_x(0)});
  const Observable z0 = Observable::z_string({0});
  for (double gamma : {0.1, 0.5, 0.9}) {
    const NoiseConfig noise = NoiseConfig::custom_hardware({0, 0, gamma, 0}, 1);
    CHECK(density_matrix_expectation(flip, z0, noise) ==
          doctest::Approx(2.0 * gamma - 1.0).epsilon(1e-12));

    Rng rng(5, static_cast<std::uint64_t>(gamma * 1000));
    const TrajectoryStats stats =
        trajectory_expectation_stats(flip, z0, noise, 40000, std::nullopt, rng);
    CHECK(std::abs(stats.mean - (2.0 * gamma - 1.0)) < 4.0 * stats.std_error);
  }
}

TEST_CASE("measurement bitflip damps Z readout by 1 - 2p") {
  Circuit idle(1);
  const Observable z0 = Observable::z_string({0});
  const NoiseConfig noise = NoiseConfig::custom_hardware({0, 0, 0, 0.25}, 1);
  CHECK(density_matrix_expectation(idle, z0, noise) == doctest::Approx(0.5));
  Rng rng(6, 0);
  CHECK(trajectory_expectation(idle, z0, noise, 10, std::nullopt, rng) ==
        doctest::Approx(0.5));
}

TEST_CASE("two-qubit depolarizing at p = 1 fully mixes") {
  Circuit c(2);
  c.add_moment(std::vector<Gate>{cnot(0, 1)});
  NoiseConfig noise = NoiseConfig::custom_hardware({0.0, 1.0, 0, 0}, 1);
  // At p2 = 1 every non-identity pair is equally likely: <Z0 Z1> averages to
  // (sum over 15 pairs of the Z0 Z1 eigenvalue on |00>) / 15 = -1/15...
  // the oracle is the reference here.
  const double exact =
      density_matrix_expectation(c, Observable::z_string({0, 1}), noise);
  Rng rng(7, 0);
  const TrajectoryStats stats = trajectory_expectation_stats(
      c, Observable::z_string({0, 1}), noise, 60000, std::nullopt, rng);
  CHECK(std::abs(stats.mean - exact) < 4.0 * stats.std_error);
}

TEST_CASE("trajectory averages converge to the oracle on random circuits") {
  Rng rng(11, 0);
  const std::vector<NoiseConfig> settings = {
      NoiseConfig::depolarizing(0.05, 1),
      NoiseConfig::custom_hardware({0.02, 0.05, 0.02, 0.01}, 1),
      NoiseConfig::custom_hardware(hardware_preset('c'), 1),
  };
  const Observable obs = Observable::z_string({0, 1});
  for (int k = 0; k < 6; ++k) {
    const Circuit c = random_circuit(rng, 2, 4 + rng.uniform_int(3));
    for (std::size_t s = 0; s < settings.size(); ++s) {
      const double exact = density_matrix_expectation(c, obs, settings[s]);
      Rng traj_rng = rng.derive(100 + k * 10 + s);
      const TrajectoryStats stats = trajectory_expectation_stats(
          c, obs, settings[s], 30000, std::nullopt, traj_rng);
      const double tol = std::max(4.0 * stats.std_error, 1e-12);
      CHECK(std::abs(stats.mean - exact) <= tol);
    }
  }
}

TEST_CASE("three-qubit oracle handles a zz gate decomposition") {
  Circuit c(3);
  c.add_moment(std::vector<Gate>{ry(0, 0.9)});
  c.add_moment(std::vector<Gate>{zz(0, 2, 1.3)});
  c.add_moment(std::vector<Gate>{rx(1, 0.4)});
  const NoiseConfig noise = NoiseConfig::custom_hardware(hardware_preset('b'), 1);
  const Observable obs = Observable::z_string({0, 2});
  const double exact = density_matrix_expectation(c, obs, noise);
  Rng rng(13, 0);
  const TrajectoryStats stats =
      trajectory_expectation_stats(c, obs, noise, 40000, std::nullopt, rng);
  CHECK(std::abs(stats.mean - exact) < 4.0 * stats.std_error);
}

TEST_CASE("density oracle rejects more than three qubits") {
  CHECK_THROWS_AS(DensityMatrix(4), std::runtime_error);
}

TEST_CASE("noiseless density oracle equals the statevector expectation") {
  Rng rng(17, 0);
  const Circuit c = random_circuit(rng, 3, 6);
  StateVector sv(3);
  sv.apply(c);
  const Observable obs = Observable::z_string({0, 1, 2});
  CHECK(density_matrix_expectation(c, obs, NoiseConfig::exact()) ==
        doctest::Approx(sv.expectation(obs)).epsilon(1e-10));
}

TEST_CASE("exact channel config reproduces expectation() in trajectory mode") {
  Rng rng(19, 0);
  const Circuit c = random_circuit(rng, 2, 5);
  StateVector sv(2);
  sv.apply(c);
  const Observable obs = Observable::z_string({0});
  Rng t(20, 0);
  CHECK(trajectory_expectation(c, obs, NoiseConfig::exact(), 7, std::nullopt, t) ==
        doctest::Approx(sv.expectation(obs)).epsilon(1e-12));
}

TEST_CASE("trajectory noise placement counts channels per gate") {
  Circuit c(2);
  c.add_moment(std::vector<Gate>{rx(0, 0.2)});
  c.add_moment(std::vector<Gate>{zz(0, 1, 0.3)});
  NoiseConfig hw = NoiseConfig::custom_hardware({0.01, 0.02, 0.03, 0.0}, 1);
  const auto program = build_noise_program(c, hw);
  int unitaries = 0, depol1 = 0, depol2 = 0, damp = 0;
  for (const NoiseOp& op : program) {
    switch (op.kind) {
      case NoiseOp::Kind::Unitary: ++unitaries; break;
      case NoiseOp::Kind::Depol1: ++depol1; break;
      case NoiseOp::Kind::Depol2: ++depol2; break;
      case NoiseOp::Kind::AmpDamp: ++damp; break;
    }
  }
  // rx stays one gate; zz unrolls to cnot, rz, cnot.
  CHECK(unitaries == 4);
  // one 1q channel after rx, one after the unrolled rz.
  CHECK(depol1 == 2);
  // one 2q channel after each cnot.
  CHECK(depol2 == 2);
  // damping after each gate on the involved qubits: 1 + 2 + 1 + 2.
  CHECK(damp == 6);

  NoiseConfig depol = NoiseConfig::depolarizing(0.1, 1);
  const auto program2 = build_noise_program(c, depol);
  int depol_layers = 0;
  for (const NoiseOp& op : program2)
    if (op.kind == NoiseOp::Kind::Depol1) ++depol_layers;
  CHECK(depol_layers == 2 * c.n_moments());
}
