#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrl/circuit.hpp"
#include "qrl/rng.hpp"

namespace qrl {

// Escalation schedule for flexible shot estimation.
struct ShotAllocConfig {
  int m_init = 100;
  int m_inc = 100;
  int m_max = 10000;
};

enum class EstimationKind { Exact, FixedShots, FlexibleShots };

struct ShotSetting {
  EstimationKind kind = EstimationKind::Exact;
  int shots = 0;  // FixedShots
  ShotAllocConfig alloc;

  static ShotSetting exact() { return {}; }
  static ShotSetting fixed(int m) { return {EstimationKind::FixedShots, m, {}}; }
  static ShotSetting flexible(ShotAllocConfig a) {
    return {EstimationKind::FlexibleShots, 0, a};
  }
};

// Per-gate channel strengths of the hardware-style model.
struct HardwareParams {
  double depol_1q = 0.0;
  double depol_2q = 0.0;
  double amp_damp = 0.0;
  double meas_bitflip = 0.0;
};

// Labeled presets a..d; unknown labels throw.
HardwareParams hardware_preset(char label);

enum class ChannelKind { None, Depolarizing, CustomHardware };

struct NoiseConfig {
  double gaussian_sigma = 0.0;  // coherent parameter perturbation
  ChannelKind channel = ChannelKind::None;
  double depol_p = 0.0;         // Depolarizing: per-moment, per-qubit strength
  HardwareParams hardware;      // CustomHardware
  int trajectories = 1;         // channel sampling repetitions
  ShotSetting shots;

  static NoiseConfig exact() { return {}; }
  static NoiseConfig fixed_shots(int m) {
    NoiseConfig c;
    c.shots = ShotSetting::fixed(m);
    return c;
  }
  static NoiseConfig flexible_shots(ShotAllocConfig a) {
    NoiseConfig c;
    c.shots = ShotSetting::flexible(a);
    return c;
  }
  static NoiseConfig gaussian(double sigma) {
    NoiseConfig c;
    c.gaussian_sigma = sigma;
    return c;
  }
  static NoiseConfig depolarizing(double p, int n_traj) {
    NoiseConfig c;
    c.channel = ChannelKind::Depolarizing;
    c.depol_p = p;
    c.trajectories = n_traj;
    return c;
  }
  static NoiseConfig custom_hardware(const HardwareParams& hw, int n_traj) {
    NoiseConfig c;
    c.channel = ChannelKind::CustomHardware;
    c.hardware = hw;
    c.trajectories = n_traj;
    return c;
  }

  bool has_channel() const { return channel != ChannelKind::None; }
  bool is_exact() const {
    return gaussian_sigma == 0.0 && !has_channel() &&
           shots.kind == EstimationKind::Exact;
  }
  double meas_bitflip() const {
    return channel == ChannelKind::CustomHardware ? hardware.meas_bitflip : 0.0;
  }
  void validate() const;  // throws on out-of-range probabilities
};

// One coherent perturbation vector, i.i.d. N(0, sigma^2) per entry. The
// vector stays fixed for the whole of a single expectation-value estimation
// and is resampled for the next one.
std::vector<double> sample_perturbation(int n_params, double sigma, Rng& rng);

// Channel placement shared by the trajectory sampler and the density-matrix
// oracle: a flat program of unitaries and channel applications.
struct NoiseOp {
  enum class Kind { Unitary, Depol1, Depol2, AmpDamp } kind;
  Gate gate;       // Unitary
  int q0 = 0;      // channel targets
  int q1 = -1;
  double strength = 0.0;
};

// Depolarizing mode: every qubit gets a channel after each moment.
// CustomHardware mode: per-gate channels, with a ZZ gate decomposed into
// CNOT, RZ, CNOT so each constituent carries its own channel.
std::vector<NoiseOp> build_noise_program(const Circuit& circuit,
                                         const NoiseConfig& noise);

}  // namespace qrl
