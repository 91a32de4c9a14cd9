#include "qrl/noise.hpp"

#include <stdexcept>

namespace qrl {

HardwareParams hardware_preset(char label) {
  switch (label) {
    case 'a': return {0.001, 0.01, 0.0003, 0.01};
    case 'b': return {0.001, 0.01, 0.03, 0.01};
    case 'c': return {0.01, 0.1, 0.03, 0.1};
    case 'd': return {0.1, 0.2, 0.1, 0.1};
    default: throw std::invalid_argument(std::string("unknown hardware preset '") + label + "'");
  }
}

namespace {

void check_prob(double p, const char* what) {
  if (p < 0.0 || p > 1.0)
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

void NoiseConfig::validate() const {
  if (gaussian_sigma < 0.0)
    throw std::invalid_argument("gaussian sigma must be non-negative");
  check_prob(depol_p, "depolarizing probability");
  check_prob(hardware.depol_1q, "depol_1q");
  check_prob(hardware.depol_2q, "depol_2q");
  check_prob(hardware.amp_damp, "amp_damp");
  check_prob(hardware.meas_bitflip, "meas_bitflip");
  if (has_channel() && trajectories < 1)
    throw std::invalid_argument("trajectory count must be positive");
  if (shots.kind == EstimationKind::FixedShots && shots.shots < 1)
    throw std::invalid_argument("shot count must be positive");
  if (shots.kind == EstimationKind::FlexibleShots) {
    const auto& a = shots.alloc;
    if (a.m_init < 1 || a.m_inc < 1 || a.m_max < a.m_init)
      throw std::invalid_argument("flexible shot schedule needs 0 < m_init <= m_max and m_inc > 0");
  }
}

std::vector<double> sample_perturbation(int n_params, double sigma, Rng& rng) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
  std::vector<double> delta(n_params, 0.0);
  if (sigma == 0.0) return delta;
  for (double& d : delta) d = rng.normal(0.0, sigma);
  return delta;
}

namespace {

void emit_gate_with_hw_noise(std::vector<NoiseOp>& ops, const Gate& g,
                             const HardwareParams& hw) {
  auto damp = [&](int q) {
    if (hw.amp_damp > 0.0)
      ops.push_back({NoiseOp::Kind::AmpDamp, {}, q, -1, hw.amp_damp});
  };
  auto depol1 = [&](int q) {
    if (hw.depol_1q > 0.0)
      ops.push_back({NoiseOp::Kind::Depol1, {}, q, -1, hw.depol_1q});
  };
  auto depol2 = [&](int a, int b) {
    if (hw.depol_2q > 0.0)
      ops.push_back({NoiseOp::Kind::Depol2, {}, a, b, hw.depol_2q});
  };

  if (g.kind == GateKind::ZZ) {
    // Noise accounting treats ZZ as CNOT, RZ, CNOT; the decomposition is
    // exact, so the noiseless output is unchanged.
    const int a = g.q0, b = g.q1;
    ops.push_back({NoiseOp::Kind::Unitary, cnot(a, b)});
    depol2(a, b);
    damp(a);
    damp(b);
    ops.push_back({NoiseOp::Kind::Unitary, rz(b, g.angle)});
    depol1(b);
    damp(b);
    ops.push_back({NoiseOp::Kind::Unitary, cnot(a, b)});
    depol2(a, b);
    damp(a);
    damp(b);
    return;
  }

  ops.push_back({NoiseOp::Kind::Unitary, g});
  if (is_two_qubit(g.kind)) {
    depol2(g.q0, g.q1);
    damp(g.q0);
    damp(g.q1);
  } else {
    depol1(g.q0);
    damp(g.q0);
  }
}

}  // namespace

std::vector<NoiseOp> build_noise_program(const Circuit& circuit,
                                         const NoiseConfig& noise) {
  std::vector<NoiseOp> ops;
  switch (noise.channel) {
    case ChannelKind::None:
      for (const Gate& g : circuit.gates())
        ops.push_back({NoiseOp::Kind::Unitary, g});
      break;
    case ChannelKind::Depolarizing:
      for (int m = 0; m < circuit.n_moments(); ++m) {
        for (const Gate& g : circuit.moment(m))
          ops.push_back({NoiseOp::Kind::Unitary, g});
        if (noise.depol_p > 0.0)
          for (int q = 0; q < circuit.n_qubits(); ++q)
            ops.push_back({NoiseOp::Kind::Depol1, {}, q, -1, noise.depol_p});
      }
      break;
    case ChannelKind::CustomHardware:
      for (const Gate& g : circuit.gates())
        emit_gate_with_hw_noise(ops, g, noise.hardware);
      break;
  }
  return ops;
}

}  // namespace qrl
