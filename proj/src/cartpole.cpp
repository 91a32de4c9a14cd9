#include "qrl/cartpole.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrl {

CartPoleState CartPole::reset(Rng& rng) {
  state_ = CartPoleState{};
  state_.x = rng.uniform(-0.05, 0.05);
  state_.x_dot = rng.uniform(-0.05, 0.05);
  state_.theta = rng.uniform(-0.05, 0.05);
  state_.theta_dot = rng.uniform(-0.05, 0.05);
  return state_;
}

CartPole::StepResult CartPole::step(int action) {
  if (state_.done) throw std::runtime_error("step on a finished episode");
  if (action != 0 && action != 1) throw std::invalid_argument("action must be 0 or 1");

  const double force = action == 1 ? kForceMag : -kForceMag;
  const double cos_t = std::cos(state_.theta);
  const double sin_t = std::sin(state_.theta);
  const double total_mass = kMassCart + kMassPole;
  const double pole_mass_length = kMassPole * kPoleHalfLength;

  const double temp =
      (force + pole_mass_length * state_.theta_dot * state_.theta_dot * sin_t) /
      total_mass;
  const double theta_acc =
      (kGravity * sin_t - cos_t * temp) /
      (kPoleHalfLength * (4.0 / 3.0 - kMassPole * cos_t * cos_t / total_mass));
  const double x_acc = temp - pole_mass_length * theta_acc * cos_t / total_mass;

  state_.x += kTau * state_.x_dot;
  state_.x_dot += kTau * x_acc;
  state_.theta += kTau * state_.theta_dot;
  state_.theta_dot += kTau * theta_acc;
  state_.steps += 1;

  state_.done = std::abs(state_.x) > kXThreshold ||
                std::abs(state_.theta) > kThetaThreshold ||
                state_.steps >= kMaxSteps;
  return {1.0, state_.done};
}

std::vector<double> CartPole::features(const CartPoleState& s, bool clip_velocities) {
  auto clip = [clip_velocities](double v) {
    return clip_velocities ? std::clamp(v, -5.0, 5.0) : v;
  };
  return {s.x, clip(s.x_dot), s.theta, clip(s.theta_dot)};
}

}  // namespace qrl
