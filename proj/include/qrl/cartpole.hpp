#pragma once

#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

// Classic cart-pole balancing benchmark: explicit-Euler dynamics, reward 1
// per step, termination at |x| > 2.4, |angle| > 12 degrees, or 200 steps.
struct CartPoleState {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  int steps = 0;
  bool done = false;
};

class CartPole {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kMassCart = 1.0;
  static constexpr double kMassPole = 0.1;
  static constexpr double kPoleHalfLength = 0.5;
  static constexpr double kForceMag = 10.0;
  static constexpr double kTau = 0.02;
  static constexpr double kXThreshold = 2.4;
  static constexpr double kThetaThreshold = 12.0 * 3.14159265358979323846 / 180.0;
  static constexpr int kMaxSteps = 200;

  CartPoleState reset(Rng& rng);

  struct StepResult {
    double reward = 0.0;
    bool done = false;
  };
  // action 0 pushes left, action 1 pushes right.
  StepResult step(int action);

  const CartPoleState& state() const { return state_; }
  int n_actions() const { return 2; }

  // Raw state features for circuit encoding; the unbounded velocities are
  // clipped to [-5, 5] unless disabled.
  static std::vector<double> features(const CartPoleState& s, bool clip_velocities = true);

 private:
  CartPoleState state_;
};

}  // namespace qrl
