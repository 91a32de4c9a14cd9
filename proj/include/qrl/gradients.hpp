#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/ansatz.hpp"
#include "qrl/executor.hpp"
#include "qrl/noise.hpp"
#include "qrl/observable.hpp"
#include "qrl/rng.hpp"

namespace qrl {

// Scalar circuit output f(theta) over the flat circuit-parameter vector for
// a fixed (ansatz, input, observable, noise) combination. Every call is a
// fresh estimation event with its own noise stream.
class CircuitFunction {
 public:
  CircuitFunction(const AnsatzSpec& spec, AnsatzInput input, Observable obs,
                  NoiseConfig noise, Rng rng);

  int n_params() const { return static_cast<int>(bound_.occurrences.size()); }
  double observable_norm() const { return obs_.infinity_norm(); }
  const std::vector<ParamOccurrence>& occurrences(int i) const;

  double value(std::span<const double> theta) const;
  double value_shifted(std::span<const double> theta,
                       std::span<const AngleShift> shifts) const;

  std::uint64_t evaluations() const { return calls_; }

 private:
  AnsatzSpec spec_;
  AnsatzInput input_;
  Observable obs_;
  NoiseConfig noise_;
  Rng base_rng_;
  mutable BoundAnsatz bound_;
  mutable std::uint64_t calls_ = 0;
};

// d f / d theta_i: half the difference of +-pi/2 shifted evaluations, summed
// over the parameter's gate occurrences with their cofactors.
double param_shift_grad(const CircuitFunction& f, std::span<const double> theta,
                        int i);
std::vector<double> param_shift_gradient(const CircuitFunction& f,
                                         std::span<const double> theta);

// Second derivative d^2 f / d theta_i^2. Single-occurrence parameters use the
// two-evaluation rule 0.5 * (f(theta + pi e_i) - f(theta)); shared parameters
// add the cross terms between occurrences.
double hessian_diag(const CircuitFunction& f, std::span<const double> theta, int i);

struct HessianResult {
  int n = 0;
  std::vector<double> matrix;  // row-major n x n, symmetric
  double trace = 0.0;
  std::uint64_t evaluations = 0;

  double at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * n + j]; }
};

HessianResult hessian(const CircuitFunction& f, std::span<const double> theta,
                      int max_params = 128);

// Trace via the diagonal rule, sharing the unshifted evaluation.
double hessian_trace(const CircuitFunction& f, std::span<const double> theta);

// Predicted mean output under coherent perturbations of width sigma.
double gaussian_shift_prediction(double f_theta, double tr_h, double sigma);

struct ErrorBound {
  double value = 0.0;
  bool informative = true;  // false once the bound reaches 2 * norm
};

// norm * (exp(sigma^2 M / 2) - 1).
ErrorBound gaussian_error_bound(double sigma, int n_params, double norm);

// Largest sigma guaranteed to keep the mean output error below epsilon:
// sqrt(2 / M) * log(1 + epsilon / norm).
double sufficient_sigma(double epsilon, int n_params, double norm);

// M (M + 1) / (4 (2^n + 1)).
double trh_variance_approx(int n_params, int n_qubits);

struct SweepPoint {
  double sigma = 0.0;
  double mean_shift = 0.0;  // |mean_k f(theta0 + delta_k) - f(theta0)|
  double std_error = 0.0;
};

std::vector<SweepPoint> perturbation_sweep(const CircuitFunction& f,
                                           std::span<const double> theta0,
                                           std::span<const double> sigmas,
                                           int n_samples, Rng& rng);

// Trace-of-Hessian samples at parameter vectors drawn uniform in [0, 2pi).
std::vector<double> hessian_trace_samples(const AnsatzSpec& spec,
                                          const AnsatzInput& input,
                                          const Observable& obs, int n_samples,
                                          Rng& rng);

}  // namespace qrl
