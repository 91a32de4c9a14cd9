#include "qrl/gradients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrl {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

}  // namespace

CircuitFunction::CircuitFunction(const AnsatzSpec& spec, AnsatzInput input,
                                 Observable obs, NoiseConfig noise, Rng rng)
    : spec_(spec),
      input_(std::move(input)),
      obs_(std::move(obs)),
      noise_(noise),
      base_rng_(rng),
      bound_(spec_.bind(input_)) {}

const std::vector<ParamOccurrence>& CircuitFunction::occurrences(int i) const {
  if (i < 0 || i >= n_params())
    throw std::invalid_argument("parameter index outside the rotation parameters");
  return bound_.occurrences[i];
}

double CircuitFunction::value(std::span<const double> theta) const {
  return value_shifted(theta, {});
}

double CircuitFunction::value_shifted(std::span<const double> theta,
                                      std::span<const AngleShift> shifts) const {
  if (static_cast<int>(theta.size()) != n_params())
    throw std::invalid_argument("parameter vector length mismatch");
  EstimateOptions opts;
  opts.shifts = shifts;
  const auto res = estimate_expectations(bound_, theta, {&obs_}, noise_,
                                         base_rng_.derive(calls_++), opts);
  return res.values[0];
}

double param_shift_grad(const CircuitFunction& f, std::span<const double> theta,
                        int i) {
  double grad = 0.0;
  for (const ParamOccurrence& occ : f.occurrences(i)) {
    if (occ.cofactor == 0.0) continue;
    const AngleShift plus{occ.gate_index, kHalfPi};
    const AngleShift minus{occ.gate_index, -kHalfPi};
    grad += occ.cofactor * 0.5 *
            (f.value_shifted(theta, {&plus, 1}) - f.value_shifted(theta, {&minus, 1}));
  }
  return grad;
}

std::vector<double> param_shift_gradient(const CircuitFunction& f,
                                         std::span<const double> theta) {
  std::vector<double> g(f.n_params());
  for (int i = 0; i < f.n_params(); ++i) g[i] = param_shift_grad(f, theta, i);
  return g;
}

namespace {

// Four-point rule on a pair of gate angles.
double cross_term(const CircuitFunction& f, std::span<const double> theta,
                  int gate_a, int gate_b) {
  const AngleShift pp[2] = {{gate_a, kHalfPi}, {gate_b, kHalfPi}};
  const AngleShift pm[2] = {{gate_a, kHalfPi}, {gate_b, -kHalfPi}};
  const AngleShift mp[2] = {{gate_a, -kHalfPi}, {gate_b, kHalfPi}};
  const AngleShift mm[2] = {{gate_a, -kHalfPi}, {gate_b, -kHalfPi}};
  return 0.25 * (f.value_shifted(theta, pp) - f.value_shifted(theta, pm) -
                 f.value_shifted(theta, mp) + f.value_shifted(theta, mm));
}

double diag_with_reference(const CircuitFunction& f, std::span<const double> theta,
                           int i, double f_theta) {
  const auto& occ = f.occurrences(i);
  double h = 0.0;
  for (std::size_t a = 0; a < occ.size(); ++a) {
    if (occ[a].cofactor == 0.0) continue;
    const AngleShift full{occ[a].gate_index, kPi};
    h += occ[a].cofactor * occ[a].cofactor * 0.5 *
         (f.value_shifted(theta, {&full, 1}) - f_theta);
    for (std::size_t b = a + 1; b < occ.size(); ++b) {
      if (occ[b].cofactor == 0.0) continue;
      h += 2.0 * occ[a].cofactor * occ[b].cofactor *
           cross_term(f, theta, occ[a].gate_index, occ[b].gate_index);
    }
  }
  return h;
}

}  // namespace

double hessian_diag(const CircuitFunction& f, std::span<const double> theta, int i) {
  return diag_with_reference(f, theta, i, f.value(theta));
}

HessianResult hessian(const CircuitFunction& f, std::span<const double> theta,
                      int max_params) {
  const int n = f.n_params();
  if (n > max_params)
    throw std::invalid_argument("parameter count exceeds the Hessian cap");
  const std::uint64_t calls_before = f.evaluations();

  HessianResult result;
  result.n = n;
  result.matrix.assign(static_cast<std::size_t>(n) * n, 0.0);

  const double f_theta = f.value(theta);
  for (int i = 0; i < n; ++i) {
    result.matrix[static_cast<std::size_t>(i) * n + i] =
        diag_with_reference(f, theta, i, f_theta);
    for (int j = i + 1; j < n; ++j) {
      double h = 0.0;
      for (const ParamOccurrence& oi : f.occurrences(i)) {
        if (oi.cofactor == 0.0) continue;
        for (const ParamOccurrence& oj : f.occurrences(j)) {
          if (oj.cofactor == 0.0) continue;
          h += oi.cofactor * oj.cofactor *
               cross_term(f, theta, oi.gate_index, oj.gate_index);
        }
      }
      result.matrix[static_cast<std::size_t>(i) * n + j] = h;
      result.matrix[static_cast<std::size_t>(j) * n + i] = h;
    }
  }
  for (int i = 0; i < n; ++i) result.trace += result.at(i, i);
  result.evaluations = f.evaluations() - calls_before;
  return result;
}

double hessian_trace(const CircuitFunction& f, std::span<const double> theta) {
  const double f_theta = f.value(theta);
  double tr = 0.0;
  for (int i = 0; i < f.n_params(); ++i)
    tr += diag_with_reference(f, theta, i, f_theta);
  return tr;
}

double gaussian_shift_prediction(double f_theta, double tr_h, double sigma) {
  return f_theta + 0.5 * sigma * sigma * tr_h;
}

ErrorBound gaussian_error_bound(double sigma, int n_params, double norm) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
  if (n_params < 1) throw std::invalid_argument("need at least one parameter");
  ErrorBound b;
  b.value = norm * std::expm1(0.5 * sigma * sigma * n_params);
  b.informative = b.value < 2.0 * norm;
  return b;
}

double sufficient_sigma(double epsilon, int n_params, double norm) {
  if (epsilon < 0.0) throw std::invalid_argument("epsilon must be non-negative");
  if (n_params < 1) throw std::invalid_argument("need at least one parameter");
  return std::sqrt(2.0 / n_params) * std::log1p(epsilon / norm);
}

double trh_variance_approx(int n_params, int n_qubits) {
  const double m = static_cast<double>(n_params);
  return m * (m + 1.0) / (4.0 * (std::pow(2.0, n_qubits) + 1.0));
}

std::vector<SweepPoint> perturbation_sweep(const CircuitFunction& f,
                                           std::span<const double> theta0,
                                           std::span<const double> sigmas,
                                           int n_samples, Rng& rng) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  const double f0 = f.value(theta0);
  const int n_params = f.n_params();

  std::vector<SweepPoint> out;
  out.reserve(sigmas.size());
  std::vector<double> shifted(theta0.begin(), theta0.end());
  for (std::size_t si = 0; si < sigmas.size(); ++si) {
    const double sigma = sigmas[si];
    Rng sweep_rng = rng.derive(si);
    double sum = 0.0, sum_sq = 0.0;
    for (int k = 0; k < n_samples; ++k) {
      const auto delta = sample_perturbation(n_params, sigma, sweep_rng);
      for (int i = 0; i < n_params; ++i) shifted[i] = theta0[i] + delta[i];
      const double v = f.value(shifted);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n_samples;
    const double var = std::max(0.0, sum_sq / n_samples - mean * mean);
    SweepPoint p;
    p.sigma = sigma;
    p.mean_shift = std::abs(mean - f0);
    p.std_error = n_samples > 1 ? std::sqrt(var / (n_samples - 1)) : 0.0;
    out.push_back(p);
  }
  return out;
}

std::vector<double> hessian_trace_samples(const AnsatzSpec& spec,
                                          const AnsatzInput& input,
                                          const Observable& obs, int n_samples,
                                          Rng& rng) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  CircuitFunction f(spec, input, obs, NoiseConfig::exact(), rng.derive(1));
  std::vector<double> theta(f.n_params());
  std::vector<double> samples;
  samples.reserve(n_samples);
  Rng draw = rng.derive(0);
  for (int k = 0; k < n_samples; ++k) {
    for (double& t : theta) t = draw.uniform(0.0, 2.0 * std::numbers::pi);
    samples.push_back(hessian_trace(f, theta));
  }
  return samples;
}

}  // namespace qrl
