#include "qrl/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace qrl {

std::vector<double> log_grid(double lo, double hi, int points) {
  if (lo <= 0.0 || hi <= lo || points < 2)
    throw std::invalid_argument("log grid needs 0 < lo < hi and >= 2 points");
  std::vector<double> grid(points);
  const double step = std::log(hi / lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[i] = lo * std::exp(step * i);
  return grid;
}

PerturbationStudy perturbation_study(const AnsatzSpec& spec, const AnsatzInput& input,
                                     const Observable& obs,
                                     const std::vector<double>& sigmas,
                                     int samples_per_sigma, double min_abs_value,
                                     std::uint64_t seed) {
  CircuitFunction f(spec, input, obs, NoiseConfig::exact(), Rng(seed, 90));

  PerturbationStudy study;
  study.theta0.resize(f.n_params());
  Rng draw(seed, 91);
  bool found = false;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (double& t : study.theta0) t = draw.uniform(0.0, 2.0 * std::numbers::pi);
    study.f_theta0 = f.value(study.theta0);
    if (std::abs(study.f_theta0) >= min_abs_value) {
      found = true;
      break;
    }
  }
  if (!found)
    throw std::runtime_error("no parameter point with the requested output magnitude");

  study.trace_h = hessian_trace(f, study.theta0);
  Rng sweep_rng(seed, 92);
  study.sweep = perturbation_sweep(f, study.theta0, sigmas, samples_per_sigma,
                                   sweep_rng);
  return study;
}

void write_perturbation_csv(const std::string& path, const PerturbationStudy& study,
                            int n_params, double observable_norm) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "sigma,mean_shift,stderr,prediction,upper_bound\n";
  char buf[200];
  for (const SweepPoint& p : study.sweep) {
    const double prediction =
        std::abs(gaussian_shift_prediction(0.0, study.trace_h, p.sigma));
    const double bound = gaussian_error_bound(p.sigma, n_params, observable_norm).value;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.sigma,
                  p.mean_shift, p.std_error, prediction, bound);
    f << buf;
  }
}

HessianDistribution hessian_distribution(const AnsatzSpec& spec,
                                         const AnsatzInput& input,
                                         const Observable& obs, int n_samples,
                                         std::uint64_t seed) {
  Rng rng(seed, 95);
  HessianDistribution dist;
  dist.samples = hessian_trace_samples(spec, input, obs, n_samples, rng);
  double sum = 0.0, sum_sq = 0.0;
  for (double v : dist.samples) {
    sum += v;
    sum_sq += v * v;
  }
  dist.mean = sum / n_samples;
  dist.stddev = std::sqrt(
      std::max(0.0, (sum_sq - sum * sum / n_samples) / (n_samples - 1)));
  dist.predicted_std =
      std::sqrt(trh_variance_approx(spec.circuit_params(), spec.n_qubits()));
  return dist;
}

void write_hessian_csv(const std::string& path, const HessianDistribution& dist) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "sample_id,trace_h\n";
  char buf[80];
  for (std::size_t i = 0; i < dist.samples.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, dist.samples[i]);
    f << buf;
  }
}

}  // namespace qrl
