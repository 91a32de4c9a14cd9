#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrl/ansatz.hpp"
#include "qrl/gradients.hpp"

namespace qrl {

// Log-spaced grid lo..hi inclusive.
std::vector<double> log_grid(double lo, double hi, int points);

struct PerturbationStudy {
  std::vector<double> theta0;
  double f_theta0 = 0.0;
  double trace_h = 0.0;
  std::vector<SweepPoint> sweep;
};

// Draws random parameter vectors until |f(theta0)| >= min_abs_value, then
// measures the mean output shift per sigma and the Hessian-trace prediction.
PerturbationStudy perturbation_study(const AnsatzSpec& spec, const AnsatzInput& input,
                                     const Observable& obs,
                                     const std::vector<double>& sigmas,
                                     int samples_per_sigma, double min_abs_value,
                                     std::uint64_t seed);

void write_perturbation_csv(const std::string& path, const PerturbationStudy& study,
                            int n_params, double observable_norm);

struct HessianDistribution {
  std::vector<double> samples;
  double mean = 0.0;
  double stddev = 0.0;
  double predicted_std = 0.0;  // sqrt(M (M+1) / (4 (2^n + 1)))
};

HessianDistribution hessian_distribution(const AnsatzSpec& spec,
                                         const AnsatzInput& input,
                                         const Observable& obs, int n_samples,
                                         std::uint64_t seed);

void write_hessian_csv(const std::string& path, const HessianDistribution& dist);

}  // namespace qrl
