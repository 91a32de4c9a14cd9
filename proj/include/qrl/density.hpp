#pragma once

#include <complex>
#include <vector>

#include "qrl/circuit.hpp"
#include "qrl/noise.hpp"
#include "qrl/observable.hpp"

namespace qrl {

// Small exact-channel oracle. Keeps the full density matrix and applies
// every channel as its Kraus sum, so it is the reference the stochastic
// trajectory sampler is checked against. Capped at 3 qubits.
class DensityMatrix {
 public:
  explicit DensityMatrix(int n_qubits);  // |0..0><0..0|

  int n_qubits() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::complex<double>& at(std::size_t r, std::size_t c) { return rho_[r * dim_ + c]; }
  const std::complex<double>& at(std::size_t r, std::size_t c) const {
    return rho_[r * dim_ + c];
  }

  void apply_unitary(const Gate& g);
  void apply_depolarizing(int q, double p);
  void apply_two_qubit_depolarizing(int q0, int q1, double p);
  void apply_amplitude_damping(int q, double gamma);
  void apply_bitflip(int q, double p);

  double trace() const;
  double expectation(const Observable& obs) const;

 private:
  void apply_kraus(const std::vector<std::vector<std::complex<double>>>& kraus_ops);

  int n_;
  std::size_t dim_;
  std::vector<std::complex<double>> rho_;
};

// Exact expectation under the full channel composition matching the
// trajectory sampler's placement, including measurement bitflip.
double density_matrix_expectation(const Circuit& circuit, const Observable& obs,
                                  const NoiseConfig& noise);

}  // namespace qrl
