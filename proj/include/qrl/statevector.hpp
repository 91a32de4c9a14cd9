#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "qrl/circuit.hpp"
#include "qrl/gate.hpp"
#include "qrl/observable.hpp"
#include "qrl/rng.hpp"

namespace qrl {

inline constexpr int kMaxQubits = 12;

using Amplitude = std::complex<double>;

// Dense statevector, qubit 0 stored as the least-significant index bit.
class StateVector {
 public:
  explicit StateVector(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return amps_.size(); }
  Amplitude& operator[](std::size_t i) { return amps_[i]; }
  const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }

  void reset();  // back to |0...0>
  void apply(const Gate& g);
  void apply(const Circuit& c);
  void apply_pauli(int qubit, Pauli p);

  double norm_sq() const;
  void renormalize();

  // Probability of measuring |1> on a qubit.
  double prob_one(int qubit) const;

  double expectation(const Observable& obs) const;

  // One projective computational-basis sample.
  std::uint64_t sample_bits(Rng& rng) const;

 private:
  int n_qubits_;
  std::vector<Amplitude> amps_;
};

StateVector init_state(int n_qubits);

// Unbiased finite-shot estimate of a diagonal observable; all terms are read
// from one batch of bitstring samples. Each sampled bit is independently
// flipped with probability meas_bitflip before evaluation.
double sample_expectation(const StateVector& state, const Observable& obs,
                          int shots, Rng& rng, double meas_bitflip = 0.0);

// As above for several commuting diagonal observables sharing one batch.
std::vector<double> sample_expectations(const StateVector& state,
                                        const std::vector<const Observable*>& obs,
                                        int shots, Rng& rng,
                                        double meas_bitflip = 0.0);

// Plain-text table (index, real, imaginary), 15 significant digits.
void save_statevector(const std::string& path, const StateVector& state);
StateVector load_statevector(const std::string& path);

}  // namespace qrl
