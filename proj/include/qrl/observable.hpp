#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qrl {

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

struct PauliTerm {
  double coeff = 0.0;
  std::vector<std::pair<int, Pauli>> factors;  // sorted by qubit, distinct
  // Bit masks derived from factors.
  std::uint64_t x_mask = 0;
  std::uint64_t y_mask = 0;
  std::uint64_t z_mask = 0;
};

// Real-weighted sum of Pauli strings plus an optional identity component.
// The infinity norm is exact for the observables built here (diagonal sums
// and single strings); otherwise it falls back to the coefficient sum, which
// still upper-bounds every expectation value.
class Observable {
 public:
  Observable() = default;

  static Observable identity(double constant);
  // coeff * Z_{q1} Z_{q2} ... + constant
  static Observable z_string(const std::vector<int>& qubits, double coeff = 1.0,
                             double constant = 0.0);
  static Observable single_term(double coeff,
                                const std::vector<std::pair<int, Pauli>>& factors,
                                double constant = 0.0);
  static Observable sum(const std::vector<PauliTerm>& terms, double constant = 0.0);

  const std::vector<PauliTerm>& terms() const { return terms_; }
  double constant_term() const { return constant_; }
  double infinity_norm() const { return infinity_norm_; }
  bool diagonal() const { return diagonal_; }
  int max_qubit() const { return max_qubit_; }

  // Eigenvalue on a computational basis state; diagonal observables only.
  double eval_bits(std::uint64_t bits) const;

  // Copy with every Z factor damped by (1 - 2p); mirrors a pre-measurement
  // bitflip channel of probability p for Z-basis readout.
  Observable with_bitflip(double p) const;

  std::string to_string() const;

 private:
  void finalize();

  std::vector<PauliTerm> terms_;
  double constant_ = 0.0;
  double infinity_norm_ = 0.0;
  bool diagonal_ = true;
  int max_qubit_ = -1;
};

}  // namespace qrl
