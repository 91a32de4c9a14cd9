#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrl/gate.hpp"

namespace qrl {

// Gate sequence grouped into moments. Gates within one moment act on
// disjoint qubits, which is what per-moment noise placement relies on.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  int n_moments() const { return static_cast<int>(moment_offsets_.size()) - 1; }
  int n_gates() const { return static_cast<int>(gates_.size()); }

  // Appends a gate to a fresh moment / the currently open moment.
  // Validates qubit ranges and intra-moment disjointness.
  void begin_moment();
  void push(const Gate& g);
  void add_moment(std::span<const Gate> gates);

  std::span<const Gate> moment(int m) const {
    return {gates_.data() + moment_offsets_[m],
            static_cast<std::size_t>(moment_offsets_[m + 1] - moment_offsets_[m])};
  }
  const std::vector<Gate>& gates() const { return gates_; }
  Gate& gate(int index) { return gates_[index]; }
  const Gate& gate(int index) const { return gates_[index]; }

 private:
  void check_gate(const Gate& g) const;

  int n_qubits_;
  std::vector<Gate> gates_;
  std::vector<std::int32_t> moment_offsets_;  // size n_moments + 1
  std::uint64_t open_moment_qubits_ = 0;
};

}  // namespace qrl
