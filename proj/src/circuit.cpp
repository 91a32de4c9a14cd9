#include "qrl/circuit.hpp"

#include <stdexcept>

namespace qrl {

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
  moment_offsets_ = {0, 0};
}

void Circuit::check_gate(const Gate& g) const {
  if (g.q0 < 0 || g.q0 >= n_qubits_)
    throw std::invalid_argument("gate qubit index out of range");
  if (is_two_qubit(g.kind)) {
    if (g.q1 < 0 || g.q1 >= n_qubits_)
      throw std::invalid_argument("gate qubit index out of range");
    if (g.q1 == g.q0) throw std::invalid_argument("two-qubit gate needs distinct qubits");
  }
}

void Circuit::begin_moment() {
  if (moment_offsets_.back() != static_cast<std::int32_t>(gates_.size()))
    moment_offsets_.push_back(static_cast<std::int32_t>(gates_.size()));
  open_moment_qubits_ = 0;
}

void Circuit::push(const Gate& g) {
  check_gate(g);
  std::uint64_t used = 1ull << g.q0;
  if (is_two_qubit(g.kind)) used |= 1ull << g.q1;
  if (open_moment_qubits_ & used)
    throw std::invalid_argument("moment gates must act on disjoint qubits");
  open_moment_qubits_ |= used;
  gates_.push_back(g);
  moment_offsets_.back() = static_cast<std::int32_t>(gates_.size());
}

void Circuit::add_moment(std::span<const Gate> gates) {
  begin_moment();
  for (const Gate& g : gates) push(g);
}

}  // namespace qrl
