#include "qrl/observable.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qrl {

namespace {

void build_masks(PauliTerm& term) {
  term.x_mask = term.y_mask = term.z_mask = 0;
  for (const auto& [q, p] : term.factors) {
    if (q < 0 || q >= 64) throw std::invalid_argument("pauli qubit index out of range");
    const std::uint64_t bit = 1ull << q;
    if ((term.x_mask | term.y_mask | term.z_mask) & bit)
      throw std::invalid_argument("duplicate qubit in pauli string");
    switch (p) {
      case Pauli::X: term.x_mask |= bit; break;
      case Pauli::Y: term.y_mask |= bit; break;
      case Pauli::Z: term.z_mask |= bit; break;
    }
  }
}

}  // namespace

Observable Observable::identity(double constant) {
  Observable o;
  o.constant_ = constant;
  o.finalize();
  return o;
}

Observable Observable::z_string(const std::vector<int>& qubits, double coeff,
                                double constant) {
  PauliTerm t;
  t.coeff = coeff;
  for (int q : qubits) t.factors.emplace_back(q, Pauli::Z);
  std::sort(t.factors.begin(), t.factors.end());
  build_masks(t);
  Observable o;
  o.terms_.push_back(std::move(t));
  o.constant_ = constant;
  o.finalize();
  return o;
}

Observable Observable::single_term(double coeff,
                                   const std::vector<std::pair<int, Pauli>>& factors,
                                   double constant) {
  PauliTerm t;
  t.coeff = coeff;
  t.factors = factors;
  std::sort(t.factors.begin(), t.factors.end());
  build_masks(t);
  Observable o;
  o.terms_.push_back(std::move(t));
  o.constant_ = constant;
  o.finalize();
  return o;
}

Observable Observable::sum(const std::vector<PauliTerm>& terms, double constant) {
  Observable o;
  o.terms_ = terms;
  for (auto& t : o.terms_) {
    std::sort(t.factors.begin(), t.factors.end());
    build_masks(t);
  }
  o.constant_ = constant;
  o.finalize();
  return o;
}

void Observable::finalize() {
  diagonal_ = true;
  max_qubit_ = -1;
  for (const auto& t : terms_) {
    if (t.x_mask || t.y_mask) diagonal_ = false;
    for (const auto& [q, p] : t.factors) max_qubit_ = std::max(max_qubit_, q);
  }

  if (diagonal_) {
    // Exact: scan all sign assignments of the involved qubits.
    std::vector<int> qubits;
    for (const auto& t : terms_)
      for (const auto& [q, p] : t.factors)
        if (std::find(qubits.begin(), qubits.end(), q) == qubits.end())
          qubits.push_back(q);
    std::sort(qubits.begin(), qubits.end());
    const std::size_t k = qubits.size();
    if (k > 20) throw std::invalid_argument("observable involves too many qubits");
    double best = std::abs(constant_);
    for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (1ull << i)) bits |= 1ull << qubits[i];
      best = std::max(best, std::abs(eval_bits(bits)));
    }
    infinity_norm_ = best;
  } else if (terms_.size() == 1) {
    // c*P + d*I has eigenvalues d - c and d + c.
    const double c = terms_[0].coeff;
    infinity_norm_ = std::max(std::abs(constant_ + c), std::abs(constant_ - c));
  } else {
    double s = std::abs(constant_);
    for (const auto& t : terms_) s += std::abs(t.coeff);
    infinity_norm_ = s;
  }
}

double Observable::eval_bits(std::uint64_t bits) const {
  double v = constant_;
  for (const auto& t : terms_) {
    const int parity = std::popcount(bits & t.z_mask) & 1;
    v += parity ? -t.coeff : t.coeff;
  }
  return v;
}

Observable Observable::with_bitflip(double p) const {
  Observable o = *this;
  for (auto& t : o.terms_) {
    // X rho X flips the sign of Z and Y factors, leaving X ones alone.
    const int flipped = std::popcount(t.z_mask | t.y_mask);
    t.coeff *= std::pow(1.0 - 2.0 * p, flipped);
  }
  o.finalize();
  return o;
}

std::string Observable::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (constant_ != 0.0 || terms_.empty()) {
    os << constant_;
    first = false;
  }
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff;
    for (const auto& [q, p] : t.factors) os << "*" << static_cast<char>(p) << q;
  }
  return os.str();
}

}  // namespace qrl
