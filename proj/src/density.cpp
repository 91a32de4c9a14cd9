#include "qrl/density.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace qrl {

namespace {

using Cx = std::complex<double>;
using Matrix = std::vector<Cx>;  // row-major dim x dim

constexpr Cx kI{0.0, 1.0};

// 2x2 primitives.
struct Mat2 {
  Cx a, b, c, d;
};

Mat2 mat2_for(GateKind kind, double angle) {
  const double ch = std::cos(0.5 * angle), sh = std::sin(0.5 * angle);
  switch (kind) {
    case GateKind::RX: return {ch, -kI * sh, -kI * sh, ch};
    case GateKind::RY: return {ch, -sh, sh, ch};
    case GateKind::RZ: return {std::exp(-kI * (0.5 * angle)), 0.0, 0.0, std::exp(kI * (0.5 * angle))};
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Y: return {0.0, -kI, kI, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    default: throw std::logic_error("not a single-qubit gate");
  }
}

Mat2 pauli2(int which) {  // 0 = I, 1 = X, 2 = Y, 3 = Z
  switch (which) {
    case 0: return {1.0, 0.0, 0.0, 1.0};
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -kI, kI, 0.0};
    default: return {1.0, 0.0, 0.0, -1.0};
  }
}

// Embed a single-qubit operator on qubit q into the full space.
Matrix embed1(const Mat2& m, int q, std::size_t dim) {
  Matrix full(dim * dim, Cx{0.0, 0.0});
  const std::size_t bit = std::size_t{1} << q;
  for (std::size_t col = 0; col < dim; ++col) {
    const bool one = col & bit;
    const Cx e0 = one ? m.b : m.a;  // row with qubit = 0
    const Cx e1 = one ? m.d : m.c;  // row with qubit = 1
    const std::size_t r0 = col & ~bit, r1 = col | bit;
    full[r0 * dim + col] += e0;
    full[r1 * dim + col] += e1;
  }
  return full;
}

Matrix matmul(const Matrix& a, const Matrix& b, std::size_t dim) {
  Matrix out(dim * dim, Cx{0.0, 0.0});
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      const Cx aik = a[i * dim + k];
      if (aik == Cx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < dim; ++j) out[i * dim + j] += aik * b[k * dim + j];
    }
  return out;
}

Matrix dagger(const Matrix& a, std::size_t dim) {
  Matrix out(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) out[j * dim + i] = std::conj(a[i * dim + j]);
  return out;
}

Matrix embed_gate(const Gate& g, std::size_t dim) {
  if (!is_two_qubit(g.kind)) return embed1(mat2_for(g.kind, g.angle), g.q0, dim);
  Matrix full(dim * dim, Cx{0.0, 0.0});
  const std::size_t b0 = std::size_t{1} << g.q0;
  const std::size_t b1 = std::size_t{1} << g.q1;
  for (std::size_t col = 0; col < dim; ++col) {
    switch (g.kind) {
      case GateKind::CZ:
        full[col * dim + col] = ((col & b0) && (col & b1)) ? -1.0 : 1.0;
        break;
      case GateKind::CNOT: {
        const std::size_t row = (col & b0) ? (col ^ b1) : col;
        full[row * dim + col] = 1.0;
        break;
      }
      case GateKind::ZZ: {
        const bool equal = static_cast<bool>(col & b0) == static_cast<bool>(col & b1);
        full[col * dim + col] = std::exp(kI * (equal ? -0.5 * g.angle : 0.5 * g.angle));
        break;
      }
      default: throw std::logic_error("not a two-qubit gate");
    }
  }
  return full;
}

}  // namespace

DensityMatrix::DensityMatrix(int n_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 3)
    throw std::runtime_error("density-matrix oracle supports at most 3 qubits");
  dim_ = std::size_t{1} << n_qubits;
  rho_.assign(dim_ * dim_, Cx{0.0, 0.0});
  rho_[0] = 1.0;
}

void DensityMatrix::apply_kraus(const std::vector<Matrix>& kraus_ops) {
  Matrix next(dim_ * dim_, Cx{0.0, 0.0});
  for (const Matrix& k : kraus_ops) {
    const Matrix tmp = matmul(k, rho_, dim_);
    const Matrix term = matmul(tmp, dagger(k, dim_), dim_);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += term[i];
  }
  rho_ = std::move(next);
}

void DensityMatrix::apply_unitary(const Gate& g) {
  apply_kraus({embed_gate(g, dim_)});
}

void DensityMatrix::apply_depolarizing(int q, double p) {
  std::vector<Matrix> kraus;
  const double w0 = std::sqrt(1.0 - p), w = std::sqrt(p / 3.0);
  for (int which = 0; which < 4; ++which) {
    Mat2 m = pauli2(which);
    const double scale = which == 0 ? w0 : w;
    m.a *= scale; m.b *= scale; m.c *= scale; m.d *= scale;
    kraus.push_back(embed1(m, q, dim_));
  }
  apply_kraus(kraus);
}

void DensityMatrix::apply_two_qubit_depolarizing(int q0, int q1, double p) {
  std::vector<Matrix> kraus;
  for (int idx = 0; idx < 16; ++idx) {
    const double scale = idx == 0 ? std::sqrt(1.0 - p) : std::sqrt(p / 15.0);
    const Matrix m0 = embed1(pauli2(idx % 4), q0, dim_);
    const Matrix m1 = embed1(pauli2(idx / 4), q1, dim_);
    Matrix k = matmul(m1, m0, dim_);
    for (Cx& v : k) v *= scale;
    kraus.push_back(std::move(k));
  }
  apply_kraus(kraus);
}

void DensityMatrix::apply_amplitude_damping(int q, double gamma) {
  Mat2 k0{1.0, 0.0, 0.0, std::sqrt(1.0 - gamma)};
  Mat2 k1{0.0, std::sqrt(gamma), 0.0, 0.0};
  apply_kraus({embed1(k0, q, dim_), embed1(k1, q, dim_)});
}

void DensityMatrix::apply_bitflip(int q, double p) {
  Mat2 k0 = pauli2(0), k1 = pauli2(1);
  const double w0 = std::sqrt(1.0 - p), w1 = std::sqrt(p);
  k0.a *= w0; k0.d *= w0;
  k1.b *= w1; k1.c *= w1;
  apply_kraus({embed1(k0, q, dim_), embed1(k1, q, dim_)});
}

double DensityMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += at(i, i).real();
  return t;
}

double DensityMatrix::expectation(const Observable& obs) const {
  if (obs.max_qubit() >= n_)
    throw std::invalid_argument("observable acts outside the state");
  double value = obs.constant_term() * trace();
  for (const PauliTerm& t : obs.terms()) {
    // Tr[c P rho]: build P column action |b> -> phase |b ^ flips|.
    const std::uint64_t flips = t.x_mask | t.y_mask;
    const std::uint64_t sign_mask = t.z_mask | t.y_mask;
    const int ny = std::popcount(t.y_mask);
    static const Cx ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Cx acc{0.0, 0.0};
    for (std::size_t b = 0; b < dim_; ++b) {
      Cx ph = ipow[ny & 3];
      if (std::popcount(b & sign_mask) & 1) ph = -ph;
      acc += ph * at(b ^ flips, b);
    }
    value += t.coeff * acc.real();
  }
  return value;
}

double density_matrix_expectation(const Circuit& circuit, const Observable& obs,
                                  const NoiseConfig& noise) {
  DensityMatrix rho(circuit.n_qubits());
  for (const NoiseOp& op : build_noise_program(circuit, noise)) {
    switch (op.kind) {
      case NoiseOp::Kind::Unitary: rho.apply_unitary(op.gate); break;
      case NoiseOp::Kind::Depol1: rho.apply_depolarizing(op.q0, op.strength); break;
      case NoiseOp::Kind::Depol2:
        rho.apply_two_qubit_depolarizing(op.q0, op.q1, op.strength);
        break;
      case NoiseOp::Kind::AmpDamp:
        rho.apply_amplitude_damping(op.q0, op.strength);
        break;
    }
  }
  const double pm = noise.meas_bitflip();
  if (pm > 0.0)
    for (int q = 0; q < circuit.n_qubits(); ++q) rho.apply_bitflip(q, pm);
  return rho.expectation(obs);
}

}  // namespace qrl
