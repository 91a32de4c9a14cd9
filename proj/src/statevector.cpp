#include "qrl/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qrl {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw std::runtime_error("qubit count outside supported range 1..12");
  amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

void StateVector::reset() {
  std::fill(amps_.begin(), amps_.end(), Amplitude{0.0, 0.0});
  amps_[0] = 1.0;
}

namespace {

inline void apply_single(std::vector<Amplitude>& amps, int q, auto&& update) {
  const std::size_t dim = amps.size();
  const std::size_t step = std::size_t{1} << q;
  for (std::size_t base = 0; base < dim; base += 2 * step)
    for (std::size_t i = base; i < base + step; ++i) update(amps[i], amps[i + step]);
}

}  // namespace

void StateVector::apply(const Gate& g) {
  const std::size_t dim = amps_.size();
  switch (g.kind) {
    case GateKind::RX: {
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      apply_single(amps_, g.q0, [&](Amplitude& a0, Amplitude& a1) {
        const Amplitude t0 = a0, t1 = a1;
        a0 = c * t0 + Amplitude{0.0, -s} * t1;
        a1 = Amplitude{0.0, -s} * t0 + c * t1;
      });
      break;
    }
    case GateKind::RY: {
      const double c = std::cos(0.5 * g.angle), s = std::sin(0.5 * g.angle);
      apply_single(amps_, g.q0, [&](Amplitude& a0, Amplitude& a1) {
        const Amplitude t0 = a0, t1 = a1;
        a0 = c * t0 - s * t1;
        a1 = s * t0 + c * t1;
      });
      break;
    }
    case GateKind::RZ: {
      const Amplitude p0{std::cos(0.5 * g.angle), -std::sin(0.5 * g.angle)};
      const Amplitude p1 = std::conj(p0);
      apply_single(amps_, g.q0, [&](Amplitude& a0, Amplitude& a1) {
        a0 *= p0;
        a1 *= p1;
      });
      break;
    }
    case GateKind::X:
      apply_single(amps_, g.q0, [](Amplitude& a0, Amplitude& a1) { std::swap(a0, a1); });
      break;
    case GateKind::Y:
      apply_single(amps_, g.q0, [](Amplitude& a0, Amplitude& a1) {
        const Amplitude t0 = a0;
        a0 = Amplitude{0.0, -1.0} * a1;
        a1 = Amplitude{0.0, 1.0} * t0;
      });
      break;
    case GateKind::Z:
      apply_single(amps_, g.q0, [](Amplitude&, Amplitude& a1) { a1 = -a1; });
      break;
    case GateKind::CZ: {
      const std::uint64_t mask = (1ull << g.q0) | (1ull << g.q1);
      for (std::size_t i = 0; i < dim; ++i)
        if ((i & mask) == mask) amps_[i] = -amps_[i];
      break;
    }
    case GateKind::CNOT: {
      const std::uint64_t cbit = 1ull << g.q0;
      const std::uint64_t tbit = 1ull << g.q1;
      for (std::size_t i = 0; i < dim; ++i)
        if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
      break;
    }
    case GateKind::ZZ: {
      const Amplitude peq{std::cos(0.5 * g.angle), -std::sin(0.5 * g.angle)};
      const Amplitude pne = std::conj(peq);
      const std::uint64_t b0 = 1ull << g.q0, b1 = 1ull << g.q1;
      for (std::size_t i = 0; i < dim; ++i) {
        const bool e = static_cast<bool>(i & b0) == static_cast<bool>(i & b1);
        amps_[i] *= e ? peq : pne;
      }
      break;
    }
  }
}

void StateVector::apply(const Circuit& c) {
  if (c.n_qubits() != n_qubits_)
    throw std::invalid_argument("circuit qubit count does not match state");
  for (const Gate& g : c.gates()) apply(g);
}

void StateVector::apply_pauli(int qubit, Pauli p) {
  switch (p) {
    case Pauli::X: apply(Gate{GateKind::X, static_cast<std::int16_t>(qubit), -1, 0.0}); break;
    case Pauli::Y: apply(Gate{GateKind::Y, static_cast<std::int16_t>(qubit), -1, 0.0}); break;
    case Pauli::Z: apply(Gate{GateKind::Z, static_cast<std::int16_t>(qubit), -1, 0.0}); break;
  }
}

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const Amplitude& a : amps_) s += std::norm(a);
  return s;
}

void StateVector::renormalize() {
  const double n = std::sqrt(norm_sq());
  if (n <= 0.0) throw std::runtime_error("cannot renormalize a zero state");
  const double inv = 1.0 / n;
  for (Amplitude& a : amps_) a *= inv;
}

double StateVector::prob_one(int qubit) const {
  const std::uint64_t bit = 1ull << qubit;
  double p = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    if (i & bit) p += std::norm(amps_[i]);
  return p;
}

double StateVector::expectation(const Observable& obs) const {
  if (obs.max_qubit() >= n_qubits_)
    throw std::invalid_argument("observable acts outside the state");
  double value = obs.constant_term();
  for (const PauliTerm& t : obs.terms()) {
    if ((t.x_mask | t.y_mask) == 0) {
      double acc = 0.0;
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        const double p = std::norm(amps_[i]);
        acc += (std::popcount(i & t.z_mask) & 1) ? -p : p;
      }
      value += t.coeff * acc;
    } else {
      // <psi| P |psi> with P|b> = phase(b) |b ^ flips>.
      const std::uint64_t flips = t.x_mask | t.y_mask;
      const std::uint64_t sign_mask = t.z_mask | t.y_mask;
      const int ny = std::popcount(t.y_mask);
      static const Amplitude ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
      const Amplitude base_phase = ipow[ny & 3];
      Amplitude acc{0.0, 0.0};
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        Amplitude ph = base_phase;
        if (std::popcount(i & sign_mask) & 1) ph = -ph;
        acc += std::conj(amps_[i ^ flips]) * ph * amps_[i];
      }
      value += t.coeff * acc.real();
    }
  }
  return value;
}

std::uint64_t StateVector::sample_bits(Rng& rng) const {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    acc += std::norm(amps_[i]);
    if (u < acc) return i;
  }
  return amps_.size() - 1;
}

StateVector init_state(int n_qubits) { return StateVector(n_qubits); }

namespace {

std::uint64_t flip_bits(std::uint64_t bits, int n_qubits, double p, Rng& rng) {
  for (int q = 0; q < n_qubits; ++q)
    if (rng.uniform() < p) bits ^= 1ull << q;
  return bits;
}

}  // namespace

std::vector<double> sample_expectations(const StateVector& state,
                                        const std::vector<const Observable*>& obs,
                                        int shots, Rng& rng, double meas_bitflip) {
  if (shots < 1) throw std::invalid_argument("shot count must be positive");
  for (const Observable* o : obs)
    if (!o->diagonal())
      throw std::invalid_argument("sampled estimation needs computational-basis observables");

  // Cumulative distribution once, then binary search per shot.
  std::vector<double> cdf(state.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    acc += std::norm(state[i]);
    cdf[i] = acc;
  }

  std::vector<double> sums(obs.size(), 0.0);
  for (int s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::uint64_t bits = static_cast<std::uint64_t>(it - cdf.begin());
    if (bits >= state.size()) bits = state.size() - 1;
    if (meas_bitflip > 0.0) bits = flip_bits(bits, state.n_qubits(), meas_bitflip, rng);
    for (std::size_t k = 0; k < obs.size(); ++k) sums[k] += obs[k]->eval_bits(bits);
  }
  for (double& v : sums) v /= shots;
  return sums;
}

double sample_expectation(const StateVector& state, const Observable& obs,
                          int shots, Rng& rng, double meas_bitflip) {
  return sample_expectations(state, {&obs}, shots, rng, meas_bitflip)[0];
}

void save_statevector(const std::string& path, const StateVector& state) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << state.n_qubits() << "\n";
  char buf[80];
  for (std::size_t i = 0; i < state.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu %.15g %.15g\n", i, state[i].real(),
                  state[i].imag());
    f << buf;
  }
}

StateVector load_statevector(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  int n = 0;
  f >> n;
  StateVector sv(n);
  std::size_t idx;
  double re, im;
  while (f >> idx >> re >> im) sv[idx] = Amplitude{re, im};
  return sv;
}

}  // namespace qrl
