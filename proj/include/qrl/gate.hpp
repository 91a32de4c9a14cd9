#pragma once

#include <cstdint>

namespace qrl {

// Rotation kinds implement exp(-i * angle * P / 2) for Pauli generator P;
// the ZZ generator is Z (x) Z.
enum class GateKind : std::uint8_t { RX, RY, RZ, X, Y, Z, CZ, CNOT, ZZ };

struct Gate {
  GateKind kind;
  std::int16_t q0 = 0;
  std::int16_t q1 = -1;  // second qubit for CZ/CNOT/ZZ, else unused
  double angle = 0.0;    // rotation kinds only
};

constexpr bool is_rotation(GateKind k) {
  return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ ||
         k == GateKind::ZZ;
}

constexpr bool is_two_qubit(GateKind k) {
  return k == GateKind::CZ || k == GateKind::CNOT || k == GateKind::ZZ;
}

inline Gate rx(int q, double angle) { return {GateKind::RX, static_cast<std::int16_t>(q), -1, angle}; }
inline Gate ry(int q, double angle) { return {GateKind::RY, static_cast<std::int16_t>(q), -1, angle}; }
inline Gate rz(int q, double angle) { return {GateKind::RZ, static_cast<std::int16_t>(q), -1, angle}; }
inline Gate pauli_x(int q) { return {GateKind::X, static_cast<std::int16_t>(q), -1, 0.0}; }
inline Gate pauli_y(int q) { return {GateKind::Y, static_cast<std::int16_t>(q), -1, 0.0}; }
inline Gate pauli_z(int q) { return {GateKind::Z, static_cast<std::int16_t>(q), -1, 0.0}; }
inline Gate cz(int a, int b) { return {GateKind::CZ, static_cast<std::int16_t>(a), static_cast<std::int16_t>(b), 0.0}; }
inline Gate cnot(int control, int target) {
  return {GateKind::CNOT, static_cast<std::int16_t>(control), static_cast<std::int16_t>(target), 0.0};
}
inline Gate zz(int a, int b, double angle) {
  return {GateKind::ZZ, static_cast<std::int16_t>(a), static_cast<std::int16_t>(b), angle};
}

}  // namespace qrl
