#include "qrl/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrl {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

const ParamSlot& ParamLayout::slot(const std::string& name) const {
  for (const ParamSlot& s : slots)
    if (s.name == name) return s;
  throw std::invalid_argument("unknown parameter slot: " + name);
}

bool ParamLayout::has_slot(const std::string& name) const {
  for (const ParamSlot& s : slots)
    if (s.name == name) return true;
  return false;
}

AnsatzInput feature_input(std::vector<double> features) {
  AnsatzInput in;
  in.features = std::move(features);
  return in;
}

AnsatzInput graph_input(std::vector<std::vector<double>> edge_weights,
                        std::vector<double> node_flags) {
  AnsatzInput in;
  in.edge_weights = std::move(edge_weights);
  in.node_flags = std::move(node_flags);
  return in;
}

void BoundAnsatz::set_angles(std::span<const double> circuit_params) {
  for (std::size_t p = 0; p < occurrences.size(); ++p) {
    const double v = circuit_params[p];
    for (const ParamOccurrence& occ : occurrences[p])
      circuit.gate(occ.gate_index).angle = occ.cofactor * v;
  }
}

void BoundAnsatz::set_angles(std::span<const double> circuit_params,
                             std::span<const AngleShift> shifts) {
  set_angles(circuit_params);
  for (const AngleShift& s : shifts) circuit.gate(s.gate_index).angle += s.delta;
}

std::vector<double> softmax_policy(std::span<const double> expectations,
                                   double beta) {
  if (expectations.empty()) throw std::invalid_argument("no actions to score");
  double m = expectations[0] * beta;
  for (double e : expectations) m = std::max(m, e * beta);
  std::vector<double> probs(expectations.size());
  double z = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = std::exp(beta * expectations[i] - m);
    z += probs[i];
  }
  for (double& p : probs) p /= z;
  return probs;
}

AnsatzSpec AnsatzSpec::build(AnsatzKind kind, int n_qubits, int n_layers,
                             HeadKind head) {
  if (n_layers < 1) throw std::invalid_argument("ansatz needs at least one layer");
  if (n_qubits < 1) throw std::invalid_argument("ansatz needs at least one qubit");

  AnsatzSpec spec;
  spec.kind_ = kind;
  spec.head_ = head;
  spec.n_qubits_ = n_qubits;
  spec.n_layers_ = n_layers;

  ParamLayout& lay = spec.layout_;
  auto add_slot = [&lay](const std::string& name, int count) {
    lay.slots.push_back({name, lay.total, count});
    lay.total += count;
  };

  switch (kind) {
    case AnsatzKind::HweQ:
      // Per layer: encoding RX, trainable RY and RZ per qubit, CZ ring.
      add_slot("rotations", 2 * n_qubits * n_layers);
      add_slot("input_scaling", n_qubits * n_layers);
      break;
    case AnsatzKind::HwePg:
      // Per layer: trainable RX, RY, RZ per qubit, CZ ring, encoding RX;
      // one trailing variational block closes the circuit.
      add_slot("rotations", 3 * n_qubits * (n_layers + 1));
      add_slot("input_scaling", n_qubits * n_layers);
      break;
    case AnsatzKind::Eqc:
      // Shared per-layer node and edge parameters.
      add_slot("node", n_layers);
      add_slot("edge", n_layers);
      break;
  }
  lay.circuit_params = lay.total;

  if (head == HeadKind::QValue) {
    if (kind == AnsatzKind::Eqc) {
      // Raw edge expectations with a single shared output weight.
      spec.q_head_ = {1.0, 0.0, 1, true};
      add_slot("output_weights", 1);
    } else {
      spec.q_head_ = {0.5, 0.5, 2, false};
      add_slot("output_weights", 2);
    }
  } else {
    add_slot("inverse_temperature", 1);
  }
  return spec;
}

BoundAnsatz AnsatzSpec::bind(const AnsatzInput& input) const {
  const int n = n_qubits_;
  BoundAnsatz bound;
  bound.circuit = Circuit(n);
  bound.occurrences.assign(layout_.circuit_params, {});
  Circuit& c = bound.circuit;

  auto record = [&bound, &c](int param, double cofactor) {
    bound.occurrences[param].push_back({c.n_gates() - 1, cofactor});
  };

  auto cz_ring = [&](void) {
    if (n < 2) return;
    if (n == 2) {
      c.begin_moment();
      c.push(cz(0, 1));
      return;
    }
    c.begin_moment();
    for (int q = 0; q + 1 < n; q += 2) c.push(cz(q, q + 1));
    c.begin_moment();
    for (int q = 1; q + 1 < n; q += 2) c.push(cz(q, q + 1));
    if (n > 2 && n % 2 == 0) c.push(cz(n - 1, 0));
    if (n % 2 == 1) {
      c.begin_moment();
      c.push(cz(n - 1, 0));
    }
  };

  switch (kind_) {
    case AnsatzKind::HweQ: {
      if (static_cast<int>(input.features.size()) != n)
        throw std::invalid_argument("feature count must match qubit count");
      const ParamSlot& rot = layout_.slot("rotations");
      const ParamSlot& enc = layout_.slot("input_scaling");
      for (int l = 0; l < n_layers_; ++l) {
        c.begin_moment();
        for (int q = 0; q < n; ++q) {
          c.push(rx(q, 0.0));
          record(enc.offset + l * n + q, input.features[q]);
        }
        c.begin_moment();
        for (int q = 0; q < n; ++q) {
          c.push(ry(q, 0.0));
          record(rot.offset + (l * n + q) * 2, 1.0);
        }
        c.begin_moment();
        for (int q = 0; q < n; ++q) {
          c.push(rz(q, 0.0));
          record(rot.offset + (l * n + q) * 2 + 1, 1.0);
        }
        cz_ring();
      }
      break;
    }
    case AnsatzKind::HwePg: {
      if (static_cast<int>(input.features.size()) != n)
        throw std::invalid_argument("feature count must match qubit count");
      const ParamSlot& rot = layout_.slot("rotations");
      const ParamSlot& enc = layout_.slot("input_scaling");
      auto variational_block = [&](int block) {
        const GateKind kinds[3] = {GateKind::RX, GateKind::RY, GateKind::RZ};
        for (int r = 0; r < 3; ++r) {
          c.begin_moment();
          for (int q = 0; q < n; ++q) {
            c.push(Gate{kinds[r], static_cast<std::int16_t>(q), -1, 0.0});
            record(rot.offset + (block * n + q) * 3 + r, 1.0);
          }
        }
      };
      for (int l = 0; l < n_layers_; ++l) {
        variational_block(l);
        cz_ring();
        c.begin_moment();
        for (int q = 0; q < n; ++q) {
          c.push(rx(q, 0.0));
          record(enc.offset + l * n + q, input.features[q]);
        }
      }
      variational_block(n_layers_);
      break;
    }
    case AnsatzKind::Eqc: {
      if (static_cast<int>(input.node_flags.size()) != n)
        throw std::invalid_argument("node flag count must match qubit count");
      if (static_cast<int>(input.edge_weights.size()) != n)
        throw std::invalid_argument("edge weight matrix must match qubit count");
      const ParamSlot& node = layout_.slot("node");
      const ParamSlot& edge = layout_.slot("edge");
      for (int l = 0; l < n_layers_; ++l) {
        c.begin_moment();
        for (int q = 0; q < n; ++q) {
          c.push(rx(q, 0.0));
          record(node.offset + l, input.node_flags[q]);
        }
        // ZZ per edge (i < j), greedily packed into disjoint moments.
        std::uint64_t used = 0;
        c.begin_moment();
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            const std::uint64_t pair = (1ull << i) | (1ull << j);
            if (used & pair) {
              c.begin_moment();
              used = 0;
            }
            used |= pair;
            c.push(zz(i, j, 0.0));
            record(edge.offset + l, input.edge_weights[i][j]);
          }
        }
      }
      break;
    }
  }
  return bound;
}

std::vector<double> AnsatzSpec::init_params(Rng& rng) const {
  std::vector<double> params(layout_.total, 1.0);
  for (const ParamSlot& s : layout_.slots) {
    const bool uniform_angle = s.name == "rotations" || s.name == "node" || s.name == "edge";
    if (!uniform_angle) continue;
    for (int i = 0; i < s.count; ++i)
      params[s.offset + i] = rng.uniform(0.0, kTwoPi);
  }
  return params;
}

std::vector<Observable> cartpole_q_observables() {
  return {Observable::z_string({0, 1}), Observable::z_string({2, 3})};
}

Observable cartpole_pg_observable() { return Observable::z_string({0, 1, 2, 3}); }

Observable tsp_edge_observable(int i, int j) { return Observable::z_string({i, j}); }

}  // namespace qrl
