#pragma once

#include <span>
#include <string>
#include <vector>

#include "qrl/circuit.hpp"
#include "qrl/observable.hpp"
#include "qrl/rng.hpp"

namespace qrl {

enum class AnsatzKind { HweQ, HwePg, Eqc };
enum class HeadKind { QValue, Policy };

// Named contiguous blocks of the flat parameter vector. Circuit parameters
// come first, head parameters (output weights / inverse temperature) last.
struct ParamSlot {
  std::string name;
  int offset = 0;
  int count = 0;
};

struct ParamLayout {
  std::vector<ParamSlot> slots;
  int circuit_params = 0;  // number of trainable scalars feeding rotation angles
  int total = 0;

  const ParamSlot& slot(const std::string& name) const;
  bool has_slot(const std::string& name) const;
};

// Environment-facing circuit input. HWE kinds read `features`; the graph
// kind reads symmetric `edge_weights` plus per-node `node_flags`.
struct AnsatzInput {
  std::vector<double> features;
  std::vector<std::vector<double>> edge_weights;
  std::vector<double> node_flags;
};

AnsatzInput feature_input(std::vector<double> features);
AnsatzInput graph_input(std::vector<std::vector<double>> edge_weights,
                        std::vector<double> node_flags);

// Where a circuit parameter shows up: angle = cofactor * parameter value.
struct ParamOccurrence {
  int gate_index = 0;
  double cofactor = 1.0;
};

struct AngleShift {
  int gate_index = 0;
  double delta = 0.0;
};

// Circuit structure bound to one input; angles are rewritten per parameter
// vector so repeated evaluations reuse the gate layout and cofactors.
struct BoundAnsatz {
  Circuit circuit;
  std::vector<std::vector<ParamOccurrence>> occurrences;  // per circuit param

  BoundAnsatz() : circuit(1) {}

  void set_angles(std::span<const double> circuit_params);
  void set_angles(std::span<const double> circuit_params,
                  std::span<const AngleShift> shifts);
};

// Q(s, a) = (scale * <O_a> + offset) * w; gradients follow by chain rule.
struct QHead {
  double scale = 0.5;
  double offset = 0.5;
  int n_weights = 1;
  bool shared_weight = false;  // one weight for all actions

  double q_value(double expval, double weight) const {
    return (scale * expval + offset) * weight;
  }
  double dq_dexp(double weight) const { return scale * weight; }
  double dq_dweight(double expval) const { return scale * expval + offset; }
};

// pi(a|s) = exp(beta <O_a>) / sum_a' exp(beta <O_a'>).
std::vector<double> softmax_policy(std::span<const double> expectations,
                                   double beta);

class AnsatzSpec {
 public:
  static AnsatzSpec build(AnsatzKind kind, int n_qubits, int n_layers,
                          HeadKind head);

  AnsatzKind kind() const { return kind_; }
  HeadKind head() const { return head_; }
  int n_qubits() const { return n_qubits_; }
  int n_layers() const { return n_layers_; }
  const ParamLayout& layout() const { return layout_; }
  int circuit_params() const { return layout_.circuit_params; }
  const QHead& q_head() const { return q_head_; }

  // Offset of the head parameters in the flat vector.
  int head_offset() const { return layout_.circuit_params; }

  // Builds gate structure and cofactors for one input. Angles are unset
  // until set_angles is called.
  BoundAnsatz bind(const AnsatzInput& input) const;

  // Fresh parameter vector: rotation parameters uniform in [0, 2pi), input
  // scaling weights and head parameters at 1.
  std::vector<double> init_params(Rng& rng) const;

 private:
  AnsatzKind kind_ = AnsatzKind::HweQ;
  HeadKind head_ = HeadKind::QValue;
  int n_qubits_ = 0;
  int n_layers_ = 0;
  ParamLayout layout_;
  QHead q_head_;
};

// Action observables used with the CartPole circuits.
std::vector<Observable> cartpole_q_observables();  // Z0 Z1 and Z2 Z3
Observable cartpole_pg_observable();               // Z0 Z1 Z2 Z3; the second
                                                   // action reads 1 - <O>
Observable tsp_edge_observable(int i, int j);

}  // namespace qrl
