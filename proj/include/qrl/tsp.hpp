#pragma once

#include <string>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

// Symmetric Euclidean tour instance on the unit square.
struct TspInstance {
  int n_cities = 0;
  std::vector<std::pair<double, double>> coordinates;
  std::vector<std::vector<double>> edge_weights;  // symmetric, zero diagonal
  double optimal_length = 0.0;

  double weight(int i, int j) const { return edge_weights[i][j]; }
};

// Uniform coordinates, exhaustive optimum filled in. 4 <= n_cities <= 10.
TspInstance tsp_generate_instance(int n_cities, Rng& rng);

// Exhaustive minimum over tours fixing city 0 as start, halved by direction
// symmetry. Returns the tour (starting at 0) and its cycle length.
std::pair<std::vector<int>, double> tsp_optimal_tour(const TspInstance& instance);

double approximation_ratio(double tour_length, double optimal_length);

// Plain-text instance format: "n", then n coordinate pairs, then the optimal
// length.
void save_tsp_instance(const std::string& path, const TspInstance& instance);
TspInstance load_tsp_instance(const std::string& path);

// Step-wise tour construction. The episode starts with an empty tour; the
// first selected city costs nothing, every later step pays the length delta,
// and the closing edge is added when the last city joins.
class TspEnv {
 public:
  explicit TspEnv(TspInstance instance);

  void reset();
  const TspInstance& instance() const { return instance_; }
  const std::vector<int>& tour() const { return tour_; }
  // pi for available cities, 0 for cities already in the tour.
  const std::vector<double>& node_flags() const { return node_flags_; }
  std::vector<int> valid_actions() const;
  bool done() const { return done_; }
  double tour_length() const { return length_; }
  int last_city() const { return tour_.empty() ? -1 : tour_.back(); }

  struct StepResult {
    double reward = 0.0;
    bool done = false;
  };
  StepResult step(int city);

  double ratio() const;  // approximation ratio of the finished tour

 private:
  TspInstance instance_;
  std::vector<int> tour_;
  std::vector<double> node_flags_;
  double length_ = 0.0;
  bool done_ = false;
};

}  // namespace qrl
