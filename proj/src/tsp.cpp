#include "qrl/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace qrl {

TspInstance tsp_generate_instance(int n_cities, Rng& rng) {
  if (n_cities < 4 || n_cities > 10)
    throw std::invalid_argument("instance size must lie in 4..10");
  TspInstance inst;
  inst.n_cities = n_cities;
  inst.coordinates.reserve(n_cities);
  for (int i = 0; i < n_cities; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    inst.coordinates.emplace_back(x, y);
  }
  inst.edge_weights.assign(n_cities, std::vector<double>(n_cities, 0.0));
  for (int i = 0; i < n_cities; ++i)
    for (int j = i + 1; j < n_cities; ++j) {
      const double dx = inst.coordinates[i].first - inst.coordinates[j].first;
      const double dy = inst.coordinates[i].second - inst.coordinates[j].second;
      const double w = std::sqrt(dx * dx + dy * dy);
      inst.edge_weights[i][j] = inst.edge_weights[j][i] = w;
    }
  inst.optimal_length = tsp_optimal_tour(inst).second;
  return inst;
}

std::pair<std::vector<int>, double> tsp_optimal_tour(const TspInstance& inst) {
  const int n = inst.n_cities;
  if (n > 10) throw std::invalid_argument("exhaustive search capped at 10 cities");
  if (n < 3) throw std::invalid_argument("tour needs at least 3 cities");

  std::vector<int> rest;
  for (int i = 1; i < n; ++i) rest.push_back(i);

  std::vector<int> best_tour;
  double best = 1e300;
  do {
    // Direction symmetry: keep only one orientation of each cycle.
    if (rest.front() > rest.back()) continue;
    double len = inst.weight(0, rest.front());
    for (std::size_t k = 0; k + 1 < rest.size(); ++k)
      len += inst.weight(rest[k], rest[k + 1]);
    len += inst.weight(rest.back(), 0);
    if (len < best) {
      best = len;
      best_tour = rest;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));

  std::vector<int> tour{0};
  tour.insert(tour.end(), best_tour.begin(), best_tour.end());
  return {tour, best};
}

double approximation_ratio(double tour_length, double optimal_length) {
  if (optimal_length <= 0.0)
    throw std::invalid_argument("optimal length must be positive");
  return tour_length / optimal_length;
}

void save_tsp_instance(const std::string& path, const TspInstance& inst) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << inst.n_cities << "\n";
  char buf[80];
  for (const auto& [x, y] : inst.coordinates) {
    std::snprintf(buf, sizeof(buf), "%.15g %.15g\n", x, y);
    f << buf;
  }
  std::snprintf(buf, sizeof(buf), "%.15g\n", inst.optimal_length);
  f << buf;
}

TspInstance load_tsp_instance(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  int n = 0;
  f >> n;
  if (n < 4 || n > 10) throw std::runtime_error("instance size out of range in " + path);
  TspInstance inst;
  inst.n_cities = n;
  for (int i = 0; i < n; ++i) {
    double x, y;
    if (!(f >> x >> y)) throw std::runtime_error("truncated instance file " + path);
    inst.coordinates.emplace_back(x, y);
  }
  inst.edge_weights.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dx = inst.coordinates[i].first - inst.coordinates[j].first;
      const double dy = inst.coordinates[i].second - inst.coordinates[j].second;
      inst.edge_weights[i][j] = inst.edge_weights[j][i] = std::sqrt(dx * dx + dy * dy);
    }
  double opt = 0.0;
  if (f >> opt) {
    inst.optimal_length = opt;
  } else {
    inst.optimal_length = tsp_optimal_tour(inst).second;
  }
  return inst;
}

TspEnv::TspEnv(TspInstance instance) : instance_(std::move(instance)) { reset(); }

void TspEnv::reset() {
  tour_.clear();
  node_flags_.assign(instance_.n_cities, std::numbers::pi);
  length_ = 0.0;
  done_ = false;
}

std::vector<int> TspEnv::valid_actions() const {
  std::vector<int> v;
  for (int i = 0; i < instance_.n_cities; ++i)
    if (node_flags_[i] != 0.0) v.push_back(i);
  return v;
}

TspEnv::StepResult TspEnv::step(int city) {
  if (done_) throw std::runtime_error("step on a finished episode");
  if (city < 0 || city >= instance_.n_cities)
    throw std::invalid_argument("city index out of range");
  if (node_flags_[city] == 0.0)
    throw std::invalid_argument("city is already in the tour");

  const double before = length_;
  if (!tour_.empty()) length_ += instance_.weight(tour_.back(), city);
  tour_.push_back(city);
  node_flags_[city] = 0.0;

  if (static_cast<int>(tour_.size()) == instance_.n_cities) {
    length_ += instance_.weight(tour_.back(), tour_.front());
    done_ = true;
  }
  return {-(length_ - before), done_};
}

double TspEnv::ratio() const {
  if (!done_) throw std::runtime_error("episode still running");
  return approximation_ratio(length_, instance_.optimal_length);
}

}  // namespace qrl
