#include "qrl/shots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qrl {

namespace {

double top_two_gap(const std::vector<double>& values) {
  if (values.size() < 2)
    throw std::invalid_argument("shot allocation needs at least two candidates");
  double best = values[0], second = -1e300;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > best) {
      second = best;
      best = values[i];
    } else {
      second = std::max(second, values[i]);
    }
  }
  return best - second;
}

}  // namespace

AllocationResult allocate_shots(PooledEstimator& estimator,
                                const ShotAllocConfig& config) {
  if (config.m_init < 1 || config.m_inc < 1 || config.m_max < config.m_init)
    throw std::invalid_argument("invalid shot allocation schedule");

  AllocationResult result;
  int m = std::min(config.m_init, config.m_max);
  estimator.add_shots(m);
  while (m < config.m_max) {
    const double gap = top_two_gap(estimator.estimates());
    if (gap >= 2.0 / std::sqrt(static_cast<double>(m))) break;
    const int next = std::min(m + config.m_inc, config.m_max);
    estimator.add_shots(next - m);
    m = next;
    ++result.escalations;
  }
  result.m_est = m;
  result.estimates = estimator.estimates();
  return result;
}

void ShotLedger::set_context(long episode, long step) {
  episode_ = episode;
  step_ = step;
}

void ShotLedger::record(const std::string& observable_id, std::int64_t shots,
                        std::int64_t executions) {
  total_shots_ += shots;
  total_executions_ += executions;
  auto it = std::find_if(per_observable_.begin(), per_observable_.end(),
                         [&](const auto& e) { return e.first == observable_id; });
  if (it == per_observable_.end()) {
    per_observable_.emplace_back(observable_id, shots);
    it = per_observable_.end() - 1;
  } else {
    it->second += shots;
  }
  rows_.push_back({episode_, step_, observable_id, shots, it->second});
}

std::int64_t ShotLedger::shots_for(const std::string& observable_id) const {
  for (const auto& [id, count] : per_observable_)
    if (id == observable_id) return count;
  return 0;
}

void ShotLedger::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << "episode,step,observable,shots,cumulative\n";
  for (const Row& r : rows_)
    f << r.episode << "," << r.step << "," << r.observable_id << "," << r.shots
      << "," << r.cumulative << "\n";
}

}  // namespace qrl
