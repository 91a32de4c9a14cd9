#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qrl/noise.hpp"

namespace qrl {

// Pooled estimator driven by the escalation loop: add_shots extends the
// running estimate (new samples pool with the old ones), estimates() returns
// the current values per candidate.
class PooledEstimator {
 public:
  virtual ~PooledEstimator() = default;
  virtual void add_shots(int additional) = 0;
  virtual std::vector<double> estimates() const = 0;
};

struct AllocationResult {
  int m_est = 0;                  // shots per candidate actually used
  std::vector<double> estimates;  // values at m_est
  int escalations = 0;
};

// Escalates the shot count from m_init by m_inc until the top two estimates
// are separated by at least 2/sqrt(m), capped at m_max. Estimates are on the
// raw expectation scale; head coefficients stay out of the stopping test.
AllocationResult allocate_shots(PooledEstimator& estimator,
                                const ShotAllocConfig& config);

// Exact accounting of simulated measurements. `shots` counts per-observable
// reads; `executions` counts physical circuit runs (shared batches serving
// several commuting observables count once).
class ShotLedger {
 public:
  void set_context(long episode, long step);
  void record(const std::string& observable_id, std::int64_t shots,
              std::int64_t executions);

  std::int64_t total_shots() const { return total_shots_; }
  std::int64_t total_executions() const { return total_executions_; }
  std::int64_t shots_for(const std::string& observable_id) const;

  struct Row {
    long episode = 0;
    long step = 0;
    std::string observable_id;
    std::int64_t shots = 0;
    std::int64_t cumulative = 0;
  };
  const std::vector<Row>& rows() const { return rows_; }
  void write_csv(const std::string& path) const;

 private:
  long episode_ = 0;
  long step_ = 0;
  std::int64_t total_shots_ = 0;
  std::int64_t total_executions_ = 0;
  std::vector<std::pair<std::string, std::int64_t>> per_observable_;
  std::vector<Row> rows_;
};

}  // namespace qrl
