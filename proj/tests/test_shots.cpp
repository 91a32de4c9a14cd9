#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qrl/rng.hpp"
#include "qrl/shots.hpp"

using namespace qrl;

namespace {

// Deterministic estimator: fixed values regardless of shot count.
class FixedValues final : public PooledEstimator {
 public:
  explicit FixedValues(std::vector<double> values) : values_(std::move(values)) {}
  void add_shots(int k) override { total_ += k; }
  std::vector<double> estimates() const override { return values_; }
  int total() const { return total_; }

 private:
  std::vector<double> values_;
  int total_ = 0;
};

// Gaussian estimates with per-shot unit variance, optionally sharing the
// statistical error between both candidates (commuting observables read from
// one batch of samples).
class NoisyPair final : public PooledEstimator {
 public:
  NoisyPair(double mu0, double mu1, bool shared, Rng rng)
      : mu0_(mu0), mu1_(mu1), shared_(shared), rng_(rng) {}
  void add_shots(int k) override {
    const double e = std::sqrt(static_cast<double>(k)) * rng_.normal();
    sum0_ += mu0_ * k + e;
    sum1_ += mu1_ * k + (shared_ ? e : std::sqrt(static_cast<double>(k)) * rng_.normal());
    m_ += k;
  }
  std::vector<double> estimates() const override { return {sum0_ / m_, sum1_ / m_}; }

 private:
  double mu0_, mu1_;
  bool shared_;
  Rng rng_;
  double sum0_ = 0.0, sum1_ = 0.0;
  int m_ = 0;
};

}  // namespace

TEST_CASE("a clear gap stops at the initial count") {
  // Gap 0.5 vs threshold 2/sqrt(100) = 0.2.
  FixedValues est({0.7, 0.2});
  const AllocationResult res = allocate_shots(est, {100, 100, 10000});
  CHECK(res.m_est == 100);
  CHECK(est.total() == 100);
  CHECK(res.escalations == 0);
}

TEST_CASE("a tie escalates to the cap") {
  FixedValues est({0.4, 0.4});
  const AllocationResult res = allocate_shots(est, {100, 100, 1000});
  CHECK(res.m_est == 1000);
  CHECK(est.total() == 1000);
}

TEST_CASE("a 0.05 gap cannot stop before 1600 shots") {
  FixedValues est({0.30, 0.25});
  const AllocationResult res = allocate_shots(est, {100, 100, 10000});
  CHECK(res.m_est == 1600);  // first m with 2/sqrt(m) <= 0.05

  FixedValues capped({0.30, 0.25});
  const AllocationResult res2 = allocate_shots(capped, {100, 100, 1000});
  CHECK(res2.m_est == 1000);
}

TEST_CASE("bounds of the returned count") {
  FixedValues tie({0.0, 0.0});
  const AllocationResult res = allocate_shots(tie, {250, 500, 2000});
  CHECK(res.m_est == 2000);

  FixedValues clear({1.0, -1.0});
  const AllocationResult res2 = allocate_shots(clear, {250, 500, 2000});
  CHECK(res2.m_est == 250);

  CHECK_THROWS_AS(([] {
                    FixedValues e({0.0, 0.0});
                    allocate_shots(e, {0, 100, 1000});
                  }()),
                  std::invalid_argument);
  CHECK_THROWS_AS(([] {
                    FixedValues e({0.0});
                    allocate_shots(e, {100, 100, 1000});
                  }()),
                  std::invalid_argument);
}

TEST_CASE("the stop condition is replayable from the recorded estimates") {
  Rng rng(1, 0);
  for (int k = 0; k < 200; ++k) {
    NoisyPair est(0.4, 0.1, false, rng.derive(k));
    const ShotAllocConfig cfg{100, 100, 3200};
    const AllocationResult res = allocate_shots(est, cfg);
    const double gap = std::abs(res.estimates[0] - res.estimates[1]);
    if (res.m_est < cfg.m_max) CHECK(gap >= 2.0 / std::sqrt(res.m_est));
  }
}

TEST_CASE("well separated candidates keep the right argmax") {
  // True gap 6 / sqrt(m_init): the argmax survives the noise almost always.
  Rng rng(2, 0);
  const int runs = 10000;
  int correct = 0;
  for (int k = 0; k < runs; ++k) {
    NoisyPair est(0.6, 0.0, false, rng.derive(k));
    const AllocationResult res = allocate_shots(est, {100, 100, 10000});
    if (res.estimates[0] > res.estimates[1]) ++correct;
  }
  CHECK(correct >= static_cast<int>(0.99 * runs));
}

TEST_CASE("ledger accounts shots and executions separately") {
  ShotLedger ledger;
  ledger.set_context(0, 0);
  // Shared batch: 3 observables from one 100-sample run.
  ledger.record("obs0", 100, 100);
  ledger.record("obs1", 100, 0);
  ledger.record("obs2", 100, 0);
  CHECK(ledger.total_shots() == 300);
  CHECK(ledger.total_executions() == 100);
  CHECK(ledger.shots_for("obs1") == 100);

  ledger.set_context(0, 1);
  ledger.record("obs0", 200, 200);
  CHECK(ledger.shots_for("obs0") == 300);
  CHECK(ledger.rows().size() == 4);
  CHECK(ledger.rows().back().cumulative == 300);

  const auto path = std::filesystem::temp_directory_path() / "qrl_ledger.csv";
  ledger.write_csv(path.string());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  CHECK(header == "episode,step,observable,shots,cumulative");
  int lines = 0;
  std::string line;
  while (std::getline(f, line)) ++lines;
  CHECK(lines == 4);
  std::filesystem::remove(path);
}

TEST_CASE("empty ledger reports zero") {
  ShotLedger ledger;
  CHECK(ledger.total_shots() == 0);
  CHECK(ledger.total_executions() == 0);
  CHECK(ledger.shots_for("anything") == 0);
}

TEST_CASE("fixed-shot accounting is exact arithmetic") {
  // E episodes of S steps, A observables at m shots each: E*S*A*m reads.
  ShotLedger ledger;
  const int episodes = 3, steps = 4, n_obs = 2, m = 50;
  for (int e = 0; e < episodes; ++e)
    for (int s = 0; s < steps; ++s) {
      ledger.set_context(e, s);
      for (int a = 0; a < n_obs; ++a)
        ledger.record("obs" + std::to_string(a), m, a == 0 ? m : 0);
    }
  CHECK(ledger.total_shots() == episodes * steps * n_obs * m);
  CHECK(ledger.total_executions() == episodes * steps * m);
}
