#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "qrl/circuit.hpp"
#include "qrl/observable.hpp"
#include "qrl/rng.hpp"
#include "qrl/statevector.hpp"

using namespace qrl;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("initial state is |0...0>") {
  const StateVector one = init_state(1);
  CHECK(one.size() == 2);
  CHECK(one[0].real() == doctest::Approx(1.0));
  CHECK(std::abs(one[1]) == 0.0);

  const StateVector four = init_state(4);
  CHECK(four.size() == 16);
  CHECK(four[0].real() == doctest::Approx(1.0));
  for (std::size_t i = 1; i < 16; ++i) CHECK(std::abs(four[i]) == 0.0);
}

TEST_CASE("qubit cap is enforced") {
  CHECK_THROWS_AS(init_state(13), std::runtime_error);
  CHECK_THROWS_AS(init_state(0), std::runtime_error);
  CHECK_NOTHROW(init_state(12));
}

TEST_CASE("rx flips and cz is trivial on zero states") {
  StateVector sv(1);
  sv.apply(rx(0, kPi));
  CHECK(sv.expectation(Observable::z_string({0})) == doctest::Approx(-1.0));

  StateVector two(2);
  two.apply(cz(0, 1));
  CHECK(std::abs(two[0] - Amplitude{1.0, 0.0}) < 1e-12);
}

TEST_CASE("zz on |00> is a pure phase") {
  StateVector sv(2);
  sv.apply(zz(0, 1, 0.7));
  CHECK(std::abs(std::abs(sv[0]) - 1.0) < 1e-12);
  CHECK(sv.expectation(Observable::z_string({0})) == doctest::Approx(1.0));
  CHECK(sv.expectation(Observable::z_string({1})) == doctest::Approx(1.0));
  CHECK(sv.expectation(Observable::z_string({0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("rx rotation gives cos(theta) for <Z>") {
  for (double theta : {0.0, 0.3, 1.1, 2.5, kPi}) {
    StateVector sv(1);
    sv.apply(rx(0, theta));
    CHECK(sv.expectation(Observable::z_string({0})) ==
          doctest::Approx(std::cos(theta)).epsilon(1e-12));
  }
}

TEST_CASE("plus state has zero <Z>") {
  StateVector sv(1);
  sv.apply(ry(0, kPi / 2));
  CHECK(sv.expectation(Observable::z_string({0})) == doctest::Approx(0.0));
}

TEST_CASE("zzzz on |0000> gives 1") {
  StateVector sv(4);
  CHECK(sv.expectation(Observable::z_string({0, 1, 2, 3})) == doctest::Approx(1.0));
}

TEST_CASE("norm is preserved through a random gate sequence") {
  Rng rng(3, 0);
  StateVector sv(3);
  for (int k = 0; k < 60; ++k) {
    const int pick = rng.uniform_int(6);
    switch (pick) {
      case 0: sv.apply(rx(rng.uniform_int(3), rng.uniform(0, 2 * kPi))); break;
      case 1: sv.apply(ry(rng.uniform_int(3), rng.uniform(0, 2 * kPi))); break;
      case 2: sv.apply(rz(rng.uniform_int(3), rng.uniform(0, 2 * kPi))); break;
      case 3: sv.apply(cz(0, 1 + rng.uniform_int(2))); break;
      case 4: sv.apply(cnot(1, 2)); break;
      default: sv.apply(zz(0, 2, rng.uniform(0, 2 * kPi))); break;
    }
    CHECK(std::abs(sv.norm_sq() - 1.0) < 1e-10);
  }
}

TEST_CASE("gate action matches the dense matrix-vector product") {
  // CNOT truth table and a ZZ phase pattern on a superposition.
  StateVector sv(2);
  sv.apply(rx(0, kPi));  // |01> in bit order q0=1
  sv.apply(cnot(0, 1));
  // control q0 set -> target q1 flips: index 3
  CHECK(std::abs(sv[3]) == doctest::Approx(1.0));

  StateVector w(2);
  w.apply(ry(0, kPi / 2));
  w.apply(ry(1, kPi / 2));
  w.apply(zz(0, 1, 1.3));
  const Amplitude peq{std::cos(0.65), -std::sin(0.65)};
  const Amplitude pne = std::conj(peq);
  CHECK(std::abs(w[0] - 0.5 * peq) < 1e-12);
  CHECK(std::abs(w[1] - 0.5 * pne) < 1e-12);
  CHECK(std::abs(w[2] - 0.5 * pne) < 1e-12);
  CHECK(std::abs(w[3] - 0.5 * peq) < 1e-12);
}

TEST_CASE("expectation handles X and Y strings") {
  StateVector sv(1);
  sv.apply(ry(0, kPi / 2));  // |+>
  CHECK(sv.expectation(Observable::single_term(1.0, {{0, Pauli::X}})) ==
        doctest::Approx(1.0));
  StateVector y(1);
  y.apply(rx(0, -kPi / 2));  // +i eigenstate of Y
  CHECK(y.expectation(Observable::single_term(1.0, {{0, Pauli::Y}})) ==
        doctest::Approx(1.0));
}

TEST_CASE("observable norms and bounds") {
  const Observable zz01 = Observable::z_string({0, 1}, 1.0);
  CHECK(zz01.infinity_norm() == doctest::Approx(1.0));
  const Observable scaled = Observable::z_string({0}, -2.5);
  CHECK(scaled.infinity_norm() == doctest::Approx(2.5));
  // 1 - Z^x4 has eigenvalues 0 and 2.
  const Observable complement = Observable::z_string({0, 1, 2, 3}, -1.0, 1.0);
  CHECK(complement.infinity_norm() == doctest::Approx(2.0));

  Rng rng(5, 2);
  StateVector sv(4);
  for (int q = 0; q < 4; ++q) sv.apply(ry(q, rng.uniform(0, 2 * kPi)));
  sv.apply(cz(0, 1));
  const double value = sv.expectation(complement);
  CHECK(value >= -complement.infinity_norm() - 1e-12);
  CHECK(value <= complement.infinity_norm() + 1e-12);
}

TEST_CASE("sampling an eigenstate returns the eigenvalue exactly") {
  StateVector sv(2);
  sv.apply(rx(0, kPi));
  sv.apply(rx(1, kPi));  // |11>: Z0 Z1 eigenvalue +1
  Rng rng(7, 0);
  const double est = sample_expectation(sv, Observable::z_string({0, 1}), 25, rng);
  CHECK(est == doctest::Approx(1.0));
}

TEST_CASE("sampling error shrinks as 1/sqrt(m)") {
  StateVector plus(1);
  plus.apply(ry(0, kPi / 2));
  const Observable z0 = Observable::z_string({0});
  Rng rng(9, 0);

  // m = 10^4: the estimate lands within 3 sigma = 0.03 nearly always.
  int within = 0;
  const int reps = 300;
  for (int k = 0; k < reps; ++k) {
    Rng sub = rng.derive(k);
    if (std::abs(sample_expectation(plus, z0, 10000, sub)) <= 0.03) ++within;
  }
  CHECK(within >= 295);

  // Estimator std ratio between m = 100 and m = 10000 is about 10.
  auto estimator_std = [&](int m, std::uint64_t salt) {
    double sum = 0, sum_sq = 0;
    const int n = 2000;
    for (int k = 0; k < n; ++k) {
      Rng sub = rng.derive(salt * 100000 + k);
      const double v = sample_expectation(plus, z0, m, sub);
      sum += v;
      sum_sq += v * v;
    }
    return std::sqrt((sum_sq - sum * sum / n) / (n - 1));
  };
  const double ratio = estimator_std(100, 1) / estimator_std(10000, 2);
  CHECK(ratio == doctest::Approx(10.0).epsilon(0.15));
}

TEST_CASE("sampling rejects zero shots and non-diagonal observables") {
  StateVector sv(1);
  Rng rng(1, 1);
  CHECK_THROWS_AS(sample_expectation(sv, Observable::z_string({0}), 0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_expectation(
                      sv, Observable::single_term(1.0, {{0, Pauli::X}}), 10, rng),
                  std::invalid_argument);
}

TEST_CASE("identical seeds reproduce samples bit for bit") {
  StateVector sv(2);
  sv.apply(ry(0, 0.7));
  sv.apply(ry(1, 1.9));
  const Observable obs = Observable::z_string({0, 1});
  Rng a(123, 9), b(123, 9);
  for (int k = 0; k < 5; ++k)
    CHECK(sample_expectation(sv, obs, 500, a) == sample_expectation(sv, obs, 500, b));
}

TEST_CASE("moment structure rejects overlapping gates") {
  Circuit c(3);
  c.begin_moment();
  c.push(rx(0, 0.1));
  CHECK_THROWS_AS(c.push(ry(0, 0.2)), std::invalid_argument);
  c.begin_moment();
  CHECK_NOTHROW(c.push(ry(0, 0.2)));
  CHECK_THROWS_AS(c.push(cz(5, 1)), std::invalid_argument);
  CHECK_THROWS_AS(c.push(cz(1, 1)), std::invalid_argument);
}

TEST_CASE("statevector files round-trip at full precision") {
  Rng rng(17, 3);
  StateVector sv(3);
  for (int q = 0; q < 3; ++q) sv.apply(ry(q, rng.uniform(0, 2 * kPi)));
  sv.apply(cnot(0, 2));
  sv.apply(rz(1, 0.4));

  const auto path = std::filesystem::temp_directory_path() / "qrl_state_vec.txt";
  save_statevector(path.string(), sv);
  const StateVector loaded = load_statevector(path.string());
  REQUIRE(loaded.size() == sv.size());
  for (std::size_t i = 0; i < sv.size(); ++i)
    CHECK(std::abs(loaded[i] - sv[i]) < 1e-13);
  std::filesystem::remove(path);
}

TEST_CASE("golden statevector for a fixed three-qubit circuit") {
  // Frozen from an independent dense linear-algebra evaluation.
  StateVector sv(3);
  sv.apply(ry(0, 0.3));
  sv.apply(rx(1, 1.1));
  sv.apply(cnot(0, 1));
  sv.apply(zz(1, 2, 0.8));
  sv.apply(rz(0, 0.5));
  const StateVector golden = load_statevector("data/golden_3q.txt");
  REQUIRE(golden.size() == sv.size());
  for (std::size_t i = 0; i < sv.size(); ++i)
    CHECK(std::abs(golden[i] - sv[i]) < 1e-12);
}
