#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ionsim/channels.hpp"
#include "ionsim/noise.hpp"
#include "ionsim/rng.hpp"

using namespace ionsim;

TEST_CASE("angle sampling statistics") {
  NoiseModel quiet;
  std::mt19937_64 rng(1);
  CHECK(sample_angle(0.7, quiet, rng) == 0.7);

  NoiseModel noisy;
  noisy.mean_shift = 0.1;
  noisy.std_dev = 0.25;
  const int draws = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double x = sample_angle(0.7, noisy, rng) - 0.8;
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / draws;
  const double var = sum_sq / draws - mean * mean;
  CHECK(std::abs(mean) < 4.0 * noisy.std_dev / std::sqrt(draws));
  CHECK(var == doctest::Approx(noisy.std_dev * noisy.std_dev).epsilon(0.05));

  NoiseModel bad;
  bad.std_dev = -1.0;
  CHECK_THROWS_AS(sample_angle(0.0, bad, rng), std::domain_error);
}

TEST_CASE("derived seeds decorrelate trajectories") {
  CHECK(derive_seed(42, 0) != derive_seed(42, 1));
  CHECK(derive_seed(42, 0) != derive_seed(43, 0));
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
}

TEST_CASE("monte carlo is independent of the worker count") {
  PumpMcConfig config;
  config.steps = 3;
  config.trajectories = 120;
  config.seed = 99;
  NoiseModel model;
  model.std_dev = 0.3;

  config.workers = 1;
  const RunRecord serial = repeated_pumping_mc(config, model);
  config.workers = 5;
  const RunRecord parallel = repeated_pumping_mc(config, model);

  REQUIRE(serial.means.size() == parallel.means.size());
  for (size_t s = 0; s < serial.means.size(); ++s)
    for (size_t k = 0; k < serial.means[s].size(); ++k) {
      CHECK(serial.means[s][k] == parallel.means[s][k]);  // bitwise
      CHECK(serial.stderrs[s][k] == parallel.stderrs[s][k]);
    }
}

TEST_CASE("noiseless runs reproduce the exact channel evolution") {
  PumpMcConfig config;
  config.steps = 4;
  config.trajectories = 3;
  config.seed = 5;
  const RunRecord record = repeated_pumping_mc(config, NoiseModel{});

  // exact reference on the 4-qubit system
  PauliString a{std::string_view("XXXX")};
  const KrausChannel exact = stabilizer_pump_channel(
      a, PauliString::single(4, 3, Pauli::Z), M_PI / 2.0);
  DensityMatrix rho =
      DensityMatrix::from_state(StateVector::basis_state(4, "1111"));
  for (int s = 0; s <= config.steps; ++s) {
    for (size_t k = 0; k < record.observables.size(); ++k) {
      PauliString obs(4);
      if (record.observables[k] == "A") {
        obs = a;
      } else {
        const int i = record.observables[k][1] - '1';
        const int j = record.observables[k][3] - '1';
        obs.set_factor(i, Pauli::Z);
        obs.set_factor(j, Pauli::Z);
      }
      CHECK(record.means[s][k] ==
            doctest::Approx(expectation(rho, obs)).epsilon(1e-10));
    }
    rho = apply_channel(rho, exact);
  }
}

TEST_CASE("noisy correlators single out ion 4") {
  PumpMcConfig config;
  config.steps = 4;
  config.trajectories = 500;
  config.seed = 31;
  config.workers = 4;
  NoiseModel model;
  model.std_dev = 0.3 * M_PI / 2.0;
  const RunRecord record = repeated_pumping_mc(config, model);

  REQUIRE(record.observables.size() == 7);
  for (int s = 2; s <= config.steps; ++s) {
    double with4 = 0.0, without4 = 0.0;
    for (size_t k = 1; k < record.observables.size(); ++k) {
      if (record.observables[k].find('4') != std::string::npos)
        with4 += record.means[s][k] / 3.0;
      else
        without4 += record.means[s][k] / 3.0;
    }
    CHECK(with4 < without4);
    CHECK(record.means[s][0] >= 0.0);  // <A> stays non-negative
  }
}

TEST_CASE("csv serialization") {
  PumpMcConfig config;
  config.steps = 1;
  config.trajectories = 2;
  config.seed = 8;
  const RunRecord record = repeated_pumping_mc(config, NoiseModel{});
  const std::string csv = run_record_csv(record);
  CHECK(csv.rfind("step,observable,mean,stderr\n", 0) == 0);
  CHECK(csv.find("0,A,") != std::string::npos);
  CHECK(csv.find("1,z3z4,") != std::string::npos);
  // two rows of header+steps times seven observables
  const size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 1 + 2 * 7);
}

TEST_CASE("dephasing limit check") {
  const DephasingReport exact = dephasing_limit_check(0.0, 0.0, 1.0, 5, 3);
  CHECK(exact.max_trace_distance < 1e-12);
  CHECK(exact.within_regime);

  const DephasingReport report = dephasing_limit_check(0.05, 0.05, 1.0, 20, 3);
  CHECK(report.within_regime);
  CHECK(report.max_trace_distance < 1e-4);

  // fourth-order scaling in the small parameters
  const double d1 = dephasing_limit_check(0.1, 0.1, 1.0, 20, 3).max_trace_distance;
  const double d2 = dephasing_limit_check(0.05, 0.05, 1.0, 20, 3).max_trace_distance;
  CHECK(std::log2(d1 / d2) >= 3.5);

  // averaged channel matches the closed form E[cos 2phi] = cos(2 phi0) e^{-2 sigma^2}
  // on a stabilizer eigenstate pair: checked through the coherent rotation of
  // a +1/-1 superposition under exp(i phi A)
  const double phi0 = 0.2, sigma = 0.15;
  PauliString a{std::string_view("XXXX")};
  StateVector ones = StateVector::basis_state(4, "1111");
  DensityMatrix rho = DensityMatrix::from_state(ones);
  // quadrature average of exp(i phi A) rho exp(-i phi A)
  const Matrix am = a.matrix();
  const Matrix id = Matrix::Identity(16, 16);
  Matrix averaged = Matrix::Zero(16, 16);
  const int nodes = 400;
  double total = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double phi = phi0 - 8 * sigma + 16.0 * sigma * k / (nodes - 1);
    const double w = std::exp(-0.5 * std::pow((phi - phi0) / sigma, 2));
    const Matrix u = std::cos(phi) * id + Complex(0, 1) * std::sin(phi) * am;
    averaged += w * u * rho.elements() * u.adjoint();
    total += w;
  }
  averaged /= total;
  // <ZIII> distinguishes |1111> from A|1111> = |0000>; under the rotated
  // state it carries the cos(2 phi) average
  PauliString z0 = PauliString::single(4, 0, Pauli::Z);
  const double expected = -std::cos(2.0 * phi0) * std::exp(-2.0 * sigma * sigma);
  CHECK(expectation(DensityMatrix(4, averaged), z0) ==
        doctest::Approx(expected).epsilon(1e-4));
}
