#include "ionsim/noise.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "ionsim/rng.hpp"

namespace ionsim {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kTheta = M_PI / 2.0;

struct PumpCircuitContext {
  Matrix ms_forward;   // 32x32 on the full 5-qubit register
  Matrix ms_backward;
  Matrix wrap_open;    // 4x4 on {ancilla, ion 4}; bit 0 = ancilla
  Matrix wrap_mid;
  Matrix wrap_close;
  std::vector<PauliString> observables;
  std::vector<std::string> labels;
};

// Fixed two-qubit layers of the correcting gate between the addressed z
// rotations. The closing layer rotates ion 4 about y or x depending on the
// ancilla, which splits the conditional rotation generator -(1 - Z_anc) Y_4
// into the two reflections P0 X4 - P1 Y4 and -P0 X4 - P1 Y4 carried by the
// z pulses. An over- or under-rotated pulse therefore leaks a local sigma^x
// error onto ion 4 instead of an error commuting with every z z pair.
Matrix wrap_close_matrix() {
  const Matrix ry = local_rotation_matrix('y', M_PI / 2.0);
  const Matrix rx = local_rotation_matrix('x', M_PI / 2.0);
  Matrix f = Matrix::Zero(4, 4);
  for (int bp = 0; bp < 2; ++bp)
    for (int b = 0; b < 2; ++b) {
      f(2 * bp + 0, 2 * b + 0) = ry(bp, b);
      f(2 * bp + 1, 2 * b + 1) = rx(bp, b);
    }
  return f;
}

// X_anc followed by a CNOT with ion 4 as control: the ancilla z pulse inside
// this conjugation realizes exp(i angle/2 Z_anc Z_4).
Matrix wrap_mid_matrix() {
  Matrix f = Matrix::Zero(4, 4);
  for (int b4 = 0; b4 < 2; ++b4)
    for (int b0 = 0; b0 < 2; ++b0) f(2 * b4 + (b0 ^ b4 ^ 1), 2 * b4 + b0) = 1.0;
  return f;
}

PumpCircuitContext make_context() {
  PumpCircuitContext ctx;
  ctx.ms_forward = ms_matrix(kTheta, 0.0, 5);
  ctx.ms_backward = ms_matrix(-kTheta, 0.0, 5);
  ctx.wrap_close = wrap_close_matrix();
  ctx.wrap_mid = wrap_mid_matrix();
  ctx.wrap_open =
      (ctx.wrap_mid.adjoint() * ctx.wrap_close.adjoint()).eval();

  ctx.observables.push_back(PauliString("IXXXX"));
  ctx.labels.push_back("A");
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      PauliString zz(5);
      zz.set_factor(i, Pauli::Z);
      zz.set_factor(j, Pauli::Z);
      ctx.observables.push_back(zz);
      ctx.labels.push_back("z" + std::to_string(i) + "z" + std::to_string(j));
    }
  return ctx;
}

// One noisy pump step on the 5-qubit trajectory state. Draw order is fixed:
// optional forward-MS angle, ancilla z angle, ion-4 z angle, optional
// backward-MS angle, then the reset branch.
void noisy_pump_step(StateVector& state, const PumpCircuitContext& ctx,
                     const NoiseModel& model, std::mt19937_64& rng) {
  const std::vector<int> all = {0, 1, 2, 3, 4};
  if (model.noisy_ms)
    apply_unitary(state, ms_matrix(sample_angle(kTheta, model, rng), 0.0, 5),
                  all);
  else
    apply_unitary(state, ctx.ms_forward, all);
  apply_unitary(state, ctx.wrap_open, {0, 4});
  apply_unitary(state,
                local_rotation_matrix('z', sample_angle(kTheta, model, rng)),
                {0});
  apply_unitary(state, ctx.wrap_mid, {0, 4});
  apply_unitary(state,
                local_rotation_matrix('z', sample_angle(kTheta, model, rng)),
                {4});
  apply_unitary(state, ctx.wrap_close, {0, 4});
  if (model.noisy_ms)
    apply_unitary(state, ms_matrix(-sample_angle(kTheta, model, rng), 0.0, 5),
                  all);
  else
    apply_unitary(state, ctx.ms_backward, all);
  reset_qubit(state, 0, rng);
}

}  // namespace

double sample_angle(double nominal, const NoiseModel& model,
                    std::mt19937_64& rng) {
  if (model.std_dev < 0.0)
    throw std::domain_error("sample_angle: negative standard deviation");
  return nominal + model.mean_shift + model.std_dev * gaussian(rng);
}

RunRecord repeated_pumping_mc(const PumpMcConfig& config,
                              const NoiseModel& model) {
  if (config.trajectories < 1)
    throw std::invalid_argument("repeated_pumping_mc: need at least 1 trajectory");
  if (config.steps < 1)
    throw std::invalid_argument("repeated_pumping_mc: need at least 1 step");

  const PumpCircuitContext ctx = make_context();
  const size_t num_obs = ctx.observables.size();
  const size_t num_rows = static_cast<size_t>(config.steps) + 1;

  // values[trajectory][step][observable]; filled by any number of workers,
  // reduced below in trajectory order for bitwise stability.
  std::vector<std::vector<std::vector<double>>> values(
      static_cast<size_t>(config.trajectories),
      std::vector<std::vector<double>>(num_rows, std::vector<double>(num_obs)));

  auto run_range = [&](int begin, int end) {
    for (int t = begin; t < end; ++t) {
      std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(t)));
      StateVector state = StateVector::basis_state(5, "01111");
      for (size_t k = 0; k < num_obs; ++k)
        values[static_cast<size_t>(t)][0][k] =
            expectation(state, ctx.observables[k]);
      for (int s = 1; s <= config.steps; ++s) {
        noisy_pump_step(state, ctx, model, rng);
        for (size_t k = 0; k < num_obs; ++k)
          values[static_cast<size_t>(t)][static_cast<size_t>(s)][k] =
              expectation(state, ctx.observables[k]);
      }
    }
  };

  const int workers =
      std::max(1, std::min(config.workers, config.trajectories));
  if (workers == 1) {
    run_range(0, config.trajectories);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (config.trajectories + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int begin = w * chunk;
      const int end = std::min(config.trajectories, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (std::thread& th : pool) th.join();
  }

  RunRecord record;
  record.seed = config.seed;
  record.steps = config.steps;
  record.trajectory_count = config.trajectories;
  record.observables = ctx.labels;
  const double n = static_cast<double>(config.trajectories);
  for (size_t s = 0; s < num_rows; ++s) {
    std::vector<double> mean(num_obs, 0.0), err(num_obs, 0.0);
    for (size_t t = 0; t < values.size(); ++t)
      for (size_t k = 0; k < num_obs; ++k) mean[k] += values[t][s][k];
    for (size_t k = 0; k < num_obs; ++k) mean[k] /= n;
    if (config.trajectories > 1) {
      for (size_t t = 0; t < values.size(); ++t)
        for (size_t k = 0; k < num_obs; ++k) {
          const double d = values[t][s][k] - mean[k];
          err[k] += d * d;
        }
      for (size_t k = 0; k < num_obs; ++k)
        err[k] = std::sqrt(err[k] / (n - 1.0)) / std::sqrt(n);
    }
    record.means.push_back(std::move(mean));
    record.stderrs.push_back(std::move(err));
  }
  if (config.record_trajectories) record.trajectories = std::move(values);
  return record;
}

std::string run_record_csv(const RunRecord& record) {
  std::string out = "step,observable,mean,stderr\n";
  char buf[128];
  for (size_t s = 0; s < record.means.size(); ++s) {
    for (size_t k = 0; k < record.observables.size(); ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g\n", s,
                    record.observables[k].c_str(), record.means[s][k],
                    record.stderrs[s][k]);
      out += buf;
    }
  }
  return out;
}

DephasingReport dephasing_limit_check(double phi0, double sigma, double tau,
                                      int probes, std::uint64_t seed) {
  if (probes < 1)
    throw std::invalid_argument("dephasing_limit_check: need at least 1 probe");
  if (sigma < 0.0 || tau <= 0.0)
    throw std::invalid_argument("dephasing_limit_check: bad sigma or tau");

  DephasingReport report;
  report.within_regime = std::abs(phi0) <= 0.3 && sigma <= 0.3;
  if (!report.within_regime)
    std::fprintf(stderr,
                 "warning: dephasing_limit_check outside the small-angle "
                 "regime (phi0=%g, sigma=%g)\n",
                 phi0, sigma);

  const PauliString a_string("XXXX");
  const Matrix a = a_string.matrix();
  const long long dim = a.rows();
  const Matrix id = Matrix::Identity(dim, dim);

  // Gaussian quadrature nodes for the averaged channel; with A^2 = 1 each
  // node unitary is cos(phi) + i sin(phi) A.
  std::vector<std::pair<double, double>> nodes;  // (phi, weight)
  if (sigma == 0.0) {
    nodes.emplace_back(phi0, 1.0);
  } else {
    const int m = 201;
    const double span = 8.0 * sigma;
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
      const double phi = phi0 - span + 2.0 * span * k / (m - 1);
      const double w = std::exp(-0.5 * std::pow((phi - phi0) / sigma, 2));
      nodes.emplace_back(phi, w);
      total += w;
    }
    for (auto& node : nodes) node.second /= total;
  }

  MasterEquation eq;
  HamiltonianTerm h;
  h.coefficient = -phi0 / tau;
  h.string = a_string;
  eq.hamiltonian_terms.push_back(std::move(h));
  eq.lindblad_terms.push_back({a, sigma * sigma / tau});

  std::mt19937_64 rng(seed);
  for (int p = 0; p < probes; ++p) {
    Vector amps(dim);
    for (long long i = 0; i < dim; ++i)
      amps[i] = Complex(gaussian(rng), gaussian(rng));
    amps /= amps.norm();
    const DensityMatrix rho(4, amps * amps.adjoint());

    Matrix averaged = Matrix::Zero(dim, dim);
    for (const auto& [phi, w] : nodes) {
      const Matrix u = std::cos(phi) * id + kI * std::sin(phi) * a;
      averaged += w * u * rho.elements() * u.adjoint();
    }
    const DensityMatrix ode = integrate_master_equation(rho, eq, tau, tau);
    report.max_trace_distance =
        std::max(report.max_trace_distance,
                 trace_distance(DensityMatrix(4, averaged), ode));
  }
  return report;
}

}  // namespace ionsim
