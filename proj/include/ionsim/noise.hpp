#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ionsim/models.hpp"

namespace ionsim {

/// Gaussian fluctuation of gate angles. By default only the two addressed
/// z rotations of the pump circuit are noisy; MS-angle noise is an optional
/// extension with no calibrated numbers attached.
struct NoiseModel {
  double mean_shift = 0.0;  // radians
  double std_dev = 0.0;     // radians
  bool per_gate_independent = true;
  bool noisy_ms = false;
};

struct RunRecord {
  std::uint64_t seed = 0;
  int steps = 0;
  int trajectory_count = 0;
  std::vector<std::string> observables;
  // means[s][k] = mean of observables[k] after s pump steps (row 0 = initial).
  std::vector<std::vector<double>> means;
  std::vector<std::vector<double>> stderrs;
  // Optional per-trajectory values [trajectory][step][observable].
  std::vector<std::vector<std::vector<double>>> trajectories;
};

double sample_angle(double nominal, const NoiseModel& model,
                    std::mt19937_64& rng);

struct PumpMcConfig {
  int steps = 6;
  int trajectories = 10000;
  std::uint64_t seed = 0;
  int workers = 1;
  bool record_trajectories = false;
};

// Monte Carlo over the noisy four-body pump circuit at theta = pi/2 on
// |0>_anc (x) |1111>: per step the addressed z rotations on the ancilla and
// ion 4 acquire independent Gaussian angle errors, the ancilla is reset,
// and <A>, <sigma^z_i sigma^z_j> are recorded. Per-trajectory seeds derive
// from the master seed, so results are bitwise independent of the worker
// count; the final reduction sums in trajectory order.
RunRecord repeated_pumping_mc(const PumpMcConfig& config,
                              const NoiseModel& model);

// CSV with columns: step, observable, mean, stderr (17 significant digits).
std::string run_record_csv(const RunRecord& record);

struct DephasingReport {
  double max_trace_distance = 0.0;
  bool within_regime = true;  // false triggers a warning, not a failure
};

// Compares the Gaussian-averaged coherent-block channel (angle phi drawn
// from N(phi0, sigma^2)) against one RK4 step of the dephasing master
// equation with H = -(phi0/tau) A and rate sigma^2/tau, over `probes`
// random four-qubit states.
DephasingReport dephasing_limit_check(double phi0, double sigma, double tau,
                                      int probes, std::uint64_t seed);

}  // namespace ionsim
