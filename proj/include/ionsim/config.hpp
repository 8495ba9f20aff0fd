#pragma once

#include <cstdint>
#include <string>

namespace ionsim {

inline constexpr const char* kVersion = "1.0.0";

/// One experiment run. Serializes to JSON with a fixed key set; parsing
/// rejects unknown keys and the serialize -> parse -> serialize round trip
/// is the identity.
struct ExperimentConfig {
  std::string experiment = "verify-identities";
  double theta = 1.5707963267948966;  // pi/2
  double phi = 0.78539816339744828;   // pi/4
  double tau = 1.0;
  int steps = 6;
  int sweeps = 1;
  int trajectories = 10000;
  int workers = 1;
  int probes = 100;
  std::uint64_t seed = 0;
  std::string model = "color-code-seven";
  std::string stabilizer = "XXXX";   // system-qubit Pauli string
  int flip_qubit = -1;               // -1 = first support qubit
  std::string initial;               // system bit string, "" = experiment default
  double noise_mean_shift = 0.0;
  double noise_std_dev = 0.0;
  bool noisy_ms = false;
  std::string out = ".";

  static ExperimentConfig from_json(const std::string& text);
  std::string to_json() const;
};

ExperimentConfig load_config(const std::string& path);

struct RunOptions {
  bool dump_circuit = false;
  bool refocus = false;
  bool strict_phase = false;
};

// Executes the configured experiment, writing CSV output and a run
// manifest into config.out. Returns the process exit status.
int run(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace ionsim
