#include "ionsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ionsim {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown_keys(const Json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& item : j.items())
    if (known.find(item.key()) == known.end())
      throw std::invalid_argument("config: unknown key '" + item.key() +
                                  "' in " + where);
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config: parse error: ") + e.what());
  }
  reject_unknown_keys(
      j,
      {"experiment", "theta", "phi", "tau", "steps", "sweeps", "trajectories",
       "workers", "probes", "seed", "model", "stabilizer", "flip_qubit",
       "initial", "noise", "out"},
      "top level");
  ExperimentConfig c;
  read(j, "experiment", c.experiment);
  read(j, "theta", c.theta);
  read(j, "phi", c.phi);
  read(j, "tau", c.tau);
  read(j, "steps", c.steps);
  read(j, "sweeps", c.sweeps);
  read(j, "trajectories", c.trajectories);
  read(j, "workers", c.workers);
  read(j, "probes", c.probes);
  read(j, "seed", c.seed);
  read(j, "model", c.model);
  read(j, "stabilizer", c.stabilizer);
  read(j, "flip_qubit", c.flip_qubit);
  read(j, "initial", c.initial);
  if (j.contains("noise")) {
    const Json& n = j.at("noise");
    reject_unknown_keys(n, {"mean_shift", "std_dev", "noisy_ms"}, "noise");
    read(n, "mean_shift", c.noise_mean_shift);
    read(n, "std_dev", c.noise_std_dev);
    read(n, "noisy_ms", c.noisy_ms);
  }
  read(j, "out", c.out);

  static const std::set<std::string> experiments = {
      "verify-identities", "coherent-evolve", "pump",
      "cool-toric",        "cool-colorcode",  "logical-demo",
      "qnd-measure",       "noise-mc",        "trotter-vs-ode"};
  if (experiments.find(c.experiment) == experiments.end())
    throw std::invalid_argument("config: unknown experiment '" + c.experiment +
                                "'");
  return c;
}

std::string ExperimentConfig::to_json() const {
  Json j;
  j["experiment"] = experiment;
  j["theta"] = theta;
  j["phi"] = phi;
  j["tau"] = tau;
  j["steps"] = steps;
  j["sweeps"] = sweeps;
  j["trajectories"] = trajectories;
  j["workers"] = workers;
  j["probes"] = probes;
  j["seed"] = seed;
  j["model"] = model;
  j["stabilizer"] = stabilizer;
  j["flip_qubit"] = flip_qubit;
  j["initial"] = initial;
  j["noise"] = {{"mean_shift", noise_mean_shift},
                {"std_dev", noise_std_dev},
                {"noisy_ms", noisy_ms}};
  j["out"] = out;
  return j.dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ExperimentConfig::from_json(buffer.str());
}

}  // namespace ionsim
