#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ionsim/config.hpp"

using namespace ionsim;

TEST_CASE("defaults") {
  const ExperimentConfig config;
  CHECK(config.experiment == "verify-identities");
  CHECK(config.steps == 6);
  CHECK(config.trajectories == 10000);
  CHECK(config.theta == doctest::Approx(M_PI / 2.0));
  CHECK(config.flip_qubit == -1);
  CHECK(config.noise_std_dev == 0.0);
}

TEST_CASE("serialization round trip is the identity") {
  ExperimentConfig config;
  config.experiment = "noise-mc";
  config.theta = 0.123456789012345;
  config.trajectories = 321;
  config.seed = 0xDEADBEEFULL;
  config.noise_std_dev = 0.3 * M_PI / 2.0;
  config.initial = "1111";
  config.out = "/tmp/somewhere";

  const std::string once = config.to_json();
  const ExperimentConfig parsed = ExperimentConfig::from_json(once);
  CHECK(parsed.to_json() == once);
  CHECK(parsed.experiment == config.experiment);
  CHECK(parsed.theta == config.theta);
  CHECK(parsed.seed == config.seed);
  CHECK(parsed.noise_std_dev == config.noise_std_dev);
  CHECK(parsed.initial == config.initial);
}

TEST_CASE("unknown keys are rejected") {
  nlohmann::json j = nlohmann::json::parse(ExperimentConfig{}.to_json());
  j["typo_field"] = 1;
  CHECK_THROWS_AS(ExperimentConfig::from_json(j.dump()), std::invalid_argument);

  nlohmann::json nested = nlohmann::json::parse(ExperimentConfig{}.to_json());
  if (nested.contains("noise")) {
    nested["noise"]["typo"] = 0.1;
    CHECK_THROWS_AS(ExperimentConfig::from_json(nested.dump()),
                    std::invalid_argument);
  }
}

TEST_CASE("invalid experiments and malformed input are rejected") {
  nlohmann::json j = nlohmann::json::parse(ExperimentConfig{}.to_json());
  j["experiment"] = "no-such-experiment";
  CHECK_THROWS_AS(ExperimentConfig::from_json(j.dump()), std::invalid_argument);
  CHECK_THROWS(ExperimentConfig::from_json("not json at all"));
}

TEST_CASE("loading from a file") {
  ExperimentConfig config;
  config.experiment = "pump";
  config.seed = 17;
  const std::string path = "/tmp/ionsim_config_test.json";
  {
    std::ofstream out(path);
    out << config.to_json();
  }
  const ExperimentConfig loaded = load_config(path);
  CHECK(loaded.experiment == "pump");
  CHECK(loaded.seed == 17);
  std::remove(path.c_str());

  CHECK_THROWS(load_config("/tmp/ionsim_no_such_file.json"));
}
