#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <json.hpp>

#include "ionsim/config.hpp"
#include "ionsim/noise.hpp"
#include "ionsim/rng.hpp"

namespace ionsim {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

struct CsvWriter {
  std::string body = "step,observable,mean,stderr\n";
  void row(long long step, const std::string& observable, double mean,
           double stderr_value = 0.0) {
    body += std::to_string(step) + "," + observable + "," + fmt(mean) + "," +
            fmt(stderr_value) + "\n";
  }
};

// System-qubit string shifted up by one to make room for the ancilla.
PauliString lift_by_ancilla(const PauliString& s) {
  PauliString out(s.num_qubits() + 1);
  for (int q = 0; q < s.num_qubits(); ++q) out.set_factor(q + 1, s.factor(q));
  out.set_phase_quarter(s.phase_quarter());
  return out;
}

PauliString parse_stabilizer(const ExperimentConfig& config) {
  if (config.stabilizer.empty())
    throw std::invalid_argument("config: empty stabilizer string");
  return PauliString(config.stabilizer);
}

int resolve_flip(const ExperimentConfig& config, const PauliString& stab) {
  const int flip =
      config.flip_qubit >= 0 ? config.flip_qubit : stab.support().front();
  if (stab.factor(flip) == Pauli::I)
    throw std::invalid_argument("config: flip qubit outside stabilizer support");
  return flip;
}

std::string initial_bits(const ExperimentConfig& config, int num_qubits,
                         char fallback) {
  if (config.initial.empty())
    return std::string(static_cast<size_t>(num_qubits), fallback);
  if (static_cast<int>(config.initial.size()) != num_qubits)
    throw std::invalid_argument("config: initial bit string length mismatch");
  return config.initial;
}

CodeModel model_by_name(const std::string& name) {
  if (name == "toric-two-plaquette") return toric_two_plaquette();
  if (name == "color-code-seven") return color_code_seven();
  throw std::invalid_argument("config: unknown model '" + name + "'");
}

Circuit maybe_refocus(Circuit c, const RunOptions& options) {
  return options.refocus ? expand_with_refocusing(c) : c;
}

void maybe_dump(const Circuit& c, const RunOptions& options) {
  if (!options.dump_circuit) return;
  const std::string text = print_circuit(c);
  if (print_circuit(parse_circuit(text, c.num_qubits)) != text)
    throw std::logic_error("circuit printer/parser round trip failed");
  std::fputs(text.c_str(), stdout);
}

// ---- verify-identities ---------------------------------------------------

struct IdentityCheck {
  std::string name;
  std::function<double()> deviation;  // against tolerance 1e-10
};

double unitary_deviation(const Matrix& built, const Matrix& target,
                         bool strict) {
  return strict ? max_elementwise_distance(built, target)
                : 1.0 - phase_overlap(built, target);
}

PauliString uniform_string(int n, Pauli p) {
  PauliString s(n);
  for (int q = 0; q < n; ++q) s.set_factor(q, p);
  return s;
}

Matrix coupling_target(const PauliString& stab, double phi) {
  PauliString coupled = lift_by_ancilla(stab);
  coupled.set_factor(0, Pauli::Z);
  return matrix_exp_oracle(-phi * coupled.matrix());
}

int run_verify_identities(const ExperimentConfig& config,
                          const RunOptions& options) {
  const bool strict = options.strict_phase;
  std::vector<IdentityCheck> checks;

  for (double phi : {0.1, M_PI / 4.0, M_PI / 2.0, 1.3}) {
    checks.push_back({"coherent-block-n4-phi=" + fmt(phi), [=] {
                        const PauliString stab = uniform_string(4, Pauli::X);
                        return unitary_deviation(
                            circuit_unitary(
                                maybe_refocus(coherent_block(stab, phi), options)),
                            coupling_target(stab, phi), strict);
                      }});
  }
  for (Pauli p : {Pauli::X, Pauli::Y}) {
    for (int n = 1; n <= 4; ++n) {
      const std::string label =
          std::string("coherent-block-") + (p == Pauli::X ? "x" : "y") +
          "-n" + std::to_string(n);
      checks.push_back({label, [=] {
                          const PauliString stab = uniform_string(n, p);
                          return unitary_deviation(
                              circuit_unitary(maybe_refocus(
                                  coherent_block(stab, 0.37), options)),
                              coupling_target(stab, 0.37), strict);
                        }});
    }
  }
  for (const char* text : {"ZZXX", "XYZX", "ZZ"}) {
    checks.push_back({std::string("coherent-block-mixed-") + text, [=] {
                        const PauliString stab{std::string_view(text)};
                        return unitary_deviation(
                            circuit_unitary(
                                maybe_refocus(coherent_block(stab, 0.61), options)),
                            coupling_target(stab, 0.61), strict);
                      }});
  }
  for (int n = 3; n <= 5; ++n) {
    checks.push_back({"ancilla-free-block-n" + std::to_string(n), [=] {
                        const PauliString stab = uniform_string(n, Pauli::X);
                        return unitary_deviation(
                            circuit_unitary(maybe_refocus(
                                coherent_block_ancilla_free(stab, 0.53), options)),
                            matrix_exp_oracle(-0.53 * stab.matrix()), strict);
                      }});
  }
  for (int n = 2; n <= 6; ++n) {
    checks.push_back({"backward-ms-n" + std::to_string(n), [=] {
                        return unitary_deviation(
                            circuit_unitary(backward_ms_as_forward(0.7, 0.3, n)),
                            ms_matrix(-0.7, 0.3, n), strict);
                      }});
  }
  for (int n = 2; n <= 5; ++n) {
    // Strict equality holds for even ion counts only; report up to phase.
    checks.push_back({"ms-periodicity-n" + std::to_string(n), [=] {
                        return 1.0 - phase_overlap(
                                         ms_matrix(0.9 + 2.0 * M_PI, 0.2, n),
                                         ms_matrix(0.9, 0.2, n));
                      }});
  }
  for (int n = 3; n <= 5; ++n) {
    checks.push_back({"refocus-excluded-ion-n" + std::to_string(n), [=] {
                        return unitary_deviation(
                            circuit_unitary(
                                refocused_ms_excluding(n - 1, 0.8, 0.25, n)),
                            [&] {
                              std::vector<int> rest;
                              for (int q = 0; q + 1 < n; ++q) rest.push_back(q);
                              return ms_unitary(0.8, 0.25, rest, n);
                            }(),
                            strict);
                      }});
  }
  for (int n = 3; n <= 4; ++n) {
    checks.push_back({"refocus-star-n" + std::to_string(n), [=] {
                        Matrix target = Matrix::Identity(1LL << n, 1LL << n);
                        for (int i = 1; i < n; ++i)
                          target = ms_unitary(0.8, 0.25, {0, i}, n) * target;
                        return 1.0 - phase_overlap(
                                         circuit_unitary(star_ms(0.8, 0.25, n)),
                                         target);
                      }});
    checks.push_back({"refocus-two-ion-n" + std::to_string(n), [=] {
                        return 1.0 -
                               phase_overlap(
                                   circuit_unitary(
                                       two_ion_ms_via_refocus(1, 0.8, 0.25, n)),
                                   ms_unitary(0.8, 0.25, {0, 1}, n));
                      }});
  }
  for (int row = 0; row < 4; ++row) {
    checks.push_back({"correcting-gate-row" + std::to_string(row), [=] {
                        const double theta = 0.77;
                        return 1.0 -
                               phase_overlap(
                                   circuit_unitary(decompose_correcting_gate(
                                       row, theta, 4, 5)),
                                   embed(correcting_gate_matrix(row, theta),
                                         {0, 4}, 5));
                      }});
  }
  for (int n = 1; n <= 4; ++n) {
    checks.push_back({"pump-block-channel-n" + std::to_string(n), [=] {
                        const PauliString stab = uniform_string(n, Pauli::X);
                        const int flip = n - 1;
                        Circuit block = maybe_refocus(
                            dissipative_block(stab, M_PI / 4.0, flip), options);
                        const Matrix direct = choi_matrix(
                            [&](const DensityMatrix& rho) {
                              return apply_channel(
                                  rho, stabilizer_pump_channel(
                                           stab,
                                           induced_flip_operator(stab, flip),
                                           M_PI / 4.0));
                            },
                            n);
                        const Matrix induced = choi_matrix(
                            [&](const DensityMatrix& rho) {
                              return apply_block_to_system(block, rho);
                            },
                            n);
                        return (direct - induced).cwiseAbs().maxCoeff();
                      }});
  }

  (void)config;
  int failures = 0;
  for (const IdentityCheck& check : checks) {
    const double dev = check.deviation();
    const bool ok = dev < 1e-10;
    if (!ok) ++failures;
    std::printf("%s %s max-dev=%.3e\n", ok ? "PASS" : "FAIL",
                check.name.c_str(), dev);
  }
  std::printf("verify-identities: %d/%zu passed\n",
              static_cast<int>(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}

// ---- experiments ---------------------------------------------------------

CsvWriter run_coherent_evolve(const ExperimentConfig& config,
                              const RunOptions& options) {
  const PauliString stab = parse_stabilizer(config);
  const int n = stab.num_qubits();
  const Circuit block = maybe_refocus(coherent_block(stab, config.phi), options);
  maybe_dump(block, options);

  StateVector state = StateVector::basis_state(
      n + 1, "0" + initial_bits(config, n, '0'));
  const PauliString lifted = lift_by_ancilla(stab);

  CsvWriter csv;
  auto record = [&](int step) {
    csv.row(step, "A", expectation(state, lifted));
    for (int q = 0; q < n; ++q)
      csv.row(step, "z" + std::to_string(q + 1),
              expectation(state, PauliString::single(n + 1, q + 1, Pauli::Z)));
  };
  record(0);
  for (int s = 1; s <= config.steps; ++s) {
    apply_circuit(state, block);
    record(s);
  }
  return csv;
}

CsvWriter run_pump(const ExperimentConfig& config, const RunOptions& options) {
  const PauliString stab = parse_stabilizer(config);
  const int n = stab.num_qubits();
  const int flip = resolve_flip(config, stab);
  const Circuit block =
      maybe_refocus(dissipative_block(stab, config.theta, flip), options);
  maybe_dump(block, options);

  DensityMatrix rho = DensityMatrix::from_state(
      StateVector::basis_state(n, initial_bits(config, n, '1')));

  CsvWriter csv;
  auto record = [&](int step) {
    const double a = expectation(rho, stab);
    csv.row(step, "A", a);
    csv.row(step, "plus_weight", (1.0 + a) / 2.0);
  };
  record(0);
  for (int s = 1; s <= config.steps; ++s) {
    rho = apply_block_to_system(block, rho);
    record(s);
  }
  return csv;
}

CsvWriter run_cooling(const ExperimentConfig& config, const CodeModel& model,
                      char fallback_bit) {
  DensityMatrix rho0 = DensityMatrix::from_state(StateVector::basis_state(
      model.num_system_qubits,
      initial_bits(config, model.num_system_qubits, fallback_bit)));
  auto [rho, trace] = cool_to_ground(model, rho0, config.theta, config.sweeps);

  CsvWriter csv;
  for (size_t step = 0; step < trace.expectations.size(); ++step)
    for (size_t k = 0; k < model.stabilizers.size(); ++k)
      csv.row(static_cast<long long>(step), model.stabilizers[k].name,
              trace.expectations[step][k]);
  csv.row(static_cast<long long>(trace.expectations.size()) - 1,
          "ground_space_weight", ground_space_weight(rho, model));
  return csv;
}

CsvWriter run_logical_demo(const ExperimentConfig& config) {
  const CodeModel model = color_code_seven();
  const DensityMatrix zero = logical_prepare_zero(model, config.theta);

  CsvWriter csv;
  auto record = [&](int step, const DensityMatrix& rho) {
    csv.row(step, "Zbar", expectation(rho, *model.logical_z));
    csv.row(step, "Xbar", expectation(rho, *model.logical_x));
    const std::vector<double> expect = syndrome(rho, model);
    for (size_t k = 0; k < model.stabilizers.size(); ++k)
      csv.row(step, model.stabilizers[k].name, expect[k]);
  };
  record(0, zero);  // |0L>

  DensityMatrix one = zero;
  logical_gate(one, model, LogicalGate::X);
  record(1, one);  // X |0L> = |1L>

  DensityMatrix plus = zero;
  logical_gate(plus, model, LogicalGate::H);
  record(2, plus);  // H |0L> = |+L>

  DensityMatrix phased = zero;
  logical_gate(phased, model, LogicalGate::K);
  logical_gate(phased, model, LogicalGate::K);
  record(3, phased);  // K^2 |0L> acts as Z on the code space
  return csv;
}

CsvWriter run_qnd_measure(const ExperimentConfig& config,
                          const RunOptions& options) {
  const PauliString stab = parse_stabilizer(config);
  const int n = stab.num_qubits();
  maybe_dump(qnd_readout(stab), options);

  const std::string bits = "0" + initial_bits(config, n, '0');
  std::mt19937_64 rng(derive_seed(config.seed, 0));
  long long plus = 0, agreements = 0;
  double mean_outcome = 0.0;
  const int trials = std::max(1, config.trajectories);
  for (int t = 0; t < trials; ++t) {
    StateVector state = StateVector::basis_state(n + 1, bits);
    const int first = qnd_measure(state, stab, rng);
    const int second = qnd_measure(state, stab, rng);
    if (first == 1) ++plus;
    if (first == second) ++agreements;
    mean_outcome += first;
  }
  CsvWriter csv;
  csv.row(0, "p_plus", static_cast<double>(plus) / trials);
  csv.row(0, "repeat_agreement", static_cast<double>(agreements) / trials);
  csv.row(0, "mean_outcome", mean_outcome / trials);
  return csv;
}

CsvWriter run_noise_mc(const ExperimentConfig& config) {
  PumpMcConfig mc;
  mc.steps = config.steps;
  mc.trajectories = config.trajectories;
  mc.seed = config.seed;
  mc.workers = config.workers;
  NoiseModel model;
  model.mean_shift = config.noise_mean_shift;
  model.std_dev = config.noise_std_dev;
  model.noisy_ms = config.noisy_ms;
  const RunRecord record = repeated_pumping_mc(mc, model);
  CsvWriter csv;
  csv.body = run_record_csv(record);
  return csv;
}

CsvWriter run_trotter_vs_ode(const ExperimentConfig& config,
                             const RunOptions& options) {
  const PauliString stab = parse_stabilizer(config);
  const int n = stab.num_qubits();
  const int flip = resolve_flip(config, stab);

  CodeModel model;
  model.name = "single-stabilizer";
  model.num_system_qubits = n;
  StabilizerSpec sp;
  sp.name = "A";
  sp.string = stab;
  sp.flip = induced_flip_operator(stab, flip);
  model.stabilizers.push_back(sp);
  model.validate();
  maybe_dump(dissipative_block(stab, config.theta, flip), options);

  const double gamma = config.theta * config.theta / config.tau;
  const MasterEquation eq = pump_master_equation(model, gamma);
  const TrotterRealizations builders = pump_trotter_realizations(model, gamma);

  const DensityMatrix rho0 = DensityMatrix::from_state(
      StateVector::basis_state(n, initial_bits(config, n, '1')));

  CsvWriter csv;
  DensityMatrix digital = rho0;
  for (int s = 1; s <= config.steps; ++s) {
    digital = trotter_step(digital, eq, config.tau, builders);
    const DensityMatrix ode = integrate_master_equation(
        rho0, eq, s * config.tau, config.tau / 10.0);
    csv.row(s, "trace_distance", trace_distance(digital, ode));
    csv.row(s, "A_digital", expectation(digital, stab));
    csv.row(s, "A_ode", expectation(ode, stab));
  }
  return csv;
}

}  // namespace

int run(const ExperimentConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  try {
    int status = 0;
    if (config.experiment == "verify-identities") {
      status = run_verify_identities(config, options);
    } else {
      CsvWriter csv;
      if (config.experiment == "coherent-evolve") {
        csv = run_coherent_evolve(config, options);
      } else if (config.experiment == "pump") {
        csv = run_pump(config, options);
      } else if (config.experiment == "cool-toric") {
        const CodeModel model = toric_two_plaquette();
        write_file(config.out + "/model.json", model_to_json(model));
        csv = run_cooling(config, model, '0');
      } else if (config.experiment == "cool-colorcode") {
        const CodeModel model = color_code_seven();
        write_file(config.out + "/model.json", model_to_json(model));
        csv = run_cooling(config, model, '0');
      } else if (config.experiment == "logical-demo") {
        csv = run_logical_demo(config);
      } else if (config.experiment == "qnd-measure") {
        csv = run_qnd_measure(config, options);
      } else if (config.experiment == "noise-mc") {
        csv = run_noise_mc(config);
      } else if (config.experiment == "trotter-vs-ode") {
        csv = run_trotter_vs_ode(config, options);
      } else {
        throw std::invalid_argument("unknown experiment '" + config.experiment +
                                    "'");
      }
      write_file(config.out + "/" + config.experiment + ".csv", csv.body);
    }

    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    nlohmann::ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["experiment"] = config.experiment;
    manifest["seed"] = config.seed;
    manifest["wall_time_ms"] = elapsed.count();
    manifest["config"] = nlohmann::ordered_json::parse(config.to_json());
    write_file(config.out + "/manifest.json", manifest.dump(2) + "\n");
    return status;
  } catch (const std::length_error& e) {
    std::fprintf(stderr, "{\"error\":\"capacity\",\"detail\":\"%s\"}\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "{\"error\":\"config\",\"detail\":\"%s\"}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":\"runtime\",\"detail\":\"%s\"}\n", e.what());
    return 1;
  }
}

}  // namespace ionsim
