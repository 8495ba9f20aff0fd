#include "ionsim/models.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace ionsim {

namespace {

// Builds a Pauli product from 1-based qubit labels, matching the figure
// labelling in the geometry tables.
PauliString from_labels(int num_qubits, const std::vector<int>& labels,
                        Pauli p) {
  PauliString s(num_qubits);
  for (int label : labels) s.set_factor(label - 1, p);
  return s;
}

StabilizerSpec spec(std::string name, PauliString string, PauliString flip,
                    double energy = 1.0) {
  StabilizerSpec out;
  out.name = std::move(name);
  out.string = std::move(string);
  out.flip = std::move(flip);
  out.energy_coefficient = energy;
  return out;
}

const Matrix& logical_gate_matrix(LogicalGate g) {
  static const Matrix h = [] {
    Matrix m(2, 2);
    m << 1, 1, 1, -1;
    return Matrix(m / std::sqrt(2.0));
  }();
  static const Matrix k = [] {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = Complex(0.0, 1.0);
    return m;
  }();
  switch (g) {
    case LogicalGate::X: return pauli_matrix(Pauli::X);
    case LogicalGate::Z: return pauli_matrix(Pauli::Z);
    case LogicalGate::H: return h;
    case LogicalGate::K: return k;
  }
  throw std::logic_error("logical_gate_matrix: unreachable");
}

void warn_if_outside_code_space(const std::vector<double>& expectations,
                                const CodeModel& model) {
  for (size_t k = 0; k < expectations.size(); ++k) {
    if (expectations[k] < 1.0 - 1e-8) {
      std::fprintf(stderr,
                   "warning: logical gate applied outside the code space "
                   "(<%s> = %.6f on model %s)\n",
                   model.stabilizers[k].name.c_str(), expectations[k],
                   model.name.c_str());
      return;
    }
  }
}

}  // namespace

void CodeModel::validate() const {
  for (const StabilizerSpec& s : stabilizers) {
    if (s.string.num_qubits() != num_system_qubits ||
        s.flip.num_qubits() != num_system_qubits)
      throw std::invalid_argument("CodeModel: register size mismatch");
    if (!s.string.hermitian() || !s.flip.hermitian())
      throw std::domain_error("CodeModel: stabilizers must be Hermitian");
    if (s.string.commutes_with(s.flip))
      throw std::domain_error("CodeModel: flip must anticommute with " + s.name);
  }
  for (size_t a = 0; a < stabilizers.size(); ++a)
    for (size_t b = a + 1; b < stabilizers.size(); ++b)
      if (!stabilizers[a].string.commutes_with(stabilizers[b].string))
        throw std::domain_error("CodeModel: stabilizers " + stabilizers[a].name +
                                " and " + stabilizers[b].name + " anticommute");
  for (const auto& logical : {logical_x, logical_z}) {
    if (!logical) continue;
    for (const StabilizerSpec& s : stabilizers)
      if (!logical->commutes_with(s.string))
        throw std::domain_error(
            "CodeModel: logical operator anticommutes with " + s.name);
  }
}

CodeModel toric_two_plaquette() {
  const int n = 7;
  CodeModel m;
  m.name = "toric-two-plaquette";
  m.num_system_qubits = n;
  auto x1 = [&](int q) { return from_labels(n, {q}, Pauli::X); };
  auto z1 = [&](int q) { return from_labels(n, {q}, Pauli::Z); };
  m.stabilizers = {
      spec("BpL", from_labels(n, {1, 2, 3, 4}, Pauli::Z), x1(4)),
      spec("BpR", from_labels(n, {4, 5, 6, 7}, Pauli::Z), x1(6)),
      spec("AvTL", from_labels(n, {1, 2}, Pauli::X), z1(1)),
      spec("AvBL", from_labels(n, {2, 3}, Pauli::X), z1(3)),
      spec("AvTR", from_labels(n, {5, 6}, Pauli::X), z1(5)),
      spec("AvTM", from_labels(n, {1, 4, 5}, Pauli::X), z1(4)),
      spec("AvBM", from_labels(n, {3, 4, 7}, Pauli::X), z1(7)),
      spec("AvBR", from_labels(n, {6, 7}, Pauli::X), z1(6)),
  };
  m.validate();
  return m;
}

CodeModel color_code_seven() {
  const int n = 7;
  CodeModel m;
  m.name = "color-code-seven";
  m.num_system_qubits = n;
  const std::vector<int> p1 = {1, 2, 3, 4};
  const std::vector<int> p2 = {3, 4, 5, 6};
  const std::vector<int> p3 = {1, 3, 5, 7};
  auto x1 = [&](int q) { return from_labels(n, {q}, Pauli::X); };
  auto z1 = [&](int q) { return from_labels(n, {q}, Pauli::Z); };
  m.stabilizers = {
      spec("B1", from_labels(n, p1, Pauli::Z), x1(2)),
      spec("B2", from_labels(n, p2, Pauli::Z), x1(6)),
      spec("B3", from_labels(n, p3, Pauli::Z), x1(7)),
      spec("A1", from_labels(n, p1, Pauli::X), z1(2)),
      spec("A2", from_labels(n, p2, Pauli::X), z1(6)),
      spec("A3", from_labels(n, p3, Pauli::X), z1(7)),
  };
  m.logical_x = from_labels(n, {1, 2, 3, 4, 5, 6, 7}, Pauli::X);
  m.logical_z = from_labels(n, {1, 2, 3, 4, 5, 6, 7}, Pauli::Z);
  m.validate();
  return m;
}

std::pair<DensityMatrix, CoolingTrace> cool_to_ground(const CodeModel& model,
                                                      const DensityMatrix& rho0,
                                                      double theta, int sweeps) {
  if (sweeps < 1)
    throw std::invalid_argument("cool_to_ground: need at least one sweep");
  DensityMatrix rho = rho0;
  CoolingTrace trace;
  trace.expectations.push_back(syndrome(rho, model));
  for (int s = 0; s < sweeps; ++s) {
    for (const StabilizerSpec& sp : model.stabilizers) {
      rho = apply_channel(rho,
                          stabilizer_pump_channel(sp.string, sp.flip, theta));
      trace.expectations.push_back(syndrome(rho, model));
    }
  }
  return {std::move(rho), std::move(trace)};
}

std::vector<double> syndrome(const StateVector& state, const CodeModel& model) {
  std::vector<double> out;
  for (const StabilizerSpec& s : model.stabilizers)
    out.push_back(expectation(state, s.string));
  return out;
}

std::vector<double> syndrome(const DensityMatrix& rho, const CodeModel& model) {
  std::vector<double> out;
  for (const StabilizerSpec& s : model.stabilizers)
    out.push_back(expectation(rho, s.string));
  return out;
}

DensityMatrix logical_prepare_zero(const CodeModel& model, double theta) {
  if (!model.logical_z)
    throw std::invalid_argument("logical_prepare_zero: model has no logical operators");
  DensityMatrix rho(model.num_system_qubits);
  return cool_to_ground(model, rho, theta, 1).first;
}

void logical_gate(StateVector& state, const CodeModel& model, LogicalGate g) {
  warn_if_outside_code_space(syndrome(state, model), model);
  const Matrix& u = logical_gate_matrix(g);
  for (int q = 0; q < model.num_system_qubits; ++q) apply_unitary(state, u, {q});
}

void logical_gate(DensityMatrix& rho, const CodeModel& model, LogicalGate g) {
  warn_if_outside_code_space(syndrome(rho, model), model);
  const Matrix& u = logical_gate_matrix(g);
  for (int q = 0; q < model.num_system_qubits; ++q) apply_unitary(rho, u, {q});
}

int independent_stabilizer_count(const CodeModel& model) {
  std::vector<std::uint64_t> rows;  // x bits in the low word half, z above
  for (const StabilizerSpec& s : model.stabilizers)
    rows.push_back(s.string.x_mask() |
                   (s.string.z_mask() << model.num_system_qubits));
  int rank = 0;
  for (int bit = 2 * model.num_system_qubits - 1; bit >= 0; --bit) {
    size_t pivot = rows.size();
    for (size_t r = static_cast<size_t>(rank); r < rows.size(); ++r)
      if (rows[r] >> bit & 1) {
        pivot = r;
        break;
      }
    if (pivot == rows.size()) continue;
    std::swap(rows[static_cast<size_t>(rank)], rows[pivot]);
    for (size_t r = 0; r < rows.size(); ++r)
      if (r != static_cast<size_t>(rank) && (rows[r] >> bit & 1))
        rows[r] ^= rows[static_cast<size_t>(rank)];
    ++rank;
  }
  return rank;
}

double ground_space_weight(const DensityMatrix& rho, const CodeModel& model) {
  const long long dim = rho.dim();
  Matrix proj = Matrix::Identity(dim, dim);
  for (const StabilizerSpec& s : model.stabilizers)
    proj = proj * (Matrix::Identity(dim, dim) + s.string.matrix()) / 2.0;
  return (proj * rho.elements()).trace().real();
}

Matrix pump_jump_operator(const StabilizerSpec& spec) {
  const long long dim = 1LL << spec.string.num_qubits();
  return 0.5 * spec.flip.matrix() *
         (Matrix::Identity(dim, dim) - spec.string.matrix());
}

MasterEquation pump_master_equation(const CodeModel& model, double gamma) {
  MasterEquation eq;
  for (const StabilizerSpec& s : model.stabilizers) {
    HamiltonianTerm h;
    h.coefficient = -s.energy_coefficient;
    h.string = s.string;
    eq.hamiltonian_terms.push_back(std::move(h));
    eq.lindblad_terms.push_back({pump_jump_operator(s), gamma});
  }
  return eq;
}

TrotterRealizations pump_trotter_realizations(const CodeModel& model,
                                              double gamma) {
  TrotterRealizations r;
  for (const StabilizerSpec& s : model.stabilizers) {
    r.coherent.push_back([s](DensityMatrix& rho, double tau) {
      rho = apply_block_to_system(
          coherent_block(s.string, s.energy_coefficient * tau), rho);
    });
    const int flip_qubit = s.flip.support().front();
    r.dissipative.push_back([s, flip_qubit, gamma](DensityMatrix& rho,
                                                   double tau) {
      rho = apply_block_to_system(
          dissipative_block(s.string, std::sqrt(gamma * tau), flip_qubit), rho);
    });
  }
  return r;
}

std::string model_to_json(const CodeModel& model) {
  nlohmann::ordered_json j;
  j["name"] = model.name;
  j["num_system_qubits"] = model.num_system_qubits;
  j["stabilizers"] = nlohmann::ordered_json::array();
  for (const StabilizerSpec& s : model.stabilizers) {
    j["stabilizers"].push_back({{"name", s.name},
                                {"string", s.string.to_string()},
                                {"flip", s.flip.to_string()},
                                {"energy_coefficient", s.energy_coefficient}});
  }
  if (model.logical_x) j["logical_x"] = model.logical_x->to_string();
  if (model.logical_z) j["logical_z"] = model.logical_z->to_string();
  return j.dump(2);
}

}  // namespace ionsim
