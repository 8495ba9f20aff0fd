#include "ionsim/circuits.hpp"

#include "ionsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace ionsim {

namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<int> all_ions(int num_ions) {
  std::vector<int> v(static_cast<size_t>(num_ions));
  for (int q = 0; q < num_ions; ++q) v[static_cast<size_t>(q)] = q;
  return v;
}

void append(Circuit& c, const std::vector<GateOp>& ops) {
  c.ops.insert(c.ops.end(), ops.begin(), ops.end());
}

// Ancilla rotation completing exp(i phi sigma^z_0 A) for a weight-n
// stabilizer, keyed by n mod 4. One table per MS axis.
GateOp ancilla_rotation(int row, double phi, bool y_axis, int ancilla) {
  if (!y_axis) {
    switch (row) {
      case 1: return local_rotation('y', 2.0 * phi, ancilla);
      case 2: return local_rotation('z', 2.0 * phi, ancilla);
      case 3: return local_rotation('y', -2.0 * phi, ancilla);
      case 0: return local_rotation('z', -2.0 * phi, ancilla);
    }
  } else {
    switch (row) {
      case 1: return local_rotation('x', -2.0 * phi, ancilla);
      case 2: return local_rotation('z', 2.0 * phi, ancilla);
      case 3: return local_rotation('x', 2.0 * phi, ancilla);
      case 0: return local_rotation('z', -2.0 * phi, ancilla);
    }
  }
  throw std::logic_error("ancilla_rotation: unreachable");
}

// Local change of basis L with L sigma^x L^dag = sigma^f, as the pair
// (first op = L^dag, last op = L) wrapping an x-type core.
struct BasisWrap {
  std::vector<GateOp> before;  // L^dag rotations
  std::vector<GateOp> after;   // L rotations
};

BasisWrap basis_wrap_to_x(const PauliString& stab, int shift) {
  BasisWrap w;
  for (int q : stab.support()) {
    switch (stab.factor(q)) {
      case Pauli::X:
        break;
      case Pauli::Y:
        w.before.push_back(local_rotation('z', -M_PI / 2.0, q + shift));
        w.after.push_back(local_rotation('z', M_PI / 2.0, q + shift));
        break;
      case Pauli::Z:
        w.before.push_back(local_rotation('y', M_PI / 2.0, q + shift));
        w.after.push_back(local_rotation('y', -M_PI / 2.0, q + shift));
        break;
      default:
        throw std::logic_error("basis_wrap_to_x: identity factor in support");
    }
  }
  return w;
}

void check_stabilizer(const PauliString& stab, const char* what,
                      int min_weight = 1) {
  if (!stab.hermitian())
    throw std::domain_error(std::string(what) + ": stabilizer phase must be +-1");
  if (stab.weight() < min_weight)
    throw std::invalid_argument(std::string(what) + ": stabilizer weight too small");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

Matrix circuit_unitary(const Circuit& c) {
  const long long dim = 1LL << c.num_qubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const GateOp& op : c.ops) {
    if (op.kind == GateOp::Kind::Reset)
      throw std::domain_error("circuit_unitary: circuit contains a reset");
    u = embed(gate_matrix(op), op.targets, c.num_qubits) * u;
  }
  return u;
}

void apply_circuit(StateVector& state, const Circuit& c, std::mt19937_64* rng) {
  if (state.num_qubits() != c.num_qubits)
    throw std::invalid_argument("apply_circuit: register size mismatch");
  for (const GateOp& op : c.ops) {
    if (op.kind == GateOp::Kind::Reset) {
      if (rng == nullptr)
        throw std::invalid_argument(
            "apply_circuit: reset on a pure state needs a random generator");
      reset_qubit(state, op.targets.at(0), *rng);
    } else {
      apply_unitary(state, gate_matrix(op), op.targets);
    }
  }
}

void apply_circuit(DensityMatrix& rho, const Circuit& c) {
  if (rho.num_qubits() != c.num_qubits)
    throw std::invalid_argument("apply_circuit: register size mismatch");
  for (const GateOp& op : c.ops) {
    if (op.kind == GateOp::Kind::Reset) {
      Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
      k0(0, 0) = 1.0;
      k1(0, 1) = 1.0;
      Matrix m0 = embed(k0, op.targets, rho.num_qubits());
      Matrix m1 = embed(k1, op.targets, rho.num_qubits());
      rho.elements() = m0 * rho.elements() * m0.adjoint() +
                       m1 * rho.elements() * m1.adjoint();
    } else {
      apply_unitary(rho, gate_matrix(op), op.targets);
    }
  }
}

DensityMatrix apply_block_to_system(const Circuit& c,
                                    const DensityMatrix& rho_sys) {
  const int n = rho_sys.num_qubits();
  if (c.num_qubits != n + 1)
    throw std::invalid_argument(
        "apply_block_to_system: block must have one ancilla above the system");
  const long long dim = rho_sys.dim();
  Matrix full = Matrix::Zero(2 * dim, 2 * dim);
  for (long long r = 0; r < dim; ++r)
    for (long long col = 0; col < dim; ++col)
      full(2 * r, 2 * col) = rho_sys.elements()(r, col);
  DensityMatrix lifted(n + 1, std::move(full));
  apply_circuit(lifted, c);
  std::vector<int> keep;
  for (int q = 1; q <= n; ++q) keep.push_back(q);
  return partial_trace(lifted, keep);
}

double phase_overlap(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("phase_overlap: dimension mismatch");
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

bool equivalent_up_to_phase(const Matrix& u, const Matrix& v, double tol) {
  return 1.0 - phase_overlap(u, v) <= tol;
}

double max_elementwise_distance(const Matrix& u, const Matrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("max_elementwise_distance: dimension mismatch");
  return (u - v).cwiseAbs().maxCoeff();
}

Circuit coherent_block(const PauliString& stab, double phi) {
  check_stabilizer(stab, "coherent_block");
  if (stab.phase() == Complex(-1.0, 0.0)) phi = -phi;

  const int n = stab.weight();
  const int row = n % 4;
  bool all_y = true;
  for (int q : stab.support())
    if (stab.factor(q) != Pauli::Y) all_y = false;

  Circuit c;
  c.num_qubits = stab.num_qubits() + 1;
  c.metadata = "coherent block exp(i phi A)";
  std::vector<int> targets = {0};
  for (int q : stab.support()) targets.push_back(q + 1);

  const double phi_ms = all_y ? M_PI / 2.0 : 0.0;
  BasisWrap wrap;
  if (!all_y) wrap = basis_wrap_to_x(stab, 1);

  append(c, wrap.before);
  c.ops.push_back(ms_gate(M_PI / 2.0, phi_ms, targets));
  c.ops.push_back(ancilla_rotation(row, phi, all_y, 0));
  c.ops.push_back(ms_gate(-M_PI / 2.0, phi_ms, targets));
  append(c, wrap.after);
  return c;
}

Circuit coherent_block_ancilla_free(const PauliString& stab, double phi) {
  check_stabilizer(stab, "coherent_block_ancilla_free", 2);
  for (int q : stab.support())
    if (stab.factor(q) != Pauli::X)
      throw std::invalid_argument(
          "coherent_block_ancilla_free: only x-type stabilizers are supported");
  if (stab.phase() == Complex(-1.0, 0.0)) phi = -phi;

  const std::vector<int> supp = stab.support();
  const int a = supp.front();
  const int row = (stab.weight() - 1) % 4;

  Circuit c;
  c.num_qubits = stab.num_qubits();
  c.metadata = "ancilla-free coherent block exp(i phi A)";
  c.ops.push_back(local_rotation('y', -M_PI / 2.0, a));
  c.ops.push_back(ms_gate(M_PI / 2.0, 0.0, supp));
  c.ops.push_back(ancilla_rotation(row, phi, false, a));
  c.ops.push_back(ms_gate(-M_PI / 2.0, 0.0, supp));
  c.ops.push_back(local_rotation('y', M_PI / 2.0, a));
  return c;
}

PauliString induced_flip_operator(const PauliString& stab, int flip_qubit) {
  if (stab.factor(flip_qubit) == Pauli::I)
    throw std::invalid_argument(
        "induced_flip_operator: flip qubit outside the stabilizer support");
  Pauli flip =
      stab.factor(flip_qubit) == Pauli::Z ? Pauli::X : Pauli::Z;
  return PauliString::single(stab.num_qubits(), flip_qubit, flip);
}

Circuit dissipative_block(const PauliString& stab, double theta,
                          int flip_qubit) {
  check_stabilizer(stab, "dissipative_block");
  if (stab.factor(flip_qubit) == Pauli::I)
    throw std::invalid_argument(
        "dissipative_block: flip qubit outside the stabilizer support");

  const int row = stab.weight() % 4;
  Circuit c;
  c.num_qubits = stab.num_qubits() + 1;
  c.metadata = "dissipative block pumping A -> +1";
  std::vector<int> targets = {0};
  for (int q : stab.support()) targets.push_back(q + 1);

  // A negative stabilizer phase swaps the +-1 eigenspaces; conjugating the
  // whole block by an anticommuting flip on one support qubit swaps them back.
  bool negate = stab.phase() == Complex(-1.0, 0.0);
  const int q0 = stab.support().front();
  const char negate_axis = stab.factor(q0) == Pauli::Z ? 'x' : 'z';
  BasisWrap wrap = basis_wrap_to_x(stab, 1);

  if (negate) c.ops.push_back(local_rotation(negate_axis, -M_PI, q0 + 1));
  append(c, wrap.before);
  c.ops.push_back(ms_gate(M_PI / 2.0, 0.0, targets));
  c.ops.push_back(correcting_gate(row, theta, flip_qubit + 1));
  c.ops.push_back(ms_gate(-M_PI / 2.0, 0.0, targets));
  append(c, wrap.after);
  if (negate) c.ops.push_back(local_rotation(negate_axis, M_PI, q0 + 1));
  c.ops.push_back(reset_gate(0));
  return c;
}

Circuit qnd_readout(const PauliString& stab) {
  Circuit c = coherent_block(stab, M_PI / 4.0);
  c.metadata = "qnd readout block";
  c.ops.insert(c.ops.begin(), local_rotation('y', M_PI / 2.0, 0));
  return c;
}

int measure_ancilla_y(StateVector& state, std::mt19937_64& rng) {
  const long long dim = state.dim();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  double p_plus = 0.0;
  for (long long i = 0; i < dim; i += 2) {
    Complex c_plus =
        (state.amplitudes()[i] - kI * state.amplitudes()[i + 1]) * inv_sqrt2;
    p_plus += std::norm(c_plus);
  }
  const int outcome = uniform_unit(rng) < p_plus ? 1 : -1;
  const Complex sign = outcome == 1 ? kI : -kI;
  double norm_sq = 0.0;
  for (long long i = 0; i < dim; i += 2) {
    Complex c = (state.amplitudes()[i] -
                 static_cast<double>(outcome) * kI * state.amplitudes()[i + 1]) *
                inv_sqrt2;
    state.amplitudes()[i] = c * inv_sqrt2;
    state.amplitudes()[i + 1] = sign * c * inv_sqrt2;
    norm_sq += std::norm(c);
  }
  state.amplitudes() /= std::sqrt(norm_sq);
  return outcome;
}

int qnd_measure(StateVector& state, const PauliString& stab,
                std::mt19937_64& rng) {
  Circuit block = qnd_readout(stab);
  apply_circuit(state, block, &rng);
  const int y_outcome = measure_ancilla_y(state, rng);
  // The collapsed ancilla state is known, so rotate it back to |0>.
  apply_unitary(state,
                local_rotation_matrix('x', y_outcome * M_PI / 2.0), {0});
  return -y_outcome;
}

void reset_qubit(StateVector& state, int qubit, std::mt19937_64& rng) {
  if (qubit < 0 || qubit >= state.num_qubits())
    throw std::invalid_argument("reset_qubit: qubit out of range");
  const long long dim = state.dim();
  const long long bit = 1LL << qubit;
  double p_one = 0.0;
  for (long long i = 0; i < dim; ++i)
    if (i & bit) p_one += std::norm(state.amplitudes()[i]);
  const bool saw_one = uniform_unit(rng) < p_one;
  const double p = saw_one ? p_one : 1.0 - p_one;
  if (p <= 0.0) throw std::runtime_error("reset_qubit: impossible branch");
  const double scale = 1.0 / std::sqrt(p);
  for (long long i = 0; i < dim; ++i) {
    const bool one = (i & bit) != 0;
    if (saw_one) {
      state.amplitudes()[i & ~bit] =
          one ? scale * state.amplitudes()[i] : state.amplitudes()[i & ~bit];
      if (one) state.amplitudes()[i] = 0.0;
    } else if (one) {
      state.amplitudes()[i] = 0.0;
    }
  }
  if (!saw_one) state.amplitudes() *= scale;
}

Circuit refocused_ms_excluding(int excluded, double theta, double phi,
                               int num_ions) {
  if (excluded < 0 || excluded >= num_ions)
    throw std::invalid_argument("refocused_ms_excluding: ion out of range");
  if (num_ions < 3)
    throw std::invalid_argument(
        "refocused_ms_excluding: need at least 2 remaining ions");
  Circuit c;
  c.num_qubits = num_ions;
  c.metadata = "MS gate on all ions except one";
  const std::vector<int> all = all_ions(num_ions);
  c.ops.push_back(ms_gate(theta / 2.0, phi, all));
  c.ops.push_back(local_rotation('z', M_PI, excluded));
  c.ops.push_back(ms_gate(theta / 2.0, phi, all));
  c.ops.push_back(local_rotation('z', M_PI, excluded));
  return c;
}

Circuit star_ms(double theta, double phi, int num_ions) {
  if (num_ions < 3)
    throw std::invalid_argument("star_ms: need an ancilla plus at least 2 ions");
  Circuit c;
  c.num_qubits = num_ions;
  c.metadata = "product of ancilla-ion MS gates";
  c.ops.push_back(ms_gate(theta / 2.0, phi, all_ions(num_ions)));
  c.ops.push_back(local_rotation('z', M_PI, 0));
  append(c, backward_ms_as_forward(theta / 2.0, phi, num_ions).ops);
  c.ops.push_back(local_rotation('z', M_PI, 0));
  return c;
}

Circuit two_ion_ms_via_refocus(int i, double theta, double phi, int num_ions) {
  if (i <= 0 || i >= num_ions)
    throw std::invalid_argument("two_ion_ms_via_refocus: ion out of range");
  Circuit c;
  c.num_qubits = num_ions;
  c.metadata = "MS gate on ancilla and one ion";
  const std::vector<int> all = all_ions(num_ions);
  for (int half = 0; half < 2; ++half) {
    c.ops.push_back(ms_gate(theta / 4.0, phi, all));
    c.ops.push_back(local_rotation('z', M_PI, 0));
    c.ops.push_back(ms_gate(-theta / 4.0, phi, all));
    c.ops.push_back(local_rotation('z', M_PI, i));
  }
  return c;
}

namespace {

// Excluded-ion recursion: an MS gate on targets T realizes as two
// half-angle gates on T plus one more ion, wrapped in z flips of that ion.
void expand_subset_ms(std::vector<int> targets, double theta, double phi,
                      int num_qubits, std::vector<GateOp>& out) {
  if (static_cast<int>(targets.size()) == num_qubits) {
    out.push_back(ms_gate(theta, phi, targets));
    return;
  }
  std::vector<bool> in_set(static_cast<size_t>(num_qubits), false);
  for (int q : targets) in_set[static_cast<size_t>(q)] = true;
  int extra = -1;
  for (int q = 0; q < num_qubits; ++q)
    if (!in_set[static_cast<size_t>(q)]) extra = q;
  targets.push_back(extra);
  std::sort(targets.begin(), targets.end());
  expand_subset_ms(targets, theta / 2.0, phi, num_qubits, out);
  out.push_back(local_rotation('z', M_PI, extra));
  expand_subset_ms(targets, theta / 2.0, phi, num_qubits, out);
  out.push_back(local_rotation('z', M_PI, extra));
}

}  // namespace

Circuit expand_with_refocusing(const Circuit& c) {
  Circuit out;
  out.num_qubits = c.num_qubits;
  out.metadata = c.metadata;
  for (const GateOp& op : c.ops) {
    if (op.kind == GateOp::Kind::MS &&
        static_cast<int>(op.targets.size()) < c.num_qubits)
      expand_subset_ms(op.targets, op.theta, op.phi, c.num_qubits, out.ops);
    else
      out.ops.push_back(op);
  }
  return out;
}

Circuit decompose_correcting_gate(int table_row, double theta, int flip_qubit,
                                  int num_ions) {
  if (table_row < 0 || table_row > 3)
    throw std::invalid_argument("decompose_correcting_gate: unknown table row");
  if (flip_qubit <= 0 || flip_qubit >= num_ions)
    throw std::invalid_argument("decompose_correcting_gate: flip qubit out of range");

  // Row 0 core: a two-ion MS gate about the y axis, sandwiched by x
  // rotations turning sigma^y_0 into sigma^z_0, plus a closing y rotation
  // on the flip ion.
  auto row0 = [&](double t) {
    std::vector<GateOp> ops;
    ops.push_back(local_rotation('x', -M_PI / 2.0, 0));
    Circuit ms = two_ion_ms_via_refocus(flip_qubit, t, M_PI / 2.0, num_ions);
    ops.insert(ops.end(), ms.ops.begin(), ms.ops.end());
    ops.push_back(local_rotation('x', M_PI / 2.0, 0));
    ops.push_back(local_rotation('y', -t, flip_qubit));
    return ops;
  };
  // Row 2 swaps the control branches: conjugate by sigma^x_0, negate theta.
  auto row2 = [&](double t) {
    std::vector<GateOp> ops;
    ops.push_back(local_rotation('x', M_PI, 0));
    auto core = row0(-t);
    ops.insert(ops.end(), core.begin(), core.end());
    ops.push_back(local_rotation('x', M_PI, 0));
    return ops;
  };
  // Odd rows: rotate the control to the y basis and the target rotation
  // from sigma^y to sigma^z, both with x-axis quarter turns.
  auto to_y_basis = [&](std::vector<GateOp> core) {
    std::vector<GateOp> ops;
    ops.push_back(local_rotation('x', -M_PI / 2.0, 0));
    ops.push_back(local_rotation('x', -M_PI / 2.0, flip_qubit));
    ops.insert(ops.end(), core.begin(), core.end());
    ops.push_back(local_rotation('x', M_PI / 2.0, 0));
    ops.push_back(local_rotation('x', M_PI / 2.0, flip_qubit));
    return ops;
  };

  Circuit c;
  c.num_qubits = num_ions;
  c.metadata = "correcting gate from local rotations and MS gates";
  switch (table_row) {
    case 0: append(c, row0(theta)); break;
    case 2: append(c, row2(theta)); break;
    case 1: append(c, to_y_basis(row0(-theta))); break;
    case 3: append(c, to_y_basis(row2(theta))); break;
  }
  return c;
}

std::string print_circuit(const Circuit& c) {
  std::string out;
  for (const GateOp& op : c.ops) {
    switch (op.kind) {
      case GateOp::Kind::MS: {
        out += "MS(";
        for (size_t k = 0; k < op.targets.size(); ++k) {
          if (k) out += ",";
          out += std::to_string(op.targets[k]);
        }
        out += "; " + fmt(op.theta) + ", " + fmt(op.phi) + ")";
        break;
      }
      case GateOp::Kind::LocalRot:
        out += std::string("R(") + op.axis + ", " + fmt(op.theta) + ", " +
               std::to_string(op.targets.at(0)) + ")";
        break;
      case GateOp::Kind::Controlled:
        out += "C[" + std::to_string(op.table_row) + "](" + fmt(op.theta) +
               "; " + std::to_string(op.targets.at(0)) + ", " +
               std::to_string(op.targets.at(1)) + ")";
        break;
      case GateOp::Kind::Reset:
        out += "RESET(" + std::to_string(op.targets.at(0)) + ")";
        break;
    }
    out += "\n";
  }
  return out;
}

namespace {

std::string strip(std::string s) {
  const char* ws = " \t\r\n";
  size_t a = s.find_first_not_of(ws);
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(ws);
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(strip(item));
  return parts;
}

// Extracts the text between the first '(' and the final ')'.
std::string arguments_of(const std::string& line) {
  size_t open = line.find('(');
  size_t close = line.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    throw std::invalid_argument("parse_circuit: malformed line '" + line + "'");
  return line.substr(open + 1, close - open - 1);
}

double parse_double(const std::string& s) {
  size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size())
    throw std::invalid_argument("parse_circuit: bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size())
    throw std::invalid_argument("parse_circuit: bad integer '" + s + "'");
  return v;
}

}  // namespace

Circuit parse_circuit(const std::string& text, int num_qubits) {
  Circuit c;
  c.num_qubits = num_qubits;
  std::stringstream ss(text);
  std::string raw;
  while (std::getline(ss, raw)) {
    std::string line = strip(raw);
    if (line.empty()) continue;
    if (line.rfind("MS(", 0) == 0) {
      auto halves = split(arguments_of(line), ';');
      if (halves.size() != 2)
        throw std::invalid_argument("parse_circuit: malformed MS line");
      std::vector<int> targets;
      for (const auto& t : split(halves[0], ',')) targets.push_back(parse_int(t));
      auto angles = split(halves[1], ',');
      if (angles.size() != 2)
        throw std::invalid_argument("parse_circuit: MS needs theta and phi");
      c.ops.push_back(
          ms_gate(parse_double(angles[0]), parse_double(angles[1]), targets));
    } else if (line.rfind("R(", 0) == 0) {
      auto parts = split(arguments_of(line), ',');
      if (parts.size() != 3 || parts[0].size() != 1)
        throw std::invalid_argument("parse_circuit: malformed R line");
      c.ops.push_back(local_rotation(parts[0][0], parse_double(parts[1]),
                                     parse_int(parts[2])));
    } else if (line.rfind("C[", 0) == 0) {
      size_t close = line.find(']');
      if (close == std::string::npos)
        throw std::invalid_argument("parse_circuit: malformed C line");
      int row = parse_int(line.substr(2, close - 2));
      auto halves = split(arguments_of(line), ';');
      if (halves.size() != 2)
        throw std::invalid_argument("parse_circuit: malformed C line");
      auto qubits = split(halves[1], ',');
      if (qubits.size() != 2 || parse_int(qubits[0]) != 0)
        throw std::invalid_argument("parse_circuit: C control must be qubit 0");
      c.ops.push_back(
          correcting_gate(row, parse_double(halves[0]), parse_int(qubits[1])));
    } else if (line.rfind("RESET(", 0) == 0) {
      c.ops.push_back(reset_gate(parse_int(arguments_of(line))));
    } else {
      throw std::invalid_argument("parse_circuit: unknown op '" + line + "'");
    }
    for (int q : c.ops.back().targets)
      if (q < 0 || q >= num_qubits)
        throw std::invalid_argument("parse_circuit: target out of range");
  }
  return c;
}

}  // namespace ionsim
