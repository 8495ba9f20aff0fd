#include "ionsim/gates.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ionsim {

namespace {

constexpr Complex kI{0.0, 1.0};

// exp(A) by scaling-and-squaring with a Taylor series run to convergence.
Matrix expm_taylor(Matrix a) {
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    a /= 2.0;
    norm /= 2.0;
    ++squarings;
  }
  const long long dim = a.rows();
  Matrix result = Matrix::Identity(dim, dim);
  Matrix term = Matrix::Identity(dim, dim);
  for (int k = 1; k <= 40; ++k) {
    term = term * a / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Pauli axis_pauli(char axis) {
  switch (axis) {
    case 'x': return Pauli::X;
    case 'y': return Pauli::Y;
    case 'z': return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("unknown rotation axis '") +
                                  axis + "'");
  }
}

}  // namespace

Matrix ms_matrix(double theta, double phi, int num_ions) {
  if (num_ions < 2)
    throw std::invalid_argument("ms_matrix: need at least 2 ions");
  if (num_ions > 10)
    throw std::invalid_argument("ms_matrix: dense construction capped at 10 ions");
  const long long dim = 1LL << num_ions;
  Matrix s = Matrix::Zero(dim, dim);
  for (int q = 0; q < num_ions; ++q) {
    s += std::cos(phi) *
             PauliString::single(num_ions, q, Pauli::X).matrix() +
         std::sin(phi) * PauliString::single(num_ions, q, Pauli::Y).matrix();
  }
  Matrix h = (theta / 4.0) * (s * s);
  return expm_taylor(-kI * h);
}

Matrix ms_unitary(double theta, double phi, const std::vector<int>& targets,
                  int num_qubits) {
  if (targets.size() < 2)
    throw std::invalid_argument("ms_unitary: need at least 2 target ions");
  return embed(ms_matrix(theta, phi, static_cast<int>(targets.size())),
               targets, num_qubits);
}

GateOp ms_gate(double theta, double phi, std::vector<int> targets) {
  if (targets.size() < 2)
    throw std::invalid_argument("ms_gate: need at least 2 target ions");
  GateOp op;
  op.kind = GateOp::Kind::MS;
  op.targets = std::move(targets);
  op.theta = theta;
  op.phi = phi;
  return op;
}

Matrix matrix_exp_oracle(const Matrix& h) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("matrix_exp_oracle: matrix not square");
  if (h.rows() > 1024)
    throw std::invalid_argument("matrix_exp_oracle: dimension capped at 1024");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("matrix_exp_oracle: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  Vector phases(h.rows());
  for (long long i = 0; i < h.rows(); ++i)
    phases[i] = std::exp(-kI * es.eigenvalues()[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

GateOp local_rotation(char axis, double angle, int qubit) {
  axis_pauli(axis);
  GateOp op;
  op.kind = GateOp::Kind::LocalRot;
  op.targets = {qubit};
  op.theta = angle;
  op.axis = axis;
  return op;
}

Matrix local_rotation_matrix(char axis, double angle) {
  const Matrix& sigma = pauli_matrix(axis_pauli(axis));
  return std::cos(angle / 2.0) * Matrix::Identity(2, 2) -
         kI * std::sin(angle / 2.0) * sigma;
}

GateOp correcting_gate(int table_row, double theta, int flip_qubit) {
  if (table_row < 0 || table_row > 3)
    throw std::invalid_argument("correcting_gate: unknown table row");
  if (flip_qubit == 0)
    throw std::invalid_argument("correcting_gate: flip qubit must differ from the ancilla");
  GateOp op;
  op.kind = GateOp::Kind::Controlled;
  op.targets = {0, flip_qubit};
  op.theta = theta;
  op.table_row = table_row;
  return op;
}

Matrix correcting_gate_matrix(int table_row, double theta) {
  const Matrix id = Matrix::Identity(2, 2);
  auto rot = [&](const Matrix& sigma, double angle) -> Matrix {
    // exp(i angle sigma)
    return std::cos(angle) * id + kI * std::sin(angle) * sigma;
  };
  Matrix inert, active, branch;  // ancilla projectors and target rotation
  switch (table_row) {
    case 1:  // y-basis control, active on |y+>
    case 3: {
      Matrix yplus(2, 1), yminus(2, 1);
      yplus << 1.0 / std::sqrt(2.0), kI / std::sqrt(2.0);
      yminus << 1.0 / std::sqrt(2.0), -kI / std::sqrt(2.0);
      Matrix pp = yplus * yplus.adjoint();
      Matrix pm = yminus * yminus.adjoint();
      inert = table_row == 1 ? pm : pp;
      active = table_row == 1 ? pp : pm;
      branch = rot(pauli_matrix(Pauli::Z), -theta);
      break;
    }
    case 2: {
      inert = (id + pauli_matrix(Pauli::Z)) / 2.0;   // |1><1| is bit value 1...
      active = (id - pauli_matrix(Pauli::Z)) / 2.0;
      // row n = 2 mod 4: inert branch is |1>, active is |0>.
      std::swap(inert, active);
      branch = rot(pauli_matrix(Pauli::Y), -theta);
      break;
    }
    case 0: {
      inert = (id + pauli_matrix(Pauli::Z)) / 2.0;   // |0><0|
      active = (id - pauli_matrix(Pauli::Z)) / 2.0;  // |1><1|
      branch = rot(pauli_matrix(Pauli::Y), theta);
      break;
    }
    default:
      throw std::invalid_argument("correcting_gate_matrix: unknown table row");
  }
  // Control qubit is bit 0 of the 4x4 index, target is bit 1.
  Matrix out = Matrix::Zero(4, 4);
  for (int cr = 0; cr < 2; ++cr)
    for (int cc = 0; cc < 2; ++cc)
      for (int tr = 0; tr < 2; ++tr)
        for (int tc = 0; tc < 2; ++tc)
          out(cr + 2 * tr, cc + 2 * tc) =
              inert(cr, cc) * id(tr, tc) + active(cr, cc) * branch(tr, tc);
  return out;
}

GateOp reset_gate(int qubit) {
  GateOp op;
  op.kind = GateOp::Kind::Reset;
  op.targets = {qubit};
  return op;
}

Circuit backward_ms_as_forward(double theta, double phi, int num_ions) {
  if (num_ions < 2)
    throw std::invalid_argument("backward_ms_as_forward: need at least 2 ions");
  Circuit c;
  c.num_qubits = num_ions;
  c.metadata = "U_MS(-theta, phi) via forward gates";
  std::vector<int> all(static_cast<size_t>(num_ions));
  for (int q = 0; q < num_ions; ++q) all[static_cast<size_t>(q)] = q;
  c.ops.push_back(ms_gate(M_PI - theta, phi, all));
  if (num_ions % 2 == 0) {
    // Even ion count: append a pi rotation about the MS axis on every ion,
    // cos(phi) sigma_x + sin(phi) sigma_y, written with z-conjugated x flips.
    for (int q = 0; q < num_ions; ++q) {
      if (std::sin(phi) != 0.0) c.ops.push_back(local_rotation('z', -phi, q));
      c.ops.push_back(local_rotation('x', M_PI, q));
      if (std::sin(phi) != 0.0) c.ops.push_back(local_rotation('z', phi, q));
    }
  }
  return c;
}

Matrix gate_matrix(const GateOp& op) {
  switch (op.kind) {
    case GateOp::Kind::MS:
      return ms_matrix(op.theta, op.phi, static_cast<int>(op.targets.size()));
    case GateOp::Kind::LocalRot:
      return local_rotation_matrix(op.axis, op.theta);
    case GateOp::Kind::Controlled:
      return correcting_gate_matrix(op.table_row, op.theta);
    case GateOp::Kind::Reset:
      throw std::domain_error("gate_matrix: reset has no unitary matrix");
  }
  throw std::logic_error("gate_matrix: unreachable");
}

}  // namespace ionsim
