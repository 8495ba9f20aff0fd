#include "ionsim/channels.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ionsim {

namespace {

constexpr Complex kI{0.0, 1.0};

long long channel_dim(const KrausChannel& ch) { return 1LL << ch.num_qubits; }

}  // namespace

double KrausChannel::completeness_defect() const {
  const long long dim = channel_dim(*this);
  Matrix sum = Matrix::Zero(dim, dim);
  for (const Matrix& e : elements) {
    if (e.rows() != dim || e.cols() != dim)
      throw std::invalid_argument("KrausChannel: element has wrong dimension");
    sum += e.adjoint() * e;
  }
  return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

void KrausChannel::validate(double tol) const {
  if (completeness_defect() > tol)
    throw std::domain_error("KrausChannel: completeness violated");
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  if (rho.num_qubits() != ch.num_qubits)
    throw std::invalid_argument("apply_channel: register size mismatch");
  ch.validate();
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const Matrix& e : ch.elements) out += e * rho.elements() * e.adjoint();
  return DensityMatrix(rho.num_qubits(), std::move(out));
}

KrausChannel stabilizer_pump_channel(const PauliString& stabilizer,
                                     const PauliString& flip, double theta) {
  if (stabilizer.num_qubits() != flip.num_qubits())
    throw std::invalid_argument("stabilizer_pump_channel: register size mismatch");
  if (!stabilizer.hermitian() || !flip.hermitian())
    throw std::domain_error("stabilizer_pump_channel: operators must be Hermitian");
  if (stabilizer.commutes_with(flip))
    throw std::domain_error(
        "stabilizer_pump_channel: flip commutes with the stabilizer and cannot pump");
  const long long dim = 1LL << stabilizer.num_qubits();
  const Matrix a = stabilizer.matrix();
  const Matrix id = Matrix::Identity(dim, dim);
  const Matrix p_plus = (id + a) / 2.0;
  const Matrix p_minus = (id - a) / 2.0;

  KrausChannel ch;
  ch.num_qubits = stabilizer.num_qubits();
  ch.elements.push_back(p_plus + std::cos(theta) * p_minus);
  ch.elements.push_back(std::sin(theta) * flip.matrix() * p_minus);
  ch.validate();
  return ch;
}

DensityMatrix optical_pump_reset(const DensityMatrix& rho, int qubit) {
  if (qubit < 0 || qubit >= rho.num_qubits())
    throw std::invalid_argument("optical_pump_reset: qubit out of range");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k1(0, 1) = 1.0;
  const Matrix m0 = embed(k0, {qubit}, rho.num_qubits());
  const Matrix m1 = embed(k1, {qubit}, rho.num_qubits());
  return DensityMatrix(rho.num_qubits(),
                       m0 * rho.elements() * m0.adjoint() +
                           m1 * rho.elements() * m1.adjoint());
}

Matrix lindblad_rhs(const DensityMatrix& rho, const MasterEquation& eq) {
  const long long dim = rho.dim();
  Matrix out = Matrix::Zero(dim, dim);
  if (!eq.hamiltonian_terms.empty()) {
    Matrix h = Matrix::Zero(dim, dim);
    for (const HamiltonianTerm& term : eq.hamiltonian_terms) {
      if (term.string.num_qubits() != rho.num_qubits())
        throw std::invalid_argument("lindblad_rhs: Hamiltonian register mismatch");
      h += term.coefficient * term.string.matrix();
    }
    out += -kI * (h * rho.elements() - rho.elements() * h);
  }
  for (const LindbladTerm& term : eq.lindblad_terms) {
    if (term.jump.rows() != dim || term.jump.cols() != dim)
      throw std::invalid_argument("lindblad_rhs: jump operator dimension mismatch");
    if (!(term.rate >= 0.0) || !std::isfinite(term.rate))
      throw std::domain_error("lindblad_rhs: rate must be finite and non-negative");
    const Matrix cdc = term.jump.adjoint() * term.jump;
    out += (term.rate / 2.0) *
           (2.0 * term.jump * rho.elements() * term.jump.adjoint() -
            cdc * rho.elements() - rho.elements() * cdc);
  }
  return out;
}

DensityMatrix integrate_master_equation(const DensityMatrix& rho0,
                                        const MasterEquation& eq,
                                        double t_final, double dt) {
  if (!(dt > 0.0) || dt > t_final + 1e-15)
    throw std::invalid_argument("integrate_master_equation: need 0 < dt <= t_final");
  const long long steps = std::llround(t_final / dt);
  const double h = t_final / static_cast<double>(steps);

  DensityMatrix rho = rho0;
  for (long long s = 0; s < steps; ++s) {
    const Matrix k1 = lindblad_rhs(rho, eq);
    const Matrix k2 = lindblad_rhs(
        DensityMatrix(rho.num_qubits(), rho.elements() + (h / 2.0) * k1), eq);
    const Matrix k3 = lindblad_rhs(
        DensityMatrix(rho.num_qubits(), rho.elements() + (h / 2.0) * k2), eq);
    const Matrix k4 = lindblad_rhs(
        DensityMatrix(rho.num_qubits(), rho.elements() + h * k3), eq);
    rho.elements() += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  // The generator is trace preserving, so any drift signals integrator
  // error. Compare against the input trace: the Choi construction feeds
  // the integrator operator inputs that are not unit trace.
  if (std::abs(rho.trace_real() - rho0.trace_real()) > 1e-6)
    throw std::runtime_error(
        "integrate_master_equation: trace drift exceeds 1e-6, reduce dt");
  return rho;
}

DensityMatrix trotter_step(const DensityMatrix& rho, const MasterEquation& eq,
                           double tau, const TrotterRealizations& builders) {
  if (builders.coherent.size() != eq.hamiltonian_terms.size() ||
      builders.dissipative.size() != eq.lindblad_terms.size())
    throw std::invalid_argument("trotter_step: unregistered generator term");
  DensityMatrix out = rho;
  for (const ChannelStep& step : builders.coherent) {
    if (!step) throw std::invalid_argument("trotter_step: unregistered generator term");
    step(out, tau);
  }
  for (const ChannelStep& step : builders.dissipative) {
    if (!step) throw std::invalid_argument("trotter_step: unregistered generator term");
    step(out, tau);
  }
  return out;
}

Matrix choi_matrix(const ChannelFn& channel, int num_qubits) {
  const long long dim = 1LL << num_qubits;
  Matrix choi = Matrix::Zero(dim * dim, dim * dim);
  for (long long i = 0; i < dim; ++i) {
    for (long long j = 0; j < dim; ++j) {
      Matrix basis = Matrix::Zero(dim, dim);
      basis(i, j) = 1.0;
      const DensityMatrix mapped =
          channel(DensityMatrix(num_qubits, std::move(basis)));
      choi.block(i * dim, j * dim, dim, dim) = mapped.elements();
    }
  }
  return choi;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("trace_distance: register size mismatch");
  const Matrix diff = a.elements() - b.elements();
  Eigen::SelfAdjointEigenSolver<Matrix> es((diff + diff.adjoint()) / 2.0);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace ionsim
