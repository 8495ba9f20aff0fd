#include "ionsim/state.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace ionsim {

namespace {

void check_qubit_count(int num_qubits, int cap, const char* what) {
  if (num_qubits < 1)
    throw std::invalid_argument(std::string(what) + ": need at least 1 qubit");
  if (num_qubits > cap)
    throw std::length_error(std::string(what) + ": register exceeds capacity of " +
                            std::to_string(cap) + " qubits");
}

// Applies P to every basis index: P|i> = phase * i^{nY} * (-1)^{popcount(i & z)} |i ^ x>.
template <typename Visit>
void pauli_action(const PauliString& p, Visit&& visit) {
  static const Complex quarters[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const std::uint64_t xm = p.x_mask();
  const std::uint64_t zm = p.z_mask();
  const Complex base =
      p.phase() * quarters[static_cast<std::uint64_t>(p.y_count()) % 4];
  const long long dim = 1LL << p.num_qubits();
  for (long long i = 0; i < dim; ++i) {
    const int sign = std::popcount(static_cast<std::uint64_t>(i) & zm) % 2;
    visit(i, static_cast<long long>(static_cast<std::uint64_t>(i) ^ xm),
          sign ? -base : base);
  }
}

}  // namespace

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits), amps_(Vector::Zero(1LL << num_qubits)) {
  check_qubit_count(num_qubits, kMaxPureQubits, "StateVector");
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, Vector amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  check_qubit_count(num_qubits, kMaxPureQubits, "StateVector");
  if (amps_.size() != (1LL << num_qubits))
    throw std::invalid_argument("StateVector: amplitude vector has wrong size");
}

StateVector StateVector::basis_state(int num_qubits, std::string_view bits) {
  check_qubit_count(num_qubits, kMaxPureQubits, "StateVector");
  if (static_cast<int>(bits.size()) != num_qubits)
    throw std::invalid_argument("basis_state: bit string length mismatch");
  long long index = 0;
  for (int q = 0; q < num_qubits; ++q) {
    char c = bits[static_cast<size_t>(q)];
    if (c != '0' && c != '1')
      throw std::invalid_argument("basis_state: bits must be 0 or 1");
    if (c == '1') index |= 1LL << q;
  }
  StateVector s(num_qubits);
  s.amps_.setZero();
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const { return amps_.norm(); }

void StateVector::normalize() {
  double n = norm();
  if (n <= 0.0) throw std::domain_error("StateVector: cannot normalize zero state");
  amps_ /= n;
}

DensityMatrix::DensityMatrix(int num_qubits)
    : num_qubits_(num_qubits),
      elems_(Matrix::Zero(1LL << num_qubits, 1LL << num_qubits)) {
  check_qubit_count(num_qubits, kMaxMixedQubits, "DensityMatrix");
  elems_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(int num_qubits, Matrix elements)
    : num_qubits_(num_qubits), elems_(std::move(elements)) {
  check_qubit_count(num_qubits, kMaxMixedQubits, "DensityMatrix");
  const long long dim = 1LL << num_qubits;
  if (elems_.rows() != dim || elems_.cols() != dim)
    throw std::invalid_argument("DensityMatrix: wrong matrix dimension");
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
  check_qubit_count(psi.num_qubits(), kMaxMixedQubits, "DensityMatrix");
  return DensityMatrix(psi.num_qubits(),
                       psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix::trace_real() const { return elems_.trace().real(); }

double DensityMatrix::hermiticity_defect() const {
  return (elems_ - elems_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> es((elems_ + elems_.adjoint()) / 2.0);
  return es.eigenvalues().minCoeff();
}

void apply_pauli_string(StateVector& state, const PauliString& p) {
  if (p.num_qubits() != state.num_qubits())
    throw std::invalid_argument("apply_pauli_string: qubit count mismatch");
  Vector out(state.dim());
  pauli_action(p, [&](long long i, long long j, Complex coeff) {
    out[j] = coeff * state.amplitudes()[i];
  });
  state.amplitudes() = std::move(out);
}

void apply_pauli_string(DensityMatrix& rho, const PauliString& p) {
  if (p.num_qubits() != rho.num_qubits())
    throw std::invalid_argument("apply_pauli_string: qubit count mismatch");
  // P rho P^dag; the string's overall phase drops out.
  const long long dim = rho.dim();
  Matrix out(dim, dim);
  std::vector<long long> perm(static_cast<size_t>(dim));
  std::vector<Complex> coeff(static_cast<size_t>(dim));
  pauli_action(p, [&](long long i, long long j, Complex c) {
    perm[static_cast<size_t>(i)] = j;
    coeff[static_cast<size_t>(i)] = c;
  });
  for (long long r = 0; r < dim; ++r)
    for (long long c = 0; c < dim; ++c)
      out(perm[static_cast<size_t>(r)], perm[static_cast<size_t>(c)]) =
          coeff[static_cast<size_t>(r)] * std::conj(coeff[static_cast<size_t>(c)]) *
          rho.elements()(r, c);
  rho.elements() = std::move(out);
}

double expectation(const StateVector& state, const PauliString& p) {
  if (p.num_qubits() != state.num_qubits())
    throw std::invalid_argument("expectation: qubit count mismatch");
  if (!p.hermitian())
    throw std::domain_error("expectation: Pauli string has non-real phase");
  Complex acc = 0.0;
  pauli_action(p, [&](long long i, long long j, Complex c) {
    acc += std::conj(state.amplitudes()[j]) * c * state.amplitudes()[i];
  });
  if (std::abs(acc.imag()) > 1e-10)
    throw std::runtime_error("expectation: imaginary part exceeds tolerance");
  return acc.real();
}

double expectation(const DensityMatrix& rho, const PauliString& p) {
  if (p.num_qubits() != rho.num_qubits())
    throw std::invalid_argument("expectation: qubit count mismatch");
  if (!p.hermitian())
    throw std::domain_error("expectation: Pauli string has non-real phase");
  Complex acc = 0.0;
  // tr(P rho) = sum_i <i|P rho|i> = sum_i coeff_i rho(i, j_i)... traverse rows.
  pauli_action(p, [&](long long i, long long j, Complex c) {
    acc += c * rho.elements()(i, j);
  });
  if (std::abs(acc.imag()) > 1e-10)
    throw std::runtime_error("expectation: imaginary part exceeds tolerance");
  return acc.real();
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (int q : kept)
    if (q < 0 || q >= rho.num_qubits())
      throw std::invalid_argument("partial_trace: qubit index out of range");

  std::vector<int> traced;
  for (int q = 0; q < rho.num_qubits(); ++q)
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);

  const int nk = static_cast<int>(kept.size());
  const int nt = static_cast<int>(traced.size());
  auto compose = [&](long long k, long long t) {
    long long full = 0;
    for (int b = 0; b < nk; ++b)
      if (k >> b & 1) full |= 1LL << kept[static_cast<size_t>(b)];
    for (int b = 0; b < nt; ++b)
      if (t >> b & 1) full |= 1LL << traced[static_cast<size_t>(b)];
    return full;
  };

  Matrix out = Matrix::Zero(1LL << nk, 1LL << nk);
  for (long long r = 0; r < (1LL << nk); ++r)
    for (long long c = 0; c < (1LL << nk); ++c)
      for (long long t = 0; t < (1LL << nt); ++t)
        out(r, c) += rho.elements()(compose(r, t), compose(c, t));
  return DensityMatrix(nk, std::move(out));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("inner_product: qubit count mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner_product(b, a));
}

double fidelity(const DensityMatrix& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("fidelity: qubit count mismatch");
  return (b.amplitudes().adjoint() * a.elements() * b.amplitudes())(0, 0).real();
}

void apply_unitary(StateVector& state, const Matrix& u,
                   const std::vector<int>& targets) {
  const int k = static_cast<int>(targets.size());
  const long long sub = 1LL << k;
  if (u.rows() != sub || u.cols() != sub)
    throw std::invalid_argument("apply_unitary: operator/target size mismatch");
  std::uint64_t tmask = 0;
  for (int q : targets) {
    if (q < 0 || q >= state.num_qubits())
      throw std::invalid_argument("apply_unitary: target out of range");
    if (tmask & (1ULL << q))
      throw std::invalid_argument("apply_unitary: duplicate target");
    tmask |= 1ULL << q;
  }

  Vector scratch(sub);
  const long long dim = state.dim();
  for (long long base = 0; base < dim; ++base) {
    if (static_cast<std::uint64_t>(base) & tmask) continue;
    for (long long s = 0; s < sub; ++s) {
      long long idx = base;
      for (int b = 0; b < k; ++b)
        if (s >> b & 1) idx |= 1LL << targets[static_cast<size_t>(b)];
      scratch[s] = state.amplitudes()[idx];
    }
    Vector res = u * scratch;
    for (long long s = 0; s < sub; ++s) {
      long long idx = base;
      for (int b = 0; b < k; ++b)
        if (s >> b & 1) idx |= 1LL << targets[static_cast<size_t>(b)];
      state.amplitudes()[idx] = res[s];
    }
  }
}

void apply_unitary(DensityMatrix& rho, const Matrix& u,
                   const std::vector<int>& targets) {
  Matrix full = embed(u, targets, rho.num_qubits());
  rho.elements() = full * rho.elements() * full.adjoint();
}

Matrix embed(const Matrix& u, const std::vector<int>& targets, int num_qubits) {
  const int k = static_cast<int>(targets.size());
  const long long sub = 1LL << k;
  if (u.rows() != sub || u.cols() != sub)
    throw std::invalid_argument("embed: operator/target size mismatch");
  if (num_qubits > 12)
    throw std::invalid_argument("embed: dense embedding capped at 12 qubits");
  std::uint64_t tmask = 0;
  for (int q : targets) {
    if (q < 0 || q >= num_qubits)
      throw std::invalid_argument("embed: target out of range");
    tmask |= 1ULL << q;
  }
  const long long dim = 1LL << num_qubits;
  Matrix out = Matrix::Zero(dim, dim);
  auto compose = [&](long long base, long long s) {
    long long idx = base;
    for (int b = 0; b < k; ++b)
      if (s >> b & 1) idx |= 1LL << targets[static_cast<size_t>(b)];
    return idx;
  };
  for (long long base = 0; base < dim; ++base) {
    if (static_cast<std::uint64_t>(base) & tmask) continue;
    for (long long r = 0; r < sub; ++r)
      for (long long c = 0; c < sub; ++c)
        out(compose(base, r), compose(base, c)) = u(r, c);
  }
  return out;
}

}  // namespace ionsim
