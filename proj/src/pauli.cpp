#include "ionsim/pauli.hpp"

#include <stdexcept>

namespace ionsim {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix make_pauli(Pauli p) {
  Matrix m(2, 2);
  switch (p) {
    case Pauli::I:
      m << 1, 0, 0, 1;
      break;
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << 0, -kI, kI, 0;
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

// Single-qubit product table: sigma_a * sigma_b = i^k sigma_c.
struct PauliProduct {
  Pauli result;
  int phase_quarter;
};

PauliProduct multiply_single(Pauli a, Pauli b) {
  if (a == Pauli::I) return {b, 0};
  if (b == Pauli::I) return {a, 0};
  if (a == b) return {Pauli::I, 0};
  // Cyclic order X -> Y -> Z -> X carries phase +i, reverse order -i.
  auto next = [](Pauli p) {
    switch (p) {
      case Pauli::X: return Pauli::Y;
      case Pauli::Y: return Pauli::Z;
      default: return Pauli::X;
    }
  };
  auto third = [](Pauli a2, Pauli b2) {
    for (Pauli c : {Pauli::X, Pauli::Y, Pauli::Z})
      if (c != a2 && c != b2) return c;
    return Pauli::I;
  };
  if (next(a) == b) return {third(a, b), 1};
  return {third(a, b), 3};
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    default: return 'Z';
  }
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("unknown Pauli factor '") + c +
                                  "'");
  }
}

const Matrix& pauli_matrix(Pauli p) {
  static const Matrix mats[4] = {make_pauli(Pauli::I), make_pauli(Pauli::X),
                                 make_pauli(Pauli::Y), make_pauli(Pauli::Z)};
  return mats[static_cast<int>(p)];
}

PauliString::PauliString(int num_qubits)
    : num_qubits_(num_qubits),
      factors_(static_cast<size_t>(num_qubits), Pauli::I),
      phase_quarter_(0) {
  if (num_qubits < 1 || num_qubits > 64)
    throw std::invalid_argument("PauliString: qubit count out of range");
}

PauliString::PauliString(std::string_view factors, int phase_quarter)
    : PauliString(static_cast<int>(factors.size())) {
  for (size_t i = 0; i < factors.size(); ++i)
    factors_[i] = pauli_from_char(factors[i]);
  set_phase_quarter(phase_quarter);
}

PauliString PauliString::single(int num_qubits, int qubit, Pauli p) {
  PauliString s(num_qubits);
  s.set_factor(qubit, p);
  return s;
}

Pauli PauliString::factor(int qubit) const {
  return factors_.at(static_cast<size_t>(qubit));
}

void PauliString::set_factor(int qubit, Pauli p) {
  factors_.at(static_cast<size_t>(qubit)) = p;
}

Complex PauliString::phase() const {
  static const Complex quarters[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return quarters[phase_quarter_];
}

void PauliString::set_phase_quarter(int k) { phase_quarter_ = ((k % 4) + 4) % 4; }

int PauliString::weight() const {
  int w = 0;
  for (Pauli p : factors_)
    if (p != Pauli::I) ++w;
  return w;
}

std::vector<int> PauliString::support() const {
  std::vector<int> s;
  for (int q = 0; q < num_qubits_; ++q)
    if (factors_[static_cast<size_t>(q)] != Pauli::I) s.push_back(q);
  return s;
}

bool PauliString::is_identity() const {
  return weight() == 0 && phase_quarter_ == 0;
}

bool PauliString::hermitian() const {
  return phase_quarter_ == 0 || phase_quarter_ == 2;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (num_qubits_ != other.num_qubits_)
    throw std::invalid_argument("PauliString: qubit count mismatch");
  // Strings commute iff the number of anticommuting single-qubit pairs is even.
  int anti = 0;
  for (int q = 0; q < num_qubits_; ++q) {
    Pauli a = factors_[static_cast<size_t>(q)];
    Pauli b = other.factors_[static_cast<size_t>(q)];
    if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
  }
  return anti % 2 == 0;
}

PauliString PauliString::operator*(const PauliString& other) const {
  if (num_qubits_ != other.num_qubits_)
    throw std::invalid_argument("PauliString: qubit count mismatch");
  PauliString out(num_qubits_);
  int k = phase_quarter_ + other.phase_quarter_;
  for (int q = 0; q < num_qubits_; ++q) {
    PauliProduct p = multiply_single(factors_[static_cast<size_t>(q)],
                                     other.factors_[static_cast<size_t>(q)]);
    out.factors_[static_cast<size_t>(q)] = p.result;
    k += p.phase_quarter;
  }
  out.set_phase_quarter(k);
  return out;
}

bool PauliString::operator==(const PauliString& other) const {
  return num_qubits_ == other.num_qubits_ && factors_ == other.factors_ &&
         phase_quarter_ == other.phase_quarter_;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (int q = 0; q < num_qubits_; ++q) {
    Pauli p = factors_[static_cast<size_t>(q)];
    if (p == Pauli::X || p == Pauli::Y) m |= 1ULL << q;
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (int q = 0; q < num_qubits_; ++q) {
    Pauli p = factors_[static_cast<size_t>(q)];
    if (p == Pauli::Y || p == Pauli::Z) m |= 1ULL << q;
  }
  return m;
}

int PauliString::y_count() const {
  int n = 0;
  for (Pauli p : factors_)
    if (p == Pauli::Y) ++n;
  return n;
}

Matrix PauliString::matrix() const {
  if (num_qubits_ > 12)
    throw std::invalid_argument("PauliString::matrix: dimension too large");
  const long long dim = 1LL << num_qubits_;
  Matrix m = Matrix::Identity(1, 1);
  // Qubit 0 is the least significant bit, so it is the rightmost Kronecker
  // factor: sigma_{n-1} x ... x sigma_0.
  for (int q = 0; q < num_qubits_; ++q) {
    const Matrix& f = pauli_matrix(factors_[static_cast<size_t>(q)]);
    Matrix next(m.rows() * 2, m.cols() * 2);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c)
        next.block(r * m.rows(), c * m.cols(), m.rows(), m.cols()) =
            f(r, c) * m;
    m = std::move(next);
  }
  (void)dim;
  return phase() * m;
}

std::string PauliString::to_string() const {
  std::string s;
  for (Pauli p : factors_) s += pauli_char(p);
  return s;
}

}  // namespace ionsim
