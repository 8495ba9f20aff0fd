#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ionsim/pauli.hpp"

using namespace ionsim;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

PauliString two_qubit(int f0, int f1) {
  PauliString p(2);
  p.set_factor(0, static_cast<Pauli>(f0));
  p.set_factor(1, static_cast<Pauli>(f1));
  return p;
}

}  // namespace

TEST_CASE("single-qubit pauli matrices") {
  CHECK(max_abs_diff(pauli_matrix(Pauli::I), Matrix::Identity(2, 2)) == 0.0);
  Matrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  CHECK(max_abs_diff(pauli_matrix(Pauli::X), x) == 0.0);
  CHECK(max_abs_diff(pauli_matrix(Pauli::Y), y) == 0.0);
  CHECK(max_abs_diff(pauli_matrix(Pauli::Z), z) == 0.0);
}

TEST_CASE("string construction and accessors") {
  PauliString p{std::string_view("XIZY")};
  CHECK(p.num_qubits() == 4);
  CHECK(p.factor(0) == Pauli::X);
  CHECK(p.factor(1) == Pauli::I);
  CHECK(p.factor(2) == Pauli::Z);
  CHECK(p.factor(3) == Pauli::Y);
  CHECK(p.weight() == 3);
  CHECK(p.support() == std::vector<int>{0, 2, 3});
  CHECK(p.y_count() == 1);
  CHECK(p.x_mask() == 0b1001ULL);  // X on 0, Y on 3
  CHECK(p.z_mask() == 0b1100ULL);  // Z on 2, Y on 3
  CHECK(p.hermitian());
  CHECK(p.to_string().find("XIZY") != std::string::npos);

  PauliString id(3);
  CHECK(id.is_identity());
  CHECK_FALSE(p.is_identity());
}

TEST_CASE("product agrees with dense matrices for all 16^2 pairs at n=2") {
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) {
      PauliString pa = two_qubit(a % 4, a / 4);
      PauliString pb = two_qubit(b % 4, b / 4);
      PauliString prod = pa * pb;
      // phase closure: i^k for integer k
      CHECK((prod.phase_quarter() >= 0 && prod.phase_quarter() < 4));
      CHECK(max_abs_diff(prod.matrix(), pa.matrix() * pb.matrix()) < 1e-14);
    }
}

TEST_CASE("hermitian square is the identity") {
  for (const char* s : {"X", "YZ", "XYZX", "ZZZZ", "YYIX"}) {
    PauliString p{std::string_view(s)};
    PauliString sq = p * p;
    CHECK(sq.is_identity());
    CHECK(sq.phase() == Complex(1.0, 0.0));
  }
}

TEST_CASE("phase bookkeeping") {
  PauliString x{std::string_view("X")};
  PauliString y{std::string_view("Y")};
  PauliString z{std::string_view("Z")};
  // XY = iZ
  PauliString xy = x * y;
  CHECK(xy.factor(0) == Pauli::Z);
  CHECK(xy.phase() == Complex(0.0, 1.0));
  CHECK_FALSE(xy.hermitian());
  // YX = -iZ
  CHECK((y * x).phase() == Complex(0.0, -1.0));
  PauliString minus_z = z;
  minus_z.set_phase_quarter(2);
  CHECK(minus_z.phase() == Complex(-1.0, 0.0));
  CHECK(minus_z.hermitian());
  CHECK(max_abs_diff(minus_z.matrix(), (-z.matrix()).eval()) < 1e-15);
}

TEST_CASE("commutation matches dense commutators") {
  const char* strings[] = {"XX", "ZI", "YZ", "IZ", "XY", "ZZ"};
  for (const char* sa : strings)
    for (const char* sb : strings) {
      PauliString pa{std::string_view(sa)}, pb{std::string_view(sb)};
      const Matrix comm = pa.matrix() * pb.matrix() - pb.matrix() * pa.matrix();
      CHECK(pa.commutes_with(pb) == (comm.cwiseAbs().maxCoeff() < 1e-14));
    }
}

TEST_CASE("matrix kronecker order puts qubit 0 in the least significant bit") {
  // Z on qubit 0 of a 2-qubit register: diagonal (+1,-1,+1,-1)
  PauliString z0 = PauliString::single(2, 0, Pauli::Z);
  const Matrix m = z0.matrix();
  CHECK(m(0, 0).real() == doctest::Approx(1.0));
  CHECK(m(1, 1).real() == doctest::Approx(-1.0));
  CHECK(m(2, 2).real() == doctest::Approx(1.0));
  CHECK(m(3, 3).real() == doctest::Approx(-1.0));
}
