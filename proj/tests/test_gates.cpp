#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "ionsim/circuits.hpp"
#include "ionsim/gates.hpp"

using namespace ionsim;

namespace {

Matrix ms_hamiltonian(double theta, double phi, int num_ions) {
  const long long dim = 1LL << num_ions;
  Matrix s = Matrix::Zero(dim, dim);
  for (int q = 0; q < num_ions; ++q) {
    s += std::cos(phi) * PauliString::single(num_ions, q, Pauli::X).matrix();
    s += std::sin(phi) * PauliString::single(num_ions, q, Pauli::Y).matrix();
  }
  return (theta / 4.0) * s * s;
}

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

TEST_CASE("ms gate matches the eigendecomposition oracle on a grid") {
  for (int n = 2; n <= 5; ++n)
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) {
        const double theta = -M_PI + i * (2.3 * M_PI / 4.0);
        const double phi = j * (M_PI / 4.0);
        const Matrix gate = ms_matrix(theta, phi, n);
        const Matrix oracle = matrix_exp_oracle(ms_hamiltonian(theta, phi, n));
        CHECK((gate - oracle).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(unitarity_defect(gate) < 1e-12);
      }
}

TEST_CASE("ms gate basics") {
  CHECK((ms_matrix(0.0, 0.3, 3) - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <
        1e-14);
  // periodicity in theta
  CHECK((ms_matrix(0.7 + 2.0 * M_PI, 0.4, 4) - ms_matrix(0.7, 0.4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK_THROWS_AS(ms_unitary(0.5, 0.0, {2}, 4), std::invalid_argument);

  // theta=pi/2 on |00> is maximally entangling
  const Matrix u = ms_matrix(M_PI / 2.0, 0.0, 2);
  Vector in = Vector::Zero(4);
  in[0] = 1.0;
  StateVector out(2, u * in);
  DensityMatrix reduced = partial_trace(DensityMatrix::from_state(out), {0});
  CHECK((reduced.elements() * reduced.elements()).trace().real() ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ms subset embedding and permutation symmetry") {
  const Matrix direct = ms_matrix(0.9, 0.2, 2);
  const Matrix embedded = ms_unitary(0.9, 0.2, {1, 3}, 4);
  CHECK((embedded - embed(direct, {1, 3}, 4)).cwiseAbs().maxCoeff() < 1e-13);

  // all targets interact with equal strength: any permutation of 3 targets
  // leaves the Hamiltonian invariant
  const Matrix h = ms_hamiltonian(0.8, 0.5, 3);
  Matrix swap01 = Matrix::Zero(8, 8);
  for (int b = 0; b < 8; ++b) {
    const int swapped = (b & 4) | ((b & 1) << 1) | ((b & 2) >> 1);
    swap01(swapped, b) = 1.0;
  }
  CHECK((swap01 * h * swap01 - h).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("matrix_exp_oracle") {
  CHECK((matrix_exp_oracle(Matrix::Zero(4, 4)) - Matrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  const Matrix x = PauliString{std::string_view("X")}.matrix();
  // exp(-i pi/2 X) = -iX
  CHECK((matrix_exp_oracle((M_PI / 2.0) * x) - Complex(0, -1) * x)
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  Matrix bad(2, 2);
  bad << 0, 1, 0, 0;
  CHECK_THROWS_AS(matrix_exp_oracle(bad), std::invalid_argument);
}

TEST_CASE("local rotations") {
  CHECK((gate_matrix(local_rotation('z', 0.0, 0)) - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  // full turn picks up the spinor sign
  CHECK((gate_matrix(local_rotation('z', 2.0 * M_PI, 0)) +
         Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  Vector zero = Vector::Zero(2);
  zero[0] = 1.0;
  Vector flipped = local_rotation_matrix('y', M_PI) * zero;
  CHECK(std::abs(flipped[1]) == doctest::Approx(1.0));
}

TEST_CASE("backward gate rewritten with forward gates") {
  for (int n = 2; n <= 5; ++n)
    for (double theta : {0.4, M_PI / 2.0, 2.2})
      for (double phi : {0.0, 0.9}) {
        Circuit c = backward_ms_as_forward(theta, phi, n);
        CHECK(equivalent_up_to_phase(circuit_unitary(c),
                                     ms_matrix(-theta, phi, n), 1e-10));
        // odd ion count: the forward gate alone; even: trailing axis flips
        if (n % 2 == 1)
          CHECK(c.ops.size() == 1);
        else
          CHECK(c.ops.size() > 1);
      }
}

TEST_CASE("correcting gate rows") {
  for (int row = 0; row < 4; ++row) {
    CHECK((correcting_gate_matrix(row, 0.0) - Matrix::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-13);
    CHECK(unitarity_defect(correcting_gate_matrix(row, 1.1)) < 1e-12);
  }

  // weight 4 row: ancilla |1> rotates |+> to |-> at theta=pi/2
  const Matrix c = correcting_gate_matrix(0, M_PI / 2.0);
  const double s = 1.0 / std::sqrt(2.0);
  Vector in = Vector::Zero(4);  // bit 0 = ancilla
  in[1] = s;                    // |+>_target (x) |1>_anc
  in[3] = s;
  Vector out = c * in;
  Vector minus = Vector::Zero(4);
  minus[1] = s;
  minus[3] = -s;
  CHECK(std::abs(minus.adjoint().dot(out)) == doctest::Approx(1.0));

  // ancilla |0>: inert branch for every theta
  for (double theta : {0.3, 1.0, 2.5}) {
    const Matrix m = correcting_gate_matrix(0, theta);
    Vector probe = Vector::Zero(4);
    probe[0] = 0.6;
    probe[2] = 0.8;
    CHECK((m * probe - probe).cwiseAbs().maxCoeff() < 1e-13);
  }

  CHECK_THROWS_AS(correcting_gate_matrix(4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(correcting_gate(0, 0.5, 0), std::invalid_argument);
}
