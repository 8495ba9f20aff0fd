#pragma once

#include <functional>
#include <vector>

#include "ionsim/gates.hpp"

namespace ionsim {

/// Completely positive trace-preserving map as explicit operation elements.
struct KrausChannel {
  int num_qubits = 0;
  std::vector<Matrix> elements;

  double completeness_defect() const;  // max |sum E_k^dag E_k - 1|
  void validate(double tol = 1e-10) const;
};

struct LindbladTerm {
  Matrix jump;        // c_alpha
  double rate = 0.0;  // gamma_alpha >= 0, units 1/time
};

struct MasterEquation {
  std::vector<HamiltonianTerm> hamiltonian_terms;
  std::vector<LindbladTerm> lindblad_terms;
};

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch);

// E_1 = P_+ + cos(theta) P_-, E_2 = sin(theta) flip P_- with P_+- the
// eigenprojectors of the stabilizer. The flip must anticommute with the
// stabilizer so that E_2 pumps -1 population into the +1 eigenspace.
KrausChannel stabilizer_pump_channel(const PauliString& stabilizer,
                                     const PauliString& flip, double theta);

// Incoherent reset of one qubit to |0>, Kraus pair {|0><0|, |0><1|}.
DensityMatrix optical_pump_reset(const DensityMatrix& rho, int qubit);

// -i[H, rho] + sum_a (gamma_a/2)(2 c rho c^dag - c^dag c rho - rho c^dag c)
Matrix lindblad_rhs(const DensityMatrix& rho, const MasterEquation& eq);

// Fixed-step RK4. Throws an accuracy error if the trace drifts by more
// than 1e-6.
DensityMatrix integrate_master_equation(const DensityMatrix& rho0,
                                        const MasterEquation& eq,
                                        double t_final, double dt);

// One registered realization of a generator term: advances rho by one
// Trotter slice of length tau.
using ChannelStep = std::function<void(DensityMatrix&, double tau)>;

/// Circuit (or channel) realizations for trotter_step, parallel to the
/// term lists of the MasterEquation they serve.
struct TrotterRealizations {
  std::vector<ChannelStep> coherent;
  std::vector<ChannelStep> dissipative;
};

// First-order step: all coherent slices, then all dissipative slices.
DensityMatrix trotter_step(const DensityMatrix& rho, const MasterEquation& eq,
                           double tau, const TrotterRealizations& builders);

using ChannelFn = std::function<DensityMatrix(const DensityMatrix&)>;

// Choi matrix of a channel on num_qubits qubits; the canonical object for
// channel-equality comparisons.
Matrix choi_matrix(const ChannelFn& channel, int num_qubits);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace ionsim
