#pragma once

#include <random>
#include <string>
#include <utility>

#include "ionsim/gates.hpp"

namespace ionsim {

// --- evaluation ---------------------------------------------------------

// Dense unitary of a reset-free circuit.
Matrix circuit_unitary(const Circuit& c);

// Applies ops front to back. Reset collapses the qubit (measure + flip),
// which needs the generator; passing none throws on Reset.
void apply_circuit(StateVector& state, const Circuit& c,
                   std::mt19937_64* rng = nullptr);
void apply_circuit(DensityMatrix& rho, const Circuit& c);

// Lifts a system state by an ancilla in |0> at qubit 0, runs the block and
// traces the ancilla out again.
DensityMatrix apply_block_to_system(const Circuit& c,
                                    const DensityMatrix& rho_sys);

// --- equivalence checking -----------------------------------------------

// Normalized trace overlap |tr(u^dag v)| / dim; 1 means equal up to a
// global phase.
double phase_overlap(const Matrix& u, const Matrix& v);
bool equivalent_up_to_phase(const Matrix& u, const Matrix& v, double tol);
// Strict mode for debugging phase bookkeeping.
double max_elementwise_distance(const Matrix& u, const Matrix& v);

// --- builders -----------------------------------------------------------
//
// Stabilizers are given over the system qubits; the built circuits add the
// ancilla at qubit 0 and shift system qubit k to circuit qubit k+1 (except
// the ancilla-free block, which stays in system indexing).

// Three-gate block whose circuit unitary is exp(i phi sigma^z_0 (x) A); on
// |0>_anc (x) |psi> the ancilla factorizes and the system picks up
// exp(i phi A). Non-X factors are handled by conjugating local rotations.
Circuit coherent_block(const PauliString& stabilizer, double phi);

// Same evolution exp(i phi A) for an X-type stabilizer of weight >= 2,
// without an ancilla: the first support qubit plays the ancilla role inside
// a y-axis conjugation.
Circuit coherent_block_ancilla_free(const PauliString& stabilizer, double phi);

// Jump operator of the pump block below: sigma^z on the flip qubit, or
// sigma^x when the stabilizer factor there is sigma^z.
PauliString induced_flip_operator(const PauliString& stabilizer, int flip_qubit);

// Pump block: MS mapping, correcting gate on (ancilla, flip), inverse MS,
// then ancilla reset. Tracing the ancilla yields the Kraus pair
// E1 = P_+ + cos(theta) P_-, E2 = sin(theta) flip P_-.
Circuit dissipative_block(const PauliString& stabilizer, double theta,
                          int flip_qubit);

// Ancilla prepared in |+>, then the coherent block at phi = pi/4; the
// ancilla ends in a sigma^y eigenstate labelling the stabilizer eigenvalue.
Circuit qnd_readout(const PauliString& stabilizer);

// Born-rule measurement of qubit 0 in the |y+->ic basis; returns the sigma^y
// eigenvalue and leaves the collapsed, renormalized state in place.
int measure_ancilla_y(StateVector& state, std::mt19937_64& rng);

// Full readout: run qnd_readout, measure, map the ancilla eigenstate to the
// stabilizer outcome, and reset the ancilla to |0>.
int qnd_measure(StateVector& state, const PauliString& stabilizer,
                std::mt19937_64& rng);

// Collapse `qubit` to |0> (measure in z, flip on outcome 1).
void reset_qubit(StateVector& state, int qubit, std::mt19937_64& rng);

// --- refocusing sequences ------------------------------------------------

// MS gate on all ions except `excluded`, from two half-angle global gates
// interleaved with z flips of the excluded ion.
Circuit refocused_ms_excluding(int excluded, double theta, double phi,
                               int num_ions);

// Product of two-ion MS gates between the ancilla and every system ion,
// with no pairwise system-system entanglement; the inverse half gate is
// rewritten with forward gates.
Circuit star_ms(double theta, double phi, int num_ions);

// MS gate on the ancilla and ion i only (eight-gate sequence of
// quarter-angle global gates and single-ion z flips).
Circuit two_ion_ms_via_refocus(int i, double theta, double phi, int num_ions);

// Rewrites every MS gate that addresses a proper subset of the register
// into global gates plus z flips, applying the excluded-ion construction
// once per missing ion. Other ops pass through unchanged.
Circuit expand_with_refocusing(const Circuit& c);

// Correcting gate decomposed into local rotations and a refocused two-ion
// MS gate, for any of the four table rows.
Circuit decompose_correcting_gate(int table_row, double theta, int flip_qubit,
                                  int num_ions);

// --- pretty printing ------------------------------------------------------

std::string print_circuit(const Circuit& c);
Circuit parse_circuit(const std::string& text, int num_qubits);

}  // namespace ionsim
