#pragma once

#include <optional>
#include <vector>

#include "qland/qstate.hpp"

namespace qland {

// Threshold for classifying a change in extractable work as positive. Exact
// zeros (trivial machines) must classify as non-positive, and round-off from
// spectral decompositions sits well below this.
inline constexpr double kPositiveWorkEps = 1e-12;

// Von Neumann entropy in bits; 0 log 0 := 0. Eigenvalues in [kPsdTol, 0) are
// clipped to zero, anything more negative is a hard error.
double von_neumann_entropy(const DensityMatrix& rho);

// (4/3)(1 - Tr rho^2) for a two-qubit state: 0 for pure, 1 for maximally mixed.
double linear_entropy(const DensityMatrix& rho);

// (1/2) Tr |a - b|. For diagonal states this is half the L1 distance of the
// diagonals; for two thermal qubits it equals |p1 - p2|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

enum class SupportPolicy { error, infinity };

// Tr[a (log2 a - log2 b)] in bits, >= 0. If a has weight outside the support
// of b the result is +infinity; by default that is reported as an error.
double relative_entropy(const DensityMatrix& a, const DensityMatrix& b,
                        SupportPolicy policy = SupportPolicy::error);

// Wootters concurrence of a two-qubit state, from the eigenvalues of
// rho (sy x sy) rho* (sy x sy) in decreasing order.
double concurrence(const DensityMatrix& rho);

// Closed form 2 max{0, |rho23| - sqrt(rho11 rho44)} for states whose only
// off-diagonal weight sits between the two single-excitation states. Throws
// if the state does not have that sparsity pattern (tolerance 1e-12).
double concurrence_x_form(const DensityMatrix& rho);

// S(A) + S(B) - S(AB) in bits for the bipartition (keep_a, complement).
double mutual_information(const DensityMatrix& rho, const std::vector<int>& keep_a);

// Non-equilibrium free energy <E> - T S, with S converted to nats (entropy is
// carried in bits throughout, hence the ln 2 factors).
double free_energy(const DensityMatrix& rho, double temperature, const Hamiltonian0& h0);

// Product Gibbs state at the reference temperature with the system's spacings.
DensityMatrix reference_thermal_state(double temperature, const Hamiltonian0& h0);

// F(rho, T) - F(rho_th(T), T); equals T ln2 D(rho || rho_th) and is >= 0.
double extractable_work(const DensityMatrix& rho, double temperature, const Hamiltonian0& h0);

// Extractable-work difference between (rho1, T1) and (rho0, T0), each term
// measured against the thermal state at its own reference temperature.
double delta_extractable_work(const DensityMatrix& rho0, double t0, const DensityMatrix& rho1,
                              double t1, const Hamiltonian0& h0);

// Scalar fast path for a single diagonal qubit with unit spacing: the same
// quantity extractable_work computes for diag(1-q, q), without matrix work.
double extractable_work_qubit(double q, double temperature);

}  // namespace qland
