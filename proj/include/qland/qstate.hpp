#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qland {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// System-size cap. Dense 2^n x 2^n storage is deliberate: at n = 8 the state
// is 256 x 256, small enough that sector-block application (see sectors.hpp)
// is the only performance path worth having.
inline constexpr int kMaxQubits = 8;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = -1e-10;

// Bit convention: qubit 1 is the most significant bit of the computational
// basis index, so for n = 4 the state |1000> (qubit 1 excited) has index 8.
inline int qubit_bit(int n_qubits, int qubit) { return n_qubits - qubit; }
inline bool qubit_excited(int basis_index, int n_qubits, int qubit) {
  return (basis_index >> qubit_bit(n_qubits, qubit)) & 1;
}

// One thermal qubit: excited-state population p and level spacing e1
// (ground level fixed at zero energy).
struct QubitSpec {
  double p;
  double e1 = 1.0;
};

// Throws unless 0 < p < 0.5 and e1 > 0.
void validate_qubit_spec(const QubitSpec& spec);

// Hermitian, unit-trace, PSD operator on n qubits in the computational basis.
// The constructor enforces Hermiticity and unit trace; positivity is checked
// on demand (min_eigenvalue) since it needs a spectral decomposition.
class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, Matrix entries);

  int n_qubits() const { return n_qubits_; }
  int dim() const { return 1 << n_qubits_; }
  const Matrix& mat() const { return entries_; }

  double diagonal(int basis_index) const { return entries_(basis_index, basis_index).real(); }

  // Largest off-diagonal magnitude; zero for classically correlated states.
  double max_offdiagonal() const;
  double min_eigenvalue() const;
  bool is_valid(double psd_tol = kPsdTol) const { return min_eigenvalue() >= psd_tol; }

 private:
  int n_qubits_;
  Matrix entries_;
};

// Free Hamiltonian: diagonal in the computational basis, with per-qubit level
// spacings. The energy of a basis state is the sum of spacings over excited bits.
class Hamiltonian0 {
 public:
  explicit Hamiltonian0(std::vector<double> level_spacings);
  static Hamiltonian0 uniform(int n_qubits, double e1 = 1.0);

  int n_qubits() const { return static_cast<int>(spacings_.size()); }
  const std::vector<double>& level_spacings() const { return spacings_; }
  double basis_energy(int basis_index) const;
  Eigen::VectorXd diagonal() const;

 private:
  std::vector<double> spacings_;
};

// diag(1-p, p) for a single thermal qubit.
DensityMatrix thermal_qubit(const QubitSpec& spec);

// Tensor product of thermal qubits, qubit 1 first (most significant).
DensityMatrix product_state(const std::vector<QubitSpec>& specs);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Reduced state on the kept qubits (1-based indices); relative qubit order is
// preserved regardless of the order given in `keep`.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Excited-state occupancy of a single-qubit state.
double population_fraction(const DensityMatrix& rho);

enum class BoundaryPolicy { error, infinity };

// T = e1 / ln((1-p)/p), in units k_B = 1. p = 0.5 is singular: rejected by
// default, mapped to +infinity under the permissive policy.
double temperature_from_population(double p, double e1 = 1.0,
                                   BoundaryPolicy policy = BoundaryPolicy::error);

// p = 1 / (1 + exp(e1/T)); inverse of the above.
double population_from_temperature(double temperature, double e1 = 1.0);

// Tr(rho H0).
double expected_energy(const DensityMatrix& rho, const Hamiltonian0& h0);

}  // namespace qland
