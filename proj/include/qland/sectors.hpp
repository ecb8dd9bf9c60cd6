#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qland/qstate.hpp"
#include "qland/rng.hpp"

namespace qland {

// Equal-energy (excitation-number) sectors of the n-qubit space. With equal
// level spacings, a unitary commutes with the free Hamiltonian iff it is
// block diagonal over these sectors.
struct SectorDecomposition {
  int n_qubits = 0;
  // sectors[m]: ascending computational-basis indices with popcount m.
  std::vector<std::vector<int>> sectors;
  std::vector<int> sector_of;          // basis index -> excitation count
  std::vector<int> offset_in_sector;   // basis index -> position within its sector
  std::vector<int> energy_order;       // excitation-major listing of all basis indices
};

SectorDecomposition sector_decomposition(int n_qubits);

// Rotation in the span of two computational-basis states. In the ordered
// basis (|a>, |b>) the operator is
//     [ cos(theta)              e^{i phi} sin(theta) ]
//     [ -e^{-i phi} sin(theta)  cos(theta)           ]
// and the identity elsewhere.
struct GivensRotation {
  int a = 0;
  int b = 0;
  double theta = 0.0;
  double phi = 0.0;
};

// In-place rho -> G rho G^dagger. O(dim) per rotation.
void apply_givens_inplace(Matrix& rho, const GivensRotation& g);

// In-place u -> G u (row mixing only); used to assemble dense references.
void left_multiply_givens_inplace(Matrix& u, const GivensRotation& g);

// Construction record for a unitary: family, parameters, and seed, enough to
// rebuild the operator exactly. Serialized into run manifests (see io.hpp).
struct UnitaryDescriptor {
  std::string family = "identity";
  std::vector<int> qubits;
  std::vector<std::pair<int, int>> condition;  // (qubit, bit) for conditional swaps
  std::vector<double> angles;
  std::vector<double> phases;
  std::string mode;
  bool with_phases = false;
  std::optional<std::uint64_t> seed;
  std::vector<UnitaryDescriptor> parts;  // for composites
};

// Block-diagonal unitary over excitation sectors. Untouched sectors are kept
// as implicit identities so that application costs scale with the rotated
// blocks only.
class EnergyConservingUnitary {
 public:
  static EnergyConservingUnitary identity(int n_qubits);
  static EnergyConservingUnitary from_givens(int n_qubits, const std::vector<GivensRotation>& rotations,
                                             UnitaryDescriptor descriptor);
  static EnergyConservingUnitary from_blocks(int n_qubits, std::vector<Matrix> blocks,
                                             UnitaryDescriptor descriptor);

  int n_qubits() const { return n_qubits_; }
  int sector_count() const { return n_qubits_ + 1; }
  bool block_is_identity(int m) const { return blocks_[m].size() == 0; }
  // Materialized sector block (identity blocks included).
  Matrix block_matrix(int m) const;
  const UnitaryDescriptor& descriptor() const { return descriptor_; }

  Matrix full_matrix() const;
  EnergyConservingUnitary adjoint() const;

 private:
  EnergyConservingUnitary(int n_qubits, std::vector<Matrix> blocks, UnitaryDescriptor descriptor);

  int n_qubits_;
  std::vector<Matrix> blocks_;  // empty matrix = identity block
  UnitaryDescriptor descriptor_;
};

// U rho U^dagger computed sector-block-wise; identity-by-identity submatrices
// are copied untouched. Agrees with apply_dense to round-off.
DensityMatrix apply(const EnergyConservingUnitary& u, const DensityMatrix& rho);

// Serial reference: materializes the full matrix and conjugates densely.
DensityMatrix apply_dense(const EnergyConservingUnitary& u, const DensityMatrix& rho);

// Returns the unitary that applies `first`, then `second` (blockwise product).
EnergyConservingUnitary compose(const EnergyConservingUnitary& first,
                                const EnergyConservingUnitary& second);

// True iff u is unitary and commutes with h0, both to `tol` in max-abs norm.
bool verify_energy_conserving(const Matrix& u, const Hamiltonian0& h0, double tol = 1e-12);

// Partial swap of the excitations of qubits (i, j), identity on every other
// configuration. For n = 2 and pair (1, 2) this is the general
// energy-preserving two-qubit unitary up to phases on the polarized states.
EnergyConservingUnitary two_qubit_partial_swap(int n_qubits, std::pair<int, int> pair,
                                               double theta, double phi = 0.0);

// Rotation between the two basis states that differ by swapping the pair,
// with every spectator qubit fixed to the given (qubit, bit) pattern.
EnergyConservingUnitary conditional_swap(int n_qubits, std::pair<int, int> pair,
                                         const std::vector<std::pair<int, int>>& condition,
                                         double theta);

// Simultaneous partial swap of two qubit pairs: rotates the state with the
// first pair excited into the state with the second pair excited (per
// spectator configuration; for n = 4 there is exactly one).
EnergyConservingUnitary simultaneous_pair_swap(int n_qubits,
                                               std::pair<std::pair<int, int>, std::pair<int, int>> pairs,
                                               double theta);

enum class RotationSet {
  all_pairs,  // one Givens angle per unordered pair of states within each sector
  chain,      // adjacent-transposition chain within each sector
};

struct RandomUnitaryOptions {
  RotationSet set = RotationSet::all_pairs;
  bool with_phases = false;
};

// Random block unitary: a composition of Givens rotations with angles drawn
// uniformly from [0, 2*pi). All angles are drawn before any phases so that
// runs with and without phases see identical angle sequences from one seed.
EnergyConservingUnitary random_sector_unitary(int n_qubits, RandomStream& rng,
                                              const RandomUnitaryOptions& opts = {});

// Number of Givens angles random_sector_unitary draws for this size/mode.
int random_rotation_count(int n_qubits, RotationSet set);

// Expand rotations on k abstract qubits into the n-qubit space: abstract bit
// for slot s is routed to qubit slot_to_qubit[s-1], and each configuration of
// the remaining qubits becomes an independent rotation.
std::vector<GivensRotation> embed_rotations(int k, const std::vector<GivensRotation>& abstract,
                                            int n_qubits, const std::vector<int>& slot_to_qubit);

}  // namespace qland
