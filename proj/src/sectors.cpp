#include "qland/sectors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qland {

namespace {

constexpr double kBlockUnitarityTol = 1e-12;

int popcount(int x) { return std::popcount(static_cast<unsigned>(x)); }

void check_qubit_index(int n, int q) {
  if (q < 1 || q > n) throw std::invalid_argument("qubit index out of range");
}

}  // namespace

SectorDecomposition sector_decomposition(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count out of range");
  }
  SectorDecomposition d;
  d.n_qubits = n_qubits;
  const int dim = 1 << n_qubits;
  d.sectors.resize(n_qubits + 1);
  d.sector_of.resize(dim);
  d.offset_in_sector.resize(dim);
  for (int b = 0; b < dim; ++b) {
    const int m = popcount(b);
    d.sector_of[b] = m;
    d.offset_in_sector[b] = static_cast<int>(d.sectors[m].size());
    d.sectors[m].push_back(b);  // ascending since b is ascending
  }
  for (const auto& sector : d.sectors) {
    d.energy_order.insert(d.energy_order.end(), sector.begin(), sector.end());
  }
  return d;
}

void apply_givens_inplace(Matrix& rho, const GivensRotation& g) {
  const double c = std::cos(g.theta);
  const Complex s = std::polar(std::sin(g.theta), g.phi);
  const auto dim = rho.rows();
  // Row pass: rows a and b of (G rho).
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex ra = rho(g.a, k);
    const Complex rb = rho(g.b, k);
    rho(g.a, k) = c * ra + s * rb;
    rho(g.b, k) = -std::conj(s) * ra + c * rb;
  }
  // Column pass: columns a and b of (G rho) G^dagger.
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex ca = rho(k, g.a);
    const Complex cb = rho(k, g.b);
    rho(k, g.a) = c * ca + std::conj(s) * cb;
    rho(k, g.b) = -s * ca + c * cb;
  }
}

void left_multiply_givens_inplace(Matrix& u, const GivensRotation& g) {
  const double c = std::cos(g.theta);
  const Complex s = std::polar(std::sin(g.theta), g.phi);
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    const Complex ra = u(g.a, k);
    const Complex rb = u(g.b, k);
    u(g.a, k) = c * ra + s * rb;
    u(g.b, k) = -std::conj(s) * ra + c * rb;
  }
}

EnergyConservingUnitary::EnergyConservingUnitary(int n_qubits, std::vector<Matrix> blocks,
                                                 UnitaryDescriptor descriptor)
    : n_qubits_(n_qubits), blocks_(std::move(blocks)), descriptor_(std::move(descriptor)) {}

EnergyConservingUnitary EnergyConservingUnitary::identity(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count out of range");
  }
  return EnergyConservingUnitary(n_qubits, std::vector<Matrix>(n_qubits + 1), UnitaryDescriptor{});
}

EnergyConservingUnitary EnergyConservingUnitary::from_givens(
    int n_qubits, const std::vector<GivensRotation>& rotations, UnitaryDescriptor descriptor) {
  const auto decomp = sector_decomposition(n_qubits);
  std::vector<Matrix> blocks(n_qubits + 1);
  const int dim = 1 << n_qubits;
  for (const auto& g : rotations) {
    if (g.a < 0 || g.a >= dim || g.b < 0 || g.b >= dim || g.a == g.b) {
      throw std::invalid_argument("rotation indices out of range");
    }
    const int m = decomp.sector_of[g.a];
    if (decomp.sector_of[g.b] != m) {
      throw std::invalid_argument("rotation mixes different excitation sectors");
    }
    Matrix& block = blocks[m];
    if (block.size() == 0) {
      const auto d = static_cast<Eigen::Index>(decomp.sectors[m].size());
      block = Matrix::Identity(d, d);
    }
    GivensRotation local{decomp.offset_in_sector[g.a], decomp.offset_in_sector[g.b], g.theta, g.phi};
    left_multiply_givens_inplace(block, local);
  }
  return EnergyConservingUnitary(n_qubits, std::move(blocks), std::move(descriptor));
}

EnergyConservingUnitary EnergyConservingUnitary::from_blocks(int n_qubits, std::vector<Matrix> blocks,
                                                             UnitaryDescriptor descriptor) {
  const auto decomp = sector_decomposition(n_qubits);
  if (blocks.size() != decomp.sectors.size()) {
    throw std::invalid_argument("one block per excitation sector expected");
  }
  for (int m = 0; m <= n_qubits; ++m) {
    const Matrix& b = blocks[m];
    if (b.size() == 0) continue;
    const auto d = static_cast<Eigen::Index>(decomp.sectors[m].size());
    if (b.rows() != d || b.cols() != d) {
      throw std::invalid_argument("block dimension does not match its sector");
    }
    const double dev = (b * b.adjoint() - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > kBlockUnitarityTol) {
      throw std::invalid_argument("sector block is not unitary");
    }
  }
  return EnergyConservingUnitary(n_qubits, std::move(blocks), std::move(descriptor));
}

Matrix EnergyConservingUnitary::block_matrix(int m) const {
  if (m < 0 || m > n_qubits_) throw std::invalid_argument("sector index out of range");
  if (!block_is_identity(m)) return blocks_[m];
  const auto decomp = sector_decomposition(n_qubits_);
  const auto d = static_cast<Eigen::Index>(decomp.sectors[m].size());
  return Matrix::Identity(d, d);
}

Matrix EnergyConservingUnitary::full_matrix() const {
  const auto decomp = sector_decomposition(n_qubits_);
  const int dim = 1 << n_qubits_;
  Matrix u = Matrix::Identity(dim, dim);
  for (int m = 0; m <= n_qubits_; ++m) {
    if (block_is_identity(m)) continue;
    const auto& idx = decomp.sectors[m];
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) {
        u(idx[r], idx[c]) = blocks_[m](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return u;
}

EnergyConservingUnitary EnergyConservingUnitary::adjoint() const {
  std::vector<Matrix> blocks(blocks_.size());
  for (std::size_t m = 0; m < blocks_.size(); ++m) {
    if (blocks_[m].size() != 0) blocks[m] = blocks_[m].adjoint();
  }
  UnitaryDescriptor desc;
  desc.family = "adjoint";
  desc.parts.push_back(descriptor_);
  return EnergyConservingUnitary(n_qubits_, std::move(blocks), std::move(desc));
}

DensityMatrix apply(const EnergyConservingUnitary& u, const DensityMatrix& rho) {
  if (u.n_qubits() != rho.n_qubits()) {
    throw std::invalid_argument("unitary and state dimension mismatch");
  }
  const int n = u.n_qubits();
  const auto decomp = sector_decomposition(n);
  Matrix out = rho.mat();

  struct SectorPair {
    int a, b;
  };
  std::vector<SectorPair> pairs;
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      if (!u.block_is_identity(a) || !u.block_is_identity(b)) pairs.push_back({a, b});
    }
  }

  // Sector-pair submatrices are disjoint, so the updates can run in parallel.
  const auto count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic) if (count > 1 && (1 << n) >= 64)
  for (std::int64_t p = 0; p < count; ++p) {
    const auto& [a, b] = pairs[static_cast<std::size_t>(p)];
    const auto& rows = decomp.sectors[a];
    const auto& cols = decomp.sectors[b];
    Matrix sub(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rho.mat()(rows[r], cols[c]);
      }
    }
    if (!u.block_is_identity(a)) sub = u.block_matrix(a) * sub;
    if (!u.block_is_identity(b)) sub = sub * u.block_matrix(b).adjoint();
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        out(rows[r], cols[c]) = sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return DensityMatrix(n, std::move(out));
}

DensityMatrix apply_dense(const EnergyConservingUnitary& u, const DensityMatrix& rho) {
  if (u.n_qubits() != rho.n_qubits()) {
    throw std::invalid_argument("unitary and state dimension mismatch");
  }
  const Matrix full = u.full_matrix();
  return DensityMatrix(rho.n_qubits(), full * rho.mat() * full.adjoint());
}

EnergyConservingUnitary compose(const EnergyConservingUnitary& first,
                                const EnergyConservingUnitary& second) {
  if (first.n_qubits() != second.n_qubits()) {
    throw std::invalid_argument("cannot compose unitaries of different sizes");
  }
  const int n = first.n_qubits();
  std::vector<Matrix> blocks(n + 1);
  for (int m = 0; m <= n; ++m) {
    const bool ida = first.block_is_identity(m);
    const bool idb = second.block_is_identity(m);
    if (ida && idb) continue;
    if (ida) {
      blocks[m] = second.block_matrix(m);
    } else if (idb) {
      blocks[m] = first.block_matrix(m);
    } else {
      blocks[m] = second.block_matrix(m) * first.block_matrix(m);
    }
  }
  UnitaryDescriptor desc;
  desc.family = "composite";
  desc.parts = {first.descriptor(), second.descriptor()};
  return EnergyConservingUnitary::from_blocks(n, std::move(blocks), std::move(desc));
}

bool verify_energy_conserving(const Matrix& u, const Hamiltonian0& h0, double tol) {
  const int dim = 1 << h0.n_qubits();
  if (u.rows() != dim || u.cols() != dim) {
    throw std::invalid_argument("matrix dimension does not match Hamiltonian");
  }
  const double unit_dev = (u * u.adjoint() - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (unit_dev >= tol) return false;
  const Matrix h = h0.diagonal().cast<Complex>().asDiagonal();
  const double comm_dev = (u * h - h * u).cwiseAbs().maxCoeff();
  return comm_dev < tol;
}

EnergyConservingUnitary two_qubit_partial_swap(int n_qubits, std::pair<int, int> pair, double theta,
                                               double phi) {
  const auto [i, j] = pair;
  check_qubit_index(n_qubits, i);
  check_qubit_index(n_qubits, j);
  if (i == j) throw std::invalid_argument("swap pair must use distinct qubits");

  const int bit_i = 1 << qubit_bit(n_qubits, i);
  const int bit_j = 1 << qubit_bit(n_qubits, j);
  std::vector<GivensRotation> rotations;
  const int dim = 1 << n_qubits;
  for (int s = 0; s < dim; ++s) {
    if (s & (bit_i | bit_j)) continue;  // enumerate spectator configurations
    rotations.push_back({s | bit_j, s | bit_i, theta, phi});
  }
  UnitaryDescriptor desc;
  desc.family = "partial_swap";
  desc.qubits = {i, j};
  desc.angles = {theta};
  desc.phases = {phi};
  return EnergyConservingUnitary::from_givens(n_qubits, rotations, std::move(desc));
}

EnergyConservingUnitary conditional_swap(int n_qubits, std::pair<int, int> pair,
                                         const std::vector<std::pair<int, int>>& condition,
                                         double theta) {
  const auto [i, j] = pair;
  check_qubit_index(n_qubits, i);
  check_qubit_index(n_qubits, j);
  if (i == j) throw std::invalid_argument("swap pair must use distinct qubits");

  int pattern = 0;
  std::vector<bool> fixed(n_qubits + 1, false);
  for (const auto& [q, bit] : condition) {
    check_qubit_index(n_qubits, q);
    if (q == i || q == j) throw std::invalid_argument("condition overlaps the swapped pair");
    if (fixed[q]) throw std::invalid_argument("condition repeats a qubit");
    if (bit != 0 && bit != 1) throw std::invalid_argument("condition bits must be 0 or 1");
    fixed[q] = true;
    if (bit) pattern |= 1 << qubit_bit(n_qubits, q);
  }
  for (int q = 1; q <= n_qubits; ++q) {
    if (q != i && q != j && !fixed[q]) {
      throw std::invalid_argument("condition must fix every qubit outside the pair");
    }
  }

  const int bit_i = 1 << qubit_bit(n_qubits, i);
  const int bit_j = 1 << qubit_bit(n_qubits, j);
  UnitaryDescriptor desc;
  desc.family = "conditional_swap";
  desc.qubits = {i, j};
  desc.condition = condition;
  desc.angles = {theta};
  std::vector<GivensRotation> rotations{{pattern | bit_j, pattern | bit_i, theta, 0.0}};
  return EnergyConservingUnitary::from_givens(n_qubits, rotations, std::move(desc));
}

EnergyConservingUnitary simultaneous_pair_swap(
    int n_qubits, std::pair<std::pair<int, int>, std::pair<int, int>> pairs, double theta) {
  const auto [first, second] = pairs;
  const std::vector<int> qubits{first.first, first.second, second.first, second.second};
  for (int q : qubits) check_qubit_index(n_qubits, q);
  std::vector<int> sorted = qubits;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("simultaneous swap needs four distinct qubits");
  }

  const int mask_first =
      (1 << qubit_bit(n_qubits, first.first)) | (1 << qubit_bit(n_qubits, first.second));
  const int mask_second =
      (1 << qubit_bit(n_qubits, second.first)) | (1 << qubit_bit(n_qubits, second.second));
  std::vector<GivensRotation> rotations;
  const int dim = 1 << n_qubits;
  for (int s = 0; s < dim; ++s) {
    if (s & (mask_first | mask_second)) continue;
    rotations.push_back({s | mask_second, s | mask_first, theta, 0.0});
  }
  UnitaryDescriptor desc;
  desc.family = "simultaneous_pair_swap";
  desc.qubits = qubits;
  desc.angles = {theta};
  return EnergyConservingUnitary::from_givens(n_qubits, rotations, std::move(desc));
}

namespace {

std::vector<std::pair<int, int>> sector_rotation_pairs(int sector_dim, RotationSet set) {
  std::vector<std::pair<int, int>> pairs;
  if (set == RotationSet::all_pairs) {
    for (int i = 0; i < sector_dim; ++i) {
      for (int j = i + 1; j < sector_dim; ++j) pairs.emplace_back(i, j);
    }
  } else {
    for (int i = 0; i + 1 < sector_dim; ++i) pairs.emplace_back(i, i + 1);
  }
  return pairs;
}

}  // namespace

int random_rotation_count(int n_qubits, RotationSet set) {
  const auto decomp = sector_decomposition(n_qubits);
  int count = 0;
  for (const auto& sector : decomp.sectors) {
    count += static_cast<int>(sector_rotation_pairs(static_cast<int>(sector.size()), set).size());
  }
  return count;
}

EnergyConservingUnitary random_sector_unitary(int n_qubits, RandomStream& rng,
                                              const RandomUnitaryOptions& opts) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const auto decomp = sector_decomposition(n_qubits);

  std::vector<GivensRotation> rotations;
  for (int m = 0; m <= n_qubits; ++m) {
    const auto& sector = decomp.sectors[m];
    for (const auto& [i, j] : sector_rotation_pairs(static_cast<int>(sector.size()), opts.set)) {
      rotations.push_back({sector[i], sector[j], rng.uniform(0.0, two_pi), 0.0});
    }
  }
  if (opts.with_phases) {
    for (auto& g : rotations) g.phi = rng.uniform(0.0, two_pi);
  }

  UnitaryDescriptor desc;
  desc.family = "random_sector";
  desc.mode = opts.set == RotationSet::all_pairs ? "all_pairs" : "chain";
  desc.with_phases = opts.with_phases;
  for (const auto& g : rotations) {
    desc.angles.push_back(g.theta);
    desc.phases.push_back(g.phi);
  }
  return EnergyConservingUnitary::from_givens(n_qubits, rotations, std::move(desc));
}

std::vector<GivensRotation> embed_rotations(int k, const std::vector<GivensRotation>& abstract,
                                            int n_qubits, const std::vector<int>& slot_to_qubit) {
  if (static_cast<int>(slot_to_qubit.size()) != k) {
    throw std::invalid_argument("slot map size must match abstract qubit count");
  }
  int used_mask = 0;
  for (int q : slot_to_qubit) {
    check_qubit_index(n_qubits, q);
    const int bit = 1 << qubit_bit(n_qubits, q);
    if (used_mask & bit) throw std::invalid_argument("slot map repeats a qubit");
    used_mask |= bit;
  }

  auto route = [&](int abstract_index) {
    int full = 0;
    for (int slot = 1; slot <= k; ++slot) {
      if ((abstract_index >> (k - slot)) & 1) {
        full |= 1 << qubit_bit(n_qubits, slot_to_qubit[slot - 1]);
      }
    }
    return full;
  };

  std::vector<GivensRotation> result;
  const int dim = 1 << n_qubits;
  for (int s = 0; s < dim; ++s) {
    if (s & used_mask) continue;
    for (const auto& g : abstract) {
      result.push_back({route(g.a) | s, route(g.b) | s, g.theta, g.phi});
    }
  }
  return result;
}

}  // namespace qland
