#include "qland/qstate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qland {

void validate_qubit_spec(const QubitSpec& spec) {
  if (!(spec.p > 0.0 && spec.p < 0.5)) {
    throw std::invalid_argument("population fraction must lie in (0, 0.5), got " +
                                std::to_string(spec.p));
  }
  if (!(spec.e1 > 0.0)) {
    throw std::invalid_argument("level spacing must be positive");
  }
}

DensityMatrix::DensityMatrix(int n_qubits, Matrix entries) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count out of range");
  }
  const int d = 1 << n_qubits;
  if (entries.rows() != d || entries.cols() != d) {
    throw std::invalid_argument("density matrix dimension does not match qubit count");
  }
  const double herm = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw std::invalid_argument("density matrix is not Hermitian (deviation " +
                                std::to_string(herm) + ")");
  }
  const double tr = entries.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw std::invalid_argument("density matrix trace deviates from 1 by " +
                                std::to_string(tr - 1.0));
  }
  entries_ = std::move(entries);
}

double DensityMatrix::max_offdiagonal() const {
  double m = 0.0;
  for (int i = 0; i < entries_.rows(); ++i) {
    for (int j = 0; j < entries_.cols(); ++j) {
      if (i != j) m = std::max(m, std::abs(entries_(i, j)));
    }
  }
  return m;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Hamiltonian0::Hamiltonian0(std::vector<double> level_spacings) : spacings_(std::move(level_spacings)) {
  if (spacings_.empty() || spacings_.size() > kMaxQubits) {
    throw std::invalid_argument("level spacing list size out of range");
  }
  for (double e : spacings_) {
    if (!(e > 0.0)) throw std::invalid_argument("level spacings must be positive");
  }
}

Hamiltonian0 Hamiltonian0::uniform(int n_qubits, double e1) {
  return Hamiltonian0(std::vector<double>(n_qubits, e1));
}

double Hamiltonian0::basis_energy(int basis_index) const {
  const int n = n_qubits();
  double e = 0.0;
  for (int q = 1; q <= n; ++q) {
    if (qubit_excited(basis_index, n, q)) e += spacings_[q - 1];
  }
  return e;
}

Eigen::VectorXd Hamiltonian0::diagonal() const {
  const int d = 1 << n_qubits();
  Eigen::VectorXd diag(d);
  for (int b = 0; b < d; ++b) diag(b) = basis_energy(b);
  return diag;
}

DensityMatrix thermal_qubit(const QubitSpec& spec) {
  validate_qubit_spec(spec);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 - spec.p;
  m(1, 1) = spec.p;
  return DensityMatrix(1, std::move(m));
}

DensityMatrix product_state(const std::vector<QubitSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("product state needs at least one qubit");
  if (specs.size() > kMaxQubits) throw std::invalid_argument("too many qubits for product state");
  for (const auto& s : specs) validate_qubit_spec(s);
  const int n = static_cast<int>(specs.size());
  const int d = 1 << n;
  Matrix m = Matrix::Zero(d, d);
  for (int b = 0; b < d; ++b) {
    double w = 1.0;
    for (int q = 1; q <= n; ++q) {
      w *= qubit_excited(b, n, q) ? specs[q - 1].p : 1.0 - specs[q - 1].p;
    }
    m(b, b) = w;
  }
  return DensityMatrix(n, std::move(m));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const int n = a.n_qubits() + b.n_qubits();
  if (n > kMaxQubits) throw std::invalid_argument("tensor product exceeds qubit cap");
  const int da = a.dim(), db = b.dim();
  Matrix m(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      m.block(i * db, j * db, db, db) = a.mat()(i, j) * b.mat();
    }
  }
  return DensityMatrix(n, std::move(m));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const int n = rho.n_qubits();
  if (keep.empty()) throw std::invalid_argument("partial trace must keep at least one qubit");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  for (int q : kept) {
    if (q < 1 || q > n) throw std::invalid_argument("partial trace: qubit index out of range");
  }
  const int k = static_cast<int>(kept.size());
  std::vector<int> traced;
  for (int q = 1; q <= n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  const int t = n - k;

  // Scatter the bits of a reduced index onto the kept qubit positions.
  auto scatter = [&](int reduced, const std::vector<int>& qubits) {
    int full = 0;
    for (int pos = 0; pos < static_cast<int>(qubits.size()); ++pos) {
      const int bit = (reduced >> (static_cast<int>(qubits.size()) - 1 - pos)) & 1;
      full |= bit << qubit_bit(n, qubits[pos]);
    }
    return full;
  };

  const int dk = 1 << k;
  const int dt = 1 << t;
  Matrix m = Matrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i) {
    for (int j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (int s = 0; s < dt; ++s) {
        const int env = scatter(s, traced);
        sum += rho.mat()(scatter(i, kept) | env, scatter(j, kept) | env);
      }
      m(i, j) = sum;
    }
  }
  return DensityMatrix(k, std::move(m));
}

double population_fraction(const DensityMatrix& rho) {
  if (rho.n_qubits() != 1) {
    throw std::invalid_argument("population fraction is defined for a single qubit");
  }
  return rho.diagonal(1);
}

double temperature_from_population(double p, double e1, BoundaryPolicy policy) {
  if (!(e1 > 0.0)) throw std::invalid_argument("level spacing must be positive");
  if (p == 0.5 && policy == BoundaryPolicy::infinity) {
    return std::numeric_limits<double>::infinity();
  }
  if (!(p > 0.0 && p < 0.5)) {
    throw std::invalid_argument("temperature undefined for population " + std::to_string(p));
  }
  return e1 / std::log((1.0 - p) / p);
}

double population_from_temperature(double temperature, double e1) {
  if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
  if (!(e1 > 0.0)) throw std::invalid_argument("level spacing must be positive");
  return 1.0 / (1.0 + std::exp(e1 / temperature));
}

double expected_energy(const DensityMatrix& rho, const Hamiltonian0& h0) {
  if (rho.n_qubits() != h0.n_qubits()) {
    throw std::invalid_argument("state and Hamiltonian dimension mismatch");
  }
  double e = 0.0;
  for (int b = 0; b < rho.dim(); ++b) e += rho.diagonal(b) * h0.basis_energy(b);
  return e;
}

}  // namespace qland
