#include "qland/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qland {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kSupportTol = 1e-14;
constexpr double kXFormTol = 1e-12;

// Eigenvalues of a density matrix, ascending, with small negatives clipped.
Eigen::VectorXd state_eigenvalues(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.mat(), Eigen::EigenvaluesOnly);
  Eigen::VectorXd vals = solver.eigenvalues();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < 0.0) {
      if (vals(i) < kPsdTol) {
        throw std::runtime_error("state has a significantly negative eigenvalue");
      }
      vals(i) = 0.0;
    }
  }
  return vals;
}

double entropy_bits(const Eigen::VectorXd& probs) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    if (probs(i) > 0.0) s -= probs(i) * std::log2(probs(i));
  }
  return s;
}

}  // namespace

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_bits(state_eigenvalues(rho));
}

double linear_entropy(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw std::invalid_argument("linear entropy expects two qubits");
  const double purity = (rho.mat() * rho.mat()).trace().real();
  return (4.0 / 3.0) * (1.0 - purity);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("state dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.mat() - b.mat(), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double relative_entropy(const DensityMatrix& a, const DensityMatrix& b, SupportPolicy policy) {
  if (a.n_qubits() != b.n_qubits()) throw std::invalid_argument("state dimension mismatch");

  Eigen::SelfAdjointEigenSolver<Matrix> sb(b.mat());
  const Eigen::VectorXd mu = sb.eigenvalues();
  const Matrix& vb = sb.eigenvectors();

  // -Tr[a log2 b] via the eigenbasis of b, watching for support violations.
  double cross = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double overlap = (vb.col(i).adjoint() * a.mat() * vb.col(i))(0, 0).real();
    if (mu(i) <= kSupportTol) {
      if (overlap > 1e-12) {
        if (policy == SupportPolicy::infinity) return std::numeric_limits<double>::infinity();
        throw std::runtime_error("relative entropy undefined: support violation");
      }
      continue;
    }
    cross -= overlap * std::log2(mu(i));
  }
  return cross - von_neumann_entropy(a);
}

double concurrence(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw std::invalid_argument("concurrence expects two qubits");
  Matrix flip = Matrix::Zero(4, 4);  // sigma_y tensor sigma_y
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;
  const Matrix m = rho.mat() * flip * rho.mat().conjugate() * flip;
  Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < 4; ++i) {
    const Complex ev = solver.eigenvalues()(i);
    const double re = std::max(ev.real(), 0.0);
    roots.push_back(std::sqrt(re));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

double concurrence_x_form(const DensityMatrix& rho) {
  if (rho.n_qubits() != 2) throw std::invalid_argument("concurrence expects two qubits");
  const Matrix& m = rho.mat();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const bool allowed = i == j || (i == 1 && j == 2) || (i == 2 && j == 1);
      if (!allowed && std::abs(m(i, j)) > kXFormTol) {
        throw std::invalid_argument("state lacks the single-excitation coherence pattern");
      }
    }
  }
  return 2.0 * std::max(0.0, std::abs(m(1, 2)) - std::sqrt(m(0, 0).real() * m(3, 3).real()));
}

double mutual_information(const DensityMatrix& rho, const std::vector<int>& keep_a) {
  const int n = rho.n_qubits();
  std::vector<bool> in_a(n + 1, false);
  for (int q : keep_a) {
    if (q < 1 || q > n) throw std::invalid_argument("bipartition index out of range");
    in_a[q] = true;
  }
  std::vector<int> a, b;
  for (int q = 1; q <= n; ++q) (in_a[q] ? a : b).push_back(q);
  if (a.empty() || b.empty()) throw std::invalid_argument("bipartition must be proper");
  return von_neumann_entropy(partial_trace(rho, a)) + von_neumann_entropy(partial_trace(rho, b)) -
         von_neumann_entropy(rho);
}

double free_energy(const DensityMatrix& rho, double temperature, const Hamiltonian0& h0) {
  if (!(temperature > 0.0)) throw std::invalid_argument("reference temperature must be positive");
  return expected_energy(rho, h0) - temperature * kLn2 * von_neumann_entropy(rho);
}

DensityMatrix reference_thermal_state(double temperature, const Hamiltonian0& h0) {
  if (!(temperature > 0.0)) throw std::invalid_argument("reference temperature must be positive");
  std::vector<QubitSpec> specs;
  for (double e1 : h0.level_spacings()) {
    specs.push_back({population_from_temperature(temperature, e1), e1});
  }
  return product_state(specs);
}

double extractable_work(const DensityMatrix& rho, double temperature, const Hamiltonian0& h0) {
  const DensityMatrix th = reference_thermal_state(temperature, h0);
  return free_energy(rho, temperature, h0) - free_energy(th, temperature, h0);
}

double delta_extractable_work(const DensityMatrix& rho0, double t0, const DensityMatrix& rho1,
                              double t1, const Hamiltonian0& h0) {
  return extractable_work(rho1, t1, h0) - extractable_work(rho0, t0, h0);
}

double extractable_work_qubit(double q, double temperature) {
  if (!(temperature > 0.0)) throw std::invalid_argument("reference temperature must be positive");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("population out of range");
  auto entropy_nats = [](double p) {
    double s = 0.0;
    if (p > 0.0) s -= p * std::log(p);
    if (p < 1.0) s -= (1.0 - p) * std::log(1.0 - p);
    return s;
  };
  const double p_th = population_from_temperature(temperature, 1.0);
  const double f = q - temperature * entropy_nats(q);
  const double f_th = p_th - temperature * entropy_nats(p_th);
  return f - f_th;
}

}  // namespace qland
