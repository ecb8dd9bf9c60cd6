#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qland/sectors.hpp"
#include "qland/thermo.hpp"
#include "test_helpers.hpp"

using namespace qland;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent oracle: exponential of the embedded swap generator
// |10><01| + |01><10| on the given pair, via spectral decomposition.
Matrix exchange_generator_exponential(int n, std::pair<int, int> pair, double theta) {
  const int dim = 1 << n;
  Matrix g = Matrix::Zero(dim, dim);
  const int bi = 1 << qubit_bit(n, pair.first);
  const int bj = 1 << qubit_bit(n, pair.second);
  for (int s = 0; s < dim; ++s) {
    if (s & (bi | bj)) continue;
    g(s | bi, s | bj) = 1.0;
    g(s | bj, s | bi) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(g);
  Matrix phases = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    phases(k, k) = std::exp(Complex(0.0, -theta * es.eigenvalues()(k)));
  }
  return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("sector decomposition dimensions") {
  for (int n : {2, 3, 4}) {
    const auto d = sector_decomposition(n);
    int total = 0;
    for (int m = 0; m <= n; ++m) {
      total += static_cast<int>(d.sectors[m].size());
      for (std::size_t k = 1; k < d.sectors[m].size(); ++k) {
        CHECK(d.sectors[m][k] > d.sectors[m][k - 1]);
      }
    }
    CHECK(total == (1 << n));
  }
  CHECK(sector_decomposition(2).sectors[1].size() == 2);
  const auto d3 = sector_decomposition(3);
  CHECK(d3.sectors[1].size() == 3);
  CHECK(d3.sectors[2].size() == 3);
  const auto d4 = sector_decomposition(4);
  CHECK(d4.sectors[1].size() == 4);
  CHECK(d4.sectors[2].size() == 6);
  CHECK(d4.sectors[3].size() == 4);
  // Energy-major ordering: |000>,|001>,|010>,|100>,|011>,|101>,|110>,|111>.
  CHECK(d3.energy_order == std::vector<int>{0, 1, 2, 4, 3, 5, 6, 7});
  CHECK_THROWS_AS(sector_decomposition(0), std::invalid_argument);
  CHECK_THROWS_AS(sector_decomposition(9), std::invalid_argument);
}

TEST_CASE("partial swap reproduces the two-qubit rotation block") {
  const double theta = 0.7, phi = 0.3;
  const Matrix u = two_qubit_partial_swap(2, {1, 2}, theta, phi).full_matrix();
  Matrix expect = Matrix::Identity(4, 4);
  expect(1, 1) = std::cos(theta);
  expect(2, 2) = std::cos(theta);
  expect(1, 2) = std::polar(std::sin(theta), phi);
  expect(2, 1) = -std::polar(std::sin(theta), -phi);
  CHECK((u - expect).cwiseAbs().maxCoeff() < 1e-14);

  const Matrix id = two_qubit_partial_swap(2, {1, 2}, 0.0).full_matrix();
  CHECK((id - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full swap exchanges populations") {
  const auto rho = product_state({{0.4, 1.0}, {0.2, 1.0}});
  const auto swapped = apply(two_qubit_partial_swap(2, {1, 2}, kPi / 2), rho);
  CHECK(swapped.diagonal(1) == doctest::Approx(rho.diagonal(2)).epsilon(1e-14));
  CHECK(swapped.diagonal(2) == doctest::Approx(rho.diagonal(1)).epsilon(1e-14));
  CHECK(swapped.diagonal(0) == doctest::Approx(rho.diagonal(0)).epsilon(1e-14));
}

TEST_CASE("partial swap matches the exchange-generator exponential") {
  const double theta = 0.1;
  const Matrix built = two_qubit_partial_swap(4, {1, 2}, theta, -kPi / 2).full_matrix();
  const Matrix oracle = exchange_generator_exponential(4, {1, 2}, theta);
  CHECK((built - oracle).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conditional swap rotates only the conditioned span") {
  const double theta = 0.8;
  const auto u = conditional_swap(4, {1, 2}, {{3, 0}, {4, 0}}, theta);
  const Matrix m = u.full_matrix();
  // |1000> = 8, |0100> = 4; everything else untouched.
  for (int b = 0; b < 16; ++b) {
    if (b == 8 || b == 4) continue;
    CHECK(std::abs(m(b, b) - 1.0) < 1e-14);
  }
  CHECK(std::abs(m(4, 4) - std::cos(theta)) < 1e-14);
  CHECK(std::abs(m(8, 8) - std::cos(theta)) < 1e-14);

  // Full conditioned swap moves the basis population entirely.
  const auto full = conditional_swap(4, {1, 2}, {{3, 0}, {4, 0}}, kPi / 2);
  Matrix basis = Matrix::Zero(16, 16);
  basis(8, 8) = 1.0;  // |1000>
  const auto evolved = apply_dense(full, DensityMatrix(4, basis));
  CHECK(evolved.diagonal(4) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(evolved.diagonal(8) == doctest::Approx(0.0).epsilon(1e-14));

  CHECK((conditional_swap(4, {1, 2}, {{3, 0}, {4, 0}}, 0.0).full_matrix() -
         Matrix::Identity(16, 16))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  CHECK_THROWS_AS(conditional_swap(4, {1, 2}, {{2, 0}, {4, 0}}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(conditional_swap(4, {1, 2}, {{3, 0}}, 0.1), std::invalid_argument);
}

TEST_CASE("simultaneous pair swap matches rotation entries") {
  const double theta = 0.1;
  const auto u = simultaneous_pair_swap(4, {{1, 4}, {2, 3}}, theta);
  const Matrix m = u.full_matrix();
  const int x = 0b1001, y = 0b0110;
  CHECK(std::abs(m(x, x) - std::cos(theta)) < 1e-14);
  CHECK(std::abs(m(y, y) - std::cos(theta)) < 1e-14);
  CHECK(std::abs(m(x, y) - Complex(-std::sin(theta))) < 1e-14);
  CHECK(std::abs(m(y, x) - Complex(std::sin(theta))) < 1e-14);
  for (int b = 0; b < 16; ++b) {
    if (b == x || b == y) continue;
    CHECK(std::abs(m(b, b) - 1.0) < 1e-14);
  }

  const auto full = simultaneous_pair_swap(4, {{1, 4}, {2, 3}}, kPi / 2);
  Matrix basis = Matrix::Zero(16, 16);
  basis(x, x) = 1.0;
  const auto evolved = apply(full, DensityMatrix(4, basis));
  CHECK(evolved.diagonal(y) == doctest::Approx(1.0).epsilon(1e-14));

  CHECK((simultaneous_pair_swap(4, {{1, 4}, {2, 3}}, 0.0).full_matrix() - Matrix::Identity(16, 16))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  CHECK_THROWS_AS(simultaneous_pair_swap(4, {{1, 2}, {2, 3}}, 0.1), std::invalid_argument);
}

TEST_CASE("random sector unitary parameter counts") {
  CHECK(random_rotation_count(2, RotationSet::all_pairs) == 1);
  CHECK(random_rotation_count(3, RotationSet::all_pairs) == 6);
  CHECK(random_rotation_count(4, RotationSet::all_pairs) == 27);
  CHECK(random_rotation_count(4, RotationSet::chain) == 11);

  RandomStream rng(11);
  const auto u = random_sector_unitary(3, rng);
  CHECK(u.descriptor().angles.size() == 6);
}

TEST_CASE("random sector unitaries are unitary and energy conserving") {
  RandomStream rng(3);
  for (int n = 2; n <= 5; ++n) {
    for (bool phases : {false, true}) {
      const auto u = random_sector_unitary(n, rng, {RotationSet::all_pairs, phases});
      CHECK(verify_energy_conserving(u.full_matrix(), Hamiltonian0::uniform(n)));
    }
  }
}

TEST_CASE("same seed gives identical angles with and without phases") {
  RandomStream a(99), b(99);
  const auto u1 = random_sector_unitary(4, a, {RotationSet::all_pairs, false});
  const auto u2 = random_sector_unitary(4, b, {RotationSet::all_pairs, true});
  REQUIRE(u1.descriptor().angles.size() == u2.descriptor().angles.size());
  for (std::size_t i = 0; i < u1.descriptor().angles.size(); ++i) {
    CHECK(u1.descriptor().angles[i] == u2.descriptor().angles[i]);
  }
}

TEST_CASE("compose") {
  RandomStream rng(17);
  const auto u = random_sector_unitary(3, rng);
  const auto id = EnergyConservingUnitary::identity(3);
  CHECK((compose(u, id).full_matrix() - u.full_matrix()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((compose(u, u.adjoint()).full_matrix() - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <
        1e-12);

  const auto r1 = two_qubit_partial_swap(2, {1, 2}, 0.3);
  const auto r2 = two_qubit_partial_swap(2, {1, 2}, 0.5);
  const auto sum = two_qubit_partial_swap(2, {1, 2}, 0.8);
  CHECK((compose(r1, r2).full_matrix() - sum.full_matrix()).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(compose(u, EnergyConservingUnitary::identity(2)), std::invalid_argument);
}

TEST_CASE("sector-block apply agrees with dense conjugation") {
  RandomStream rng(23);
  for (int n = 2; n <= kMaxQubits; ++n) {
    const auto rho = qland::testing::random_density_matrix(n, rng);
    const auto u = random_sector_unitary(n, rng, {RotationSet::all_pairs, true});
    const auto fast = apply(u, rho);
    const auto slow = apply_dense(u, rho);
    CHECK((fast.mat() - slow.mat()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("apply identity and dimension mismatch") {
  RandomStream rng(29);
  const auto rho = qland::testing::random_density_matrix(3, rng);
  const auto id = EnergyConservingUnitary::identity(3);
  CHECK((apply(id, rho).mat() - rho.mat()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(apply(EnergyConservingUnitary::identity(2), rho), std::invalid_argument);
}

TEST_CASE("two-qubit trace distance follows the rotation law") {
  RandomStream rng(31);
  for (int rep = 0; rep < 5; ++rep) {
    const double p1 = rng.uniform(0.05, 0.45);
    const double p2 = rng.uniform(0.05, 0.45);
    const auto rho = product_state({{p1, 1.0}, {p2, 1.0}});
    for (int k = 0; k <= 20; ++k) {
      const double theta = kPi * k / 20.0;
      const auto evolved = apply(two_qubit_partial_swap(2, {1, 2}, theta), rho);
      const double dist =
          trace_distance(partial_trace(evolved, {1}), partial_trace(evolved, {2}));
      CHECK(dist == doctest::Approx(std::abs((p1 - p2) * std::cos(2.0 * theta))).epsilon(1e-10));
    }
  }
}

TEST_CASE("reduced polarized populations are invariant; evolution keeps reduced states diagonal") {
  RandomStream rng(37);
  for (int n : {3, 4}) {
    const auto specs = qland::testing::random_specs(n, rng);
    auto rho = product_state(specs);
    const double ground0 = rho.diagonal(0);
    const double top0 = rho.diagonal((1 << n) - 1);
    for (int rep = 0; rep < 3; ++rep) {
      const auto u = random_sector_unitary(n, rng, {RotationSet::all_pairs, true});
      rho = apply(u, rho);
    }
    CHECK(rho.diagonal(0) == doctest::Approx(ground0).epsilon(1e-13));
    CHECK(rho.diagonal((1 << n) - 1) == doctest::Approx(top0).epsilon(1e-13));
    for (int q = 1; q <= n; ++q) {
      CHECK(partial_trace(rho, {q}).max_offdiagonal() < 1e-12);
    }

    // Energy is conserved by every application.
    const auto h = Hamiltonian0::uniform(n);
    double expect = 0.0;
    for (const auto& s : specs) expect += s.p;
    CHECK(expected_energy(rho, h) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("verify_energy_conserving") {
  CHECK(verify_energy_conserving(two_qubit_partial_swap(2, {1, 2}, 0.9, 0.4).full_matrix(),
                                 Hamiltonian0::uniform(2)));
  CHECK(verify_energy_conserving(simultaneous_pair_swap(4, {{1, 4}, {2, 3}}, 0.2).full_matrix(),
                                 Hamiltonian0::uniform(4)));

  Matrix had(2, 2);
  had << 1, 1, 1, -1;
  had /= std::sqrt(2.0);
  Matrix h1 = Matrix::Zero(4, 4);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      h1.block(2 * i, 2 * j, 2, 2) = had(i, j) * Matrix::Identity(2, 2);
    }
  }
  CHECK_FALSE(verify_energy_conserving(h1, Hamiltonian0::uniform(2)));
}

TEST_CASE("embedded rotations match the named construction") {
  // A two-qubit partial swap on qubits (2,3) of four, built by embedding the
  // abstract two-qubit rotation, must equal the named family.
  const double theta = 0.45;
  const std::vector<GivensRotation> abstract{{0b01, 0b10, theta, 0.0}};
  const auto embedded = embed_rotations(2, abstract, 4, {2, 3});
  const auto u_embed = EnergyConservingUnitary::from_givens(4, embedded, {});
  const auto u_named = two_qubit_partial_swap(4, {2, 3}, theta);
  CHECK((u_embed.full_matrix() - u_named.full_matrix()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(embed_rotations(2, abstract, 4, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(embed_rotations(2, abstract, 4, {2}), std::invalid_argument);
}

TEST_CASE("givens kernel matches dense conjugation") {
  RandomStream rng(41);
  const auto rho = qland::testing::random_density_matrix(3, rng);
  const GivensRotation g{1, 4, 0.6, 1.1};
  Matrix fast = rho.mat();
  apply_givens_inplace(fast, g);
  Matrix u = Matrix::Identity(8, 8);
  left_multiply_givens_inplace(u, g);
  const Matrix slow = u * rho.mat() * u.adjoint();
  CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-14);
}
