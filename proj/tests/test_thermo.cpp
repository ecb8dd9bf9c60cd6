#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qland/sectors.hpp"
#include "qland/thermo.hpp"
#include "test_helpers.hpp"

using namespace qland;

namespace {

constexpr double kPi = std::numbers::pi;

DensityMatrix bell_projector() {
  Matrix bell = Matrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  return DensityMatrix(2, bell);
}

DensityMatrix evolved_thermal_pair(double p1, double p2, double theta, double phi = 0.0) {
  return apply(two_qubit_partial_swap(2, {1, 2}, theta, phi), product_state({{p1, 1.0}, {p2, 1.0}}));
}

}  // namespace

TEST_CASE("von Neumann entropy") {
  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  CHECK(von_neumann_entropy(DensityMatrix(1, pure)) == doctest::Approx(0.0).epsilon(1e-12));

  Matrix half = 0.5 * Matrix::Identity(2, 2);
  CHECK(von_neumann_entropy(DensityMatrix(1, half)) == doctest::Approx(1.0).epsilon(1e-13));

  // Binary entropy H(0.2) = 0.721928094887362 bits.
  CHECK(von_neumann_entropy(thermal_qubit({0.2, 1.0})) ==
        doctest::Approx(0.721928094887362).epsilon(1e-12));
}

TEST_CASE("entropy is unitarily invariant and subadditive on evolved states") {
  RandomStream rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const auto specs = qland::testing::random_specs(2, rng);
    const auto rho = product_state(specs);
    const auto u = random_sector_unitary(2, rng, {RotationSet::all_pairs, true});
    const auto evolved = apply(u, rho);
    CHECK(von_neumann_entropy(evolved) == doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-10));
    const double s1 = von_neumann_entropy(partial_trace(evolved, {1}));
    const double s2 = von_neumann_entropy(partial_trace(evolved, {2}));
    CHECK(s1 + s2 >= von_neumann_entropy(evolved) - 1e-10);
  }
}

TEST_CASE("linear entropy") {
  Matrix pure = Matrix::Zero(4, 4);
  pure(0, 0) = 1.0;
  CHECK(linear_entropy(DensityMatrix(2, pure)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(linear_entropy(DensityMatrix(2, 0.25 * Matrix::Identity(4, 4))) ==
        doctest::Approx(1.0).epsilon(1e-14));
  // (4/3)(1 - (0.64^2 + 2*0.16^2 + 0.04^2)) = (4/3)(1 - 0.4624) = 0.7168.
  CHECK(linear_entropy(product_state({{0.2, 1.0}, {0.2, 1.0}})) ==
        doctest::Approx(0.7168).epsilon(1e-13));
  CHECK_THROWS_AS(linear_entropy(thermal_qubit({0.2, 1.0})), std::invalid_argument);
}

TEST_CASE("trace distance") {
  const auto a = thermal_qubit({0.4, 1.0});
  const auto b = thermal_qubit({0.2, 1.0});
  CHECK(trace_distance(a, a) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(trace_distance(a, b) == doctest::Approx(0.2).epsilon(1e-13));

  Matrix g = Matrix::Zero(2, 2), e = Matrix::Zero(2, 2);
  g(0, 0) = 1.0;
  e(1, 1) = 1.0;
  CHECK(trace_distance(DensityMatrix(1, g), DensityMatrix(1, e)) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(trace_distance(a, bell_projector()), std::invalid_argument);
}

TEST_CASE("relative entropy") {
  const auto a = thermal_qubit({0.2, 1.0});
  const auto b = thermal_qubit({0.4, 1.0});
  CHECK(relative_entropy(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  // 0.8 log2(0.8/0.6) + 0.2 log2(0.2/0.4) = 0.132029999423075.
  CHECK(relative_entropy(a, b) == doctest::Approx(0.132029999423075).epsilon(1e-12));
  CHECK(relative_entropy(b, a) >= 0.0);

  Matrix pure = Matrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  const DensityMatrix support_violator(1, pure);
  Matrix half = 0.5 * Matrix::Identity(2, 2);
  const DensityMatrix mixed(1, half);
  CHECK_THROWS_AS(relative_entropy(mixed, support_violator), std::runtime_error);
  CHECK(std::isinf(relative_entropy(mixed, support_violator, SupportPolicy::infinity)));
  // Support of the pure state lies inside the mixed state: finite.
  CHECK(relative_entropy(support_violator, mixed) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("concurrence reference points") {
  CHECK(concurrence(bell_projector()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(concurrence(product_state({{0.3, 1.0}, {0.1, 1.0}})) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("x-form concurrence agrees with the spectral form") {
  RandomStream rng(77);
  for (int rep = 0; rep < 200; ++rep) {
    const double p1 = rng.uniform(0.02, 0.48);
    const double p2 = rng.uniform(0.02, 0.48);
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const auto rho = evolved_thermal_pair(p1, p2, theta, phi);
    CHECK(concurrence_x_form(rho) == doctest::Approx(concurrence(rho)).epsilon(1e-10));
  }
}

TEST_CASE("x-form boundary cases and pattern check") {
  // Diagonal state: no coherence, zero concurrence.
  CHECK(concurrence_x_form(product_state({{0.2, 1.0}, {0.3, 1.0}})) == 0.0);

  // Zero corner population with coherence: concurrence 2|rho23|.
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = 0.5;
  m(1, 1) = 0.25;
  m(2, 2) = 0.25;
  m(1, 2) = 0.2;
  m(2, 1) = 0.2;
  CHECK(concurrence_x_form(DensityMatrix(2, m)) == doctest::Approx(0.4).epsilon(1e-13));

  CHECK_THROWS_AS(concurrence_x_form(bell_projector()), std::invalid_argument);
}

TEST_CASE("mutual information") {
  CHECK(mutual_information(product_state({{0.2, 1.0}, {0.3, 1.0}}), {1}) ==
        doctest::Approx(0.0).epsilon(1e-11));
  CHECK(mutual_information(bell_projector(), {1}) == doctest::Approx(2.0).epsilon(1e-11));
  CHECK_THROWS_AS(mutual_information(bell_projector(), {1, 2}), std::invalid_argument);

  // With the total excitation fixed, equal populations freeze the dynamics
  // (the single-excitation block is proportional to the identity), so no
  // mutual information develops there; correlations grow with the asymmetry.
  const double total = 0.5;
  CHECK(mutual_information(evolved_thermal_pair(total / 2, total / 2, kPi / 4), {1}) ==
        doctest::Approx(0.0).epsilon(1e-11));
  double previous = -1.0;
  for (int k = 9; k >= 1; --k) {
    const double p1 = total * k / 20.0;
    const double mi = mutual_information(evolved_thermal_pair(p1, total - p1, kPi / 4), {1});
    CHECK(mi > previous);
    previous = mi;
  }
}

TEST_CASE("free energy") {
  const auto h1 = Hamiltonian0::uniform(1);
  Matrix ground = Matrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(free_energy(DensityMatrix(1, ground), 0.7, h1) == doctest::Approx(0.0).epsilon(1e-14));

  // 0.2 - ln2 * H(0.2) = -0.300402423538188.
  CHECK(free_energy(thermal_qubit({0.2, 1.0}), 1.0, h1) ==
        doctest::Approx(-0.300402423538188).epsilon(1e-12));
  CHECK_THROWS_AS(free_energy(thermal_qubit({0.2, 1.0}), 0.0, h1), std::invalid_argument);

  // Grid scan: among diagonal single-qubit states the Gibbs state at the
  // reference temperature minimizes the free energy.
  const double t_ref = 0.9;
  const double p_star = population_from_temperature(t_ref);
  double best_q = -1.0, best_f = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 400; ++k) {
    const double q = k / 400.0;
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 1.0 - q;
    d(1, 1) = q;
    const double f = free_energy(DensityMatrix(1, d), t_ref, h1);
    if (f < best_f) {
      best_f = f;
      best_q = q;
    }
  }
  CHECK(std::abs(best_q - p_star) < 1.0 / 400.0 + 1e-12);
}

TEST_CASE("extractable work") {
  const auto h1 = Hamiltonian0::uniform(1);
  const double t = temperature_from_population(0.3);
  CHECK(extractable_work(thermal_qubit({0.3, 1.0}), t, h1) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Identity with the relative-entropy route.
  RandomStream rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    const auto rho = qland::testing::random_density_matrix(2, rng);
    const double temp = rng.uniform(0.3, 3.0);
    const auto h2 = Hamiltonian0::uniform(2);
    const double direct = extractable_work(rho, temp, h2);
    const double via_entropy =
        temp * std::numbers::ln2 * relative_entropy(rho, reference_thermal_state(temp, h2));
    CHECK(direct == doctest::Approx(via_entropy).epsilon(1e-10));
    CHECK(direct >= -1e-12);
  }

  // Scalar single-qubit route agrees with the matrix route.
  const double w_scalar = extractable_work_qubit(0.2, temperature_from_population(0.3));
  const double w_matrix =
      extractable_work(thermal_qubit({0.2, 1.0}), temperature_from_population(0.3), h1);
  CHECK(w_scalar == doctest::Approx(w_matrix).epsilon(1e-13));
}

TEST_CASE("delta extractable work vanishes without evolution") {
  const auto h1 = Hamiltonian0::uniform(1);
  const auto rho = thermal_qubit({0.25, 1.0});
  CHECK(delta_extractable_work(rho, 1.1, rho, 1.1, h1) == doctest::Approx(0.0).epsilon(1e-13));
}
