#include "qland/machines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <omp.h>

namespace qland {

namespace {

constexpr double kQuarterTurn = std::numbers::pi / 4.0;

void validate_slots(const MachineSpec& spec) {
  const int n = static_cast<int>(spec.initial.size());
  if (n < 2 || n > kMaxQubits) throw std::invalid_argument("machine needs 2..8 qubits");
  if (spec.unitary.n_qubits() != n) throw std::invalid_argument("unitary size mismatch");
  if (spec.actor_slots.empty() || static_cast<int>(spec.actor_slots.size()) >= n) {
    throw std::invalid_argument("actor must be a proper nonempty subsystem");
  }
  std::vector<bool> seen(n + 1, false);
  for (int s : spec.actor_slots) {
    if (s < 1 || s > n || seen[s]) throw std::invalid_argument("invalid actor slot");
    seen[s] = true;
  }
  if (spec.ref_slot < 1 || spec.ref_slot > n || seen[spec.ref_slot]) {
    throw std::invalid_argument("reference slot must be a non-actor slot");
  }
}

Hamiltonian0 actor_hamiltonian(const MachineSpec& spec) {
  std::vector<double> spacings;
  for (int s : spec.actor_slots) spacings.push_back(spec.initial[s - 1].e1);
  return Hamiltonian0(spacings);
}

// Temperature matching the state's mean population; requires equal spacings
// across the actor when it spans several qubits.
double reference_temperature_of(const DensityMatrix& evolved_ref, const MachineSpec& spec) {
  const auto k = spec.actor_slots.size();
  double mean_population = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    DensityMatrix marginal =
        k == 1 ? evolved_ref : partial_trace(evolved_ref, {static_cast<int>(i) + 1});
    mean_population += population_fraction(marginal);
  }
  mean_population /= static_cast<double>(k);
  const double e1 = spec.initial[spec.actor_slots[0] - 1].e1;
  if (k > 1) {
    for (int s : spec.actor_slots) {
      if (spec.initial[s - 1].e1 != e1) {
        throw std::invalid_argument("multi-qubit actors need equal level spacings");
      }
    }
  }
  return temperature_from_population(mean_population, e1);
}

}  // namespace

MachineOutcome run_machine(const MachineSpec& spec) {
  validate_slots(spec);
  const int n = static_cast<int>(spec.initial.size());
  const Hamiltonian0 h_actor = actor_hamiltonian(spec);

  const QubitSpec ref_spec = spec.initial[spec.ref_slot - 1];
  const double t0 = temperature_from_population(ref_spec.p, ref_spec.e1);

  const DensityMatrix rho0 = product_state(spec.initial);
  const DensityMatrix rho1 = apply(spec.unitary, rho0);

  // Reference copy through the same machine: actor slots re-thermalized at t0.
  std::vector<QubitSpec> ref_initial = spec.initial;
  for (int s : spec.actor_slots) {
    ref_initial[s - 1].p = population_from_temperature(t0, ref_initial[s - 1].e1);
  }
  const DensityMatrix ref_rho1 = apply(spec.unitary, product_state(ref_initial));

  MachineOutcome out{
      .sys_before = partial_trace(rho0, spec.actor_slots),
      .sys_after = partial_trace(rho1, spec.actor_slots),
      .ref_before = thermal_qubit(ref_spec),
      .ref_after = partial_trace(ref_rho1, spec.actor_slots),
  };
  out.t0 = t0;
  out.t1 = reference_temperature_of(out.ref_after, spec);
  out.w_ex_before = extractable_work(out.sys_before, out.t0, h_actor);
  out.w_ex_after = extractable_work(out.sys_after, out.t1, h_actor);
  out.delta_w_ex = out.w_ex_after - out.w_ex_before;
  out.final_populations.resize(n);
  for (int q = 1; q <= n; ++q) {
    out.final_populations[q - 1] = population_fraction(partial_trace(rho1, {q}));
  }
  return out;
}

DensityMatrix machine_channel_apply(const MachineSpec& spec, const DensityMatrix& actor_state) {
  validate_slots(spec);
  const int n = static_cast<int>(spec.initial.size());
  if (actor_state.n_qubits() != static_cast<int>(spec.actor_slots.size())) {
    throw std::invalid_argument("actor state size does not match the actor slots");
  }

  // Assemble actor_state on the actor slots and machine qubits elsewhere,
  // in slot order. Build as (actor block) tensor (environment), then permute
  // by relabeling indices.
  std::vector<int> actor_sorted = spec.actor_slots;
  std::sort(actor_sorted.begin(), actor_sorted.end());
  std::vector<int> env_slots;
  for (int s = 1; s <= n; ++s) {
    if (!std::binary_search(actor_sorted.begin(), actor_sorted.end(), s)) env_slots.push_back(s);
  }
  std::vector<QubitSpec> env_specs;
  for (int s : env_slots) env_specs.push_back(spec.initial[s - 1]);
  const DensityMatrix joint = tensor(actor_state, product_state(env_specs));

  // joint qubit order: actor slots (as given), then environment slots.
  std::vector<int> joint_order = spec.actor_slots;
  joint_order.insert(joint_order.end(), env_slots.begin(), env_slots.end());
  auto permute_index = [&](int full) {
    int out = 0;
    for (int pos = 0; pos < n; ++pos) {
      const int bit = (full >> (n - 1 - pos)) & 1;
      out |= bit << qubit_bit(n, joint_order[pos]);
    }
    return out;
  };
  Matrix arranged = Matrix::Zero(1 << n, 1 << n);
  for (int i = 0; i < (1 << n); ++i) {
    for (int j = 0; j < (1 << n); ++j) {
      arranged(permute_index(i), permute_index(j)) = joint.mat()(i, j);
    }
  }
  const DensityMatrix evolved = apply(spec.unitary, DensityMatrix(n, std::move(arranged)));
  return partial_trace(evolved, spec.actor_slots);
}

namespace {

MachineSpec build_trial_machine(int n_qubits, int actor_size, RandomStream& stream,
                                const SearchOptions& opts) {
  std::vector<QubitSpec> initial(n_qubits);
  for (auto& s : initial) s.p = stream.uniform(opts.population_lo, opts.population_hi);
  EnergyConservingUnitary u = random_sector_unitary(n_qubits, stream, opts.unitary);
  std::vector<int> actors(actor_size);
  for (int i = 0; i < actor_size; ++i) actors[i] = i + 1;
  return MachineSpec{std::move(initial), std::move(actors), actor_size + 1, std::move(u)};
}

}  // namespace

MachineSpec search_trial_machine(int n_qubits, int actor_size, std::uint64_t master_seed,
                                 std::int64_t trial_index, const SearchOptions& opts) {
  RandomStream stream =
      RandomStream::for_trial(master_seed, static_cast<std::uint64_t>(trial_index));
  return build_trial_machine(n_qubits, actor_size, stream, opts);
}

SearchReport randomized_search(int n_qubits, int actor_size, std::int64_t trials,
                               std::uint64_t master_seed, const SearchOptions& opts) {
  if (n_qubits < 2 || n_qubits > 4) throw std::invalid_argument("search covers 2..4 qubits");
  if (actor_size < 1 || actor_size >= n_qubits) throw std::invalid_argument("bad actor size");
  if (trials < 1) throw std::invalid_argument("at least one trial required");

  std::vector<double> deltas(static_cast<std::size_t>(trials));
  const int threads = opts.workers > 0 ? opts.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::int64_t t = 0; t < trials; ++t) {
    RandomStream stream = RandomStream::for_trial(master_seed, static_cast<std::uint64_t>(t));
    const MachineSpec spec = build_trial_machine(n_qubits, actor_size, stream, opts);
    deltas[static_cast<std::size_t>(t)] = run_machine(spec).delta_w_ex;
  }

  SearchReport report;
  report.n_qubits = n_qubits;
  report.actor_size = actor_size;
  report.trials = trials;
  report.master_seed = master_seed;
  report.epsilon = opts.epsilon;
  report.unitary_mode = opts.unitary.set == RotationSet::all_pairs ? "all_pairs" : "chain";
  report.with_phases = opts.unitary.with_phases;
  report.best_delta = -std::numeric_limits<double>::infinity();
  for (std::int64_t t = 0; t < trials; ++t) {
    const double d = deltas[static_cast<std::size_t>(t)];
    if (d > opts.epsilon) ++report.positive_count;
    if (d > report.best_delta) {
      report.best_delta = d;
      report.best_trial_index = t;
    }
  }
  const MachineSpec best =
      search_trial_machine(n_qubits, actor_size, master_seed, report.best_trial_index, opts);
  for (const auto& s : best.initial) report.best_populations.push_back(s.p);
  report.best_unitary = best.unitary.descriptor();
  report.best_unitary.seed = mix_seed(master_seed, static_cast<std::uint64_t>(report.best_trial_index));
  return report;
}

PopulationEnvelope schur_horn_bounds(const std::vector<QubitSpec>& initial) {
  if (initial.empty()) throw std::invalid_argument("empty machine");
  PopulationEnvelope env{initial[0].p, initial[0].p};
  for (const auto& s : initial) {
    validate_qubit_spec(s);
    env.min_p = std::min(env.min_p, s.p);
    env.max_p = std::max(env.max_p, s.p);
  }
  return env;
}

RefrigeratorReport refrigerator_machine(double e1_1, double e1_2, double t_cold, double t_hot,
                                        double theta) {
  if (!(e1_1 > 0.0 && e1_2 > e1_1)) {
    throw std::invalid_argument("refrigerator needs 0 < e1_1 < e1_2");
  }
  if (!(t_cold > 0.0 && t_hot > t_cold)) {
    throw std::invalid_argument("refrigerator needs 0 < t_cold < t_hot");
  }
  const double e1_3 = e1_2 - e1_1;
  const std::array<double, 3> spacings{e1_1, e1_2, e1_3};
  const std::array<double, 3> temps{t_cold, t_cold, t_hot};

  auto populations_of = [&](const std::array<double, 3>& qubit_temps) {
    std::vector<QubitSpec> specs(3);
    for (int i = 0; i < 3; ++i) {
      specs[i] = {population_from_temperature(qubit_temps[i], spacings[i]), spacings[i]};
    }
    return specs;
  };

  // |101> and |010> are degenerate by construction (E = e1_1 + e1_3 = e1_2);
  // the machine rotates exactly that pair.
  const GivensRotation rotation{0b010, 0b101, theta, 0.0};
  auto evolve = [&](const std::vector<QubitSpec>& specs) {
    Matrix rho = product_state(specs).mat();
    apply_givens_inplace(rho, rotation);
    return DensityMatrix(3, std::move(rho));
  };
  auto marginals = [](const DensityMatrix& rho) {
    std::array<double, 3> q{};
    for (int i = 0; i < 3; ++i) q[i] = population_fraction(partial_trace(rho, {i + 1}));
    return q;
  };

  const auto base_specs = populations_of(temps);
  const DensityMatrix evolved = evolve(base_specs);

  RefrigeratorReport report;
  report.final_populations = marginals(evolved);
  for (int i = 0; i < 3; ++i) {
    report.initial_populations[i] = base_specs[i].p;
    report.initial_temperatures[i] = temps[i];
    report.final_temperatures[i] =
        temperature_from_population(report.final_populations[i], spacings[i]);
  }

  // The assignments discussed for this construction: the cooled qubit or the
  // heated qubit against the hot reference, and the hot qubit against a cold
  // reference.
  const std::array<std::pair<int, int>, 4> assignments{{{1, 3}, {2, 3}, {3, 1}, {3, 2}}};
  for (const auto& [actor, ref] : assignments) {
    const double t0 = temps[ref - 1];
    const Hamiltonian0 h_actor({spacings[actor - 1]});

    auto sub_temps = temps;
    sub_temps[actor - 1] = t0;
    const DensityMatrix ref_evolved = evolve(populations_of(sub_temps));
    const double t1 =
        temperature_from_population(marginals(ref_evolved)[actor - 1], spacings[actor - 1]);

    const DensityMatrix sys_before = thermal_qubit(base_specs[actor - 1]);
    const DensityMatrix sys_after = partial_trace(evolved, {actor});
    const double w0 = extractable_work(sys_before, t0, h_actor);
    const double w1 = extractable_work(sys_after, t1, h_actor);
    report.assignments.push_back({actor, ref, t0, t1, w1 - w0});
  }
  return report;
}

double max_concurrence_reachable(double p1, double p2) {
  const DensityMatrix rho = product_state({{p1, 1.0}, {p2, 1.0}});
  const auto swap = two_qubit_partial_swap(2, {1, 2}, kQuarterTurn);
  return concurrence(apply(swap, rho));
}

namespace {

// Single-excitation rotation used for the three-qubit embedding: spread the
// excitation toward qubit 3, then rotate the pair coherence into qubits 1-2.
std::vector<GivensRotation> embedding_rotations(double theta) {
  return {{0b010, 0b001, theta, 0.0}, {0b100, 0b010, theta, 0.0}};
}

}  // namespace

std::vector<RegionPoint> accessible_region_scan(int grid_resolution, RegionEmbedding embedding,
                                                double p3, std::optional<double> fixed_theta) {
  if (grid_resolution < 10) throw std::invalid_argument("grid resolution must be at least 10");

  std::vector<double> populations;
  for (int i = 1; i <= grid_resolution; ++i) {
    populations.push_back(0.5 * i / (grid_resolution + 1));
  }

  std::vector<RegionPoint> points;
  if (embedding == RegionEmbedding::two_qubit) {
    std::vector<double> thetas;
    if (fixed_theta) {
      thetas.push_back(*fixed_theta);
    } else {
      const int theta_steps = 25;
      for (int j = 0; j <= theta_steps; ++j) {
        thetas.push_back(0.5 * std::numbers::pi * j / theta_steps);
      }
    }
    for (double p1 : populations) {
      for (double p2 : populations) {
        const DensityMatrix rho = product_state({{p1, 1.0}, {p2, 1.0}});
        for (double theta : thetas) {
          const DensityMatrix evolved = apply(two_qubit_partial_swap(2, {1, 2}, theta), rho);
          points.push_back({linear_entropy(evolved), concurrence(evolved)});
        }
      }
    }
    return points;
  }

  validate_qubit_spec({p3, 1.0});
  const double theta = fixed_theta.value_or(kQuarterTurn);
  for (double p1 : populations) {
    for (double p2 : populations) {
      Matrix rho = product_state({{p1, 1.0}, {p2, 1.0}, {p3, 1.0}}).mat();
      for (const auto& g : embedding_rotations(theta)) apply_givens_inplace(rho, g);
      const DensityMatrix reduced = partial_trace(DensityMatrix(3, std::move(rho)), {1, 2});
      points.push_back({linear_entropy(reduced), concurrence(reduced)});
    }
  }
  return points;
}

}  // namespace qland
