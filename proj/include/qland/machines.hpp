#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qland/qstate.hpp"
#include "qland/sectors.hpp"
#include "qland/thermo.hpp"

namespace qland {

// One machine activation: the actor subsystem evolves under the unitary
// together with the reference and enabler qubits. The actor, reference and
// enabler slots partition {1..n}.
struct MachineSpec {
  std::vector<QubitSpec> initial;  // one spec per slot
  std::vector<int> actor_slots;    // 1-based
  int ref_slot = 0;
  EnergyConservingUnitary unitary = EnergyConservingUnitary::identity(2);
};

// The reference temperature evolves by sending a copy of the reference state
// through the same machine: every actor slot is re-initialized to the thermal
// state at the reference temperature (with that slot's own spacing), the same
// unitary is applied, and the evolved actor-slot state defines T1. ref_after
// therefore lives on the actor slots. For multi-qubit actors T1 is the
// temperature whose thermal product matches the mean evolved population.
struct MachineOutcome {
  DensityMatrix sys_before, sys_after;
  DensityMatrix ref_before, ref_after;
  double t0 = 0.0, t1 = 0.0;
  double w_ex_before = 0.0, w_ex_after = 0.0, delta_w_ex = 0.0;
  std::vector<double> final_populations;  // all single-qubit marginals of the evolved system
};

MachineOutcome run_machine(const MachineSpec& spec);

// The stochastic map the machine applies to its actor subsystem: embed the
// given actor state with the machine's reference/enabler states, evolve, and
// trace back onto the actor slots.
DensityMatrix machine_channel_apply(const MachineSpec& spec, const DensityMatrix& actor_state);

struct SearchOptions {
  RandomUnitaryOptions unitary;
  double population_lo = 0.01;
  double population_hi = 0.49;
  double epsilon = kPositiveWorkEps;
  int workers = 0;  // 0 = OpenMP default
};

struct SearchReport {
  int n_qubits = 0;
  int actor_size = 0;
  std::int64_t trials = 0;
  std::int64_t positive_count = 0;
  double best_delta = 0.0;
  std::int64_t best_trial_index = -1;
  std::vector<double> best_populations;
  UnitaryDescriptor best_unitary;
  std::uint64_t master_seed = 0;
  double epsilon = kPositiveWorkEps;
  std::string unitary_mode;
  bool with_phases = false;
};

// Monte Carlo search for positive changes in extractable work: per trial,
// populations are drawn uniformly in (population_lo, population_hi), a random
// sector unitary is drawn, and the machine with actor slots {1..actor_size}
// and reference slot actor_size+1 is run once. Trials shard across threads;
// per-trial streams keep the outcome independent of the worker count.
SearchReport randomized_search(int n_qubits, int actor_size, std::int64_t trials,
                               std::uint64_t master_seed, const SearchOptions& opts = {});

// Rebuilds the exact machine of one search trial (replay path).
MachineSpec search_trial_machine(int n_qubits, int actor_size, std::uint64_t master_seed,
                                 std::int64_t trial_index, const SearchOptions& opts = {});

struct PopulationEnvelope {
  double min_p = 0.0;
  double max_p = 0.0;
};

// Envelope certified by majorization: under any block unitary, every
// single-qubit population stays between the initial minimum and maximum.
PopulationEnvelope schur_horn_bounds(const std::vector<QubitSpec>& initial);

// Three-qubit machine with spacings (e1, e2, e2 - e1): qubits 1 and 2 start
// thermal at t_cold, qubit 3 at t_hot, and the rotation exchanges the
// degenerate states |101> and |010>, cooling qubit 1.
struct RefrigeratorAssignment {
  int actor_slot = 0;
  int ref_slot = 0;
  double t0 = 0.0, t1 = 0.0;
  double delta_w_ex = 0.0;
};

struct RefrigeratorReport {
  std::array<double, 3> initial_populations{}, final_populations{};
  std::array<double, 3> initial_temperatures{}, final_temperatures{};
  std::vector<RefrigeratorAssignment> assignments;
};

RefrigeratorReport refrigerator_machine(double e1_1, double e1_2, double t_cold, double t_hot,
                                        double theta);

// Concurrence of the two-qubit state evolved from thermal populations
// (p1, p2) by a partial swap at theta = pi/4, the angle that maximizes it.
double max_concurrence_reachable(double p1, double p2);

struct RegionPoint {
  double linear_entropy = 0.0;
  double concurrence = 0.0;
};

enum class RegionEmbedding { two_qubit, three_qubit };

// Accessible (linear entropy, concurrence) pairs. The two-qubit scan sweeps
// initial populations and the rotation angle; the three-qubit scan fixes the
// third qubit's population at p3, rotates in the single-excitation sector at
// pi/4, and traces back to the first two qubits. A fixed_theta overrides the
// angle in both modes.
std::vector<RegionPoint> accessible_region_scan(int grid_resolution, RegionEmbedding embedding,
                                                double p3 = 0.25,
                                                std::optional<double> fixed_theta = std::nullopt);

}  // namespace qland
