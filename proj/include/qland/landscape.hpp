#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qland/qstate.hpp"
#include "qland/sectors.hpp"
#include "qland/thermo.hpp"

namespace qland {

inline constexpr int kLandscapeQubits = 8;

enum class Connectivity { full7, sym6, sym5, sym4, messenger };

std::string connectivity_name(Connectivity kind);
Connectivity connectivity_from_name(const std::string& name);

// Which qubits may participate in a swap together. The symmetric kinds are
// circulant graphs on 8 nodes (offsets {1,2} for degree 4, {1,2,4} for 5,
// {1,2,3} for 6, complete for 7). The messenger kind is two 4-cliques
// {1,2,3} + {4,5} shared: qubits 4 and 5 alternate between the groups on a
// fixed two-phase schedule and never meet each other.
struct ConnectivityGraph {
  Connectivity kind = Connectivity::full7;
  int n = kLandscapeQubits;
  std::vector<std::pair<int, int>> edges;  // i < j, 1-based
  bool has_edge(int i, int j) const;
};

ConnectivityGraph build_connectivity(Connectivity kind);

enum class UnitaryClass { sim_pair, cond_swap, uncond_swap, random_in_class };

std::string unitary_class_name(UnitaryClass cls);
UnitaryClass unitary_class_from_name(const std::string& name);

// Four-qubit unitary of one landscape class, held as a Givens stream on four
// abstract slots (slot 1 = most significant bit):
//   sim_pair:    |1001> <-> |0110>, excitations hopping 1->2 and 4->3
//   cond_swap:   |1000> <-> |0100>, slots 3,4 held in the ground state
//   uncond_swap: slot 1 <-> slot 2 for every configuration of slots 3,4
// interacting_slots lists the slot pairs that must land on graph edges.
struct LandscapeUnitary {
  UnitaryClass cls = UnitaryClass::sim_pair;
  double theta = 0.0;
  std::vector<GivensRotation> rotations;
  std::vector<std::pair<int, int>> interacting_slots;

  EnergyConservingUnitary as_sector_unitary() const;  // dense 4-qubit reference form
  UnitaryDescriptor descriptor() const;
};

LandscapeUnitary make_landscape_unitary(UnitaryClass cls, double theta);

// Unordered split of {1..8} into two 4-sets; group_a holds qubit 1.
struct Partition {
  std::array<int, 4> group_a{}, group_b{};  // ascending
};

// One evolution step resolved: the partition and, per group, the bijection of
// abstract slots onto qubits (mapping[slot-1] = qubit).
struct StepPlan {
  Partition partition;
  std::array<int, 4> mapping_a{}, mapping_b{};
};

// Slot assignments are frozen per run: every admissible 4-set receives one
// bijection up front, so re-selecting a subsystem repeats the exact same
// operator. Without this, per-step re-assignment injects randomness that
// washes out the coherent work oscillations restricted connectivities show
// (and the messenger schedule would not be deterministic).
struct SlotAssignments {
  std::array<std::array<int, 4>, 256> by_mask{};
};

// Samples partitions uniformly over the admissible ones: a partition
// qualifies when both groups admit a bijection placing every interacting
// slot pair on a graph edge. The messenger kind follows its deterministic
// alternation instead of sampling partitions.
class StepSampler {
 public:
  StepSampler(const ConnectivityGraph& graph, const LandscapeUnitary& unitary);

  const std::vector<Partition>& partitions() const { return partitions_; }

  // One bijection per admissible 4-set, drawn in ascending mask order.
  SlotAssignments draw_assignments(RandomStream& rng) const;

  Partition sample_partition(RandomStream& rng, int step_index) const;

  // Per-step randomness is the partition draw alone (none for messenger).
  StepPlan plan(const SlotAssignments& assignments, RandomStream& rng, int step_index) const;

 private:
  ConnectivityGraph graph_;
  std::vector<Partition> partitions_;
  std::array<std::vector<std::array<int, 4>>, 256> mappings_by_mask_;
};

// Uniform sample over admissible partitions (messenger: the scheduled one).
Partition select_subsystems(const ConnectivityGraph& graph, const LandscapeUnitary& unitary,
                            RandomStream& rng, int step_index);

// Both groups evolve each step. The fast path applies the embedded Givens
// stream in place; the dense path materializes the full 256 x 256 unitary and
// conjugates, and is kept as the serial reference the tests compare against.
void apply_plan_inplace(Matrix& rho, const LandscapeUnitary& unitary, const StepPlan& plan);
void apply_plan_dense(Matrix& rho, const LandscapeUnitary& unitary, const StepPlan& plan);

DensityMatrix step(const DensityMatrix& state, const ConnectivityGraph& graph,
                   const LandscapeUnitary& unitary, RandomStream& rng, int step_index);

// Mean temperature of all other qubits, the local reference on the landscape.
double reference_temperature(const std::array<double, kLandscapeQubits>& populations, int qubit);

struct LandscapeConfig {
  Connectivity connectivity = Connectivity::full7;
  int n_hot = 1;
  double hot_population = 0.4;
  double cold_population = 0.2;
  std::vector<int> hot_qubits;  // explicit hot positions; empty = default placement
  UnitaryClass unitary_class = UnitaryClass::sim_pair;
  double theta = 0.1;
  bool random_theta = false;  // draw theta uniformly in [0, 2*pi) per trial
  int steps = 500;
  int trials = 1;
  std::uint64_t master_seed = 0;
  int workers = 0;  // 0 = OpenMP default
};

void validate_config(const LandscapeConfig& config);

// Hot qubits sit at the front, except on the messenger landscape where the
// first hot qubit is messenger qubit 4 (so the hot qubit is exchanged).
std::vector<int> hot_positions(const LandscapeConfig& config);
std::array<double, kLandscapeQubits> initial_populations(const LandscapeConfig& config);
double mean_initial_temperature(const std::array<double, kLandscapeQubits>& populations);

// Full per-step log of one evolution. Snapshot arrays have steps+1 rows
// (index 0 = initial state); delta_work and group_of have one row per step.
struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::uint64_t trial_seed = 0;
  UnitaryDescriptor unitary;
  int steps = 0;
  std::array<double, kLandscapeQubits> initial_populations{};
  double mean_initial_temperature = 0.0;
  std::vector<std::array<double, kLandscapeQubits>> population;
  std::vector<std::array<double, kLandscapeQubits>> temperature;
  std::vector<std::array<double, kLandscapeQubits>> reference_temp;
  std::vector<std::array<double, kLandscapeQubits>> work;
  std::vector<std::array<double, kLandscapeQubits>> delta_work;
  std::vector<std::array<std::uint8_t, kLandscapeQubits>> group_of;  // 0 = qubit-1 group
  double max_population_drift = 0.0;     // |sum q_i(t) - sum q_i(0)| over the run
  double max_reduced_offdiagonal = 0.0;  // largest single-qubit coherence seen
};

// Per-trial RNG draw order: unitary class (random_in_class only), theta (when
// drawn), the slot-assignment table, then one partition index per step.
// Changing the worker count cannot reorder any of these.
TrialRecord run_trial(const LandscapeConfig& config, std::uint64_t trial_index);

std::vector<TrialRecord> run_trials(const LandscapeConfig& config);

// Thermalization baseline: every qubit collides each step with a fresh
// ancilla held at the initial mean temperature (partial swap at the config
// angle), so populations relax geometrically and no work revival can occur.
TrialRecord collisional_baseline_trial(const LandscapeConfig& config,
                                       std::uint64_t trial_index = 0);

struct PositiveRun {
  int start_step = 0;  // first step of the run (1-based evolution steps)
  int length = 0;
};

// Maximal runs of consecutive steps with delta_work > eps, per qubit.
struct IntervalStats {
  std::array<std::vector<PositiveRun>, kLandscapeQubits> runs;
};

IntervalStats positive_interval_stats(const TrialRecord& trial, double eps = kPositiveWorkEps);

struct AggregateSummary {
  double mean_percent_positive_hot = 0.0;
  double mean_percent_positive_cold = 0.0;
  std::vector<double> percent_positive_hot;   // one entry per (trial, hot qubit)
  std::vector<double> percent_positive_cold;  // one entry per (trial, cold qubit)
  // Mean over trials of W(t)/<T>_in, per step and qubit (revival curves).
  std::vector<std::array<double, kLandscapeQubits>> mean_normalized_work;
};

AggregateSummary aggregate(const std::vector<TrialRecord>& trials, const LandscapeConfig& config,
                           double eps = kPositiveWorkEps);

struct SweepPoint {
  int n_hot = 0;
  double fraction = 0.0;        // n_hot / 8
  double total_positive = 0.0;  // mean over trials of sum of positive dW / <T>_in
};

std::vector<SweepPoint> hot_fraction_sweep(const LandscapeConfig& base, int n_hot_min,
                                           int n_hot_max, int trials_per_point);

struct ExponentialFit {
  double amplitude = 0.0;
  double rate = 0.0;      // y ~ amplitude * exp(-rate * x)
  double residual = 0.0;  // rms residual of the log fit
};

ExponentialFit fit_exponential(const std::vector<std::pair<double, double>>& series);

}  // namespace qland
