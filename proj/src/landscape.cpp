#include "qland/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <omp.h>

namespace qland {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int qubit_mask(int q) { return 1 << (kLandscapeQubits - q); }

}  // namespace

std::string connectivity_name(Connectivity kind) {
  switch (kind) {
    case Connectivity::full7: return "full7";
    case Connectivity::sym6: return "sym6";
    case Connectivity::sym5: return "sym5";
    case Connectivity::sym4: return "sym4";
    case Connectivity::messenger: return "messenger";
  }
  throw std::invalid_argument("unknown connectivity");
}

Connectivity connectivity_from_name(const std::string& name) {
  if (name == "full7") return Connectivity::full7;
  if (name == "sym6") return Connectivity::sym6;
  if (name == "sym5") return Connectivity::sym5;
  if (name == "sym4") return Connectivity::sym4;
  if (name == "messenger") return Connectivity::messenger;
  throw std::invalid_argument("unknown connectivity: " + name);
}

std::string unitary_class_name(UnitaryClass cls) {
  switch (cls) {
    case UnitaryClass::sim_pair: return "sim-pair";
    case UnitaryClass::cond_swap: return "cond-swap";
    case UnitaryClass::uncond_swap: return "uncond-swap";
    case UnitaryClass::random_in_class: return "random";
  }
  throw std::invalid_argument("unknown unitary class");
}

UnitaryClass unitary_class_from_name(const std::string& name) {
  if (name == "sim-pair") return UnitaryClass::sim_pair;
  if (name == "cond-swap") return UnitaryClass::cond_swap;
  if (name == "uncond-swap") return UnitaryClass::uncond_swap;
  if (name == "random") return UnitaryClass::random_in_class;
  throw std::invalid_argument("unknown unitary class: " + name);
}

bool ConnectivityGraph::has_edge(int i, int j) const {
  if (i == j) return false;
  for (const auto& [a, b] : edges) {
    if ((a == i && b == j) || (a == j && b == i)) return true;
  }
  return false;
}

ConnectivityGraph build_connectivity(Connectivity kind) {
  ConnectivityGraph g;
  g.kind = kind;
  auto add = [&](int i, int j) {
    if (i > j) std::swap(i, j);
    if (!g.has_edge(i, j)) g.edges.emplace_back(i, j);
  };

  if (kind == Connectivity::messenger) {
    // Two cores {1,2,3} and {6,7,8}; the messengers 4 and 5 link to both
    // cores but never to each other.
    const std::array<int, 3> core_a{1, 2, 3}, core_b{6, 7, 8};
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        add(core_a[i], core_a[j]);
        add(core_b[i], core_b[j]);
      }
    }
    for (int m : {4, 5}) {
      for (int q : core_a) add(m, q);
      for (int q : core_b) add(m, q);
    }
    return g;
  }

  std::vector<int> offsets;
  switch (kind) {
    case Connectivity::full7: offsets = {1, 2, 3, 4}; break;
    case Connectivity::sym6: offsets = {1, 2, 3}; break;
    case Connectivity::sym5: offsets = {1, 2, 4}; break;
    case Connectivity::sym4: offsets = {1, 2}; break;
    default: break;
  }
  for (int i = 0; i < kLandscapeQubits; ++i) {
    for (int off : offsets) {
      add(i + 1, (i + off) % kLandscapeQubits + 1);
    }
  }
  return g;
}

EnergyConservingUnitary LandscapeUnitary::as_sector_unitary() const {
  return EnergyConservingUnitary::from_givens(4, rotations, descriptor());
}

UnitaryDescriptor LandscapeUnitary::descriptor() const {
  UnitaryDescriptor d;
  d.family = "landscape_class";
  d.mode = unitary_class_name(cls);
  d.angles = {theta};
  return d;
}

LandscapeUnitary make_landscape_unitary(UnitaryClass cls, double theta) {
  LandscapeUnitary u;
  u.cls = cls;
  u.theta = theta;
  switch (cls) {
    case UnitaryClass::sim_pair:
      u.rotations = {{0b0110, 0b1001, theta, 0.0}};
      u.interacting_slots = {{1, 2}, {3, 4}};
      break;
    case UnitaryClass::cond_swap:
      u.rotations = {{0b0100, 0b1000, theta, 0.0}};
      u.interacting_slots = {{1, 2}};
      break;
    case UnitaryClass::uncond_swap:
      for (int s = 0; s < 4; ++s) u.rotations.push_back({0b0100 | s, 0b1000 | s, theta, 0.0});
      u.interacting_slots = {{1, 2}};
      break;
    case UnitaryClass::random_in_class:
      throw std::invalid_argument("random_in_class must be resolved to a concrete class first");
  }
  return u;
}

namespace {

int group_mask(const std::array<int, 4>& group) {
  int mask = 0;
  for (int q : group) mask |= qubit_mask(q);
  return mask;
}

std::vector<std::array<int, 4>> admissible_mappings(const ConnectivityGraph& graph,
                                                    const LandscapeUnitary& unitary,
                                                    const std::array<int, 4>& group) {
  std::array<int, 4> perm = group;
  std::sort(perm.begin(), perm.end());
  std::vector<std::array<int, 4>> result;
  do {
    bool ok = true;
    for (const auto& [s, t] : unitary.interacting_slots) {
      if (!graph.has_edge(perm[s - 1], perm[t - 1])) {
        ok = false;
        break;
      }
    }
    if (ok) result.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

Partition messenger_partition(int step_index) {
  if (step_index % 2 == 0) return {{1, 2, 3, 4}, {5, 6, 7, 8}};
  return {{1, 2, 3, 5}, {4, 6, 7, 8}};
}

}  // namespace

StepSampler::StepSampler(const ConnectivityGraph& graph, const LandscapeUnitary& unitary)
    : graph_(graph) {
  std::vector<Partition> candidates;
  if (graph.kind == Connectivity::messenger) {
    candidates = {messenger_partition(0), messenger_partition(1)};
  } else {
    // Qubit 1 anchors group A; choose its three partners.
    for (int a = 2; a <= 8; ++a) {
      for (int b = a + 1; b <= 8; ++b) {
        for (int c = b + 1; c <= 8; ++c) {
          Partition p;
          p.group_a = {1, a, b, c};
          int k = 0;
          for (int q = 2; q <= 8; ++q) {
            if (q != a && q != b && q != c) p.group_b[k++] = q;
          }
          candidates.push_back(p);
        }
      }
    }
  }

  for (const auto& p : candidates) {
    bool ok = true;
    for (const auto& group : {p.group_a, p.group_b}) {
      auto& cached = mappings_by_mask_[static_cast<std::size_t>(group_mask(group))];
      if (cached.empty()) cached = admissible_mappings(graph, unitary, group);
      if (cached.empty()) {
        ok = false;
        break;
      }
    }
    if (ok) partitions_.push_back(p);
  }
  if (partitions_.empty() ||
      (graph.kind == Connectivity::messenger && partitions_.size() != 2)) {
    throw std::invalid_argument("no admissible subsystem partition for this connectivity/unitary");
  }
}

SlotAssignments StepSampler::draw_assignments(RandomStream& rng) const {
  SlotAssignments a;
  for (std::size_t mask = 0; mask < a.by_mask.size(); ++mask) {
    const auto& maps = mappings_by_mask_[mask];
    if (!maps.empty()) a.by_mask[mask] = maps[rng.uniform_index(maps.size())];
  }
  return a;
}

Partition StepSampler::sample_partition(RandomStream& rng, int step_index) const {
  if (graph_.kind == Connectivity::messenger) return messenger_partition(step_index);
  return partitions_[rng.uniform_index(partitions_.size())];
}

StepPlan StepSampler::plan(const SlotAssignments& assignments, RandomStream& rng,
                           int step_index) const {
  StepPlan plan;
  plan.partition = sample_partition(rng, step_index);
  plan.mapping_a = assignments.by_mask[static_cast<std::size_t>(group_mask(plan.partition.group_a))];
  plan.mapping_b = assignments.by_mask[static_cast<std::size_t>(group_mask(plan.partition.group_b))];
  return plan;
}

Partition select_subsystems(const ConnectivityGraph& graph, const LandscapeUnitary& unitary,
                            RandomStream& rng, int step_index) {
  return StepSampler(graph, unitary).sample_partition(rng, step_index);
}

void apply_plan_inplace(Matrix& rho, const LandscapeUnitary& unitary, const StepPlan& plan) {
  for (const auto& mapping : {plan.mapping_a, plan.mapping_b}) {
    const std::vector<int> slots(mapping.begin(), mapping.end());
    for (const auto& g : embed_rotations(4, unitary.rotations, kLandscapeQubits, slots)) {
      apply_givens_inplace(rho, g);
    }
  }
}

void apply_plan_dense(Matrix& rho, const LandscapeUnitary& unitary, const StepPlan& plan) {
  const int dim = 1 << kLandscapeQubits;
  Matrix u = Matrix::Identity(dim, dim);
  for (const auto& mapping : {plan.mapping_a, plan.mapping_b}) {
    const std::vector<int> slots(mapping.begin(), mapping.end());
    for (const auto& g : embed_rotations(4, unitary.rotations, kLandscapeQubits, slots)) {
      left_multiply_givens_inplace(u, g);
    }
  }
  rho = u * rho * u.adjoint();
}

DensityMatrix step(const DensityMatrix& state, const ConnectivityGraph& graph,
                   const LandscapeUnitary& unitary, RandomStream& rng, int step_index) {
  if (state.n_qubits() != kLandscapeQubits) {
    throw std::invalid_argument("landscape state must have 8 qubits");
  }
  const StepSampler sampler(graph, unitary);
  const SlotAssignments assignments = sampler.draw_assignments(rng);
  const StepPlan plan = sampler.plan(assignments, rng, step_index);
  Matrix rho = state.mat();
  apply_plan_inplace(rho, unitary, plan);
  return DensityMatrix(kLandscapeQubits, std::move(rho));
}

double reference_temperature(const std::array<double, kLandscapeQubits>& populations, int qubit) {
  if (qubit < 1 || qubit > kLandscapeQubits) throw std::invalid_argument("qubit index out of range");
  double sum = 0.0;
  for (int j = 1; j <= kLandscapeQubits; ++j) {
    if (j != qubit) sum += temperature_from_population(populations[j - 1]);
  }
  return sum / (kLandscapeQubits - 1);
}

void validate_config(const LandscapeConfig& config) {
  if (!(config.hot_population > 0.0 && config.hot_population < 0.5) ||
      !(config.cold_population > 0.0 && config.cold_population < 0.5)) {
    throw std::invalid_argument("populations must lie in (0, 0.5)");
  }
  if (config.n_hot < 0 || config.n_hot > kLandscapeQubits) {
    throw std::invalid_argument("hot-qubit count out of range");
  }
  if (config.steps < 0) throw std::invalid_argument("negative step count");
  if (config.trials < 1) throw std::invalid_argument("at least one trial required");
  if (!config.hot_qubits.empty()) {
    if (static_cast<int>(config.hot_qubits.size()) != config.n_hot) {
      throw std::invalid_argument("explicit hot positions must match the hot count");
    }
    std::vector<int> sorted = config.hot_qubits;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 1 ||
        sorted.back() > kLandscapeQubits) {
      throw std::invalid_argument("invalid hot positions");
    }
  }
}

std::vector<int> hot_positions(const LandscapeConfig& config) {
  if (!config.hot_qubits.empty()) return config.hot_qubits;
  std::vector<int> order;
  if (config.connectivity == Connectivity::messenger) {
    order = {4, 5, 1, 2, 3, 6, 7, 8};
  } else {
    order = {1, 2, 3, 4, 5, 6, 7, 8};
  }
  return {order.begin(), order.begin() + config.n_hot};
}

std::array<double, kLandscapeQubits> initial_populations(const LandscapeConfig& config) {
  std::array<double, kLandscapeQubits> p;
  p.fill(config.cold_population);
  for (int q : hot_positions(config)) p[q - 1] = config.hot_population;
  return p;
}

double mean_initial_temperature(const std::array<double, kLandscapeQubits>& populations) {
  double sum = 0.0;
  for (double p : populations) sum += temperature_from_population(p);
  return sum / kLandscapeQubits;
}

namespace {

std::array<double, kLandscapeQubits> diagonal_marginals(const Matrix& rho) {
  std::array<double, kLandscapeQubits> q{};
  const int dim = 1 << kLandscapeQubits;
  for (int b = 0; b < dim; ++b) {
    const double d = rho(b, b).real();
    for (int i = 1; i <= kLandscapeQubits; ++i) {
      if (b & qubit_mask(i)) q[i - 1] += d;
    }
  }
  return q;
}

double largest_reduced_coherence(const Matrix& rho) {
  // Single-qubit reduced off-diagonal: sum of <1 s| rho |0 s> over spectators.
  double worst = 0.0;
  const int dim = 1 << kLandscapeQubits;
  for (int i = 1; i <= kLandscapeQubits; ++i) {
    const int bit = qubit_mask(i);
    Complex sum = 0.0;
    for (int b = 0; b < dim; ++b) {
      if (!(b & bit)) sum += rho(b | bit, b);
    }
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

struct SnapshotRow {
  std::array<double, kLandscapeQubits> temperature{}, reference{}, work{};
};

SnapshotRow snapshot_from_populations(const std::array<double, kLandscapeQubits>& q) {
  SnapshotRow row;
  for (int i = 1; i <= kLandscapeQubits; ++i) {
    row.temperature[i - 1] = temperature_from_population(q[i - 1]);
    row.reference[i - 1] = reference_temperature(q, i);
    row.work[i - 1] = extractable_work_qubit(q[i - 1], row.reference[i - 1]);
  }
  return row;
}

void push_snapshot(TrialRecord& rec, const std::array<double, kLandscapeQubits>& q) {
  const SnapshotRow row = snapshot_from_populations(q);
  rec.population.push_back(q);
  rec.temperature.push_back(row.temperature);
  rec.reference_temp.push_back(row.reference);
  rec.work.push_back(row.work);
  if (rec.work.size() > 1) {
    const auto& prev = rec.work[rec.work.size() - 2];
    std::array<double, kLandscapeQubits> dw;
    for (int i = 0; i < kLandscapeQubits; ++i) dw[i] = row.work[i] - prev[i];
    rec.delta_work.push_back(dw);
  }
}

// Resolves the per-trial unitary; draw order is part of the file format
// contract (see run_trial's declaration).
LandscapeUnitary resolve_unitary(const LandscapeConfig& config, RandomStream& stream) {
  UnitaryClass cls = config.unitary_class;
  double theta = config.theta;
  if (cls == UnitaryClass::random_in_class) {
    constexpr std::array<UnitaryClass, 3> classes{UnitaryClass::sim_pair, UnitaryClass::cond_swap,
                                                  UnitaryClass::uncond_swap};
    cls = classes[stream.uniform_index(3)];
    theta = stream.uniform(0.0, kTwoPi);
  } else if (config.random_theta) {
    theta = stream.uniform(0.0, kTwoPi);
  }
  return make_landscape_unitary(cls, theta);
}

}  // namespace

TrialRecord run_trial(const LandscapeConfig& config, std::uint64_t trial_index) {
  validate_config(config);
  RandomStream stream = RandomStream::for_trial(config.master_seed, trial_index);

  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.trial_seed = mix_seed(config.master_seed, trial_index);
  rec.steps = config.steps;
  rec.initial_populations = initial_populations(config);
  rec.mean_initial_temperature = mean_initial_temperature(rec.initial_populations);

  const LandscapeUnitary unitary = resolve_unitary(config, stream);
  rec.unitary = unitary.descriptor();
  const ConnectivityGraph graph = build_connectivity(config.connectivity);
  const StepSampler sampler(graph, unitary);
  const SlotAssignments assignments = sampler.draw_assignments(stream);

  std::vector<QubitSpec> specs;
  for (double p : rec.initial_populations) specs.push_back({p, 1.0});
  Matrix rho = product_state(specs).mat();

  double sum0 = 0.0;
  for (double p : rec.initial_populations) sum0 += p;

  push_snapshot(rec, rec.initial_populations);
  for (int t = 1; t <= config.steps; ++t) {
    const StepPlan plan = sampler.plan(assignments, stream, t - 1);
    apply_plan_inplace(rho, unitary, plan);

    const auto q = diagonal_marginals(rho);
    push_snapshot(rec, q);

    std::array<std::uint8_t, kLandscapeQubits> groups{};
    for (int qb : plan.partition.group_b) groups[qb - 1] = 1;
    rec.group_of.push_back(groups);

    double sum = 0.0;
    for (double v : q) sum += v;
    rec.max_population_drift = std::max(rec.max_population_drift, std::abs(sum - sum0));
    rec.max_reduced_offdiagonal =
        std::max(rec.max_reduced_offdiagonal, largest_reduced_coherence(rho));
  }
  return rec;
}

std::vector<TrialRecord> run_trials(const LandscapeConfig& config) {
  validate_config(config);
  std::vector<TrialRecord> records(static_cast<std::size_t>(config.trials));
  const int threads = config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int t = 0; t < config.trials; ++t) {
    records[static_cast<std::size_t>(t)] = run_trial(config, static_cast<std::uint64_t>(t));
  }
  return records;
}

TrialRecord collisional_baseline_trial(const LandscapeConfig& config, std::uint64_t trial_index) {
  validate_config(config);

  TrialRecord rec;
  rec.trial_index = trial_index;
  rec.trial_seed = mix_seed(config.master_seed, trial_index);
  rec.steps = config.steps;
  rec.initial_populations = initial_populations(config);
  rec.mean_initial_temperature = mean_initial_temperature(rec.initial_populations);
  rec.unitary.family = "collisional";
  rec.unitary.angles = {config.theta};

  const double ancilla_p = population_from_temperature(rec.mean_initial_temperature);
  const double keep = std::cos(config.theta) * std::cos(config.theta);

  std::array<double, kLandscapeQubits> q = rec.initial_populations;
  push_snapshot(rec, q);
  for (int t = 1; t <= config.steps; ++t) {
    for (double& v : q) v = keep * v + (1.0 - keep) * ancilla_p;
    push_snapshot(rec, q);
  }
  return rec;
}

IntervalStats positive_interval_stats(const TrialRecord& trial, double eps) {
  if (trial.steps < 1 || trial.delta_work.empty()) {
    throw std::invalid_argument("interval statistics need at least one evolution step");
  }
  IntervalStats stats;
  for (int i = 0; i < kLandscapeQubits; ++i) {
    int run_start = 0;
    int run_length = 0;
    for (int t = 1; t <= trial.steps; ++t) {
      if (trial.delta_work[static_cast<std::size_t>(t - 1)][i] > eps) {
        if (run_length == 0) run_start = t;
        ++run_length;
      } else if (run_length > 0) {
        stats.runs[i].push_back({run_start, run_length});
        run_length = 0;
      }
    }
    if (run_length > 0) stats.runs[i].push_back({run_start, run_length});
  }
  return stats;
}

AggregateSummary aggregate(const std::vector<TrialRecord>& trials, const LandscapeConfig& config,
                           double eps) {
  if (trials.empty()) throw std::invalid_argument("nothing to aggregate");
  AggregateSummary summary;

  std::array<bool, kLandscapeQubits> hot{};
  for (int q : hot_positions(config)) hot[q - 1] = true;

  for (const auto& rec : trials) {
    for (int i = 0; i < kLandscapeQubits; ++i) {
      int positives = 0;
      for (const auto& dw : rec.delta_work) {
        if (dw[i] > eps) ++positives;
      }
      const double percent = rec.steps > 0 ? 100.0 * positives / rec.steps : 0.0;
      (hot[i] ? summary.percent_positive_hot : summary.percent_positive_cold).push_back(percent);
    }
  }
  auto mean = [](const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  summary.mean_percent_positive_hot = mean(summary.percent_positive_hot);
  summary.mean_percent_positive_cold = mean(summary.percent_positive_cold);

  const std::size_t rows = trials.front().work.size();
  summary.mean_normalized_work.assign(rows, {});
  for (const auto& rec : trials) {
    for (std::size_t t = 0; t < rows; ++t) {
      for (int i = 0; i < kLandscapeQubits; ++i) {
        summary.mean_normalized_work[t][i] +=
            rec.work[t][i] / rec.mean_initial_temperature / static_cast<double>(trials.size());
      }
    }
  }
  return summary;
}

std::vector<SweepPoint> hot_fraction_sweep(const LandscapeConfig& base, int n_hot_min,
                                           int n_hot_max, int trials_per_point) {
  if (n_hot_min < 1 || n_hot_max > 7 || n_hot_min > n_hot_max) {
    throw std::invalid_argument("hot-qubit range must lie within 1..7");
  }
  if (trials_per_point < 1) throw std::invalid_argument("at least one trial per point");

  std::vector<SweepPoint> series;
  for (int n_hot = n_hot_min; n_hot <= n_hot_max; ++n_hot) {
    LandscapeConfig cfg = base;
    cfg.n_hot = n_hot;
    cfg.hot_qubits.clear();
    cfg.trials = trials_per_point;
    const auto records = run_trials(cfg);

    double total = 0.0;
    for (const auto& rec : records) {
      double positive = 0.0;
      for (const auto& dw : rec.delta_work) {
        for (double v : dw) {
          if (v > kPositiveWorkEps) positive += v;
        }
      }
      total += positive / rec.mean_initial_temperature;
    }
    series.push_back({n_hot, static_cast<double>(n_hot) / kLandscapeQubits,
                      total / static_cast<double>(records.size())});
  }
  return series;
}

ExponentialFit fit_exponential(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 3) throw std::invalid_argument("exponential fit needs at least 3 points");
  double sx = 0.0, sz = 0.0;
  for (const auto& [x, y] : series) {
    if (!(y > 0.0)) throw std::invalid_argument("exponential fit needs positive values");
    sx += x;
    sz += std::log(y);
  }
  const double n = static_cast<double>(series.size());
  const double mx = sx / n, mz = sz / n;
  double sxx = 0.0, sxz = 0.0;
  for (const auto& [x, y] : series) {
    sxx += (x - mx) * (x - mx);
    sxz += (x - mx) * (std::log(y) - mz);
  }
  if (sxx == 0.0) throw std::invalid_argument("exponential fit needs distinct x values");
  const double slope = sxz / sxx;

  ExponentialFit fit;
  fit.rate = -slope;
  fit.amplitude = std::exp(mz - slope * mx);
  double ss = 0.0;
  for (const auto& [x, y] : series) {
    const double r = std::log(y) - (std::log(fit.amplitude) + slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace qland
