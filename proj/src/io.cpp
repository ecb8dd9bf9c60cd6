#include "qland/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <stdexcept>

namespace qland {

namespace {

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 15);
  return std::string(buf, result.ptr);
}

std::string digest_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x00000100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return digest_hex(bytes);
}

nlohmann::json to_json(const UnitaryDescriptor& d) {
  nlohmann::json j;
  j["family"] = d.family;
  if (!d.qubits.empty()) j["qubits"] = d.qubits;
  if (!d.condition.empty()) {
    nlohmann::json cond = nlohmann::json::array();
    for (const auto& [q, bit] : d.condition) cond.push_back({{"qubit", q}, {"bit", bit}});
    j["condition"] = cond;
  }
  if (!d.angles.empty()) j["angles"] = d.angles;
  if (!d.phases.empty()) j["phases"] = d.phases;
  if (!d.mode.empty()) j["mode"] = d.mode;
  j["with_phases"] = d.with_phases;
  if (d.seed) j["seed"] = *d.seed;
  if (!d.parts.empty()) {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : d.parts) parts.push_back(to_json(p));
    j["parts"] = parts;
  }
  return j;
}

nlohmann::json to_json(const SearchReport& r) {
  nlohmann::json j;
  j["n_qubits"] = r.n_qubits;
  j["actor_size"] = r.actor_size;
  j["trials"] = r.trials;
  j["positive_count"] = r.positive_count;
  j["best_delta"] = r.best_delta;
  j["best_trial_index"] = r.best_trial_index;
  j["best_populations"] = r.best_populations;
  j["best_unitary"] = to_json(r.best_unitary);
  j["master_seed"] = r.master_seed;
  j["epsilon"] = r.epsilon;
  j["unitary_mode"] = r.unitary_mode;
  j["with_phases"] = r.with_phases;
  return j;
}

nlohmann::json to_json(const LandscapeConfig& c) {
  nlohmann::json j;
  j["connectivity"] = connectivity_name(c.connectivity);
  j["n_hot"] = c.n_hot;
  j["hot_population"] = c.hot_population;
  j["cold_population"] = c.cold_population;
  j["hot_qubits"] = hot_positions(c);
  j["unitary_class"] = unitary_class_name(c.unitary_class);
  j["theta"] = c.theta;
  j["random_theta"] = c.random_theta;
  j["steps"] = c.steps;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  return j;
}

nlohmann::json to_json(const RefrigeratorReport& r) {
  nlohmann::json j;
  j["initial_populations"] = r.initial_populations;
  j["final_populations"] = r.final_populations;
  j["initial_temperatures"] = r.initial_temperatures;
  j["final_temperatures"] = r.final_temperatures;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& a : r.assignments) {
    rows.push_back({{"actor_slot", a.actor_slot},
                    {"ref_slot", a.ref_slot},
                    {"t0", a.t0},
                    {"t1", a.t1},
                    {"delta_w_ex", a.delta_w_ex}});
  }
  j["assignments"] = rows;
  return j;
}

void write_trial_csv(const std::filesystem::path& path, const TrialRecord& record) {
  auto out = open_for_write(path);
  out << "step,qubit,q,T,T_ref,W_ex,dW_ex\n";
  for (std::size_t t = 0; t < record.population.size(); ++t) {
    for (int i = 0; i < kLandscapeQubits; ++i) {
      out << t << ',' << i + 1 << ',' << format_double(record.population[t][i]) << ','
          << format_double(record.temperature[t][i]) << ','
          << format_double(record.reference_temp[t][i]) << ','
          << format_double(record.work[t][i]) << ',';
      if (t > 0) out << format_double(record.delta_work[t - 1][i]);
      out << '\n';
    }
  }
}

void write_search_report(const std::filesystem::path& path, const SearchReport& report) {
  auto out = open_for_write(path);
  out << to_json(report).dump(2) << '\n';
}

void write_region_csv(const std::filesystem::path& path, const std::vector<RegionPoint>& points) {
  auto out = open_for_write(path);
  out << "linear_entropy,concurrence\n";
  for (const auto& p : points) {
    out << format_double(p.linear_entropy) << ',' << format_double(p.concurrence) << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& series) {
  auto out = open_for_write(path);
  out << "n_hot,fraction,total_positive_over_T\n";
  for (const auto& p : series) {
    out << p.n_hot << ',' << format_double(p.fraction) << ',' << format_double(p.total_positive)
        << '\n';
  }
}

void write_fit_json(const std::filesystem::path& path, const ExponentialFit& fit,
                    const std::vector<SweepPoint>& series) {
  nlohmann::json j;
  j["amplitude"] = fit.amplitude;
  j["rate"] = fit.rate;
  j["residual"] = fit.residual;
  j["points"] = series.size();
  auto out = open_for_write(path);
  out << j.dump(2) << '\n';
}

std::vector<std::string> write_aggregate_files(const std::filesystem::path& dir,
                                               const std::vector<TrialRecord>& records,
                                               const LandscapeConfig& config) {
  std::vector<std::string> files;
  const AggregateSummary summary = aggregate(records, config);
  const std::string connectivity = connectivity_name(config.connectivity);

  {
    nlohmann::json j;
    j["connectivity"] = connectivity;
    j["trials"] = records.size();
    j["mean_percent_positive_hot"] = summary.mean_percent_positive_hot;
    j["mean_percent_positive_cold"] = summary.mean_percent_positive_cold;
    auto out = open_for_write(dir / "summary.json");
    out << j.dump(2) << '\n';
    files.push_back("summary.json");
  }

  // Representative single-run traces (first trial).
  const TrialRecord& first = records.front();
  {
    auto out = open_for_write(dir / "temperature_trace.csv");
    out << "step,qubit,T\n";
    for (std::size_t t = 0; t < first.temperature.size(); ++t) {
      for (int i = 0; i < kLandscapeQubits; ++i) {
        out << t << ',' << i + 1 << ',' << format_double(first.temperature[t][i]) << '\n';
      }
    }
    files.push_back("temperature_trace.csv");
  }
  {
    auto out = open_for_write(dir / "work_change_trace.csv");
    out << "step,qubit,dW_ex\n";
    for (std::size_t t = 0; t < first.delta_work.size(); ++t) {
      for (int i = 0; i < kLandscapeQubits; ++i) {
        out << t + 1 << ',' << i + 1 << ',' << format_double(first.delta_work[t][i]) << '\n';
      }
    }
    files.push_back("work_change_trace.csv");
  }
  {
    auto out = open_for_write(dir / "normalized_work.csv");
    out << "step,qubit,W_ex_over_T\n";
    for (std::size_t t = 0; t < summary.mean_normalized_work.size(); ++t) {
      for (int i = 0; i < kLandscapeQubits; ++i) {
        out << t << ',' << i + 1 << ',' << format_double(summary.mean_normalized_work[t][i])
            << '\n';
      }
    }
    files.push_back("normalized_work.csv");
  }
  {
    std::array<bool, kLandscapeQubits> hot{};
    for (int q : hot_positions(config)) hot[q - 1] = true;
    auto out = open_for_write(dir / "positive_percent.csv");
    out << "connectivity,class,trial,qubit,percent_positive\n";
    for (const auto& rec : records) {
      for (int i = 0; i < kLandscapeQubits; ++i) {
        int positives = 0;
        for (const auto& dw : rec.delta_work) {
          if (dw[i] > kPositiveWorkEps) ++positives;
        }
        const double percent = rec.steps > 0 ? 100.0 * positives / rec.steps : 0.0;
        out << connectivity << ',' << (hot[i] ? "hot" : "cold") << ',' << rec.trial_index << ','
            << i + 1 << ',' << format_double(percent) << '\n';
      }
    }
    files.push_back("positive_percent.csv");
  }
  if (records.front().steps >= 1) {
    // Interval histogram: share of all steps spent inside positive runs of
    // each length, plus the raw (start, length) points.
    std::map<int, std::int64_t> count_by_length;
    std::vector<std::pair<int, int>> raw;
    std::int64_t total_steps = 0;
    for (const auto& rec : records) {
      total_steps += static_cast<std::int64_t>(rec.steps) * kLandscapeQubits;
      const IntervalStats stats = positive_interval_stats(rec);
      for (const auto& runs : stats.runs) {
        for (const auto& run : runs) {
          ++count_by_length[run.length];
          raw.emplace_back(run.start_step, run.length);
        }
      }
    }
    {
      auto out = open_for_write(dir / "interval_histogram.csv");
      out << "length,count,percent_of_steps\n";
      for (const auto& [length, count] : count_by_length) {
        const double percent =
            total_steps > 0 ? 100.0 * static_cast<double>(count * length) /
                                  static_cast<double>(total_steps)
                            : 0.0;
        out << length << ',' << count << ',' << format_double(percent) << '\n';
      }
      files.push_back("interval_histogram.csv");
    }
    {
      auto out = open_for_write(dir / "interval_points.csv");
      out << "start_step,length\n";
      for (const auto& [start, length] : raw) out << start << ',' << length << '\n';
      files.push_back("interval_points.csv");
    }
  }
  return files;
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const nlohmann::json& config, std::uint64_t master_seed,
                    const std::vector<std::string>& output_files) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = config;
  j["master_seed"] = master_seed;
  j["version"] = kToolVersion;
  j["generated_at"] = timestamp_utc();
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& f : output_files) {
    outputs.push_back({{"file", f}, {"fnv1a64", file_digest_hex(dir / f)}});
  }
  j["outputs"] = outputs;
  auto out = open_for_write(dir / "manifest.json");
  out << j.dump(2) << '\n';
}

}  // namespace qland
