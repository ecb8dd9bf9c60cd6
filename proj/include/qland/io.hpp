#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qland/landscape.hpp"
#include "qland/machines.hpp"

namespace qland {

inline constexpr const char* kToolVersion = "0.1.0";

// Locale-independent formatting with 15 significant digits; all numeric file
// output goes through this.
std::string format_double(double value);

// FNV-1a 64-bit content digest, as a 16-digit hex string.
std::string digest_hex(const std::string& bytes);
std::string file_digest_hex(const std::filesystem::path& path);

nlohmann::json to_json(const UnitaryDescriptor& descriptor);
nlohmann::json to_json(const SearchReport& report);
nlohmann::json to_json(const LandscapeConfig& config);
nlohmann::json to_json(const RefrigeratorReport& report);

// Columnar per-step log: header step,qubit,q,T,T_ref,W_ex,dW_ex with LF line
// endings; the dW field is empty on the initial snapshot rows.
void write_trial_csv(const std::filesystem::path& path, const TrialRecord& record);

void write_search_report(const std::filesystem::path& path, const SearchReport& report);

void write_region_csv(const std::filesystem::path& path, const std::vector<RegionPoint>& points);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepPoint>& series);
void write_fit_json(const std::filesystem::path& path, const ExponentialFit& fit,
                    const std::vector<SweepPoint>& series);

// Aggregate exports for one landscape run: summary.json plus per-figure data
// (temperature and work-change traces of trial 0, normalized-work curves,
// positive-step percentages per trial/qubit, and the interval histogram).
// Returns the file names written, relative to `dir`.
std::vector<std::string> write_aggregate_files(const std::filesystem::path& dir,
                                               const std::vector<TrialRecord>& records,
                                               const LandscapeConfig& config);

// Run manifest: command, resolved config, seed, tool version, timestamp, and
// a digest inventory of every output file. Re-running the same command with
// the same seed reproduces the inventory digests byte for byte.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const nlohmann::json& config, std::uint64_t master_seed,
                    const std::vector<std::string>& output_files);

}  // namespace qland
