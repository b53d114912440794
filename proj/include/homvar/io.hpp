#pragma once
#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "homvar/harness.hpp"

// Config parsing and artifact serialization. Configs are versioned JSON with
// strict key checking (a typo is an error, never a silent default). All
// output goes through OutputRecorder so the manifest can list every file
// with its size and digest.
namespace homvar::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "homvar 0.1.0";
inline constexpr const char* kConfigSchema = "homvar-config/1";

// Throws std::invalid_argument with a path-qualified message on unknown keys,
// wrong types, or inconsistent values. The result has validate() already run.
harness::ExperimentConfig parse_config(const Json& j);
harness::ExperimentConfig load_config(const std::string& path);

// Canonical resolved form: includes defaulted fields and is itself a valid
// parse_config input, so a manifest alone reproduces the run.
Json config_to_json(const harness::ExperimentConfig& c);

Json prediction_to_json(const VariancePrediction& p);
Json empirical_to_json(const harness::EmpiricalStatistics& e);
Json report_to_json(const harness::VarianceReport& r);
Json power_to_json(const PowerByBlock& p);
Json radial_to_json(const euclidean::RadialSpectrum& s);

// label,dim,power_F,power_S_hat,se,contribution (one row per block)
std::string contributions_csv(const VariancePrediction& p);
// label,dim,power,se
std::string power_csv(const PowerByBlock& p);
// lambda,power,shell_size,se
std::string radial_csv(const euclidean::RadialSpectrum& s);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Writes files under dir (created if missing) and collects manifest rows.
class OutputRecorder {
 public:
  explicit OutputRecorder(std::string dir);
  void write(const std::string& name, const std::string& bytes);
  const std::vector<Json>& entries() const { return entries_; }
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::vector<Json> entries_;
};

Json make_manifest(const std::string& command, const Json& config,
                   std::uint64_t seed, int workers, double duration_ms,
                   const std::vector<Json>& outputs);

}  // namespace homvar::io
