#pragma once

// Experiment configuration, dispatch and report emission behind the frlab CLI.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace frlab {

using Json = nlohmann::ordered_json;

enum class Experiment { Density, Quotient, Inclusion, Xj, Curve, Charsum, J7, Represent, Ruzsa, Farey };

std::string_view experiment_name(Experiment e) noexcept;
std::optional<Experiment> parse_experiment(std::string_view name) noexcept;
std::vector<std::string_view> experiment_names();

enum class ReportFormat { Json, Csv };

/// Invalid configuration or input; the CLI maps this to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::Density;
  std::optional<std::uint64_t> p;
  std::optional<std::uint64_t> p_min, p_max;
  std::vector<std::uint64_t> L;
  std::vector<std::uint64_t> N;
  std::optional<std::uint64_t> j, k, M;
  double epsilon = 0.3;
  std::optional<std::uint64_t> lambda;
  bool all_lambda = false;
  std::optional<std::uint64_t> bound;
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool record_timing = false;
};

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& config);

struct ExperimentReport {
  std::string experiment;
  Json params = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  std::vector<Json> violations;
  std::vector<std::string> notes;
  Json timing;  ///< null unless timing was requested

  int exit_code() const noexcept { return violations.empty() ? 0 : 1; }
};

/// Validates, dispatches, and collects rows. Math-level assertion failures
/// become violations; invalid input throws ConfigError.
ExperimentReport run_experiment(const ExperimentConfig& config);

Json to_json(const ExperimentReport& report);
std::string render(const ExperimentReport& report, ReportFormat format);

/// Writes to path, or to stdout when path is empty or "-". Throws ConfigError
/// when the path cannot be written.
void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path);
void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out);

}  // namespace frlab
