#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hugetest/distribution.hpp"

namespace hugetest::tools {

using Json = nlohmann::ordered_json;

// A config violation, tagged with the offending field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// `params` holds every flag of the subcommand, including seed, trials and
// threads. The record echoes it verbatim, so a record can be replayed by
// passing its "config" back in.
struct ExperimentConfig {
  std::string command;
  Json params = Json::object();
  bool timing = false;
};

// Validates before doing any work. The record carries "strict_failure",
// true when some trial produced a Reject or Fail verdict.
Json run_experiment(const ExperimentConfig& config);

struct DistributionCheck {
  std::optional<ExplicitDistribution> distribution;
  std::string error;
};

DistributionCheck validate_distribution_file(const std::filesystem::path& path);

// One row per trial; columns are the scalar fields of the trial records.
void write_csv(const Json& record, std::ostream& out);

}  // namespace hugetest::tools
