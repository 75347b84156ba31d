#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lbirch {

/// Rejected configuration (exit code 2 in the CLI).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CampaignConfig {
  std::string command;        // birch | identities | hecke | measures
  std::int64_t p = 3;
  int n = 1;
  int m = 1;                  // conductor exponent
  int l = -1;                 // level floor; -1 means the minimal admissible level per block
  int radius = 2;             // e-window for birch
  int key_radius = 1;         // evaluation keys for the hecke eigen-check
  int depth = 3;              // measures: top level M
  std::string chars = "all";  // "all" or comma-separated indices into the primitive characters
  std::string checks;         // comma-separated subset; empty runs the command's defaults
  std::uint64_t seed = 1;
  int threads = 1;
  bool inject_fault = false;  // identities only: corrupt one comparison on purpose
  std::string output;

  nlohmann::json to_json() const;
};

/// Throws ConfigError with a message naming the offending field.
void validate(const CampaignConfig& c);

/// Report: {artifact, statements, config, checks: [{name, pass, ...}], pass, timing}.
/// Everything except "timing" is a function of the config alone.
nlohmann::json run_campaign(const CampaignConfig& c);

/// The report without its timing field, for determinism comparisons.
nlohmann::json strip_timing(nlohmann::json report);

}  // namespace lbirch
