#pragma once

// JSON run configuration. Every rate, detuning and coupling is given per ω_m
// (keys ending in `_per_wm`); omega_m_hz only labels reports.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "optomech/measures.hpp"
#include "optomech/model.hpp"
#include "optomech/sweep.hpp"

namespace optomech::cli {

/// Malformed JSON or an unreadable file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed document with a bad, unknown or missing key.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string key_path, const std::string& message,
                  std::vector<std::string> missing = {});

  /// Offending key, e.g. "kappa1_per_wm" or "axes[1]"; empty for whole-document errors.
  const std::string& key_path() const noexcept { return key_path_; }
  const std::vector<std::string>& missing() const noexcept { return missing_; }

 private:
  std::string key_path_;
  std::vector<std::string> missing_;
};

struct RunConfig {
  PhysicalParams params;
  std::optional<double> omega_m_hz;
  double threshold = kRegionThreshold;
  ModePair pair;
  std::vector<Axis> axes;
  std::optional<std::string> figure;
  std::optional<std::string> out;
  std::optional<double> t_max;
  std::optional<std::size_t> stride;
  std::optional<double> dt;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Keys that must always be present (plus exactly one of Omega_p_per_wm and r).
const std::vector<std::string>& required_keys();
const std::vector<std::string>& optional_keys();

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config_text(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Inverse of parse_config: parse_config(emit_config(c)) == c.
nlohmann::json emit_config(const RunConfig& config);

}  // namespace optomech::cli
