#pragma once

// Flat key = value experiment configuration with a fixed schema.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace floqsim {

enum class ValueType { integer, real, real_or_auto, text, boolean, int_list, real_list };

struct ConfigKey {
  std::string name;
  ValueType type;
  std::string doc;
  /// Allowed values for text keys; empty means free text.
  std::vector<std::string> choices;
};

/// Every key the runner understands. Keys not listed here are rejected.
const std::vector<ConfigKey>& config_schema();

const std::vector<std::string>& scenario_names();

class ExperimentConfig {
 public:
  /// Scenario defaults; throws ConfigError for an unknown scenario.
  static ExperimentConfig defaults(const std::string& scenario);

  /// Parses `text` on top of the defaults of its `scenario` key, or of
  /// `scenario` when given. Blank lines and lines starting with '#' are
  /// ignored.
  static ExperimentConfig parse(const std::string& text,
                                const std::optional<std::string>& scenario = {});
  static ExperimentConfig load(const std::filesystem::path& path,
                               const std::optional<std::string>& scenario = {});

  /// Validates against the schema and stores the canonical spelling.
  void set(const std::string& key, const std::string& value);
  /// "key=value"
  void apply_override(const std::string& assignment);

  /// One "key=value" per line, keys sorted; parse(serialize()) == *this.
  std::string serialize() const;

  const std::string& scenario() const { return scenario_; }
  const std::map<std::string, std::string>& values() const { return values_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  int get_int(const std::string& key) const;
  double get_real(const std::string& key) const;
  /// nullopt when the value is "auto".
  std::optional<double> get_real_or_auto(const std::string& key) const;
  const std::string& get_text(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key) const;
  std::vector<double> get_reals(const std::string& key) const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

 private:
  std::string scenario_;
  std::map<std::string, std::string> values_;

  const std::string& raw(const std::string& key) const;
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_real(double v);

}  // namespace floqsim
