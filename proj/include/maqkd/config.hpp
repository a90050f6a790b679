#pragma once

// Flat `key = value` sweep configuration. Absent keys take the nominal
// device values.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "maqkd/params.hpp"
#include "maqkd/timeline_mc.hpp"

namespace maqkd::cli {

enum class Curve { Ma, Plob1G, Plob100M, Repeater };
enum class OutputFormat { Csv, Svg, Both };

const char* to_string(Curve c);
const char* to_string(OutputFormat f);
std::optional<Curve> parse_curve(std::string_view s);
std::optional<OutputFormat> parse_format(std::string_view s);

struct SweepRange {
  double from_km = 0.0;
  double to_km = 800.0;
  double step_km = 10.0;
};

struct SweepConfig {
  PhysicalParams params;
  SweepRange sweep;
  std::vector<Curve> curves{Curve::Ma, Curve::Plob1G, Curve::Plob100M,
                            Curve::Repeater};
  std::string output = "rates";
  OutputFormat format = OutputFormat::Csv;
  std::optional<mc::McConfig> mc;

  bool has(Curve c) const;
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::filesystem::path& path);

// Documented keys, in the order they appear in the README table.
const std::vector<std::string>& config_keys();

}  // namespace maqkd::cli
