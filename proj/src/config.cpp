#include "maqkd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace maqkd::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view v, int line, const std::string& key) {
  double x = 0.0;
  const std::string s(v);
  std::size_t used = 0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || std::isnan(x)) {
    throw ConfigError(line, "cannot parse value '" + s + "' for key '" + key + "'");
  }
  return x;
}

std::uint64_t parse_u64(std::string_view v, int line, const std::string& key) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(line, "cannot parse integer '" + std::string(v) +
                                "' for key '" + key + "'");
  }
  return x;
}

void require(bool ok, int line, const std::string& key, const char* what) {
  if (!ok) throw ConfigError(line, "key '" + key + "' " + what);
}

using Setter = std::function<void(SweepConfig&, std::string_view, int)>;

template <typename F>
Setter number(const std::string& key, F assign, const char* range, bool (*ok)(double)) {
  return [key, assign, range, ok](SweepConfig& cfg, std::string_view v, int line) {
    const double x = parse_double(v, line, key);
    require(ok(x), line, key, range);
    assign(cfg, x);
  };
}

bool is_probability(double x) { return x >= 0.0 && x <= 1.0; }
bool is_positive(double x) { return x > 0.0; }
bool is_nonnegative(double x) { return x >= 0.0; }
bool is_finite(double x) { return std::isfinite(x); }
bool is_at_least_one(double x) { return x >= 1.0; }
bool is_penalty(double x) { return x > 0.0 && x <= 1.0; }

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    constexpr auto kProb = "must lie in [0, 1]";
    constexpr auto kPos = "must be positive";
    constexpr auto kNonneg = "must be non-negative";
    std::map<std::string, Setter> t;
    const auto add = [&](const std::string& key, auto assign, const char* range,
                         bool (*ok)(double)) {
      t.emplace(key, number(key, assign, range, ok));
    };
    add("eta", [](SweepConfig& c, double x) { c.params.optics.eta = x; }, kProb, is_probability);
    add("eta_s", [](SweepConfig& c, double x) { c.params.optics.eta_s = x; }, kProb, is_probability);
    add("eta_c", [](SweepConfig& c, double x) { c.params.optics.eta_c = x; }, kProb, is_probability);
    add("eta_d", [](SweepConfig& c, double x) { c.params.optics.eta_d = x; }, kProb, is_probability);
    add("dark_count_rate", [](SweepConfig& c, double x) { c.params.optics.dark_rate = x; }, kNonneg, is_nonnegative);
    add("gate_window", [](SweepConfig& c, double x) { c.params.optics.gate_window = x; }, kPos, is_positive);
    add("L_att", [](SweepConfig& c, double x) { c.params.optics.L_att = x; }, kPos, is_positive);
    add("cooperativity", [](SweepConfig& c, double x) { c.params.optics.cooperativity = x; }, kPos, is_positive);
    add("switch_loss_db", [](SweepConfig& c, double x) { c.params.optics.switch_loss_db = x; }, kNonneg, is_nonnegative);
    add("c", [](SweepConfig& c, double x) { c.params.c = x; }, kPos, is_positive);
    add("tau_init", [](SweepConfig& c, double x) { c.params.timing.tau_init = x; }, kNonneg, is_nonnegative);
    add("tau_int", [](SweepConfig& c, double x) { c.params.timing.tau_int = x; }, kNonneg, is_nonnegative);
    add("tau_M", [](SweepConfig& c, double x) { c.params.timing.tau_M = x; }, kNonneg, is_nonnegative);
    add("tau_dis", [](SweepConfig& c, double x) { c.params.timing.tau_dis = x; }, kNonneg, is_nonnegative);
    add("tau_swap", [](SweepConfig& c, double x) { c.params.timing.tau_swap = x; }, kNonneg, is_nonnegative);
    add("tau_BSM", [](SweepConfig& c, double x) { c.params.timing.tau_BSM = x; }, kNonneg, is_nonnegative);
    add("p_e", [](SweepConfig& c, double x) { c.params.gates.p_e = x; }, kProb, is_probability);
    add("p_n", [](SweepConfig& c, double x) { c.params.gates.p_n = x; }, kProb, is_probability);
    add("p_CZ", [](SweepConfig& c, double x) { c.params.gates.p_cz = x; }, kProb, is_probability);
    add("T_n", [](SweepConfig& c, double x) { c.params.coherence.T_n = x; }, kPos, is_positive);
    add("T_e", [](SweepConfig& c, double x) { c.params.coherence.T_e = x; }, kPos, is_positive);
    add("f", [](SweepConfig& c, double x) { c.params.f = x; }, "must be >= 1", is_at_least_one);
    add("A_net", [](SweepConfig& c, double x) { c.params.hyperfine.A_net = x; }, kPos, is_positive);
    add("dead_time_penalty", [](SweepConfig& c, double x) { c.params.dead_time_penalty = x; }, "must lie in (0, 1]", is_penalty);
    add("from_km", [](SweepConfig& c, double x) { c.sweep.from_km = x; }, kNonneg, is_nonnegative);
    add("to_km", [](SweepConfig& c, double x) { c.sweep.to_km = x; }, "must be finite", is_finite);
    add("step_km", [](SweepConfig& c, double x) { c.sweep.step_km = x; }, kPos, is_positive);

    t.emplace("curves", [](SweepConfig& c, std::string_view v, int line) {
      std::vector<Curve> curves;
      std::size_t start = 0;
      while (start <= v.size()) {
        auto end = v.find(',', start);
        if (end == std::string_view::npos) end = v.size();
        const auto item = trim(v.substr(start, end - start));
        const auto curve = parse_curve(item);
        if (!curve) {
          throw ConfigError(line, "unknown curve '" + std::string(item) + "'");
        }
        if (std::find(curves.begin(), curves.end(), *curve) == curves.end()) {
          curves.push_back(*curve);
        }
        start = end + 1;
      }
      if (curves.empty()) throw ConfigError(line, "empty curve selection");
      c.curves = std::move(curves);
    });
    t.emplace("output", [](SweepConfig& c, std::string_view v, int line) {
      if (v.empty()) throw ConfigError(line, "output path is empty");
      c.output = std::string(v);
    });
    t.emplace("format", [](SweepConfig& c, std::string_view v, int line) {
      const auto f = parse_format(v);
      if (!f) throw ConfigError(line, "format must be csv, svg or both");
      c.format = *f;
    });
    t.emplace("mc_trials", [](SweepConfig& c, std::string_view v, int line) {
      const auto n = parse_u64(v, line, "mc_trials");
      require(n >= 1, line, "mc_trials", "must be >= 1");
      if (!c.mc) c.mc.emplace();
      c.mc->n_trials = static_cast<std::int64_t>(n);
    });
    t.emplace("seed", [](SweepConfig& c, std::string_view v, int line) {
      if (!c.mc) c.mc.emplace();
      c.mc->seed = parse_u64(v, line, "seed");
    });
    return t;
  }();
  return table;
}

}  // namespace

const char* to_string(Curve c) {
  switch (c) {
    case Curve::Ma: return "ma";
    case Curve::Plob1G: return "plob_1ghz";
    case Curve::Plob100M: return "plob_100mhz";
    case Curve::Repeater: break;
  }
  return "repeater";
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Svg: return "svg";
    case OutputFormat::Both: break;
  }
  return "both";
}

std::optional<Curve> parse_curve(std::string_view s) {
  for (auto c : {Curve::Ma, Curve::Plob1G, Curve::Plob100M, Curve::Repeater}) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

std::optional<OutputFormat> parse_format(std::string_view s) {
  for (auto f : {OutputFormat::Csv, OutputFormat::Svg, OutputFormat::Both}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

bool SweepConfig::has(Curve c) const {
  return std::find(curves.begin(), curves.end(), c) != curves.end();
}

void SweepConfig::validate() const {
  if (!(sweep.from_km < sweep.to_km)) {
    throw ConfigError(0, "from_km must be smaller than to_km");
  }
  if (!(sweep.step_km > 0.0)) throw ConfigError(0, "step_km must be positive");
  if (curves.empty()) throw ConfigError(0, "empty curve selection");
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
}

ConfigError::ConfigError(int line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                  : what),
      line_(line) {}

SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  const auto& table = setters();
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (const auto [prev, fresh] = seen.emplace(key, line_no); !fresh) {
      throw ConfigError(line_no, "key '" + key + "' already set on line " +
                                     std::to_string(prev->second));
    }
    it->second(cfg, value, line_no);
  }

  // Cross-key invariants report the line of the key that completes them.
  const auto line_of = [&](const char* k) {
    const auto it = seen.find(k);
    return it == seen.end() ? 0 : it->second;
  };
  if (!(cfg.sweep.from_km < cfg.sweep.to_km)) {
    throw ConfigError(std::max(line_of("from_km"), line_of("to_km")),
                      "from_km must be smaller than to_km");
  }
  if (cfg.params.optics.dark_rate * cfg.params.optics.gate_window > 1.0) {
    throw ConfigError(std::max(line_of("dark_count_rate"), line_of("gate_window")),
                      "dark_count_rate * gate_window exceeds 1");
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

}  // namespace maqkd::cli
