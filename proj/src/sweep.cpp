#include "maqkd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "maqkd/protocol.hpp"

namespace maqkd::cli {
namespace {

double plob_rate(const PhysicalParams& params, double L, double clock) {
  return rates::plob_bound(L, params.optics, clock).rate;
}

SweepRow evaluate_row(const SweepConfig& cfg, double L) {
  const auto& p = cfg.params;
  SweepRow row;
  row.L_km = L;
  const auto obs = protocol::compute_observables(p, L);
  row.P_A = obs.P_A;
  row.P_B = obs.P_B;
  row.e_X = obs.e_X;
  row.e_Z = obs.e_Z;
  if (cfg.has(Curve::Ma)) row.R_ma = rates::ma_key_rate(obs, p.f, L).rate;
  if (cfg.has(Curve::Plob1G)) row.R_plob1G = plob_rate(p, L, kClock1G);
  if (cfg.has(Curve::Plob100M)) row.R_plob100M = plob_rate(p, L, kClock100M);
  if (cfg.has(Curve::Repeater)) row.R_rep = repeater_rate(p, L);
  return row;
}

std::string optional_number(const std::optional<double>& x) {
  return x ? format_number(*x) : std::string();
}

std::optional<double> row_value(const SweepRow& r, Curve c) {
  switch (c) {
    case Curve::Ma: return r.R_ma;
    case Curve::Plob1G: return r.R_plob1G;
    case Curve::Plob100M: return r.R_plob100M;
    case Curve::Repeater: break;
  }
  return r.R_rep;
}

const char* curve_label(Curve c) {
  switch (c) {
    case Curve::Ma: return "single-NV MA-MDI-QKD";
    case Curve::Plob1G: return "PLOB, 1 GHz";
    case Curve::Plob100M: return "PLOB, 100 MHz";
    case Curve::Repeater: break;
  }
  return "three-leg repeater";
}

const char* curve_color(Curve c) {
  switch (c) {
    case Curve::Ma: return "#1f77b4";
    case Curve::Plob1G: return "#d62728";
    case Curve::Plob100M: return "#ff7f0e";
    case Curve::Repeater: break;
  }
  return "#2ca02c";
}

std::string clock_label(double clock) {
  if (clock == kClock1G) return "1GHz";
  if (clock == kClock100M) return "100MHz";
  return format_number(clock) + "Hz";
}

std::string strip_extension(const std::string& path) {
  const std::filesystem::path p(path);
  const auto ext = p.extension().string();
  if (ext == ".csv" || ext == ".svg") return (p.parent_path() / p.stem()).string();
  return path;
}

}  // namespace

double ma_rate(const PhysicalParams& params, double L) {
  const auto obs = protocol::compute_observables(params, L);
  return rates::ma_key_rate(obs, params.f, L).rate;
}

double repeater_rate(const PhysicalParams& params, double L) {
  return rates::repeater_rate(rates::repeater_params(params, L)).rate;
}

double curve_rate(Curve curve, const PhysicalParams& params, double L) {
  switch (curve) {
    case Curve::Ma: return ma_rate(params, L);
    case Curve::Plob1G: return plob_rate(params, L, kClock1G);
    case Curve::Plob100M: return plob_rate(params, L, kClock100M);
    case Curve::Repeater: break;
  }
  return repeater_rate(params, L);
}

std::vector<double> sweep_points(const SweepRange& range) {
  std::vector<double> pts;
  const auto n = static_cast<long long>(
      std::floor((range.to_km - range.from_km) / range.step_km + 1e-9));
  for (long long i = 0; i <= n; ++i) pts.push_back(range.from_km + double(i) * range.step_km);
  return pts;
}

SweepTable run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto points = sweep_points(cfg.sweep);
  SweepTable table;
  table.curves = cfg.curves;
  table.rows.resize(points.size());

  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < points.size(); i += workers) {
        table.rows[i] = evaluate_row(cfg, points[i]);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return table;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  if (std::abs(x) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.5e", x);
    return buf;
  }
  // Round to six significant digits, then print without an exponent.
  std::snprintf(buf, sizeof buf, "%.5e", x);
  const double rounded = std::strtod(buf, nullptr);
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(rounded))));
  const int decimals = std::max(0, 5 - exponent);
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : table.rows) {
    out << format_number(r.L_km) << ',' << optional_number(r.R_ma) << ','
        << optional_number(r.R_plob1G) << ',' << optional_number(r.R_plob100M) << ','
        << optional_number(r.R_rep) << ',' << format_number(r.P_A) << ','
        << format_number(r.P_B) << ',' << format_number(r.e_X) << ','
        << format_number(r.e_Z) << '\n';
  }
}

void write_svg(const SweepTable& table, std::ostream& out) {
  constexpr double W = 800, H = 520;
  constexpr double left = 80, right = 220, top = 30, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;

  double lmin = 0, lmax = 1;
  if (!table.rows.empty()) {
    lmin = table.rows.front().L_km;
    lmax = std::max(table.rows.back().L_km, lmin + 1e-9);
  }
  double ymin = INFINITY, ymax = -INFINITY;
  for (const auto& r : table.rows) {
    for (auto c : table.curves) {
      const auto v = row_value(r, c);
      if (v && *v > 0 && std::isfinite(*v)) {
        ymin = std::min(ymin, std::log10(*v));
        ymax = std::max(ymax, std::log10(*v));
      }
    }
  }
  if (!std::isfinite(ymin)) {
    ymin = 0;
    ymax = 1;
  }
  ymin = std::floor(ymin);
  ymax = std::max(std::ceil(ymax), ymin + 1);

  const auto sx = [&](double L) { return left + (L - lmin) / (lmax - lmin) * pw; };
  const auto sy = [&](double lg) { return top + (ymax - lg) / (ymax - ymin) * ph; };

  char buf[256];
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" "
                "height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                W, H, W, H);
  out << buf;
  out << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                "fill=\"none\" stroke=\"black\"/>\n",
                left, top, pw, ph);
  out << buf;

  // Decade grid on the rate axis.
  const int step = std::max(1, static_cast<int>((ymax - ymin) / 12) + 1);
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); d += step) {
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"#dddddd\"/>\n<text x=\"%.1f\" y=\"%.1f\" "
                  "font-size=\"12\" text-anchor=\"end\">1e%d</text>\n",
                  left, sy(d), left + pw, sy(d), left - 6, sy(d) + 4, d);
    out << buf;
  }
  for (int k = 0; k <= 8; ++k) {
    const double L = lmin + (lmax - lmin) * k / 8.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" "
                  "text-anchor=\"middle\">%s</text>\n",
                  sx(L), top + ph + 18, format_number(L).c_str());
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%.1f\" y=\"%.1f\" font-size=\"14\" "
                "text-anchor=\"middle\">Distance (km)</text>\n",
                left + pw / 2, H - 15);
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"20\" y=\"%.1f\" font-size=\"14\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 20 %.1f)\">Key rate (bits/s)</text>\n",
                top + ph / 2, top + ph / 2);
  out << buf;

  int legend_row = 0;
  for (auto c : table.curves) {
    // Zero or missing rates split the curve into separate segments.
    std::vector<std::string> segments;
    std::string current;
    for (const auto& r : table.rows) {
      const auto v = row_value(r, c);
      if (v && *v > 0 && std::isfinite(*v)) {
        std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(r.L_km), sy(std::log10(*v)));
        current += buf;
      } else if (!current.empty()) {
        segments.push_back(std::move(current));
        current.clear();
      }
    }
    if (!current.empty()) segments.push_back(std::move(current));
    out << "<g class=\"curve\" id=\"" << to_string(c) << "\">\n";
    for (auto& s : segments) {
      s.pop_back();
      out << "<polyline fill=\"none\" stroke=\"" << curve_color(c)
          << "\" stroke-width=\"2\" points=\"" << s << "\"/>\n";
    }
    out << "</g>\n";

    const double ly = top + 20 + 22 * legend_row++;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                  "stroke=\"%s\" stroke-width=\"2\"/>\n<text x=\"%.1f\" y=\"%.1f\" "
                  "font-size=\"12\">%s</text>\n",
                  left + pw + 15, ly, left + pw + 45, ly, curve_color(c),
                  left + pw + 52, ly + 4, curve_label(c));
    out << "<g class=\"legend\">\n" << buf << "</g>\n";
  }
  out << "</svg>\n";
}

std::vector<std::string> write_outputs(const SweepTable& table, const SweepConfig& cfg) {
  const std::string base = strip_extension(cfg.output);
  std::vector<std::string> written;
  const auto emit = [&](const std::string& path, auto writer) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    writer(table, out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
    written.push_back(path);
  };
  if (cfg.format != OutputFormat::Svg) emit(base + ".csv", write_csv);
  if (cfg.format != OutputFormat::Csv) emit(base + ".svg", write_svg);
  return written;
}

std::optional<SolveMode> parse_solve_mode(std::string_view s) {
  if (s == "crossover_ma_plob") return SolveMode::CrossoverMaPlob;
  if (s == "crossover_rep_plob") return SolveMode::CrossoverRepPlob;
  if (s == "repeater_max") return SolveMode::RepeaterMax;
  return std::nullopt;
}

SolveResult solve(const SweepConfig& cfg, SolveMode mode, double plob_clock) {
  cfg.validate();
  const auto& p = cfg.params;
  SolveResult result;
  result.mode = mode;
  char buf[256];

  if (mode == SolveMode::RepeaterMax) {
    const auto rp = rates::repeater_params(p, 0.0);
    result.distance_km = rates::repeater_max_distance(rp);
    if (!result.distance_km) {
      result.report = "repeater_max: unbounded within model (no dark counts)";
      return result;
    }
    const double L = *result.distance_km;
    result.rate_a = rates::entanglement_probability(L, p.optics);
    result.rate_b = photonics::dark_click_probability(p.optics);
    std::snprintf(buf, sizeof buf,
                  "repeater_max: L = %.1f km (P_ent = %s, p_dc = %s)", L,
                  format_number(result.rate_a).c_str(),
                  format_number(result.rate_b).c_str());
    result.report = buf;
    return result;
  }

  const auto curve_a = [&](double L) {
    return mode == SolveMode::CrossoverMaPlob ? ma_rate(p, L) : repeater_rate(p, L);
  };
  const auto curve_b = [&](double L) { return plob_rate(p, L, plob_clock); };
  const auto sign = [&](double L) {
    const double d = std::log10(curve_a(L)) - std::log10(curve_b(L));
    return std::isnan(d) ? 0 : (d < 0 ? -1 : 1);
  };

  const auto points = sweep_points(cfg.sweep);
  std::optional<std::pair<double, double>> bracket;
  int prev = sign(points.front());
  for (std::size_t i = 1; i < points.size() && !bracket; ++i) {
    const int s = sign(points[i]);
    if (prev != 0 && s != 0 && s != prev) bracket = {points[i - 1], points[i]};
    if (s != 0) prev = s;
  }
  if (!bracket) {
    throw rates::SolverError("no crossover between " + format_number(cfg.sweep.from_km) +
                             " and " + format_number(cfg.sweep.to_km) + " km");
  }
  const double L = rates::crossover_distance(curve_a, curve_b, bracket->first,
                                             bracket->second, 0.1);
  result.distance_km = L;
  result.rate_a = curve_a(L);
  result.rate_b = curve_b(L);
  std::snprintf(buf, sizeof buf, "%s: L = %.1f km (R_%s = %s b/s, R_plob@%s = %s b/s)",
                mode == SolveMode::CrossoverMaPlob ? "crossover_ma_plob"
                                                   : "crossover_rep_plob",
                L, mode == SolveMode::CrossoverMaPlob ? "ma" : "rep",
                format_number(result.rate_a).c_str(),
                clock_label(plob_clock).c_str(),
                format_number(result.rate_b).c_str());
  result.report = buf;
  return result;
}

}  // namespace maqkd::cli
