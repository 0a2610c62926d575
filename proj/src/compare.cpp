#include "hgr/compare.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace hgr {
namespace {

constexpr const char* kHeader =
    "seed,epoch,interactions,success_rate,mean_return,wall_secs";

std::string trimmed(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

template <typename T>
T parse_field(const std::string& field, const std::string& where) {
  T out{};
  const std::string v = trimmed(field);
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw std::runtime_error(where + ": malformed field '" + field + "'");
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace

std::string curve_label(const std::string& metrics_path) {
  const std::filesystem::path p(metrics_path);
  if (p.filename() == "metrics.csv" && p.has_parent_path() &&
      !p.parent_path().filename().empty())
    return p.parent_path().filename().string();
  return p.stem().string();
}

StrategyCurve load_curve(const std::string& metrics_path) {
  std::ifstream in(metrics_path);
  if (!in)
    throw std::runtime_error("cannot read metrics file: " + metrics_path);
  std::string line;
  if (!std::getline(in, line) || trimmed(line) != kHeader)
    throw std::runtime_error("not a trainer metrics file: " + metrics_path);

  std::map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>>
      by_seed;
  std::set<std::uint64_t> grid;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trimmed(line).empty()) continue;
    const std::string where =
        metrics_path + ":" + std::to_string(lineno);
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 6)
      throw std::runtime_error(where + ": expected 6 fields");
    const auto seed = parse_field<std::uint64_t>(fields[0], where);
    const auto interactions = parse_field<std::uint64_t>(fields[2], where);
    const auto success = parse_field<double>(fields[3], where);
    by_seed[seed].emplace_back(interactions, success);
    grid.insert(interactions);
  }
  for (auto& [seed, rows] : by_seed)
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

  StrategyCurve curve{curve_label(metrics_path), {}};
  for (const std::uint64_t x : grid) {
    // Seeds that stopped early keep their last observed success; a seed with
    // no row yet (no epoch-0 baseline) simply does not contribute.
    std::vector<double> values;
    for (const auto& [seed, rows] : by_seed) {
      const auto it = std::upper_bound(
          rows.begin(), rows.end(), x,
          [](std::uint64_t v, const auto& row) { return v < row.first; });
      if (it != rows.begin()) values.push_back(std::prev(it)->second);
    }
    if (values.empty()) continue;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    curve.points.push_back({x, mean, std::sqrt(var / n)});
  }
  return curve;
}

std::optional<std::uint64_t> interactions_to(const StrategyCurve& curve,
                                             double threshold) {
  for (const SeriesPoint& p : curve.points)
    if (p.mean >= threshold) return p.interactions;
  return std::nullopt;
}

std::string comparison_table(const std::vector<StrategyCurve>& curves) {
  std::size_t label_w = std::string("strategy").size();
  for (const StrategyCurve& c : curves)
    label_w = std::max(label_w, c.label.size());
  label_w += 2;

  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(label_w)) << "strategy"
      << std::right;
  for (const char* h : {"to-50%", "to-75%", "to-95%"}) out << std::setw(12) << h;
  out << '\n';
  for (const StrategyCurve& c : curves) {
    out << std::left << std::setw(static_cast<int>(label_w)) << c.label
        << std::right;
    for (const double threshold : kThresholds) {
      const auto hit = interactions_to(c, threshold);
      out << std::setw(12)
          << (hit ? std::to_string(*hit) : std::string(kUnreached));
    }
    out << '\n';
  }
  return out.str();
}

void write_curve_svg(const std::string& path,
                     const std::vector<StrategyCurve>& curves) {
  constexpr double kW = 860.0, kH = 520.0;
  constexpr double kMl = 70.0, kMr = 170.0, kMt = 30.0, kMb = 55.0;
  const double plot_w = kW - kMl - kMr, plot_h = kH - kMt - kMb;
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                   "#9467bd", "#ff7f0e", "#8c564b"};
  constexpr std::size_t kColors = sizeof(kPalette) / sizeof(kPalette[0]);

  std::uint64_t max_x = 1;
  for (const StrategyCurve& c : curves)
    for (const SeriesPoint& p : c.points) max_x = std::max(max_x, p.interactions);
  const auto sx = [&](double v) { return kMl + v / static_cast<double>(max_x) * plot_w; };
  const auto sy = [&](double v) { return kMt + (1.0 - v) * plot_h; };

  std::ostringstream svg;
  svg << std::fixed << std::setprecision(2);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << ' ' << kH
      << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double frac = t / 4.0;
    const double y = sy(frac);
    svg << "<line x1=\"" << kMl << "\" y1=\"" << y << "\" x2=\""
        << kMl + plot_w << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << kMl - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">" << frac << "</text>\n";
    const std::uint64_t xv = max_x * static_cast<std::uint64_t>(t) / 4;
    const double x = sx(static_cast<double>(xv));
    svg << "<line x1=\"" << x << "\" y1=\"" << kMt + plot_h << "\" x2=\"" << x
        << "\" y2=\"" << kMt + plot_h + 5
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << x << "\" y=\"" << kMt + plot_h + 20
        << "\" text-anchor=\"middle\">" << xv << "</text>\n";
  }
  svg << "<line x1=\"" << kMl << "\" y1=\"" << kMt << "\" x2=\"" << kMl
      << "\" y2=\"" << kMt + plot_h
      << "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
  svg << "<line x1=\"" << kMl << "\" y1=\"" << kMt + plot_h << "\" x2=\""
      << kMl + plot_w << "\" y2=\"" << kMt + plot_h
      << "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
  svg << "<text x=\"" << kMl + plot_w / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\">environment interactions</text>\n";
  svg << "<text x=\"18\" y=\"" << kMt + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kMt + plot_h / 2 << ")\">success rate</text>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const StrategyCurve& c = curves[k];
    const char* color = kPalette[k % kColors];
    if (c.points.size() >= 2) {
      svg << "<polygon fill=\"" << color
          << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
      for (const SeriesPoint& p : c.points)
        svg << sx(static_cast<double>(p.interactions)) << ','
            << sy(std::min(1.0, p.mean + p.stddev)) << ' ';
      for (auto it = c.points.rbegin(); it != c.points.rend(); ++it)
        svg << sx(static_cast<double>(it->interactions)) << ','
            << sy(std::max(0.0, it->mean - it->stddev)) << ' ';
      svg << "\"/>\n";
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\" points=\"";
      for (const SeriesPoint& p : c.points)
        svg << sx(static_cast<double>(p.interactions)) << ','
            << sy(p.mean) << ' ';
      svg << "\"/>\n";
    }
    for (const SeriesPoint& p : c.points)
      svg << "<circle cx=\"" << sx(static_cast<double>(p.interactions))
          << "\" cy=\"" << sy(p.mean) << "\" r=\"2.5\" fill=\"" << color
          << "\"/>\n";
    const double ly = kMt + 18.0 + static_cast<double>(k) * 22.0;
    svg << "<line x1=\"" << kW - kMr + 14 << "\" y1=\"" << ly - 4
        << "\" x2=\"" << kW - kMr + 38 << "\" y2=\"" << ly - 4
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << kW - kMr + 44 << "\" y=\"" << ly << "\">"
        << xml_escape(c.label) << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curve file: " + path);
  out << svg.str();
  out.flush();
  if (!out) throw std::runtime_error("failed writing curve file: " + path);
}

} // namespace hgr
