#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hgr {

// Seed-aggregated success at one interaction count.
struct SeriesPoint {
  std::uint64_t interactions = 0;
  double mean = 0.0;
  double stddev = 0.0; // population stddev over seeds
};

struct StrategyCurve {
  std::string label;
  std::vector<SeriesPoint> points; // sorted by interactions
};

inline constexpr std::array<double, 3> kThresholds = {0.5, 0.75, 0.95};
inline constexpr const char* kUnreached = "unreached";

// "runs/hgr/metrics.csv" -> "hgr"; otherwise the file stem.
std::string curve_label(const std::string& metrics_path);

// Parses one trainer metrics CSV and averages success over seeds on the
// union grid of interaction counts. A seed that stopped early carries its
// last observed value forward. Throws std::runtime_error on an unreadable
// file or wrong header.
StrategyCurve load_curve(const std::string& metrics_path);

// First grid point whose seed-mean success reaches the threshold.
std::optional<std::uint64_t> interactions_to(const StrategyCurve& curve,
                                             double threshold);

// Fixed-width text table of interactions-to-{50,75,95}% per curve.
std::string comparison_table(const std::vector<StrategyCurve>& curves);

// Self-contained SVG: per curve a seed-mean polyline plus a +-1 stddev band.
void write_curve_svg(const std::string& path,
                     const std::vector<StrategyCurve>& curves);

} // namespace hgr
