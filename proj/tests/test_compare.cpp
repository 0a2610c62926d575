#include "doctest.h"

#include "hgr/compare.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace hgr;
namespace fs = std::filesystem;

namespace {

constexpr const char* kHeader =
    "seed,epoch,interactions,success_rate,mean_return,wall_secs\n";

fs::path write_metrics(const std::string& name, const std::string& rows) {
  const fs::path dir = fs::temp_directory_path() / "hgr_compare_tests";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path);
  out << kHeader << rows;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

} // namespace

TEST_CASE("load_curve averages seeds on the union grid") {
  const fs::path path = write_metrics("two_seeds.csv",
                                      "1,0,0,0,-30,0.001\n"
                                      "1,1,30,0.2,-25,0.1\n"
                                      "1,2,60,0.6,-12,0.2\n"
                                      "2,0,0,0,-30,0.001\n"
                                      "2,1,30,0.4,-22,0.1\n"
                                      "2,2,60,0.8,-8,0.2\n");
  const StrategyCurve curve = load_curve(path.string());
  CHECK(curve.label == "two_seeds");
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].interactions == 0);
  CHECK(curve.points[0].mean == 0.0);
  CHECK(curve.points[0].stddev == 0.0);
  CHECK(curve.points[1].interactions == 30);
  CHECK(curve.points[1].mean == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(curve.points[1].stddev == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(curve.points[2].interactions == 60);
  CHECK(curve.points[2].mean == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(curve.points[2].stddev == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("an early-stopped seed carries its last success forward") {
  const fs::path path = write_metrics("early_stop.csv",
                                      "1,0,0,0,-30,0\n"
                                      "1,1,30,0.2,-25,0\n"
                                      "1,2,60,0.6,-12,0\n"
                                      "2,0,0,0,-30,0\n"
                                      "2,1,30,0.9,-5,0\n");
  const StrategyCurve curve = load_curve(path.string());
  REQUIRE(curve.points.size() == 3);
  // seed 2 stopped at 30 with 0.9; at 60 it still counts as 0.9
  CHECK(curve.points[2].mean == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(curve.points[2].stddev == doctest::Approx(0.15).epsilon(1e-12));

  CHECK(interactions_to(curve, 0.5) == std::optional<std::uint64_t>(30));
  CHECK(interactions_to(curve, 0.75) == std::optional<std::uint64_t>(60));
  CHECK(interactions_to(curve, 0.95) == std::nullopt);
  CHECK(interactions_to(curve, 0.0) == std::optional<std::uint64_t>(0));
}

TEST_CASE("rows arriving out of order are sorted per seed") {
  const fs::path path = write_metrics("shuffled.csv",
                                      "1,2,60,1,-2,0\n"
                                      "1,0,0,0,-30,0\n"
                                      "1,1,30,0.5,-20,0\n");
  const StrategyCurve curve = load_curve(path.string());
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].mean == 0.0);
  CHECK(curve.points[1].mean == 0.5);
  CHECK(curve.points[2].mean == 1.0);
}

TEST_CASE("curve_label prefers the parent directory of metrics.csv") {
  CHECK(curve_label("runs/hgr/metrics.csv") == "hgr");
  CHECK(curve_label("/tmp/push_uniform/metrics.csv") == "push_uniform");
  CHECK(curve_label("/tmp/runs/uniform.csv") == "uniform");
  CHECK(curve_label("metrics.csv") == "metrics");
}

TEST_CASE("load_curve rejects wrong headers and malformed rows") {
  const fs::path dir = fs::temp_directory_path() / "hgr_compare_tests";
  fs::create_directories(dir);

  const fs::path wrong = dir / "wrong_header.csv";
  { std::ofstream(wrong) << "foo,bar\n1,2\n"; }
  CHECK_THROWS_WITH_AS(load_curve(wrong.string()),
                       doctest::Contains("not a trainer metrics file"),
                       std::runtime_error);

  const fs::path shortrow = write_metrics("short_row.csv", "1,0,0,0,-30\n");
  CHECK_THROWS_WITH_AS(load_curve(shortrow.string()),
                       doctest::Contains("expected 6 fields"),
                       std::runtime_error);

  const fs::path badfield = write_metrics("bad_field.csv", "1,0,zero,0,-30,0\n");
  try {
    load_curve(badfield.string());
    FAIL_CHECK("expected rejection");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":2:") != std::string::npos);
    CHECK(msg.find("malformed field 'zero'") != std::string::npos);
  }

  CHECK_THROWS_WITH_AS(load_curve((dir / "missing.csv").string()),
                       doctest::Contains("cannot read metrics file"),
                       std::runtime_error);
}

TEST_CASE("header-only files load as empty curves and stay unreached") {
  const fs::path path = write_metrics("empty.csv", "");
  const StrategyCurve curve = load_curve(path.string());
  CHECK(curve.points.empty());
  CHECK(interactions_to(curve, 0.5) == std::nullopt);

  const std::string table = comparison_table({curve});
  const auto lines = lines_of(table);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].find(kUnreached) != std::string::npos);
}

TEST_CASE("comparison_table reports thresholds and is deterministic") {
  const fs::path fast = write_metrics("fast.csv",
                                      "1,0,0,0,-30,0\n"
                                      "1,1,90,1,-3,0\n");
  const fs::path slow = write_metrics("slow.csv",
                                      "1,0,0,0,-30,0\n"
                                      "1,1,90,0.6,-12,0\n");
  const StrategyCurve a = load_curve(fast.string());
  const StrategyCurve b = load_curve(slow.string());

  const std::string table = comparison_table({a, b, a});
  const auto lines = lines_of(table);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].find("strategy") != std::string::npos);
  CHECK(lines[0].find("to-50%") != std::string::npos);
  CHECK(lines[0].find("to-75%") != std::string::npos);
  CHECK(lines[0].find("to-95%") != std::string::npos);
  CHECK(lines[1] == lines[3]); // same curve twice -> identical rows
  CHECK(lines[1].find("fast") == 0);
  // fast hits every threshold at 90; slow only the 50% one
  CHECK(lines[1].find("90") != std::string::npos);
  CHECK(lines[1].find(kUnreached) == std::string::npos);
  CHECK(lines[2].find("90") != std::string::npos);
  CHECK(lines[2].find(kUnreached) != std::string::npos);

  CHECK(comparison_table({a, b, a}) == table);
}

TEST_CASE("write_curve_svg emits self-contained, escaped markup") {
  const fs::path dir = fs::temp_directory_path() / "hgr_compare_tests";
  fs::create_directories(dir);
  const StrategyCurve multi{
      "hgr", {{0, 0.0, 0.0}, {30, 0.5, 0.1}, {60, 1.0, 0.05}}};
  const StrategyCurve single{"a<b&\"c\">", {{60, 0.4, 0.0}}};

  const fs::path svg_path = dir / "curves.svg";
  write_curve_svg(svg_path.string(), {multi, single});
  const std::string svg = slurp(svg_path);

  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("http://") == svg.find("http://www.w3.org/2000/svg"));
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<polygon") != std::string::npos); // stddev band
  CHECK(svg.find("<circle") != std::string::npos);
  CHECK(svg.find("environment interactions") != std::string::npos);
  CHECK(svg.find("success rate") != std::string::npos);
  CHECK(svg.find(">hgr</text>") != std::string::npos);
  CHECK(svg.find("a&lt;b&amp;&quot;c&quot;&gt;") != std::string::npos);
  CHECK(svg.find("a<b") == std::string::npos);

  // a single-point curve draws a marker but no line
  const std::size_t polylines =
      [&] {
        std::size_t n = 0, at = 0;
        while ((at = svg.find("<polyline", at)) != std::string::npos) {
          ++n;
          ++at;
        }
        return n;
      }();
  CHECK(polylines == 1);

  const fs::path again = dir / "curves_again.svg";
  write_curve_svg(again.string(), {multi, single});
  CHECK(slurp(again) == svg);

  CHECK_THROWS_AS(write_curve_svg((dir / "nope" / "x.svg").string(), {multi}),
                  std::runtime_error);
}
