#include <gtest/gtest.h>

#include <sstream>

#include "support/oracles.hpp"

using namespace rsd;

namespace {

MeanTrace sample_trace() {
  MeanTrace tr;
  tr.mean = {1.0, 0.5, 1.0 / 3.0, 1e-20};
  tr.stderr_ = {0.0, 0.01, 0.002, 0.0};
  tr.trials = 10;
  tr.method = "sscd";
  tr.k = 4;
  tr.tau = 2;
  tr.seed = 99;
  return tr;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Csv, HeaderRowsAndRoundTrip) {
  const MeanTrace tr = sample_trace();
  const std::string csv = trace_csv(tr);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "iteration,mean_rel_error,stderr,trials,method,k,tau,seed");
  EXPECT_EQ(count(csv, "\n"), 5u);
  EXPECT_NE(csv.find("2,0.33333333333333331,0.002,10,sscd,4,2,99\n"), std::string::npos);
  std::istringstream in(csv);
  const MeanTrace back = read_trace_csv(in);
  EXPECT_EQ(back.mean, tr.mean);
  EXPECT_EQ(back.stderr_, tr.stderr_);
  EXPECT_EQ(back.method, "sscd");
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(trace_filename("exp", tr), "exp_sscd_k4_tau2.csv");
}

TEST(Csv, RejectsMalformedInput) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(read_trace_csv(bad_header), ParseError);
  std::istringstream bad_row(std::string(kTraceCsvHeader) + "\n0,x,0,1,m,0,1,0\n");
  EXPECT_THROW(read_trace_csv(bad_row), ParseError);
}

TEST(Svg, StructureAndDeterminism) {
  plot::Panel panel{"demo", {{"a", {1, 0.1, 0.01}}, {"b & c", {1, 0.5, 0.0}}}};
  const std::string svg = plot::render_svg(panel);
  EXPECT_NE(svg.find("viewBox=\"0 0 800 500\""), std::string::npos);
  EXPECT_EQ(count(svg, "<polyline"), 2u);
  EXPECT_NE(svg.find("b &amp; c"), std::string::npos);
  // Zero is clamped to 1e-16, so the lowest decade label is 1e-16.
  EXPECT_NE(svg.find(">1e-16<"), std::string::npos);
  EXPECT_EQ(svg, plot::render_svg(panel));
  EXPECT_THROW(plot::render_svg(std::vector<plot::Panel>{}), Error);
}

TEST(Svg, MultiPanelAndDecimation) {
  std::vector<double> long_series(5001);
  for (std::size_t i = 0; i < long_series.size(); ++i) long_series[i] = std::pow(0.999, static_cast<double>(i));
  std::vector<plot::Panel> panels;
  for (int p = 0; p < 4; ++p) panels.push_back({"tau=" + std::to_string(1 << p), {{"k=0", long_series}}});
  plot::ChartOptions opt;
  opt.max_points = 100;
  const std::string svg = plot::render_svg(panels, opt);
  EXPECT_EQ(count(svg, "<polyline"), 4u);
  const auto start = svg.find("points=\"");
  const auto end = svg.find('"', start + 8);
  EXPECT_LE(count(svg.substr(start, end - start), ","), 100u);
  for (int p = 0; p < 4; ++p) EXPECT_NE(svg.find("tau=" + std::to_string(1 << p)), std::string::npos);
}

TEST(Svg, PaletteHasTenColours) {
  EXPECT_EQ(plot::palette().size(), 10u);
  std::vector<plot::Series> many;
  for (int i = 0; i < 12; ++i) many.push_back({"s" + std::to_string(i), {1, 0.5}});
  const std::string svg = plot::render_svg(plot::Panel{"", many});
  EXPECT_EQ(count(svg, plot::palette()[0]), 4u);  // series 0 and 10: polyline + legend each
}

TEST(Experiment, WritesCsvsAndSvgBitIdentically) {
  const auto a = preset_expdecay(4, 3, 10);
  const auto b = preset_expdecay(4, 3, 10);
  const auto dir = std::filesystem::temp_directory_path() / "rsd_unit_experiment";
  std::filesystem::remove_all(dir);
  const auto paths = write_experiment(a, dir / "one");
  write_experiment(b, dir / "two");
  EXPECT_EQ(paths.size(), 11u);
  for (const auto& p : paths) {
    std::ifstream f1(p), f2(dir / "two" / p.filename());
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    EXPECT_FALSE(s1.str().empty());
    EXPECT_EQ(s1.str(), s2.str()) << p;
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "one" / "expdecay_sscd_k9_tau1.csv"));
  std::filesystem::remove_all(dir);
}
