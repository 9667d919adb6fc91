#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rsd/error.hpp"
#include "rsd/experiments/monte_carlo.hpp"

namespace rsd {

inline constexpr const char* kTraceCsvHeader =
    "iteration,mean_rel_error,stderr,trials,method,k,tau,seed";

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trace_csv(const MeanTrace& tr) {
  std::ostringstream os;
  os << kTraceCsvHeader << '\n';
  for (std::size_t t = 0; t < tr.mean.size(); ++t) {
    os << t << ',' << format_g17(tr.mean[t]) << ',' << format_g17(tr.stderr_[t]) << ','
       << tr.trials << ',' << tr.method << ',' << tr.k << ',' << tr.tau << ',' << tr.seed << '\n';
  }
  return os.str();
}

inline std::string trace_filename(const std::string& prefix, const MeanTrace& tr) {
  return prefix + "_" + tr.method + "_k" + std::to_string(tr.k) + "_tau" + std::to_string(tr.tau) + ".csv";
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

/// Writes one CSV per trace into dir and returns the paths in trace order.
inline std::vector<std::filesystem::path> write_trace_csvs(const std::filesystem::path& dir,
                                                           const std::string& prefix,
                                                           const std::vector<MeanTrace>& traces) {
  std::vector<std::filesystem::path> paths;
  for (const MeanTrace& tr : traces) {
    paths.push_back(dir / trace_filename(prefix, tr));
    write_text_file(paths.back(), trace_csv(tr));
  }
  return paths;
}

/// Parses a trace CSV written by trace_csv.
inline MeanTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceCsvHeader) throw ParseError("trace csv: bad header");
  MeanTrace tr;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 8) throw ParseError("trace csv: expected 8 fields on row " + std::to_string(row + 1));
    try {
      if (std::stoul(f[0]) != row) throw ParseError("trace csv: iterations out of order");
      tr.mean.push_back(std::stod(f[1]));
      tr.stderr_.push_back(std::stod(f[2]));
      tr.trials = std::stoul(f[3]);
      tr.method = f[4];
      tr.k = std::stoul(f[5]);
      tr.tau = std::stoul(f[6]);
      tr.seed = std::stoull(f[7]);
    } catch (const std::logic_error&) {
      throw ParseError("trace csv: malformed number on row " + std::to_string(row + 1));
    }
    ++row;
  }
  return tr;
}

}  // namespace rsd
