#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rsd/error.hpp"
#include "rsd/linalg/matrix.hpp"

namespace rsd {

/// Matrix text format: a line holding n, then n rows of n whitespace-separated
/// numbers. Asymmetry up to 1e-9 (relative to max(1, max|a_ij|)) is averaged away.
inline SymmetricMatrix read_matrix_text(std::istream& in) {
  long long n = 0;
  if (!(in >> n)) throw ParseError("matrix parse error: missing dimension line");
  if (n < 1) throw ParseError("matrix parse error: dimension must be positive");
  const auto dim = static_cast<std::size_t>(n);
  Matrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      if (!(in >> m(i, j))) {
        throw ParseError("matrix parse error: expected " + std::to_string(dim * dim) +
                         " entries, failed at row " + std::to_string(i) + " column " +
                         std::to_string(j));
      }
    }
  std::string trailing;
  if (in >> trailing) throw ParseError("matrix parse error: unexpected trailing token '" + trailing + "'");
  try {
    return SymmetricMatrix(std::move(m), 1e-9);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("matrix symmetry check failed: ") + e.what());
  }
}

inline SymmetricMatrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("matrix file not found or unreadable: '" + path + "'");
  return read_matrix_text(in);
}

inline void write_matrix_text(std::ostream& out, const SymmetricMatrix& a) {
  out << a.n() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace rsd
