#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace sni {

// Square compressed-row matrix with sorted column indices per row.
struct CsrMatrix {
  int rows = 0;
  std::vector<std::int64_t> row_ptr{0};
  std::vector<std::int32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  // Zero when (i, j) is not stored. Binary search within row i.
  double at(int i, int j) const;
  double diagonal(int i) const { return at(i, i); }
  // y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
};

std::vector<double> multiply(const CsrMatrix& a, std::span<const double> x);

// Coordinate text export: "row col value" per line, 0-based.
void write_coo(std::ostream& os, const CsrMatrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace sni
