#include "sni/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sni {

double CsrMatrix::at(int i, int j) const {
  const auto begin = col.begin() + row_ptr[static_cast<std::size_t>(i)];
  const auto end = col.begin() + row_ptr[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(rows) || y.size() != static_cast<std::size_t>(rows)) {
    throw std::invalid_argument("CsrMatrix::multiply: size mismatch");
  }
  for (int i = 0; i < rows; ++i) {
    double s = 0;
    for (auto e = row_ptr[static_cast<std::size_t>(i)]; e < row_ptr[static_cast<std::size_t>(i) + 1]; ++e) {
      s += val[static_cast<std::size_t>(e)] * x[static_cast<std::size_t>(col[static_cast<std::size_t>(e)])];
    }
    y[static_cast<std::size_t>(i)] = s;
  }
}

std::vector<double> multiply(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(static_cast<std::size_t>(a.rows));
  a.multiply(x, y);
  return y;
}

void write_coo(std::ostream& os, const CsrMatrix& a) {
  os << std::setprecision(17);
  for (int i = 0; i < a.rows; ++i) {
    for (auto e = a.row_ptr[static_cast<std::size_t>(i)]; e < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++e) {
      os << i << ' ' << a.col[static_cast<std::size_t>(e)] << ' ' << a.val[static_cast<std::size_t>(e)] << '\n';
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace sni
