#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sni/sparse.hpp"

namespace sni {

class PivotBreakdown : public std::runtime_error {
 public:
  PivotBreakdown(const std::string& what, int column)
      : std::runtime_error(what), column_(column) {}
  int column() const { return column_; }

 private:
  int column_;
};

// Lower-triangular incomplete factor in compressed-column layout. Row indices
// are ascending within each column and the diagonal comes first.
struct CholeskyFactor {
  int n = 0;
  std::vector<std::int64_t> col_ptr{0};
  std::vector<std::int32_t> row;
  std::vector<double> val;
  double applied_alpha = 0.0;
  bool modified = false;

  std::size_t fill_count() const { return val.size(); }
  double diagonal(int j) const { return val[static_cast<std::size_t>(col_ptr[static_cast<std::size_t>(j)])]; }
  // y = (L L^T) x, for checking the factor.
  std::vector<double> product(std::span<const double> x) const;
};

// IC(tau). tau = 0 keeps the lower pattern of A; tau > 0 additionally keeps
// fill with |l_ij| > tau * ||A(:, j)||_2. Throws PivotBreakdown.
CholeskyFactor ic_factorize(const CsrMatrix& a, double tau);

// MIC(tau, alpha) of A + alpha * diag(A). Each dropped entry is moved onto the
// two diagonals it couples so (L L^T) e matches the shifted matrix's row sums.
// On breakdown alpha becomes max(10 alpha, 1e-3), at most 8 times.
CholeskyFactor mic_factorize(const CsrMatrix& a, double tau, double alpha);

// z = (L L^T)^{-1} r
void apply_preconditioner(const CholeskyFactor& f, std::span<const double> r, std::span<double> z);
std::vector<double> apply_preconditioner(const CholeskyFactor& f, std::span<const double> r);

}  // namespace sni
