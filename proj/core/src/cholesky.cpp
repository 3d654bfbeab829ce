#include "sni/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sni {
namespace {

constexpr int kMaxRetries = 8;
// Pivots at or below this fraction of the shifted diagonal count as breakdown.
constexpr double kPivotFloor = 1e-12;

struct Options {
  double tau = 0;
  double alpha = 0;
  bool modified = false;
};

CholeskyFactor factorize(const CsrMatrix& a, const Options& opt) {
  const int n = a.rows;
  const auto un = static_cast<std::size_t>(n);
  CholeskyFactor f;
  f.n = n;
  f.applied_alpha = opt.alpha;
  f.modified = opt.modified;
  f.col_ptr.assign(un + 1, 0);
  f.row.reserve(a.nnz());
  f.val.reserve(a.nnz());

  std::vector<double> col_norm(un, 0.0);
  for (int i = 0; i < n; ++i) {
    for (auto e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
      const double v = a.val[static_cast<std::size_t>(e)];
      col_norm[static_cast<std::size_t>(a.col[static_cast<std::size_t>(e)])] += v * v;
    }
  }
  for (double& c : col_norm) c = std::sqrt(c);

  std::vector<double> work(un, 0.0);
  std::vector<std::uint8_t> in_pattern(un, 0);  // 1: touched, 2: structural entry of A
  std::vector<std::int32_t> touched;
  std::vector<double> adj(un, 0.0);

  // Columns k < j waiting to contribute to row next[k]; singly linked by row.
  std::vector<std::int32_t> head(un, -1), link(un, -1);
  std::vector<std::int64_t> next(un, 0);

  auto enqueue = [&](int k) {
    const auto pos = next[static_cast<std::size_t>(k)];
    if (pos >= f.col_ptr[static_cast<std::size_t>(k) + 1]) return;
    const auto r = static_cast<std::size_t>(f.row[static_cast<std::size_t>(pos)]);
    link[static_cast<std::size_t>(k)] = head[r];
    head[r] = k;
  };

  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    touched.clear();
    double diag_shifted = 0;
    for (auto e = a.row_ptr[uj]; e < a.row_ptr[uj + 1]; ++e) {
      const int i = a.col[static_cast<std::size_t>(e)];
      if (i < j) continue;
      double v = a.val[static_cast<std::size_t>(e)];
      if (i == j) {
        v *= 1.0 + opt.alpha;
        diag_shifted = v;
      }
      work[static_cast<std::size_t>(i)] = v;
      in_pattern[static_cast<std::size_t>(i)] = 2;
      touched.push_back(i);
    }
    if (in_pattern[uj] == 0) {
      in_pattern[uj] = 2;
      work[uj] = 0;
      touched.push_back(j);
    }
    work[uj] += adj[uj];

    for (int k = head[uj]; k != -1;) {
      const auto uk = static_cast<std::size_t>(k);
      const int following = link[uk];
      const auto pos = next[uk];
      const double ljk = f.val[static_cast<std::size_t>(pos)];
      for (auto e = pos; e < f.col_ptr[uk + 1]; ++e) {
        const auto i = static_cast<std::size_t>(f.row[static_cast<std::size_t>(e)]);
        if (in_pattern[i] == 0) {
          in_pattern[i] = 1;
          work[i] = 0;
          touched.push_back(static_cast<std::int32_t>(i));
        }
        work[i] -= f.val[static_cast<std::size_t>(e)] * ljk;
      }
      next[uk] = pos + 1;
      enqueue(k);
      k = following;
    }
    head[uj] = -1;

    std::sort(touched.begin(), touched.end());
    double pivot = work[uj];
    const double floor = kPivotFloor * std::max(std::abs(diag_shifted), 1.0);
    if (!(pivot > floor)) {
      for (int i : touched) in_pattern[static_cast<std::size_t>(i)] = 0;
      throw PivotBreakdown("incomplete Cholesky: nonpositive pivot " + std::to_string(pivot) +
                               " in column " + std::to_string(j),
                           j);
    }

    const double threshold = opt.tau * col_norm[uj] * std::sqrt(pivot);
    std::size_t kept_begin = f.row.size();
    f.row.push_back(j);
    f.val.push_back(0);  // diagonal, filled below
    for (int i : touched) {
      const auto ui = static_cast<std::size_t>(i);
      if (i == j) continue;
      const double v = work[ui];
      const bool keep = in_pattern[ui] == 2 || (opt.tau > 0 && std::abs(v) > threshold);
      if (keep) {
        f.row.push_back(i);
        f.val.push_back(v);
      } else if (opt.modified) {
        pivot += v;
        adj[ui] += v;
      }
    }
    for (int i : touched) in_pattern[static_cast<std::size_t>(i)] = 0;

    if (!(pivot > floor)) {
      f.row.resize(kept_begin);
      f.val.resize(kept_begin);
      throw PivotBreakdown("incomplete Cholesky: nonpositive pivot " + std::to_string(pivot) +
                               " in column " + std::to_string(j),
                           j);
    }
    const double d = std::sqrt(pivot);
    f.val[kept_begin] = d;
    for (std::size_t e = kept_begin + 1; e < f.val.size(); ++e) f.val[e] /= d;
    f.col_ptr[uj + 1] = static_cast<std::int64_t>(f.row.size());
    next[uj] = static_cast<std::int64_t>(kept_begin) + 1;
    enqueue(j);
  }
  return f;
}

}  // namespace

std::vector<double> CholeskyFactor::product(std::span<const double> x) const {
  // t = L^T x, then y = L t
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> t(un, 0.0), y(un, 0.0);
  for (std::size_t j = 0; j < un; ++j) {
    double s = 0;
    for (auto e = col_ptr[j]; e < col_ptr[j + 1]; ++e) {
      s += val[static_cast<std::size_t>(e)] * x[static_cast<std::size_t>(row[static_cast<std::size_t>(e)])];
    }
    t[j] = s;
  }
  for (std::size_t j = 0; j < un; ++j) {
    for (auto e = col_ptr[j]; e < col_ptr[j + 1]; ++e) {
      y[static_cast<std::size_t>(row[static_cast<std::size_t>(e)])] += val[static_cast<std::size_t>(e)] * t[j];
    }
  }
  return y;
}

CholeskyFactor ic_factorize(const CsrMatrix& a, double tau) {
  if (!(tau >= 0)) throw std::invalid_argument("ic_factorize: tau must be >= 0");
  return factorize(a, {tau, 0.0, false});
}

CholeskyFactor mic_factorize(const CsrMatrix& a, double tau, double alpha) {
  if (!(tau >= 0)) throw std::invalid_argument("mic_factorize: tau must be >= 0");
  if (!(alpha >= 0)) throw std::invalid_argument("mic_factorize: alpha must be >= 0");
  for (int attempt = 0;; ++attempt) {
    try {
      return factorize(a, {tau, alpha, true});
    } catch (const PivotBreakdown& e) {
      if (attempt == kMaxRetries) {
        throw PivotBreakdown(std::string(e.what()) + " (after " + std::to_string(kMaxRetries) +
                                 " shift retries, alpha = " + std::to_string(alpha) + ")",
                             e.column());
      }
      alpha = std::max(10 * alpha, 1e-3);
    }
  }
}

void apply_preconditioner(const CholeskyFactor& f, std::span<const double> r, std::span<double> z) {
  const auto un = static_cast<std::size_t>(f.n);
  if (r.size() != un || z.size() != un) throw std::invalid_argument("apply_preconditioner: size mismatch");
  std::copy(r.begin(), r.end(), z.begin());
  for (std::size_t j = 0; j < un; ++j) {
    const auto begin = static_cast<std::size_t>(f.col_ptr[j]);
    const auto end = static_cast<std::size_t>(f.col_ptr[j + 1]);
    const double zj = z[j] / f.val[begin];
    z[j] = zj;
    for (std::size_t e = begin + 1; e < end; ++e) z[static_cast<std::size_t>(f.row[e])] -= f.val[e] * zj;
  }
  for (std::size_t j = un; j-- > 0;) {
    const auto begin = static_cast<std::size_t>(f.col_ptr[j]);
    const auto end = static_cast<std::size_t>(f.col_ptr[j + 1]);
    double s = z[j];
    for (std::size_t e = begin + 1; e < end; ++e) s -= f.val[e] * z[static_cast<std::size_t>(f.row[e])];
    z[j] = s / f.val[begin];
  }
}

std::vector<double> apply_preconditioner(const CholeskyFactor& f, std::span<const double> r) {
  std::vector<double> z(r.size());
  apply_preconditioner(f, r, z);
  return z;
}

}  // namespace sni
