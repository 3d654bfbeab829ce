#include "sni/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace sni {
namespace {

class Breakdown : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void remove_component_means(const SparseSystem& system, std::vector<double>& x) {
  const auto count = static_cast<std::size_t>(system.component_count);
  if (count == 0) return;
  std::vector<double> sum(count, 0.0), size(count, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(system.component_ids[i]);
    sum[c] += x[i];
    size[c] += 1;
  }
  for (std::size_t c = 0; c < count; ++c) sum[c] /= size[c];
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= sum[static_cast<std::size_t>(system.component_ids[i])];
}

// Runs CG in place on x. Throws Breakdown when p^T A p <= 0.
void iterate(const SparseSystem& system, const CholeskyFactor* factor, double b_norm, int cap,
             double tol, std::vector<double>& x, SolveStats& stats) {
  const CsrMatrix& a = system.A;
  const auto n = x.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  a.multiply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = system.b[i] - q[i];

  double rel = norm2(r) / b_norm;
  stats.residual_history.push_back(rel);
  if (rel <= tol) {
    stats.converged = true;
    return;
  }

  double rho_prev = 0;
  for (int it = 0; it < cap; ++it) {
    if (factor) {
      apply_preconditioner(*factor, r, z);
    } else {
      z = r;
    }
    const double rho = dot(r, z);
    if (it == 0) {
      p = z;
    } else {
      const double beta = rho / rho_prev;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    a.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0)) throw Breakdown("conjugate gradient breakdown: p^T A p = " + std::to_string(pq));
    const double step = rho / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += step * p[i];
      r[i] -= step * q[i];
    }
    rho_prev = rho;
    ++stats.iterations;
    rel = norm2(r) / b_norm;
    stats.residual_history.push_back(rel);
    if (rel <= tol) {
      stats.converged = true;
      return;
    }
  }
}

}  // namespace

std::string_view to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::kNone: return "none";
    case PreconditionerKind::kIc: return "ic";
    case PreconditionerKind::kMic: return "mic";
  }
  return "?";
}

PreconditionerKind parse_preconditioner(std::string_view name) {
  if (name == "none") return PreconditionerKind::kNone;
  if (name == "ic") return PreconditionerKind::kIc;
  if (name == "mic") return PreconditionerKind::kMic;
  throw std::invalid_argument("unknown preconditioner '" + std::string(name) + "'");
}

int SolverConfig::iteration_cap(int n) const {
  if (max_iter) return *max_iter;
  return static_cast<int>(10.0 * std::sqrt(static_cast<double>(n))) + 1000;
}

void SolverConfig::validate() const {
  if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
  if (!(tau >= 0)) throw std::invalid_argument("tau must be >= 0");
  if (!(alpha >= 0)) throw std::invalid_argument("alpha must be >= 0");
  if (max_iter && *max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
}

std::optional<CholeskyFactor> build_preconditioner(const CsrMatrix& a, const SolverConfig& cfg) {
  switch (cfg.preconditioner) {
    case PreconditionerKind::kNone: return std::nullopt;
    case PreconditionerKind::kIc: return ic_factorize(a, cfg.tau);
    case PreconditionerKind::kMic: return mic_factorize(a, cfg.tau, cfg.alpha);
  }
  return std::nullopt;
}

SolveResult cg_solve(const SparseSystem& system, std::span<const double> x0,
                     const CholeskyFactor* factor, const SolverConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto n = static_cast<std::size_t>(system.size());
  if (system.b.size() != n) throw std::invalid_argument("cg_solve: rhs size mismatch");
  if (!x0.empty() && x0.size() != n) throw std::invalid_argument("cg_solve: x0 size mismatch");
  if (factor && static_cast<std::size_t>(factor->n) != n) {
    throw std::invalid_argument("cg_solve: preconditioner size mismatch");
  }

  SolveResult out;
  out.x.assign(n, 0.0);
  if (!x0.empty()) std::copy(x0.begin(), x0.end(), out.x.begin());

  const double b_norm = norm2(system.b);
  if (b_norm == 0.0) {
    out.stats.converged = true;
    out.stats.residual_history.push_back(0.0);
    out.stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }

  const int cap = cfg.iteration_cap(system.size());
  try {
    iterate(system, factor, b_norm, cap, cfg.tol, out.x, out.stats);
  } catch (const Breakdown&) {
    // One restart from a perturbed x0; the perturbation has no null-space part.
    out.stats.restarted = true;
    out.x.assign(n, 0.0);
    if (!x0.empty()) std::copy(x0.begin(), x0.end(), out.x.begin());
    double scale = 0;
    for (double v : out.x) scale = std::max(scale, std::abs(v));
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> noise(0.0, 1e-6 * (scale + 1.0));
    std::vector<double> perturb(n);
    for (double& v : perturb) v = noise(rng);
    remove_component_means(system, perturb);
    for (std::size_t i = 0; i < n; ++i) out.x[i] += perturb[i];
    const int used = out.stats.iterations;
    try {
      iterate(system, factor, b_norm, std::max(cap - used, 0), cfg.tol, out.x, out.stats);
    } catch (const Breakdown& e) {
      throw std::runtime_error(std::string(e.what()) + " (after restart)");
    }
  }

  remove_component_means(system, out.x);
  const std::vector<double> ax = multiply(system.A, out.x);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = system.b[i] - ax[i];
  out.stats.final_residual = norm2(r) / b_norm;
  out.stats.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_stats_csv(std::ostream& os, std::span<const StatsRow> rows) {
  os << "size,preconditioner,tau,alpha,iterations,seconds,final_residual\n";
  for (const StatsRow& r : rows) {
    os << r.size << ',' << r.preconditioner << ',' << r.tau << ',' << r.alpha << ',' << r.iterations
       << ',' << r.seconds << ',' << r.final_residual << '\n';
  }
}

}  // namespace sni
