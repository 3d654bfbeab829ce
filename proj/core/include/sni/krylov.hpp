#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sni/cholesky.hpp"
#include "sni/poisson.hpp"

namespace sni {

enum class PreconditionerKind { kNone, kIc, kMic };

std::string_view to_string(PreconditionerKind kind);
PreconditionerKind parse_preconditioner(std::string_view name);

struct SolverConfig {
  double tol = 1e-4;
  std::optional<int> max_iter;  // default 10 sqrt(n) + 1000
  PreconditionerKind preconditioner = PreconditionerKind::kNone;
  double tau = 1e-3;
  double alpha = 1e-3;

  int iteration_cap(int n) const;
  void validate() const;
};

struct SolveStats {
  int iterations = 0;
  std::vector<double> residual_history;  // relative residuals, starting with x0's
  bool converged = false;
  bool restarted = false;
  double wall_time = 0;        // seconds
  double final_residual = 0;   // ||b - A x|| / ||b|| recomputed from the returned x
};

struct SolveResult {
  std::vector<double> x;
  SolveStats stats;
};

// Builds the factor requested by cfg, or nothing for kNone.
std::optional<CholeskyFactor> build_preconditioner(const CsrMatrix& a, const SolverConfig& cfg);

// Preconditioned CG from x0 (zero when empty). The reported solution has zero
// mean on every connected component of the system.
SolveResult cg_solve(const SparseSystem& system, std::span<const double> x0,
                     const CholeskyFactor* factor, const SolverConfig& cfg);

struct StatsRow {
  int size = 0;
  std::string preconditioner;
  double tau = 0;
  double alpha = 0;
  int iterations = 0;
  double seconds = 0;
  double final_residual = 0;
};

void write_stats_csv(std::ostream& os, std::span<const StatsRow> rows);

}  // namespace sni
