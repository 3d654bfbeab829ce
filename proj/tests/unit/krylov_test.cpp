#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "sni/krylov.hpp"
#include "sni/synthetic.hpp"
#include "support.hpp"

namespace sni {
namespace {

SparseSystem plain(const CsrMatrix& a, std::vector<double> b) {
  SparseSystem s;
  s.A = a;
  s.b = std::move(b);
  return s;
}

SolverConfig tight(double tol = 1e-12) {
  SolverConfig c;
  c.tol = tol;
  return c;
}

TEST(Cg, TwoByTwo) {
  Eigen::Matrix2d m;
  m << 4, 1, 1, 3;
  const SolveResult r = cg_solve(plain(testing::from_dense(m), {1, 2}), {}, nullptr, tight());
  EXPECT_NEAR(r.x[0], 1.0 / 11, 1e-10);
  EXPECT_NEAR(r.x[1], 7.0 / 11, 1e-10);
  EXPECT_LE(r.stats.iterations, 2);
  EXPECT_TRUE(r.stats.converged);
}

TEST(Cg, DiagonalSystem) {
  const Eigen::VectorXd d = (Eigen::VectorXd(5) << 1, 2, 3, 4, 5).finished();
  const CsrMatrix a = testing::from_dense(Eigen::MatrixXd(d.asDiagonal()));
  const std::vector<double> b{2, 2, 2, 2, 2};
  const CholeskyFactor f = ic_factorize(a, 0.0);
  const SolveResult r = cg_solve(plain(a, b), {}, &f, tight());
  EXPECT_LE(r.stats.iterations, 2);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(r.x[static_cast<std::size_t>(i)], 2.0 / d(i), 1e-12);
}

TEST(Cg, ZeroRhsReturnsStart) {
  const CsrMatrix a = testing::laplacian(4, 4);
  SparseSystem s = plain(a, std::vector<double>(16, 0.0));
  const std::vector<double> x0(16, 0.0);
  const SolveResult r = cg_solve(s, x0, nullptr, SolverConfig{});
  EXPECT_TRUE(r.stats.converged);
  EXPECT_EQ(r.stats.iterations, 0);
  EXPECT_EQ(r.x, x0);
}

TEST(CgProperty, ConvergesWithinNSteps) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n = 2; n <= 50; n += 4) {
    const CsrMatrix a = testing::random_spd(rng, n);
    std::vector<double> b(static_cast<std::size_t>(n));
    for (double& v : b) v = u(rng);
    SolverConfig cfg = tight(1e-13);
    cfg.max_iter = n;
    const SolveResult r = cg_solve(plain(a, b), {}, nullptr, cfg);
    EXPECT_TRUE(r.stats.converged) << n;
    EXPECT_LE(r.stats.final_residual, 1e-12);
  }
}

TEST(CgProperty, EnergyErrorNonIncreasing) {
  std::mt19937_64 rng(7);
  const int n = 30;
  const CsrMatrix a = testing::random_spd(rng, n);
  const Eigen::MatrixXd dense = testing::to_dense(a);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(n);
  const Eigen::VectorXd exact = dense.ldlt().solve(b);
  const std::vector<double> bv(b.data(), b.data() + n);
  const CholeskyFactor f = mic_factorize(testing::laplacian(6, 5), 1e-1, 1e-3);  // unrelated SPD preconditioner
  for (const CholeskyFactor* pre : {static_cast<const CholeskyFactor*>(nullptr), &f}) {
    double previous = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
      SolverConfig cfg = tight(1e-14);
      cfg.max_iter = k;
      const SolveResult r = cg_solve(plain(a, bv), {}, pre, cfg);
      const Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(r.x.data(), n) - exact;
      const double energy = std::sqrt(e.dot(dense * e));
      ASSERT_LE(energy, previous * (1 + 1e-12) + 1e-14) << k;
      previous = energy;
      if (r.stats.converged) break;
    }
  }
}

TEST(CgProperty, PreconditioningPreservesSolution) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const Domain d = build_domain(testing::random_mask(rng, 18, 15, 0.75));
    const SparseSystem s = compatibilize(assemble(d, testing::random_gradient(rng, 18, 15)));
    SolverConfig cfg;
    cfg.tol = 1e-8;
    const SolveResult ref = cg_solve(s, {}, nullptr, cfg);
    ASSERT_TRUE(ref.stats.converged);
    for (PreconditionerKind kind : {PreconditionerKind::kIc, PreconditionerKind::kMic}) {
      for (double tau : {0.0, 1e-2, 1e-3}) {
        SolverConfig pc = cfg;
        pc.preconditioner = kind;
        pc.tau = tau;
        std::optional<CholeskyFactor> f;
        try {
          f = build_preconditioner(s.A, pc);
        } catch (const PivotBreakdown&) {
          ASSERT_EQ(kind, PreconditionerKind::kIc);  // singular A: plain IC may break down
          continue;
        }
        const SolveResult r = cg_solve(s, {}, &*f, pc);
        ASSERT_TRUE(r.stats.converged);
        double worst = 0, scale = 0;
        for (std::size_t i = 0; i < r.x.size(); ++i) {
          worst = std::max(worst, std::abs(r.x[i] - ref.x[i]));
          scale = std::max(scale, std::abs(ref.x[i]));
        }
        EXPECT_LE(worst, 10 * cfg.tol * std::max(scale, 1.0) * d.size());
      }
    }
  }
}

TEST(Cg, ComponentMeansAreZeroAndHistoryConsistent) {
  std::mt19937_64 rng(2);
  const Domain d = build_domain(testing::random_mask(rng, 20, 20, 0.6));
  const SparseSystem s = compatibilize(assemble(d, testing::random_gradient(rng, 20, 20)));
  std::vector<double> x0(static_cast<std::size_t>(s.size()), 5.0);
  const SolveResult r = cg_solve(s, x0, nullptr, SolverConfig{});
  std::vector<double> sums(static_cast<std::size_t>(s.component_count), 0.0);
  for (int k = 0; k < s.size(); ++k) sums[static_cast<std::size_t>(s.component_ids[static_cast<std::size_t>(k)])] += r.x[static_cast<std::size_t>(k)];
  for (double sm : sums) EXPECT_NEAR(sm, 0.0, 1e-9);
  ASSERT_EQ(r.stats.residual_history.size(), static_cast<std::size_t>(r.stats.iterations) + 1);
  EXPECT_EQ(r.stats.residual_history.back() <= 1e-4, r.stats.converged);
  EXPECT_LE(r.stats.final_residual, 1e-3);
}

TEST(Cg, UnconvergedAtCap) {
  const Dataset p = gen_phantom(64);
  const SparseSystem s = compatibilize(assemble(p.domain, p.gradient));
  SolverConfig cfg;
  cfg.max_iter = 3;
  const SolveResult r = cg_solve(s, {}, nullptr, cfg);
  EXPECT_FALSE(r.stats.converged);
  EXPECT_EQ(r.stats.iterations, 3);
}

TEST(Config, ValidationAndCap) {
  SolverConfig c;
  EXPECT_EQ(c.iteration_cap(10000), 2000);
  c.tol = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.alpha = -1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_EQ(parse_preconditioner("mic"), PreconditionerKind::kMic);
  EXPECT_EQ(to_string(PreconditionerKind::kIc), "ic");
  EXPECT_THROW(parse_preconditioner("ilu"), std::invalid_argument);
}

TEST(Stats, CsvHeader) {
  std::ostringstream os;
  const StatsRow row{256, "mic", 1e-3, 1e-3, 11, 0.5, 9e-5};
  write_stats_csv(os, std::span(&row, 1));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "size,preconditioner,tau,alpha,iterations,seconds,final_residual");
}

}  // namespace
}  // namespace sni
