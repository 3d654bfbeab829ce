#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sni/photometric.hpp"
#include "sni/pipeline.hpp"
#include "sni/synthetic.hpp"
#include "support.hpp"

namespace sni {
namespace {

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

bool shadowed(const Vec3& n, const std::vector<Vec3>& lights) {
  for (const Vec3& l : lights) {
    if (dot3(n, l) <= 0) return true;
  }
  return false;
}

TEST(Normals, FlatSurfaceExact) {
  const Domain d = build_domain(DomainMask::full(8, 8));
  const NormalField flat = gradient_to_normals(d, GradientField(8, 8));
  const auto lights = default_lightings();
  const PsProblem problem{render_lambertian(d, flat, lights), lights};
  const NormalField est = estimate_normals(d, problem);
  for (std::size_t i = 0; i < est.n.size(); ++i) {
    EXPECT_NEAR(est.n[i][0], 0.0, 1e-10);
    EXPECT_NEAR(est.n[i][1], 0.0, 1e-10);
    EXPECT_NEAR(est.n[i][2], 1.0, 1e-10);
    EXPECT_NEAR(est.albedo[i], 1.0, 1e-10);
  }
}

TEST(Normals, SombreroRecoveredAwayFromShadows) {
  const Dataset s = gen_sombrero(64);
  const auto lights = default_lightings();
  const NormalField truth = gradient_to_normals(s.domain, s.gradient);
  const NormalField est = estimate_normals(s.domain, synthetic_ps(s, lights));
  int lit = 0;
  for (int k = 0; k < s.domain.size(); ++k) {
    const Pixel px = s.domain.pixel_of(k);
    const Vec3& n = truth.n(px.x, px.y);
    const double norm = std::sqrt(dot3(est.n(px.x, px.y), est.n(px.x, px.y)));
    ASSERT_NEAR(norm, 1.0, 1e-6);
    if (shadowed(n, lights)) continue;
    ++lit;
    for (int c = 0; c < 3; ++c) ASSERT_NEAR(est.n(px.x, px.y)[static_cast<std::size_t>(c)], n[static_cast<std::size_t>(c)], 1e-6);
  }
  EXPECT_GT(lit, s.domain.size() / 2);
}

TEST(Normals, ShadowBiasStaysLocal) {
  // Steep tilt casts attached shadows for some lightings.
  const Domain d = build_domain(DomainMask::full(16, 16));
  GradientField g(16, 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 8; x < 16; ++x) g.p(x, y) = 4.0;
  }
  const NormalField truth = gradient_to_normals(d, g);
  const auto lights = default_lightings();
  const PsProblem problem{render_lambertian(d, truth, lights), lights};
  const NormalField est = estimate_normals(d, problem);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const bool shadow = shadowed(truth.n(x, y), lights);
      EXPECT_EQ(shadow, x >= 8);
      if (!shadow) {
        EXPECT_NEAR(est.n(x, y)[0], truth.n(x, y)[0], 1e-10);
      }
    }
  }
}

TEST(Normals, RankDeficientLightingsRejected) {
  const Domain d = build_domain(DomainMask::full(4, 4));
  const std::vector<Vec3> coplanar{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{std::sqrt(0.5), std::sqrt(0.5), 0}};
  const PsProblem problem{std::vector<ScalarField>(3, ScalarField(4, 4, 1.0)), coplanar};
  EXPECT_THROW(estimate_normals(d, problem), std::invalid_argument);
}

TEST(Normals, DarkPixelsAreDegenerate) {
  const Domain d = build_domain(DomainMask::full(4, 4));
  const auto lights = default_lightings();
  const PsProblem problem{std::vector<ScalarField>(lights.size(), ScalarField(4, 4, 0.0)), lights};
  const NormalField est = estimate_normals(d, problem);
  for (std::size_t i = 0; i < est.n.size(); ++i) {
    EXPECT_EQ(est.degenerate[i], 1);
    EXPECT_EQ(est.albedo[i], 0.0);
    EXPECT_EQ(est.n[i][2], 1.0);
  }
}

TEST(Gradient, NormalConversions) {
  const Domain d = build_domain(DomainMask::full(2, 1));
  NormalField nf(2, 1);
  nf.n(1, 0) = Vec3{-std::sqrt(0.5), 0, std::sqrt(0.5)};
  const GradientField g = normals_to_gradient(d, nf);
  EXPECT_EQ(g.p(0, 0), 0.0);
  EXPECT_EQ(g.q(0, 0), 0.0);
  EXPECT_NEAR(g.p(1, 0), 1.0, 1e-15);
  EXPECT_NEAR(g.q(1, 0), 0.0, 1e-15);

  std::mt19937_64 rng(3);
  const Domain big = build_domain(DomainMask::full(20, 20));
  const GradientField r = testing::random_gradient(rng, 20, 20, 5.0);
  const GradientField back = normals_to_gradient(big, gradient_to_normals(big, r));
  for (std::size_t i = 0; i < r.p.size(); ++i) {
    EXPECT_NEAR(back.p[i], r.p[i], 1e-12 * (1 + std::abs(r.p[i])));
    EXPECT_NEAR(back.q[i], r.q[i], 1e-12 * (1 + std::abs(r.q[i])));
  }
}

TEST(Gradient, GrazingNormalIsClampedAndFlagged) {
  const Domain d = build_domain(DomainMask::full(2, 1));
  NormalField nf(2, 1);
  nf.n(0, 0) = Vec3{1, 0, 0};
  Grid<std::uint8_t> flags(2, 1, 0);
  const GradientField g = normals_to_gradient(d, nf, &flags);
  EXPECT_EQ(flags(0, 0), 1);
  EXPECT_EQ(flags(1, 0), 0);
  EXPECT_DOUBLE_EQ(g.p(0, 0), -1.0 / kMinNormalZ);
}

TEST(Reproject, ConstantShiftInvariant) {
  const Dataset s = gen_sombrero(32);
  const auto lights = default_lightings();
  const PsProblem problem = synthetic_ps(s, lights);
  ScalarField albedo(32, 32, 1.0);
  DepthMap shifted = *s.ground_truth;
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += 17.0;
  const Reprojection a = reproject(s.domain, *s.ground_truth, albedo, lights, problem.images);
  const Reprojection b = reproject(s.domain, shifted, albedo, lights, problem.images);
  ASSERT_EQ(a.mse.size(), 4u);
  for (std::size_t i = 0; i < a.mse.size(); ++i) EXPECT_NEAR(a.mse[i], b.mse[i], 1e-12);
}

TEST(Reproject, TruthConvergesUnderRefinement) {
  // Forward differences of the true depth: error shrinks at least 4x per halving of h.
  double prev_mse = 0, prev_ssim = 0;
  for (int n : {32, 64, 128, 256}) {
    const Dataset s = gen_sombrero(n);
    const auto lights = default_lightings();
    const PsProblem problem = synthetic_ps(s, lights);
    const Reprojection r = reproject(s.domain, *s.ground_truth, ScalarField(n, n, 1.0), lights, problem.images);
    if (n > 32) {
      EXPECT_LT(r.mean_mse, prev_mse / 4) << n;
      EXPECT_GT(r.mean_ssim, prev_ssim) << n;
    }
    prev_mse = r.mean_mse;
    prev_ssim = r.mean_ssim;
  }
  EXPECT_GT(prev_ssim, 0.99);
}

TEST(DepthGradient, ForwardWithBackwardFallback) {
  DomainMask m = DomainMask::full(3, 2);
  m.set(2, 1, false);
  const Domain d = build_domain(m);
  DepthMap v(3, 2, kOutside);
  v(0, 0) = 0;
  v(1, 0) = 2;
  v(2, 0) = 7;
  v(0, 1) = 1;
  v(1, 1) = 4;
  const GradientField g = depth_gradient(d, v);
  EXPECT_EQ(g.p(0, 0), 2.0);
  EXPECT_EQ(g.p(2, 0), 5.0);   // backward
  EXPECT_EQ(g.p(1, 1), 3.0);   // backward: (2,1) is outside
  EXPECT_EQ(g.q(2, 0), 0.0);   // no vertical neighbour
  EXPECT_EQ(g.q(1, 1), 2.0);
}

}  // namespace
}  // namespace sni
