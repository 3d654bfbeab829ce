#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sni/domain.hpp"
#include "sni/grid.hpp"

namespace sni {

using Vec3 = std::array<double, 3>;

// m >= 3 grayscale images of one scene and their unit lighting directions.
struct PsProblem {
  std::vector<ScalarField> images;
  std::vector<Vec3> lightings;
};

struct NormalField {
  Grid<Vec3> n;                  // unit normals, (0, 0, 1) at degenerate pixels
  ScalarField albedo;
  Grid<std::uint8_t> degenerate;  // 1 where the estimate was rejected

  NormalField() = default;
  NormalField(int width, int height)
      : n(width, height, Vec3{0, 0, 1}), albedo(width, height, 0.0), degenerate(width, height, 0) {}
};

inline constexpr double kMinNormalZ = 1e-2;

// Least-squares Lambertian inversion per pixel. Pixels with albedo below
// albedo_floor or n_z <= kMinNormalZ are flagged degenerate. Throws
// std::invalid_argument when the lightings do not span 3-D.
NormalField estimate_normals(const Domain& domain, const PsProblem& problem,
                             double albedo_floor = 1e-8);

// p = -n1 / n3, q = -n2 / n3, with n3 clamped to kMinNormalZ; clamped pixels
// are flagged in nf.degenerate when `flags` is given.
GradientField normals_to_gradient(const Domain& domain, const NormalField& nf,
                                  Grid<std::uint8_t>* flags = nullptr);

// n = (-p, -q, 1) / sqrt(1 + p^2 + q^2), unit albedo.
NormalField gradient_to_normals(const Domain& domain, const GradientField& g);

// rho * max(n . l, 0) inside the domain, 0 outside.
std::vector<ScalarField> render_lambertian(const Domain& domain, const NormalField& nf,
                                           std::span<const Vec3> lightings);

// Forward differences of v over the domain; backward where the forward
// neighbour is missing, zero along an axis with no neighbour.
GradientField depth_gradient(const Domain& domain, const DepthMap& depth);

struct Reprojection {
  std::vector<ScalarField> rendered;
  std::vector<double> mse;
  std::vector<double> ssim;
  double mean_mse = 0;
  double mean_ssim = 0;
};

Reprojection reproject(const Domain& domain, const DepthMap& depth, const ScalarField& albedo,
                       std::span<const Vec3> lightings, std::span<const ScalarField> images);

}  // namespace sni
