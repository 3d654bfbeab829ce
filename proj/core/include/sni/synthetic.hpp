#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sni/domain.hpp"
#include "sni/grid.hpp"

namespace sni {

struct Dataset {
  std::string name;
  Domain domain;
  GradientField gradient;
  std::optional<DepthMap> ground_truth;  // NaN outside the domain
};

// v(x, y) = amplitude * sin(r) / r on [-half_extent, half_extent]^2.
struct SombreroParams {
  double half_extent = 15.0;
  double amplitude = 30.0;
};

// Classical three-Gaussian "peaks" surface on [-half_extent, half_extent]^2.
// Without an explicit depth_scale, depths are expressed in pixels (the surface
// is scaled uniformly with the grid), so gradients are the analytic slopes.
struct PeaksParams {
  double half_extent = 3.0;
  std::optional<double> depth_scale;
};

// Surface of revolution around the vertical axis with the classical vase
// profile f(y), y in [0, 1], x in [-0.5, 0.5], depth in pixels. The mask keeps
// |x| <= rim * f(y); rim < 1 keeps the silhouette slope finite.
struct VaseParams {
  double rim = 0.97;
};

double sombrero_value(double x, double y, double amplitude);
double peaks_value(double x, double y);
double vase_profile(double y);

Dataset gen_sombrero(int n, const SombreroParams& params = {});
Dataset gen_peaks(int n, const PeaksParams& params = {});
Dataset gen_vase(int n, const VaseParams& params = {});

// Modified Shepp-Logan head phantom, intensities scaled to [0, 255].
ScalarField shepp_logan(int n);
// Phantom image as ground truth with forward-difference gradients.
Dataset gen_phantom(int n);

// Forward differences; backward differences on the last column / row.
GradientField gradient_from_image(const ScalarField& image);

// Same dataset restricted to `mask` (gradient and truth are kept, the
// domain changes). Throws DegenerateDomain if the mask is unusable.
Dataset restrict_to_mask(const Dataset& data, const DomainMask& mask);

// Non-convex synthetic mask: an ellipse with a notch cut from the top.
DomainMask blob_mask(int width, int height);

// Largest value of max(|p|, |q|) over the domain.
double gradient_sup_norm(const Domain& domain, const GradientField& g);

// Adds i.i.d. N(0, sigma^2) to p and q inside the domain with
// sigma = sigma_pct / 100 * gradient_sup_norm.
GradientField add_noise(const GradientField& g, const Domain& domain, double sigma_pct,
                        std::uint64_t seed);

// Replaces (p, q) at exactly floor(fraction * n) distinct pixels by
// (+-magnitude * M, +-magnitude * M) with M = gradient_sup_norm and random signs.
GradientField inject_outliers(const GradientField& g, const Domain& domain, double fraction,
                              double magnitude, std::uint64_t seed);

}  // namespace sni
