#pragma once

#include "sni/domain.hpp"
#include "sni/grid.hpp"

namespace sni {

struct Metrics {
  double mse = 0;
  double ssim = 1;
  double offset_used = 0;  // c added to the estimate before comparison
};

// Aligns the estimate with c = mean(truth - estimate) over the domain, then
// reports the mean squared error and SSIM of the aligned pair on the domain.
Metrics mse_opt(const DepthMap& estimate, const DepthMap& truth, const Domain& domain);

// Mean squared error over the mask without any alignment.
double mse(const ScalarField& a, const ScalarField& b, const DomainMask& mask);

// SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03 and
// dynamic range max - min of `reference` over the mask. Window weights are
// renormalised over inside cells; the index is averaged over inside cells.
double ssim(const ScalarField& reference, const ScalarField& test, const DomainMask& mask);
double ssim(const ScalarField& reference, const ScalarField& test);

}  // namespace sni
