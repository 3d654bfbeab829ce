#pragma once

#include "sni/domain.hpp"
#include "sni/grid.hpp"

namespace sni {

// Gradient on the full bounding rectangle; cells outside the source domain
// hold (0, 0). The source mask is kept for evaluation.
struct RectGradient {
  GradientField g;
  DomainMask mask;

  int width() const { return g.width(); }
  int height() const { return g.height(); }
};

RectGradient embed_masked(const Domain& domain, const GradientField& g);

// Periodic boundary conditions: central-difference divergence with wrap-around
// and the 5-point Laplacian symbol, solved with a real 2-D FFT. Zero mean.
DepthMap integrate_fft(const RectGradient& rg);

// Free boundary: the natural-boundary right-hand side on the full rectangle,
// diagonalised by the DCT-II. Zero mean.
DepthMap integrate_dct(const RectGradient& rg);

}  // namespace sni
