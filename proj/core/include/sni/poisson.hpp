#pragma once

#include <vector>

#include "sni/domain.hpp"
#include "sni/grid.hpp"
#include "sni/sparse.hpp"

namespace sni {

// A x = b for Poisson integration with natural boundary conditions, with
// A = -(discrete Laplacian) so that A is symmetric positive semidefinite.
struct SparseSystem {
  CsrMatrix A;
  std::vector<double> b;
  std::vector<int> component_ids;
  int component_count = 0;
  // Constant removed from b per component by compatibilize().
  std::vector<double> compat_shift;

  int size() const { return A.rows; }
};

// Right-hand side of the discrete Poisson equation, Laplacian sign
// convention: central divergence (p_right - p_left + q_down - q_up) / 2 where
// both neighbours exist. A missing neighbour in direction s along an axis
// contributes -s * g_axis(centre) / 2 instead of s * g_axis(neighbour) / 2,
// which is what the mean of forward and backward natural boundary conditions
// reduces to.
std::vector<double> natural_divergence(const Domain& domain, const GradientField& g);

// Integer stencil rows (diagonal = number of inside neighbours, -1 per inside
// neighbour) and b = -natural_divergence.
SparseSystem assemble(const Domain& domain, const GradientField& g);

// Shifts b per component so that each component sum vanishes.
SparseSystem compatibilize(SparseSystem system);

struct RobustifiedGradient {
  GradientField gradient;      // (p, q) * exp(-I^2)
  ScalarField nu;              // exp(I^2) - 1
  ScalarField integrability;   // I = p_y - q_x
  ScalarField weight;          // 1 / (1 + nu)
};

// Where the exponent is evaluated.
enum class IntegrabilityWindow {
  kPixel,            // I^2 at the pixel itself
  kNeighborhoodMax,  // largest I^2 over the pixel and its inside 4-neighbours
};

// Integrability I = p_y - q_x with central differences inside and one-sided
// differences where a neighbour is missing (zero along an axis with neither).
ScalarField integrability(const Domain& domain, const GradientField& g);

// Outlier-robust data term: the gradient is divided by exp(I^2), clamping the
// exponent at 700 and flushing weights below 1e-300 to 0.
RobustifiedGradient robustify_gradient(
    const Domain& domain, const GradientField& g,
    IntegrabilityWindow window = IntegrabilityWindow::kNeighborhoodMax);

}  // namespace sni
