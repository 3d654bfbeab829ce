#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "sni/cholesky.hpp"
#include "sni/domain.hpp"
#include "sni/grid.hpp"
#include "sni/sparse.hpp"

namespace sni::testing {

// Connected mask grown from a random seed cell until `cells` are inside.
// Every inside cell has an inside neighbour as soon as cells >= 2.
DomainMask random_connected_mask(std::mt19937_64& rng, int width, int height, int cells);

// Bernoulli(density) mask with isolated cells removed; may be disconnected.
// Falls back to a 1x2 block when nothing survives.
DomainMask random_mask(std::mt19937_64& rng, int width, int height, double density);

GradientField random_gradient(std::mt19937_64& rng, int width, int height, double scale = 1.0);

Eigen::MatrixXd to_dense(const CsrMatrix& a);
Eigen::MatrixXd to_dense(const CholeskyFactor& f);

// Oracle built straight from the least-squares picture: one residual per
// pair of 4-adjacent inside pixels, v_j - v_i - (g_i + g_j) / 2 along the
// pair's axis. Returns the minimum-norm least-squares solution (dense
// complete orthogonal decomposition), independent of the stencil code.
Eigen::VectorXd edge_least_squares(const Domain& domain, const GradientField& g);

// Per-component mean removal, for comparing solutions defined up to constants.
Eigen::VectorXd remove_component_means(const Domain& domain, const Eigen::VectorXd& x);

// Symmetric positive-definite random matrix as CSR (dense pattern).
CsrMatrix random_spd(std::mt19937_64& rng, int n);
CsrMatrix from_dense(const Eigen::MatrixXd& m);

// Five-point matrix of the full w x h rectangle.
CsrMatrix laplacian(int width, int height);

}  // namespace sni::testing
