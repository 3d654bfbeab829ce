#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sni/domain.hpp"
#include "sni/grid.hpp"

namespace sni {

class FastMarchingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Auxiliary { kSquaredEuclidean, kGeodesic };

struct FmConfig {
  double lambda = 1e5;
  // Start pixel for its component; other components (and the default) use the
  // inside pixel nearest to the component centroid.
  std::optional<Pixel> seed;
  Auxiliary auxiliary = Auxiliary::kGeodesic;
};

struct Seed {
  int index = 0;  // domain index
  double value = 0;
};

// Smallest w with sum over axes of max(w - m_axis, 0)^2 = rhs^2 (unit spacing).
// m_x / m_y are the smaller accepted neighbour value along each axis, +inf when
// the axis carries no information. Throws FastMarchingError if neither does.
double local_update(double m_x, double m_y, double rhs);

struct EikonalSolution {
  std::vector<double> values;      // per domain index
  std::vector<int> accept_order;   // domain indices in acceptance order
};

// Fast marching for |grad u| = rhs with u fixed on the seeds. Ties in the heap
// break on the domain index. Throws FastMarchingError when some pixel cannot be
// reached from any seed, and std::logic_error if the accepted values ever
// decrease (the causality invariant).
EikonalSolution solve_eikonal(const Domain& domain, std::span<const double> rhs,
                              std::span<const Seed> seeds);

// One seed per connected component, honouring cfg.seed for its component.
std::vector<int> default_seeds(const Domain& domain, const std::optional<Pixel>& preferred = {});

// Auxiliary function f with its minimum (0) at the seeds: either squared
// Euclidean distance to the component seed or the squared in-domain geodesic
// distance obtained by fast marching with unit speed.
std::vector<double> auxiliary_function(const Domain& domain, std::span<const int> seeds,
                                       Auxiliary kind);

// Signed upwind derivative of f along x and y at domain index k: the one-sided
// difference towards the smaller neighbour, zero at local minima.
struct UpwindDerivative {
  double dx = 0;
  double dy = 0;
};
UpwindDerivative upwind_derivative(const Domain& domain, std::span<const double> f, int k);

// Fast-marching integration: solve |grad w| = |g + lambda grad f| from the
// seeds and return v = w - lambda f, with v = 0 at each component seed.
DepthMap integrate_fm(const GradientField& g, const Domain& domain, const FmConfig& cfg = {});

}  // namespace sni
