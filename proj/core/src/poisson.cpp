#include "sni/poisson.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace sni {
namespace {

void check_shape(const Domain& domain, const GradientField& g) {
  if (g.width() != domain.width() || g.height() != domain.height()) {
    throw std::invalid_argument("gradient shape does not match domain");
  }
}

// Gradient component along the axis of d, and the sign of d along that axis.
double along(const GradientField& g, Direction d, int x, int y) {
  return (d == Direction::kLeft || d == Direction::kRight) ? g.p(x, y) : g.q(x, y);
}
double sign_of(Direction d) { return (d == Direction::kRight || d == Direction::kDown) ? 1.0 : -1.0; }

// Column order within a row: up < left < centre < right < down.
constexpr std::array<Direction, 2> kBefore = {Direction::kUp, Direction::kLeft};
constexpr std::array<Direction, 2> kAfter = {Direction::kRight, Direction::kDown};

}  // namespace

std::vector<double> natural_divergence(const Domain& domain, const GradientField& g) {
  check_shape(domain, g);
  std::vector<double> div(static_cast<std::size_t>(domain.size()));
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel c = domain.pixel_of(k);
    double s = 0;
    for (Direction d : kDirections) {
      const int nb = domain.neighbor(k, d);
      if (nb != Domain::kAbsent) {
        const Pixel o = domain.pixel_of(nb);
        s += sign_of(d) * along(g, d, o.x, o.y);
      } else {
        s -= sign_of(d) * along(g, d, c.x, c.y);
      }
    }
    div[static_cast<std::size_t>(k)] = 0.5 * s;
  }
  return div;
}

SparseSystem assemble(const Domain& domain, const GradientField& g) {
  check_shape(domain, g);
  SparseSystem sys;
  const int n = domain.size();
  CsrMatrix& A = sys.A;
  A.rows = n;
  A.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  A.col.reserve(static_cast<std::size_t>(n) * 5);
  A.val.reserve(static_cast<std::size_t>(n) * 5);
  for (int k = 0; k < n; ++k) {
    const NeighborPresence present = domain.presence(k);
    for (Direction d : kBefore) {
      if (present.has(d)) {
        A.col.push_back(domain.neighbor(k, d));
        A.val.push_back(-1.0);
      }
    }
    A.col.push_back(k);
    A.val.push_back(static_cast<double>(present.count()));
    for (Direction d : kAfter) {
      if (present.has(d)) {
        A.col.push_back(domain.neighbor(k, d));
        A.val.push_back(-1.0);
      }
    }
    A.row_ptr[static_cast<std::size_t>(k) + 1] = static_cast<std::int64_t>(A.col.size());
  }

  sys.b = natural_divergence(domain, g);
  for (double& v : sys.b) v = -v;

  const Components comps = connected_components(domain);
  sys.component_ids = comps.label;
  sys.component_count = comps.count;
  sys.compat_shift.assign(static_cast<std::size_t>(comps.count), 0.0);
  return sys;
}

SparseSystem compatibilize(SparseSystem system) {
  const auto count = static_cast<std::size_t>(system.component_count);
  std::vector<double> sum(count, 0.0), size(count, 0.0);
  for (std::size_t i = 0; i < system.b.size(); ++i) {
    const auto c = static_cast<std::size_t>(system.component_ids[i]);
    sum[c] += system.b[i];
    size[c] += 1;
  }
  if (system.compat_shift.size() != count) system.compat_shift.assign(count, 0.0);
  for (std::size_t c = 0; c < count; ++c) {
    const double mean = sum[c] / size[c];
    system.compat_shift[c] += mean;
    sum[c] = mean;
  }
  for (std::size_t i = 0; i < system.b.size(); ++i) {
    system.b[i] -= sum[static_cast<std::size_t>(system.component_ids[i])];
  }
  return system;
}

ScalarField integrability(const Domain& domain, const GradientField& g) {
  check_shape(domain, g);
  ScalarField out(domain.width(), domain.height(), kOutside);
  // Derivative of field f along an axis at pixel k.
  auto derivative = [&](const ScalarField& f, int k, Direction back, Direction fwd) {
    const Pixel c = domain.pixel_of(k);
    const int b = domain.neighbor(k, back);
    const int a = domain.neighbor(k, fwd);
    if (a != Domain::kAbsent && b != Domain::kAbsent) {
      const Pixel pa = domain.pixel_of(a);
      const Pixel pb = domain.pixel_of(b);
      return 0.5 * (f(pa.x, pa.y) - f(pb.x, pb.y));
    }
    if (a != Domain::kAbsent) {
      const Pixel pa = domain.pixel_of(a);
      return f(pa.x, pa.y) - f(c.x, c.y);
    }
    if (b != Domain::kAbsent) {
      const Pixel pb = domain.pixel_of(b);
      return f(c.x, c.y) - f(pb.x, pb.y);
    }
    return 0.0;
  };
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel c = domain.pixel_of(k);
    const double p_y = derivative(g.p, k, Direction::kUp, Direction::kDown);
    const double q_x = derivative(g.q, k, Direction::kLeft, Direction::kRight);
    out(c.x, c.y) = p_y - q_x;
  }
  return out;
}

RobustifiedGradient robustify_gradient(const Domain& domain, const GradientField& g,
                                       IntegrabilityWindow window) {
  constexpr double kMaxExponent = 700.0;
  constexpr double kMinWeight = 1e-300;

  RobustifiedGradient out;
  out.integrability = integrability(domain, g);
  out.gradient = g;
  out.nu = ScalarField(domain.width(), domain.height(), kOutside);
  out.weight = ScalarField(domain.width(), domain.height(), kOutside);
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel c = domain.pixel_of(k);
    const double i0 = out.integrability(c.x, c.y);
    double exponent = i0 * i0;
    if (window == IntegrabilityWindow::kNeighborhoodMax) {
      for (Direction d : kDirections) {
        const int nb = domain.neighbor(k, d);
        if (nb == Domain::kAbsent) continue;
        const Pixel o = domain.pixel_of(nb);
        const double i1 = out.integrability(o.x, o.y);
        exponent = std::max(exponent, i1 * i1);
      }
    }
    exponent = std::min(exponent, kMaxExponent);
    double weight = std::exp(-exponent);
    if (weight < kMinWeight) weight = 0.0;
    out.weight(c.x, c.y) = weight;
    out.nu(c.x, c.y) = std::expm1(exponent);
    out.gradient.p(c.x, c.y) = g.p(c.x, c.y) * weight;
    out.gradient.q(c.x, c.y) = g.q(c.x, c.y) * weight;
  }
  return out;
}

}  // namespace sni
