#include "sni/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sni {
namespace {

void require_size(int n, int min, const char* what) {
  if (n < min) {
    throw std::invalid_argument(std::string(what) + ": side length must be >= " +
                                std::to_string(min));
  }
}

// Sample positions of an n-point grid spanning [lo, hi].
double coord(int i, int n, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// (r cos r - sin r) / r^3, i.e. (d/dr sinc(r)) / r, with its series near 0.
double sinc_slope_over_r(double r) {
  if (r < 1e-3) {
    const double r2 = r * r;
    return -1.0 / 3.0 + r2 / 30.0 - r2 * r2 / 840.0;
  }
  return (r * std::cos(r) - std::sin(r)) / (r * r * r);
}

struct PeaksGradient {
  double dx;
  double dy;
};

PeaksGradient peaks_gradient(double x, double y) {
  const double e1 = std::exp(-x * x - (y + 1) * (y + 1));
  const double e2 = std::exp(-x * x - y * y);
  const double e3 = std::exp(-(x + 1) * (x + 1) - y * y);
  const double poly = x / 5 - x * x * x - std::pow(y, 5);
  const double gx = -6 * (1 - x) * e1 - 6 * x * (1 - x) * (1 - x) * e1 -
                    10 * ((0.2 - 3 * x * x) - 2 * x * poly) * e2 + (2.0 / 3.0) * (x + 1) * e3;
  const double gy = -6 * (1 - x) * (1 - x) * (y + 1) * e1 -
                    10 * (-5 * std::pow(y, 4) - 2 * y * poly) * e2 + (2.0 / 3.0) * y * e3;
  return {gx, gy};
}

double vase_profile_slope(double y) {
  // f(y) = 0.15 - 0.1 * y (6y + 1)^2 (y - 1)^2 (3y - 2)
  const double a = 6 * y + 1;
  const double b = y - 1;
  const double c = 3 * y - 2;
  const double d = a * a * b * b * c + y * (12 * a * b * b * c + 2 * a * a * b * c + 3 * a * a * b * b);
  return -0.1 * d;
}

}  // namespace

double sombrero_value(double x, double y, double amplitude) {
  const double r = std::hypot(x, y);
  return amplitude * (r < 1e-12 ? 1.0 : std::sin(r) / r);
}

double peaks_value(double x, double y) {
  return 3 * (1 - x) * (1 - x) * std::exp(-x * x - (y + 1) * (y + 1)) -
         10 * (x / 5 - x * x * x - std::pow(y, 5)) * std::exp(-x * x - y * y) -
         std::exp(-(x + 1) * (x + 1) - y * y) / 3;
}

double vase_profile(double y) {
  const double a = 6 * y + 1;
  const double b = y - 1;
  return 0.15 - 0.1 * y * a * a * b * b * (3 * y - 2);
}

Dataset gen_sombrero(int n, const SombreroParams& params) {
  require_size(n, 8, "gen_sombrero");
  const double L = params.half_extent;
  const double h = 2 * L / (n - 1);
  Dataset out;
  out.name = "sombrero";
  out.domain = build_domain(DomainMask::full(n, n));
  out.gradient = GradientField(n, n);
  DepthMap truth(n, n);
  for (int j = 0; j < n; ++j) {
    const double y = coord(j, n, -L, L);
    for (int i = 0; i < n; ++i) {
      const double x = coord(i, n, -L, L);
      const double r = std::hypot(x, y);
      const double s = params.amplitude * sinc_slope_over_r(r);
      truth(i, j) = sombrero_value(x, y, params.amplitude);
      out.gradient.p(i, j) = s * x * h;
      out.gradient.q(i, j) = s * y * h;
    }
  }
  out.ground_truth = std::move(truth);
  return out;
}

Dataset gen_peaks(int n, const PeaksParams& params) {
  require_size(n, 8, "gen_peaks");
  const double L = params.half_extent;
  const double h = 2 * L / (n - 1);
  const double scale = params.depth_scale.value_or(1.0 / h);
  Dataset out;
  out.name = "peaks";
  out.domain = build_domain(DomainMask::full(n, n));
  out.gradient = GradientField(n, n);
  DepthMap truth(n, n);
  for (int j = 0; j < n; ++j) {
    const double y = coord(j, n, -L, L);
    for (int i = 0; i < n; ++i) {
      const double x = coord(i, n, -L, L);
      const PeaksGradient g = peaks_gradient(x, y);
      truth(i, j) = scale * peaks_value(x, y);
      out.gradient.p(i, j) = scale * h * g.dx;
      out.gradient.q(i, j) = scale * h * g.dy;
    }
  }
  out.ground_truth = std::move(truth);
  return out;
}

Dataset gen_vase(int n, const VaseParams& params) {
  require_size(n, 16, "gen_vase");
  if (!(params.rim > 0 && params.rim < 1)) throw std::invalid_argument("gen_vase: rim in (0, 1)");
  const double h = 1.0 / (n - 1);
  DomainMask mask(n, n);
  GradientField g(n, n);
  DepthMap truth(n, n, kOutside);
  for (int j = 0; j < n; ++j) {
    const double y = coord(j, n, 0.0, 1.0);
    const double f = vase_profile(y);
    const double fp = vase_profile_slope(y);
    for (int i = 0; i < n; ++i) {
      const double x = coord(i, n, -0.5, 0.5);
      if (std::abs(x) > params.rim * f) continue;
      const double z = std::sqrt(f * f - x * x);
      mask.set(i, j, true);
      truth(i, j) = z / h;
      g.p(i, j) = -x / z;
      g.q(i, j) = f * fp / z;
    }
  }
  Dataset out;
  out.name = "vase";
  out.domain = build_domain(std::move(mask));
  out.gradient = std::move(g);
  out.ground_truth = std::move(truth);
  return out;
}

ScalarField shepp_logan(int n) {
  require_size(n, 2, "shepp_logan");
  struct Ellipse {
    double value, a, b, x0, y0, phi_deg;
  };
  static constexpr std::array<Ellipse, 10> kEllipses = {{
      {1.0, 0.69, 0.92, 0.0, 0.0, 0},
      {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0},
      {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18},
      {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18},
      {0.1, 0.2100, 0.2500, 0.0, 0.35, 0},
      {0.1, 0.0460, 0.0460, 0.0, 0.1, 0},
      {0.1, 0.0460, 0.0460, 0.0, -0.1, 0},
      {0.1, 0.0460, 0.0230, -0.08, -0.605, 0},
      {0.1, 0.0230, 0.0230, 0.0, -0.606, 0},
      {0.1, 0.0230, 0.0460, 0.06, -0.605, 0},
  }};
  ScalarField img(n, n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double y = coord(j, n, 1.0, -1.0);  // top row is +1
    for (int i = 0; i < n; ++i) {
      const double x = coord(i, n, -1.0, 1.0);
      double v = 0;
      for (const Ellipse& e : kEllipses) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double u = (x - e.x0) * std::cos(phi) + (y - e.y0) * std::sin(phi);
        const double w = -(x - e.x0) * std::sin(phi) + (y - e.y0) * std::cos(phi);
        if (u * u / (e.a * e.a) + w * w / (e.b * e.b) <= 1.0) v += e.value;
      }
      img(i, j) = 255.0 * v;
    }
  }
  return img;
}

Dataset gen_phantom(int n) {
  Dataset out;
  out.name = "phantom";
  ScalarField img = shepp_logan(n);
  out.domain = build_domain(DomainMask::full(n, n));
  out.gradient = gradient_from_image(img);
  out.ground_truth = std::move(img);
  return out;
}

GradientField gradient_from_image(const ScalarField& image) {
  const int w = image.width();
  const int h = image.height();
  if (w < 2 || h < 2) throw std::invalid_argument("gradient_from_image: image must be >= 2x2");
  GradientField g(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      g.p(x, y) = x + 1 < w ? image(x + 1, y) - image(x, y) : image(x, y) - image(x - 1, y);
      g.q(x, y) = y + 1 < h ? image(x, y + 1) - image(x, y) : image(x, y) - image(x, y - 1);
    }
  }
  return g;
}

Dataset restrict_to_mask(const Dataset& data, const DomainMask& mask) {
  if (mask.width() != data.domain.width() || mask.height() != data.domain.height()) {
    throw std::invalid_argument("restrict_to_mask: shape mismatch");
  }
  DomainMask combined(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      combined.set(x, y, mask.inside(x, y) && data.domain.contains(x, y));
    }
  }
  Dataset out;
  out.name = data.name + "-masked";
  out.domain = build_domain(std::move(combined));
  out.gradient = data.gradient;
  if (data.ground_truth) {
    DepthMap truth = *data.ground_truth;
    for (int y = 0; y < truth.height(); ++y) {
      for (int x = 0; x < truth.width(); ++x) {
        if (!out.domain.contains(x, y)) truth(x, y) = kOutside;
      }
    }
    out.ground_truth = std::move(truth);
  }
  return out;
}

DomainMask blob_mask(int width, int height) {
  if (width < 8 || height < 8) throw std::invalid_argument("blob_mask: size must be >= 8x8");
  DomainMask mask(width, height);
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  const double rx = 0.45 * width;
  const double ry = 0.42 * height;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = (x - cx) / rx;
      const double v = (y - cy) / ry;
      const bool ellipse = u * u + v * v <= 1.0;
      // Notch: a wedge cut down to the centre from the top edge.
      const bool notch = y < cy && std::abs(x - cx) < 0.35 * (cy - y) * width / height;
      mask.set(x, y, ellipse && !notch);
    }
  }
  // Drop cells left without an inside 4-neighbour by the rasterisation.
  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (!mask.inside(x, y)) continue;
        if (!mask.inside(x - 1, y) && !mask.inside(x + 1, y) && !mask.inside(x, y - 1) &&
            !mask.inside(x, y + 1)) {
          mask.set(x, y, false);
          changed = true;
        }
      }
    }
  }
  return mask;
}

double gradient_sup_norm(const Domain& domain, const GradientField& g) {
  double m = 0;
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    m = std::max({m, std::abs(g.p(px.x, px.y)), std::abs(g.q(px.x, px.y))});
  }
  return m;
}

GradientField add_noise(const GradientField& g, const Domain& domain, double sigma_pct,
                        std::uint64_t seed) {
  if (!(sigma_pct >= 0 && sigma_pct <= 100)) {
    throw std::invalid_argument("add_noise: sigma_pct must lie in [0, 100]");
  }
  GradientField out = g;
  if (sigma_pct == 0) return out;
  const double sigma = sigma_pct / 100.0 * gradient_sup_norm(domain, g);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    out.p(px.x, px.y) += noise(rng);
    out.q(px.x, px.y) += noise(rng);
  }
  return out;
}

GradientField inject_outliers(const GradientField& g, const Domain& domain, double fraction,
                              double magnitude, std::uint64_t seed) {
  if (!(fraction > 0 && fraction < 1)) {
    throw std::invalid_argument("inject_outliers: fraction must lie in (0, 1)");
  }
  if (!(magnitude > 0)) throw std::invalid_argument("inject_outliers: magnitude must be > 0");
  GradientField out = g;
  const auto n = static_cast<std::size_t>(domain.size());
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (count == 0) return out;
  const double value = magnitude * gradient_sup_norm(domain, g);

  std::mt19937_64 rng(seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Partial Fisher-Yates: the first `count` entries become a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  std::bernoulli_distribution sign(0.5);
  for (std::size_t i = 0; i < count; ++i) {
    const Pixel px = domain.pixel_of(order[i]);
    out.p(px.x, px.y) = sign(rng) ? value : -value;
    out.q(px.x, px.y) = sign(rng) ? value : -value;
  }
  return out;
}

}  // namespace sni
