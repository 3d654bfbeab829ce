#include "sni/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sni {
namespace {

constexpr int kRadius = 5;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

std::array<double, 2 * kRadius + 1> gaussian_taps() {
  std::array<double, 2 * kRadius + 1> t{};
  double s = 0;
  for (int i = -kRadius; i <= kRadius; ++i) {
    t[static_cast<std::size_t>(i + kRadius)] = std::exp(-(i * i) / (2 * kSigma * kSigma));
    s += t[static_cast<std::size_t>(i + kRadius)];
  }
  for (double& v : t) v /= s;
  return t;
}

// Separable Gaussian filter with zero extension outside the grid.
ScalarField blur(const ScalarField& in) {
  static const auto taps = gaussian_taps();
  const int w = in.width();
  const int h = in.height();
  ScalarField tmp(w, h), out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int i = -kRadius; i <= kRadius; ++i) {
        const int xx = x + i;
        if (xx >= 0 && xx < w) s += taps[static_cast<std::size_t>(i + kRadius)] * in(xx, y);
      }
      tmp(x, y) = s;
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double s = 0;
      for (int i = -kRadius; i <= kRadius; ++i) {
        const int yy = y + i;
        if (yy >= 0 && yy < h) s += taps[static_cast<std::size_t>(i + kRadius)] * tmp(x, yy);
      }
      out(x, y) = s;
    }
  }
  return out;
}

void check_shapes(const ScalarField& a, const ScalarField& b, const DomainMask& mask) {
  if (!a.same_shape(b) || a.width() != mask.width() || a.height() != mask.height()) {
    throw std::invalid_argument("metric inputs differ in shape");
  }
}

}  // namespace

double mse(const ScalarField& a, const ScalarField& b, const DomainMask& mask) {
  check_shapes(a, b, mask);
  double s = 0;
  std::size_t n = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      if (!mask.inside(x, y)) continue;
      const double d = a(x, y) - b(x, y);
      s += d * d;
      ++n;
    }
  }
  if (n == 0) throw std::invalid_argument("mse: empty mask");
  return s / static_cast<double>(n);
}

double ssim(const ScalarField& reference, const ScalarField& test, const DomainMask& mask) {
  check_shapes(reference, test, mask);
  const int w = reference.width();
  const int h = reference.height();

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  bool equal = true;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.inside(x, y)) continue;
      lo = std::min(lo, reference(x, y));
      hi = std::max(hi, reference(x, y));
      equal = equal && reference(x, y) == test(x, y);
    }
  }
  if (!(hi >= lo)) throw std::invalid_argument("ssim: empty mask");
  double range = hi - lo;
  if (range == 0.0) {
    if (equal) return 1.0;
    range = 1.0;
  }
  const double c1 = (kK1 * range) * (kK1 * range);
  const double c2 = (kK2 * range) * (kK2 * range);

  ScalarField m(w, h), a(w, h), b(w, h), aa(w, h), bb(w, h), ab(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.inside(x, y)) continue;
      // Centre the data to limit cancellation in the variance terms.
      const double u = reference(x, y) - lo;
      const double v = test(x, y) - lo;
      m(x, y) = 1;
      a(x, y) = u;
      b(x, y) = v;
      aa(x, y) = u * u;
      bb(x, y) = v * v;
      ab(x, y) = u * v;
    }
  }
  const ScalarField wm = blur(m), wa = blur(a), wb = blur(b), waa = blur(aa), wbb = blur(bb),
                    wab = blur(ab);

  double total = 0;
  std::size_t count = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.inside(x, y)) continue;
      const double norm = wm(x, y);
      const double mu_a = wa(x, y) / norm;
      const double mu_b = wb(x, y) / norm;
      const double var_a = std::max(waa(x, y) / norm - mu_a * mu_a, 0.0);
      const double var_b = std::max(wbb(x, y) / norm - mu_b * mu_b, 0.0);
      const double cov = wab(x, y) / norm - mu_a * mu_b;
      total += ((2 * mu_a * mu_b + c1) * (2 * cov + c2)) /
               ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

double ssim(const ScalarField& reference, const ScalarField& test) {
  return ssim(reference, test, DomainMask::full(reference.width(), reference.height()));
}

Metrics mse_opt(const DepthMap& estimate, const DepthMap& truth, const Domain& domain) {
  check_shapes(estimate, truth, domain.mask());
  Metrics m;
  double s = 0;
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    s += truth(px.x, px.y) - estimate(px.x, px.y);
  }
  m.offset_used = s / domain.size();
  DepthMap aligned(estimate.width(), estimate.height(), kOutside);
  double e = 0;
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    aligned(px.x, px.y) = estimate(px.x, px.y) + m.offset_used;
    const double d = aligned(px.x, px.y) - truth(px.x, px.y);
    e += d * d;
  }
  m.mse = e / domain.size();
  m.ssim = ssim(truth, aligned, domain.mask());
  return m;
}

}  // namespace sni
