#include "sni/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "sni/poisson.hpp"

namespace sni {
namespace {

// The FFTW planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> allocate(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

void check_size(const RectGradient& rg) {
  if (rg.width() < 2 || rg.height() < 2) {
    throw std::invalid_argument("spectral integration needs at least 2x2 cells");
  }
}

}  // namespace

RectGradient embed_masked(const Domain& domain, const GradientField& g) {
  if (g.width() != domain.width() || g.height() != domain.height()) {
    throw std::invalid_argument("embed_masked: gradient shape does not match domain");
  }
  RectGradient out{GradientField(domain.width(), domain.height()), domain.mask()};
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    out.g.p(px.x, px.y) = g.p(px.x, px.y);
    out.g.q(px.x, px.y) = g.q(px.x, px.y);
  }
  return out;
}

DepthMap integrate_fft(const RectGradient& rg) {
  check_size(rg);
  const int w = rg.width();
  const int h = rg.height();
  const int wc = w / 2 + 1;
  const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  const auto nc = static_cast<std::size_t>(wc) * static_cast<std::size_t>(h);

  auto real = allocate<double>(n);
  auto spec = allocate<fftw_complex>(nc);
  const auto& p = rg.g.p;
  const auto& q = rg.g.q;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double px = p((x + 1) % w, y) - p((x + w - 1) % w, y);
      const double qy = q(x, (y + 1) % h) - q(x, (y + h - 1) % h);
      real[p.offset(x, y)] = 0.5 * (px + qy);
    }
  }

  fftw_plan forward, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_2d(h, w, real.get(), spec.get(), FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_2d(h, w, spec.get(), real.get(), FFTW_ESTIMATE);
  }
  fftw_execute(forward);
  for (int ky = 0; ky < h; ++ky) {
    const double ly = 2 * std::cos(2 * std::numbers::pi * ky / h) - 2;
    for (int kx = 0; kx < wc; ++kx) {
      const double lx = 2 * std::cos(2 * std::numbers::pi * kx / w) - 2;
      const auto i = static_cast<std::size_t>(ky) * static_cast<std::size_t>(wc) + static_cast<std::size_t>(kx);
      const double lambda = lx + ly;
      const double s = lambda == 0.0 ? 0.0 : 1.0 / (lambda * static_cast<double>(n));
      spec[i][0] *= s;
      spec[i][1] *= s;
    }
  }
  fftw_execute(backward);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  DepthMap out(w, h);
  for (std::size_t i = 0; i < n; ++i) out[i] = real[i];
  return out;
}

DepthMap integrate_dct(const RectGradient& rg) {
  check_size(rg);
  const int w = rg.width();
  const int h = rg.height();
  const auto n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);

  const Domain rect(DomainMask::full(w, h));
  const std::vector<double> div = natural_divergence(rect, rg.g);

  auto buf = allocate<double>(n);
  std::copy(div.begin(), div.end(), buf.get());
  fftw_plan forward, backward;
  {
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_r2r_2d(h, w, buf.get(), buf.get(), FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
    backward = fftw_plan_r2r_2d(h, w, buf.get(), buf.get(), FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
  }
  fftw_execute(forward);
  // REDFT10 followed by REDFT01 scales by 2N per dimension.
  const double norm = 4.0 * static_cast<double>(n);
  for (int ky = 0; ky < h; ++ky) {
    const double ly = 2 * std::cos(std::numbers::pi * ky / h) - 2;
    for (int kx = 0; kx < w; ++kx) {
      const double lx = 2 * std::cos(std::numbers::pi * kx / w) - 2;
      const auto i = static_cast<std::size_t>(ky) * static_cast<std::size_t>(w) + static_cast<std::size_t>(kx);
      const double lambda = lx + ly;
      buf[i] = (kx == 0 && ky == 0) ? 0.0 : buf[i] / (lambda * norm);
    }
  }
  fftw_execute(backward);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }

  DepthMap out(w, h);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i];
  return out;
}

}  // namespace sni
