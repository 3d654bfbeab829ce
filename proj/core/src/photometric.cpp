#include "sni/photometric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sni/metrics.hpp"

namespace sni {

NormalField estimate_normals(const Domain& domain, const PsProblem& problem, double albedo_floor) {
  const auto m = problem.images.size();
  if (m < 3 || problem.lightings.size() != m) {
    throw std::invalid_argument("photometric stereo needs >= 3 images with one lighting each");
  }
  for (const ScalarField& img : problem.images) {
    if (img.width() != domain.width() || img.height() != domain.height()) {
      throw std::invalid_argument("photometric stereo: image shape does not match domain");
    }
  }

  Eigen::MatrixXd L(static_cast<Eigen::Index>(m), 3);
  for (std::size_t i = 0; i < m; ++i) {
    for (int c = 0; c < 3; ++c) L(static_cast<Eigen::Index>(i), c) = problem.lightings[i][static_cast<std::size_t>(c)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(L);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) throw std::invalid_argument("photometric stereo: lightings are coplanar");
  // Normal equations solved once; each pixel is then a 3 x m product.
  const Eigen::MatrixXd pinv = (L.transpose() * L).ldlt().solve(L.transpose());

  NormalField nf(domain.width(), domain.height());
  Eigen::VectorXd intensity(static_cast<Eigen::Index>(m));
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    for (std::size_t i = 0; i < m; ++i) intensity(static_cast<Eigen::Index>(i)) = problem.images[i](px.x, px.y);
    const Eigen::Vector3d s = pinv * intensity;
    const double rho = s.norm();
    if (!(rho > albedo_floor) || !(s.z() / rho > kMinNormalZ)) {
      nf.degenerate(px.x, px.y) = 1;
      continue;
    }
    nf.albedo(px.x, px.y) = rho;
    nf.n(px.x, px.y) = {s.x() / rho, s.y() / rho, s.z() / rho};
  }
  return nf;
}

GradientField normals_to_gradient(const Domain& domain, const NormalField& nf, Grid<std::uint8_t>* flags) {
  GradientField g(domain.width(), domain.height());
  if (flags) *flags = Grid<std::uint8_t>(domain.width(), domain.height(), 0);
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    const Vec3& n = nf.n(px.x, px.y);
    double nz = n[2];
    if (nz < kMinNormalZ) {
      nz = kMinNormalZ;
      if (flags) (*flags)(px.x, px.y) = 1;
    }
    g.p(px.x, px.y) = -n[0] / nz;
    g.q(px.x, px.y) = -n[1] / nz;
  }
  return g;
}

NormalField gradient_to_normals(const Domain& domain, const GradientField& g) {
  NormalField nf(domain.width(), domain.height());
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    const double p = g.p(px.x, px.y);
    const double q = g.q(px.x, px.y);
    const double s = 1.0 / std::sqrt(1 + p * p + q * q);
    nf.n(px.x, px.y) = {-p * s, -q * s, s};
    nf.albedo(px.x, px.y) = 1.0;
  }
  return nf;
}

std::vector<ScalarField> render_lambertian(const Domain& domain, const NormalField& nf,
                                           std::span<const Vec3> lightings) {
  std::vector<ScalarField> out;
  out.reserve(lightings.size());
  for (const Vec3& l : lightings) {
    ScalarField img(domain.width(), domain.height(), 0.0);
    for (int k = 0; k < domain.size(); ++k) {
      const Pixel px = domain.pixel_of(k);
      const Vec3& n = nf.n(px.x, px.y);
      const double shade = n[0] * l[0] + n[1] * l[1] + n[2] * l[2];
      img(px.x, px.y) = nf.albedo(px.x, px.y) * std::max(shade, 0.0);
    }
    out.push_back(std::move(img));
  }
  return out;
}

GradientField depth_gradient(const Domain& domain, const DepthMap& depth) {
  GradientField g(domain.width(), domain.height());
  auto diff = [&](int k, Direction back, Direction fwd) {
    const Pixel c = domain.pixel_of(k);
    const int a = domain.neighbor(k, fwd);
    if (a != Domain::kAbsent) {
      const Pixel o = domain.pixel_of(a);
      return depth(o.x, o.y) - depth(c.x, c.y);
    }
    const int b = domain.neighbor(k, back);
    if (b != Domain::kAbsent) {
      const Pixel o = domain.pixel_of(b);
      return depth(c.x, c.y) - depth(o.x, o.y);
    }
    return 0.0;
  };
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    g.p(px.x, px.y) = diff(k, Direction::kLeft, Direction::kRight);
    g.q(px.x, px.y) = diff(k, Direction::kUp, Direction::kDown);
  }
  return g;
}

Reprojection reproject(const Domain& domain, const DepthMap& depth, const ScalarField& albedo,
                       std::span<const Vec3> lightings, std::span<const ScalarField> images) {
  if (images.size() != lightings.size()) throw std::invalid_argument("reproject: one image per lighting");
  NormalField nf = gradient_to_normals(domain, depth_gradient(domain, depth));
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    nf.albedo(px.x, px.y) = albedo(px.x, px.y);
  }
  Reprojection out;
  out.rendered = render_lambertian(domain, nf, lightings);
  for (std::size_t i = 0; i < images.size(); ++i) {
    out.mse.push_back(mse(out.rendered[i], images[i], domain.mask()));
    out.ssim.push_back(ssim(images[i], out.rendered[i], domain.mask()));
    out.mean_mse += out.mse.back();
    out.mean_ssim += out.ssim.back();
  }
  if (!images.empty()) {
    out.mean_mse /= static_cast<double>(images.size());
    out.mean_ssim /= static_cast<double>(images.size());
  }
  return out;
}

}  // namespace sni
