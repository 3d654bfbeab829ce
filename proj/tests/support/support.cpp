#include "support.hpp"

#include <algorithm>
#include <set>

#include "sni/poisson.hpp"

namespace sni::testing {

DomainMask random_connected_mask(std::mt19937_64& rng, int width, int height, int cells) {
  cells = std::clamp(cells, 2, width * height);
  DomainMask mask(width, height);
  std::uniform_int_distribution<int> px(0, width - 1), py(0, height - 1);
  std::vector<Pixel> frontier;
  std::vector<Pixel> inside;
  auto add = [&](Pixel p) {
    mask.set(p.x, p.y, true);
    inside.push_back(p);
    for (Direction d : kDirections) {
      const Pixel q{p.x + dx(d), p.y + dy(d)};
      if (q.x >= 0 && q.y >= 0 && q.x < width && q.y < height && !mask.inside(q.x, q.y)) frontier.push_back(q);
    }
  };
  add({px(rng), py(rng)});
  while (static_cast<int>(inside.size()) < cells && !frontier.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
    const std::size_t i = pick(rng);
    const Pixel p = frontier[i];
    frontier[i] = frontier.back();
    frontier.pop_back();
    if (!mask.inside(p.x, p.y)) add(p);
  }
  return mask;
}

DomainMask random_mask(std::mt19937_64& rng, int width, int height, double density) {
  DomainMask mask(width, height);
  std::bernoulli_distribution coin(density);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) mask.set(x, y, coin(rng));
  }
  DomainMask cleaned = mask;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (mask.inside(x, y) && !mask.inside(x - 1, y) && !mask.inside(x + 1, y) && !mask.inside(x, y - 1) &&
          !mask.inside(x, y + 1)) {
        cleaned.set(x, y, false);
      }
    }
  }
  if (cleaned.count() == 0) {
    cleaned.set(0, 0, true);
    cleaned.set(std::min(1, width - 1), width > 1 ? 0 : 1, true);
  }
  return cleaned;
}

GradientField random_gradient(std::mt19937_64& rng, int width, int height, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  GradientField g(width, height);
  for (std::size_t i = 0; i < g.p.size(); ++i) {
    g.p[i] = u(rng);
    g.q[i] = u(rng);
  }
  return g;
}

Eigen::MatrixXd to_dense(const CsrMatrix& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.rows, a.rows);
  for (int i = 0; i < a.rows; ++i) {
    for (auto e = a.row_ptr[static_cast<std::size_t>(i)]; e < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++e) {
      m(i, a.col[static_cast<std::size_t>(e)]) = a.val[static_cast<std::size_t>(e)];
    }
  }
  return m;
}

Eigen::MatrixXd to_dense(const CholeskyFactor& f) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(f.n, f.n);
  for (int j = 0; j < f.n; ++j) {
    for (auto e = f.col_ptr[static_cast<std::size_t>(j)]; e < f.col_ptr[static_cast<std::size_t>(j) + 1]; ++e) {
      m(f.row[static_cast<std::size_t>(e)], j) = f.val[static_cast<std::size_t>(e)];
    }
  }
  return m;
}

Eigen::VectorXd edge_least_squares(const Domain& domain, const GradientField& g) {
  struct Edge {
    int i, j;
    double target;
  };
  std::vector<Edge> edges;
  const auto& mask = domain.mask();
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask.inside(x, y)) continue;
      const int i = domain.index_of(x, y);
      if (mask.inside(x + 1, y)) {
        edges.push_back({i, domain.index_of(x + 1, y), 0.5 * (g.p(x, y) + g.p(x + 1, y))});
      }
      if (mask.inside(x, y + 1)) {
        edges.push_back({i, domain.index_of(x, y + 1), 0.5 * (g.q(x, y) + g.q(x, y + 1))});
      }
    }
  }
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(edges.size()), domain.size());
  Eigen::VectorXd t(static_cast<Eigen::Index>(edges.size()));
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto r = static_cast<Eigen::Index>(e);
    D(r, edges[e].j) = 1;
    D(r, edges[e].i) = -1;
    t(r) = edges[e].target;
  }
  return D.completeOrthogonalDecomposition().solve(t);
}

Eigen::VectorXd remove_component_means(const Domain& domain, const Eigen::VectorXd& x) {
  const Components comps = connected_components(domain);
  std::vector<double> sum(static_cast<std::size_t>(comps.count), 0.0), count(sum.size(), 0.0);
  for (int k = 0; k < domain.size(); ++k) {
    sum[static_cast<std::size_t>(comps.label[static_cast<std::size_t>(k)])] += x(k);
    count[static_cast<std::size_t>(comps.label[static_cast<std::size_t>(k)])] += 1;
  }
  Eigen::VectorXd out = x;
  for (int k = 0; k < domain.size(); ++k) {
    const auto c = static_cast<std::size_t>(comps.label[static_cast<std::size_t>(k)]);
    out(k) -= sum[c] / count[c];
  }
  return out;
}

CsrMatrix from_dense(const Eigen::MatrixXd& m) {
  CsrMatrix a;
  a.rows = static_cast<int>(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) {
        a.col.push_back(static_cast<std::int32_t>(j));
        a.val.push_back(m(i, j));
      }
    }
    a.row_ptr.push_back(static_cast<std::int64_t>(a.col.size()));
  }
  return a;
}

CsrMatrix random_spd(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) b(i, j) = u(rng);
  }
  Eigen::MatrixXd m = b * b.transpose() + n * Eigen::MatrixXd::Identity(n, n);
  return from_dense(m);
}

CsrMatrix laplacian(int width, int height) {
  const Domain d(DomainMask::full(width, height));
  return assemble(d, GradientField(width, height)).A;
}

}  // namespace sni::testing
