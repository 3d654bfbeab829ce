#include "sni/fast_marching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>

namespace sni {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Label : std::uint8_t { kFar, kTrial, kAccepted };

// Smaller accepted value among the two neighbours along one axis.
double axis_min(const Domain& domain, const std::vector<double>& values,
                const std::vector<Label>& labels, int k, Direction a, Direction b) {
  double m = kInf;
  for (Direction d : {a, b}) {
    const int nb = domain.neighbor(k, d);
    if (nb != Domain::kAbsent && labels[static_cast<std::size_t>(nb)] == Label::kAccepted) {
      m = std::min(m, values[static_cast<std::size_t>(nb)]);
    }
  }
  return m;
}

}  // namespace

double local_update(double m_x, double m_y, double rhs) {
  if (!(rhs >= 0)) throw std::invalid_argument("local_update: rhs must be non-negative");
  const bool has_x = std::isfinite(m_x);
  const bool has_y = std::isfinite(m_y);
  if (!has_x && !has_y) throw FastMarchingError("local_update: no upwind information");
  if (!has_x) return m_y + rhs;
  if (!has_y) return m_x + rhs;

  const double lo = std::min(m_x, m_y);
  const double hi = std::max(m_x, m_y);
  if (hi - lo >= rhs) return lo + rhs;
  const double gap = hi - lo;
  const double w = 0.5 * (lo + hi + std::sqrt(2 * rhs * rhs - gap * gap));
  // The root exceeds both minima in exact arithmetic; keep that under rounding.
  return std::max(w, hi);
}

EikonalSolution solve_eikonal(const Domain& domain, std::span<const double> rhs,
                              std::span<const Seed> seeds) {
  const auto n = static_cast<std::size_t>(domain.size());
  if (rhs.size() != n) throw std::invalid_argument("solve_eikonal: rhs size mismatch");
  if (seeds.empty()) throw std::invalid_argument("solve_eikonal: no seeds");

  std::vector<double> values(n, kInf);
  std::vector<Label> labels(n, Label::kFar);
  std::vector<std::uint8_t> fixed(n, 0);

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  for (const Seed& s : seeds) {
    if (s.index < 0 || static_cast<std::size_t>(s.index) >= n) {
      throw std::invalid_argument("solve_eikonal: seed outside the domain");
    }
    const auto i = static_cast<std::size_t>(s.index);
    if (fixed[i] && values[i] <= s.value) continue;
    values[i] = s.value;
    fixed[i] = 1;
    labels[i] = Label::kTrial;
    heap.emplace(s.value, s.index);
  }

  EikonalSolution out;
  out.accept_order.reserve(n);
  double last = -kInf;
  while (!heap.empty()) {
    const auto [value, k] = heap.top();
    heap.pop();
    const auto ki = static_cast<std::size_t>(k);
    if (labels[ki] == Label::kAccepted || value != values[ki]) continue;
    if (value < last) {
      throw std::logic_error("fast marching: accepted values decreased (" + std::to_string(value) +
                             " after " + std::to_string(last) + ")");
    }
    last = value;
    labels[ki] = Label::kAccepted;
    out.accept_order.push_back(k);

    for (Direction d : kDirections) {
      const int nb = domain.neighbor(k, d);
      if (nb == Domain::kAbsent) continue;
      const auto nbi = static_cast<std::size_t>(nb);
      if (labels[nbi] == Label::kAccepted || fixed[nbi]) continue;
      const double mx = axis_min(domain, values, labels, nb, Direction::kLeft, Direction::kRight);
      const double my = axis_min(domain, values, labels, nb, Direction::kUp, Direction::kDown);
      const double candidate = local_update(mx, my, rhs[nbi]);
      if (candidate < values[nbi]) {
        values[nbi] = candidate;
        labels[nbi] = Label::kTrial;
        heap.emplace(candidate, nb);
      }
    }
  }

  const auto unreached =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::kFar));
  if (unreached > 0) {
    throw FastMarchingError("fast marching: " + std::to_string(unreached) +
                            " pixel(s) unreachable from the seeds");
  }
  out.values = std::move(values);
  return out;
}

std::vector<int> default_seeds(const Domain& domain, const std::optional<Pixel>& preferred) {
  const Components comps = connected_components(domain);
  const auto count = static_cast<std::size_t>(comps.count);
  std::vector<double> sx(count, 0), sy(count, 0), cnt(count, 0);
  for (int k = 0; k < domain.size(); ++k) {
    const auto c = static_cast<std::size_t>(comps.label[static_cast<std::size_t>(k)]);
    const Pixel px = domain.pixel_of(k);
    sx[c] += px.x;
    sy[c] += px.y;
    cnt[c] += 1;
  }
  std::vector<int> seeds(count, -1);
  std::vector<double> best(count, kInf);
  for (int k = 0; k < domain.size(); ++k) {
    const auto c = static_cast<std::size_t>(comps.label[static_cast<std::size_t>(k)]);
    const Pixel px = domain.pixel_of(k);
    const double ex = px.x - sx[c] / cnt[c];
    const double ey = px.y - sy[c] / cnt[c];
    const double d2 = ex * ex + ey * ey;
    if (d2 < best[c]) {
      best[c] = d2;
      seeds[c] = k;
    }
  }
  if (preferred) {
    const int k = domain.index_of(preferred->x, preferred->y);
    if (k == Domain::kAbsent) throw std::invalid_argument("seed pixel is not inside the domain");
    seeds[static_cast<std::size_t>(comps.label[static_cast<std::size_t>(k)])] = k;
  }
  return seeds;
}

std::vector<double> auxiliary_function(const Domain& domain, std::span<const int> seeds,
                                       Auxiliary kind) {
  const auto n = static_cast<std::size_t>(domain.size());
  std::vector<double> f(n);
  if (kind == Auxiliary::kGeodesic) {
    std::vector<Seed> s;
    s.reserve(seeds.size());
    for (int k : seeds) s.push_back({k, 0.0});
    const std::vector<double> unit(n, 1.0);
    EikonalSolution dist = solve_eikonal(domain, unit, s);
    for (std::size_t i = 0; i < n; ++i) f[i] = dist.values[i] * dist.values[i];
    return f;
  }
  const Components comps = connected_components(domain);
  std::vector<Pixel> origin(static_cast<std::size_t>(comps.count));
  for (int k : seeds) {
    origin[static_cast<std::size_t>(comps.label[static_cast<std::size_t>(k)])] = domain.pixel_of(k);
  }
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    const Pixel o = origin[static_cast<std::size_t>(comps.label[static_cast<std::size_t>(k)])];
    const double ex = px.x - o.x;
    const double ey = px.y - o.y;
    f[static_cast<std::size_t>(k)] = ex * ex + ey * ey;
  }
  return f;
}

UpwindDerivative upwind_derivative(const Domain& domain, std::span<const double> f, int k) {
  auto along = [&](Direction back, Direction fwd) {
    const double fk = f[static_cast<std::size_t>(k)];
    const int b = domain.neighbor(k, back);
    const int a = domain.neighbor(k, fwd);
    const double d_back = b != Domain::kAbsent ? fk - f[static_cast<std::size_t>(b)] : 0.0;
    const double d_fwd = a != Domain::kAbsent ? fk - f[static_cast<std::size_t>(a)] : 0.0;
    if (d_back <= 0 && d_fwd <= 0) return 0.0;
    // Backward difference when the smaller neighbour is behind, forward otherwise.
    return d_back >= d_fwd ? d_back : -d_fwd;
  };
  return {along(Direction::kLeft, Direction::kRight), along(Direction::kUp, Direction::kDown)};
}

DepthMap integrate_fm(const GradientField& g, const Domain& domain, const FmConfig& cfg) {
  if (!(cfg.lambda > 0)) throw std::invalid_argument("integrate_fm: lambda must be > 0");
  if (g.width() != domain.width() || g.height() != domain.height()) {
    throw std::invalid_argument("integrate_fm: gradient shape does not match domain");
  }
  const std::vector<int> seeds = default_seeds(domain, cfg.seed);
  const std::vector<double> f = auxiliary_function(domain, seeds, cfg.auxiliary);

  const auto n = static_cast<std::size_t>(domain.size());
  std::vector<double> rhs(n);
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    const UpwindDerivative df = upwind_derivative(domain, f, k);
    rhs[static_cast<std::size_t>(k)] =
        std::hypot(g.p(px.x, px.y) + cfg.lambda * df.dx, g.q(px.x, px.y) + cfg.lambda * df.dy);
  }

  std::vector<Seed> start;
  start.reserve(seeds.size());
  for (int k : seeds) start.push_back({k, 0.0});
  EikonalSolution w = solve_eikonal(domain, rhs, start);

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = w.values[i] - cfg.lambda * f[i];
  return scatter(domain, v);
}

}  // namespace sni
