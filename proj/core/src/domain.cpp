#include "sni/domain.hpp"

#include <algorithm>
#include <string>

namespace sni {

DomainMask::DomainMask(int width, int height, bool inside)
    : cells_(width, height, inside ? 1 : 0) {}

std::size_t DomainMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.data().begin(), cells_.data().end(), [](auto c) { return c != 0; }));
}

BoundaryClass classify_boundary(NeighborPresence n) {
  switch (n.count()) {
    case 4:
      return BoundaryClass::kInterior;
    case 3:
      if (!n.up) return BoundaryClass::kMissingUp;
      if (!n.down) return BoundaryClass::kMissingDown;
      if (!n.left) return BoundaryClass::kMissingLeft;
      return BoundaryClass::kMissingRight;
    case 2:
      if (n.left && n.right) return BoundaryClass::kLineHorizontal;
      if (n.up && n.down) return BoundaryClass::kLineVertical;
      if (!n.up && !n.left) return BoundaryClass::kCornerUpLeft;
      if (!n.up && !n.right) return BoundaryClass::kCornerUpRight;
      if (!n.down && !n.left) return BoundaryClass::kCornerDownLeft;
      return BoundaryClass::kCornerDownRight;
    case 1:
      if (n.up) return BoundaryClass::kOnlyUp;
      if (n.down) return BoundaryClass::kOnlyDown;
      if (n.left) return BoundaryClass::kOnlyLeft;
      return BoundaryClass::kOnlyRight;
    default:
      throw DegenerateDomain("isolated pixel: no inside 4-neighbour");
  }
}

std::string_view to_string(BoundaryClass c) {
  switch (c) {
    case BoundaryClass::kInterior: return "interior";
    case BoundaryClass::kMissingUp: return "missing-up";
    case BoundaryClass::kMissingDown: return "missing-down";
    case BoundaryClass::kMissingLeft: return "missing-left";
    case BoundaryClass::kMissingRight: return "missing-right";
    case BoundaryClass::kLineHorizontal: return "line-horizontal";
    case BoundaryClass::kLineVertical: return "line-vertical";
    case BoundaryClass::kCornerUpLeft: return "corner-up-left";
    case BoundaryClass::kCornerUpRight: return "corner-up-right";
    case BoundaryClass::kCornerDownLeft: return "corner-down-left";
    case BoundaryClass::kCornerDownRight: return "corner-down-right";
    case BoundaryClass::kOnlyUp: return "only-up";
    case BoundaryClass::kOnlyDown: return "only-down";
    case BoundaryClass::kOnlyLeft: return "only-left";
    case BoundaryClass::kOnlyRight: return "only-right";
  }
  return "unknown";
}

Domain::Domain(DomainMask mask) : mask_(std::move(mask)) {
  const int w = mask_.width();
  const int h = mask_.height();
  if (w < 1 || h < 1) throw DegenerateDomain("empty mask");

  index_ = Grid<std::int32_t>(w, h, kAbsent);
  pixels_.reserve(mask_.count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask_.inside(x, y)) continue;
      index_(x, y) = static_cast<std::int32_t>(pixels_.size());
      pixels_.push_back({x, y});
    }
  }
  if (pixels_.empty()) throw DegenerateDomain("empty mask");

  neighbors_.resize(pixels_.size());
  classes_.resize(pixels_.size());
  for (std::size_t k = 0; k < pixels_.size(); ++k) {
    const Pixel px = pixels_[k];
    for (Direction d : kDirections) {
      neighbors_[k][static_cast<std::size_t>(d)] = index_of(px.x + dx(d), px.y + dy(d));
    }
    const NeighborPresence presence = this->presence(static_cast<int>(k));
    if (presence.count() == 0) {
      throw DegenerateDomain("isolated pixel at (" + std::to_string(px.x) + ", " +
                             std::to_string(px.y) + ")");
    }
    classes_[k] = classify_boundary(presence);
  }
}

NeighborPresence Domain::presence(int k) const {
  const auto& nb = neighbors_[static_cast<std::size_t>(k)];
  return {nb[0] != kAbsent, nb[1] != kAbsent, nb[2] != kAbsent, nb[3] != kAbsent};
}

Domain build_domain(DomainMask mask) { return Domain(std::move(mask)); }

Components connected_components(const Domain& domain) {
  Components out;
  out.label.assign(static_cast<std::size_t>(domain.size()), -1);
  std::vector<int> stack;
  for (int seed = 0; seed < domain.size(); ++seed) {
    if (out.label[static_cast<std::size_t>(seed)] >= 0) continue;
    const int id = out.count++;
    out.label[static_cast<std::size_t>(seed)] = id;
    stack.push_back(seed);
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      for (Direction d : kDirections) {
        const int nb = domain.neighbor(k, d);
        if (nb == Domain::kAbsent || out.label[static_cast<std::size_t>(nb)] >= 0) continue;
        out.label[static_cast<std::size_t>(nb)] = id;
        stack.push_back(nb);
      }
    }
  }
  return out;
}

std::vector<double> gather(const Domain& domain, const ScalarField& field) {
  if (field.width() != domain.width() || field.height() != domain.height()) {
    throw std::invalid_argument("gather: field shape does not match domain");
  }
  std::vector<double> out(static_cast<std::size_t>(domain.size()));
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    out[static_cast<std::size_t>(k)] = field(px.x, px.y);
  }
  return out;
}

ScalarField scatter(const Domain& domain, std::span<const double> values, double outside) {
  if (values.size() != static_cast<std::size_t>(domain.size())) {
    throw std::invalid_argument("scatter: value count does not match domain size");
  }
  ScalarField out(domain.width(), domain.height(), outside);
  for (int k = 0; k < domain.size(); ++k) {
    const Pixel px = domain.pixel_of(k);
    out(px.x, px.y) = values[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace sni
