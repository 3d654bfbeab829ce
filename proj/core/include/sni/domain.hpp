#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "sni/grid.hpp"

namespace sni {

// Raised for masks that cannot carry a discretisation: empty masks and masks
// with an inside pixel that has no inside 4-neighbour.
class DegenerateDomain : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainMask {
 public:
  DomainMask() = default;
  DomainMask(int width, int height, bool inside = false);

  static DomainMask full(int width, int height) { return DomainMask(width, height, true); }

  int width() const { return cells_.width(); }
  int height() const { return cells_.height(); }
  bool inside(int x, int y) const { return cells_.contains(x, y) && cells_(x, y) != 0; }
  void set(int x, int y, bool value) { cells_(x, y) = value ? 1 : 0; }
  std::size_t count() const;

  const Grid<std::uint8_t>& cells() const { return cells_; }
  bool operator==(const DomainMask&) const = default;

 private:
  Grid<std::uint8_t> cells_;
};

enum class Direction : std::uint8_t { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };
inline constexpr std::array<Direction, 4> kDirections = {Direction::kUp, Direction::kDown,
                                                         Direction::kLeft, Direction::kRight};

// Offsets along x (columns) and y (rows, growing downwards).
inline constexpr int dx(Direction d) {
  return d == Direction::kLeft ? -1 : d == Direction::kRight ? 1 : 0;
}
inline constexpr int dy(Direction d) {
  return d == Direction::kUp ? -1 : d == Direction::kDown ? 1 : 0;
}

struct NeighborPresence {
  bool up = false;
  bool down = false;
  bool left = false;
  bool right = false;

  bool has(Direction d) const {
    switch (d) {
      case Direction::kUp: return up;
      case Direction::kDown: return down;
      case Direction::kLeft: return left;
      case Direction::kRight: return right;
    }
    return false;
  }
  int count() const { return int(up) + int(down) + int(left) + int(right); }
};

// Interior plus the fourteen boundary configurations of a 4-connected pixel.
// "Missing" classes name the absent neighbour, corners name the two absent
// sides, "Only" classes name the single present neighbour.
enum class BoundaryClass : std::uint8_t {
  kInterior,
  kMissingUp,
  kMissingDown,
  kMissingLeft,
  kMissingRight,
  kLineHorizontal,  // left and right present
  kLineVertical,    // up and down present
  kCornerUpLeft,
  kCornerUpRight,
  kCornerDownLeft,
  kCornerDownRight,
  kOnlyUp,
  kOnlyDown,
  kOnlyLeft,
  kOnlyRight,
};
inline constexpr int kBoundaryClassCount = 15;

// Throws DegenerateDomain for the all-absent pattern.
BoundaryClass classify_boundary(NeighborPresence presence);
std::string_view to_string(BoundaryClass c);

struct Pixel {
  int x = 0;
  int y = 0;
  bool operator==(const Pixel&) const = default;
};

// Immutable linear indexing over the inside pixels of a mask (row-major),
// with precomputed 4-neighbour links and boundary classes.
class Domain {
 public:
  static constexpr std::int32_t kAbsent = -1;

  Domain() = default;
  explicit Domain(DomainMask mask);

  int size() const { return static_cast<int>(pixels_.size()); }
  int width() const { return mask_.width(); }
  int height() const { return mask_.height(); }
  const DomainMask& mask() const { return mask_; }

  bool contains(int x, int y) const { return mask_.inside(x, y); }
  // kAbsent for cells outside the mask or the grid.
  std::int32_t index_of(int x, int y) const {
    return index_.contains(x, y) ? index_(x, y) : kAbsent;
  }
  Pixel pixel_of(int k) const { return pixels_[static_cast<std::size_t>(k)]; }
  std::int32_t neighbor(int k, Direction d) const {
    return neighbors_[static_cast<std::size_t>(k)][static_cast<std::size_t>(d)];
  }
  NeighborPresence presence(int k) const;
  BoundaryClass boundary_class(int k) const { return classes_[static_cast<std::size_t>(k)]; }
  bool is_full_rectangle() const { return size() == width() * height(); }

 private:
  DomainMask mask_;
  Grid<std::int32_t> index_;
  std::vector<Pixel> pixels_;
  std::vector<std::array<std::int32_t, 4>> neighbors_;
  std::vector<BoundaryClass> classes_;
};

Domain build_domain(DomainMask mask);

struct Components {
  std::vector<int> label;  // per domain index, 0..count-1
  int count = 0;
};

// 4-connected components; labels are assigned in order of first appearance.
Components connected_components(const Domain& domain);

// Values on the inside pixels, in domain order.
std::vector<double> gather(const Domain& domain, const ScalarField& field);
// Full-grid field with `outside` in masked-out cells.
ScalarField scatter(const Domain& domain, std::span<const double> values,
                    double outside = kOutside);

}  // namespace sni
