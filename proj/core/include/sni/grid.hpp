#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sni {

// Dense row-major 2-D array. x is the column, y the row (growing downwards).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height) {
    if (width < 0 || height < 0) throw std::invalid_argument("negative grid size");
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int x, int y) { return data_[offset(x, y)]; }
  const T& operator()(int x, int y) const { return data_[offset(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::size_t offset(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
  bool same_shape(const Grid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using ScalarField = Grid<double>;

// A depth map lives on the full grid; cells outside the domain hold NaN.
using DepthMap = ScalarField;

inline constexpr double kOutside = std::numeric_limits<double>::quiet_NaN();

// Per-pixel gradient (p, q) = (dv/dx, dv/dy), in depth units per pixel.
struct GradientField {
  ScalarField p;
  ScalarField q;

  GradientField() = default;
  GradientField(int width, int height) : p(width, height, 0.0), q(width, height, 0.0) {}

  int width() const { return p.width(); }
  int height() const { return p.height(); }
  bool operator==(const GradientField&) const = default;
};

}  // namespace sni
