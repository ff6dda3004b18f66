#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "svtgv/errors.hpp"

namespace svtgv {

using Complex = std::complex<double>;

/// Height and width of a pixel grid. Row index y grows downward, column
/// index x grows rightward, origin top-left.
struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const noexcept { return height * width; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

inline bool is_finite(double v) noexcept { return std::isfinite(v); }
inline bool is_finite(const Complex& v) noexcept {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

/// Row-major H x W array of real or complex samples.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(Shape shape, T fill = T{}) : shape_(shape), data_(shape.size(), fill) {}
  Grid(std::size_t height, std::size_t width, T fill = T{}) : Grid(Shape{height, width}, fill) {}

  /// Takes ownership of row-major samples; throws StructuralError when the
  /// length does not match the shape or any sample is non-finite.
  Grid(Shape shape, std::vector<T> data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
      throw StructuralError("grid data length " + std::to_string(data_.size()) +
                            " does not match shape " + to_string(shape_));
    }
    if (!all_finite()) throw StructuralError("grid contains non-finite samples");
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t height() const noexcept { return shape_.height; }
  std::size_t width() const noexcept { return shape_.width; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t y, std::size_t x) noexcept { return data_[y * shape_.width + x]; }
  const T& operator()(std::size_t y, std::size_t x) const noexcept {
    return data_[y * shape_.width + x];
  }
  T& operator[](std::size_t i) noexcept { return data_[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  bool all_finite() const noexcept {
    for (const auto& v : data_)
      if (!is_finite(v)) return false;
    return true;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  Shape shape_{};
  std::vector<T> data_;
};

using ScalarGrid = Grid<double>;
using ComplexGrid = Grid<Complex>;

/// Forward-difference type field: x-difference and y-difference channels.
template <typename T>
struct VectorField {
  Grid<T> x;
  Grid<T> y;

  VectorField() = default;
  explicit VectorField(Shape shape) : x(shape), y(shape) {}
  VectorField(Grid<T> gx, Grid<T> gy) : x(std::move(gx)), y(std::move(gy)) {
    if (x.shape() != y.shape()) throw StructuralError("vector field channels differ in shape");
  }

  const Shape& shape() const noexcept { return x.shape(); }
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

/// Symmetric 2x2 tensor per pixel; the off-diagonal entry xy is stored once
/// and counts twice in inner products and norms.
template <typename T>
struct SymTensorField {
  Grid<T> xx;
  Grid<T> yy;
  Grid<T> xy;

  SymTensorField() = default;
  explicit SymTensorField(Shape shape) : xx(shape), yy(shape), xy(shape) {}
  SymTensorField(Grid<T> a, Grid<T> b, Grid<T> c)
      : xx(std::move(a)), yy(std::move(b)), xy(std::move(c)) {
    if (xx.shape() != yy.shape() || xx.shape() != xy.shape())
      throw StructuralError("tensor field channels differ in shape");
  }

  const Shape& shape() const noexcept { return xx.shape(); }
  friend bool operator==(const SymTensorField&, const SymTensorField&) = default;
};

inline constexpr double kDefaultMapFloor = 1e-8;

/// True iff every entry is >= floor. Throws StructuralError when the map
/// holds non-finite values.
bool validate_param_map(const ScalarGrid& map, double floor = kDefaultMapFloor);

/// Strictly positive, finite per-pixel regularisation weight.
class ParamMap {
 public:
  /// Throws ValidationError when any entry is below `floor`.
  explicit ParamMap(ScalarGrid values, double floor = kDefaultMapFloor);

  static ParamMap constant(Shape shape, double value);

  const ScalarGrid& grid() const noexcept { return values_; }
  const Shape& shape() const noexcept { return values_.shape(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double operator()(std::size_t y, std::size_t x) const noexcept { return values_(y, x); }

  double min() const noexcept;
  double max() const noexcept;

 private:
  ScalarGrid values_;
};

void require_same_shape(const Shape& a, const Shape& b, const char* what);

// Elementwise helpers shared by the solvers and tests.

template <typename T>
double squared_norm(const Grid<T>& g) {
  double s = 0.0;
  for (const auto& v : g.values()) s += std::norm(v);
  return s;
}

template <typename T>
double norm(const Grid<T>& g) {
  return std::sqrt(squared_norm(g));
}

/// Euclidean distance between two grids of equal shape.
template <typename T>
double distance(const Grid<T>& a, const Grid<T>& b) {
  require_same_shape(a.shape(), b.shape(), "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

ScalarGrid magnitude(const ComplexGrid& g);
ComplexGrid to_complex(const ScalarGrid& g);

}  // namespace svtgv
