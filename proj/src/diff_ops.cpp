#include "svtgv/diff_ops.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace svtgv {
namespace {

template <typename T>
Grid<T> dx(const Grid<T>& u) {
  const std::size_t h = u.height(), w = u.width();
  Grid<T> out(u.shape());
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x + 1 < w; ++x) out(y, x) = u(y, x + 1) - u(y, x);
  return out;
}

template <typename T>
Grid<T> dy(const Grid<T>& u) {
  const std::size_t h = u.height(), w = u.width();
  Grid<T> out(u.shape());
  for (std::size_t y = 0; y + 1 < h; ++y)
    for (std::size_t x = 0; x < w; ++x) out(y, x) = u(y + 1, x) - u(y, x);
  return out;
}

// -dx^T: out(x) = p(x)[x < W-1] - p(x-1)[x >= 1].
template <typename T>
void add_div_x(const Grid<T>& p, Grid<T>& out) {
  const std::size_t h = p.height(), w = p.width();
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      T v{};
      if (x + 1 < w) v += p(y, x);
      if (x >= 1) v -= p(y, x - 1);
      out(y, x) += v;
    }
  }
}

template <typename T>
void add_div_y(const Grid<T>& p, Grid<T>& out) {
  const std::size_t h = p.height(), w = p.width();
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      T v{};
      if (y + 1 < h) v += p(y, x);
      if (y >= 1) v -= p(y - 1, x);
      out(y, x) += v;
    }
  }
}

template <typename T>
double real_dot(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, Complex>) {
    return a.real() * b.real() + a.imag() * b.imag();
  } else {
    return a * b;
  }
}

// Applies K^T K to the stacked vector (u, w.x, w.y).
struct TgvVector {
  ScalarGrid u;
  VectorField<double> w;
};

TgvVector tgv_normal(const TgvVector& v) {
  VectorField<double> p = grad(v.u);
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    p.x[i] -= v.w.x[i];
    p.y[i] -= v.w.y[i];
  }
  const SymTensorField<double> q = sym_grad(v.w);
  TgvVector out{div(p), sym_div(q)};
  // K^T(p, q) = (D^T p, -p + E^T q) = (-div p, -p - sym_div q)
  for (std::size_t i = 0; i < out.u.size(); ++i) out.u[i] = -out.u[i];
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    out.w.x[i] = -p.x[i] - out.w.x[i];
    out.w.y[i] = -p.y[i] - out.w.y[i];
  }
  return out;
}

double squared_norm(const TgvVector& v) {
  return svtgv::squared_norm(v.u) + svtgv::squared_norm(v.w.x) + svtgv::squared_norm(v.w.y);
}

void scale(TgvVector& v, double s) {
  for (auto* g : {&v.u, &v.w.x, &v.w.y})
    for (auto& e : g->values()) e *= s;
}

// Checkerboard start with a small seeded perturbation: the top singular
// vectors of forward-difference operators are near-alternating patterns.
ScalarGrid power_start(Shape shape, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  ScalarGrid g(shape);
  for (std::size_t y = 0; y < shape.height; ++y)
    for (std::size_t x = 0; x < shape.width; ++x)
      g(y, x) = ((x + y) % 2 == 0 ? 1.0 : -1.0) + jitter(rng);
  return g;
}

}  // namespace

template <typename T>
VectorField<T> grad(const Grid<T>& u) {
  return VectorField<T>(dx(u), dy(u));
}

template <typename T>
Grid<T> div(const VectorField<T>& p) {
  Grid<T> out(p.shape());
  add_div_x(p.x, out);
  add_div_y(p.y, out);
  return out;
}

template <typename T>
SymTensorField<T> sym_grad(const VectorField<T>& w) {
  Grid<T> xy = dy(w.x);
  const Grid<T> wx = dx(w.y);
  for (std::size_t i = 0; i < xy.size(); ++i) xy[i] = (xy[i] + wx[i]) * 0.5;
  return SymTensorField<T>(dx(w.x), dy(w.y), std::move(xy));
}

template <typename T>
VectorField<T> sym_div(const SymTensorField<T>& q) {
  // <Ew, q> = <w.x, dx^T q.xx + dy^T q.xy> + <w.y, dy^T q.yy + dx^T q.xy>
  VectorField<T> out(q.shape());
  add_div_x(q.xx, out.x);
  add_div_y(q.xy, out.x);
  add_div_y(q.yy, out.y);
  add_div_x(q.xy, out.y);
  return out;
}

template <typename T>
double inner(const Grid<T>& a, const Grid<T>& b) {
  require_same_shape(a.shape(), b.shape(), "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += real_dot(a[i], b[i]);
  return s;
}

template <typename T>
double inner(const VectorField<T>& a, const VectorField<T>& b) {
  return inner(a.x, b.x) + inner(a.y, b.y);
}

template <typename T>
double inner(const SymTensorField<T>& a, const SymTensorField<T>& b) {
  return inner(a.xx, b.xx) + inner(a.yy, b.yy) + 2.0 * inner(a.xy, b.xy);
}

double operator_norm_estimate(Regulariser which, Shape shape) {
  constexpr int kMaxIterations = 10000;
  constexpr double kRelTol = 1e-9;
  if (shape.size() == 0) throw StructuralError("operator norm of an empty grid");

  std::mt19937_64 rng(0x5eed);
  TgvVector v{power_start(shape, rng), VectorField<double>(shape)};
  if (which == Regulariser::Tgv) v.w = VectorField<double>(power_start(shape, rng), power_start(shape, rng));
  scale(v, 1.0 / std::sqrt(squared_norm(v)));

  double previous = 0.0;
  for (int it = 0; it < kMaxIterations; ++it) {
    TgvVector next;
    if (which == Regulariser::Tv) {
      next.u = div(grad(v.u));
      for (auto& e : next.u.values()) e = -e;
      next.w = VectorField<double>(shape);
    } else {
      next = tgv_normal(v);
    }
    // ||K^T K v|| for unit v converges to ||K||^2.
    const double n2 = std::sqrt(squared_norm(next));
    if (n2 == 0.0) return 0.0;
    const double estimate = std::sqrt(n2);
    scale(next, 1.0 / n2);
    v = std::move(next);
    if (it > 0 && std::abs(estimate - previous) < kRelTol * estimate) return estimate;
    previous = estimate;
  }
  throw NumericalError("operator norm power iteration did not converge for shape " +
                       to_string(shape));
}

double operator_norm_squared_bound(Regulariser which, Shape shape) {
  auto axis = [](std::size_t n) {
    if (n <= 1) return 0.0;
    const double s = std::sin(std::numbers::pi * double(n - 1) / (2.0 * double(n)));
    return 4.0 * s * s;
  };
  const double a = axis(shape.width) + axis(shape.height);
  if (which == Regulariser::Tv) return a;
  return (2.0 * a + 1.0 + std::sqrt(1.0 + 4.0 * a)) / 2.0;
}

#define SVTGV_INSTANTIATE(T)                                                  \
  template VectorField<T> grad(const Grid<T>&);                               \
  template Grid<T> div(const VectorField<T>&);                                \
  template SymTensorField<T> sym_grad(const VectorField<T>&);                 \
  template VectorField<T> sym_div(const SymTensorField<T>&);                  \
  template double inner(const Grid<T>&, const Grid<T>&);                      \
  template double inner(const VectorField<T>&, const VectorField<T>&);        \
  template double inner(const SymTensorField<T>&, const SymTensorField<T>&);

SVTGV_INSTANTIATE(double)
SVTGV_INSTANTIATE(Complex)
#undef SVTGV_INSTANTIATE

}  // namespace svtgv
