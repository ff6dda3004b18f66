#include "svtgv/phantoms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace svtgv {
namespace {

struct Ellipse {
  double intensity, a, b, x0, y0, phi_deg;
};

// Modified Shepp-Logan head (Toft's contrast-enhanced intensities).
constexpr std::array<Ellipse, 10> kHead{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
    {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
    {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
    {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
    {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
    {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
    {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
    {0.1, 0.023, 0.023, 0.0, -0.606, 0.0},
    {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
}};

// Pixel centre mapped to [-1, 1], y pointing up.
double unit_coord(std::size_t i, std::size_t n) { return (2.0 * double(i) + 1.0) / double(n) - 1.0; }

}  // namespace

ScalarGrid square_phantom(std::size_t size, double inner_fraction, double lo, double hi) {
  if (size < 16) throw ConfigurationError("square phantom needs size >= 16");
  if (!(inner_fraction > 0.0 && inner_fraction < 1.0))
    throw ConfigurationError("inner fraction must lie in (0, 1)");
  const auto side = static_cast<std::size_t>(std::lround(inner_fraction * double(size)));
  const std::size_t start = (size - side) / 2;
  ScalarGrid out(size, size, lo);
  for (std::size_t y = start; y < start + side; ++y)
    for (std::size_t x = start; x < start + side; ++x) out(y, x) = hi;
  return out;
}

ScalarGrid ramp_phantom(std::size_t size, double g_row, double g_col, double offset) {
  ScalarGrid out(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j)
      out(i, j) = std::clamp(offset + g_row * double(i) + g_col * double(j), 0.0, 1.0);
  return out;
}

ComplexGrid smooth_phase(std::size_t size) {
  ComplexGrid out(size, size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const double x = unit_coord(j, size), y = -unit_coord(i, size);
      const double phi = std::numbers::pi * (0.3 * x + 0.2 * y + 0.15 * (x * x - y * y));
      out(i, j) = std::polar(1.0, phi);
    }
  return out;
}

ComplexGrid shepp_like_phantom(std::size_t size) {
  if (size < 32) throw ConfigurationError("shepp-like phantom needs size >= 32");
  ComplexGrid out = smooth_phase(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const double x = unit_coord(j, size), y = -unit_coord(i, size);
      double m = 0.0;
      for (const auto& e : kHead) {
        const double t = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0, dy = y - e.y0;
        const double u = dx * std::cos(t) + dy * std::sin(t);
        const double v = -dx * std::sin(t) + dy * std::cos(t);
        if ((u * u) / (e.a * e.a) + (v * v) / (e.b * e.b) <= 1.0) m += e.intensity;
      }
      out(i, j) *= std::clamp(m, 0.0, 1.0);
    }
  return out;
}

}  // namespace svtgv
