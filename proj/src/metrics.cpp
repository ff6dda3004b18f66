#include "svtgv/metrics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace svtgv {
namespace {

constexpr int kWindow = 11;
constexpr double kWindowSd = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;

// Separable normalised 1D Gaussian; the 2D window is its outer product.
std::array<double, kWindow> gaussian_taps() {
  std::array<double, kWindow> taps{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    taps[i] = std::exp(-d * d / (2.0 * kWindowSd * kWindowSd));
    sum += taps[i];
  }
  for (auto& t : taps) t /= sum;
  return taps;
}

// 'valid' correlation with the separable window.
ScalarGrid filter_valid(const ScalarGrid& g, const std::array<double, kWindow>& taps) {
  const std::size_t h = g.height(), w = g.width();
  const std::size_t oh = h - kWindow + 1, ow = w - kWindow + 1;
  ScalarGrid rows(Shape{h, ow});
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += taps[k] * g(y, x + k);
      rows(y, x) = s;
    }
  ScalarGrid out(Shape{oh, ow});
  for (std::size_t y = 0; y < oh; ++y)
    for (std::size_t x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += taps[k] * rows(y + k, x);
      out(y, x) = s;
    }
  return out;
}

void check_range(double data_range) {
  if (!(data_range > 0.0) || !std::isfinite(data_range))
    throw ConfigurationError("data range must be positive and finite");
}

}  // namespace

double psnr(const ScalarGrid& u, const ScalarGrid& ref, double data_range) {
  require_same_shape(u.shape(), ref.shape(), "psnr");
  check_range(data_range);
  if (u.size() == 0) throw StructuralError("psnr of empty grids");
  double sse = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sse += (u[i] - ref[i]) * (u[i] - ref[i]);
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(u.size());
  return 10.0 * std::log10(data_range * data_range / mse);
}

double ssim(const ScalarGrid& u, const ScalarGrid& ref, double data_range) {
  require_same_shape(u.shape(), ref.shape(), "ssim");
  check_range(data_range);
  if (u.height() < kWindow || u.width() < kWindow)
    throw StructuralError("ssim needs grids of at least 11x11, got " + to_string(u.shape()));

  const auto taps = gaussian_taps();
  ScalarGrid uu(u.shape()), rr(u.shape()), ur(u.shape());
  for (std::size_t i = 0; i < u.size(); ++i) {
    uu[i] = u[i] * u[i];
    rr[i] = ref[i] * ref[i];
    ur[i] = u[i] * ref[i];
  }
  const ScalarGrid mu_u = filter_valid(u, taps), mu_r = filter_valid(ref, taps);
  const ScalarGrid e_uu = filter_valid(uu, taps), e_rr = filter_valid(rr, taps),
                   e_ur = filter_valid(ur, taps);

  const double c1 = (kK1 * data_range) * (kK1 * data_range);
  const double c2 = (kK2 * data_range) * (kK2 * data_range);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_u.size(); ++i) {
    const double mu = mu_u[i], mr = mu_r[i];
    const double var_u = e_uu[i] - mu * mu;
    const double var_r = e_rr[i] - mr * mr;
    const double cov = e_ur[i] - mu * mr;
    total += ((2.0 * mu * mr + c1) * (2.0 * cov + c2)) /
             ((mu * mu + mr * mr + c1) * (var_u + var_r + c2));
  }
  return total / static_cast<double>(mu_u.size());
}

ScalarGrid add_gaussian_noise(const ScalarGrid& u, double sd, std::uint64_t seed) {
  if (!(sd >= 0.0)) throw ConfigurationError("noise standard deviation must be non-negative");
  if (sd == 0.0) return u;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  ScalarGrid out = u;
  for (auto& v : out.values()) v += noise(rng);
  return out;
}

ComplexGrid add_gaussian_noise(const ComplexGrid& u, double sd, std::uint64_t seed) {
  if (!(sd >= 0.0)) throw ConfigurationError("noise standard deviation must be non-negative");
  if (sd == 0.0) return u;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  ComplexGrid out = u;
  for (auto& v : out.values()) {
    const double re = noise(rng);
    const double im = noise(rng);
    v += Complex(re, im);
  }
  return out;
}

}  // namespace svtgv
