#include "svtgv/map_analysis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>

namespace svtgv {

ScalarGrid ratio_map(const ParamMap& lambda0, const ParamMap& lambda1) {
  require_same_shape(lambda0.shape(), lambda1.shape(), "ratio_map");
  ScalarGrid out(lambda0.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lambda0[i] / lambda1[i];
  return out;
}

ScalarGrid log10_map(const ScalarGrid& positive) {
  ScalarGrid out(positive.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(positive[i] > 0.0)) throw ValidationError("log10_map needs strictly positive values");
    out[i] = std::log10(positive[i]);
  }
  return out;
}

namespace {

bool inside(const ScalarGrid& g, PixelPoint p) {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= double(g.width() - 1) && p.y <= double(g.height() - 1);
}

double bilinear(const ScalarGrid& g, PixelPoint p) {
  const auto x0 = static_cast<std::size_t>(std::floor(p.x));
  const auto y0 = static_cast<std::size_t>(std::floor(p.y));
  const std::size_t x1 = std::min(x0 + 1, g.width() - 1);
  const std::size_t y1 = std::min(y0 + 1, g.height() - 1);
  const double fx = p.x - double(x0), fy = p.y - double(y0);
  const double top = (1.0 - fx) * g(y0, x0) + fx * g(y0, x1);
  const double bottom = (1.0 - fx) * g(y1, x0) + fx * g(y1, x1);
  return (1.0 - fy) * top + fy * bottom;
}

std::vector<Extremum> detect_extrema(const std::vector<double>& s,
                                     const std::vector<double>& positions, double delta) {
  std::vector<Extremum> out;
  if (s.empty() || !(delta > 0.0)) return out;
  auto emit = [&](std::size_t i, ExtremumKind k) { out.push_back({i, positions[i], k}); };

  int trend = 0;  // +1 climbing towards a max, -1 descending towards a min
  std::size_t cmax = 0, cmin = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (trend == 0) {
      if (s[i] > s[cmax]) cmax = i;
      if (s[i] < s[cmin]) cmin = i;
      if (s[cmax] - s[i] >= delta) {
        emit(cmax, ExtremumKind::Max);
        trend = -1;
        cmin = i;
      } else if (s[i] - s[cmin] >= delta) {
        emit(cmin, ExtremumKind::Min);
        trend = +1;
        cmax = i;
      }
    } else if (trend < 0) {
      if (s[i] < s[cmin]) {
        cmin = i;
      } else if (s[i] - s[cmin] >= delta) {
        emit(cmin, ExtremumKind::Min);
        trend = +1;
        cmax = i;
      }
    } else {
      if (s[i] > s[cmax]) {
        cmax = i;
      } else if (s[cmax] - s[i] >= delta) {
        emit(cmax, ExtremumKind::Max);
        trend = -1;
        cmin = i;
      }
    }
  }
  // The last excursion already exceeded delta when the trend was set.
  if (trend < 0) emit(cmin, ExtremumKind::Min);
  if (trend > 0) emit(cmax, ExtremumKind::Max);
  return out;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

EdgeProfile extract_profile(const ScalarGrid& map, PixelPoint p0, PixelPoint p1,
                            std::size_t samples, double prominence_fraction) {
  if (map.size() == 0) throw StructuralError("cannot profile an empty map");
  if (!inside(map, p0) || !inside(map, p1))
    throw StructuralError("profile endpoints must lie inside the " + to_string(map.shape()) + " grid");
  if (samples < 2) throw ConfigurationError("a profile needs at least 2 samples");
  if (!(prominence_fraction >= 0.0)) throw ConfigurationError("prominence fraction must be >= 0");
  const double length = std::hypot(p1.x - p0.x, p1.y - p0.y);
  if (!(length > 0.0)) throw StructuralError("profile endpoints coincide");

  EdgeProfile prof;
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = double(k) / double(samples - 1);
    const PixelPoint p{p0.x + t * (p1.x - p0.x), p0.y + t * (p1.y - p0.y)};
    prof.points.push_back(p);
    prof.positions.push_back(t * length);
    prof.values.push_back(bilinear(map, p));
  }
  const std::size_t n = prof.values.size();
  prof.smoothed.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double left = prof.values[k == 0 ? 0 : k - 1];
    const double right = prof.values[k + 1 == n ? k : k + 1];
    prof.smoothed[k] = (left + prof.values[k] + right) / 3.0;
  }

  const auto [lo, hi] = std::minmax_element(map.values().begin(), map.values().end());
  prof.extrema = detect_extrema(prof.smoothed, prof.positions, prominence_fraction * (*hi - *lo));
  return prof;
}

EdgeProfile extract_profile(const ParamMap& map, PixelPoint p0, PixelPoint p1, std::size_t samples,
                            double prominence_fraction) {
  return extract_profile(map.grid(), p0, p1, samples, prominence_fraction);
}

void write_profile_csv(std::ostream& out, const EdgeProfile& profile) {
  out << "position,value,extremum_type\n";
  std::size_t e = 0;
  for (std::size_t k = 0; k < profile.values.size(); ++k) {
    out << shortest(profile.positions[k]) << ',' << shortest(profile.values[k]) << ',';
    if (e < profile.extrema.size() && profile.extrema[e].index == k) {
      out << (profile.extrema[e].kind == ExtremumKind::Max ? "max" : "min");
      ++e;
    }
    out << '\n';
  }
}

KernelFit ker_E_projection(const VectorField<double>& v) {
  constexpr int kMaxIterations = 500;
  constexpr double kRelTol = 1e-10;
  constexpr double kWeightFloor = 1e-8;
  if (!v.x.all_finite() || !v.y.all_finite())
    throw StructuralError("field contains non-finite samples");

  const std::size_t h = v.shape().height, w = v.shape().width;
  // residual rows: channel x -> v.x - (c1 - b y), channel y -> v.y - (c2 + b x)
  auto objective = [&](const Eigen::Vector3d& t) {
    double s = 0.0;
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        s += std::abs(v.x(y, x) - (t[0] - t[2] * double(y)));
        s += std::abs(v.y(y, x) - (t[1] + t[2] * double(x)));
      }
    return s;
  };
  auto weighted_solve = [&](const Eigen::Vector3d* previous) {
    Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        const Eigen::Vector3d ax(1.0, 0.0, -double(y));
        const Eigen::Vector3d ay(0.0, 1.0, double(x));
        double wx = 1.0, wy = 1.0;
        if (previous) {
          wx = 1.0 / std::max(std::abs(v.x(y, x) - ax.dot(*previous)), kWeightFloor);
          wy = 1.0 / std::max(std::abs(v.y(y, x) - ay.dot(*previous)), kWeightFloor);
        }
        normal += wx * ax * ax.transpose() + wy * ay * ay.transpose();
        rhs += wx * v.x(y, x) * ax + wy * v.y(y, x) * ay;
      }
    return Eigen::Vector3d(normal.ldlt().solve(rhs));
  };

  double scale = 0.0;
  for (std::size_t i = 0; i < v.x.size(); ++i) scale += std::abs(v.x[i]) + std::abs(v.y[i]);
  const double floor = 1e-12 * (1.0 + scale);

  Eigen::Vector3d t = weighted_solve(nullptr);
  double current = objective(t);
  int it = 0;
  while (current > floor) {
    if (++it > kMaxIterations)
      throw NumericalError("IRLS for the kernel projection did not converge in 500 iterations");
    const Eigen::Vector3d next = weighted_solve(&t);
    const double value = objective(next);
    // A step that does not decrease the objective means the weight floor
    // dominates; the previous iterate is as stationary as IRLS gets.
    if (value > current) break;
    const bool done = current - value <= kRelTol * current;
    t = next;
    current = value;
    if (done) break;
  }

  KernelFit fit;
  fit.c1 = t[0];
  fit.c2 = t[1];
  fit.b = t[2];
  fit.iterations = it;
  fit.field = VectorField<double>(v.shape());
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      fit.field.x(y, x) = fit.c1 - fit.b * double(y);
      fit.field.y(y, x) = fit.c2 + fit.b * double(x);
    }
  fit.residual = objective(t);
  return fit;
}

double tv_equivalence_score(const ScalarGrid& u, const VectorField<double>& w) {
  require_same_shape(u.shape(), w.shape(), "tv_equivalence_score");
  const double first = vector_l1(grad(u));
  if (first == 0.0) return 0.0;
  return sym_l1(sym_grad(w)) / first;
}

double tv_equivalence_score(const ScalarGrid& u, const ParamMap& lambda0, const ParamMap& lambda1,
                            const PdhgConfig& cfg) {
  if (vector_l1(grad(u)) == 0.0) return 0.0;
  return tv_equivalence_score(u, optimal_tgv_field(u, lambda0, lambda1, cfg));
}

}  // namespace svtgv
