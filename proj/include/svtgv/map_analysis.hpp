#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "svtgv/pdhg.hpp"

namespace svtgv {

/// Pointwise lambda0 / lambda1.
ScalarGrid ratio_map(const ParamMap& lambda0, const ParamMap& lambda1);
/// Pointwise log10 of a strictly positive grid, for display of ratio maps.
ScalarGrid log10_map(const ScalarGrid& positive);

/// Pixel coordinates: x is the column, y the row.
struct PixelPoint {
  double x = 0.0;
  double y = 0.0;
};

enum class ExtremumKind { Min, Max };

struct Extremum {
  std::size_t index = 0;  // sample index
  double position = 0.0;
  ExtremumKind kind = ExtremumKind::Max;
};

struct EdgeProfile {
  std::vector<double> positions;  // arc length from p0, strictly increasing
  std::vector<PixelPoint> points;
  std::vector<double> values;    // bilinear samples
  std::vector<double> smoothed;  // 3-tap moving average with replicated ends
  std::vector<Extremum> extrema; // alternating Min/Max
};

/// Samples `map` bilinearly at `samples` evenly spaced points from p0 to p1
/// and detects alternating extrema on the smoothed samples: an extremum is
/// reported once the signal has moved away from it by at least
/// prominence_fraction * (max(map) - min(map)). The trailing pending extremum
/// is reported too, so a high-low-high profile yields Max, Min, Max.
EdgeProfile extract_profile(const ScalarGrid& map, PixelPoint p0, PixelPoint p1,
                            std::size_t samples, double prominence_fraction = 0.05);
EdgeProfile extract_profile(const ParamMap& map, PixelPoint p0, PixelPoint p1,
                            std::size_t samples, double prominence_fraction = 0.05);

/// CSV `position,value,extremum_type` with extremum_type in {min, max, ""}.
void write_profile_csv(std::ostream& out, const EdgeProfile& profile);

/// l1-closest skew-affine field w.x = c1 - b y, w.y = c2 + b x.
struct KernelFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double b = 0.0;
  VectorField<double> field;
  double residual = 0.0;  // sum |v - w| over both channels
  int iterations = 0;
};

/// Iteratively reweighted least squares to l1 stationarity (relative
/// objective change < 1e-10, weight floor 1e-8). Throws NumericalError after
/// 500 iterations.
KernelFit ker_E_projection(const VectorField<double>& v);

/// sum |E w| / sum |D u| (off-diagonal counted twice); 0 when sum |D u| = 0.
/// Values near 0 mean the TGV regulariser acts like first-order TV there.
double tv_equivalence_score(const ScalarGrid& u, const VectorField<double>& w);
/// Same score with w the minimiser of the TGV inner problem for fixed u.
double tv_equivalence_score(const ScalarGrid& u, const ParamMap& lambda0, const ParamMap& lambda1,
                            const PdhgConfig& cfg);

}  // namespace svtgv
