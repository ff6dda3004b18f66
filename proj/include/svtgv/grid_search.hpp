#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "svtgv/pdhg.hpp"

namespace svtgv {

/// n log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Scalar parameter candidates. TV uses `lambda1` only; TGV evaluates the
/// full product lambda0 x lambda1.
struct GridSpec {
  std::vector<double> lambda1;
  std::vector<double> lambda0;

  static GridSpec tv_default();   // 25 log points in [1e-3, 1]
  static GridSpec tgv_default();  // 15 x 15 log points in [1e-3, 1]^2
};

struct GridPoint {
  std::optional<double> lambda0;  // empty for TV
  double lambda1 = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
};

struct GridSearchResult {
  std::vector<GridPoint> points;  // in evaluation order
  std::size_t best = 0;

  const GridPoint& best_point() const { return points.at(best); }
  double best_ssim() const { return best_point().ssim; }
};

struct GridSearchOptions {
  std::optional<PdhgConfig> config;  // default: the model/problem defaults
  double data_range = 0.0;           // 0: 1 for denoising, max(ref) for MRI
  unsigned threads = 0;              // 0: hardware concurrency
  /// TGV only: rebalance sigma and tau per grid point with balanced_steps.
  bool balance_steps = false;
};

/// Solves with constant maps at each grid point and scores SSIM against
/// `ref` (MRI reconstructions are scored on magnitude). The best point has
/// maximal SSIM; ties go to the smaller lambda1, then the smaller lambda0.
GridSearchResult grid_search_scalar(const DenoiseProblem& problem, const ScalarGrid& ref,
                                    Regulariser model, const GridSpec& grid,
                                    const GridSearchOptions& options = {});
GridSearchResult grid_search_scalar(const MriProblem& problem, const ScalarGrid& ref,
                                    Regulariser model, const GridSpec& grid,
                                    const GridSearchOptions& options = {});

/// Default solver settings for a model on a problem kind.
PdhgConfig default_config(Regulariser model, const DenoiseProblem&);
PdhgConfig default_config(Regulariser model, const MriProblem&);

/// Reconstruction with constant parameters, as a real image (magnitude for MRI).
/// lambda0 is ignored for TV.
ScalarGrid reconstruct_constant(const DenoiseProblem& problem, Regulariser model, double lambda0,
                                double lambda1, const PdhgConfig& cfg);
ScalarGrid reconstruct_constant(const MriProblem& problem, Regulariser model, double lambda0,
                                double lambda1, const PdhgConfig& cfg);

/// CSV with header `lambda0,lambda1,psnr,ssim`; lambda0 is empty for TV.
void write_grid_csv(std::ostream& out, const GridSearchResult& result);

}  // namespace svtgv
