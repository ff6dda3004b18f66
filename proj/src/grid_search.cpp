#include "svtgv/grid_search.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "svtgv/metrics.hpp"

namespace svtgv {
namespace {

struct Candidate {
  std::optional<double> lambda0;
  double lambda1;
};

std::vector<Candidate> candidates(Regulariser model, const GridSpec& grid) {
  std::vector<Candidate> out;
  if (grid.lambda1.empty()) throw ConfigurationError("grid search needs at least one lambda1 value");
  if (model == Regulariser::Tv) {
    for (double l1 : grid.lambda1) out.push_back({std::nullopt, l1});
  } else {
    if (grid.lambda0.empty())
      throw ConfigurationError("TGV grid search needs at least one lambda0 value");
    for (double l1 : grid.lambda1)
      for (double l0 : grid.lambda0) out.push_back({l0, l1});
  }
  return out;
}

// Strictly better: higher SSIM, or equal SSIM with smaller (lambda1, lambda0).
bool better(const GridPoint& a, const GridPoint& b) {
  if (a.ssim != b.ssim) return a.ssim > b.ssim;
  if (a.lambda1 != b.lambda1) return a.lambda1 < b.lambda1;
  return a.lambda0.value_or(0.0) < b.lambda0.value_or(0.0);
}

template <typename Problem>
GridSearchResult run_search(const Problem& problem, const ScalarGrid& ref, Regulariser model,
                            const GridSpec& grid, const GridSearchOptions& options,
                            double default_range) {
  require_same_shape(ref.shape(), image_shape(problem), "grid search reference");
  const auto cands = candidates(model, grid);
  const PdhgConfig cfg = options.config.value_or(default_config(model, problem));
  const double range = options.data_range > 0.0 ? options.data_range : default_range;

  GridSearchResult result;
  result.points.resize(cands.size());
  auto evaluate = [&](std::size_t i) {
    const Candidate& c = cands[i];
    const double l0 = c.lambda0.value_or(c.lambda1);
    const PdhgConfig point_cfg = model == Regulariser::Tgv && options.balance_steps
                                     ? balanced_steps(cfg, l0, c.lambda1)
                                     : cfg;
    const ScalarGrid u = reconstruct_constant(problem, model, l0, c.lambda1, point_cfg);
    result.points[i] = GridPoint{c.lambda0, c.lambda1, psnr(u, ref, range), ssim(u, ref, range)};
  };

  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(cands.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < cands.size(); ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cands.size(); i = next++) {
          try {
            evaluate(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t i = 1; i < result.points.size(); ++i)
    if (better(result.points[i], result.points[result.best])) result.best = i;
  return result;
}

double max_value(const ScalarGrid& g) {
  double m = 0.0;
  for (double v : g.values()) m = std::max(m, v);
  return m;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigurationError("log grid needs 0 < lo <= hi");
  if (n == 0) throw ConfigurationError("log grid needs at least one point");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo), b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = std::pow(10.0, a + (b - a) * double(i) / double(n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

GridSpec GridSpec::tv_default() { return GridSpec{log_grid(1e-3, 1.0, 25), {}}; }

GridSpec GridSpec::tgv_default() { return GridSpec{log_grid(1e-3, 1.0, 15), log_grid(1e-3, 1.0, 15)}; }

PdhgConfig default_config(Regulariser model, const DenoiseProblem&) {
  return model == Regulariser::Tv ? PdhgConfig::denoise_tv() : PdhgConfig::denoise_tgv();
}

PdhgConfig default_config(Regulariser model, const MriProblem&) {
  return model == Regulariser::Tv ? PdhgConfig::mri_tv() : PdhgConfig::mri_tgv();
}

ScalarGrid reconstruct_constant(const DenoiseProblem& problem, Regulariser model, double lambda0,
                                double lambda1, const PdhgConfig& cfg) {
  const Shape s = image_shape(problem);
  if (model == Regulariser::Tv) return solve_tv(problem, ParamMap::constant(s, lambda1), cfg).u;
  return solve_tgv(problem, ParamMap::constant(s, lambda0), ParamMap::constant(s, lambda1), cfg).u;
}

ScalarGrid reconstruct_constant(const MriProblem& problem, Regulariser model, double lambda0,
                                double lambda1, const PdhgConfig& cfg) {
  const Shape s = image_shape(problem);
  if (model == Regulariser::Tv)
    return magnitude(solve_tv(problem, ParamMap::constant(s, lambda1), cfg).u);
  return magnitude(
      solve_tgv(problem, ParamMap::constant(s, lambda0), ParamMap::constant(s, lambda1), cfg).u);
}

GridSearchResult grid_search_scalar(const DenoiseProblem& problem, const ScalarGrid& ref,
                                    Regulariser model, const GridSpec& grid,
                                    const GridSearchOptions& options) {
  return run_search(problem, ref, model, grid, options, 1.0);
}

GridSearchResult grid_search_scalar(const MriProblem& problem, const ScalarGrid& ref,
                                    Regulariser model, const GridSpec& grid,
                                    const GridSearchOptions& options) {
  return run_search(problem, ref, model, grid, options, max_value(ref));
}

void write_grid_csv(std::ostream& out, const GridSearchResult& result) {
  out << "lambda0,lambda1,psnr,ssim\n";
  for (const auto& p : result.points) {
    if (p.lambda0) out << shortest(*p.lambda0);
    out << ',' << shortest(p.lambda1) << ',' << shortest(p.psnr) << ',' << shortest(p.ssim) << '\n';
  }
}

}  // namespace svtgv
