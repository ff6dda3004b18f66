#include <cmath>
#include <sstream>

#include "pdhg_internal.hpp"

namespace svtgv {

namespace detail {

void validate_problem(const DenoiseProblem& p) {
  if (p.data.size() == 0) throw StructuralError("denoising data is empty");
  if (!p.data.all_finite()) throw StructuralError("denoising data contains non-finite samples");
}

void validate_problem(const MriProblem& p) {
  if (p.kspace.size() == 0) throw StructuralError("k-space data is empty");
  require_same_shape(p.kspace.shape(), p.mask.shape, "MRI problem");
  if (p.mask.kept.size() != p.mask.shape.size())
    throw StructuralError("sampling mask length does not match its shape");
  if (!p.kspace.all_finite()) throw StructuralError("k-space data contains non-finite samples");
}

}  // namespace detail

Shape image_shape(const DenoiseProblem& p) { return p.data.shape(); }
Shape image_shape(const MriProblem& p) { return p.kspace.shape(); }

ScalarGrid initial_image(const DenoiseProblem& p) { return p.data; }
ComplexGrid initial_image(const MriProblem& p) { return adjoint(p.kspace, p.mask); }

double fidelity(const DenoiseProblem& p, const ScalarGrid& u) {
  require_same_shape(u.shape(), p.data.shape(), "fidelity");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - p.data[i]) * (u[i] - p.data[i]);
  return 0.5 * s;
}

double fidelity(const MriProblem& p, const ComplexGrid& u) {
  require_same_shape(u.shape(), p.kspace.shape(), "fidelity");
  const ComplexGrid k = forward(u, p.mask);
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += std::norm(k[i] - p.kspace[i]);
  return 0.5 * s;
}

double sigmoid(double y) { return 1.0 / (1.0 + std::exp(-y)); }

PdhgConfig PdhgConfig::denoise_tv() {
  const double step = sigmoid(10.0) / std::sqrt(13.0);
  return PdhgConfig{step, step, sigmoid(10.0)};
}

PdhgConfig PdhgConfig::denoise_tgv() { return PdhgConfig{0.29, 0.29, sigmoid(10.0)}; }

PdhgConfig PdhgConfig::mri_tv() { return PdhgConfig{0.3414, 0.3255, 1.0}; }

PdhgConfig PdhgConfig::mri_tgv() {
  const double step = 1.0 / std::sqrt(12.0) - 1e-6;
  return PdhgConfig{step, step, 1.0};
}

PdhgConfig PdhgConfig::mri_tgv_trained() {
  PdhgConfig cfg{0.1695, 0.6553, 1.0};
  cfg.trained_steps = true;
  return cfg;
}

void check_config(const PdhgConfig& cfg, Regulariser which, Shape shape) {
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma))
    throw ConfigurationError("sigma must be positive and finite");
  if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau))
    throw ConfigurationError("tau must be positive and finite");
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0))
    throw ConfigurationError("theta must satisfy 0 < theta <= 1");
  if (cfg.max_iters < 0) throw ConfigurationError("max_iters must be non-negative");
  if (!(cfg.tol >= 0.0)) throw ConfigurationError("tol must be non-negative");
  if (cfg.trained_steps) return;
  const double k2 = operator_norm_squared_bound(which, shape);
  const double product = cfg.sigma * cfg.tau * k2;
  if (product > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "step sizes violate sigma * tau * ||K||^2 <= 1: " << cfg.sigma << " * " << cfg.tau
        << " * " << k2 << " = " << product;
    throw ConfigurationError(msg.str());
  }
}

template <typename T>
double tv_term(const Grid<T>& u, const ParamMap& lambda) {
  require_same_shape(u.shape(), lambda.shape(), "tv_term");
  const VectorField<T> g = grad(u);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += lambda[i] * (std::abs(g.x[i]) + std::abs(g.y[i]));
  return s;
}

template double tv_term(const Grid<double>&, const ParamMap&);
template double tv_term(const Grid<Complex>&, const ParamMap&);

double tv_energy(const DenoiseProblem& p, const ScalarGrid& u, const ParamMap& lambda) {
  return fidelity(p, u) + tv_term(u, lambda);
}

double tv_energy(const MriProblem& p, const ComplexGrid& u, const ParamMap& lambda) {
  return fidelity(p, u) + tv_term(u, lambda);
}

namespace {

template <typename Problem>
TvSolution<typename ProblemTraits<Problem>::Scalar> run_tv(
    const Problem& problem, const ParamMap& lambda, const PdhgConfig& cfg,
    const std::optional<ImageOf<Problem>>& init) {
  using T = typename ProblemTraits<Problem>::Scalar;
  detail::Stopwatch clock;
  detail::validate_problem(problem);
  const Shape shape = image_shape(problem);
  require_same_shape(lambda.shape(), shape, "solve_tv map");
  check_config(cfg, Regulariser::Tv, shape);
  const auto data_term = detail::fidelity_of(problem);

  Grid<T> u = init ? *init : initial_image(problem);
  require_same_shape(u.shape(), shape, "solve_tv initialisation");
  Grid<T> u_bar = u;
  VectorField<T> p(shape);

  SolveReport report;
  report.relative_change.reserve(static_cast<std::size_t>(cfg.max_iters));
  for (int it = 0; it < cfg.max_iters; ++it) {
    VectorField<T> g = grad(u_bar);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      g.x[i] = p.x[i] + cfg.sigma * g.x[i];
      g.y[i] = p.y[i] + cfg.sigma * g.y[i];
    }
    p = project_weighted_linf(std::move(g), lambda);

    Grid<T> v = div(p);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] + cfg.tau * v[i];
    Grid<T> next = data_term.prox(v, cfg.tau);

    const double change = detail::relative_change(next, u);
    for (std::size_t i = 0; i < u.size(); ++i) u_bar[i] = next[i] + cfg.theta * (next[i] - u[i]);
    u = std::move(next);
    report.relative_change.push_back(change);
    report.iterations = it + 1;
    if (cfg.tol > 0.0 && change < cfg.tol) break;
  }
  report.final_energy = data_term.energy(u) + tv_term(u, lambda);
  report.wall_seconds = clock.seconds();
  return {std::move(u), std::move(report)};
}

}  // namespace

TvSolution<double> solve_tv(const DenoiseProblem& p, const ParamMap& lambda, const PdhgConfig& cfg,
                            const std::optional<ScalarGrid>& init) {
  return run_tv(p, lambda, cfg, init);
}

TvSolution<Complex> solve_tv(const MriProblem& p, const ParamMap& lambda, const PdhgConfig& cfg,
                             const std::optional<ComplexGrid>& init) {
  return run_tv(p, lambda, cfg, init);
}

}  // namespace svtgv
