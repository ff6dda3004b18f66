#include <algorithm>
#include <cmath>

#include "pdhg_internal.hpp"

namespace svtgv {

template <typename T>
double sym_l1(const SymTensorField<T>& e) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.xx.size(); ++i)
    s += std::abs(e.xx[i]) + std::abs(e.yy[i]) + 2.0 * std::abs(e.xy[i]);
  return s;
}

template <typename T>
double vector_l1(const VectorField<T>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.x.size(); ++i) s += std::abs(v.x[i]) + std::abs(v.y[i]);
  return s;
}

template <typename T>
double tgv_term(const Grid<T>& u, const VectorField<T>& w, const ParamMap& lambda0,
                const ParamMap& lambda1) {
  require_same_shape(u.shape(), w.shape(), "tgv_term field");
  require_same_shape(u.shape(), lambda0.shape(), "tgv_term lambda0");
  require_same_shape(u.shape(), lambda1.shape(), "tgv_term lambda1");
  const VectorField<T> g = grad(u);
  const SymTensorField<T> e = sym_grad(w);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += lambda1[i] * (std::abs(g.x[i] - w.x[i]) + std::abs(g.y[i] - w.y[i]));
    s += lambda0[i] * (std::abs(e.xx[i]) + std::abs(e.yy[i]) + 2.0 * std::abs(e.xy[i]));
  }
  return s;
}

template double sym_l1(const SymTensorField<double>&);
template double sym_l1(const SymTensorField<Complex>&);
template double vector_l1(const VectorField<double>&);
template double vector_l1(const VectorField<Complex>&);
template double tgv_term(const Grid<double>&, const VectorField<double>&, const ParamMap&,
                         const ParamMap&);
template double tgv_term(const Grid<Complex>&, const VectorField<Complex>&, const ParamMap&,
                         const ParamMap&);

double tgv_energy(const DenoiseProblem& p, const ScalarGrid& u, const VectorField<double>& w,
                  const ParamMap& lambda0, const ParamMap& lambda1) {
  return fidelity(p, u) + tgv_term(u, w, lambda0, lambda1);
}

double tgv_energy(const MriProblem& p, const ComplexGrid& u, const VectorField<Complex>& w,
                  const ParamMap& lambda0, const ParamMap& lambda1) {
  return fidelity(p, u) + tgv_term(u, w, lambda0, lambda1);
}

namespace {

// One dual step shared by the full solver and the frozen-image variant.
template <typename T>
void dual_step(const Grid<T>& u_bar, const VectorField<T>& w_bar, const ParamMap& lambda0,
               const ParamMap& lambda1, double sigma, VectorField<T>& p, SymTensorField<T>& q) {
  VectorField<T> g = grad(u_bar);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    g.x[i] = p.x[i] + sigma * (g.x[i] - w_bar.x[i]);
    g.y[i] = p.y[i] + sigma * (g.y[i] - w_bar.y[i]);
  }
  p = project_weighted_linf(std::move(g), lambda1);

  SymTensorField<T> e = sym_grad(w_bar);
  for (std::size_t i = 0; i < e.xx.size(); ++i) {
    e.xx[i] = q.xx[i] + sigma * e.xx[i];
    e.yy[i] = q.yy[i] + sigma * e.yy[i];
    e.xy[i] = q.xy[i] + sigma * e.xy[i];
  }
  q = project_weighted_linf(std::move(e), lambda0);
}

// w+ = w + tau (p + sym_div q); w_bar = w+ + theta (w+ - w); w = w+.
template <typename T>
void field_step(const VectorField<T>& p, const SymTensorField<T>& q, double tau, double theta,
                VectorField<T>& w, VectorField<T>& w_bar) {
  const VectorField<T> sd = sym_div(q);
  for (std::size_t i = 0; i < w.x.size(); ++i) {
    const T nx = w.x[i] + tau * (p.x[i] + sd.x[i]);
    const T ny = w.y[i] + tau * (p.y[i] + sd.y[i]);
    w_bar.x[i] = nx + theta * (nx - w.x[i]);
    w_bar.y[i] = ny + theta * (ny - w.y[i]);
    w.x[i] = nx;
    w.y[i] = ny;
  }
}

void check_maps(const ParamMap& lambda0, const ParamMap& lambda1, Shape shape) {
  require_same_shape(lambda0.shape(), shape, "TGV lambda0");
  require_same_shape(lambda1.shape(), shape, "TGV lambda1");
}

template <typename Problem>
TgvSolution<typename ProblemTraits<Problem>::Scalar> run_tgv(
    const Problem& problem, const ParamMap& lambda0, const ParamMap& lambda1,
    const PdhgConfig& cfg, const std::optional<TgvStart<typename ProblemTraits<Problem>::Scalar>>& init) {
  using T = typename ProblemTraits<Problem>::Scalar;
  detail::Stopwatch clock;
  detail::validate_problem(problem);
  const Shape shape = image_shape(problem);
  check_maps(lambda0, lambda1, shape);
  check_config(cfg, Regulariser::Tgv, shape);
  const auto data_term = detail::fidelity_of(problem);

  Grid<T> u = init ? init->u : initial_image(problem);
  VectorField<T> w = init ? init->w : VectorField<T>(shape);
  require_same_shape(u.shape(), shape, "solve_tgv initial image");
  require_same_shape(w.shape(), shape, "solve_tgv initial field");
  Grid<T> u_bar = u;
  VectorField<T> w_bar = w;
  VectorField<T> p(shape);
  SymTensorField<T> q(shape);

  SolveReport report;
  report.relative_change.reserve(static_cast<std::size_t>(cfg.max_iters));
  for (int it = 0; it < cfg.max_iters; ++it) {
    dual_step(u_bar, w_bar, lambda0, lambda1, cfg.sigma, p, q);

    Grid<T> v = div(p);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] + cfg.tau * v[i];
    Grid<T> next = data_term.prox(v, cfg.tau);
    field_step(p, q, cfg.tau, cfg.theta, w, w_bar);

    const double change = detail::relative_change(next, u);
    for (std::size_t i = 0; i < u.size(); ++i) u_bar[i] = next[i] + cfg.theta * (next[i] - u[i]);
    u = std::move(next);
    report.relative_change.push_back(change);
    report.iterations = it + 1;
    if (cfg.tol > 0.0 && change < cfg.tol) break;
  }
  report.final_energy = data_term.energy(u) + tgv_term(u, w, lambda0, lambda1);
  report.wall_seconds = clock.seconds();
  return {std::move(u), std::move(w), std::move(report)};
}

}  // namespace

TgvSolution<double> solve_tgv(const DenoiseProblem& p, const ParamMap& lambda0,
                              const ParamMap& lambda1, const PdhgConfig& cfg,
                              const std::optional<TgvStart<double>>& init) {
  return run_tgv(p, lambda0, lambda1, cfg, init);
}

TgvSolution<Complex> solve_tgv(const MriProblem& p, const ParamMap& lambda0,
                               const ParamMap& lambda1, const PdhgConfig& cfg,
                               const std::optional<TgvStart<Complex>>& init) {
  return run_tgv(p, lambda0, lambda1, cfg, init);
}

ScalarGrid unrolled_apply(const DenoiseProblem& p, const ParamMap& lambda0, const ParamMap& lambda1,
                          int iterations, PdhgConfig cfg) {
  if (iterations < 1) throw ConfigurationError("unrolled depth must be at least 1");
  cfg.max_iters = iterations;
  cfg.tol = 0.0;
  return solve_tgv(p, lambda0, lambda1, cfg).u;
}

ComplexGrid unrolled_apply(const MriProblem& p, const ParamMap& lambda0, const ParamMap& lambda1,
                           int iterations, PdhgConfig cfg) {
  if (iterations < 1) throw ConfigurationError("unrolled depth must be at least 1");
  cfg.max_iters = iterations;
  cfg.tol = 0.0;
  return solve_tgv(p, lambda0, lambda1, cfg).u;
}

PdhgConfig balanced_steps(PdhgConfig cfg, double lambda0, double lambda1) {
  if (!(lambda0 > 0.0) || !(lambda1 > 0.0))
    throw ConfigurationError("step balancing needs positive weights");
  const double r = std::clamp(10.0 * lambda0 / lambda1, 1.0, 1000.0);
  cfg.sigma *= r;
  cfg.tau /= r;
  return cfg;
}

VectorField<double> optimal_tgv_field(const ScalarGrid& u, const ParamMap& lambda0,
                                      const ParamMap& lambda1, const PdhgConfig& cfg) {
  if (!u.all_finite()) throw StructuralError("image contains non-finite samples");
  check_maps(lambda0, lambda1, u.shape());
  check_config(cfg, Regulariser::Tgv, u.shape());
  const Shape shape = u.shape();
  VectorField<double> w(shape), w_bar(shape), p(shape);
  SymTensorField<double> q(shape);
  for (int it = 0; it < cfg.max_iters; ++it) {
    dual_step(u, w_bar, lambda0, lambda1, cfg.sigma, p, q);
    const VectorField<double> previous = w;
    field_step(p, q, cfg.tau, cfg.theta, w, w_bar);
    if (cfg.tol > 0.0) {
      const double dx = distance(w.x, previous.x), dy = distance(w.y, previous.y);
      const double base = std::sqrt(squared_norm(previous.x) + squared_norm(previous.y));
      if (std::sqrt(dx * dx + dy * dy) / std::max(base, detail::kChangeGuard) < cfg.tol) break;
    }
  }
  return w;
}

}  // namespace svtgv
