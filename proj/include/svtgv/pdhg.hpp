#pragma once

#include <optional>
#include <vector>

#include "svtgv/diff_ops.hpp"
#include "svtgv/fourier.hpp"
#include "svtgv/grid.hpp"

namespace svtgv {

/// Gaussian denoising: A = Id, data f is the noisy image.
struct DenoiseProblem {
  ScalarGrid data;
};

/// Single-coil Cartesian MRI: A = P F, data are k-space samples on the full
/// grid with zeros at unacquired locations.
struct MriProblem {
  ComplexGrid kspace;
  SamplingMask mask;
};

template <typename P>
struct ProblemTraits;
template <>
struct ProblemTraits<DenoiseProblem> {
  using Scalar = double;
};
template <>
struct ProblemTraits<MriProblem> {
  using Scalar = Complex;
};
template <typename P>
using ImageOf = Grid<typename ProblemTraits<P>::Scalar>;

Shape image_shape(const DenoiseProblem& p);
Shape image_shape(const MriProblem& p);

/// A^* f: the default primal initialisation and the zero-filled image for MRI.
ScalarGrid initial_image(const DenoiseProblem& p);
ComplexGrid initial_image(const MriProblem& p);

/// 1/2 ||A u - f||^2.
double fidelity(const DenoiseProblem& p, const ScalarGrid& u);
double fidelity(const MriProblem& p, const ComplexGrid& u);

/// Logistic function; the default extrapolation is sigmoid(10).
double sigmoid(double y);

struct PdhgConfig {
  double sigma = 0.0;
  double tau = 0.0;
  double theta = 1.0;
  int max_iters = 256;
  double tol = 0.0;  // relative primal change; 0 runs exactly max_iters
  /// Skips the sigma * tau * ||K||^2 <= 1 check. Only for step sizes that were
  /// obtained by training rather than from the convergence condition.
  bool trained_steps = false;

  /// sigma = tau = sigmoid(10) / sqrt(13), theta = sigmoid(10).
  static PdhgConfig denoise_tv();
  /// sigma = tau = 0.29, theta = sigmoid(10).
  static PdhgConfig denoise_tgv();
  /// sigma = 0.3414, tau = 0.3255, theta = 1.
  static PdhgConfig mri_tv();
  /// sigma = tau = 1/sqrt(12) - 1e-6, theta = 1.
  static PdhgConfig mri_tgv();
  /// sigma = 0.1695, tau = 0.6553, theta = 1; sets trained_steps.
  static PdhgConfig mri_tgv_trained();
};

/// Throws ConfigurationError unless 0 < theta <= 1, sigma, tau > 0,
/// max_iters >= 0, tol >= 0 and (unless trained_steps)
/// sigma * tau * ||K||^2 <= 1 + 1e-9 with the closed-form norm bound.
void check_config(const PdhgConfig& cfg, Regulariser which, Shape shape);

struct SolveReport {
  int iterations = 0;
  double final_energy = 0.0;
  std::vector<double> relative_change;  // one entry per iteration
  double wall_seconds = 0.0;
};

template <typename T>
struct TvSolution {
  Grid<T> u;
  SolveReport report;
};

template <typename T>
struct TgvSolution {
  Grid<T> u;
  VectorField<T> w;
  SolveReport report;
};

template <typename T>
struct TgvStart {
  Grid<T> u;
  VectorField<T> w;
};

// ---- weighted TV ---------------------------------------------------------

/// Sum_x lambda(x) (|Du.x| + |Du.y|).
template <typename T>
double tv_term(const Grid<T>& u, const ParamMap& lambda);

/// 1/2 ||A u - f||^2 + TV_lambda(u).
double tv_energy(const DenoiseProblem& p, const ScalarGrid& u, const ParamMap& lambda);
double tv_energy(const MriProblem& p, const ComplexGrid& u, const ParamMap& lambda);

/// Chambolle-Pock iteration for weighted anisotropic TV:
///   p   <- proj_lambda(p + sigma grad(u_bar))
///   u+  <- prox_{tau F}(u + tau div p)
///   u_bar <- u+ + theta (u+ - u)
/// starting from u = init (default A^* f), p = 0.
TvSolution<double> solve_tv(const DenoiseProblem& p, const ParamMap& lambda, const PdhgConfig& cfg,
                            const std::optional<ScalarGrid>& init = std::nullopt);
TvSolution<Complex> solve_tv(const MriProblem& p, const ParamMap& lambda, const PdhgConfig& cfg,
                             const std::optional<ComplexGrid>& init = std::nullopt);

// ---- weighted TGV --------------------------------------------------------

/// Sum lambda1 (|(Du - w).x| + |(Du - w).y|) + Sum lambda0 (|Ew.xx| + |Ew.yy| + 2 |Ew.xy|).
template <typename T>
double tgv_term(const Grid<T>& u, const VectorField<T>& w, const ParamMap& lambda0,
                const ParamMap& lambda1);

/// Sum (|e.xx| + |e.yy| + 2 |e.xy|).
template <typename T>
double sym_l1(const SymTensorField<T>& e);
/// Sum (|v.x| + |v.y|).
template <typename T>
double vector_l1(const VectorField<T>& v);

double tgv_energy(const DenoiseProblem& p, const ScalarGrid& u, const VectorField<double>& w,
                  const ParamMap& lambda0, const ParamMap& lambda1);
double tgv_energy(const MriProblem& p, const ComplexGrid& u, const VectorField<Complex>& w,
                  const ParamMap& lambda0, const ParamMap& lambda1);

/// Product-space Chambolle-Pock iteration for weighted anisotropic TGV:
///   p  <- proj_lambda1(p + sigma (grad u_bar - w_bar))
///   q  <- proj_lambda0(q + sigma sym_grad w_bar)
///   u+ <- prox_{tau F}(u + tau div p)
///   w+ <- w + tau (p + sym_div q)
///   (u_bar, w_bar) <- (u+, w+) + theta ((u+, w+) - (u, w))
/// starting from u = A^* f, w = 0, p = 0, q = 0 unless `init` is given.
TgvSolution<double> solve_tgv(const DenoiseProblem& p, const ParamMap& lambda0,
                              const ParamMap& lambda1, const PdhgConfig& cfg,
                              const std::optional<TgvStart<double>>& init = std::nullopt);
TgvSolution<Complex> solve_tgv(const MriProblem& p, const ParamMap& lambda0,
                               const ParamMap& lambda1, const PdhgConfig& cfg,
                               const std::optional<TgvStart<Complex>>& init = std::nullopt);

/// Exactly `iterations` TGV steps (tol = 0) from the default start; returns u.
/// This is the fixed-depth map an unrolled network differentiates through.
ScalarGrid unrolled_apply(const DenoiseProblem& p, const ParamMap& lambda0, const ParamMap& lambda1,
                          int iterations, PdhgConfig cfg);
ComplexGrid unrolled_apply(const MriProblem& p, const ParamMap& lambda0, const ParamMap& lambda1,
                           int iterations, PdhgConfig cfg);

/// Rescales sigma up and tau down by r = clamp(10 lambda0 / lambda1, 1, 1000),
/// keeping sigma * tau fixed. Large lambda0 / lambda1 ratios otherwise leave
/// the second-order dual far from its bound for thousands of iterations.
PdhgConfig balanced_steps(PdhgConfig cfg, double lambda0, double lambda1);

/// For fixed u, minimises Sum lambda1 |Du - w| + Sum lambda0 |Ew| over w by
/// running the TGV iteration with the primal image frozen.
VectorField<double> optimal_tgv_field(const ScalarGrid& u, const ParamMap& lambda0,
                                      const ParamMap& lambda1, const PdhgConfig& cfg);

}  // namespace svtgv
