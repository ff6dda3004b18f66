// Command-line front end: synth, corrupt, solve, gridsearch, metrics, analyze.
// Exit codes: 0 success, 2 usage, 3 configuration or math, 4 I/O.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "svtgv/grid_search.hpp"
#include "svtgv/map_analysis.hpp"
#include "svtgv/metrics.hpp"
#include "svtgv/pdhg.hpp"
#include "svtgv/phantoms.hpp"
#include "svtgv/tensor_io.hpp"

namespace {

using namespace svtgv;
namespace fs = std::filesystem;

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitIo = 4;

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

// Reads a real image; complex inputs are reduced to magnitude.
ScalarGrid read_real(const fs::path& path) {
  const Tensor t = read_tensor(path);
  return t.dtype == DType::Complex64 ? magnitude(complex_grid_from(t)) : scalar_grid_from(t);
}

struct SolverFlags {
  std::optional<double> sigma, tau, theta, tol;
  std::optional<int> iters;
  bool trained_steps = false;

  void add(CLI::App* app) {
    app->add_option("--sigma", sigma, "dual step size");
    app->add_option("--tau", tau, "primal step size");
    app->add_option("--theta", theta, "extrapolation parameter in (0, 1]");
    app->add_option("--iters", iters, "iteration count N");
    app->add_option("--tol", tol, "relative change stopping tolerance (0 = run N iterations)");
    app->add_flag("--trained-steps", trained_steps,
                  "accept step sizes that violate the convergence condition");
  }

  PdhgConfig apply(PdhgConfig cfg) const {
    if (sigma) cfg.sigma = *sigma;
    if (tau) cfg.tau = *tau;
    if (theta) cfg.theta = *theta;
    if (iters) cfg.max_iters = *iters;
    if (tol) cfg.tol = *tol;
    if (trained_steps) cfg.trained_steps = true;
    return cfg;
  }
};

struct MapFlags {
  std::optional<double> lambda, lambda0, lambda1;
  std::string map, map0, map1;

  void add(CLI::App* app) {
    app->add_option("--lambda", lambda, "constant TV weight");
    app->add_option("--lambda0", lambda0, "constant TGV second-order weight");
    app->add_option("--lambda1", lambda1, "constant TGV first-order weight");
    app->add_option("--map", map, "TV weight map (TNS)")->check(CLI::ExistingFile);
    app->add_option("--map0", map0, "TGV lambda0 map (TNS)")->check(CLI::ExistingFile);
    app->add_option("--map1", map1, "TGV lambda1 map (TNS)")->check(CLI::ExistingFile);
  }

  static ParamMap pick(const std::optional<double>& value, const std::string& path, Shape shape,
                       const char* what) {
    if (!path.empty() && value)
      throw CLI::ValidationError(std::string(what) + ": give a constant or a map, not both");
    if (!path.empty()) {
      ParamMap m(scalar_grid_from(read_tensor(path)));
      require_same_shape(m.shape(), shape, what);
      return m;
    }
    if (!value) throw CLI::RequiredError(what);
    return ParamMap::constant(shape, *value);
  }
};

// ---- synth -----------------------------------------------------------------

void register_synth(CLI::App& app) {
  auto* cmd = app.add_subcommand("synth", "generate a phantom");
  struct Opts {
    std::string kind, out;
    std::size_t size = 64;
    std::uint64_t seed = 0;
    double inner = 0.5, lo = 0.0, hi = 1.0, g_row = 0.01, g_col = 0.005, offset = 0.2;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("kind", o->kind, "square | ramp | shepp")
      ->required()
      ->check(CLI::IsMember({"square", "ramp", "shepp"}));
  cmd->add_option("--size", o->size, "image side length");
  cmd->add_option("--seed", o->seed, "accepted for interface uniformity; phantoms are fixed");
  cmd->add_option("--inner-frac", o->inner, "square: inner square side fraction");
  cmd->add_option("--lo", o->lo, "square: background value");
  cmd->add_option("--hi", o->hi, "square: foreground value");
  cmd->add_option("--g-row", o->g_row, "ramp: slope along rows");
  cmd->add_option("--g-col", o->g_col, "ramp: slope along columns");
  cmd->add_option("--offset", o->offset, "ramp: value at the origin");
  cmd->add_option("--out", o->out, "output TNS")->required();
  cmd->callback([o] {
    if (o->kind == "square")
      write_grid(o->out, square_phantom(o->size, o->inner, o->lo, o->hi));
    else if (o->kind == "ramp")
      write_grid(o->out, ramp_phantom(o->size, o->g_row, o->g_col, o->offset));
    else
      write_grid(o->out, shepp_like_phantom(o->size));
  });
}

// ---- corrupt ---------------------------------------------------------------

void register_corrupt(CLI::App& app) {
  auto* cmd = app.add_subcommand("corrupt", "add noise (denoise) or simulate an MRI scan (mri)");
  struct Opts {
    std::string mode, in, out, mask;
    double sd = 0.0, center = 0.08;
    int accel = 4;
    std::uint64_t seed = 0;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("mode", o->mode, "denoise | mri")
      ->required()
      ->check(CLI::IsMember({"denoise", "mri"}));
  cmd->add_option("input", o->in, "clean image (TNS)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--sd", o->sd, "noise standard deviation");
  cmd->add_option("--seed", o->seed, "random seed");
  cmd->add_option("--accel", o->accel, "mri: acceleration factor R");
  cmd->add_option("--center-frac", o->center, "mri: fully sampled central fraction");
  cmd->add_option("--out", o->out, "noisy image or k-space (TNS)")->required();
  cmd->add_option("--mask", o->mask, "mri: output mask (TNS + .json sidecar)");
  cmd->callback([o] {
    if (o->mode == "denoise") {
      write_grid(o->out, add_gaussian_noise(read_real(o->in), o->sd, o->seed));
      return;
    }
    if (o->mask.empty()) throw CLI::RequiredError("--mask");
    const ComplexGrid clean = complex_grid_from(read_tensor(o->in));
    const SamplingMask mask = make_mask(clean.shape(), o->accel, o->center, o->seed);
    // The noise stream is decoupled from the mask stream.
    const ComplexGrid k = add_gaussian_noise(fft2_unitary(clean), o->sd, o->seed + 1);
    write_grid(o->out, apply_mask(k, mask));
    write_mask(o->mask, mask);
  });
}

// ---- solve -----------------------------------------------------------------

template <typename Problem>
void run_solve(const Problem& problem, const std::string& model, const MapFlags& maps,
               const SolverFlags& flags, const std::string& out, const std::string& report,
               const std::string& preview) {
  const Shape s = image_shape(problem);
  const Regulariser which = model == "tv" ? Regulariser::Tv : Regulariser::Tgv;
  const PdhgConfig cfg = flags.apply(default_config(which, problem));
  SolveReport rep;
  ImageOf<Problem> u;
  if (which == Regulariser::Tv) {
    auto sol = solve_tv(problem, MapFlags::pick(maps.lambda, maps.map, s, "--lambda/--map"), cfg);
    u = std::move(sol.u);
    rep = std::move(sol.report);
  } else {
    auto sol = solve_tgv(problem, MapFlags::pick(maps.lambda0, maps.map0, s, "--lambda0/--map0"),
                         MapFlags::pick(maps.lambda1, maps.map1, s, "--lambda1/--map1"), cfg);
    u = std::move(sol.u);
    rep = std::move(sol.report);
  }
  write_grid(out, u);
  if (!preview.empty()) {
    if constexpr (std::is_same_v<Problem, MriProblem>)
      write_pgm(preview, normalize_for_display(magnitude(u)));
    else
      write_pgm(preview, u);
  }
  if (!report.empty()) {
    nlohmann::ordered_json j;
    j["iterations"] = rep.iterations;
    j["final_energy"] = rep.final_energy;
    if (rep.relative_change.empty())
      j["relative_change_last"] = nullptr;
    else
      j["relative_change_last"] = rep.relative_change.back();
    open_out(report) << j.dump(2) << '\n';
  }
}

void register_solve(CLI::App& app) {
  auto* cmd = app.add_subcommand("solve", "reconstruct with weighted TV or TGV");
  struct Opts {
    std::string model, problem, data, mask, out, report, preview;
    MapFlags maps;
    SolverFlags flags;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("model", o->model, "tv | tgv")->required()->check(CLI::IsMember({"tv", "tgv"}));
  cmd->add_option("problem", o->problem, "denoise | mri")
      ->required()
      ->check(CLI::IsMember({"denoise", "mri"}));
  cmd->add_option("data", o->data, "noisy image or k-space (TNS)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--mask", o->mask, "mri: sampling mask (TNS)")->check(CLI::ExistingFile);
  o->maps.add(cmd);
  o->flags.add(cmd);
  cmd->add_option("--out", o->out, "solution (TNS)")->required();
  cmd->add_option("--report", o->report, "JSON report path");
  cmd->add_option("--preview", o->preview, "PGM preview path");
  cmd->callback([o] {
    if (o->problem == "denoise") {
      run_solve(DenoiseProblem{read_real(o->data)}, o->model, o->maps, o->flags, o->out, o->report,
                o->preview);
    } else {
      if (o->mask.empty()) throw CLI::RequiredError("--mask");
      run_solve(MriProblem{complex_grid_from(read_tensor(o->data)), read_mask(o->mask)}, o->model,
                o->maps, o->flags, o->out, o->report, o->preview);
    }
  });
}

// ---- gridsearch ------------------------------------------------------------

void register_gridsearch(CLI::App& app) {
  auto* cmd = app.add_subcommand("gridsearch", "scalar parameter search scored by SSIM");
  struct Opts {
    std::string model, problem, data, ref, mask, out;
    std::size_t n1 = 0, n0 = 0;
    double lo = 1e-3, hi = 1.0, range = 0.0;
    SolverFlags flags;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("model", o->model, "tv | tgv")->required()->check(CLI::IsMember({"tv", "tgv"}));
  cmd->add_option("problem", o->problem, "denoise | mri")
      ->required()
      ->check(CLI::IsMember({"denoise", "mri"}));
  cmd->add_option("data", o->data, "noisy image or k-space (TNS)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--ref", o->ref, "ground truth (TNS)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mask", o->mask, "mri: sampling mask (TNS)")->check(CLI::ExistingFile);
  cmd->add_option("--n1", o->n1, "lambda1 grid points (default 25 for tv, 15 for tgv)");
  cmd->add_option("--n0", o->n0, "lambda0 grid points (default 15)");
  cmd->add_option("--lo", o->lo, "smallest grid value");
  cmd->add_option("--hi", o->hi, "largest grid value");
  cmd->add_option("--range", o->range, "SSIM/PSNR data range (0 = automatic)");
  o->flags.add(cmd);
  cmd->add_option("--out", o->out, "CSV output")->required();
  cmd->callback([o] {
    const Regulariser which = o->model == "tv" ? Regulariser::Tv : Regulariser::Tgv;
    GridSpec grid = which == Regulariser::Tv ? GridSpec::tv_default() : GridSpec::tgv_default();
    grid.lambda1 = log_grid(o->lo, o->hi, o->n1 ? o->n1 : grid.lambda1.size());
    if (which == Regulariser::Tgv) grid.lambda0 = log_grid(o->lo, o->hi, o->n0 ? o->n0 : 15);
    const ScalarGrid ref = read_real(o->ref);
    GridSearchOptions opts;
    opts.data_range = o->range;
    GridSearchResult res;
    if (o->problem == "denoise") {
      const DenoiseProblem p{read_real(o->data)};
      opts.config = o->flags.apply(default_config(which, p));
      res = grid_search_scalar(p, ref, which, grid, opts);
    } else {
      if (o->mask.empty()) throw CLI::RequiredError("--mask");
      const MriProblem p{complex_grid_from(read_tensor(o->data)), read_mask(o->mask)};
      opts.config = o->flags.apply(default_config(which, p));
      res = grid_search_scalar(p, ref, which, grid, opts);
    }
    auto out = open_out(o->out);
    write_grid_csv(out, res);
    const GridPoint& b = res.best_point();
    std::cout << "best";
    if (b.lambda0) std::cout << " lambda0=" << fmt(*b.lambda0);
    std::cout << " lambda1=" << fmt(b.lambda1) << " psnr=" << fmt(b.psnr) << " ssim=" << fmt(b.ssim)
              << '\n';
  });
}

// ---- metrics ---------------------------------------------------------------

void register_metrics(CLI::App& app) {
  auto* cmd = app.add_subcommand("metrics", "PSNR and SSIM of an image against a reference");
  struct Opts {
    std::string u, ref;
    double range = 0.0;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("image", o->u, "image (TNS)")->required()->check(CLI::ExistingFile);
  cmd->add_option("reference", o->ref, "reference (TNS)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--range", o->range, "data range (0 = max of the reference, at least 1e-12)");
  cmd->callback([o] {
    const ScalarGrid u = read_real(o->u), ref = read_real(o->ref);
    double range = o->range;
    if (range == 0.0) {
      for (double v : ref.values()) range = std::max(range, v);
      range = std::max(range, 1e-12);
    }
    std::cout << "psnr=" << fmt(psnr(u, ref, range)) << " ssim=" << fmt(ssim(u, ref, range)) << '\n';
  });
}

// ---- analyze ---------------------------------------------------------------

PixelPoint parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("point", "expected x,y but got " + s);
  try {
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("point", "expected x,y but got " + s);
  }
}

void register_analyze(CLI::App& app) {
  auto* cmd = app.add_subcommand("analyze", "parameter-map analysis");
  cmd->require_subcommand(1);

  struct RatioOpts {
    std::string map0, map1, out;
    bool log = false;
  };
  auto r = std::make_shared<RatioOpts>();
  auto* ratio = cmd->add_subcommand("ratio", "pointwise lambda0 / lambda1");
  ratio->add_option("--map0", r->map0)->required()->check(CLI::ExistingFile);
  ratio->add_option("--map1", r->map1)->required()->check(CLI::ExistingFile);
  ratio->add_option("--out", r->out, "ratio map (TNS)")->required();
  ratio->add_flag("--log", r->log, "write log10 of the ratio");
  ratio->callback([r] {
    const ScalarGrid q = ratio_map(ParamMap(scalar_grid_from(read_tensor(r->map0))),
                                   ParamMap(scalar_grid_from(read_tensor(r->map1))));
    write_grid(r->out, r->log ? log10_map(q) : q);
  });

  struct ProfileOpts {
    std::string map, out, p0, p1;
    std::size_t samples = 64;
    double prominence = 0.05;
  };
  auto p = std::make_shared<ProfileOpts>();
  auto* profile = cmd->add_subcommand("profile", "line profile with extrema");
  profile->add_option("--map", p->map)->required()->check(CLI::ExistingFile);
  profile->add_option("--p0", p->p0, "start point x,y (column,row)")->required();
  profile->add_option("--p1", p->p1, "end point x,y (column,row)")->required();
  profile->add_option("--samples", p->samples, "number of samples");
  profile->add_option("--prominence", p->prominence, "fraction of the map range");
  profile->add_option("--out", p->out, "CSV output")->required();
  profile->callback([p] {
    const EdgeProfile prof = extract_profile(scalar_grid_from(read_tensor(p->map)),
                                             parse_point(p->p0), parse_point(p->p1), p->samples,
                                             p->prominence);
    auto out = open_out(p->out);
    write_profile_csv(out, prof);
  });

  struct ScoreOpts {
    std::string image, w;
    MapFlags maps;
    SolverFlags flags;
  };
  auto s = std::make_shared<ScoreOpts>();
  auto* score = cmd->add_subcommand("score", "TV-equivalence score of a TGV solution");
  score->add_option("image", s->image, "image u (TNS)")->required()->check(CLI::ExistingFile);
  score->add_option("--w", s->w, "vector field w [2,H,W] (TNS); computed when absent")
      ->check(CLI::ExistingFile);
  s->maps.add(score);
  s->flags.add(score);
  score->callback([s] {
    const ScalarGrid u = read_real(s->image);
    double value = 0.0;
    if (!s->w.empty()) {
      value = tv_equivalence_score(u, vector_field_from(read_tensor(s->w)));
    } else {
      const Shape sh = u.shape();
      const PdhgConfig cfg = s->flags.apply(PdhgConfig::denoise_tgv());
      value = tv_equivalence_score(u, MapFlags::pick(s->maps.lambda0, s->maps.map0, sh, "--lambda0/--map0"),
                                   MapFlags::pick(s->maps.lambda1, s->maps.map1, sh, "--lambda1/--map1"),
                                   cfg);
    }
    std::cout << "score=" << fmt(value) << '\n';
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatially varying TV and TGV regularisation toolkit", "svtgv"};
  app.require_subcommand(1);
  register_synth(app);
  register_corrupt(app);
  register_solve(app);
  register_gridsearch(app);
  register_metrics(app);
  register_analyze(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return 0;
}
