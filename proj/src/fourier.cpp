#include "svtgv/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <tuple>

#include <json.hpp>

#include "svtgv/tensor_io.hpp"

namespace svtgv {
namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(n, 1)))) {
    if (!ptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(ptr); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* ptr;
};

// The FFTW planner is not reentrant; execution with the new-array interface
// is. Plans are cached per (H, W, direction) for the lifetime of the process.
fftw_plan cached_plan(Shape shape, int sign) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(shape.height, shape.width, sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  FftwBuffer in(shape.size()), out(shape.size());
  fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(shape.height), static_cast<int>(shape.width),
                                    in.ptr, out.ptr, sign, FFTW_ESTIMATE);
  if (!plan) throw NumericalError("FFTW failed to create a plan for " + to_string(shape));
  plans.emplace(key, plan);
  return plan;
}

// Centered in, centered out: ifftshift -> DFT -> fftshift -> 1/sqrt(HW).
ComplexGrid centered_dft(const ComplexGrid& u, int sign) {
  const std::size_t h = u.height(), w = u.width();
  ComplexGrid out(u.shape());
  if (u.size() == 0) return out;
  FftwBuffer in(u.size()), res(u.size());
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const Complex& v = u((y + h / 2) % h, (x + w / 2) % w);
      in.ptr[y * w + x][0] = v.real();
      in.ptr[y * w + x][1] = v.imag();
    }
  }
  fftw_execute_dft(cached_plan(u.shape(), sign), in.ptr, res.ptr);
  const double s = 1.0 / std::sqrt(static_cast<double>(u.size()));
  for (std::size_t y = 0; y < h; ++y) {
    const std::size_t sy = (y + h - h / 2) % h;
    for (std::size_t x = 0; x < w; ++x) {
      const std::size_t sx = (x + w - w / 2) % w;
      const fftw_complex& r = res.ptr[sy * w + sx];
      out(y, x) = Complex(r[0] * s, r[1] * s);
    }
  }
  return out;
}

void require_mask_shape(const ComplexGrid& g, const SamplingMask& mask, const char* what) {
  require_same_shape(g.shape(), mask.shape, what);
  if (mask.kept.size() != mask.shape.size())
    throw StructuralError("sampling mask length does not match its shape");
}

}  // namespace

ComplexGrid fft2_unitary(const ComplexGrid& u) { return centered_dft(u, FFTW_FORWARD); }

ComplexGrid ifft2_unitary(const ComplexGrid& k) { return centered_dft(k, FFTW_BACKWARD); }

double SamplingMask::kept_fraction() const {
  if (kept.empty()) return 0.0;
  const auto n = std::count_if(kept.begin(), kept.end(), [](auto v) { return v != 0; });
  return static_cast<double>(n) / static_cast<double>(kept.size());
}

SamplingMask SamplingMask::full(Shape shape) {
  return SamplingMask{shape, std::vector<std::uint8_t>(shape.size(), 1), 1.0, 1.0, 0};
}

SamplingMask SamplingMask::empty(Shape shape) {
  return SamplingMask{shape, std::vector<std::uint8_t>(shape.size(), 0), 0.0, 0.0, 0};
}

SamplingMask make_mask(Shape shape, int acceleration, double center_fraction, std::uint64_t seed) {
  if (shape.height < 16 || shape.width < 16)
    throw StructuralError("sampling masks need a shape of at least 16x16, got " + to_string(shape));
  if (acceleration < 1) throw ConfigurationError("acceleration factor must be >= 1");
  if (!(center_fraction >= 0.0 && center_fraction <= 1.0))
    throw ConfigurationError("center fraction must lie in [0, 1]");

  const std::size_t w = shape.width;
  const auto budget = static_cast<std::size_t>(std::lround(double(w) / acceleration));
  const auto center = static_cast<std::size_t>(std::ceil(center_fraction * double(w) - 1e-9));
  if (center > budget) {
    throw ConfigurationError("central band of " + std::to_string(center) +
                             " columns exceeds the budget of " + std::to_string(budget) +
                             " columns for R = " + std::to_string(acceleration));
  }

  std::vector<std::uint8_t> column(w, 0);
  const std::size_t start = w / 2 - center / 2;
  for (std::size_t x = start; x < start + center; ++x) column[x] = 1;

  std::vector<std::size_t> candidates;
  for (std::size_t x = 0; x < w; ++x)
    if (!column[x]) candidates.push_back(x);
  std::vector<std::size_t> chosen;
  std::mt19937_64 rng(seed);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(chosen), budget - center, rng);
  for (auto x : chosen) column[x] = 1;

  SamplingMask mask{shape, std::vector<std::uint8_t>(shape.size()), double(acceleration),
                    center_fraction, seed};
  for (std::size_t y = 0; y < shape.height; ++y)
    for (std::size_t x = 0; x < w; ++x) mask.kept[y * w + x] = column[x];
  return mask;
}

ComplexGrid apply_mask(const ComplexGrid& k, const SamplingMask& mask) {
  require_mask_shape(k, mask, "apply_mask");
  ComplexGrid out = k;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!mask.is_kept(i)) out[i] = Complex{};
  return out;
}

ComplexGrid forward(const ComplexGrid& u, const SamplingMask& mask) {
  require_mask_shape(u, mask, "forward");
  return apply_mask(fft2_unitary(u), mask);
}

ComplexGrid adjoint(const ComplexGrid& f, const SamplingMask& mask) {
  require_mask_shape(f, mask, "adjoint");
  return ifft2_unitary(apply_mask(f, mask));
}

std::filesystem::path mask_sidecar_path(const std::filesystem::path& mask_path) {
  return std::filesystem::path(mask_path.string() + ".json");
}

void write_mask(const std::filesystem::path& path, const SamplingMask& mask) {
  ScalarGrid g(mask.shape);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = mask.is_kept(i) ? 1.0 : 0.0;
  write_grid(path, g);

  nlohmann::ordered_json meta;
  meta["R"] = static_cast<long long>(std::lround(mask.acceleration));
  meta["center_fraction"] = mask.center_fraction;
  meta["seed"] = mask.seed;
  const auto side = mask_sidecar_path(path);
  std::ofstream out(side, std::ios::trunc);
  if (!out) throw IoError("cannot open " + side.string() + " for writing");
  out << meta.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + side.string());
}

SamplingMask read_mask(const std::filesystem::path& path) {
  const ScalarGrid g = scalar_grid_from(read_tensor(path));
  SamplingMask mask{g.shape(), std::vector<std::uint8_t>(g.size()), 1.0, 0.0, 0};
  for (std::size_t i = 0; i < g.size(); ++i) mask.kept[i] = g[i] > 0.5 ? 1 : 0;
  const double frac = mask.kept_fraction();
  mask.acceleration = frac > 0.0 ? 1.0 / frac : 0.0;

  const auto side = mask_sidecar_path(path);
  if (std::filesystem::exists(side)) {
    std::ifstream in(side);
    if (!in) throw IoError("cannot open " + side.string());
    try {
      const auto meta = nlohmann::json::parse(in);
      mask.acceleration = meta.at("R").get<double>();
      mask.center_fraction = meta.at("center_fraction").get<double>();
      mask.seed = meta.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("invalid mask sidecar: ") + e.what(), 0);
    }
  }
  return mask;
}

}  // namespace svtgv
