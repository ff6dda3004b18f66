#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "svtgv/diff_ops.hpp"
#include "svtgv/fourier.hpp"

using namespace svtgv;
namespace fs = std::filesystem;

namespace {

std::size_t kept_columns(const SamplingMask& m) {
  std::size_t n = 0;
  for (std::size_t x = 0; x < m.shape.width; ++x) n += m.is_kept(x);
  return n;
}

}  // namespace

TEST(FftTest, InversePairOnRandomGrid) {
  std::mt19937_64 rng(1);
  const ComplexGrid u = oracle::random_complex_grid(Shape{32, 32}, rng);
  EXPECT_LE(distance(ifft2_unitary(fft2_unitary(u)), u), 1e-10 * norm(u));
  EXPECT_LE(distance(fft2_unitary(ifft2_unitary(u)), u), 1e-10 * norm(u));
}

TEST(FftTest, Unitary) {
  std::mt19937_64 rng(2);
  for (const Shape s : {Shape{32, 32}, Shape{17, 12}, Shape{1, 5}}) {
    const ComplexGrid u = oracle::random_complex_grid(s, rng);
    EXPECT_NEAR(norm(fft2_unitary(u)), norm(u), 1e-10 * norm(u));
  }
}

TEST(FftTest, ConstantGridMapsToCentre) {
  const ComplexGrid k = fft2_unitary(ComplexGrid(4, 4, Complex(1.0, 0.0)));
  for (std::size_t y = 0; y < 4; ++y)
    for (std::size_t x = 0; x < 4; ++x) {
      if (y == 2 && x == 2)
        EXPECT_NEAR(std::abs(k(y, x)), 4.0, 1e-12);
      else
        EXPECT_NEAR(std::abs(k(y, x)), 0.0, 1e-12);
    }
}

TEST(FftTest, MatchesDenseCentredDft) {
  std::mt19937_64 rng(3);
  for (const Shape s : {Shape{4, 6}, Shape{5, 3}}) {
    const ComplexGrid u = oracle::random_complex_grid(s, rng);
    const Eigen::VectorXcd expect = oracle::dft_matrix(s) * oracle::flatten(u);
    const ComplexGrid k = fft2_unitary(u);
    for (std::size_t i = 0; i < k.size(); ++i)
      EXPECT_LE(std::abs(k[i] - expect[Eigen::Index(i)]), 1e-12);
  }
}

TEST(ForwardTest, FullMaskIsPlainFft) {
  std::mt19937_64 rng(4);
  const ComplexGrid u = oracle::random_complex_grid(Shape{16, 16}, rng);
  const auto full = SamplingMask::full(u.shape());
  EXPECT_EQ(forward(u, full), fft2_unitary(u));
  EXPECT_LE(distance(adjoint(forward(u, full), full), u), 1e-10 * norm(u));
}

TEST(ForwardTest, EmptyMaskGivesZero) {
  std::mt19937_64 rng(5);
  const ComplexGrid u = oracle::random_complex_grid(Shape{16, 16}, rng);
  const auto none = SamplingMask::empty(u.shape());
  EXPECT_EQ(norm(forward(u, none)), 0.0);
  EXPECT_EQ(norm(adjoint(u, none)), 0.0);
}

TEST(ForwardTest, ShapeMismatchIsStructural) {
  const auto m = SamplingMask::full(Shape{16, 16});
  EXPECT_THROW(forward(ComplexGrid(8, 8), m), StructuralError);
  EXPECT_THROW(adjoint(ComplexGrid(8, 8), m), StructuralError);
}

TEST(ForwardTest, AdjointIdentityOnRandomInputs) {
  std::mt19937_64 rng(6);
  for (const Shape s : {Shape{16, 16}, Shape{17, 20}, Shape{64, 64}}) {
    const auto mask = make_mask(s, 4, 0.08, 9);
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexGrid u = oracle::random_complex_grid(s, rng);
      const ComplexGrid f = oracle::random_complex_grid(s, rng);
      const double lhs = inner(forward(u, mask), f), rhs = inner(u, adjoint(f, mask));
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * norm(u) * norm(f));
    }
  }
}

TEST(ForwardTest, ForwardAdjointIsIdempotentProjection) {
  std::mt19937_64 rng(7);
  const Shape s{16, 16};
  const auto mask = make_mask(s, 4, 0.08, 1);
  const ComplexGrid k = oracle::random_complex_grid(s, rng);
  const ComplexGrid once = forward(adjoint(k, mask), mask);
  EXPECT_LE(distance(once, apply_mask(k, mask)), 1e-10 * norm(k));
  EXPECT_LE(distance(forward(adjoint(once, mask), mask), once), 1e-10 * norm(k));
}

TEST(MaskTest, UnitAccelerationKeepsEverything) {
  const auto m = make_mask(Shape{32, 32}, 1, 0.08, 3);
  EXPECT_EQ(kept_columns(m), 32u);
  EXPECT_DOUBLE_EQ(m.kept_fraction(), 1.0);
}

TEST(MaskTest, KeptFractionNearOneOverR) {
  const auto m = make_mask(Shape{320, 320}, 4, 0.08, 7);
  EXPECT_GE(m.kept_fraction(), 0.2);
  EXPECT_LE(m.kept_fraction(), 0.3);
}

TEST(MaskTest, SameSeedSameMask) {
  EXPECT_EQ(make_mask(Shape{64, 48}, 6, 0.08, 42), make_mask(Shape{64, 48}, 6, 0.08, 42));
  EXPECT_NE(make_mask(Shape{64, 48}, 6, 0.08, 42).kept, make_mask(Shape{64, 48}, 6, 0.08, 43).kept);
}

TEST(MaskTest, ColumnsAreWholeAndCentreIsKept) {
  for (int r = 4; r <= 8; ++r) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Shape s{40, 96};
      const auto m = make_mask(s, r, 0.08, seed);
      for (std::size_t x = 0; x < s.width; ++x)
        for (std::size_t y = 1; y < s.height; ++y) ASSERT_EQ(m.is_kept(y * s.width + x), m.is_kept(x));
      const auto band = static_cast<std::size_t>(std::ceil(0.08 * double(s.width) - 1e-9));
      const std::size_t start = s.width / 2 - band / 2;
      for (std::size_t x = start; x < start + band; ++x) EXPECT_TRUE(m.is_kept(x));
      const double frac = m.kept_fraction();
      EXPECT_GE(frac, 0.8 / r);
      EXPECT_LE(frac, 1.2 / r);
    }
  }
}

TEST(MaskTest, InfeasibleCentreBandIsConfigurationError) {
  EXPECT_THROW(make_mask(Shape{64, 64}, 8, 0.5, 1), ConfigurationError);
}

TEST(MaskTest, TooSmallShapeIsStructural) {
  EXPECT_THROW(make_mask(Shape{8, 8}, 4, 0.08, 1), StructuralError);
}

TEST(MaskTest, FileRoundTripWithSidecar) {
  const fs::path dir = fs::temp_directory_path() / "svtgv_fourier";
  fs::create_directories(dir);
  const fs::path p = dir / "mask.tns";
  const auto m = make_mask(Shape{32, 40}, 5, 0.1, 77);
  write_mask(p, m);
  ASSERT_TRUE(fs::exists(mask_sidecar_path(p)));
  std::ifstream in(mask_sidecar_path(p));
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j.at("R").get<int>(), 5);
  EXPECT_DOUBLE_EQ(j.at("center_fraction").get<double>(), 0.1);
  EXPECT_EQ(j.at("seed").get<std::uint64_t>(), 77u);
  EXPECT_EQ(read_mask(p), m);
}
