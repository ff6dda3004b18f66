#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "svtgv/grid_search.hpp"
#include "svtgv/metrics.hpp"
#include "svtgv/phantoms.hpp"

using namespace svtgv;

namespace {

ScalarGrid analytic(std::size_t h, std::size_t w, double (*f)(double, double)) {
  ScalarGrid g(h, w);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) g(y, x) = f(double(y), double(x));
  return g;
}

GridSpec tv_grid(std::vector<double> l1) { return GridSpec{std::move(l1), {}}; }

}  // namespace

TEST(PsnrTest, KnownOffset) {
  const ScalarGrid ref(8, 8, 0.3), u(8, 8, 0.4);
  EXPECT_NEAR(psnr(u, ref, 1.0), 20.0, 1e-9);
  EXPECT_NEAR(psnr(u, ref, 2.0) - psnr(u, ref, 1.0), 20.0 * std::log10(2.0), 1e-9);
}

TEST(PsnrTest, IdenticalIsInfinite) {
  const ScalarGrid g(4, 4, 0.5);
  EXPECT_TRUE(std::isinf(psnr(g, g, 1.0)));
}

TEST(PsnrTest, RejectsBadInputs) {
  EXPECT_THROW(psnr(ScalarGrid(4, 4), ScalarGrid(4, 4), 0.0), ConfigurationError);
  EXPECT_THROW(psnr(ScalarGrid(4, 4), ScalarGrid(4, 5), 1.0), StructuralError);
}

TEST(SsimTest, SelfSimilarityIsOne) {
  const ScalarGrid g = square_phantom(32, 0.5);
  EXPECT_DOUBLE_EQ(ssim(g, g, 1.0), 1.0);
}

TEST(SsimTest, InvertedImageScoresLower) {
  const ScalarGrid ref = square_phantom(32, 0.5);
  ScalarGrid inv = ref;
  for (auto& v : inv.values()) v = 1.0 - v;
  EXPECT_LT(ssim(inv, ref, 1.0), 1.0);
}

TEST(SsimTest, SmallShiftStaysHigh) {
  const ScalarGrid ref = square_phantom(32, 0.5);
  ScalarGrid shifted = ref;
  for (auto& v : shifted.values()) v += 0.05;
  EXPECT_GT(ssim(shifted, ref, 1.0), 0.9);
}

TEST(SsimTest, MatchesReferenceImplementation) {
  // Reference values from scikit-image structural_similarity with
  // gaussian_weights, sigma 1.5 and population covariance.
  const ScalarGrid u = analytic(32, 40, [](double y, double x) { return 0.5 + 0.4 * std::sin(0.3 * x) * std::cos(0.2 * y); });
  const ScalarGrid r = analytic(32, 40, [](double y, double x) { return x * y / (31.0 * 39.0); });
  EXPECT_NEAR(ssim(u, r, 1.0), 0.07769866550852736, 1e-10);
  ScalarGrid sq = u;
  for (auto& v : sq.values()) v *= v;
  EXPECT_NEAR(ssim(u, sq, 2.0), 0.7559751640414676, 1e-10);
}

TEST(SsimTest, NeedsElevenByEleven) {
  EXPECT_THROW(ssim(ScalarGrid(10, 20), ScalarGrid(10, 20), 1.0), StructuralError);
  EXPECT_NO_THROW(ssim(ScalarGrid(11, 11), ScalarGrid(11, 11), 1.0));
}

TEST(NoiseTest, SampleStatistics) {
  const ScalarGrid z = add_gaussian_noise(ScalarGrid(512, 512, 0.0), 0.1, 1);
  double m = 0.0, s2 = 0.0;
  for (const double v : z.values()) m += v;
  m /= double(z.size());
  for (const double v : z.values()) s2 += (v - m) * (v - m);
  const double sd = std::sqrt(s2 / double(z.size() - 1));
  EXPECT_NEAR(m, 0.0, 1e-3);
  EXPECT_NEAR(sd, 0.1, 1e-3);
}

TEST(NoiseTest, ComplexNoiseHitsBothComponents) {
  const ComplexGrid z = add_gaussian_noise(ComplexGrid(256, 256), 0.2, 2);
  double re = 0.0, im = 0.0;
  for (const Complex v : z.values()) {
    re += v.real() * v.real();
    im += v.imag() * v.imag();
  }
  EXPECT_NEAR(std::sqrt(re / double(z.size())), 0.2, 3e-3);
  EXPECT_NEAR(std::sqrt(im / double(z.size())), 0.2, 3e-3);
}

TEST(NoiseTest, SeededAndDeterministic) {
  const ScalarGrid base(16, 16, 0.5);
  EXPECT_EQ(add_gaussian_noise(base, 0.1, 7), add_gaussian_noise(base, 0.1, 7));
  EXPECT_NE(add_gaussian_noise(base, 0.1, 7), add_gaussian_noise(base, 0.1, 8));
  EXPECT_EQ(add_gaussian_noise(base, 0.0, 7), base);
  EXPECT_THROW(add_gaussian_noise(base, -1.0, 7), ConfigurationError);
}

TEST(LogGridTest, EndpointsAndSpacing) {
  const auto g = log_grid(1e-3, 1.0, 25);
  ASSERT_EQ(g.size(), 25u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-3);
  EXPECT_DOUBLE_EQ(g.back(), 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_NEAR(g[i] / g[i - 1], std::pow(1e3, 1.0 / 24.0), 1e-12);
  EXPECT_EQ(log_grid(0.5, 0.5, 1), std::vector<double>{0.5});
  EXPECT_THROW(log_grid(0.0, 1.0, 3), ConfigurationError);
  EXPECT_EQ(GridSpec::tv_default().lambda1.size(), 25u);
  EXPECT_EQ(GridSpec::tgv_default().lambda0.size(), 15u);
}

TEST(GridSearchTest, TiesGoToSmallestWeights) {
  // A constant image is reproduced exactly for every weight, so every point ties.
  const ScalarGrid flat(16, 16, 0.5);
  GridSearchOptions opt;
  opt.config = PdhgConfig::denoise_tgv();
  opt.config->max_iters = 20;
  const GridSpec spec{{0.3, 0.01, 0.1}, {0.5, 0.02}};
  const auto r = grid_search_scalar(DenoiseProblem{flat}, flat, Regulariser::Tgv, spec, opt);
  ASSERT_EQ(r.points.size(), 6u);
  EXPECT_EQ(r.best_point().lambda1, 0.01);
  EXPECT_EQ(r.best_point().lambda0, 0.02);
}

TEST(GridSearchTest, BestIsIndependentOfGridOrder) {
  const ScalarGrid clean = square_phantom(32, 0.5);
  const DenoiseProblem p{add_gaussian_noise(clean, 0.1, 3)};
  std::vector<double> l1 = log_grid(1e-2, 0.5, 7);
  const auto a = grid_search_scalar(p, clean, Regulariser::Tv, tv_grid(l1));
  std::reverse(l1.begin(), l1.end());
  std::swap(l1[1], l1[4]);
  const auto b = grid_search_scalar(p, clean, Regulariser::Tv, tv_grid(l1));
  EXPECT_EQ(a.best_point().lambda1, b.best_point().lambda1);
  EXPECT_EQ(a.best_ssim(), b.best_ssim());
}

TEST(GridSearchTest, ThreadCountDoesNotChangeResults) {
  const ScalarGrid clean = square_phantom(24, 0.5);
  const DenoiseProblem p{add_gaussian_noise(clean, 0.1, 4)};
  const GridSpec spec{log_grid(1e-2, 0.5, 3), log_grid(1e-2, 0.5, 3)};
  GridSearchOptions one, many;
  one.threads = 1;
  many.threads = 3;
  const auto a = grid_search_scalar(p, clean, Regulariser::Tgv, spec, one);
  const auto b = grid_search_scalar(p, clean, Regulariser::Tgv, spec, many);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].ssim, b.points[i].ssim);
    EXPECT_EQ(a.points[i].psnr, b.points[i].psnr);
  }
  EXPECT_EQ(a.best, b.best);
}

TEST(GridSearchTest, SinglePoint) {
  const ScalarGrid clean = square_phantom(16, 0.5);
  const auto r = grid_search_scalar(DenoiseProblem{clean}, clean, Regulariser::Tv, tv_grid({0.1}));
  ASSERT_EQ(r.points.size(), 1u);
  EXPECT_EQ(r.best, 0u);
  EXPECT_FALSE(r.best_point().lambda0.has_value());
}

TEST(GridSearchTest, CleanDataPrefersWeakestRegularisation) {
  const ScalarGrid clean = square_phantom(32, 0.5);
  const auto r = grid_search_scalar(DenoiseProblem{clean}, clean, Regulariser::Tv, tv_grid(log_grid(1e-3, 1.0, 5)));
  EXPECT_EQ(r.best_point().lambda1, 1e-3);
}

TEST(GridSearchTest, EmptyGridIsConfigurationError) {
  const ScalarGrid clean = square_phantom(16, 0.5);
  EXPECT_THROW(grid_search_scalar(DenoiseProblem{clean}, clean, Regulariser::Tv, tv_grid({})), ConfigurationError);
  EXPECT_THROW(grid_search_scalar(DenoiseProblem{clean}, clean, Regulariser::Tgv, tv_grid({0.1})),
               ConfigurationError);
}

TEST(GridSearchTest, MriScoresMagnitude) {
  const ComplexGrid x = shepp_like_phantom(32);
  const ScalarGrid ref = magnitude(x);
  const auto mask = make_mask(x.shape(), 2, 0.1, 1);
  const MriProblem p{forward(x, mask), mask};
  const auto r = grid_search_scalar(p, ref, Regulariser::Tv, tv_grid(log_grid(1e-3, 0.1, 3)));
  const auto u = reconstruct_constant(p, Regulariser::Tv, 0.0, r.best_point().lambda1,
                                      default_config(Regulariser::Tv, p));
  EXPECT_NEAR(ssim(u, ref, *std::max_element(ref.values().begin(), ref.values().end())), r.best_ssim(), 1e-12);
}

TEST(GridSearchTest, CsvLayout) {
  GridSearchResult r;
  r.points = {GridPoint{std::nullopt, 0.1, 30.5, 0.75}, GridPoint{0.02, 0.5, 20.0, 0.5}};
  std::ostringstream out;
  write_grid_csv(out, r);
  EXPECT_EQ(out.str(), "lambda0,lambda1,psnr,ssim\n,0.1,30.5,0.75\n0.02,0.5,20,0.5\n");
}
