#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "svtgv/fourier.hpp"
#include "svtgv/pdhg.hpp"
#include "svtgv/tensor_io.hpp"

using namespace svtgv;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(SVTGV_CLI) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("svtgv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string at(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SynthWritesRequestedSize) {
  ASSERT_EQ(run("synth square --size 64 --out " + at("sq.tns")).code, 0);
  const Tensor t = read_tensor(at("sq.tns"));
  EXPECT_EQ(t.dims, (std::vector<std::uint32_t>{64, 64}));
}

TEST_F(CliTest, UnknownKindIsUsageError) {
  EXPECT_EQ(run("synth circle --out " + at("x.tns")).code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(CliTest, ZeroNoiseIsIdentity) {
  ASSERT_EQ(run("synth square --size 32 --out " + at("sq.tns")).code, 0);
  ASSERT_EQ(run("corrupt denoise " + at("sq.tns") + " --sd 0 --seed 3 --out " + at("n.tns")).code, 0);
  EXPECT_EQ(slurp(at("sq.tns")), slurp(at("n.tns")));
}

TEST_F(CliTest, MriCorruptionWritesMaskAndSidecar) {
  ASSERT_EQ(run("synth shepp --size 32 --out " + at("b.tns")).code, 0);
  ASSERT_EQ(run("corrupt mri " + at("b.tns") + " --accel 1 --sd 0 --seed 2 --out " + at("k.tns") + " --mask " +
                at("m.tns"))
                .code,
            0);
  const SamplingMask m = read_mask(at("m.tns"));
  EXPECT_DOUBLE_EQ(m.kept_fraction(), 1.0);
  std::ifstream side(at("m.tns.json"));
  const auto j = nlohmann::json::parse(side);
  EXPECT_EQ(j.at("seed").get<int>(), 2);
  // Full sampling without noise: k-space is the transform of the input.
  const ComplexGrid k = complex_grid_from(read_tensor(at("k.tns")));
  const ComplexGrid x = complex_grid_from(read_tensor(at("b.tns")));
  EXPECT_LE(distance(ifft2_unitary(k), x), 1e-5 * norm(x));
  EXPECT_EQ(run("corrupt mri " + at("b.tns") + " --out " + at("k2.tns")).code, 2);
}

TEST_F(CliTest, SolveMatchesLibraryBitwise) {
  ASSERT_EQ(run("synth square --size 32 --out " + at("sq.tns")).code, 0);
  ASSERT_EQ(run("corrupt denoise " + at("sq.tns") + " --sd 0.1 --seed 5 --out " + at("n.tns")).code, 0);
  ASSERT_EQ(run("solve tgv denoise " + at("n.tns") + " --lambda0 0.2 --lambda1 0.1 --iters 40 --out " +
                at("u.tns") + " --report " + at("r.json"))
                .code,
            0);
  const ScalarGrid f = scalar_grid_from(read_tensor(at("n.tns")));
  PdhgConfig cfg = PdhgConfig::denoise_tgv();
  cfg.max_iters = 40;
  const auto sol = solve_tgv(DenoiseProblem{f}, ParamMap::constant(f.shape(), 0.2),
                             ParamMap::constant(f.shape(), 0.1), cfg);
  EXPECT_EQ(slurp(at("u.tns")), std::string(reinterpret_cast<const char*>(encode_tensor(to_tensor(sol.u)).data()),
                                            encode_tensor(to_tensor(sol.u)).size()));
  std::ifstream rep(at("r.json"));
  const auto j = nlohmann::json::parse(rep);
  EXPECT_EQ(j.at("iterations").get<int>(), 40);
  EXPECT_EQ(j.at("final_energy").get<double>(), sol.report.final_energy);
  EXPECT_EQ(j.at("relative_change_last").get<double>(), sol.report.relative_change.back());
}

TEST_F(CliTest, SingleIterationReport) {
  ASSERT_EQ(run("synth ramp --size 16 --g-row 0.01 --g-col 0.02 --offset 0.1 --out " + at("r.tns")).code, 0);
  ASSERT_EQ(run("solve tv denoise " + at("r.tns") + " --lambda 0.1 --iters 1 --out " + at("u.tns") +
                " --report " + at("rep.json") + " --preview " + at("u.pgm"))
                .code,
            0);
  std::ifstream rep(at("rep.json"));
  EXPECT_EQ(nlohmann::json::parse(rep).at("iterations").get<int>(), 1);
  EXPECT_EQ(slurp(at("u.pgm")).substr(0, 3), "P5\n");
}

TEST_F(CliTest, MapFilesAndMissingMaps) {
  ASSERT_EQ(run("synth square --size 16 --out " + at("sq.tns")).code, 0);
  // 0.125 survives float32 storage, so both runs see the same weight.
  write_grid(at("map.tns"), ScalarGrid(16, 16, 0.125));
  EXPECT_EQ(run("solve tv denoise " + at("sq.tns") + " --map " + at("map.tns") + " --iters 5 --out " + at("a.tns")).code, 0);
  EXPECT_EQ(run("solve tv denoise " + at("sq.tns") + " --lambda 0.125 --iters 5 --out " + at("b.tns")).code, 0);
  EXPECT_EQ(slurp(at("a.tns")), slurp(at("b.tns")));
  EXPECT_EQ(run("solve tv denoise " + at("sq.tns") + " --map " + at("nope.tns") + " --out " + at("c.tns")).code, 2);
  EXPECT_EQ(run("solve tgv denoise " + at("sq.tns") + " --lambda1 0.1 --out " + at("c.tns")).code, 2);
}

TEST_F(CliTest, InvalidMapIsConfigurationError) {
  ASSERT_EQ(run("synth square --size 16 --out " + at("sq.tns")).code, 0);
  write_grid(at("zero.tns"), ScalarGrid(16, 16, 0.0));
  EXPECT_EQ(run("solve tv denoise " + at("sq.tns") + " --map " + at("zero.tns") + " --out " + at("c.tns")).code, 3);
}

TEST_F(CliTest, StepViolationNamesTheInequality) {
  ASSERT_EQ(run("synth square --size 16 --out " + at("sq.tns")).code, 0);
  const CliRun r = run("solve tv denoise " + at("sq.tns") + " --lambda 0.1 --sigma 1 --tau 1 --out " + at("u.tns"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("sigma * tau * ||K||^2 <= 1"), std::string::npos) << r.out;
  EXPECT_EQ(run("solve tv denoise " + at("sq.tns") + " --lambda 0.1 --sigma 1 --tau 1 --iters 2 --trained-steps --out " +
                at("u.tns"))
                .code,
            0);
}

TEST_F(CliTest, BadTensorIsIoError) {
  std::ofstream(at("junk.tns")) << "not a tensor";
  EXPECT_EQ(run("metrics " + at("junk.tns") + " " + at("junk.tns")).code, 4);
}

TEST_F(CliTest, MetricsOfIdenticalFiles) {
  ASSERT_EQ(run("synth square --size 32 --out " + at("sq.tns")).code, 0);
  const CliRun r = run("metrics " + at("sq.tns") + " " + at("sq.tns"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "psnr=inf ssim=1.0\n");
}

TEST_F(CliTest, GridSearchRowCount) {
  ASSERT_EQ(run("synth square --size 24 --out " + at("sq.tns")).code, 0);
  ASSERT_EQ(run("corrupt denoise " + at("sq.tns") + " --sd 0.1 --seed 1 --out " + at("n.tns")).code, 0);
  ASSERT_EQ(run("gridsearch tgv denoise " + at("n.tns") + " --ref " + at("sq.tns") +
                " --n1 3 --n0 2 --iters 20 --out " + at("g.csv"))
                .code,
            0);
  const std::string csv = slurp(at("g.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 6);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "lambda0,lambda1,psnr,ssim");
}

TEST_F(CliTest, RatioOfEqualMapsIsOne) {
  write_grid(at("m.tns"), ScalarGrid(8, 8, 0.25));
  ASSERT_EQ(run("analyze ratio --map0 " + at("m.tns") + " --map1 " + at("m.tns") + " --out " + at("r.tns")).code, 0);
  EXPECT_EQ(scalar_grid_from(read_tensor(at("r.tns"))), ScalarGrid(8, 8, 1.0));
}

TEST_F(CliTest, ProfileAndScore) {
  ScalarGrid band(32, 32, 1.0);
  for (std::size_t y = 0; y < 32; ++y)
    for (std::size_t x = 14; x < 18; ++x) band(y, x) = 0.1;
  write_grid(at("band.tns"), band);
  ASSERT_EQ(run("analyze profile --map " + at("band.tns") + " --p0 4,10 --p1 28,10 --samples 49 --out " +
                at("p.csv"))
                .code,
            0);
  const std::string csv = slurp(at("p.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 50);
  const CliRun s = run("analyze score " + at("band.tns") + " --lambda0 1 --lambda1 0.1 --iters 50");
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(s.out.rfind("score=", 0), 0u) << s.out;
}
