#pragma once

#include <cstdint>

#include "svtgv/grid.hpp"

namespace svtgv {

/// 10 log10(range^2 / MSE) in dB; +infinity when the images are identical.
double psnr(const ScalarGrid& u, const ScalarGrid& ref, double data_range);

/// Mean local SSIM over all positions where an 11x11 Gaussian window
/// (sd 1.5) fits, with K1 = 0.01 and K2 = 0.03. Needs at least 11x11.
double ssim(const ScalarGrid& u, const ScalarGrid& ref, double data_range);

/// Adds i.i.d. N(0, sd^2) noise to every real component, seeded.
ScalarGrid add_gaussian_noise(const ScalarGrid& u, double sd, std::uint64_t seed);
ComplexGrid add_gaussian_noise(const ComplexGrid& u, double sd, std::uint64_t seed);

}  // namespace svtgv
