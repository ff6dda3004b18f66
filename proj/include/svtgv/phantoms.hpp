#pragma once

#include <cstddef>

#include "svtgv/grid.hpp"

namespace svtgv {

/// `hi` on the centred square of side round(inner_fraction * size), `lo`
/// elsewhere. Needs size >= 16 and 0 < inner_fraction < 1.
ScalarGrid square_phantom(std::size_t size, double inner_fraction, double lo = 0.0,
                          double hi = 1.0);

/// offset + g_row * i + g_col * j at row i, column j, clipped to [0, 1].
ScalarGrid ramp_phantom(std::size_t size, double g_row, double g_col, double offset);

/// Smooth unit-modulus phase used by the brain-like phantom.
ComplexGrid smooth_phase(std::size_t size);

/// Modified Shepp-Logan ellipses (magnitude in [0, 1]) times smooth_phase.
/// Needs size >= 32.
ComplexGrid shepp_like_phantom(std::size_t size);

}  // namespace svtgv
