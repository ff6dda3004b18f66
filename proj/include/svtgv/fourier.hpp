#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "svtgv/grid.hpp"

namespace svtgv {

/// Centered, unitary 2D DFT: zero frequency sits at (H/2, W/2) (integer
/// division) and ||fft2_unitary(u)|| = ||u||.
ComplexGrid fft2_unitary(const ComplexGrid& u);
/// Exact inverse (and adjoint) of fft2_unitary.
ComplexGrid ifft2_unitary(const ComplexGrid& k);

/// Cartesian k-space sampling pattern: whole columns (phase-encode lines
/// along x) are either acquired or not.
struct SamplingMask {
  Shape shape;
  std::vector<std::uint8_t> kept;  // row-major, 1 = acquired
  double acceleration = 1.0;
  double center_fraction = 0.0;
  std::uint64_t seed = 0;

  bool is_kept(std::size_t i) const noexcept { return kept[i] != 0; }
  double kept_fraction() const;

  static SamplingMask full(Shape shape);
  static SamplingMask empty(Shape shape);

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;
};

/// Keeps the central ceil(center_fraction * W) columns, then a seeded random
/// subset of the remaining columns so that round(W / R) columns are kept in
/// total. Throws ConfigurationError when the central band alone exceeds that
/// budget, StructuralError when the shape is below 16x16.
SamplingMask make_mask(Shape shape, int acceleration, double center_fraction, std::uint64_t seed);

/// A = P F: unitary FFT followed by zeroing unacquired samples. k-space data
/// live on the full grid with zeros where nothing was acquired.
ComplexGrid forward(const ComplexGrid& u, const SamplingMask& mask);
/// A^* f = F^{-1} P f, the zero-filled reconstruction.
ComplexGrid adjoint(const ComplexGrid& f, const SamplingMask& mask);
/// Zeroes unacquired entries of a k-space grid.
ComplexGrid apply_mask(const ComplexGrid& k, const SamplingMask& mask);

/// Writes the mask as a float32 0/1 TNS grid plus `<path>.json` holding
/// {"R", "center_fraction", "seed"}.
void write_mask(const std::filesystem::path& path, const SamplingMask& mask);
/// Reads a mask written by write_mask. A missing sidecar leaves the metadata
/// at R = H W / kept, center_fraction = 0, seed = 0.
SamplingMask read_mask(const std::filesystem::path& path);

std::filesystem::path mask_sidecar_path(const std::filesystem::path& mask_path);

}  // namespace svtgv
