#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "svtgv/grid.hpp"

namespace svtgv {

enum class DType : std::uint8_t { Float32 = 0x01, Complex64 = 0x02 };

/// In-file representation of a TNS tensor. Complex payloads are stored as
/// interleaved (re, im) float32 pairs, so `data` holds 2 floats per element.
struct Tensor {
  DType dtype = DType::Float32;
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  std::size_t element_count() const;
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

// TNS layout: "TNS1" | dtype u8 | rank u8 (1..4) | 2 reserved zero bytes |
// rank x u32 LE dims | payload (float32 LE, row-major, innermost last).
std::vector<std::uint8_t> encode_tensor(const Tensor& t);
Tensor decode_tensor(std::span<const std::uint8_t> bytes);

void write_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor read_tensor(const std::filesystem::path& path);

// Grid <-> tensor conversions. Scalar and complex grids are rank 2 [H, W];
// vector fields are [2, H, W]; symmetric tensor fields [3, H, W] ordered
// (xx, yy, xy). Values are rounded to float32.
Tensor to_tensor(const ScalarGrid& g);
Tensor to_tensor(const ComplexGrid& g);
Tensor to_tensor(const VectorField<double>& f);
Tensor to_tensor(const VectorField<Complex>& f);
Tensor to_tensor(const SymTensorField<double>& f);

ScalarGrid scalar_grid_from(const Tensor& t);
ComplexGrid complex_grid_from(const Tensor& t);
VectorField<double> vector_field_from(const Tensor& t);
VectorField<Complex> complex_vector_field_from(const Tensor& t);
SymTensorField<double> sym_tensor_field_from(const Tensor& t);

template <typename G>
void write_grid(const std::filesystem::path& path, const G& g) {
  write_tensor(path, to_tensor(g));
}

/// Binary graymap (P5, maxval 65535, big-endian). Values clipped to [0, 1].
void write_pgm(const std::filesystem::path& path, const ScalarGrid& g);

/// Affinely maps [min, max] of g onto [0, 1]; constant grids map to 0.
ScalarGrid normalize_for_display(const ScalarGrid& g);

}  // namespace svtgv
