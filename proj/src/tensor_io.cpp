#include "svtgv/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace svtgv {
namespace {

constexpr std::uint8_t kMagic[4] = {'T', 'N', 'S', '1'};
constexpr std::size_t kHeaderBytes = 8;

std::uint8_t* put_u32(std::uint8_t* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) *out++ = static_cast<std::uint8_t>(v >> (8 * i));
  return out;
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

std::size_t floats_per_element(DType d) { return d == DType::Complex64 ? 2 : 1; }

void check_dtype(const Tensor& t, DType want, const char* what) {
  if (t.dtype != want) throw StructuralError(std::string(what) + ": unexpected tensor dtype");
}

Shape trailing_shape(const Tensor& t, std::size_t rank, const char* what) {
  if (t.dims.size() != rank)
    throw StructuralError(std::string(what) + ": expected rank " + std::to_string(rank) +
                          ", got " + std::to_string(t.dims.size()));
  return Shape{t.dims[rank - 2], t.dims[rank - 1]};
}

std::uint32_t checked_dim(std::size_t n) {
  if (n > 0xFFFFFFFFu) throw StructuralError("tensor dimension exceeds uint32 range");
  return static_cast<std::uint32_t>(n);
}

void append_real(std::vector<float>& out, const ScalarGrid& g) {
  for (double v : g.values()) out.push_back(static_cast<float>(v));
}

void append_complex(std::vector<float>& out, const ComplexGrid& g) {
  for (const Complex& v : g.values()) {
    out.push_back(static_cast<float>(v.real()));
    out.push_back(static_cast<float>(v.imag()));
  }
}

ScalarGrid real_slice(const Tensor& t, Shape s, std::size_t channel) {
  std::vector<double> v(s.size());
  const float* src = t.data.data() + channel * s.size();
  for (std::size_t i = 0; i < s.size(); ++i) v[i] = src[i];
  return ScalarGrid(s, std::move(v));
}

ComplexGrid complex_slice(const Tensor& t, Shape s, std::size_t channel) {
  std::vector<Complex> v(s.size());
  const float* src = t.data.data() + 2 * channel * s.size();
  for (std::size_t i = 0; i < s.size(); ++i) v[i] = Complex(src[2 * i], src[2 * i + 1]);
  return ComplexGrid(s, std::move(v));
}

}  // namespace

std::size_t Tensor::element_count() const {
  std::size_t n = dims.empty() ? 0 : 1;
  for (auto d : dims) n *= d;
  return n;
}

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  if (t.dims.empty() || t.dims.size() > 4)
    throw StructuralError("tensor rank must be between 1 and 4");
  if (t.dtype != DType::Float32 && t.dtype != DType::Complex64)
    throw StructuralError("unsupported tensor dtype");
  if (t.data.size() != t.element_count() * floats_per_element(t.dtype))
    throw StructuralError("tensor payload length does not match its dimensions");

  std::vector<std::uint8_t> out(kHeaderBytes + 4 * t.dims.size() + 4 * t.data.size(), 0);
  std::uint8_t* p = std::copy(std::begin(kMagic), std::end(kMagic), out.data());
  *p++ = static_cast<std::uint8_t>(t.dtype);
  *p++ = static_cast<std::uint8_t>(t.dims.size());
  p += 2;
  for (auto d : t.dims) p = put_u32(p, d);
  for (float f : t.data) p = put_u32(p, std::bit_cast<std::uint32_t>(f));
  return out;
}

Tensor decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw FormatError("truncated magic", bytes.size());
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin()))
    throw FormatError("bad magic bytes", 0);
  if (bytes.size() < kHeaderBytes) throw FormatError("truncated header", bytes.size());

  Tensor t;
  const std::uint8_t dtype = bytes[4];
  if (dtype != 0x01 && dtype != 0x02)
    throw FormatError("unsupported dtype code " + std::to_string(dtype), 4);
  t.dtype = static_cast<DType>(dtype);
  const std::size_t rank = bytes[5];
  if (rank < 1 || rank > 4) throw FormatError("rank must be 1..4, got " + std::to_string(rank), 5);
  if (bytes[6] != 0 || bytes[7] != 0) throw FormatError("reserved bytes must be zero", 6);

  std::size_t offset = kHeaderBytes;
  if (bytes.size() < offset + 4 * rank) throw FormatError("truncated dimensions", bytes.size());
  for (std::size_t i = 0; i < rank; ++i, offset += 4) t.dims.push_back(get_u32(&bytes[offset]));

  const std::size_t payload = bytes.size() - offset;
  std::size_t floats = floats_per_element(t.dtype);
  for (auto d : t.dims) {
    if (d != 0 && floats > payload / 4 / d) throw FormatError("truncated payload", bytes.size());
    floats *= d;
  }
  if (payload < 4 * floats) throw FormatError("truncated payload", bytes.size());
  if (payload > 4 * floats) throw FormatError("trailing bytes after payload", offset + 4 * floats);

  t.data.resize(floats);
  for (std::size_t i = 0; i < floats; ++i, offset += 4)
    t.data[i] = std::bit_cast<float>(get_u32(&bytes[offset]));
  return t;
}

void write_tensor(const std::filesystem::path& path, const Tensor& t) {
  const auto bytes = encode_tensor(t);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_tensor(bytes);
}

Tensor to_tensor(const ScalarGrid& g) {
  Tensor t{DType::Float32, {checked_dim(g.height()), checked_dim(g.width())}, {}};
  append_real(t.data, g);
  return t;
}

Tensor to_tensor(const ComplexGrid& g) {
  Tensor t{DType::Complex64, {checked_dim(g.height()), checked_dim(g.width())}, {}};
  append_complex(t.data, g);
  return t;
}

Tensor to_tensor(const VectorField<double>& f) {
  Tensor t{DType::Float32, {2, checked_dim(f.shape().height), checked_dim(f.shape().width)}, {}};
  append_real(t.data, f.x);
  append_real(t.data, f.y);
  return t;
}

Tensor to_tensor(const VectorField<Complex>& f) {
  Tensor t{DType::Complex64, {2, checked_dim(f.shape().height), checked_dim(f.shape().width)}, {}};
  append_complex(t.data, f.x);
  append_complex(t.data, f.y);
  return t;
}

Tensor to_tensor(const SymTensorField<double>& f) {
  Tensor t{DType::Float32, {3, checked_dim(f.shape().height), checked_dim(f.shape().width)}, {}};
  append_real(t.data, f.xx);
  append_real(t.data, f.yy);
  append_real(t.data, f.xy);
  return t;
}

ScalarGrid scalar_grid_from(const Tensor& t) {
  check_dtype(t, DType::Float32, "scalar grid");
  return real_slice(t, trailing_shape(t, 2, "scalar grid"), 0);
}

ComplexGrid complex_grid_from(const Tensor& t) {
  if (t.dtype == DType::Float32) return to_complex(scalar_grid_from(t));
  return complex_slice(t, trailing_shape(t, 2, "complex grid"), 0);
}

VectorField<double> vector_field_from(const Tensor& t) {
  check_dtype(t, DType::Float32, "vector field");
  const Shape s = trailing_shape(t, 3, "vector field");
  if (t.dims[0] != 2) throw StructuralError("vector field must have 2 channels");
  return VectorField<double>(real_slice(t, s, 0), real_slice(t, s, 1));
}

VectorField<Complex> complex_vector_field_from(const Tensor& t) {
  check_dtype(t, DType::Complex64, "complex vector field");
  const Shape s = trailing_shape(t, 3, "complex vector field");
  if (t.dims[0] != 2) throw StructuralError("vector field must have 2 channels");
  return VectorField<Complex>(complex_slice(t, s, 0), complex_slice(t, s, 1));
}

SymTensorField<double> sym_tensor_field_from(const Tensor& t) {
  check_dtype(t, DType::Float32, "tensor field");
  const Shape s = trailing_shape(t, 3, "tensor field");
  if (t.dims[0] != 3) throw StructuralError("symmetric tensor field must have 3 channels");
  return SymTensorField<double>(real_slice(t, s, 0), real_slice(t, s, 1), real_slice(t, s, 2));
}

void write_pgm(const std::filesystem::path& path, const ScalarGrid& g) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "P5\n" << g.width() << ' ' << g.height() << "\n65535\n";
  std::vector<char> row(2 * g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = std::clamp(g[i], 0.0, 1.0);
    const auto s = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    row[2 * i] = static_cast<char>(s >> 8);
    row[2 * i + 1] = static_cast<char>(s & 0xFF);
  }
  out.write(row.data(), static_cast<std::streamsize>(row.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

ScalarGrid normalize_for_display(const ScalarGrid& g) {
  ScalarGrid out(g.shape());
  if (g.size() == 0) return out;
  const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
  const double range = *hi - *lo;
  if (range <= 0.0) return out;
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = (g[i] - *lo) / range;
  return out;
}

}  // namespace svtgv
