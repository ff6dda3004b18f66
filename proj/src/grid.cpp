#include "svtgv/grid.hpp"

#include <algorithm>

namespace svtgv {

std::string to_string(const Shape& s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width);
}

void require_same_shape(const Shape& a, const Shape& b, const char* what) {
  if (a != b) {
    throw StructuralError(std::string(what) + ": shape mismatch " + to_string(a) + " vs " +
                          to_string(b));
  }
}

bool validate_param_map(const ScalarGrid& map, double floor) {
  if (map.size() != map.shape().size())
    throw StructuralError("parameter map length does not match its shape");
  if (!map.all_finite()) throw StructuralError("parameter map contains non-finite values");
  return std::all_of(map.values().begin(), map.values().end(),
                     [floor](double v) { return v >= floor; });
}

ParamMap::ParamMap(ScalarGrid values, double floor) : values_(std::move(values)) {
  if (values_.size() == 0) throw StructuralError("parameter map is empty");
  if (!(floor > 0.0)) throw ValidationError("parameter map floor must be positive");
  if (!validate_param_map(values_, floor))
    throw ValidationError("parameter map has entries below the positivity floor " +
                          std::to_string(floor));
}

ParamMap ParamMap::constant(Shape shape, double value) { return ParamMap(ScalarGrid(shape, value)); }

double ParamMap::min() const noexcept {
  return *std::min_element(values_.values().begin(), values_.values().end());
}

double ParamMap::max() const noexcept {
  return *std::max_element(values_.values().begin(), values_.values().end());
}

ScalarGrid magnitude(const ComplexGrid& g) {
  ScalarGrid out(g.shape());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::abs(g[i]);
  return out;
}

ComplexGrid to_complex(const ScalarGrid& g) {
  ComplexGrid out(g.shape());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = Complex(g[i], 0.0);
  return out;
}

}  // namespace svtgv
