#include "svtgv/prox.hpp"

#include <algorithm>
#include <cmath>

namespace svtgv {
namespace {

void require_positive_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau))
    throw ConfigurationError("proximal step tau must be positive and finite");
}

}  // namespace

template <typename T>
void project_weighted_linf_inplace(Grid<T>& channel, const ParamMap& bound) {
  require_same_shape(channel.shape(), bound.shape(), "project_weighted_linf");
  for (std::size_t i = 0; i < channel.size(); ++i) {
    const double b = bound[i];
    if constexpr (std::is_same_v<T, Complex>) {
      const double m = std::abs(channel[i]);
      if (m > b) channel[i] *= b / m;
    } else {
      channel[i] = std::clamp(channel[i], -b, b);
    }
  }
}

template <typename T>
VectorField<T> project_weighted_linf(VectorField<T> p, const ParamMap& bound) {
  project_weighted_linf_inplace(p.x, bound);
  project_weighted_linf_inplace(p.y, bound);
  return p;
}

template <typename T>
SymTensorField<T> project_weighted_linf(SymTensorField<T> q, const ParamMap& bound) {
  project_weighted_linf_inplace(q.xx, bound);
  project_weighted_linf_inplace(q.yy, bound);
  project_weighted_linf_inplace(q.xy, bound);
  return q;
}

template <typename T>
Grid<T> prox_denoise(const Grid<T>& v, const Grid<T>& f, double tau) {
  require_positive_tau(tau);
  require_same_shape(v.shape(), f.shape(), "prox_denoise");
  Grid<T> out(v.shape());
  const double s = 1.0 / (1.0 + tau);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] + tau * f[i]) * s;
  return out;
}

ComplexGrid prox_mri(const ComplexGrid& v, const ComplexGrid& f, const SamplingMask& mask,
                     double tau) {
  require_positive_tau(tau);
  require_same_shape(v.shape(), f.shape(), "prox_mri");
  require_same_shape(v.shape(), mask.shape, "prox_mri");
  ComplexGrid k = fft2_unitary(v);
  const double s = 1.0 / (1.0 + tau);
  for (std::size_t i = 0; i < k.size(); ++i)
    if (mask.is_kept(i)) k[i] = (k[i] + tau * f[i]) * s;
  return ifft2_unitary(k);
}

#define SVTGV_INSTANTIATE(T)                                                              \
  template void project_weighted_linf_inplace(Grid<T>&, const ParamMap&);                 \
  template VectorField<T> project_weighted_linf(VectorField<T>, const ParamMap&);         \
  template SymTensorField<T> project_weighted_linf(SymTensorField<T>, const ParamMap&);   \
  template Grid<T> prox_denoise(const Grid<T>&, const Grid<T>&, double);

SVTGV_INSTANTIATE(double)
SVTGV_INSTANTIATE(Complex)
#undef SVTGV_INSTANTIATE

}  // namespace svtgv
