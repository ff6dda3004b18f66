#pragma once

#include "svtgv/fourier.hpp"
#include "svtgv/grid.hpp"

namespace svtgv {

// Projections onto the dual balls of the anisotropic weighted l1 norms. Each
// channel is handled independently: real entries are clamped to
// [-bound(x), bound(x)], complex entries are scaled radially onto the disc of
// radius bound(x).

template <typename T>
void project_weighted_linf_inplace(Grid<T>& channel, const ParamMap& bound);

template <typename T>
VectorField<T> project_weighted_linf(VectorField<T> p, const ParamMap& bound);

template <typename T>
SymTensorField<T> project_weighted_linf(SymTensorField<T> q, const ParamMap& bound);

/// Proximal map of tau * 1/2 ||. - f||^2: (v + tau f) / (1 + tau).
template <typename T>
Grid<T> prox_denoise(const Grid<T>& v, const Grid<T>& f, double tau);

/// Exact proximal map of tau * 1/2 ||P F . - f||^2, computed in k-space.
ComplexGrid prox_mri(const ComplexGrid& v, const ComplexGrid& f, const SamplingMask& mask, double tau);

}  // namespace svtgv
