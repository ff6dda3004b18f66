#pragma once

#include "svtgv/grid.hpp"

namespace svtgv {

// Forward differences with Neumann boundary:
//   (Du).x(y, x) = u(y, x+1) - u(y, x), zero on the last column;
//   (Du).y(y, x) = u(y+1, x) - u(y, x), zero on the last row.
// Complex grids are differenced componentwise.

template <typename T>
VectorField<T> grad(const Grid<T>& u);

/// Negative adjoint of grad: <grad u, p> = -<u, div p>.
template <typename T>
Grid<T> div(const VectorField<T>& p);

/// xx = dx w.x, yy = dy w.y, xy = (dy w.x + dx w.y) / 2.
template <typename T>
SymTensorField<T> sym_grad(const VectorField<T>& w);

/// Negative adjoint of sym_grad under <q, r> = q.xx r.xx + q.yy r.yy + 2 q.xy r.xy.
template <typename T>
VectorField<T> sym_div(const SymTensorField<T>& q);

/// Inner products. The symmetric tensor pairing counts the off-diagonal twice.
/// For complex arguments these return Re(sum conj(a) b).
template <typename T>
double inner(const Grid<T>& a, const Grid<T>& b);
template <typename T>
double inner(const VectorField<T>& a, const VectorField<T>& b);
template <typename T>
double inner(const SymTensorField<T>& a, const SymTensorField<T>& b);

enum class Regulariser { Tv, Tgv };

/// Power-iteration estimate of ||K|| with K = D (Tv) or K = [[D, -I], [0, E]]
/// (Tgv). Stops when the estimate changes by less than 1e-9 relative; throws
/// NumericalError after 10000 iterations.
double operator_norm_estimate(Regulariser which, Shape shape);

/// Closed-form upper bound on ||K||^2 used to admit step sizes.
///   Tv:  ||D||^2 = 4 sin^2(pi (W-1) / 2W) + 4 sin^2(pi (H-1) / 2H), exact.
///   Tgv: largest eigenvalue of [[a, sqrt(a)], [sqrt(a), 1 + a]] with a = ||D||^2,
///        using ||E||^2 <= ||D||^2.
double operator_norm_squared_bound(Regulariser which, Shape shape);

}  // namespace svtgv
