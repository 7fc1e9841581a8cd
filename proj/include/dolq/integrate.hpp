#pragma once

#include <functional>
#include <optional>
#include <span>

#include "dolq/matrix.hpp"

namespace dolq {

using RhsFn = std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

// Classic fixed-step RK4 on the given grid (one step per interval).
// Throws NonFiniteState when the trajectory stops being finite.
Matrix integrate_rk4(const RhsFn& rhs, std::span<const double> x0, std::span<const double> grid);

// Same stepping, but blow-ups yield nullopt instead of throwing; used when a
// candidate system is scored and instability must map to NaN.
std::optional<Matrix> try_integrate_rk4(const RhsFn& rhs, std::span<const double> x0,
                                        std::span<const double> grid);

// Central differences in the interior, second-order one-sided stencils at
// both edges (matches numpy.gradient with edge_order=2 on a uniform grid).
// Throws TooFewPoints when fewer than three samples are given.
Matrix finite_difference(const Matrix& states, std::span<const double> grid);

}  // namespace dolq
