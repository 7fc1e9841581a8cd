#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dolq/expr.hpp"
#include "dolq/matrix.hpp"

namespace dolq {

// Per-dimension equation skeleton: a list of coefficient-free terms plus a
// trainable additive bias. With parameters theta the model is
//   f_j(x) = sum_i theta[i] * term_i(x) + theta.back().
struct ParamedEquation {
    std::vector<ExprPtr> terms;
    int dimension = 0;  // index j of the equation this skeleton models

    std::size_t param_count() const { return terms.size() + 1; }
};

inline constexpr std::size_t kDefaultTermCap = 10;

// Throws TermCapExceeded when |terms| > term_cap.
ParamedEquation build_skeleton(std::vector<ExprPtr> terms, int dimension,
                               std::size_t term_cap = kDefaultTermCap);

// Full-matrix evaluation; a non-finite value anywhere flags the whole vector.
// Throws ParamLengthMismatch.
EvalResult evaluate_skeleton(const ParamedEquation& eq, std::span<const double> theta,
                             const Matrix& states);

// Single-state evaluation used by the integrator (no finiteness promise).
double evaluate_skeleton_at(const ParamedEquation& eq, std::span<const double> theta,
                            std::span<const double> state);

// Rendering used in prompts and reports: "-0.2688*(x0) + 0.4777" style with
// coefficients at four decimals and python-style term bodies.
std::string render_equation(const ParamedEquation& eq, std::span<const double> theta);

}  // namespace dolq
