#include "dolq/integrate.hpp"

#include <cmath>
#include <vector>

#include "dolq/errors.hpp"

namespace dolq {

namespace {

bool all_finite(std::span<const double> v) {
    for (const double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

std::optional<Matrix> rk4_impl(const RhsFn& rhs, std::span<const double> x0,
                               std::span<const double> grid) {
    const std::size_t d = x0.size();
    const std::size_t n = grid.size();
    Matrix out(n, d);
    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);

    for (std::size_t c = 0; c < d; ++c) out.at(0, c) = x[c];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double t = grid[i];
        const double h = grid[i + 1] - grid[i];
        rhs(t, x, k1);
        for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + 0.5 * h * k1[c];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + 0.5 * h * k2[c];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t c = 0; c < d; ++c) tmp[c] = x[c] + h * k3[c];
        rhs(t + h, tmp, k4);
        for (std::size_t c = 0; c < d; ++c)
            x[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        if (!all_finite(x)) return std::nullopt;
        for (std::size_t c = 0; c < d; ++c) out.at(i + 1, c) = x[c];
    }
    return out;
}

}  // namespace

Matrix integrate_rk4(const RhsFn& rhs, std::span<const double> x0, std::span<const double> grid) {
    auto m = rk4_impl(rhs, x0, grid);
    if (!m) throw NonFiniteState("trajectory left the finite domain during integration");
    return std::move(*m);
}

std::optional<Matrix> try_integrate_rk4(const RhsFn& rhs, std::span<const double> x0,
                                        std::span<const double> grid) {
    return rk4_impl(rhs, x0, grid);
}

Matrix finite_difference(const Matrix& states, std::span<const double> grid) {
    const std::size_t n = states.rows();
    const std::size_t d = states.cols();
    if (n < 3) throw TooFewPoints("finite differences need at least 3 samples");
    Matrix out(n, d);
    for (std::size_t c = 0; c < d; ++c) {
        {
            const double h = grid[1] - grid[0];
            out.at(0, c) =
                (-3.0 * states.at(0, c) + 4.0 * states.at(1, c) - states.at(2, c)) / (2.0 * h);
        }
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h2 = grid[i + 1] - grid[i - 1];
            out.at(i, c) = (states.at(i + 1, c) - states.at(i - 1, c)) / h2;
        }
        {
            const double h = grid[n - 1] - grid[n - 2];
            out.at(n - 1, c) = (3.0 * states.at(n - 1, c) - 4.0 * states.at(n - 2, c) +
                                states.at(n - 3, c)) /
                               (2.0 * h);
        }
    }
    return out;
}

}  // namespace dolq
