#include "dolq/skeleton.hpp"

#include <cmath>
#include <cstdio>

#include "dolq/errors.hpp"

namespace dolq {

ParamedEquation build_skeleton(std::vector<ExprPtr> terms, int dimension, std::size_t term_cap) {
    if (terms.size() > term_cap)
        throw TermCapExceeded("candidate has " + std::to_string(terms.size()) +
                              " terms, cap is " + std::to_string(term_cap));
    ParamedEquation eq;
    eq.terms = std::move(terms);
    eq.dimension = dimension;
    return eq;
}

EvalResult evaluate_skeleton(const ParamedEquation& eq, std::span<const double> theta,
                             const Matrix& states) {
    if (theta.size() != eq.param_count())
        throw ParamLengthMismatch("expected " + std::to_string(eq.param_count()) +
                                  " parameters, got " + std::to_string(theta.size()));
    const std::size_t n = states.rows();
    EvalResult out;
    out.values.assign(n, theta.back());  // bias
    for (std::size_t i = 0; i < eq.terms.size(); ++i) {
        const EvalResult term = evaluate(*eq.terms[i], states);
        if (!term.finite) out.finite = false;
        for (std::size_t r = 0; r < n; ++r) out.values[r] += theta[i] * term.values[r];
    }
    if (out.finite) {
        for (const double v : out.values) {
            if (!std::isfinite(v)) {
                out.finite = false;
                break;
            }
        }
    }
    return out;
}

double evaluate_skeleton_at(const ParamedEquation& eq, std::span<const double> theta,
                            std::span<const double> state) {
    double acc = theta.back();
    for (std::size_t i = 0; i < eq.terms.size(); ++i)
        acc += theta[i] * evaluate_at(*eq.terms[i], state);
    return acc;
}

std::string render_equation(const ParamedEquation& eq, std::span<const double> theta) {
    char buf[64];
    std::string out;
    for (std::size_t i = 0; i < eq.terms.size(); ++i) {
        const double c = theta[i];
        std::snprintf(buf, sizeof(buf), "%.4f", std::fabs(c));
        if (i == 0)
            out += (c < 0 ? "-" : "");
        else
            out += (c < 0 ? " - " : " + ");
        out += buf;
        out += "*(" + render_python(*eq.terms[i]) + ")";
    }
    const double bias = theta[eq.terms.size()];
    std::snprintf(buf, sizeof(buf), "%.4f", std::fabs(bias));
    if (eq.terms.empty())
        out += (bias < 0 ? "-" : "") + std::string(buf);
    else
        out += (bias < 0 ? " - " : " + ") + std::string(buf);
    return out;
}

}  // namespace dolq
