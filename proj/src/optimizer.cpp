#include "dolq/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "dolq/errors.hpp"
#include "dolq/rng.hpp"

namespace dolq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Bfgs: return "bfgs";
        case Strategy::De: return "de";
        case Strategy::Hybrid: return "hybrid";
    }
    return "?";
}

ResidualObjective::ResidualObjective(const ParamedEquation& eq, const TrajectoryDataset& data,
                                     int dimension) {
    if (dimension < 0 || dimension >= data.dim())
        throw DimensionOutOfRange("dimension " + std::to_string(dimension) +
                                  " outside dataset dimension " + std::to_string(data.dim()));
    rows_ = data.points();
    columns_ = eq.terms.size();
    term_matrix_.resize(rows_ * columns_);
    targets_ = data.fd_derivs.column(static_cast<std::size_t>(dimension));
    for (std::size_t k = 0; k < columns_; ++k) {
        const EvalResult col = evaluate(*eq.terms[k], data.states);
        if (!col.finite) viable_ = false;
        for (std::size_t r = 0; r < rows_; ++r) term_matrix_[r * columns_ + k] = col.values[r];
    }
}

double ResidualObjective::operator()(std::span<const double> theta) const {
    if (theta.size() != param_count())
        throw ParamLengthMismatch("expected " + std::to_string(param_count()) +
                                  " parameters, got " + std::to_string(theta.size()));
    if (!viable_) return kInf;
    if (deadline_ && (++tick_ & 63u) == 0 && Clock::now() > *deadline_) expired_ = true;

    const double bias = theta[columns_];
    double acc = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        double v = bias;
        const double* row = term_matrix_.data() + r * columns_;
        for (std::size_t k = 0; k < columns_; ++k) v += theta[k] * row[k];
        const double e = v - targets_[r];
        acc += e * e;
    }
    return std::isfinite(acc) ? acc : kInf;
}

double residual_mse(const ParamedEquation& eq, std::span<const double> theta,
                    const TrajectoryDataset& data, int dimension) {
    const ResidualObjective objective(eq, data, dimension);
    return objective(theta);
}

void numeric_gradient(const std::function<double(std::span<const double>)>& fn,
                      std::span<const double> theta, std::span<double> grad) {
    std::vector<double> probe(theta.begin(), theta.end());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::fabs(theta[i]));
        const double saved = probe[i];
        probe[i] = saved + h;
        const double fp = fn(probe);
        probe[i] = saved - h;
        const double fm = fn(probe);
        probe[i] = saved;
        grad[i] = (fp - fm) / (2.0 * h);
    }
}

// ---------------------------------------------------------------------------
// BFGS with inverse-Hessian updates, backtracking line search, and best-seen
// tracking: even a failed run reports the lowest objective value it touched.
// ---------------------------------------------------------------------------

OptResult optimize_bfgs(const ResidualObjective& objective, std::vector<double> theta_init,
                        const OptimizerConfig& config) {
    const auto start = ResidualObjective::Clock::now();
    const std::size_t p = objective.param_count();
    OptResult result;
    result.strategy = Strategy::Bfgs;
    result.theta = theta_init;

    auto fn = [&objective](std::span<const double> t) { return objective(t); };

    std::vector<double> x = std::move(theta_init);
    double fx = fn(x);
    result.mse = fx;
    if (!std::isfinite(fx)) {
        result.wall_seconds = std::chrono::duration<double>(
                                  ResidualObjective::Clock::now() - start).count();
        return result;  // nothing to refine from a non-finite start
    }

    std::vector<double> best_x = x;
    double best_f = fx;

    // inverse Hessian approximation, dense row-major p x p, starts as identity
    std::vector<double> hinv(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) hinv[i * p + i] = 1.0;

    std::vector<double> g(p), g_new(p), dir(p), x_new(p), s(p), y(p), hy(p);
    numeric_gradient(fn, x, g);

    for (int iter = 0; iter < config.bfgs_max_iterations; ++iter) {
        if (objective.expired()) {
            result.timed_out = true;
            break;
        }
        double gmax = 0.0;
        for (const double v : g) gmax = std::max(gmax, std::fabs(v));
        if (gmax < config.bfgs_tolerance) {
            result.converged = true;
            break;
        }

        // dir = -Hinv * g
        for (std::size_t i = 0; i < p; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < p; ++j) acc -= hinv[i * p + j] * g[j];
            dir[i] = acc;
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < p; ++i) slope += dir[i] * g[i];
        if (!(slope < 0.0)) {
            // curvature information went bad; restart from steepest descent
            for (std::size_t i = 0; i < p; ++i) {
                for (std::size_t j = 0; j < p; ++j) hinv[i * p + j] = (i == j) ? 1.0 : 0.0;
                dir[i] = -g[i];
            }
            slope = 0.0;
            for (std::size_t i = 0; i < p; ++i) slope += dir[i] * g[i];
            if (!(slope < 0.0)) break;  // gradient numerically zero
        }

        // backtracking Armijo search
        double alpha = 1.0;
        double f_new = kInf;
        bool accepted = false;
        for (int trial = 0; trial < 60; ++trial) {
            for (std::size_t i = 0; i < p; ++i) x_new[i] = x[i] + alpha * dir[i];
            f_new = fn(x_new);
            if (std::isfinite(f_new) && f_new < best_f) {
                best_f = f_new;
                best_x = x_new;
            }
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;  // no progress possible along this direction

        numeric_gradient(fn, x_new, g_new);
        double sy = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
            sy += s[i] * y[i];
        }
        x = x_new;
        fx = f_new;
        g = g_new;

        // BFGS inverse update, skipped when curvature is not usable
        double snorm = 0.0, ynorm = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            snorm += s[i] * s[i];
            ynorm += y[i] * y[i];
        }
        if (sy > 1e-12 * std::sqrt(snorm * ynorm)) {
            const double rho = 1.0 / sy;
            for (std::size_t i = 0; i < p; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < p; ++j) acc += hinv[i * p + j] * y[j];
                hy[i] = acc;
            }
            double yhy = 0.0;
            for (std::size_t i = 0; i < p; ++i) yhy += y[i] * hy[i];
            for (std::size_t i = 0; i < p; ++i) {
                for (std::size_t j = 0; j < p; ++j) {
                    hinv[i * p + j] += rho * rho * (yhy + sy) * s[i] * s[j] -
                                       rho * (hy[i] * s[j] + s[i] * hy[j]);
                }
            }
        }
    }

    result.theta = best_x;
    result.mse = best_f;
    if (objective.expired()) result.timed_out = true;
    result.wall_seconds =
        std::chrono::duration<double>(ResidualObjective::Clock::now() - start).count();
    return result;
}

// ---------------------------------------------------------------------------
// Differential evolution, best1bin: mutant = best + F * (r1 - r2), binomial
// crossover with a guaranteed slot, greedy selection, clip to bounds.
// ---------------------------------------------------------------------------

OptResult optimize_de(const ResidualObjective& objective, const OptimizerConfig& config,
                      std::uint64_t seed) {
    const auto start = ResidualObjective::Clock::now();
    const std::size_t p = objective.param_count();
    const std::size_t np = static_cast<std::size_t>(std::max(config.de_population, 5));
    Rng rng = Rng(seed).fork("de");

    OptResult result;
    result.strategy = Strategy::De;

    auto fn = [&objective](std::span<const double> t) { return objective(t); };

    std::vector<std::vector<double>> pop(np, std::vector<double>(p));
    std::vector<double> energy(np, kInf);
    for (auto& member : pop)
        for (double& v : member) v = rng.uniform(config.bound_low, config.bound_high);
    std::size_t best = 0;
    for (std::size_t i = 0; i < np; ++i) {
        energy[i] = fn(pop[i]);
        if (energy[i] < energy[best]) best = i;
    }

    std::vector<double> trial(p);
    bool converged = false;
    if (!std::isfinite(energy[best])) {
        // objective is +inf everywhere we can sample; give up immediately
        result.theta = pop[best];
        result.mse = kInf;
        result.wall_seconds =
            std::chrono::duration<double>(ResidualObjective::Clock::now() - start).count();
        return result;
    }

    for (int gen = 0; gen < config.de_max_generations && !converged; ++gen) {
        if (objective.expired()) {
            result.timed_out = true;
            break;
        }
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1 = rng.index(np);
            while (r1 == i) r1 = rng.index(np);
            std::size_t r2 = rng.index(np);
            while (r2 == i || r2 == r1) r2 = rng.index(np);

            const std::size_t forced = rng.index(p);
            for (std::size_t k = 0; k < p; ++k) {
                const bool cross = (k == forced) || rng.uniform() < config.de_crossover;
                double v = cross ? pop[best][k] + config.de_mutation * (pop[r1][k] - pop[r2][k])
                                 : pop[i][k];
                v = std::clamp(v, config.bound_low, config.bound_high);
                trial[k] = v;
            }
            const double e = fn(trial);
            if (e <= energy[i]) {
                pop[i] = trial;
                energy[i] = e;
                if (e < energy[best]) best = i;
            }
        }

        // scipy-style convergence: population energy spread below tolerance
        double mean = 0.0;
        bool finite = true;
        for (const double e : energy) {
            mean += e;
            finite = finite && std::isfinite(e);
        }
        if (finite) {
            mean /= static_cast<double>(np);
            double var = 0.0;
            for (const double e : energy) var += (e - mean) * (e - mean);
            var /= static_cast<double>(np);
            if (std::sqrt(var) <= config.de_tolerance * std::fabs(mean)) converged = true;
        }
    }

    result.theta = pop[best];
    result.mse = energy[best];
    result.converged = converged;
    if (objective.expired()) result.timed_out = true;
    result.wall_seconds =
        std::chrono::duration<double>(ResidualObjective::Clock::now() - start).count();
    return result;
}

OptResult optimize_hybrid(const ResidualObjective& objective, const OptimizerConfig& config,
                          std::uint64_t seed) {
    const auto start = ResidualObjective::Clock::now();
    OptResult de = optimize_de(objective, config, seed);
    OptResult out = de;
    if (std::isfinite(de.mse)) {
        OptResult refined = optimize_bfgs(objective, de.theta, config);
        if (refined.mse <= de.mse) {
            out = refined;
            out.converged = refined.converged || de.converged;
        }
        out.timed_out = de.timed_out || refined.timed_out;
    }
    out.strategy = Strategy::Hybrid;
    out.wall_seconds =
        std::chrono::duration<double>(ResidualObjective::Clock::now() - start).count();
    return out;
}

namespace {

ResidualObjective make_objective(const ParamedEquation& eq, const TrajectoryDataset& data,
                                 int dimension, const OptimizerConfig& config) {
    ResidualObjective objective(eq, data, dimension);
    if (objective.param_count() > config.max_parameters)
        throw ParamLengthMismatch("skeleton needs " + std::to_string(objective.param_count()) +
                                  " parameters, configured maximum is " +
                                  std::to_string(config.max_parameters));
    if (config.timeout_seconds > 0)
        objective.set_deadline(ResidualObjective::Clock::now() +
                               std::chrono::duration_cast<ResidualObjective::Clock::duration>(
                                   std::chrono::duration<double>(config.timeout_seconds)));
    return objective;
}

}  // namespace

OptResult optimize_bfgs(const ParamedEquation& eq, const TrajectoryDataset& data, int dimension,
                        std::vector<double> theta_init, const OptimizerConfig& config) {
    const ResidualObjective objective = make_objective(eq, data, dimension, config);
    return optimize_bfgs(objective, std::move(theta_init), config);
}

OptResult optimize_de(const ParamedEquation& eq, const TrajectoryDataset& data, int dimension,
                      const OptimizerConfig& config, std::uint64_t seed) {
    const ResidualObjective objective = make_objective(eq, data, dimension, config);
    return optimize_de(objective, config, seed);
}

OptResult optimize_hybrid(const ParamedEquation& eq, const TrajectoryDataset& data, int dimension,
                          const OptimizerConfig& config, std::uint64_t seed) {
    const ResidualObjective objective = make_objective(eq, data, dimension, config);
    return optimize_hybrid(objective, config, seed);
}

OptResult optimize_best_of_three(const ParamedEquation& eq, const TrajectoryDataset& data,
                                 int dimension, const OptimizerConfig& config,
                                 std::uint64_t seed) {
    const ResidualObjective objective = make_objective(eq, data, dimension, config);

    Rng init_rng = Rng(seed).fork("bfgs-init");
    std::vector<double> theta0(objective.param_count());
    for (double& v : theta0) v = init_rng.uniform(config.bound_low, config.bound_high);

    OptResult bfgs = optimize_bfgs(objective, std::move(theta0), config);
    OptResult de = optimize_de(objective, config, seed);
    OptResult hybrid = de;
    if (std::isfinite(de.mse)) {
        OptResult refined = optimize_bfgs(objective, de.theta, config);
        if (refined.mse <= de.mse) {
            hybrid = refined;
            hybrid.converged = refined.converged || de.converged;
        }
        hybrid.timed_out = de.timed_out || refined.timed_out;
        hybrid.wall_seconds = de.wall_seconds + refined.wall_seconds;
    }
    hybrid.strategy = Strategy::Hybrid;

    const OptResult* winner = &bfgs;  // tie order: bfgs < de < hybrid
    if (de.mse < winner->mse) winner = &de;
    if (hybrid.mse < winner->mse) winner = &hybrid;
    if (!std::isfinite(winner->mse))
        throw AllStrategiesFailed("all optimization strategies ended at +inf for dimension " +
                                  std::to_string(dimension));
    return *winner;
}

}  // namespace dolq
