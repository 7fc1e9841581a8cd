#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dolq/dataset.hpp"
#include "dolq/skeleton.hpp"

namespace dolq {

struct OptimizerConfig {
    std::string de_strategy = "best1bin";
    int de_population = 20;
    double de_tolerance = 1e-5;
    int de_max_generations = 300;
    double de_mutation = 0.8;
    double de_crossover = 0.7;
    double bound_low = -20.0;
    double bound_high = 20.0;
    double bfgs_tolerance = 1e-9;
    int bfgs_max_iterations = 200;
    double timeout_seconds = 240.0;
    std::size_t max_parameters = 8;
};

enum class Strategy { Bfgs, De, Hybrid };

const char* strategy_name(Strategy s);

struct OptResult {
    std::vector<double> theta;
    double mse = std::numeric_limits<double>::infinity();
    Strategy strategy = Strategy::Bfgs;
    bool converged = false;
    bool timed_out = false;
    double wall_seconds = 0.0;
};

// Residual objective for one skeleton on one dataset dimension: term columns
// are evaluated once, so each objective call is a dense mat-vec. Any
// non-finite term value poisons the whole candidate (objective == +inf).
class ResidualObjective {
public:
    using Clock = std::chrono::steady_clock;

    ResidualObjective(const ParamedEquation& eq, const TrajectoryDataset& data, int dimension);

    double operator()(std::span<const double> theta) const;

    bool viable() const { return viable_; }
    std::size_t param_count() const { return columns_ + 1; }
    std::size_t samples() const { return rows_; }

    void set_deadline(Clock::time_point deadline) { deadline_ = deadline; }
    bool expired() const { return expired_; }

private:
    std::size_t rows_ = 0;
    std::size_t columns_ = 0;          // term columns, bias excluded
    std::vector<double> term_matrix_;  // row-major rows_ x columns_
    std::vector<double> targets_;
    bool viable_ = true;
    std::optional<Clock::time_point> deadline_;
    mutable bool expired_ = false;
    mutable std::uint32_t tick_ = 0;
};

// Sum of squared residuals against the finite-difference targets of
// dimension j (+inf when evaluation leaves the finite domain).
// Throws DimensionOutOfRange / ParamLengthMismatch.
double residual_mse(const ParamedEquation& eq, std::span<const double> theta,
                    const TrajectoryDataset& data, int dimension);

// Central-difference gradient with per-component step 1e-6 * max(1, |theta_i|).
void numeric_gradient(const std::function<double(std::span<const double>)>& fn,
                      std::span<const double> theta, std::span<double> grad);

OptResult optimize_bfgs(const ResidualObjective& objective, std::vector<double> theta_init,
                        const OptimizerConfig& config);
OptResult optimize_de(const ResidualObjective& objective, const OptimizerConfig& config,
                      std::uint64_t seed);
OptResult optimize_hybrid(const ResidualObjective& objective, const OptimizerConfig& config,
                          std::uint64_t seed);

// Spec-facing wrappers that build the objective themselves.
OptResult optimize_bfgs(const ParamedEquation& eq, const TrajectoryDataset& data, int dimension,
                        std::vector<double> theta_init, const OptimizerConfig& config = {});
OptResult optimize_de(const ParamedEquation& eq, const TrajectoryDataset& data, int dimension,
                      const OptimizerConfig& config = {}, std::uint64_t seed = 0);
OptResult optimize_hybrid(const ParamedEquation& eq, const TrajectoryDataset& data, int dimension,
                          const OptimizerConfig& config = {}, std::uint64_t seed = 0);

// Runs BFGS (random init within bounds), DE, and DE-seeded BFGS, and returns
// the lowest-MSE result; ties break in the order bfgs < de < hybrid.
// Throws AllStrategiesFailed when every strategy ends at +inf, and
// DimensionOutOfRange / ParamLengthMismatch on bad inputs.
OptResult optimize_best_of_three(const ParamedEquation& eq, const TrajectoryDataset& data,
                                 int dimension, const OptimizerConfig& config = {},
                                 std::uint64_t seed = 0);

}  // namespace dolq
