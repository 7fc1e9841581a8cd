#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dolq/matrix.hpp"
#include "dolq/systems.hpp"

namespace dolq {

enum class Regime { InDomain, Extended };

const char* regime_label(Regime r);        // "ID" / "ID-Ext"
Regime regime_from_label(const std::string& label);

struct TrajectoryDataset {
    int system_id = 0;
    Regime regime = Regime::InDomain;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    int ic_index = 0;  // 0 = default initial condition, 1 = alternate (ic_1)

    std::vector<double> time;  // uniform grid, N points
    Matrix states;             // observed states (noisy when sigma > 0)
    Matrix fd_derivs;          // finite-difference targets for optimization
    Matrix gt_derivs;          // analytic RHS on the noise-free trajectory

    std::size_t points() const { return time.size(); }
    int dim() const { return static_cast<int>(states.cols()); }
    std::vector<double> initial_condition() const {
        return {states.row(0).begin(), states.row(0).end()};
    }
};

inline constexpr std::size_t kPointsPerRegime = 1000;

// Generates one benchmark dataset: RK4 trajectory on a uniform grid, optional
// i.i.d. Gaussian state noise, finite-difference targets recomputed from the
// observed (possibly noisy) states. Throws UnknownSystem.
TrajectoryDataset generate_dataset(int system_id, Regime regime, double sigma = 0.0,
                                   int ic_index = 0, std::uint64_t seed = 0,
                                   std::size_t points = kPointsPerRegime);

// CSV (t, x0.., xdot0..) plus a JSON sidecar "<stem>.meta.json".
void write_dataset_csv(const TrajectoryDataset& ds, const std::filesystem::path& csv_path);
TrajectoryDataset read_dataset_csv(const std::filesystem::path& csv_path);

}  // namespace dolq
