#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dolq/dataset.hpp"
#include "dolq/skeleton.hpp"

namespace dolq {

struct FittedEquation {
    ParamedEquation eq;
    std::vector<double> theta;
};

// One complete candidate system: a fitted equation per dimension.
struct EquationSystem {
    std::vector<FittedEquation> dims;
    int dim() const { return static_cast<int>(dims.size()); }
};

RhsFn system_rhs(const EquationSystem& sys);

// Scale-normalized residual error of dimension j against the analytic
// derivatives carried by the dataset. Non-finite predictions yield NaN.
double residual_nmse(const EquationSystem& sys, const TrajectoryDataset& data, int j,
                     double eps = 1e-12);

// Integrates the candidate system from the dataset's initial condition over
// its grid and compares trajectories; solver blow-up yields NaN.
double integral_nmse(const EquationSystem& sys, const TrajectoryDataset& data, int j,
                     double eps = 1e-12);

struct RegimeNmse {
    std::vector<double> residual;  // per dimension
    std::vector<double> integral;
    double residual_avg = 0.0;  // arithmetic mean; NaN propagates
    double integral_avg = 0.0;
};

struct NmseReport {
    RegimeNmse id;
    RegimeNmse ext;
};

RegimeNmse evaluate_regime(const EquationSystem& sys, const TrajectoryDataset& data,
                           double eps = 1e-12);
NmseReport evaluate_system(const EquationSystem& sys, const TrajectoryDataset& id_data,
                           const TrajectoryDataset& ext_data, double eps = 1e-12);

// Success when every dimension's ID integral NMSE is finite and < 1e-3.
bool nmse_success_test(const NmseReport& report, double threshold = 1e-3);

struct TermTestConfig {
    double delta = 0.05;            // ablation threshold shared with the Scientist
    double coeff_fraction = 1e-3;   // |theta_i| < fraction * max |theta| in the dimension
    double impact_threshold = 1e-3; // relative prediction-norm contribution floor
};

// Structural success test: drops negligible-impact and pure-constant terms
// (constants are bias-equivalent), then compares skeleton-key multisets
// against the system's ground-truth decomposition, dimension by dimension.
bool term_match_test(const EquationSystem& sys, const SystemSpec& spec,
                     const TrajectoryDataset& id_data, const TermTestConfig& cfg = {});

// Ground-truth skeleton keys for one system dimension.
std::vector<std::string> truth_keys(const SystemSpec& spec, int j);

// Equation files: {"x0_t": {"terms": [...], "params": [...]}, ...}
EquationSystem read_equation_file(const std::filesystem::path& path, int dim);
void write_equation_file(const EquationSystem& sys, const std::filesystem::path& path);
nlohmann::ordered_json equation_system_json(const EquationSystem& sys);
EquationSystem equation_system_from_json(const nlohmann::json& root, int dim);

nlohmann::ordered_json nmse_report_json(const NmseReport& report);
std::string nmse_report_csv(const NmseReport& report);
std::string nmse_report_table(const NmseReport& report, const std::string& name);

}  // namespace dolq
