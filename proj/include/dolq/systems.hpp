#pragma once

#include <span>
#include <string>
#include <vector>

#include "dolq/integrate.hpp"

namespace dolq {

// One benchmark ODE system: closed-form right-hand side, temporal domains,
// fixed initial conditions, the natural-language description fed to the
// agents, and the coefficient-free term decomposition used by the term test.
struct SystemSpec {
    int id = 0;
    std::string name;
    std::string title;
    int dim = 0;
    double t_start = 0.0;
    double t_end = 0.0;      // end of the ID regime
    double t_ood_end = 0.0;  // end of the ID-Ext regime
    std::vector<double> ic_default;
    std::vector<double> ic_alternate;
    std::string description;
    // per-dimension ground-truth term strings (constants fold into the bias)
    std::vector<std::vector<std::string>> truth_terms;
};

inline constexpr int kSystemCount = 8;

// Throws UnknownSystem for ids outside 1..8.
const SystemSpec& system_spec(int id);

void ground_truth_rhs(int id, double t, std::span<const double> x, std::span<double> dxdt);

// The ground-truth RHS bound to one system, as an integrable callable.
RhsFn ground_truth_rhs_fn(int id);

}  // namespace dolq
