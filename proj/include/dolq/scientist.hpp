#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dolq/dataset.hpp"
#include "dolq/rng.hpp"
#include "dolq/skeleton.hpp"

namespace dolq {

enum class Grade { Good, Neutral, Bad };
enum class Action { Keep, Hold, Remove };

const char* grade_name(Grade g);
const char* action_name(Action a);
Grade grade_from_name(const std::string& name);  // throws MalformedResponse

struct AblationConfig {
    double delta = 0.05;            // relative-change threshold
    double epsilon = 1e-12;         // denominator stabilizer
    double forget_probability = 0.01;
    bool forget_per_entry = false;  // default clears the whole list at once
};

struct AblationResult {
    double delta = 0.0;
    Grade grade = Grade::Neutral;
};

// Zeroes one optimized coefficient at a time (never the bias, never
// re-optimizing the rest) and grades the relative MSE change against the
// threshold. A non-finite baseline yields all-neutral grades.
std::vector<AblationResult> ablation_classify(const ParamedEquation& eq,
                                              std::span<const double> theta_opt,
                                              const TrajectoryDataset& data, int dimension,
                                              const AblationConfig& cfg = {});

struct Decision {
    Action action = Action::Hold;
    int strikes_after = 0;  // 0 after keep/remove, 1 or 2 while holding
};

// Term retention decision: semantic bad removes immediately; semantic good
// with quantitative good keeps (strikes reset); every other combination holds
// and a term already holding its second strike is removed.
Decision decide_action(Grade semantic, Grade quantitative, int prior_strikes);

// Per-dimension sets of removed skeleton keys.
class BanList {
public:
    bool contains(int dimension, const std::string& key) const;
    void add(int dimension, const std::string& key);
    void clear();
    void clear(int dimension, const std::string& key);
    std::size_t size() const;
    const std::map<int, std::set<std::string>>& entries() const { return entries_; }

private:
    std::map<int, std::set<std::string>> entries_;
};

void apply_removals(BanList& ban, const std::vector<std::string>& keys, int dimension);

// Bernoulli forgetting per iteration; whole-list mode clears everything with
// one draw, per-entry mode draws independently for each banned key.
// Returns true when anything was cleared.
bool maybe_forget(BanList& ban, const AblationConfig& cfg, Rng& rng);

// Drops terms whose skeleton key is banned for this dimension.
std::vector<ExprPtr> filter_banned(const std::vector<ExprPtr>& terms, const BanList& ban,
                                   int dimension);

}  // namespace dolq
