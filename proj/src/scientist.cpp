#include "dolq/scientist.hpp"

#include <cmath>

#include "dolq/errors.hpp"
#include "dolq/optimizer.hpp"

namespace dolq {

const char* grade_name(Grade g) {
    switch (g) {
        case Grade::Good: return "good";
        case Grade::Neutral: return "neutral";
        case Grade::Bad: return "bad";
    }
    return "?";
}

const char* action_name(Action a) {
    switch (a) {
        case Action::Keep: return "keep";
        case Action::Hold: return "hold";
        case Action::Remove: return "remove";
    }
    return "?";
}

Grade grade_from_name(const std::string& name) {
    if (name == "good") return Grade::Good;
    if (name == "neutral") return Grade::Neutral;
    if (name == "bad") return Grade::Bad;
    throw MalformedResponse("invalid semantic grade '" + name + "'");
}

std::vector<AblationResult> ablation_classify(const ParamedEquation& eq,
                                              std::span<const double> theta_opt,
                                              const TrajectoryDataset& data, int dimension,
                                              const AblationConfig& cfg) {
    const ResidualObjective objective(eq, data, dimension);
    const double base = objective(theta_opt);

    std::vector<AblationResult> out(eq.terms.size());
    if (!std::isfinite(base)) return out;  // nothing meaningful to compare against

    std::vector<double> ablated(theta_opt.begin(), theta_opt.end());
    for (std::size_t i = 0; i < eq.terms.size(); ++i) {
        const double saved = ablated[i];
        ablated[i] = 0.0;
        const double mse = objective(ablated);
        ablated[i] = saved;

        const double delta = (mse - base) / (base + cfg.epsilon);
        out[i].delta = delta;
        if (delta > cfg.delta)
            out[i].grade = Grade::Good;
        else if (delta < -cfg.delta)
            out[i].grade = Grade::Bad;
        else
            out[i].grade = Grade::Neutral;
    }
    return out;
}

Decision decide_action(Grade semantic, Grade quantitative, int prior_strikes) {
    if (semantic == Grade::Bad) return {Action::Remove, 0};
    if (semantic == Grade::Good && quantitative == Grade::Good) return {Action::Keep, 0};
    // semantic good with quantitative neutral/bad, or semantic neutral: hold
    // with the two-strike rule
    if (prior_strikes >= 2) return {Action::Remove, 0};
    return {Action::Hold, prior_strikes + 1};
}

bool BanList::contains(int dimension, const std::string& key) const {
    const auto it = entries_.find(dimension);
    return it != entries_.end() && it->second.count(key) > 0;
}

void BanList::add(int dimension, const std::string& key) { entries_[dimension].insert(key); }

void BanList::clear() { entries_.clear(); }

void BanList::clear(int dimension, const std::string& key) {
    const auto it = entries_.find(dimension);
    if (it == entries_.end()) return;
    it->second.erase(key);
    if (it->second.empty()) entries_.erase(it);
}

std::size_t BanList::size() const {
    std::size_t n = 0;
    for (const auto& [dim, keys] : entries_) n += keys.size();
    return n;
}

void apply_removals(BanList& ban, const std::vector<std::string>& keys, int dimension) {
    for (const std::string& key : keys) ban.add(dimension, key);
}

bool maybe_forget(BanList& ban, const AblationConfig& cfg, Rng& rng) {
    if (!cfg.forget_per_entry) {
        if (rng.uniform() < cfg.forget_probability) {
            const bool had_entries = ban.size() > 0;
            ban.clear();
            return had_entries;
        }
        return false;
    }
    std::vector<std::pair<int, std::string>> cleared;
    for (const auto& [dim, keys] : ban.entries())
        for (const std::string& key : keys)
            if (rng.uniform() < cfg.forget_probability) cleared.emplace_back(dim, key);
    for (const auto& [dim, key] : cleared) ban.clear(dim, key);
    return !cleared.empty();
}

std::vector<ExprPtr> filter_banned(const std::vector<ExprPtr>& terms, const BanList& ban,
                                   int dimension) {
    std::vector<ExprPtr> out;
    out.reserve(terms.size());
    for (const ExprPtr& t : terms)
        if (!ban.contains(dimension, skeleton_key(*t))) out.push_back(t);
    return out;
}

}  // namespace dolq
