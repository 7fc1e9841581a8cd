#include <optional>
#include <regex>

#include <nlohmann/json.hpp>

#include "dolq/agents.hpp"
#include "dolq/errors.hpp"

namespace dolq {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Finds the first balanced {...} region that parses as JSON; LLMs wrap their
// payloads in fences and prose unpredictably.
std::optional<json> extract_first_json(const std::string& text) {
    for (std::size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped)
                    escaped = false;
                else if (c == '\\')
                    escaped = true;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    const std::string candidate = text.substr(start, i - start + 1);
                    json parsed = json::parse(candidate, nullptr, false);
                    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
                    break;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<int> dimension_of_key(const std::string& key) {
    static const std::regex pattern(R"(^x(\d+)_t$)");
    std::smatch m;
    if (!std::regex_match(key, m, pattern)) return std::nullopt;
    return std::stoi(m[1]);
}

// "C*(x0*x1)" / "C*x0**3" / "x0*x1" all reduce to the inner term text.
std::string strip_placeholder_wrapper(const std::string& text) {
    if (text.rfind("C*(", 0) == 0 && text.size() >= 4 && text.back() == ')')
        return text.substr(3, text.size() - 4);
    if (text.rfind("C*", 0) == 0) return text.substr(2);
    return text;
}

}  // namespace

SamplerResponse parse_sampler_response(const std::string& text, int dimension,
                                       int max_hypotheses) {
    const auto root = extract_first_json(text);
    if (!root) throw MalformedResponse("sampler reply contains no parseable JSON object");

    SamplerResponse out;
    std::vector<json> hypothesis_objects;
    if (root->contains("ode_pairs") && (*root)["ode_pairs"].is_array()) {
        for (const json& h : (*root)["ode_pairs"])
            if (h.is_object()) hypothesis_objects.push_back(h);
    } else {
        hypothesis_objects.push_back(*root);  // tolerate a bare hypothesis
    }

    for (const json& obj : hypothesis_objects) {
        if (static_cast<int>(out.hypotheses.size()) >= max_hypotheses) {
            out.warnings.push_back("extra hypotheses beyond the configured count were ignored");
            break;
        }
        Hypothesis hyp;
        bool any_term = false;
        for (const auto& [key, value] : obj.items()) {
            const auto dim = dimension_of_key(key);
            if (!dim) continue;
            if (*dim >= dimension) {
                out.warnings.push_back("dimension key '" + key + "' exceeds system dimension " +
                                       std::to_string(dimension));
                continue;
            }
            if (!value.is_array()) {
                out.warnings.push_back("dimension '" + key + "' is not a term list");
                continue;
            }
            std::vector<ParsedTerm>& dest = hyp.terms[*dim];
            for (const json& item : value) {
                std::string source;
                std::string justification;
                if (item.is_string()) {
                    source = item.get<std::string>();
                } else if (item.is_object() && item.contains("term") &&
                           item["term"].is_string()) {
                    source = item["term"].get<std::string>();
                    if (item.contains("reasoning") && item["reasoning"].is_string())
                        justification = item["reasoning"].get<std::string>();
                } else {
                    out.warnings.push_back("unrecognized term entry in '" + key + "'");
                    continue;
                }
                try {
                    ParsedTerm term;
                    term.source = source;
                    term.expr = parse_term(source, dimension);
                    term.key = skeleton_key(*term.expr);
                    term.justification = std::move(justification);
                    dest.push_back(std::move(term));
                    any_term = true;
                } catch (const ParseError& e) {
                    out.warnings.push_back("dropped term '" + source + "': " + e.what());
                }
            }
        }
        if (any_term)
            out.hypotheses.push_back(std::move(hyp));
        else
            out.warnings.push_back("dropped a hypothesis with no valid terms");
    }
    return out;
}

ScientistResponse parse_scientist_response(const std::string& text, int dimension) {
    const auto root = extract_first_json(text);
    if (!root) throw MalformedResponse("scientist reply contains no parseable JSON object");

    ScientistResponse out;
    for (const auto& [key, value] : root->items()) {
        if (key == "updated_insight") {
            if (value.is_string()) out.updated_insight = value.get<std::string>();
            continue;
        }
        const auto dim = dimension_of_key(key);
        if (!dim) continue;
        if (*dim >= dimension) {
            out.warnings.push_back("dimension key '" + key + "' exceeds system dimension " +
                                   std::to_string(dimension));
            continue;
        }
        if (!value.is_array()) continue;
        std::vector<TermEvaluation>& dest = out.evaluations[*dim];
        for (const json& item : value) {
            if (!item.is_object() || !item.contains("term") || !item["term"].is_string() ||
                !item.contains("semantic_quality") || !item["semantic_quality"].is_string()) {
                out.warnings.push_back("dropped malformed evaluation entry in '" + key + "'");
                continue;
            }
            TermEvaluation eval;
            eval.term_text = item["term"].get<std::string>();
            try {
                eval.semantic = grade_from_name(item["semantic_quality"].get<std::string>());
            } catch (const MalformedResponse& e) {
                out.warnings.push_back(std::string(e.what()) + " for term '" + eval.term_text +
                                       "', entry dropped");
                continue;
            }
            if (item.contains("reasoning") && item["reasoning"].is_string())
                eval.reasoning = item["reasoning"].get<std::string>();
            if (item.contains("action") && item["action"].is_string())
                eval.action_hint = item["action"].get<std::string>();
            try {
                const ExprPtr expr =
                    parse_term(strip_placeholder_wrapper(eval.term_text), dimension);
                eval.key = skeleton_key(*expr);
            } catch (const ParseError& e) {
                out.warnings.push_back("unmatchable term '" + eval.term_text + "': " + e.what());
            }
            dest.push_back(std::move(eval));
        }
        // "Max 3 per function": excess good grades are downgraded in arrival order
        int goods = 0;
        for (TermEvaluation& eval : dest) {
            if (eval.semantic != Grade::Good) continue;
            if (++goods > 3) {
                eval.semantic = Grade::Neutral;
                out.warnings.push_back("downgraded a fourth 'good' grade in x" +
                                       std::to_string(*dim) + "_t to neutral");
            }
        }
    }
    return out;
}

std::string render_sampler_response(const SamplerResponse& r) {
    ordered_json root;
    root["ode_pairs"] = ordered_json::array();
    for (const Hypothesis& hyp : r.hypotheses) {
        ordered_json h = ordered_json::object();
        for (const auto& [dim, terms] : hyp.terms) {
            ordered_json list = ordered_json::array();
            for (const ParsedTerm& t : terms) {
                if (t.justification.empty()) {
                    list.push_back(t.source);
                } else {
                    ordered_json obj;
                    obj["term"] = t.source;
                    obj["reasoning"] = t.justification;
                    list.push_back(std::move(obj));
                }
            }
            h["x" + std::to_string(dim) + "_t"] = std::move(list);
        }
        root["ode_pairs"].push_back(std::move(h));
    }
    return root.dump(2);
}

std::string render_scientist_response(const ScientistResponse& r) {
    ordered_json root = ordered_json::object();
    for (const auto& [dim, evals] : r.evaluations) {
        ordered_json list = ordered_json::array();
        for (const TermEvaluation& eval : evals) {
            ordered_json obj;
            obj["term"] = eval.term_text.empty() ? eval.key : eval.term_text;
            obj["semantic_quality"] = grade_name(eval.semantic);
            if (!eval.reasoning.empty()) obj["reasoning"] = eval.reasoning;
            if (!eval.action_hint.empty()) obj["action"] = eval.action_hint;
            list.push_back(std::move(obj));
        }
        root["x" + std::to_string(dim) + "_t"] = std::move(list);
    }
    if (!r.updated_insight.empty()) root["updated_insight"] = r.updated_insight;
    return root.dump(2);
}

}  // namespace dolq
