#include <cstdio>

#include "dolq/agents.hpp"

namespace dolq {

namespace {

const char* kFirstIterationInsight =
    "None. This is the first iteration, so no accumulated insight had been produced yet.";
const char* kFirstIterationEval =
    "None. There was no previous attempt because this prompt was given before any sampler "
    "output had been evaluated.";
const char* kFirstIterationBan = "None. At iteration 1, no term skeleton had yet been removed.";

std::string action_upper(Action a) {
    switch (a) {
        case Action::Keep: return "KEEP";
        case Action::Hold: return "HOLD";
        case Action::Remove: return "REMOVE";
    }
    return "?";
}

std::string variable_list(int dim) {
    std::string out;
    for (int j = 0; j < dim; ++j) {
        if (j) out += ", ";
        out += "x" + std::to_string(j);
    }
    return out;
}

std::string example_block(int dim) {
    if (dim == 2)
        return "x0_t: [\"x0\", \"x1\"]\n"
               "x1_t: [\"x0\", \"np.sin(x1)\"]";
    if (dim == 4)
        return "x0_t: [\"x0\", \"x1*x2\", \"x3\"]\n"
               "x1_t: [\"x0\", \"np.sin(x1)\"]\n"
               "x2_t: [\"x0*x1\"]\n"
               "x3_t: [\"-9.81\", \"x0\"]";
    std::string out;
    for (int j = 0; j < dim; ++j) {
        out += "x" + std::to_string(j) + "_t: [\"x" + std::to_string(j) + "\", \"np.sin(x" +
               std::to_string((j + 1) % dim) + ")\"]";
        if (j + 1 < dim) out += "\n";
    }
    return out;
}

std::string format_mse(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

std::string mse_header(const SystemView& view) {
    std::string out = "(";
    for (std::size_t j = 0; j < view.dims.size(); ++j) {
        if (j) out += ", ";
        out += "x" + std::to_string(j) + "_t: " + format_mse(view.dims[j].mse);
    }
    out += ")";
    return out;
}

std::string equations_block(const SystemView& view) {
    std::string out;
    for (std::size_t j = 0; j < view.dims.size(); ++j)
        out += "x" + std::to_string(j) + "_t = " + view.dims[j].rendered + "\n";
    return out;
}

}  // namespace

PromptBundle build_sampler_prompt(const SamplerPromptInputs& in) {
    const SystemSpec& spec = *in.spec;
    const int d = spec.dim;
    std::string p;
    p += "You are a helpful assistant tasked with discovering mathematical term structures "
         "for scientific systems.\n";
    p += "Complete the 'term_list' below, considering the physical meaning and relationships "
         "of inputs.\n\n";
    p += "# System Description\n" + spec.description + "\n\n";
    p += "### SCIENTIST AGENT GUIDANCE\n";
    p += "The Scientist agent has analyzed previous experiments and provides the following "
         "guidance:\n\n";

    p += "#### Accumulated Knowledge (Theory)\n";
    p += in.insight.empty() ? kFirstIterationInsight : in.insight;
    p += "\n\n";

    p += "#### Term-by-Term Evaluation (Previous Attempt Analysis)\n";
    p += "Evaluation results for each term. keep = retain, hold = hold/modify, remove = "
         "eliminate:\n";
    if (in.previous_eval.empty()) {
        p += kFirstIterationEval;
        p += "\n";
    } else {
        for (const auto& [dim, lines] : in.previous_eval) {
            p += "x" + std::to_string(dim) + "_t:\n";
            for (const TermActionLine& line : lines)
                p += "- " + line.key + " : " + action_upper(line.action) + "\n";
        }
    }
    p += "\n";

    p += "#### Removed Terms List (Ban List)\n";
    p += "The following term structures have negatively impacted performance. Do NOT propose "
         "them again:\n";
    const bool ban_empty = in.ban == nullptr || in.ban->size() == 0;
    if (ban_empty) {
        p += kFirstIterationBan;
        p += "\n";
    } else {
        for (const auto& [dim, keys] : in.ban->entries()) {
            if (keys.empty()) continue;
            p += "x" + std::to_string(dim) + "_t: ";
            bool first = true;
            for (const std::string& key : keys) {
                if (!first) p += ", ";
                p += key;
                first = false;
            }
            p += "\n";
        }
    }
    p += "\n";

    p += "Goal: Reflect the Scientist's insights and guidance in the equation structure.\n\n";
    p += "[Required Conditions (Violation Will Cause Errors)]\n";
    p += "1. You can use: import numpy as np\n";
    p += "2. Target System Context: Input variables are " + variable_list(d) + ".\n";
    p += "- This system is " + std::to_string(d) + "-dimensional\n";
    p += "- Variables x" + std::to_string(d) + " and above do not exist.\n";
    p += "3. Term Format: Propose terms WITHOUT coefficients. The system will automatically "
         "attach trainable parameters.\n";
    p += "- Correct: \"x0\", \"np.sin(x0)\", \"x0*x1\"\n";
    p += "- Incorrect: \"params[0]*x0\", \"C*x0\", \"0.5*x0\"\n";
    p += "4. Term Complexity: You MAY use internal constants if they have physical meaning "
         "(e.g., frequency, phase).\n";
    p += "- Example: \"np.sin(2*x0)\" is allowed and encouraged if the factor 2 is "
         "significant.\n";
    p += "- Note: The system will still attach an outer trainable parameter (e.g., "
         "params[0]*np.sin(2*x0)).\n";
    p += "5. Symbolic Constants: Do NOT use symbolic constants like 'g', 'k', 'm'. Use "
         "numerical values.\n";
    p += "- Correct: \"9.81*x0\" (if g=9.81 is known), \"np.pi*x0\"\n";
    p += "- Incorrect: \"g*x0\" (will cause NameError)\n";
    p += "6. No duplicates: Equations identical to previous attempts are forbidden. "
         "Structural modifications are required.\n";
    p += "7. Reasoning required: When proposing each term, provide a physical/mathematical "
         "reasoning based on the system description (desc).\n\n";
    p += "[Example (" + std::to_string(d) + "D System)]\n";
    p += example_block(d) + "\n\n";
    p += "Return a single JSON object of the form {\"ode_pairs\": [...]} with exactly " +
         std::to_string(in.hypotheses) + " candidate hypotheses. Each hypothesis maps every "
         "dimension key x0_t ... x" + std::to_string(d - 1) + "_t to a list of term strings, "
         "or to a list of {\"term\": \"...\", \"reasoning\": \"...\"} objects.\n";

    return {std::move(p), in.temperature, in.max_tokens};
}

PromptBundle build_scientist_prompt(const ScientistPromptInputs& in) {
    const SystemSpec& spec = *in.spec;
    std::string p;
    p += "You are a senior scientist specializing in ODE discovery. Your role is to evaluate "
         "proposed mathematical terms and provide guidance to improve the term_list in the "
         "next iteration.\n\n";
    p += "Progress: Currently on iteration " + std::to_string(in.iteration) + " of " +
         std::to_string(in.total_iterations) + " total\n\n";
    p += "System Description:\n" + spec.description + "\n\n";
    p += "Accumulated Insights:\n";
    p += in.insight.empty() ? "None." : in.insight;
    p += "\n\n";

    p += "Previous Experiment Results:\n";
    if (in.global_best.present) {
        p += "[Global Best] " + mse_header(in.global_best) + "\n";
        p += equations_block(in.global_best);
    } else {
        p += "[Global Best] None.\n";
    }
    p += "\n";
    if (in.previous_attempt.present) {
        p += "[Previous Attempt] " + mse_header(in.previous_attempt) + "\n";
        p += equations_block(in.previous_attempt);
    } else {
        p += "[Previous Attempt] None.\n";
    }
    p += "\n";
    p += "Current Attempt: " + mse_header(in.current_attempt) + "\n";
    p += equations_block(in.current_attempt);
    if (!in.justifications.empty()) {
        p += "\nTerm justifications from the Sampler:\n";
        for (const JustificationLine& j : in.justifications)
            p += "- x" + std::to_string(j.dimension) + "_t " + j.key + ": " + j.text + "\n";
    }
    p += "\n";

    p += "Task: Perform term-by-term evaluation.\n\n";
    p += "For all terms in the current attempt, evaluate the following 2 aspects:\n";
    p += "1. Semantic Quality:\n";
    p += "- good: Clearly aligns with the physical/mathematical meaning (Max 3 per function)\n";
    p += "- neutral: Has some relevance but not essential\n";
    p += "- bad: Unrelated to or contradicts the system\n\n";
    p += "2. Reasoning: Explain your evaluation in 1-2 sentences. Focus on physical meaning.\n\n";
    p += "Important Notes:\n";
    p += "- Use coefficient analysis: Terms with coefficients near 0 are removal candidates.\n\n";
    p += "Return a single JSON object keyed by dimension (x0_t ...) where each value is a "
         "list of {\"term\": \"C*(...)\", \"semantic_quality\": \"good|neutral|bad\", "
         "\"reasoning\": \"...\", \"action\": \"keep|hold|remove\"}; include an "
         "\"updated_insight\" string field summarizing the accumulated knowledge.\n";

    return {std::move(p), in.temperature, in.max_tokens};
}

}  // namespace dolq
