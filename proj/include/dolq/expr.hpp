#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dolq/matrix.hpp"

namespace dolq {

enum class UnaryFn { Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Sinh, Cosh, Tanh, Sign };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree over state variables x0..x{d-1}. Trainable
// coefficients never appear inside the tree; they are attached externally
// when a skeleton is built.
struct Expr {
    enum class Kind { Variable, Literal, Unary, Binary };

    Kind kind;
    int variable = -1;      // Kind::Variable
    double value = 0.0;     // Kind::Literal
    UnaryFn fn{};           // Kind::Unary
    BinaryOp op{};          // Kind::Binary
    ExprPtr a, b;           // children (unary uses only a)

    static ExprPtr make_variable(int index);
    static ExprPtr make_literal(double v);
    static ExprPtr make_unary(UnaryFn fn, ExprPtr child);
    static ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
};

int expr_depth(const Expr& e);
int expr_max_variable(const Expr& e);  // -1 when no variable occurs
bool expr_equal(const Expr& lhs, const Expr& rhs);

const char* unary_name(UnaryFn fn);

// Parses one candidate term. A leading "np." before function names is
// tolerated and stripped; "pi" is accepted as the numeric constant.
// Throws ParseError / UnknownSymbol / VariableOutOfRange /
// ForbiddenPlaceholder.
ExprPtr parse_term(const std::string& text, int dimension, int max_depth = 12);

// Canonical plain rendering: functions without the "np." prefix, "**" for
// powers, minimal parentheses. parse_term(render(e)) reproduces e.
std::string render(const Expr& e);

// Python-flavoured rendering used when equations are shown to the LLM:
// identical structure with "np." prefixes on function names.
std::string render_python(const Expr& e);

struct EvalResult {
    std::vector<double> values;
    bool finite = true;  // false when any element is NaN/Inf or a domain fault
};

// Element-wise evaluation over an N x d state matrix. Domain violations are
// flagged, never thrown.
EvalResult evaluate(const Expr& e, const Matrix& states);

// Single-state evaluation (used by the integrator).
double evaluate_at(const Expr& e, std::span<const double> state);

// Associativity/commutativity-normalised copy: mul/add chains flattened and
// sorted, literal factors merged, small integer powers expanded to products.
ExprPtr canonicalize(const Expr& e);

// Canonical coefficient-stripped key, rendered "C*(...)". Top-level numeric
// factors are dropped (a pure-constant term keeps its magnitude), so terms
// differing only in an attached literal coefficient collide.
std::string skeleton_key(const Expr& e);

}  // namespace dolq
