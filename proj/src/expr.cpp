#include "dolq/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <optional>

#include "dolq/errors.hpp"

namespace dolq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

const std::map<std::string, UnaryFn, std::less<>>& unary_table() {
    static const std::map<std::string, UnaryFn, std::less<>> table = {
        {"sin", UnaryFn::Sin},   {"cos", UnaryFn::Cos},   {"tan", UnaryFn::Tan},
        {"exp", UnaryFn::Exp},   {"log", UnaryFn::Log},   {"sqrt", UnaryFn::Sqrt},
        {"abs", UnaryFn::Abs},   {"sinh", UnaryFn::Sinh}, {"cosh", UnaryFn::Cosh},
        {"tanh", UnaryFn::Tanh}, {"sign", UnaryFn::Sign},
    };
    return table;
}

}  // namespace

ExprPtr Expr::make_variable(int index) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Variable;
    e->variable = index;
    return e;
}

ExprPtr Expr::make_literal(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Literal;
    e->value = v;
    return e;
}

ExprPtr Expr::make_unary(UnaryFn fn, ExprPtr child) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Unary;
    e->fn = fn;
    e->a = std::move(child);
    return e;
}

ExprPtr Expr::make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Binary;
    e->op = op;
    e->a = std::move(lhs);
    e->b = std::move(rhs);
    return e;
}

int expr_depth(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Variable:
        case Expr::Kind::Literal:
            return 1;
        case Expr::Kind::Unary:
            return 1 + expr_depth(*e.a);
        case Expr::Kind::Binary:
            return 1 + std::max(expr_depth(*e.a), expr_depth(*e.b));
    }
    return 1;
}

int expr_max_variable(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Variable:
            return e.variable;
        case Expr::Kind::Literal:
            return -1;
        case Expr::Kind::Unary:
            return expr_max_variable(*e.a);
        case Expr::Kind::Binary:
            return std::max(expr_max_variable(*e.a), expr_max_variable(*e.b));
    }
    return -1;
}

bool expr_equal(const Expr& lhs, const Expr& rhs) {
    if (lhs.kind != rhs.kind) return false;
    switch (lhs.kind) {
        case Expr::Kind::Variable:
            return lhs.variable == rhs.variable;
        case Expr::Kind::Literal:
            return lhs.value == rhs.value;
        case Expr::Kind::Unary:
            return lhs.fn == rhs.fn && expr_equal(*lhs.a, *rhs.a);
        case Expr::Kind::Binary:
            return lhs.op == rhs.op && expr_equal(*lhs.a, *rhs.a) && expr_equal(*lhs.b, *rhs.b);
    }
    return false;
}

const char* unary_name(UnaryFn fn) {
    switch (fn) {
        case UnaryFn::Sin: return "sin";
        case UnaryFn::Cos: return "cos";
        case UnaryFn::Tan: return "tan";
        case UnaryFn::Exp: return "exp";
        case UnaryFn::Log: return "log";
        case UnaryFn::Sqrt: return "sqrt";
        case UnaryFn::Abs: return "abs";
        case UnaryFn::Sinh: return "sinh";
        case UnaryFn::Cosh: return "cosh";
        case UnaryFn::Tanh: return "tanh";
        case UnaryFn::Sign: return "sign";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Pow, LParen, RParen, End };
    Type type = Type::End;
    double number = 0.0;
    std::string ident;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws();
        if (pos_ >= text_.size()) return {Token::Type::End};
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident();
        ++pos_;
        switch (c) {
            case '+': return {Token::Type::Plus};
            case '-': return {Token::Type::Minus};
            case '*':
                if (pos_ < text_.size() && text_[pos_] == '*') {
                    ++pos_;
                    return {Token::Type::Pow};
                }
                return {Token::Type::Star};
            case '/': return {Token::Type::Slash};
            case '(': return {Token::Type::LParen};
            case ')': return {Token::Type::RParen};
            default:
                throw ParseError("unexpected character '" + std::string(1, c) + "' in term");
        }
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    Token lex_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        double v = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw ParseError("malformed numeric literal '" + std::string(first, last) + "'");
        Token t{Token::Type::Number};
        t.number = v;
        return t;
    }

    Token lex_ident() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        // tolerate and strip a "np." namespace prefix
        if (name == "np" && pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            return lex_ident();
        }
        Token t{Token::Type::Ident};
        t.ident = std::move(name);
        return t;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    Parser(const std::string& text, int dimension) : lexer_(text), dimension_(dimension) {
        advance();
    }

    ExprPtr parse() {
        ExprPtr e = expression();
        if (current_.type != Token::Type::End) throw ParseError("trailing input after expression");
        return e;
    }

private:
    void advance() { current_ = lexer_.next(); }

    bool accept(Token::Type t) {
        if (current_.type != t) return false;
        advance();
        return true;
    }

    ExprPtr expression() {
        ExprPtr lhs = term();
        for (;;) {
            if (accept(Token::Type::Plus))
                lhs = Expr::make_binary(BinaryOp::Add, lhs, term());
            else if (accept(Token::Type::Minus))
                lhs = Expr::make_binary(BinaryOp::Sub, lhs, term());
            else
                return lhs;
        }
    }

    ExprPtr term() {
        ExprPtr lhs = unary();
        for (;;) {
            if (accept(Token::Type::Star))
                lhs = Expr::make_binary(BinaryOp::Mul, lhs, unary());
            else if (accept(Token::Type::Slash))
                lhs = Expr::make_binary(BinaryOp::Div, lhs, unary());
            else
                return lhs;
        }
    }

    ExprPtr unary() {
        if (accept(Token::Type::Plus)) return unary();
        if (accept(Token::Type::Minus)) {
            ExprPtr inner = unary();
            if (inner->kind == Expr::Kind::Literal) return Expr::make_literal(-inner->value);
            return Expr::make_binary(BinaryOp::Mul, Expr::make_literal(-1.0), inner);
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (accept(Token::Type::Pow)) {
            ExprPtr exponent = unary();
            if (exponent->kind != Expr::Kind::Literal)
                throw ParseError("pow exponent must be a numeric literal");
            return Expr::make_binary(BinaryOp::Pow, base, exponent);
        }
        return base;
    }

    ExprPtr primary() {
        if (current_.type == Token::Type::Number) {
            const double v = current_.number;
            advance();
            return Expr::make_literal(v);
        }
        if (current_.type == Token::Type::Ident) {
            std::string name = current_.ident;
            advance();
            return resolve(name);
        }
        if (accept(Token::Type::LParen)) {
            ExprPtr e = expression();
            if (!accept(Token::Type::RParen)) throw ParseError("missing ')'");
            return e;
        }
        throw ParseError("expected a number, variable, or function");
    }

    ExprPtr resolve(const std::string& name) {
        if (name == "C") throw ForbiddenPlaceholder("coefficient placeholder 'C' is not allowed");
        if (name == "params")
            throw ForbiddenPlaceholder("coefficient placeholder 'params' is not allowed");
        if (name == "pi") return Expr::make_literal(kPi);
        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
            if (digits) {
                int idx = 0;
                std::from_chars(name.data() + 1, name.data() + name.size(), idx);
                if (idx >= dimension_)
                    throw VariableOutOfRange("variable " + name + " exceeds system dimension " +
                                             std::to_string(dimension_));
                return Expr::make_variable(idx);
            }
        }
        if (const auto it = unary_table().find(name); it != unary_table().end()) {
            if (!accept(Token::Type::LParen))
                throw ParseError("function '" + name + "' requires parentheses");
            ExprPtr arg = expression();
            if (!accept(Token::Type::RParen)) throw ParseError("missing ')' after function argument");
            return Expr::make_unary(it->second, arg);
        }
        throw UnknownSymbol("unknown identifier '" + name + "'");
    }

    Lexer lexer_;
    Token current_;
    int dimension_;
};

}  // namespace

ExprPtr parse_term(const std::string& text, int dimension, int max_depth) {
    if (text.empty()) throw ParseError("empty term");
    if (text.find("params[") != std::string::npos)
        throw ForbiddenPlaceholder("terms must not contain 'params[' placeholders");
    Parser parser(text, dimension);
    ExprPtr e = parser.parse();
    if (expr_depth(*e) > max_depth)
        throw ParseError("expression exceeds maximum depth " + std::to_string(max_depth));
    return e;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

struct RenderOptions {
    bool np_prefix = false;
    bool round_literals = false;  // 9 significant digits, used for skeleton keys
};

std::string format_literal(double v, const RenderOptions& opt) {
    if (opt.round_literals) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        return buf;
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

int precedence(const Expr& e) {
    if (e.kind != Expr::Kind::Binary) {
        // a negative literal behaves like a unary-minus expression
        if (e.kind == Expr::Kind::Literal && e.value < 0) return 1;
        return 4;
    }
    switch (e.op) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 3;
    }
    return 4;
}

std::string render_impl(const Expr& e, const RenderOptions& opt);

std::string child(const Expr& c, int min_prec, const RenderOptions& opt) {
    std::string s = render_impl(c, opt);
    if (precedence(c) < min_prec) return "(" + s + ")";
    return s;
}

std::string render_impl(const Expr& e, const RenderOptions& opt) {
    switch (e.kind) {
        case Expr::Kind::Variable:
            return "x" + std::to_string(e.variable);
        case Expr::Kind::Literal:
            return format_literal(e.value, opt);
        case Expr::Kind::Unary: {
            std::string name = opt.np_prefix ? std::string("np.") + unary_name(e.fn)
                                             : std::string(unary_name(e.fn));
            return name + "(" + render_impl(*e.a, opt) + ")";
        }
        case Expr::Kind::Binary:
            switch (e.op) {
                case BinaryOp::Add:
                    return child(*e.a, 1, opt) + "+" + child(*e.b, 2, opt);
                case BinaryOp::Sub:
                    return child(*e.a, 1, opt) + "-" + child(*e.b, 2, opt);
                case BinaryOp::Mul:
                    return child(*e.a, 2, opt) + "*" + child(*e.b, 3, opt);
                case BinaryOp::Div:
                    return child(*e.a, 2, opt) + "/" + child(*e.b, 3, opt);
                case BinaryOp::Pow: {
                    std::string base = child(*e.a, 4, opt);
                    std::string exponent = render_impl(*e.b, opt);
                    return base + "**" + exponent;
                }
            }
    }
    return "?";
}

}  // namespace

std::string render(const Expr& e) { return render_impl(e, {}); }

std::string render_python(const Expr& e) {
    RenderOptions opt;
    opt.np_prefix = true;
    return render_impl(e, opt);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

double apply_unary(UnaryFn fn, double v) {
    switch (fn) {
        case UnaryFn::Sin: return std::sin(v);
        case UnaryFn::Cos: return std::cos(v);
        case UnaryFn::Tan: return std::tan(v);
        case UnaryFn::Exp: return std::exp(v);
        case UnaryFn::Log: return std::log(v);
        case UnaryFn::Sqrt: return std::sqrt(v);
        case UnaryFn::Abs: return std::fabs(v);
        case UnaryFn::Sinh: return std::sinh(v);
        case UnaryFn::Cosh: return std::cosh(v);
        case UnaryFn::Tanh: return std::tanh(v);
        case UnaryFn::Sign: return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div: return a / b;
        case BinaryOp::Pow: return std::pow(a, b);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void eval_rows(const Expr& e, const Matrix& states, std::vector<double>& out) {
    const std::size_t n = states.rows();
    switch (e.kind) {
        case Expr::Kind::Variable:
            for (std::size_t i = 0; i < n; ++i) out[i] = states.at(i, e.variable);
            return;
        case Expr::Kind::Literal:
            std::fill(out.begin(), out.end(), e.value);
            return;
        case Expr::Kind::Unary: {
            eval_rows(*e.a, states, out);
            for (double& v : out) v = apply_unary(e.fn, v);
            return;
        }
        case Expr::Kind::Binary: {
            std::vector<double> rhs(n);
            eval_rows(*e.a, states, out);
            eval_rows(*e.b, states, rhs);
            for (std::size_t i = 0; i < n; ++i) out[i] = apply_binary(e.op, out[i], rhs[i]);
            return;
        }
    }
}

}  // namespace

EvalResult evaluate(const Expr& e, const Matrix& states) {
    EvalResult r;
    r.values.resize(states.rows());
    eval_rows(e, states, r.values);
    for (const double v : r.values) {
        if (!std::isfinite(v)) {
            r.finite = false;
            break;
        }
    }
    return r;
}

double evaluate_at(const Expr& e, std::span<const double> state) {
    switch (e.kind) {
        case Expr::Kind::Variable:
            return state[static_cast<std::size_t>(e.variable)];
        case Expr::Kind::Literal:
            return e.value;
        case Expr::Kind::Unary:
            return apply_unary(e.fn, evaluate_at(*e.a, state));
        case Expr::Kind::Binary:
            return apply_binary(e.op, evaluate_at(*e.a, state), evaluate_at(*e.b, state));
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------------
// Canonicalization and skeleton keys
// ---------------------------------------------------------------------------

namespace {

bool is_literal(const ExprPtr& e) { return e->kind == Expr::Kind::Literal; }

void flatten(BinaryOp op, const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (e->kind == Expr::Kind::Binary && e->op == op) {
        flatten(op, e->a, out);
        flatten(op, e->b, out);
    } else {
        out.push_back(e);
    }
}

ExprPtr rebuild_sorted(BinaryOp op, std::vector<ExprPtr> parts) {
    std::sort(parts.begin(), parts.end(), [](const ExprPtr& x, const ExprPtr& y) {
        return render(*x) < render(*y);
    });
    ExprPtr acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = Expr::make_binary(op, acc, parts[i]);
    return acc;
}

ExprPtr canon_chain(BinaryOp op, const ExprPtr& node) {
    std::vector<ExprPtr> parts;
    flatten(op, node, parts);

    const double identity = (op == BinaryOp::Add) ? 0.0 : 1.0;
    double folded = identity;
    std::vector<ExprPtr> rest;
    for (const ExprPtr& p : parts) {
        if (is_literal(p))
            folded = (op == BinaryOp::Add) ? folded + p->value : folded * p->value;
        else
            rest.push_back(p);
    }
    if (rest.empty()) return Expr::make_literal(folded);
    if (folded != identity) rest.push_back(Expr::make_literal(folded));
    if (rest.size() == 1) return rest.front();
    return rebuild_sorted(op, std::move(rest));
}

ExprPtr canon(const ExprPtr& e);

// Expands x**n (small integral n) into a flattened product so that "x0**2"
// and "x0*x0" share one canonical structure.
std::optional<ExprPtr> expand_pow(const ExprPtr& base, double exponent) {
    const double rounded = std::round(exponent);
    if (std::fabs(exponent - rounded) > 1e-12) return std::nullopt;
    const int n = static_cast<int>(rounded);
    if (n == 0) return Expr::make_literal(1.0);
    if (std::abs(n) > 6) return std::nullopt;
    ExprPtr prod = base;
    for (int i = 1; i < std::abs(n); ++i) prod = Expr::make_binary(BinaryOp::Mul, prod, base);
    if (n > 0) return prod;
    return Expr::make_binary(BinaryOp::Div, Expr::make_literal(1.0), prod);
}

ExprPtr canon(const ExprPtr& e) {
    switch (e->kind) {
        case Expr::Kind::Variable:
        case Expr::Kind::Literal:
            return e;
        case Expr::Kind::Unary:
            return Expr::make_unary(e->fn, canon(e->a));
        case Expr::Kind::Binary: {
            ExprPtr a = canon(e->a);
            ExprPtr b = canon(e->b);
            if (is_literal(a) && is_literal(b) && e->op != BinaryOp::Pow)
                return Expr::make_literal(apply_binary(e->op, a->value, b->value));
            switch (e->op) {
                case BinaryOp::Add:
                case BinaryOp::Mul:
                    return canon_chain(e->op, Expr::make_binary(e->op, a, b));
                case BinaryOp::Sub:
                case BinaryOp::Div:
                    return Expr::make_binary(e->op, a, b);
                case BinaryOp::Pow: {
                    if (is_literal(b)) {
                        if (auto expanded = expand_pow(a, b->value)) return canon(*expanded);
                    }
                    return Expr::make_binary(BinaryOp::Pow, a, b);
                }
            }
        }
    }
    return e;
}

// Removes top-level numeric factors from a canonical tree. Returns nullptr
// when the whole term was numeric; `coefficient` accumulates what was removed.
ExprPtr strip_numeric_factors(const ExprPtr& e, double& coefficient) {
    if (e->kind == Expr::Kind::Literal) {
        coefficient *= e->value;
        return nullptr;
    }
    if (e->kind == Expr::Kind::Binary && e->op == BinaryOp::Mul) {
        std::vector<ExprPtr> parts;
        flatten(BinaryOp::Mul, e, parts);
        std::vector<ExprPtr> rest;
        for (const ExprPtr& p : parts) {
            if (is_literal(p))
                coefficient *= p->value;
            else
                rest.push_back(p);
        }
        if (rest.empty()) return nullptr;
        if (rest.size() == 1) return rest.front();
        return rebuild_sorted(BinaryOp::Mul, std::move(rest));
    }
    if (e->kind == Expr::Kind::Binary && e->op == BinaryOp::Div) {
        double num_coeff = 1.0;
        double den_coeff = 1.0;
        ExprPtr num = strip_numeric_factors(e->a, num_coeff);
        ExprPtr den = strip_numeric_factors(e->b, den_coeff);
        coefficient *= num_coeff / den_coeff;
        if (!num && !den) return nullptr;
        if (!den) return num;
        if (!num) num = Expr::make_literal(1.0);
        return Expr::make_binary(BinaryOp::Div, num, den);
    }
    return e;
}

}  // namespace

ExprPtr canonicalize(const Expr& e) {
    // shared_from_this is not available; wrap in a cheap copy of the root
    auto root = std::make_shared<Expr>(e);
    return canon(root);
}

std::string skeleton_key(const Expr& e) {
    ExprPtr c = canonicalize(e);
    double coefficient = 1.0;
    ExprPtr core = strip_numeric_factors(c, coefficient);
    RenderOptions opt;
    opt.round_literals = true;
    if (!core) {
        // pure-constant term: keep the magnitude, the sign belongs to C
        return "C*(" + format_literal(std::fabs(coefficient), opt) + ")";
    }
    return "C*(" + render_impl(*core, opt) + ")";
}

}  // namespace dolq
