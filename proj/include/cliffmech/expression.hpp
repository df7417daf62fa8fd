#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cliffmech/errors.hpp"

// Hamiltonian expressions over positional variables x0..x{8n-1}.
//
// Grammar (whitespace-insensitive):
//   expression := term (('+' | '-') term)*
//   term       := factor (('*' | '/') factor)*
//   factor     := '-' factor | power
//   power      := primary ['^' exponent]
//   exponent   := ['-'] digits                      -- integer literals only
//   primary    := number | variable | function '(' expression ')'
//               | '(' expression ')'
//   number     := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
//   variable   := 'x' digits
//   function   := 'sin' | 'cos' | 'exp' | 'sqrt'
//
// A unary minus applied directly to a number literal folds into a negative
// constant, so printing a tree and reparsing the text reproduces the tree
// node for node.

namespace cliffmech {

enum class UnaryOp { neg, sin, cos, exp, sqrt };
enum class BinaryOp { add, sub, mul, div, pow };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { constant, variable, unary, binary };

    Kind kind;
    double value = 0.0;              // constant
    int index = 0;                   // variable
    UnaryOp uop = UnaryOp::neg;      // unary
    BinaryOp bop = BinaryOp::add;    // binary
    ExprPtr lhs;                     // unary operand / binary left
    ExprPtr rhs;                     // binary right

    static ExprPtr constant(double v) {
        auto node = std::make_shared<ExprNode>();
        node->kind = Kind::constant;
        node->value = v;
        return node;
    }
    static ExprPtr variable(int idx) {
        auto node = std::make_shared<ExprNode>();
        node->kind = Kind::variable;
        node->index = idx;
        return node;
    }
    static ExprPtr unary(UnaryOp op, ExprPtr operand) {
        auto node = std::make_shared<ExprNode>();
        node->kind = Kind::unary;
        node->uop = op;
        node->lhs = std::move(operand);
        return node;
    }
    static ExprPtr binary(BinaryOp op, ExprPtr l, ExprPtr r) {
        auto node = std::make_shared<ExprNode>();
        node->kind = Kind::binary;
        node->bop = op;
        node->lhs = std::move(l);
        node->rhs = std::move(r);
        return node;
    }
};

namespace detail {

inline bool is_const(const ExprPtr& e, double v) {
    return e->kind == ExprNode::Kind::constant && e->value == v;
}

inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_exponent(double v) {
    return std::to_string(static_cast<long long>(std::llround(v)));
}

// Effective precedence of the printed text: add/sub 1, mul/div 2, unary
// minus 3, pow 4, self-delimiting atoms 5. A negative constant prints with a
// leading '-', so its text binds like a unary minus.
inline int print_level(const ExprPtr& e) {
    switch (e->kind) {
        case ExprNode::Kind::constant:
            return e->value < 0 ? 3 : 5;
        case ExprNode::Kind::variable:
            return 5;
        case ExprNode::Kind::unary:
            return e->uop == UnaryOp::neg ? 3 : 5;
        case ExprNode::Kind::binary:
            switch (e->bop) {
                case BinaryOp::add:
                case BinaryOp::sub: return 1;
                case BinaryOp::mul:
                case BinaryOp::div: return 2;
                case BinaryOp::pow: return 4;
            }
    }
    return 5;
}

inline void print_node(const ExprPtr& e, std::string& out);

inline void print_child(const ExprPtr& child, int min_level, std::string& out) {
    if (print_level(child) < min_level) {
        out += '(';
        print_node(child, out);
        out += ')';
    } else {
        print_node(child, out);
    }
}

inline void print_node(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
        case ExprNode::Kind::constant:
            out += format_double(e->value);
            return;
        case ExprNode::Kind::variable:
            out += 'x';
            out += std::to_string(e->index);
            return;
        case ExprNode::Kind::unary:
            switch (e->uop) {
                case UnaryOp::neg:
                    out += '-';
                    print_child(e->lhs, 3, out);
                    return;
                case UnaryOp::sin: out += "sin("; break;
                case UnaryOp::cos: out += "cos("; break;
                case UnaryOp::exp: out += "exp("; break;
                case UnaryOp::sqrt: out += "sqrt("; break;
            }
            print_node(e->lhs, out);
            out += ')';
            return;
        case ExprNode::Kind::binary:
            switch (e->bop) {
                case BinaryOp::add:
                    print_child(e->lhs, 1, out);
                    out += '+';
                    print_child(e->rhs, 2, out);
                    return;
                case BinaryOp::sub:
                    print_child(e->lhs, 1, out);
                    out += '-';
                    print_child(e->rhs, 2, out);
                    return;
                case BinaryOp::mul:
                    print_child(e->lhs, 2, out);
                    out += '*';
                    print_child(e->rhs, 3, out);
                    return;
                case BinaryOp::div:
                    print_child(e->lhs, 2, out);
                    out += '/';
                    print_child(e->rhs, 3, out);
                    return;
                case BinaryOp::pow:
                    print_child(e->lhs, 5, out);
                    out += '^';
                    out += format_exponent(e->rhs->value);
                    return;
            }
    }
}

inline std::string print_tree(const ExprPtr& e) {
    std::string out;
    print_node(e, out);
    return out;
}

inline bool tree_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprNode::Kind::constant: return a->value == b->value;
        case ExprNode::Kind::variable: return a->index == b->index;
        case ExprNode::Kind::unary:
            return a->uop == b->uop && tree_equal(a->lhs, b->lhs);
        case ExprNode::Kind::binary:
            return a->bop == b->bop && tree_equal(a->lhs, b->lhs) && tree_equal(a->rhs, b->rhs);
    }
    return false;
}

inline double eval_node(const ExprPtr& e, const std::vector<double>& x) {
    switch (e->kind) {
        case ExprNode::Kind::constant:
            return e->value;
        case ExprNode::Kind::variable:
            return x[static_cast<std::size_t>(e->index)];
        case ExprNode::Kind::unary: {
            const double v = eval_node(e->lhs, x);
            switch (e->uop) {
                case UnaryOp::neg: return -v;
                case UnaryOp::sin: return std::sin(v);
                case UnaryOp::cos: return std::cos(v);
                case UnaryOp::exp: return std::exp(v);
                case UnaryOp::sqrt:
                    if (v < 0.0) throw evaluation_error("square root of negative value", print_tree(e));
                    return std::sqrt(v);
            }
            return 0.0;
        }
        case ExprNode::Kind::binary: {
            const double l = eval_node(e->lhs, x);
            switch (e->bop) {
                case BinaryOp::add: return l + eval_node(e->rhs, x);
                case BinaryOp::sub: return l - eval_node(e->rhs, x);
                case BinaryOp::mul: return l * eval_node(e->rhs, x);
                case BinaryOp::div: {
                    const double r = eval_node(e->rhs, x);
                    if (r == 0.0) throw evaluation_error("division by zero", print_tree(e));
                    return l / r;
                }
                case BinaryOp::pow: {
                    const long long k = std::llround(e->rhs->value);
                    if (k == 0) return 1.0;
                    if (k < 0 && l == 0.0)
                        throw evaluation_error("zero raised to a negative power", print_tree(e));
                    double acc = 1.0, base = l;
                    long long m = k < 0 ? -k : k;
                    while (m > 0) {
                        if (m & 1) acc *= base;
                        base *= base;
                        m >>= 1;
                    }
                    return k < 0 ? 1.0 / acc : acc;
                }
            }
            return 0.0;
        }
    }
    return 0.0;
}

// Smart constructors used by differentiate: constant folding plus the 0/1
// identities, nothing stronger. Constants are kept on the left of products
// so that chains like c1*(c2*u) fold.
inline ExprPtr fold_neg(const ExprPtr& u) {
    if (u->kind == ExprNode::Kind::constant) return ExprNode::constant(-u->value);
    if (u->kind == ExprNode::Kind::unary && u->uop == UnaryOp::neg) return u->lhs;
    return ExprNode::unary(UnaryOp::neg, u);
}

inline ExprPtr fold_add(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind == ExprNode::Kind::constant && b->kind == ExprNode::Kind::constant)
        return ExprNode::constant(a->value + b->value);
    return ExprNode::binary(BinaryOp::add, a, b);
}

inline ExprPtr fold_sub(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(b, 0.0)) return a;
    if (a->kind == ExprNode::Kind::constant && b->kind == ExprNode::Kind::constant)
        return ExprNode::constant(a->value - b->value);
    if (is_const(a, 0.0)) return fold_neg(b);
    return ExprNode::binary(BinaryOp::sub, a, b);
}

inline ExprPtr fold_mul(ExprPtr a, ExprPtr b) {
    if (b->kind == ExprNode::Kind::constant && a->kind != ExprNode::Kind::constant) std::swap(a, b);
    if (is_const(a, 0.0)) return ExprNode::constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (a->kind == ExprNode::Kind::constant) {
        if (b->kind == ExprNode::Kind::constant) return ExprNode::constant(a->value * b->value);
        if (b->kind == ExprNode::Kind::binary && b->bop == BinaryOp::mul &&
            b->lhs->kind == ExprNode::Kind::constant)
            return fold_mul(ExprNode::constant(a->value * b->lhs->value), b->rhs);
    }
    return ExprNode::binary(BinaryOp::mul, a, b);
}

inline ExprPtr fold_div(const ExprPtr& a, const ExprPtr& b) {
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return ExprNode::constant(0.0);
    if (is_const(b, 1.0)) return a;
    if (a->kind == ExprNode::Kind::constant && b->kind == ExprNode::Kind::constant &&
        b->value != 0.0)
        return ExprNode::constant(a->value / b->value);
    return ExprNode::binary(BinaryOp::div, a, b);
}

inline ExprPtr fold_pow(const ExprPtr& base, long long k) {
    if (k == 0) return ExprNode::constant(1.0);
    if (k == 1) return base;
    return ExprNode::binary(BinaryOp::pow, base, ExprNode::constant(static_cast<double>(k)));
}

inline ExprPtr diff_node(const ExprPtr& e, int var) {
    switch (e->kind) {
        case ExprNode::Kind::constant:
            return ExprNode::constant(0.0);
        case ExprNode::Kind::variable:
            return ExprNode::constant(e->index == var ? 1.0 : 0.0);
        case ExprNode::Kind::unary: {
            const ExprPtr du = diff_node(e->lhs, var);
            switch (e->uop) {
                case UnaryOp::neg:
                    return fold_neg(du);
                case UnaryOp::sin:
                    return fold_mul(ExprNode::unary(UnaryOp::cos, e->lhs), du);
                case UnaryOp::cos:
                    return fold_neg(fold_mul(ExprNode::unary(UnaryOp::sin, e->lhs), du));
                case UnaryOp::exp:
                    return fold_mul(ExprNode::unary(UnaryOp::exp, e->lhs), du);
                case UnaryOp::sqrt:
                    return fold_div(du, fold_mul(ExprNode::constant(2.0),
                                                 ExprNode::unary(UnaryOp::sqrt, e->lhs)));
            }
            return ExprNode::constant(0.0);
        }
        case ExprNode::Kind::binary: {
            switch (e->bop) {
                case BinaryOp::add:
                    return fold_add(diff_node(e->lhs, var), diff_node(e->rhs, var));
                case BinaryOp::sub:
                    return fold_sub(diff_node(e->lhs, var), diff_node(e->rhs, var));
                case BinaryOp::mul:
                    return fold_add(fold_mul(diff_node(e->lhs, var), e->rhs),
                                    fold_mul(e->lhs, diff_node(e->rhs, var)));
                case BinaryOp::div:
                    return fold_div(fold_sub(fold_mul(diff_node(e->lhs, var), e->rhs),
                                             fold_mul(e->lhs, diff_node(e->rhs, var))),
                                    fold_pow(e->rhs, 2));
                case BinaryOp::pow: {
                    const long long k = std::llround(e->rhs->value);
                    if (k == 0) return ExprNode::constant(0.0);
                    return fold_mul(fold_mul(ExprNode::constant(static_cast<double>(k)),
                                             fold_pow(e->lhs, k - 1)),
                                    diff_node(e->lhs, var));
                }
            }
            return ExprNode::constant(0.0);
        }
    }
    return ExprNode::constant(0.0);
}

}  // namespace detail

/// Immutable expression tree over x0..x{dimension-1}. Evaluation is pure;
/// one tree may be evaluated concurrently from many threads.
class Expression {
public:
    Expression(ExprPtr root, int dimension) : root_(std::move(root)), dimension_(dimension) {}

    const ExprPtr& root() const noexcept { return root_; }
    int dimension() const noexcept { return dimension_; }

    double evaluate(const std::vector<double>& x) const {
        if (x.size() != static_cast<std::size_t>(dimension_))
            throw std::invalid_argument("Expression::evaluate: point length mismatch");
        return detail::eval_node(root_, x);
    }

    Expression differentiate(int var) const {
        return Expression(detail::diff_node(root_, var), dimension_);
    }

    std::vector<Expression> gradient() const {
        std::vector<Expression> out;
        out.reserve(dimension_);
        for (int a = 0; a < dimension_; ++a) out.push_back(differentiate(a));
        return out;
    }

    std::string str() const { return detail::print_tree(root_); }

    friend bool operator==(const Expression& a, const Expression& b) {
        return a.dimension_ == b.dimension_ && detail::tree_equal(a.root_, b.root_);
    }

private:
    ExprPtr root_;
    int dimension_;
};

namespace detail {

class Parser {
public:
    Parser(std::string_view text, int dimension) : text_(text), dimension_(dimension) {}

    ExprPtr run() {
        skip_ws();
        ExprPtr e = parse_expression();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input", {"end of input", "operator"});
        return e;
    }

private:
    [[noreturn]] void fail(std::string message, std::vector<std::string> expected,
                           std::size_t at = SIZE_MAX) {
        ParseDiagnostics diag;
        diag.offset = at == SIZE_MAX ? pos_ : at;
        diag.message = std::move(message);
        diag.expected = std::move(expected);
        throw parse_error(std::move(diag));
    }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }

    ExprPtr parse_expression() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = ExprNode::binary(BinaryOp::add, lhs, parse_term());
            else if (accept('-')) lhs = ExprNode::binary(BinaryOp::sub, lhs, parse_term());
            else return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        for (;;) {
            if (accept('*')) lhs = ExprNode::binary(BinaryOp::mul, lhs, parse_factor());
            else if (accept('/')) lhs = ExprNode::binary(BinaryOp::div, lhs, parse_factor());
            else return lhs;
        }
    }

    ExprPtr parse_factor() {
        if (accept('-')) {
            ExprPtr operand = parse_factor();
            // A minus on a bare constant folds into a negative constant, so
            // printed negative literals reparse to the identical node.
            if (operand->kind == ExprNode::Kind::constant)
                return ExprNode::constant(-operand->value);
            return ExprNode::unary(UnaryOp::neg, operand);
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos_;
            bool negative = false;
            if (pos_ < text_.size() && text_[pos_] == '-') { negative = true; ++pos_; }
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("integer exponent expected", {"integer literal"}, at);
            long long k = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                k = k * 10 + (text_[pos_] - '0');
                ++pos_;
            }
            if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
                fail("integer exponent expected", {"integer literal"}, at);
            return ExprNode::binary(BinaryOp::pow, base,
                                    ExprNode::constant(static_cast<double>(negative ? -k : k)));
        }
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size())
            fail("expression expected", {"number", "variable", "function", "'('"});
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return ExprNode::constant(parse_number_literal());
        }
        if (c == '(') {
            ++pos_;
            ExprPtr inner = parse_expression();
            if (!accept(')')) fail("missing closing parenthesis", {"')'"});
            return inner;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word == "x") {
                if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    fail("variable index expected", {"digits"}, pos_);
                long long idx = 0;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    idx = idx * 10 + (text_[pos_] - '0');
                    ++pos_;
                }
                if (idx >= dimension_)
                    fail("variable index out of range for dimension " + std::to_string(dimension_),
                         {"x0..x" + std::to_string(dimension_ - 1)}, start);
                return ExprNode::variable(static_cast<int>(idx));
            }
            UnaryOp op;
            if (word == "sin") op = UnaryOp::sin;
            else if (word == "cos") op = UnaryOp::cos;
            else if (word == "exp") op = UnaryOp::exp;
            else if (word == "sqrt") op = UnaryOp::sqrt;
            else
                fail("unknown identifier '" + std::string(word) + "'",
                     {"sin", "cos", "exp", "sqrt", "variable"}, start);
            if (!accept('(')) fail("'(' expected after function name", {"'('"});
            ExprPtr arg = parse_expression();
            if (!accept(')')) fail("missing closing parenthesis", {"')'"});
            return ExprNode::unary(op, arg);
        }
        fail(std::string("unexpected character '") + c + "'",
             {"number", "variable", "function", "'('"});
    }

    double parse_number_literal() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // 'e' belonged to something else; not part of the number
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto res = std::from_chars(first, last, value);
        if (res.ec != std::errc() || res.ptr != last)
            fail("malformed number literal", {"number"}, start);
        return value;
    }

    std::string_view text_;
    int dimension_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses `text` over variables x0..x{dimension-1}; throws parse_error with
/// byte-offset diagnostics on malformed input or out-of-range variables.
inline Expression parse(const std::string& text, int dimension) {
    if (dimension < 1) throw std::invalid_argument("parse: dimension must be >= 1");
    detail::Parser p(text, dimension);
    return Expression(p.run(), dimension);
}

inline Expression differentiate(const Expression& e, int var) { return e.differentiate(var); }

inline std::vector<Expression> gradient(const Expression& e) { return e.gradient(); }

}  // namespace cliffmech
