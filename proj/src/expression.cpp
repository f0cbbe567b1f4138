#include "invsrc/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "invsrc/errors.hpp"

namespace invsrc {

namespace {

[[noreturn]] void parse_fail(const std::string& msg, std::size_t pos) {
    throw std::invalid_argument("expression: " + msg + " at position " + std::to_string(pos));
}

double int_pow(double base, int32_t exponent) {
    if (exponent == 0) return 1.0;  // includes 0^0
    const bool negative = exponent < 0;
    if (negative && base == 0.0) throw evaluation_error("expression: zero raised to a negative power");
    uint64_t e = negative ? -int64_t(exponent) : int64_t(exponent);
    double acc = 1.0, p = base;
    while (e > 0) {
        if (e & 1) acc *= p;
        p *= p;
        e >>= 1;
    }
    return negative ? 1.0 / acc : acc;
}

}  // namespace

// Recursive-descent parser; see the grammar in the header.
struct ExprParser {
    std::string_view s;
    std::size_t pos = 0;
    Expression* out;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    int32_t add(Expression::Node n) {
        out->nodes_.push_back(n);
        return int32_t(out->nodes_.size()) - 1;
    }

    int32_t parse_expr() {
        int32_t lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                int32_t rhs = parse_term();
                lhs = add({Expression::Op::Add, 0.0, 0, lhs, rhs, 0});
            } else if (accept('-')) {
                int32_t rhs = parse_term();
                lhs = add({Expression::Op::Sub, 0.0, 0, lhs, rhs, 0});
            } else {
                return lhs;
            }
        }
    }

    int32_t parse_term() {
        int32_t lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                int32_t rhs = parse_unary();
                lhs = add({Expression::Op::Mul, 0.0, 0, lhs, rhs, 0});
            } else if (accept('/')) {
                int32_t rhs = parse_unary();
                lhs = add({Expression::Op::Div, 0.0, 0, lhs, rhs, 0});
            } else {
                return lhs;
            }
        }
    }

    int32_t parse_unary() {
        if (accept('-')) {
            int32_t inner = parse_unary();
            return add({Expression::Op::Neg, 0.0, 0, inner, -1, 0});
        }
        return parse_power();
    }

    int32_t parse_power() {
        int32_t base = parse_primary();
        if (accept('^')) {
            skip_ws();
            std::size_t start = pos;
            bool neg = false;
            if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
                neg = s[pos] == '-';
                ++pos;
            }
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
                parse_fail("expected integer exponent after '^'", start);
            int64_t e = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                e = e * 10 + (s[pos] - '0');
                if (e > 1'000'000) parse_fail("exponent too large", start);
                ++pos;
            }
            return add({Expression::Op::Pow, 0.0, 0, base, -1, int32_t(neg ? -e : e)});
        }
        return base;
    }

    int32_t parse_primary() {
        skip_ws();
        if (pos >= s.size()) parse_fail("unexpected end of input", pos);
        char c = s[pos];
        if (c == '(') {
            ++pos;
            int32_t inner = parse_expr();
            if (!accept(')')) parse_fail("expected ')'", pos);
            return inner;
        }
        if (c == 'x' || c == 'y' || c == 'k') {
            ++pos;
            uint8_t var = c == 'x' ? 0 : c == 'y' ? 1 : 2;
            return add({Expression::Op::VarRef, 0.0, var, -1, -1, 0});
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s.data() + pos;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) parse_fail("malformed number", pos);
            pos += std::size_t(end - begin);
            return add({Expression::Op::Lit, v, 0, -1, -1, 0});
        }
        parse_fail(std::string("unexpected character '") + c + "'", pos);
    }
};

Expression Expression::parse(std::string_view text) {
    Expression e;
    ExprParser p{text, 0, &e};
    e.root_ = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) parse_fail("trailing input", p.pos);
    e.compute_vars();
    // Keep the trimmed source as the canonical text.
    std::size_t b = 0, len = text.size();
    while (b < len && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (len > b && std::isspace(static_cast<unsigned char>(text[len - 1]))) --len;
    e.text_ = std::string(text.substr(b, len - b));
    return e;
}

Expression Expression::literal(double value) {
    Expression e;
    e.nodes_.push_back({Op::Lit, value, 0, -1, -1, 0});
    e.root_ = 0;
    e.text_ = e.render();
    return e;
}

double Expression::eval(double x, double y, double k) const { return eval_node(root_, x, y, k); }

double Expression::eval_node(int32_t idx, double x, double y, double k) const {
    const Node& n = nodes_[idx];
    switch (n.op) {
        case Op::Lit:
            return n.value;
        case Op::VarRef:
            return n.var == 0 ? x : n.var == 1 ? y : k;
        case Op::Add:
            return eval_node(n.a, x, y, k) + eval_node(n.b, x, y, k);
        case Op::Sub:
            return eval_node(n.a, x, y, k) - eval_node(n.b, x, y, k);
        case Op::Mul:
            return eval_node(n.a, x, y, k) * eval_node(n.b, x, y, k);
        case Op::Div: {
            double den = eval_node(n.b, x, y, k);
            if (den == 0.0) throw evaluation_error("expression: division by zero");
            return eval_node(n.a, x, y, k) / den;
        }
        case Op::Pow:
            return int_pow(eval_node(n.a, x, y, k), n.exponent);
        case Op::Neg:
            return -eval_node(n.a, x, y, k);
    }
    throw std::logic_error("expression: corrupt node");
}

void Expression::compute_vars() {
    vars_ = 0;
    for (const Node& n : nodes_)
        if (n.op == Op::VarRef) vars_ |= 1u << n.var;
}

Expression Expression::shifted_xy(double hx, double hy) const {
    Expression e;
    e.nodes_ = nodes_;
    e.root_ = root_;
    // Rewrite every x into (x - hx) and y into (y - hy) in place: the
    // variable node becomes a subtraction over two appended children.
    const std::size_t original = e.nodes_.size();
    for (std::size_t i = 0; i < original; ++i) {
        // copy first: push_back below may reallocate the node storage
        const Node n = e.nodes_[i];
        if (n.op != Op::VarRef || n.var == 2) continue;
        const double shift = n.var == 0 ? hx : hy;
        e.nodes_.push_back(Node{Op::VarRef, 0.0, n.var, -1, -1, 0});
        e.nodes_.push_back(Node{Op::Lit, shift, 0, -1, -1, 0});
        e.nodes_[i] = Node{Op::Sub, 0.0, 0, int32_t(e.nodes_.size()) - 2,
                           int32_t(e.nodes_.size()) - 1, 0};
    }
    e.compute_vars();
    e.text_ = e.render();
    return e;
}

std::string Expression::render() const {
    std::string out;
    render_node(root_, out);
    return out;
}

void Expression::render_node(int32_t idx, std::string& out) const {
    const Node& n = nodes_[idx];
    auto paren = [&](int32_t child) {
        out += '(';
        render_node(child, out);
        out += ')';
    };
    switch (n.op) {
        case Op::Lit: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            out += buf;
            return;
        }
        case Op::VarRef:
            out += n.var == 0 ? 'x' : n.var == 1 ? 'y' : 'k';
            return;
        case Op::Add:
            paren(n.a);
            out += '+';
            paren(n.b);
            return;
        case Op::Sub:
            paren(n.a);
            out += '-';
            paren(n.b);
            return;
        case Op::Mul:
            paren(n.a);
            out += '*';
            paren(n.b);
            return;
        case Op::Div:
            paren(n.a);
            out += '/';
            paren(n.b);
            return;
        case Op::Pow:
            paren(n.a);
            out += '^';
            out += std::to_string(n.exponent);
            return;
        case Op::Neg:
            out += '-';
            paren(n.a);
            return;
    }
}

}  // namespace invsrc
