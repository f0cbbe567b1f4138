#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace invsrc {

// Variable bitmask values reported by Expression::vars().
inline constexpr unsigned kVarX = 1u << 0;
inline constexpr unsigned kVarY = 1u << 1;
inline constexpr unsigned kVarK = 1u << 2;

// A real-valued arithmetic expression over the variables x, y, k.
//
// Grammar (usual precedence, '^' binds tightest, unary minus below '^'):
//   expr    := term  { ('+'|'-') term }
//   term    := unary { ('*'|'/') unary }
//   unary   := { '-' } power
//   power   := primary [ '^' integer ]          integer may carry a sign
//   primary := number | 'x' | 'y' | 'k' | '(' expr ')'
//
// Profiles are restricted to x,y and spectral weights to k at the model
// level, not here.  Evaluation throws evaluation_error on division by zero
// and on 0 raised to a negative power; 0^0 evaluates to 1.
class Expression {
public:
    // Parses `text`; throws std::invalid_argument with a character position
    // on malformed input.
    static Expression parse(std::string_view text);
    static Expression literal(double value);

    double eval(double x, double y, double k) const;

    // Bitmask of kVarX/kVarY/kVarK actually referenced.
    unsigned vars() const { return vars_; }
    bool uses_only(unsigned allowed) const { return (vars_ & ~allowed) == 0; }

    // Copy with x replaced by (x - hx) and y by (y - hy), so the new
    // expression evaluates the original profile translated by (hx, hy).
    Expression shifted_xy(double hx, double hy) const;

    // Source text for parsed expressions; a rendered form for built ones.
    const std::string& text() const { return text_; }

    bool operator==(const Expression& other) const { return text_ == other.text_; }

private:
    enum class Op : uint8_t { Lit, VarRef, Add, Sub, Mul, Div, Pow, Neg };
    struct Node {
        Op op;
        double value = 0.0;    // Lit
        uint8_t var = 0;       // VarRef: 0=x 1=y 2=k
        int32_t a = -1;        // left / only child
        int32_t b = -1;        // right child
        int32_t exponent = 0;  // Pow
    };

    Expression() = default;
    double eval_node(int32_t idx, double x, double y, double k) const;
    void render_node(int32_t idx, std::string& out) const;
    std::string render() const;
    void compute_vars();

    friend struct ExprParser;

    std::vector<Node> nodes_;
    int32_t root_ = -1;
    unsigned vars_ = 0;
    std::string text_;
};

}  // namespace invsrc
