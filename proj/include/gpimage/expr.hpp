#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace gpimage {

/// Immutable expression in one variable `x`, closed under symbolic differentiation.
///
/// Used for operator coefficients, mean functions and right-hand sides. The
/// textual form accepted by `parse` is:
///
///     expr    := term { ('+'|'-') term }
///     term    := unary { '*' unary }
///     unary   := '-' unary | power
///     power   := primary [ '^' uint ]
///     primary := number | 'x' | fn '(' expr ')' | '(' expr ')'
///     fn      := 'sin' | 'cos' | 'exp'
///     number  := digits [ '.' digits ] [ ('e'|'E') ['+'|'-'] digits ]
///
/// Blanks between tokens are ignored. `a - b` parses as a + (−1)·b.
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(double value);
    static Expr variable();

    /// Throws ParseError with line 1 and the 1-based column of the offending character.
    static Expr parse(std::string_view text);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] Expr derivative() const;
    [[nodiscard]] Expr derivative(int order) const;

    [[nodiscard]] bool is_zero() const;
    [[nodiscard]] std::optional<double> constant_value() const;
    [[nodiscard]] std::string to_string() const;

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a);
    friend Expr pow(const Expr& base, int exponent);
    friend Expr sin(const Expr& a);
    friend Expr cos(const Expr& a);
    friend Expr exp(const Expr& a);

    struct Node;

private:
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);

} // namespace gpimage
