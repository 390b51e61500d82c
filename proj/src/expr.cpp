#include "gpimage/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "gpimage/errors.hpp"

namespace gpimage {

struct Expr::Node {
    enum class Kind { constant, variable, add, mul, pow, sin, cos, exp };
    Kind kind = Kind::constant;
    double value = 0.0;
    int exponent = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Kind = Expr::Node::Kind;
using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make(Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0, int exponent = 0) {
    auto n = std::make_shared<Expr::Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->value = value;
    n->exponent = exponent;
    return n;
}

NodePtr make_constant(double v) { return make(Kind::constant, nullptr, nullptr, v); }

bool is_const(const NodePtr& n, double v) { return n->kind == Kind::constant && n->value == v; }

double eval(const Expr::Node& n, double x) {
    switch (n.kind) {
    case Kind::constant: return n.value;
    case Kind::variable: return x;
    case Kind::add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Kind::mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Kind::pow: {
        const double b = eval(*n.lhs, x);
        double r = 1.0;
        for (int i = 0; i < n.exponent; ++i) r *= b;
        return r;
    }
    case Kind::sin: return std::sin(eval(*n.lhs, x));
    case Kind::cos: return std::cos(eval(*n.lhs, x));
    case Kind::exp: return std::exp(eval(*n.lhs, x));
    }
    return 0.0;
}

NodePtr add(const NodePtr& a, const NodePtr& b) {
    if (a->kind == Kind::constant && b->kind == Kind::constant) return make_constant(a->value + b->value);
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    return make(Kind::add, a, b);
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
    if (a->kind == Kind::constant && b->kind == Kind::constant) return make_constant(a->value * b->value);
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    // keep constants on the left so c1*(c2*e) folds
    if (b->kind == Kind::constant) return mul(b, a);
    if (a->kind == Kind::constant && b->kind == Kind::mul && b->lhs->kind == Kind::constant)
        return mul(make_constant(a->value * b->lhs->value), b->rhs);
    return make(Kind::mul, a, b);
}

NodePtr power(const NodePtr& base, int exponent) {
    if (exponent < 0) throw ParameterError("negative exponents are not supported");
    if (exponent == 0) return make_constant(1.0);
    if (exponent == 1) return base;
    if (base->kind == Kind::constant) return make_constant(eval(*make(Kind::pow, base, nullptr, 0.0, exponent), 0.0));
    return make(Kind::pow, base, nullptr, 0.0, exponent);
}

NodePtr unary(Kind kind, const NodePtr& a) {
    if (a->kind == Kind::constant) {
        const double v = a->value;
        switch (kind) {
        case Kind::sin: return make_constant(std::sin(v));
        case Kind::cos: return make_constant(std::cos(v));
        case Kind::exp: return make_constant(std::exp(v));
        default: break;
        }
    }
    return make(kind, a);
}

NodePtr differentiate(const NodePtr& n) {
    switch (n->kind) {
    case Kind::constant: return make_constant(0.0);
    case Kind::variable: return make_constant(1.0);
    case Kind::add: return add(differentiate(n->lhs), differentiate(n->rhs));
    case Kind::mul:
        return add(mul(differentiate(n->lhs), n->rhs), mul(n->lhs, differentiate(n->rhs)));
    case Kind::pow:
        return mul(mul(make_constant(n->exponent), power(n->lhs, n->exponent - 1)), differentiate(n->lhs));
    case Kind::sin: return mul(unary(Kind::cos, n->lhs), differentiate(n->lhs));
    case Kind::cos: return mul(mul(make_constant(-1.0), unary(Kind::sin, n->lhs)), differentiate(n->lhs));
    case Kind::exp: return mul(n, differentiate(n->lhs));
    }
    return make_constant(0.0);
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string render(const Expr::Node& n);

std::string render_factor(const Expr::Node& n) {
    if (n.kind == Kind::add) return "(" + render(n) + ")";
    return render(n);
}

std::string render(const Expr::Node& n) {
    switch (n.kind) {
    case Kind::constant: return format_number(n.value);
    case Kind::variable: return "x";
    case Kind::add: return render(*n.lhs) + " + " + render(*n.rhs);
    case Kind::mul: return render_factor(*n.lhs) + "*" + render_factor(*n.rhs);
    case Kind::pow: {
        const bool atomic = n.lhs->kind == Kind::variable ||
                            n.lhs->kind == Kind::sin || n.lhs->kind == Kind::cos || n.lhs->kind == Kind::exp;
        return (atomic ? render(*n.lhs) : "(" + render(*n.lhs) + ")") + "^" + std::to_string(n.exponent);
    }
    case Kind::sin: return "sin(" + render(*n.lhs) + ")";
    case Kind::cos: return "cos(" + render(*n.lhs) + ")";
    case Kind::exp: return "exp(" + render(*n.lhs) + ")";
    }
    return {};
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_blanks();
        if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("expression: " + msg, 1, static_cast<int>(pos_) + 1);
    }

    void skip_blanks() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool accept(char c) {
        skip_blanks();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (accept('+')) lhs = add(lhs, term());
            else if (accept('-')) lhs = add(lhs, mul(make_constant(-1.0), term()));
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary_minus();
        while (accept('*')) lhs = mul(lhs, unary_minus());
        return lhs;
    }

    NodePtr unary_minus() {
        if (accept('-')) return mul(make_constant(-1.0), unary_minus());
        return pow_expr();
    }

    NodePtr pow_expr() {
        NodePtr base = primary();
        if (accept('^')) {
            skip_blanks();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == start) fail("expected a non-negative integer exponent");
            int exponent = 0;
            auto res = std::from_chars(text_.data() + start, text_.data() + pos_, exponent);
            if (res.ec != std::errc()) {
                pos_ = start;
                fail("exponent out of range");
            }
            base = power(base, exponent);
        }
        return base;
    }

    NodePtr primary() {
        skip_blanks();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (accept('(')) {
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word == "x") return make(Kind::variable);
            Kind kind;
            if (word == "sin") kind = Kind::sin;
            else if (word == "cos") kind = Kind::cos;
            else if (word == "exp") kind = Kind::exp;
            else {
                pos_ = start;
                fail("unknown identifier '" + std::string(word) + "'");
            }
            expect('(');
            NodePtr arg = expr();
            expect(')');
            return unary(kind, arg);
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            const std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return pos_ - s;
        };
        std::size_t n = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) fail("malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail("malformed exponent");
        }
        double v = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return make_constant(v);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

Expr::Expr() : node_(make_constant(0.0)) {}

Expr Expr::constant(double value) { return Expr(make_constant(value)); }
Expr Expr::variable() { return Expr(make(Kind::variable)); }
Expr Expr::parse(std::string_view text) { return Expr(Parser(text).parse()); }

double Expr::operator()(double x) const { return eval(*node_, x); }
Expr Expr::derivative() const { return Expr(differentiate(node_)); }

Expr Expr::derivative(int order) const {
    NodePtr n = node_;
    for (int i = 0; i < order; ++i) n = differentiate(n);
    return Expr(n);
}

bool Expr::is_zero() const { return is_const(node_, 0.0); }

std::optional<double> Expr::constant_value() const {
    if (node_->kind == Kind::constant) return node_->value;
    return std::nullopt;
}

std::string Expr::to_string() const { return render(*node_); }

Expr operator+(const Expr& a, const Expr& b) { return Expr(add(a.node_, b.node_)); }
Expr operator*(const Expr& a, const Expr& b) { return Expr(mul(a.node_, b.node_)); }
Expr operator-(const Expr& a) { return Expr(mul(make_constant(-1.0), a.node_)); }
Expr pow(const Expr& base, int exponent) { return Expr(power(base.node_, exponent)); }
Expr sin(const Expr& a) { return Expr(unary(Kind::sin, a.node_)); }
Expr cos(const Expr& a) { return Expr(unary(Kind::cos, a.node_)); }
Expr exp(const Expr& a) { return Expr(unary(Kind::exp, a.node_)); }

} // namespace gpimage
