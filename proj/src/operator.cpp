#include "gpimage/operator.hpp"

#include <algorithm>
#include <map>

#include "gpimage/errors.hpp"

namespace gpimage {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

namespace {

std::string default_label(const std::vector<LinearOperator::Term>& terms) {
    if (terms.empty()) return "0";
    if (terms.size() == 1 && terms[0].order == 0 && terms[0].coefficient.constant_value() == 1.0) return "I";
    std::string out;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        if (!out.empty()) out += " + ";
        const std::string c = it->coefficient.to_string();
        if (it->order == 0) {
            out += c;
            continue;
        }
        if (c != "1") out += (c.find('+') != std::string::npos ? "(" + c + ")" : c) + "*";
        out += "D^" + std::to_string(it->order);
    }
    return out;
}

} // namespace

LinearOperator::LinearOperator() : LinearOperator({Term{0, Expr::constant(1.0)}}) {}

LinearOperator::LinearOperator(const std::vector<Term>& terms, std::string label) {
    std::map<int, Expr> merged;
    for (const auto& t : terms) {
        if (t.order < 0) throw ParameterError("operator term order must be non-negative");
        auto [it, inserted] = merged.try_emplace(t.order, t.coefficient);
        if (!inserted) it->second = it->second + t.coefficient;
    }
    for (auto& [order, coef] : merged)
        if (!coef.is_zero()) terms_.push_back({order, coef});
    order_ = terms_.empty() ? 0 : terms_.back().order;
    for (const auto& t : terms_) {
        std::vector<Expr> table{t.coefficient};
        for (int d = 1; d <= kTabulated; ++d) table.push_back(table.back().derivative());
        coefficient_derivatives_.push_back(std::move(table));
    }
    label_ = label.empty() ? default_label(terms_) : std::move(label);
}

LinearOperator LinearOperator::identity() { return LinearOperator(); }

LinearOperator LinearOperator::derivative(int order) {
    return LinearOperator({Term{order, Expr::constant(1.0)}}, order == 0 ? "I" : "D^" + std::to_string(order));
}

LinearOperator LinearOperator::term(int order, const Expr& coefficient) {
    return LinearOperator({Term{order, coefficient}});
}

bool LinearOperator::is_identity() const {
    return terms_.size() == 1 && terms_[0].order == 0 && terms_[0].coefficient.constant_value() == 1.0;
}

double LinearOperator::coefficient_derivative(std::size_t term_index, int deriv, double x) const {
    const auto& table = coefficient_derivatives_[term_index];
    if (deriv <= kTabulated) return table[deriv](x);
    return table.back().derivative(deriv - kTabulated)(x);
}

double LinearOperator::combine(double x, const std::vector<double>& derivatives) const {
    double acc = 0.0;
    for (std::size_t t = 0; t < terms_.size(); ++t)
        acc += coefficient_derivative(t, 0, x) * derivatives[terms_[t].order];
    return acc;
}

LinearOperator compose(const LinearOperator& s, const LinearOperator& t) {
    // b_j D^j (a_i D^i f) = Σ_l C(j, l) b_j a_i^{(j−l)} D^{i+l} f
    std::vector<LinearOperator::Term> out;
    for (const auto& outer : s.terms()) {
        for (const auto& inner : t.terms()) {
            const int j = outer.order;
            for (int l = 0; l <= j; ++l) {
                Expr c = Expr::constant(binomial(j, l)) * outer.coefficient * inner.coefficient.derivative(j - l);
                out.push_back({inner.order + l, c});
            }
        }
    }
    return LinearOperator(out);
}

LinearOperator add(const LinearOperator& s, const LinearOperator& t) {
    std::vector<LinearOperator::Term> out = s.terms();
    out.insert(out.end(), t.terms().begin(), t.terms().end());
    return LinearOperator(out);
}

LinearOperator scale(double c, const LinearOperator& t) {
    std::vector<LinearOperator::Term> out;
    for (const auto& term : t.terms()) out.push_back({term.order, Expr::constant(c) * term.coefficient});
    return LinearOperator(out);
}

} // namespace gpimage
