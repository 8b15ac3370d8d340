#include "rfl/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <cstdlib>

#include "rfl/errors.hpp"

namespace rfl {

namespace {

using Term = TrigExpression::Term;
using Factor = TrigExpression::Factor;
using Func = TrigExpression::Func;
using Sum = std::vector<Term>;

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Sum parse() {
        Sum out = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return out;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const char* what) const {
        throw ConfigError("expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail((std::string("expected '") + c + "'").c_str());
    }

    bool peek_number() {
        skip();
        return pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.');
    }

    double number() {
        skip();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("expected a number");
        pos_ += static_cast<std::size_t>(end - begin);
        if (!std::isfinite(v)) fail("number out of range");
        return v;
    }

    int var_axis(char c) const {
        switch (c) {
            case 'x': return 0;
            case 'y': return 1;
            case 'z': return 2;
            case 'w': return 3;
            default: return -1;
        }
    }

    std::string word() {
        skip();
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return s_.substr(b, pos_ - b);
    }

    static Sum multiply(const Sum& a, const Sum& b) {
        Sum out;
        for (const Term& ta : a)
            for (const Term& tb : b) {
                Term t;
                t.coef = ta.coef * tb.coef;
                t.factors = ta.factors;
                t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
                out.push_back(std::move(t));
            }
        return out;
    }

    Sum expr() {
        double sign = 1.0;
        if (accept('-')) sign = -1.0;
        else accept('+');
        Sum out = term();
        for (Term& t : out) t.coef *= sign;
        for (;;) {
            if (accept('+')) sign = 1.0;
            else if (accept('-')) sign = -1.0;
            else break;
            Sum next = term();
            for (Term& t : next) {
                t.coef *= sign;
                out.push_back(std::move(t));
            }
        }
        return out;
    }

    Sum term() {
        Sum out = factor();
        while (accept('*')) out = multiply(out, factor());
        return out;
    }

    Sum factor() {
        if (accept('(')) {
            Sum inner = expr();
            expect(')');
            return inner;
        }
        if (peek_number()) {
            Term t;
            t.coef = number();
            return {t};
        }
        const std::size_t at = pos_;
        const std::string w = word();
        if (w.size() == 1 && var_axis(w[0]) >= 0) {
            Term t;
            t.factors.push_back({Func::var, var_axis(w[0]), 1.0, 0.0});
            return {t};
        }
        if (w == "sin" || w == "cos") {
            expect('(');
            double k = 1.0;
            if (peek_number()) {
                k = number();
                expect('*');
            }
            const std::string v = word();
            if (v.size() != 1 || var_axis(v[0]) < 0) fail("expected a coordinate x, y, z or w");
            double shift = 0.0;
            if (accept('+')) shift = number();
            else if (accept('-')) shift = -number();
            expect(')');
            Term t;
            t.factors.push_back({w == "sin" ? Func::sin : Func::cos, var_axis(v[0]), k, shift});
            return {t};
        }
        pos_ = at;
        fail("expected a number, coordinate, sin(...) or cos(...)");
    }
};

// Value and first two derivatives of one factor along its own axis.
void factor_jet(const Factor& f, const double* x, double& v, double& d1, double& d2) {
    const double a = f.k * x[f.axis] + f.shift;
    switch (f.func) {
        case Func::sin:
            v = std::sin(a);
            d1 = f.k * std::cos(a);
            d2 = -f.k * f.k * v;
            return;
        case Func::cos:
            v = std::cos(a);
            d1 = -f.k * std::sin(a);
            d2 = -f.k * f.k * v;
            return;
        case Func::var:
            v = x[f.axis];
            d1 = 1.0;
            d2 = 0.0;
            return;
    }
}

} // namespace

TrigExpression TrigExpression::parse(const std::string& text) {
    TrigExpression e;
    e.text_ = text;
    e.terms_ = Parser(text).parse();
    return e;
}

TrigExpression TrigExpression::constant(double c) {
    TrigExpression e;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", c);
    e.text_ = buf;
    Term t;
    t.coef = c;
    e.terms_.push_back(t);
    return e;
}

int TrigExpression::arity() const noexcept {
    int a = 0;
    for (const Term& t : terms_)
        for (const Factor& f : t.factors) a = std::max(a, f.axis + 1);
    return a;
}

double TrigExpression::value(const double* x) const {
    double acc = 0.0;
    for (const Term& t : terms_) {
        double p = t.coef;
        for (const Factor& f : t.factors) {
            double v = 0.0, d1 = 0.0, d2 = 0.0;
            factor_jet(f, x, v, d1, d2);
            p *= v;
        }
        acc += p;
    }
    return acc;
}

void TrigExpression::gradient(const double* x, int n, double* du) const {
    for (int i = 0; i < n; ++i) du[i] = 0.0;
    std::vector<double> v, d1, d2;
    for (const Term& t : terms_) {
        const std::size_t m = t.factors.size();
        v.resize(m);
        d1.resize(m);
        d2.resize(m);
        for (std::size_t a = 0; a < m; ++a) factor_jet(t.factors[a], x, v[a], d1[a], d2[a]);
        for (std::size_t a = 0; a < m; ++a) {
            const int i = t.factors[a].axis;
            if (i >= n) continue;
            double p = t.coef * d1[a];
            for (std::size_t b = 0; b < m; ++b)
                if (b != a) p *= v[b];
            du[i] += p;
        }
    }
}

void TrigExpression::hessian(const double* x, int n, double* d2u) const {
    for (int i = 0; i < n * n; ++i) d2u[i] = 0.0;
    std::vector<double> v, d1, d2;
    for (const Term& t : terms_) {
        const std::size_t m = t.factors.size();
        v.resize(m);
        d1.resize(m);
        d2.resize(m);
        for (std::size_t a = 0; a < m; ++a) factor_jet(t.factors[a], x, v[a], d1[a], d2[a]);
        for (std::size_t a = 0; a < m; ++a) {
            const int i = t.factors[a].axis;
            if (i >= n) continue;
            // same factor twice
            double p = t.coef * d2[a];
            for (std::size_t c = 0; c < m; ++c)
                if (c != a) p *= v[c];
            d2u[i * n + i] += p;
            for (std::size_t b = 0; b < m; ++b) {
                if (b == a) continue;
                const int j = t.factors[b].axis;
                if (j >= n) continue;
                double q = t.coef * d1[a] * d1[b];
                for (std::size_t c = 0; c < m; ++c)
                    if (c != a && c != b) q *= v[c];
                d2u[i * n + j] += q;
            }
        }
    }
}

} // namespace rfl
