#pragma once

#include <string>
#include <vector>

namespace rfl {

/// Sums of products of constants, coordinates and sin/cos of affine coordinate
/// arguments, evaluated (with first and second derivatives) exactly.
///
/// Grammar:
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := number | var | ('sin'|'cos') '(' [number '*'] var [('+'|'-') number] ')' | '(' expr ')'
///   var    := 'x' | 'y' | 'z' | 'w'    (axes 0..3)
/// Parenthesized sums are distributed, so every expression is stored as a flat sum of terms.
class TrigExpression {
public:
    TrigExpression() = default;
    /// Throws ConfigError naming the column of the first unexpected character.
    static TrigExpression parse(const std::string& text);
    static TrigExpression constant(double c);

    const std::string& text() const noexcept { return text_; }
    /// Highest axis referenced + 1 (0 for constants).
    int arity() const noexcept;

    double value(const double* x) const;
    /// ∂_i u for i < n.
    void gradient(const double* x, int n, double* du) const;
    /// ∂_i ∂_j u, row-major n×n.
    void hessian(const double* x, int n, double* d2u) const;

    enum class Func { sin, cos, var };
    struct Factor {
        Func func;
        int axis;
        double k;      // argument slope (1 for var)
        double shift;  // argument offset (0 for var)
    };
    struct Term {
        double coef = 1.0;
        std::vector<Factor> factors;
    };
    const std::vector<Term>& terms() const noexcept { return terms_; }

private:
    std::string text_;
    std::vector<Term> terms_;
};

} // namespace rfl
