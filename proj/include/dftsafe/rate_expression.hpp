#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace dftsafe {

/// Arithmetic over literals and named parameters (+, *). Immutable; nodes are shared.
class RateExpr {
   public:
    /// The zero expression.
    RateExpr();

    static RateExpr constant(double value);
    static RateExpr parameter(std::string name);

    RateExpr operator+(RateExpr const& other) const;
    RateExpr operator*(RateExpr const& other) const;

    /// Evaluates under the given parameter valuation. Throws MissingParameterError.
    double evaluate(std::map<std::string, double> const& valuation) const;

    /// True iff the expression is the literal constant 0 (no parameters involved).
    bool isLiteralZero() const;

    void collectParameters(std::set<std::string>& out) const;

    /// Compact textual form, parseable by parse().
    std::string str() const;

    /// Parses `expr := term ('+' term)*; term := factor ('*' factor)*; factor := number | ident | '(' expr ')'`.
    static RateExpr parse(std::string_view text);

   private:
    enum class Kind { Constant, Parameter, Add, Mul };

    struct Node {
        Kind kind;
        double value = 0.0;
        std::string param;
        std::shared_ptr<Node const> lhs;
        std::shared_ptr<Node const> rhs;
    };

    explicit RateExpr(std::shared_ptr<Node const> node) : node_(std::move(node)) {}

    static void print(Node const& node, std::string& out, bool parenthesizeAdd);

    std::shared_ptr<Node const> node_;
};

}  // namespace dftsafe
