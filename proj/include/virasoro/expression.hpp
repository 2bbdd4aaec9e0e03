#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace vir {

/// Closed-form arithmetic expression in the variables x1, x2, x3.
///
/// Grammar: numbers, the constant pi, binary + - * / ^ (^ is right
/// associative and binds tighter than unary minus), parentheses, and the
/// functions sin, cos, exp, log. Parse errors throw std::invalid_argument
/// carrying the offending column.
class Expression {
public:
    struct Node;

    static Expression parse(std::string_view text);

    double operator()(double x1, double x2, double x3 = 0.0) const;

    const std::string& source() const { return source_; }

private:
    Expression(std::shared_ptr<const Node> root, std::string source);

    std::shared_ptr<const Node> root_;
    std::string source_;
};

}  // namespace vir
