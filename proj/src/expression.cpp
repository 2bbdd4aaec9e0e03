#include "virasoro/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace vir {

struct Expression::Node {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Log };
    Kind kind;
    double value = 0.0;  // Number
    int var = 0;         // Var: 0, 1, 2
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression '" + std::string(text_) + "': " + what + " at column " +
                                    std::to_string(pos_ + 1));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Node::Kind::Add, lhs, term());
            else if (accept('-')) lhs = make(Node::Kind::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Node::Kind::Mul, lhs, unary());
            else if (accept('/')) lhs = make(Node::Kind::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Kind::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Node::Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        const std::string rest(text_.substr(pos_));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(rest, &used);
        } catch (const std::exception&) {
            fail("malformed number");
        }
        pos_ += used;
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Number;
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "x1" || name == "x2" || name == "x3") {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Var;
            n->var = name[1] - '1';
            return n;
        }
        if (name == "pi") {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Number;
            n->value = std::numbers::pi;
            return n;
        }
        Node::Kind k;
        if (name == "sin") k = Node::Kind::Sin;
        else if (name == "cos") k = Node::Kind::Cos;
        else if (name == "exp") k = Node::Kind::Exp;
        else if (name == "log") k = Node::Kind::Log;
        else {
            pos_ = start;
            fail("unknown identifier '" + std::string(name) + "'");
        }
        if (!accept('(')) fail("expected '(' after function name");
        NodePtr arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make(k, arg);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double eval(const Node& n, const double (&x)[3]) {
    switch (n.kind) {
        case Node::Kind::Number: return n.value;
        case Node::Kind::Var: return x[n.var];
        case Node::Kind::Neg: return -eval(*n.lhs, x);
        case Node::Kind::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
        case Node::Kind::Sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
        case Node::Kind::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
        case Node::Kind::Div: return eval(*n.lhs, x) / eval(*n.rhs, x);
        case Node::Kind::Pow: {
            const double b = eval(*n.lhs, x);
            const double e = eval(*n.rhs, x);
            // Small integer exponents by repeated multiplication keep
            // negative bases valid.
            if (e == std::nearbyint(e) && std::abs(e) <= 16.0) {
                double r = 1.0;
                for (int i = 0; i < static_cast<int>(std::abs(e)); ++i) r *= b;
                return e < 0.0 ? 1.0 / r : r;
            }
            return std::pow(b, e);
        }
        case Node::Kind::Sin: return std::sin(eval(*n.lhs, x));
        case Node::Kind::Cos: return std::cos(eval(*n.lhs, x));
        case Node::Kind::Exp: return std::exp(eval(*n.lhs, x));
        case Node::Kind::Log: return std::log(eval(*n.lhs, x));
    }
    return 0.0;
}

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expression Expression::parse(std::string_view text) {
    Parser p(text);
    return Expression(p.parse(), std::string(text));
}

double Expression::operator()(double x1, double x2, double x3) const {
    const double x[3] = {x1, x2, x3};
    return eval(*root_, x);
}

}  // namespace vir
