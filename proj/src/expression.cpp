#include "bilat/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <vector>

#include "bilat/errors.hpp"

namespace bilat {

namespace {

struct Node {
    virtual ~Node() = default;
    virtual double eval(double x) const = 0;
};
using NodePtr = std::shared_ptr<const Node>;

struct NumberNode : Node {
    explicit NumberNode(double v) : value(v) {}
    double value;
    double eval(double) const override { return value; }
};

struct VariableNode : Node {
    double eval(double x) const override { return x; }
};

struct UnaryNode : Node {
    enum class Op { negate, sin, cos, exp };
    UnaryNode(Op o, NodePtr c) : op(o), child(std::move(c)) {}
    Op op;
    NodePtr child;
    double eval(double x) const override {
        const double v = child->eval(x);
        switch (op) {
            case Op::negate: return -v;
            case Op::sin: return std::sin(v);
            case Op::cos: return std::cos(v);
            case Op::exp: return std::exp(v);
        }
        return 0.0;
    }
};

struct BinaryNode : Node {
    enum class Op { add, sub, mul, div, pow };
    BinaryNode(Op o, NodePtr l, NodePtr r) : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
    Op op;
    NodePtr lhs, rhs;
    double eval(double x) const override {
        const double a = lhs->eval(x);
        const double b = rhs->eval(x);
        switch (op) {
            case Op::add: return a + b;
            case Op::sub: return a - b;
            case Op::mul: return a * b;
            case Op::div: return a / b;
            case Op::pow: return std::pow(a, b);
        }
        return 0.0;
    }
};

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    NodePtr parse() {
        NodePtr root = parse_sum();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return root;
    }

private:
    const std::string& text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression '" + text_ + "': " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_sum() {
        NodePtr node = parse_product();
        for (;;) {
            if (consume('+')) {
                node = std::make_shared<BinaryNode>(BinaryNode::Op::add, node, parse_product());
            } else if (consume('-')) {
                node = std::make_shared<BinaryNode>(BinaryNode::Op::sub, node, parse_product());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_product() {
        NodePtr node = parse_unary();
        for (;;) {
            if (consume('*')) {
                node = std::make_shared<BinaryNode>(BinaryNode::Op::mul, node, parse_unary());
            } else if (consume('/')) {
                node = std::make_shared<BinaryNode>(BinaryNode::Op::div, node, parse_unary());
            } else {
                return node;
            }
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) {
            return std::make_shared<UnaryNode>(UnaryNode::Op::negate, parse_unary());
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (consume('^')) {
            // right associative; exponent may itself be signed
            NodePtr exponent = parse_unary();
            return std::make_shared<BinaryNode>(BinaryNode::Op::pow, base, exponent);
        }
        return base;
    }

    NodePtr parse_atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("expected operand");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            if (!consume(')')) fail("missing ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        size_t end = pos_;
        auto is_digit = [&](size_t k) {
            return k < text_.size() && std::isdigit(static_cast<unsigned char>(text_[k]));
        };
        while (is_digit(end)) ++end;
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            while (is_digit(end)) ++end;
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            size_t exp_end = end + 1;
            if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) {
                ++exp_end;
            }
            if (is_digit(exp_end)) {
                end = exp_end;
                while (is_digit(end)) ++end;
            }
        }
        const std::string token = text_.substr(pos_, end - pos_);
        try {
            const double value = std::stod(token);
            pos_ = end;
            return std::make_shared<NumberNode>(value);
        } catch (const std::exception&) {
            fail("bad number '" + token + "'");
        }
    }

    NodePtr parse_name() {
        size_t end = pos_;
        while (end < text_.size() && std::isalnum(static_cast<unsigned char>(text_[end]))) {
            ++end;
        }
        const std::string name = text_.substr(pos_, end - pos_);
        pos_ = end;
        if (name == "x") return std::make_shared<VariableNode>();
        if (name == "pi") return std::make_shared<NumberNode>(M_PI);
        UnaryNode::Op op;
        if (name == "sin") {
            op = UnaryNode::Op::sin;
        } else if (name == "cos") {
            op = UnaryNode::Op::cos;
        } else if (name == "exp") {
            op = UnaryNode::Op::exp;
        } else {
            fail("unknown name '" + name + "'");
        }
        if (!consume('(')) fail("function '" + name + "' needs parentheses");
        NodePtr arg = parse_sum();
        if (!consume(')')) fail("missing ')'");
        return std::make_shared<UnaryNode>(op, arg);
    }
};

}  // namespace

std::function<double(double)> parse_expression(const std::string& text) {
    Parser parser(text);
    NodePtr root = parser.parse();
    return [root](double x) { return root->eval(x); };
}

double evaluate_constant_expression(const std::string& text) {
    return parse_expression(text)(0.0);
}

}  // namespace bilat
