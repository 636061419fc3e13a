#include "suborbit/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>
#include <vector>

namespace suborbit::knaster {

enum class Op { Number, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos };

struct Expression::Node {
    Op op = Op::Number;
    double value = 0.0;    // Number
    int index = 0;         // Variable (0-based) or Pow exponent
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0, int index = 0) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->value = value;
    n->index = index;
    return n;
}

class Parser {
  public:
    Parser(std::string_view text, int n) : text_(text), n_(n) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_space();
        if (pos_ != text_.size()) throw ParseError(pos_, "unexpected character '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

  private:
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

    void expect(char c) {
        if (!accept(c)) {
            throw ParseError(pos_, std::string("expected '") + c + "'");
        }
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (true) {
            if (accept('+')) {
                lhs = make(Op::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make(Op::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (true) {
            if (accept('*')) {
                lhs = make(Op::Mul, lhs, factor());
            } else if (accept('/')) {
                lhs = make(Op::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr factor() {
        if (accept('-')) return make(Op::Neg, factor());
        NodePtr b = base();
        if (accept('^')) {
            skip_space();
            const std::size_t start = pos_;
            bool negative = false;
            if (pos_ < text_.size() && text_[pos_] == '-') {
                negative = true;
                ++pos_;
            }
            const long long k = integer();
            if (k > 1024) throw ParseError(start, "exponent too large");
            return make(Op::Pow, b, nullptr, 0.0, static_cast<int>(negative ? -k : k));
        }
        return b;
    }

    long long integer() {
        const std::size_t start = pos_;
        long long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 1'000'000'000) throw ParseError(start, "integer too large");
            ++pos_;
        }
        if (pos_ == start) throw ParseError(start, "expected integer");
        return v;
    }

    NodePtr base() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word == "x") {
                if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    throw ParseError(pos_, "expected variable index after 'x'");
                }
                const long long idx = integer();
                if (idx < 1) throw ParseError(start, "variable indices start at 1");
                if (idx > n_) {
                    throw Error(ErrorKind::DimensionMismatch, "variable x" + std::to_string(idx) +
                                                                  " exceeds input dimension " + std::to_string(n_) +
                                                                  " at position " + std::to_string(start));
                }
                return make(Op::Variable, nullptr, nullptr, 0.0, static_cast<int>(idx - 1));
            }
            if (word == "sin" || word == "cos") {
                expect('(');
                NodePtr arg = expr();
                expect(')');
                return make(word == "sin" ? Op::Sin : Op::Cos, arg);
            }
            throw ParseError(start, "unknown identifier '" + std::string(word) + "'");
        }
        throw ParseError(pos_, "unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc()) throw ParseError(start, "malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return make(Op::Number, nullptr, nullptr, v);
    }

    std::string_view text_;
    int n_;
    std::size_t pos_ = 0;
};

double eval(const Expression::Node& node, const Vec& x) {
    switch (node.op) {
        case Op::Number: return node.value;
        case Op::Variable: return x(node.index);
        case Op::Add: return eval(*node.lhs, x) + eval(*node.rhs, x);
        case Op::Sub: return eval(*node.lhs, x) - eval(*node.rhs, x);
        case Op::Mul: return eval(*node.lhs, x) * eval(*node.rhs, x);
        case Op::Div: return eval(*node.lhs, x) / eval(*node.rhs, x);
        case Op::Pow: return std::pow(eval(*node.lhs, x), node.index);
        case Op::Neg: return -eval(*node.lhs, x);
        case Op::Sin: return std::sin(eval(*node.lhs, x));
        case Op::Cos: return std::cos(eval(*node.lhs, x));
    }
    return 0.0;
}

double eval_grad(const Expression::Node& node, const Vec& x, Vec& g) {
    switch (node.op) {
        case Op::Number:
            g.setZero(x.size());
            return node.value;
        case Op::Variable:
            g.setZero(x.size());
            g(node.index) = 1.0;
            return x(node.index);
        case Op::Neg: {
            const double v = eval_grad(*node.lhs, x, g);
            g = -g;
            return -v;
        }
        case Op::Sin:
        case Op::Cos: {
            const double v = eval_grad(*node.lhs, x, g);
            if (node.op == Op::Sin) {
                g *= std::cos(v);
                return std::sin(v);
            }
            g *= -std::sin(v);
            return std::cos(v);
        }
        case Op::Pow: {
            const double v = eval_grad(*node.lhs, x, g);
            const int k = node.index;
            g *= k == 0 ? 0.0 : k * std::pow(v, k - 1);
            return std::pow(v, k);
        }
        default: break;
    }
    Vec gr;
    const double a = eval_grad(*node.lhs, x, g);
    const double b = eval_grad(*node.rhs, x, gr);
    switch (node.op) {
        case Op::Add: g += gr; return a + b;
        case Op::Sub: g -= gr; return a - b;
        case Op::Mul: g = b * g + a * gr; return a * b;
        case Op::Div: g = (g * b - a * gr) / (b * b); return a / b;
        default: return 0.0;
    }
}

int precedence(const Expression::Node& node) {
    switch (node.op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        case Op::Number: return node.value < 0.0 ? 3 : 5;
        default: return 5;
    }
}

std::string print(const Expression::Node& node);

std::string wrap(const Expression::Node& node, bool parens) {
    return parens ? "(" + print(node) + ")" : print(node);
}

std::string print(const Expression::Node& node) {
    const int prec = precedence(node);
    switch (node.op) {
        case Op::Number: {
            char buf[64];
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), node.value);
            return std::string(buf, ptr);
        }
        case Op::Variable: return "x" + std::to_string(node.index + 1);
        case Op::Add: return wrap(*node.lhs, precedence(*node.lhs) < prec) + " + " + wrap(*node.rhs, precedence(*node.rhs) < prec);
        case Op::Sub: return wrap(*node.lhs, precedence(*node.lhs) < prec) + " - " + wrap(*node.rhs, precedence(*node.rhs) <= prec);
        case Op::Mul: return wrap(*node.lhs, precedence(*node.lhs) < prec) + "*" + wrap(*node.rhs, precedence(*node.rhs) < 3);
        case Op::Div: return wrap(*node.lhs, precedence(*node.lhs) < prec) + "/" + wrap(*node.rhs, precedence(*node.rhs) < 3 || precedence(*node.rhs) == prec);
        case Op::Neg: return "-" + wrap(*node.lhs, precedence(*node.lhs) < 3);
        case Op::Pow: return wrap(*node.lhs, precedence(*node.lhs) < 5) + "^" + std::to_string(node.index);
        case Op::Sin: return "sin(" + print(*node.lhs) + ")";
        case Op::Cos: return "cos(" + print(*node.lhs) + ")";
    }
    return "";
}

}  // namespace

Expression Expression::parse(std::string_view text, int n) {
    return Expression(Parser(text, n).parse());
}

Expression Expression::constant(double value) {
    return Expression(make(Op::Number, nullptr, nullptr, value));
}

double Expression::evaluate(const Vec& x) const { return eval(*root_, x); }

double Expression::evaluate(const Vec& x, Vec& gradient) const { return eval_grad(*root_, x, gradient); }

std::string Expression::to_string() const { return print(*root_); }

}  // namespace suborbit::knaster
