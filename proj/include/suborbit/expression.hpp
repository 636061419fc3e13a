#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "suborbit/error.hpp"
#include "suborbit/linalg.hpp"

namespace suborbit::knaster {

class ParseError : public Error {
  public:
    ParseError(std::size_t position, const std::string& message)
        : Error(ErrorKind::Parse, message + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

/// Arithmetic expression over x1..xn:
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := '-' factor | base ('^' integer)?
///   base   := number | 'x' integer | '(' expr ')' | ('sin' | 'cos') '(' expr ')'
/// Whitespace is ignored.
class Expression {
  public:
    struct Node;

    /// Throws ParseError (syntax, unknown identifier) or Error with
    /// DimensionMismatch when a variable index exceeds n.
    static Expression parse(std::string_view text, int n);
    static Expression constant(double value);

    double evaluate(const Vec& x) const;
    /// Value and gradient with respect to x (forward mode).
    double evaluate(const Vec& x, Vec& gradient) const;

    /// Canonical form: minimal parentheses, shortest round-trip numbers,
    /// spaces around binary + and -.
    std::string to_string() const;

  private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

}  // namespace suborbit::knaster
