#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "stepwise/expr.hpp"

namespace stepwise {

/// Syntax error with a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column);

    int line() const { return line_; }
    int column() const { return column_; }
    /// The message without the position prefix.
    const std::string& detail() const { return detail_; }

private:
    int line_;
    int column_;
    std::string detail_;
};

/// Parses one expression of the supported Haskell subset.
///
/// Application is left-associative juxtaposition and binds tighter than the
/// infix operators `+`, `++` and `:`. A chain of one operator follows its
/// Haskell associativity; mixing different operators requires parentheses.
/// List literals desugar to cons/nil, `(op)` is the operator as a value, and
/// `\x y -> e` abbreviates nested abstractions.
Expr parse_expr(std::string_view source);

/// Renders an expression in textbook style: list notation for complete
/// lists, explicit parentheses around nested infix operators, and sections
/// for operators that are not applied to two arguments.
std::string pretty(const Expr& e);

} // namespace stepwise
