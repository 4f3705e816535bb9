#pragma once

// Tokens and the recursive-descent expression parser shared by the
// expression front end and the prelude loader.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "stepwise/expr.hpp"
#include "stepwise/parser.hpp"

namespace stepwise::syntax {

enum class TokenKind {
    Ident,
    Int,
    Op,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Backslash,
    Arrow,
    Equals,
    Underscore,
    Backtick,
    Other,
    End,
};

struct Token {
    TokenKind kind;
    std::string text;
    int line;
    int column;
    bool space_before = false;
};

/// Splits `source` into tokens. `--` line comments and `{- -}` block comments
/// are skipped. Positions start at `first_line`.
std::vector<Token> tokenize(std::string_view source, int first_line = 1, int first_column = 1);

bool is_keyword(std::string_view word);

class ExprParser {
public:
    explicit ExprParser(std::vector<Token> tokens);

    Expr parse_expr();
    void expect_end();

    const Token& peek(std::size_t ahead = 0) const;
    const Token& advance();
    bool at_end() const { return peek().kind == TokenKind::End; }

    [[noreturn]] void fail(const Token& at, const std::string& message) const;

private:
    Expr parse_lambda();
    Expr parse_operand(bool expression_start);
    Expr parse_atom(bool allow_negative);
    Expr parse_parenthesized();
    Expr parse_list();
    std::int64_t parse_int(const Token& t, bool negative) const;
    void reject_unsupported(const Token& t) const;

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

/// The operators that may be written infix in expressions.
bool is_infix_operator(std::string_view op);

} // namespace stepwise::syntax
