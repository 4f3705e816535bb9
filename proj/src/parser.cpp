#include "stepwise/parser.hpp"

#include <array>
#include <cctype>
#include <limits>
#include <utility>

#include "syntax.hpp"

namespace stepwise {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line), column_(column), detail_(message)
{
}

namespace syntax {

namespace {

constexpr std::string_view kSymbolChars = "!#$%&*+./<=>?@\\^|-~:";

bool is_symbol_char(char c) { return kSymbolChars.find(c) != std::string_view::npos; }
bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
public:
    Lexer(std::string_view src, int line, int column) : src_(src), line_(line), column_(column) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        bool space = true;
        while (true) {
            space = skip_trivia() || space;
            if (i_ >= src_.size()) {
                out.push_back({TokenKind::End, "", line_, column_, space});
                return out;
            }
            Token t = next();
            t.space_before = space;
            space = false;
            out.push_back(std::move(t));
        }
    }

private:
    char cur(std::size_t ahead = 0) const
    {
        return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
    }

    void bump()
    {
        if (src_[i_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++i_;
    }

    // Returns true when any whitespace or comment was skipped.
    bool skip_trivia()
    {
        bool skipped = false;
        while (i_ < src_.size()) {
            char c = cur();
            if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
                skipped = true;
            } else if (c == '-' && cur(1) == '-' && line_comment_start()) {
                while (i_ < src_.size() && cur() != '\n')
                    bump();
                skipped = true;
            } else if (c == '{' && cur(1) == '-') {
                int line = line_, column = column_;
                bump();
                bump();
                int depth = 1;
                while (depth > 0) {
                    if (i_ >= src_.size())
                        throw ParseError("unterminated block comment", line, column);
                    if (cur() == '{' && cur(1) == '-') {
                        bump();
                        bump();
                        ++depth;
                    } else if (cur() == '-' && cur(1) == '}') {
                        bump();
                        bump();
                        --depth;
                    } else {
                        bump();
                    }
                }
                skipped = true;
            } else {
                break;
            }
        }
        return skipped;
    }

    // `--` starts a comment unless it is part of a longer operator such as `-->`.
    bool line_comment_start() const
    {
        std::size_t j = i_;
        while (j < src_.size() && src_[j] == '-')
            ++j;
        return j >= src_.size() || !is_symbol_char(src_[j]);
    }

    Token next()
    {
        int line = line_, column = column_;
        char c = cur();
        auto single = [&](TokenKind kind) {
            std::string text(1, c);
            bump();
            return Token{kind, std::move(text), line, column};
        };
        if (is_ident_start(c)) {
            std::size_t start = i_;
            while (i_ < src_.size() && is_ident_char(cur()))
                bump();
            std::string text(src_.substr(start, i_ - start));
            if (text == "_")
                return {TokenKind::Underscore, text, line, column};
            return {TokenKind::Ident, std::move(text), line, column};
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(cur())))
                bump();
            return {TokenKind::Int, std::string(src_.substr(start, i_ - start)), line, column};
        }
        switch (c) {
        case '(': return single(TokenKind::LParen);
        case ')': return single(TokenKind::RParen);
        case '[': return single(TokenKind::LBracket);
        case ']': return single(TokenKind::RBracket);
        case ',': return single(TokenKind::Comma);
        case '`': return single(TokenKind::Backtick);
        default: break;
        }
        if (is_symbol_char(c)) {
            std::size_t start = i_;
            while (i_ < src_.size() && is_symbol_char(cur()))
                bump();
            std::string text(src_.substr(start, i_ - start));
            if (text == "\\")
                return {TokenKind::Backslash, text, line, column};
            if (text == "->")
                return {TokenKind::Arrow, text, line, column};
            if (text == "=")
                return {TokenKind::Equals, text, line, column};
            return {TokenKind::Op, std::move(text), line, column};
        }
        return single(TokenKind::Other);
    }

    std::string_view src_;
    std::size_t i_ = 0;
    int line_;
    int column_;
};

enum class Assoc { Left, Right };

Assoc associativity(std::string_view op)
{
    return op == "+" ? Assoc::Left : Assoc::Right;
}

} // namespace

std::vector<Token> tokenize(std::string_view source, int first_line, int first_column)
{
    return Lexer(source, first_line, first_column).run();
}

bool is_keyword(std::string_view word)
{
    static constexpr std::array<std::string_view, 13> keywords = {
        "let", "in", "case", "of", "if", "then", "else", "where", "do", "data", "type",
        "newtype", "module"};
    for (auto k : keywords)
        if (k == word)
            return true;
    return false;
}

bool is_infix_operator(std::string_view op)
{
    return op == "+" || op == "++" || op == ":";
}

ExprParser::ExprParser(std::vector<Token> tokens) : tokens_(std::move(tokens))
{
    if (tokens_.empty() || tokens_.back().kind != TokenKind::End)
        tokens_.push_back({TokenKind::End, "", 0, 0});
}

const Token& ExprParser::peek(std::size_t ahead) const
{
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
}

const Token& ExprParser::advance()
{
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size())
        ++pos_;
    return t;
}

void ExprParser::fail(const Token& at, const std::string& message) const
{
    throw ParseError(message, at.line, at.column);
}

void ExprParser::expect_end()
{
    if (!at_end())
        fail(peek(), "unexpected '" + peek().text + "' after expression");
}

void ExprParser::reject_unsupported(const Token& t) const
{
    switch (t.kind) {
    case TokenKind::Ident:
        if (is_keyword(t.text))
            fail(t, "unsupported construct '" + t.text + "'");
        break;
    case TokenKind::Op:
        if (t.text == "|")
            fail(t, "guards and list comprehensions are not supported");
        if (t.text == "..")
            fail(t, "arithmetic sequences are not supported");
        break;
    case TokenKind::Backtick:
        fail(t, "backtick operators are not supported");
    case TokenKind::Underscore:
        fail(t, "wildcard '_' is only allowed in patterns");
    case TokenKind::Other:
        if (t.text == "\"" || t.text == "'")
            fail(t, "string and character literals are not supported");
        fail(t, "unexpected character '" + t.text + "'");
    default:
        break;
    }
}

Expr ExprParser::parse_expr()
{
    if (peek().kind == TokenKind::Backslash)
        return parse_lambda();

    Expr first = parse_operand(true);
    if (peek().kind != TokenKind::Op)
        return first;

    const Token& op_token = peek();
    std::string op = op_token.text;
    reject_unsupported(op_token);
    if (!is_infix_operator(op))
        fail(op_token, "unsupported infix operator '" + op + "'");

    std::vector<Expr> operands{std::move(first)};
    while (peek().kind == TokenKind::Op) {
        const Token& t = peek();
        reject_unsupported(t);
        if (t.text != op) {
            if (is_infix_operator(t.text))
                fail(t, "mixing '" + op + "' and '" + t.text + "' requires parentheses");
            fail(t, "unsupported infix operator '" + t.text + "'");
        }
        advance();
        if (peek().kind == TokenKind::Backslash)
            fail(peek(), "a lambda operand must be parenthesized");
        operands.push_back(parse_operand(false));
    }

    Expr op_var = Expr::var(op);
    if (associativity(op) == Assoc::Left) {
        Expr acc = operands.front();
        for (std::size_t i = 1; i < operands.size(); ++i)
            acc = app_n(op_var, {acc, operands[i]});
        return acc;
    }
    Expr acc = operands.back();
    for (std::size_t i = operands.size() - 1; i-- > 0;)
        acc = app_n(op_var, {operands[i], acc});
    return acc;
}

Expr ExprParser::parse_lambda()
{
    const Token& lambda = advance();
    std::vector<std::string> binders;
    while (peek().kind == TokenKind::Ident) {
        reject_unsupported(peek());
        binders.push_back(advance().text);
    }
    if (binders.empty())
        fail(peek().kind == TokenKind::End ? lambda : peek(), "expected a variable after '\\'");
    if (peek().kind != TokenKind::Arrow)
        fail(peek(), "expected '->' in lambda abstraction");
    advance();
    Expr body = parse_expr();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        body = Expr::abs(*it, std::move(body));
    return body;
}

namespace {

bool starts_atom(const Token& t)
{
    switch (t.kind) {
    case TokenKind::Ident:
    case TokenKind::Int:
    case TokenKind::LParen:
    case TokenKind::LBracket:
        return true;
    default:
        return false;
    }
}

} // namespace

Expr ExprParser::parse_operand(bool expression_start)
{
    Expr result = parse_atom(expression_start);
    while (true) {
        const Token& t = peek();
        if (t.kind == TokenKind::Ident && is_keyword(t.text))
            reject_unsupported(t);
        if (t.kind == TokenKind::Backslash)
            fail(t, "a lambda argument must be parenthesized");
        if (t.kind == TokenKind::Underscore || t.kind == TokenKind::Backtick ||
            t.kind == TokenKind::Other)
            reject_unsupported(t);
        if (!starts_atom(t))
            return result;
        result = Expr::app(std::move(result), parse_atom(false));
    }
}

std::int64_t ExprParser::parse_int(const Token& t, bool negative) const
{
    constexpr auto max = static_cast<unsigned long long>(std::numeric_limits<std::int64_t>::max());
    unsigned long long v = 0;
    for (char c : t.text) {
        unsigned digit = static_cast<unsigned>(c - '0');
        if (v > (max + 1 - digit) / 10)
            fail(t, "integer literal out of range");
        v = v * 10 + digit;
    }
    if (!negative && v > max)
        fail(t, "integer literal out of range");
    if (negative)
        return v == max + 1 ? std::numeric_limits<std::int64_t>::min()
                            : -static_cast<std::int64_t>(v);
    return static_cast<std::int64_t>(v);
}

Expr ExprParser::parse_atom(bool allow_negative)
{
    const Token& t = peek();
    switch (t.kind) {
    case TokenKind::Ident:
        reject_unsupported(t);
        return Expr::var(advance().text);
    case TokenKind::Int:
        return Expr::lit(parse_int(advance(), false));
    case TokenKind::LParen:
        return parse_parenthesized();
    case TokenKind::LBracket:
        return parse_list();
    case TokenKind::Op:
        if (t.text == "-" && peek(1).kind == TokenKind::Int && !peek(1).space_before) {
            if (!allow_negative)
                fail(t, "a negative literal in this position must be parenthesized");
            advance();
            return Expr::lit(parse_int(advance(), true));
        }
        reject_unsupported(t);
        fail(t, "unexpected operator '" + t.text + "'");
    case TokenKind::End:
        fail(t, "unexpected end of input");
    default:
        reject_unsupported(t);
        fail(t, "unexpected '" + t.text + "'");
    }
}

Expr ExprParser::parse_parenthesized()
{
    const Token& open = advance();
    if (peek().kind == TokenKind::Op && peek(1).kind == TokenKind::RParen) {
        reject_unsupported(peek());
        std::string op = advance().text;
        advance();
        return Expr::var(op);
    }
    if (peek().kind == TokenKind::Op && !(peek().text == "-" && peek(1).kind == TokenKind::Int))
        fail(peek(), "operator sections with an operand are not supported");
    if (peek().kind == TokenKind::RParen)
        fail(peek(), "the unit value '()' is not supported");
    Expr inner = parse_expr();
    if (peek().kind == TokenKind::Comma)
        fail(peek(), "tuples are not supported");
    if (peek().kind == TokenKind::Op)
        fail(peek(), "operator sections with an operand are not supported");
    if (peek().kind != TokenKind::RParen)
        fail(peek().kind == TokenKind::End ? open : peek(), "expected ')'");
    advance();
    return inner;
}

Expr ExprParser::parse_list()
{
    const Token& open = advance();
    std::vector<Expr> elements;
    if (peek().kind == TokenKind::RBracket) {
        advance();
        return nil();
    }
    while (true) {
        elements.push_back(parse_expr());
        if (peek().kind == TokenKind::Comma) {
            advance();
            continue;
        }
        if (peek().kind == TokenKind::RBracket) {
            advance();
            break;
        }
        reject_unsupported(peek());
        fail(peek().kind == TokenKind::End ? open : peek(), "expected ',' or ']' in list");
    }
    return list_of(elements);
}

} // namespace syntax

Expr parse_expr(std::string_view source)
{
    syntax::ExprParser parser(syntax::tokenize(source));
    if (parser.at_end())
        parser.fail(parser.peek(), "empty expression");
    Expr e = parser.parse_expr();
    parser.expect_end();
    return e;
}

} // namespace stepwise
