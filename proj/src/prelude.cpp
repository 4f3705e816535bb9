#include "stepwise/prelude.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "stepwise/parser.hpp"
#include "syntax.hpp"

namespace stepwise {

using syntax::Token;
using syntax::TokenKind;

Pat Pat::con(std::string name, std::vector<Pat> subpatterns)
{
    Pat p;
    p.kind_ = Kind::Con;
    p.name_ = std::move(name);
    p.subpatterns_ = std::move(subpatterns);
    return p;
}

Pat Pat::var(std::string name)
{
    Pat p;
    p.kind_ = Kind::Var;
    p.name_ = std::move(name);
    return p;
}

Pat Pat::lit(std::int64_t value)
{
    Pat p;
    p.kind_ = Kind::Lit;
    p.value_ = value;
    return p;
}

const DefinitionGroup* PreludeFile::find(std::string_view function) const
{
    for (const auto& g : groups)
        if (g.function == function)
            return &g;
    return nullptr;
}

namespace {

struct Pragma {
    int line;
    int end_line;
    int end_column;
    std::string keyword;
    std::string text;
};

std::string collapse_whitespace(std::string_view s)
{
    std::string out;
    bool pending_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space)
            out += ' ';
        pending_space = false;
        out += c;
    }
    return out;
}

// Cuts `{-# ... #-}` pragmas out of the source, leaving blanks so that token
// positions stay the same.
std::string extract_pragmas(std::string_view src, std::vector<Pragma>& pragmas)
{
    std::string out(src);
    int line = 1, column = 1;
    std::size_t i = 0;
    auto bump = [&](std::size_t n) {
        for (; n > 0 && i < src.size(); --n, ++i) {
            if (src[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
    };
    while (i < src.size()) {
        if (src.compare(i, 2, "--") == 0) {
            std::size_t j = i;
            while (j < src.size() && src[j] == '-')
                ++j;
            if (j >= src.size() || std::string_view("!#$%&*+./<=>?@\\^|~:").find(src[j]) ==
                                       std::string_view::npos) {
                while (i < src.size() && src[i] != '\n')
                    bump(1);
                continue;
            }
        }
        if (src.compare(i, 3, "{-#") == 0) {
            int start_line = line, start_column = column;
            std::size_t close = src.find("#-}", i + 3);
            if (close == std::string_view::npos)
                throw ParseError("unterminated pragma", start_line, start_column);
            std::string_view body = src.substr(i + 3, close - i - 3);
            std::size_t k = 0;
            while (k < body.size() && std::isspace(static_cast<unsigned char>(body[k])))
                ++k;
            std::size_t word_end = k;
            while (word_end < body.size() && !std::isspace(static_cast<unsigned char>(body[word_end])))
                ++word_end;
            std::string keyword(body.substr(k, word_end - k));
            std::string text = collapse_whitespace(body.substr(word_end));
            for (std::size_t j = i; j < close + 3; ++j)
                if (out[j] != '\n')
                    out[j] = ' ';
            bump(close + 3 - i);
            pragmas.push_back({start_line, line, column, std::move(keyword), std::move(text)});
            continue;
        }
        if (src.compare(i, 2, "{-") == 0) {
            int depth = 0;
            int start_line = line, start_column = column;
            do {
                if (i >= src.size())
                    throw ParseError("unterminated block comment", start_line, start_column);
                if (src.compare(i, 2, "{-") == 0) {
                    ++depth;
                    bump(2);
                } else if (src.compare(i, 2, "-}") == 0) {
                    --depth;
                    bump(2);
                } else {
                    bump(1);
                }
            } while (depth > 0);
            continue;
        }
        bump(1);
    }
    return out;
}

bool is_upper_ident(const Token& t)
{
    return t.kind == TokenKind::Ident && std::isupper(static_cast<unsigned char>(t.text[0]));
}

[[noreturn]] void fail_at(const Token& t, const std::string& message)
{
    throw ParseError(message, t.line, t.column);
}

// Patterns over a slice of tokens terminated by an End token.
class PatternParser {
public:
    explicit PatternParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    const Token& peek(std::size_t ahead = 0) const
    {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    const Token& advance()
    {
        const Token& t = tokens_[pos_];
        if (pos_ + 1 < tokens_.size())
            ++pos_;
        return t;
    }
    bool at_end() const { return peek().kind == TokenKind::End; }

    Pat pattern()
    {
        Pat head = atomic_pattern();
        if (peek().kind == TokenKind::Op && peek().text == ":") {
            advance();
            return Pat::con(std::string(kCons), {std::move(head), pattern()});
        }
        return head;
    }

    Pat atomic_pattern()
    {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::Underscore:
            advance();
            return Pat::var("_");
        case TokenKind::Ident:
            if (syntax::is_keyword(t.text))
                fail_at(t, "unsupported construct '" + t.text + "'");
            advance();
            if (is_upper_ident(t))
                return Pat::con(t.text);
            return Pat::var(t.text);
        case TokenKind::Int:
            advance();
            return Pat::lit(literal(t, false));
        case TokenKind::LBracket: {
            advance();
            std::vector<Pat> elements;
            if (peek().kind != TokenKind::RBracket) {
                while (true) {
                    elements.push_back(pattern());
                    if (peek().kind == TokenKind::Comma) {
                        advance();
                        continue;
                    }
                    break;
                }
            }
            expect(TokenKind::RBracket, "']'");
            Pat list = Pat::con(std::string(kNil));
            for (auto it = elements.rbegin(); it != elements.rend(); ++it)
                list = Pat::con(std::string(kCons), {*it, list});
            return list;
        }
        case TokenKind::LParen: {
            advance();
            if (peek().kind == TokenKind::Op && peek().text == "-" &&
                peek(1).kind == TokenKind::Int) {
                advance();
                Pat p = Pat::lit(literal(advance(), true));
                expect(TokenKind::RParen, "')'");
                return p;
            }
            if (peek().kind == TokenKind::RParen)
                fail_at(peek(), "the unit pattern '()' is not supported");
            Pat p = [&] {
                if (is_upper_ident(peek())) {
                    std::string name = advance().text;
                    std::vector<Pat> args;
                    while (starts_atomic_pattern(peek()))
                        args.push_back(atomic_pattern());
                    Pat con = Pat::con(std::move(name), std::move(args));
                    if (peek().kind == TokenKind::Op && peek().text == ":") {
                        advance();
                        return Pat::con(std::string(kCons), {std::move(con), pattern()});
                    }
                    return con;
                }
                return pattern();
            }();
            if (peek().kind == TokenKind::Comma)
                fail_at(peek(), "tuple patterns are not supported");
            expect(TokenKind::RParen, "')'");
            return p;
        }
        case TokenKind::Op:
            if (t.text == "|")
                fail_at(t, "guards are not supported");
            if (t.text == "@")
                fail_at(t, "as-patterns are not supported");
            if (t.text == "~" || t.text == "!")
                fail_at(t, "lazy and strict patterns are not supported");
            fail_at(t, "unexpected operator '" + t.text + "' in pattern");
        case TokenKind::End:
            fail_at(t, "expected a pattern");
        default:
            fail_at(t, "unexpected '" + t.text + "' in pattern");
        }
    }

    static bool starts_atomic_pattern(const Token& t)
    {
        switch (t.kind) {
        case TokenKind::Underscore:
        case TokenKind::Ident:
        case TokenKind::Int:
        case TokenKind::LBracket:
        case TokenKind::LParen:
            return true;
        default:
            return false;
        }
    }

    void expect(TokenKind kind, const char* what)
    {
        if (peek().kind != kind)
            fail_at(peek(), std::string("expected ") + what + " in pattern");
        advance();
    }

    std::int64_t literal(const Token& t, bool negative)
    {
        // Reuse the expression parser's range checks.
        std::string text = (negative ? "-" : "") + t.text;
        try {
            return parse_expr(text).value();
        } catch (const ParseError& e) {
            fail_at(t, e.detail());
        }
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

std::vector<Token> slice(const std::vector<Token>& tokens, std::size_t from, std::size_t to)
{
    std::vector<Token> out(tokens.begin() + static_cast<std::ptrdiff_t>(from),
                           tokens.begin() + static_cast<std::ptrdiff_t>(to));
    const Token& last = to > from ? tokens[to - 1] : tokens[from];
    out.push_back({TokenKind::End, "", last.line, last.column + static_cast<int>(last.text.size())});
    return out;
}

void collect_pattern_vars(const Pat& p, std::vector<std::string>& out)
{
    if (p.kind() == Pat::Kind::Var)
        out.push_back(p.name());
    for (const auto& sub : p.subpatterns())
        collect_pattern_vars(sub, out);
}

Pat rename_wildcards(const Pat& p, const std::set<std::string>& taken, std::size_t& counter)
{
    switch (p.kind()) {
    case Pat::Kind::Var:
        if (p.name() != "_")
            return p;
        while (true) {
            std::string candidate = "_" + std::to_string(++counter);
            if (!taken.count(candidate))
                return Pat::var(candidate);
        }
    case Pat::Kind::Lit:
        return p;
    case Pat::Kind::Con: {
        std::vector<Pat> subs;
        for (const auto& sub : p.subpatterns())
            subs.push_back(rename_wildcards(sub, taken, counter));
        return Pat::con(p.name(), std::move(subs));
    }
    }
    return p;
}

std::string describe_function(const std::string& name)
{
    return is_operator_name(name) ? "(" + name + ")" : name;
}

bool is_primitive(const std::string& name) { return name == "+"; }

// Parses `lhs = rhs` from the tokens of one declaration.
Def parse_binding(const std::vector<Token>& tokens)
{
    const Token& first = tokens.front();
    std::size_t eq = tokens.size();
    int depth = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i];
        if (t.kind == TokenKind::LParen || t.kind == TokenKind::LBracket)
            ++depth;
        else if (t.kind == TokenKind::RParen || t.kind == TokenKind::RBracket)
            --depth;
        else if (t.kind == TokenKind::Op && t.text == "|" && eq == tokens.size())
            fail_at(t, "guards are not supported");
        else if (t.kind == TokenKind::Equals && depth == 0) {
            if (eq != tokens.size())
                fail_at(t, "unexpected '=' in right-hand side");
            eq = i;
        } else if (t.kind == TokenKind::Ident && t.text == "where")
            fail_at(t, "where clauses are not supported");
    }
    if (eq == tokens.size())
        fail_at(first, "expected '=' in binding");
    if (eq == 0)
        fail_at(first, "missing left-hand side");
    if (eq + 1 == tokens.size())
        fail_at(tokens[eq], "missing right-hand side after '='");

    std::string function;
    std::vector<Pat> patterns;

    // An operator at the top level of the left-hand side (other than `:`)
    // makes it an infix definition.
    std::size_t infix_at = eq;
    depth = 0;
    for (std::size_t i = 0; i < eq; ++i) {
        const Token& t = tokens[i];
        if (t.kind == TokenKind::LParen || t.kind == TokenKind::LBracket)
            ++depth;
        else if (t.kind == TokenKind::RParen || t.kind == TokenKind::RBracket)
            --depth;
        else if (depth == 0 && t.kind == TokenKind::Op && t.text != ":") {
            if (infix_at != eq)
                fail_at(t, "only one infix operator may appear on a left-hand side");
            infix_at = i;
        } else if (depth == 0 && t.kind == TokenKind::Backtick)
            fail_at(t, "backtick definitions are not supported");
    }

    if (infix_at != eq) {
        const Token& op = tokens[infix_at];
        if (infix_at == 0 || infix_at + 1 == eq)
            fail_at(op, "operator '" + op.text + "' needs an operand on both sides");
        function = op.text;
        for (auto [from, to] : {std::pair{std::size_t{0}, infix_at}, std::pair{infix_at + 1, eq}}) {
            PatternParser pp(slice(tokens, from, to));
            patterns.push_back(pp.pattern());
            if (!pp.at_end())
                fail_at(pp.peek(), "unexpected '" + pp.peek().text + "' in pattern");
        }
    } else {
        PatternParser pp(slice(tokens, 0, eq));
        const Token& head = pp.peek();
        if (head.kind == TokenKind::LParen && pp.peek(1).kind == TokenKind::Op &&
            pp.peek(2).kind == TokenKind::RParen) {
            pp.advance();
            function = pp.advance().text;
            pp.advance();
        } else if (head.kind == TokenKind::Ident && !syntax::is_keyword(head.text)) {
            if (is_upper_ident(head))
                fail_at(head, "constructors cannot be defined");
            function = pp.advance().text;
        } else if (head.kind == TokenKind::Ident) {
            fail_at(head, "unsupported construct '" + head.text + "'");
        } else {
            fail_at(head, "expected a function name");
        }
        while (!pp.at_end())
            patterns.push_back(pp.atomic_pattern());
    }

    if (is_primitive(function))
        fail_at(first, "'" + function + "' is a primitive and cannot be defined");
    if (is_constructor_name(function))
        fail_at(first, "constructors cannot be defined");

    std::vector<std::string> names;
    for (const auto& p : patterns)
        collect_pattern_vars(p, names);
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n == "_")
            continue;
        if (!seen.insert(n).second)
            fail_at(first, "non-linear pattern: variable '" + n + "' occurs more than once");
        if (n == function)
            fail_at(first, "pattern variable '" + n + "' shadows the function being defined");
    }

    syntax::ExprParser rhs_parser(slice(tokens, eq + 1, tokens.size()));
    Expr rhs = rhs_parser.parse_expr();
    rhs_parser.expect_end();

    std::set<std::string> taken = seen;
    auto rhs_free = free_variables(rhs);
    taken.insert(rhs_free.begin(), rhs_free.end());
    std::size_t counter = 0;
    for (auto& p : patterns)
        p = rename_wildcards(p, taken, counter);
    return Def{std::move(function), std::move(patterns), std::move(rhs), first.line};
}

bool is_type_signature(const std::vector<Token>& tokens)
{
    return std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
        return t.kind == TokenKind::Op && t.text == "::";
    });
}

bool before(const Pragma& p, const Token& t)
{
    return p.end_line < t.line || (p.end_line == t.line && p.end_column <= t.column);
}

std::string plural_arguments(std::size_t n)
{
    return std::to_string(n) + (n == 1 ? " argument" : " arguments");
}

} // namespace

PreludeFile parse_prelude(std::string_view source)
{
    std::vector<Pragma> pragmas;
    std::string blanked = extract_pragmas(source, pragmas);
    std::vector<Token> tokens = syntax::tokenize(blanked);

    // A declaration starts at every token in the first column.
    std::vector<std::vector<Token>> declarations;
    for (const auto& t : tokens) {
        if (t.kind == TokenKind::End)
            break;
        if (t.column == 1 || declarations.empty())
            declarations.emplace_back();
        declarations.back().push_back(t);
    }

    PreludeFile file;
    std::size_t next_pragma = 0;
    std::optional<Pragma> pending;
    auto take_pragmas_before = [&](const Token& t) {
        for (; next_pragma < pragmas.size() && before(pragmas[next_pragma], t); ++next_pragma) {
            const Pragma& p = pragmas[next_pragma];
            if (p.keyword != "DESC") {
                file.warnings.push_back("line " + std::to_string(p.line) + ": unknown pragma '" +
                                        p.keyword + "' ignored");
                continue;
            }
            if (pending)
                file.warnings.push_back("line " + std::to_string(pending->line) +
                                        ": DESC pragma is overridden by the one on line " +
                                        std::to_string(p.line));
            pending = p;
        }
    };

    for (const auto& decl : declarations) {
        const Token& first = decl.front();
        if (first.column != 1)
            fail_at(first, "a declaration must start in the first column");
        take_pragmas_before(first);
        if (is_type_signature(decl))
            continue;

        Def def = parse_binding(decl);
        if (!file.groups.empty() && file.groups.back().function == def.function) {
            DefinitionGroup& group = file.groups.back();
            if (def.patterns.size() != group.arity())
                fail_at(first, "arity mismatch: " + describe_function(def.function) +
                                   " has " + plural_arguments(group.arity()) + " on line " +
                                   std::to_string(group.bindings.front().line) + " but " +
                                   plural_arguments(def.patterns.size()) + " here");
            if (pending) {
                file.warnings.push_back("line " + std::to_string(pending->line) +
                                        ": DESC pragma inside the definition of " +
                                        describe_function(def.function) + " is ignored");
                pending.reset();
            }
            group.bindings.push_back(std::move(def));
            continue;
        }

        auto earlier = std::find_if(file.groups.begin(), file.groups.end(),
                                    [&](const DefinitionGroup& g) { return g.function == def.function; });
        if (earlier != file.groups.end()) {
            file.warnings.push_back("line " + std::to_string(def.line) + ": " +
                                    describe_function(def.function) +
                                    " shadows its definition on line " +
                                    std::to_string(earlier->bindings.front().line));
            file.groups.erase(earlier);
        }
        DefinitionGroup group;
        group.function = def.function;
        if (pending) {
            group.description = pending->text;
            pending.reset();
        }
        group.bindings.push_back(std::move(def));
        file.groups.push_back(std::move(group));
    }

    for (; next_pragma < pragmas.size(); ++next_pragma)
        if (pragmas[next_pragma].keyword == "DESC" && !pending)
            pending = pragmas[next_pragma];
    if (pending)
        file.warnings.push_back("line " + std::to_string(pending->line) +
                                ": DESC pragma is not followed by a definition");
    return file;
}

PreludeFile load_prelude(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read prelude file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_prelude(text.str());
}

Expr pat_to_expr(const Pat& p)
{
    switch (p.kind()) {
    case Pat::Kind::Con: {
        std::vector<Expr> args;
        for (const auto& sub : p.subpatterns())
            args.push_back(pat_to_expr(sub));
        return app_n(Expr::var(p.name()), args);
    }
    case Pat::Kind::Var:
        return Expr::var(p.name());
    case Pat::Kind::Lit:
        return Expr::lit(p.value());
    }
    return Expr::var(p.name());
}

std::vector<std::string> pattern_variables(const Def& d)
{
    std::vector<std::string> out;
    for (const auto& p : d.patterns)
        collect_pattern_vars(p, out);
    return out;
}

RuleId rule_id_for(std::string_view function)
{
    static const std::vector<std::pair<std::string_view, std::string_view>> spelled = {
        {"++", "append"}, {"+", "add"}, {"-", "sub"}, {"*", "mul"}, {".", "compose"}, {"$", "apply"},
    };
    for (auto [op, word] : spelled)
        if (op == function)
            return RuleId("eval." + std::string(word) + ".rule");
    return RuleId("eval." + std::string(function) + ".rule");
}

namespace {

RewriteAlternative alternative_for(const Def& d)
{
    std::vector<Expr> args;
    for (const auto& p : d.patterns)
        args.push_back(pat_to_expr(p));
    return {pattern_variables(d), app_n(Expr::var(d.function), args), d.rhs};
}

std::string annotation_for(const std::string& function) { return "definition " + function; }

Strategy pattern_list_strategy(const std::string& name, const std::vector<Pat>& patterns,
                               const Strategy& whnf);

Strategy pattern_strategy(const Pat& p, const Strategy& whnf)
{
    switch (p.kind()) {
    case Pat::Kind::Var:
        return succeed();
    case Pat::Kind::Con:
        return partial_sequence(whnf, pattern_list_strategy(p.name(), p.subpatterns(), whnf));
    case Pat::Kind::Lit: {
        std::int64_t n = p.value();
        return partial_sequence(whnf, check_current("is " + std::to_string(n), [n](const Expr& e) {
                                    return e.is_lit() && e.value() == n;
                                }));
    }
    }
    return fail();
}

Strategy pattern_list_strategy(const std::string& name, const std::vector<Pat>& patterns,
                               const Strategy& whnf)
{
    std::size_t n = patterns.size();
    std::vector<Strategy> parts{check_current(
        "isFun " + name + " " + std::to_string(n),
        [name, n](const Expr& e) { return is_fun(name, n, e); })};
    for (std::size_t i = 0; i < n; ++i)
        parts.push_back(arg(i + 1, n, pattern_strategy(patterns[i], whnf)));
    return partial_sequence(parts);
}

} // namespace

Rule gen_rule(const RuleId& id, const Def& d, std::optional<std::string> description)
{
    return Rule::rewrite(id, {alternative_for(d)}, annotation_for(d.function),
                         std::move(description));
}

Rule gen_rule(const DefinitionGroup& group)
{
    std::vector<RewriteAlternative> alternatives;
    for (const auto& d : group.bindings)
        alternatives.push_back(alternative_for(d));
    return Rule::rewrite(rule_id_for(group.function), std::move(alternatives),
                         annotation_for(group.function), group.description);
}

Strategy gen_eval_strat(const RuleId& id, const Def& d, const Strategy& whnf,
                        std::optional<std::string> description)
{
    return partial_sequence(pattern_list_strategy(d.function, d.patterns, whnf),
                            rule_step(gen_rule(id, d, std::move(description))));
}

Strategy gen_eval_strat(const DefinitionGroup& group, const Strategy& whnf)
{
    RuleId id = rule_id_for(group.function);
    Strategy result = gen_eval_strat(id, group.bindings.back(), whnf, group.description);
    for (std::size_t i = group.bindings.size() - 1; i-- > 0;)
        result = or_else(gen_eval_strat(id, group.bindings[i], whnf, group.description), result);
    return label(annotation_for(group.function), result);
}

} // namespace stepwise
