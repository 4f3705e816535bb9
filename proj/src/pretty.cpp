#include <string>

#include "stepwise/parser.hpp"
#include "syntax.hpp"

namespace stepwise {

namespace {

// Where a sub-expression is printed; decides whether it needs parentheses.
enum class Position {
    Top,      // whole expression, list element, lambda body
    Operand,  // operand of an infix operator
    Argument, // argument of a prefix application
    Head,     // function position of a prefix application
};

void print(const Expr& e, Position pos, std::string& out);

void print_parenthesized(const Expr& e, std::string& out)
{
    out += '(';
    print(e, Position::Top, out);
    out += ')';
}

void print_var(const std::string& name, std::string& out)
{
    if (is_operator_name(name)) {
        out += '(';
        out += name;
        out += ')';
    } else {
        out += name;
    }
}

void print_app(const Expr& e, Position pos, std::string& out)
{
    if (auto elements = list_elements(e)) {
        out += '[';
        for (std::size_t i = 0; i < elements->size(); ++i) {
            if (i > 0)
                out += ',';
            print((*elements)[i], Position::Top, out);
        }
        out += ']';
        return;
    }

    Spine sp = spine(e);
    bool infix = sp.head.is_var() && syntax::is_infix_operator(sp.head.name()) &&
                 sp.arguments.size() >= 2;
    std::size_t prefix_args = infix ? sp.arguments.size() - 2 : sp.arguments.size();

    // A bare infix expression is parenthesized everywhere except at the top;
    // anything else is a prefix application and only needs them as an argument.
    bool wrap = infix && prefix_args == 0 ? pos != Position::Top : pos == Position::Argument;
    if (wrap)
        out += '(';

    if (infix) {
        if (prefix_args > 0)
            out += '(';
        print(sp.arguments[0], Position::Operand, out);
        out += ' ';
        out += sp.head.name();
        out += ' ';
        print(sp.arguments[1], Position::Operand, out);
        if (prefix_args > 0)
            out += ')';
        for (std::size_t i = 2; i < sp.arguments.size(); ++i) {
            out += ' ';
            print(sp.arguments[i], Position::Argument, out);
        }
    } else {
        print(sp.head, Position::Head, out);
        for (const auto& a : sp.arguments) {
            out += ' ';
            print(a, Position::Argument, out);
        }
    }

    if (wrap)
        out += ')';
}

void print(const Expr& e, Position pos, std::string& out)
{
    switch (e.kind()) {
    case Expr::Kind::Lit:
        if (e.value() < 0 && pos != Position::Top) {
            out += '(';
            out += std::to_string(e.value());
            out += ')';
        } else {
            out += std::to_string(e.value());
        }
        return;
    case Expr::Kind::Var:
        print_var(e.name(), out);
        return;
    case Expr::Kind::Abs:
        if (pos != Position::Top) {
            print_parenthesized(e, out);
            return;
        }
        out += '\\';
        out += e.binder();
        out += " -> ";
        print(e.body(), Position::Top, out);
        return;
    case Expr::Kind::App:
        print_app(e, pos, out);
        return;
    }
}

} // namespace

std::string pretty(const Expr& e)
{
    std::string out;
    print(e, Position::Top, out);
    return out;
}

} // namespace stepwise
