#include <doctest.h>

#include "stepwise/expr.hpp"
#include "stepwise/parser.hpp"
#include "support/oracles.hpp"

using namespace stepwise;

namespace {

Expr v(const char* name) { return Expr::var(name); }
Expr n(std::int64_t value) { return Expr::lit(value); }

} // namespace

TEST_CASE("parse the running example")
{
    Expr expected = Expr::app(
        v("sum"), app_n(v("++"), {cons(n(3), cons(n(7), nil())), cons(n(5), nil())}));
    CHECK(parse_expr("sum ([3,7] ++ [5])") == expected);
}

TEST_CASE("parse literals, lambdas and sections")
{
    CHECK(parse_expr("0") == n(0));
    CHECK(parse_expr("(\\x -> x) 3") == Expr::app(Expr::abs("x", v("x")), n(3)));
    CHECK(parse_expr("(+)") == v("+"));
    CHECK(parse_expr("(++)") == v("++"));
    CHECK(parse_expr("-4") == n(-4));
    CHECK(parse_expr("\\x y -> x") == Expr::abs("x", Expr::abs("y", v("x"))));
    CHECK(parse_expr("[]") == nil());
    CHECK(parse_expr("sum''") == v("sum''"));
}

TEST_CASE("application binds tighter than operators")
{
    CHECK(parse_expr("f 1 + g 2") ==
          app_n(v("+"), {Expr::app(v("f"), n(1)), Expr::app(v("g"), n(2))}));
    CHECK(parse_expr("f x y") == app_n(v("f"), {v("x"), v("y")}));
}

TEST_CASE("operator chains follow their associativity")
{
    CHECK(parse_expr("1 + 2 + 3") == app_n(v("+"), {app_n(v("+"), {n(1), n(2)}), n(3)}));
    CHECK(parse_expr("1 : 2 : xs") == cons(n(1), cons(n(2), v("xs"))));
    CHECK(parse_expr("a ++ b ++ c") == app_n(v("++"), {v("a"), app_n(v("++"), {v("b"), v("c")})}));
}

TEST_CASE("constructs outside the subset are parse errors with a position")
{
    CHECK_THROWS_AS(parse_expr("let x = 1 in x"), ParseError);
    CHECK_THROWS_AS(parse_expr("case x of y -> y"), ParseError);
    CHECK_THROWS_AS(parse_expr("[x | x <- xs]"), ParseError);
    CHECK_THROWS_AS(parse_expr("1 + 2 ++ xs"), ParseError);
    CHECK_THROWS_AS(parse_expr("(1"), ParseError);
    CHECK_THROWS_AS(parse_expr(""), ParseError);
    try {
        parse_expr("sum (1 +)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() > 1);
        CHECK(std::string(e.what()).find(':') != std::string::npos);
    }
}

TEST_CASE("pretty printing in textbook style")
{
    CHECK(pretty(app_n(v("foldl"), {v("+"), n(0), int_list({3, 7, 5})})) == "foldl (+) 0 [3,7,5]");
    Expr nested = app_n(v("+"), {app_n(v("+"), {app_n(v("+"), {n(0), n(3)}), n(7)}), n(5)});
    CHECK(pretty(nested) == "((0 + 3) + 7) + 5");
    CHECK(pretty(n(-4)) == "-4");
    CHECK(pretty(cons(n(3), app_n(v("++"), {int_list({7}), int_list({5})}))) == "3 : ([7] ++ [5])");
    CHECK(pretty(Expr::app(v("+"), n(1))) == "(+) 1");
    CHECK(pretty(Expr::app(v("f"), n(-1))) == "f (-1)");
    CHECK(pretty(Expr::app(Expr::abs("x", v("x")), n(3))) == "(\\x -> x) 3");
    CHECK(pretty(nil()) == "[]");
}

TEST_CASE("isFun checks the spine length exactly")
{
    Expr call = app_n(v("foldl"), {v("+"), n(0), int_list({3})});
    CHECK(is_fun("foldl", 3, call));
    CHECK_FALSE(is_fun("foldl", 2, call));
    CHECK_FALSE(is_fun("sum", 3, call));
    CHECK(is_fun("sum", 0, v("sum")));
    CHECK_FALSE(is_fun("++", 2, v("++")));
    CHECK(is_fun("++", 0, v("++")));
    CHECK_FALSE(is_fun("x", 0, n(1)));
    CHECK(is_app(call));
    CHECK_FALSE(is_app(v("f")));
}

TEST_CASE("substitution without binders")
{
    Expr body = app_n(v("+"), {v("x"), v("x")});
    CHECK(substitute("x", n(3), body) == app_n(v("+"), {n(3), n(3)}));
}

TEST_CASE("substitution renames a capturing binder")
{
    Expr result = substitute("x", v("y"), Expr::abs("y", v("x")));
    REQUIRE(result.is_abs());
    CHECK(result.binder() == "y1");
    CHECK(result.body() == v("y"));
    CHECK(oracle::free_occurrences(result) == std::map<std::string, int>{{"y", 1}});
}

TEST_CASE("fresh names skip names free in either operand")
{
    // y1 is free in the replacement, so the binder becomes y2.
    Expr replacement = app_n(v("f"), {v("y"), v("y1")});
    Expr result = substitute("x", replacement, Expr::abs("y", app_n(v("g"), {v("x"), v("y")})));
    REQUIRE(result.is_abs());
    CHECK(result.binder() == "y2");
    CHECK(result.body() == app_n(v("g"), {replacement, v("y2")}));
}

TEST_CASE("substitution stops at a shadowing binder")
{
    Expr body = Expr::abs("x", v("x"));
    CHECK(substitute("x", n(1), body) == body);
}

TEST_CASE("list helpers")
{
    auto elements = list_elements(int_list({1, 2, 3}));
    REQUIRE(elements);
    CHECK(elements->size() == 3);
    CHECK_FALSE(list_elements(cons(n(1), v("xs"))));
    CHECK(is_constructor_name(":"));
    CHECK(is_constructor_name("[]"));
    CHECK_FALSE(is_constructor_name("sum"));
    CHECK(free_variables(parse_expr("\\x -> f x y")) == std::set<std::string>{"f", "y"});
}

TEST_CASE("structural equality and hashing")
{
    Expr a = parse_expr("foldl (+) 0 [3,7,5]");
    Expr b = parse_expr("foldl (+) 0 [3, 7, 5]");
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    CHECK(a != parse_expr("foldl (+) 0 [3,7,6]"));
    // Alpha-equivalent terms are still different.
    CHECK(parse_expr("\\x -> x") != parse_expr("\\y -> y"));
}
