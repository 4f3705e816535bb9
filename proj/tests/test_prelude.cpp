#include <doctest.h>

#include "stepwise/engine.hpp"
#include "stepwise/parser.hpp"
#include "stepwise/prelude.hpp"

using namespace stepwise;

namespace {

const char* const kPracticeFile = R"({-# DESC sum defined with a foldr to sum up all elements of a list. #-}
sum' = foldr (+) 0

{-# DESC sum defined recursively to sum up all elements of a list. #-}
sum'' [] = 0
sum'' (x:xs) = x + sum'' xs

{-# DESC double function to double a number. #-}
double x = x + x
)";

std::string parse_error_of(const char* source)
{
    try {
        parse_prelude(source);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "no error";
}

const Def& only_binding(const PreludeFile& file, const char* function)
{
    const DefinitionGroup* group = file.find(function);
    REQUIRE(group);
    REQUIRE(group->bindings.size() == 1);
    return group->bindings.front();
}

} // namespace

TEST_CASE("the practice file has three described groups")
{
    PreludeFile file = parse_prelude(kPracticeFile);
    REQUIRE(file.groups.size() == 3);
    CHECK(file.groups[0].function == "sum'");
    CHECK(file.groups[0].bindings.size() == 1);
    CHECK(file.groups[0].description == "sum defined with a foldr to sum up all elements of a list.");
    CHECK(file.groups[1].function == "sum''");
    CHECK(file.groups[1].bindings.size() == 2);
    CHECK(file.groups[1].description == "sum defined recursively to sum up all elements of a list.");
    CHECK(file.groups[2].function == "double");
    CHECK(file.groups[2].description == "double function to double a number.");
    CHECK(file.warnings.empty());

    const Def& cons_case = file.groups[1].bindings[1];
    CHECK(cons_case.patterns == std::vector<Pat>{Pat::con(":", {Pat::var("x"), Pat::var("xs")})});
    CHECK(cons_case.rhs == parse_expr("x + sum'' xs"));
    CHECK(cons_case.line == 6);
}

TEST_CASE("an empty file and a file of comments")
{
    CHECK(parse_prelude("").groups.empty());
    CHECK(parse_prelude("-- nothing here\n{- block\n comment -}\n").groups.empty());
}

TEST_CASE("annotations are optional and may span lines")
{
    PreludeFile file = parse_prelude("{-# DESC twice\n   the input #-}\ndouble x = x + x\nid x = x\n");
    REQUIRE(file.groups.size() == 2);
    CHECK(file.groups[0].description.value_or("").find("twice") == 0);
    CHECK_FALSE(file.groups[1].description);
}

TEST_CASE("bindings of one function must agree on arity")
{
    std::string message = parse_error_of("f [] = 0\nf x y = 1");
    CHECK(message.rfind("2:", 0) == 0);
    CHECK(message.find("arity mismatch") != std::string::npos);
}

TEST_CASE("constructs outside the subset are rejected with their line")
{
    CHECK(parse_error_of("f x | x = 1").find("guards") != std::string::npos);
    CHECK(parse_error_of("f x = y where y = x").find("where") != std::string::npos);
    CHECK(parse_error_of("\nf x x = x").rfind("2:", 0) == 0);
    CHECK(parse_error_of("f x x = x").find("non-linear") != std::string::npos);
    CHECK(parse_error_of("x + y = y").find("primitive") != std::string::npos);
    CHECK(parse_error_of("Just x = x").find("constructors") != std::string::npos);
    CHECK(parse_error_of("f f = 1").find("shadows") != std::string::npos);
    CHECK(parse_error_of("f x = let y = x in y") != "no error");
    CHECK(parse_error_of("f x = = x") != "no error");
    CHECK(parse_error_of("f x") != "no error");
}

TEST_CASE("type signatures and line comments are skipped")
{
    PreludeFile file = parse_prelude("double :: Int -> Int\ndouble x = x + x -- twice\n");
    REQUIRE(file.groups.size() == 1);
    CHECK(only_binding(file, "double").rhs == parse_expr("x + x"));
}

TEST_CASE("operator definitions in section and infix form agree")
{
    PreludeFile section = parse_prelude("(++) [] ys = ys\n(++) (x:xs) ys = x : (xs ++ ys)\n");
    PreludeFile infix = parse_prelude("[] ++ ys = ys\n(x:xs) ++ ys = x : (xs ++ ys)\n");
    REQUIRE(section.groups.size() == 1);
    REQUIRE(infix.groups.size() == 1);
    CHECK(section.groups[0].function == "++");
    CHECK(infix.groups[0].function == "++");
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(section.groups[0].bindings[i].patterns == infix.groups[0].bindings[i].patterns);
        CHECK(section.groups[0].bindings[i].rhs == infix.groups[0].bindings[i].rhs);
    }
}

TEST_CASE("a later group shadows an earlier one with a warning")
{
    PreludeFile file = parse_prelude("f x = 1\ng x = 2\nf x = 3\n");
    REQUIRE(file.groups.size() == 2);
    CHECK(file.groups[0].function == "g");
    CHECK(only_binding(file, "f").rhs == Expr::lit(3));
    REQUIRE(file.warnings.size() == 1);
    CHECK(file.warnings[0].find("shadows") != std::string::npos);

    PreludeFile unknown = parse_prelude("{-# COLOUR red #-}\nf x = 1\n");
    REQUIRE(unknown.warnings.size() == 1);
    CHECK(unknown.warnings[0].find("unknown pragma") != std::string::npos);
}

TEST_CASE("literal and wildcard patterns")
{
    PreludeFile file = parse_prelude("isZero 0 = 1\nisZero _ = 0\n");
    const DefinitionGroup* group = file.find("isZero");
    REQUIRE(group);
    CHECK(group->bindings[0].patterns == std::vector<Pat>{Pat::lit(0)});
    CHECK(group->bindings[1].patterns[0].kind() == Pat::Kind::Var);
}

TEST_CASE("patterns become expressions")
{
    CHECK(pat_to_expr(Pat::con(":", {Pat::var("x"), Pat::var("xs")})) ==
          cons(Expr::var("x"), Expr::var("xs")));
    CHECK(pat_to_expr(Pat::lit(0)) == Expr::lit(0));
    CHECK(pat_to_expr(Pat::con("[]")) == Expr::var("[]"));
    CHECK(pat_to_expr(Pat::con(":", {Pat::lit(1), Pat::con("[]")})) == int_list({1}));
}

TEST_CASE("rule identifiers")
{
    CHECK(rule_id_for("++").str() == "eval.append.rule");
    CHECK(rule_id_for("double").str() == "eval.double.rule");
    CHECK(rule_id_for("sum''").str() == "eval.sum''.rule");
}

TEST_CASE("generated rules")
{
    PreludeFile file = parse_prelude(kPracticeFile);
    const Def& double_def = only_binding(file, "double");
    Rule rule = gen_rule(RuleId("eval.double.rule"), double_def);
    CHECK(rule.alternatives()[0].lhs == parse_expr("double x"));
    CHECK(rule.alternatives()[0].rhs == parse_expr("x + x"));
    CHECK(apply_rule_at_root(rule, parse_expr("double 3")) == parse_expr("3 + 3"));
    CHECK(rule.annotation() == "definition double");

    const DefinitionGroup* sum2 = file.find("sum''");
    Rule nil_case = gen_rule(RuleId("eval.sum''.rule"), sum2->bindings[0]);
    CHECK(apply_rule_at_root(nil_case, parse_expr("sum'' []")) == Expr::lit(0));
    Rule grouped = gen_rule(*sum2);
    CHECK(grouped.alternatives().size() == 2);
    CHECK(apply_rule_at_root(grouped, parse_expr("sum'' [4]")) == parse_expr("4 + sum'' []"));
    CHECK(grouped.description() == sum2->description);
}

TEST_CASE("the generated foldl rule reproduces every foldl step of the outermost derivation")
{
    PreludeFile standard = load_prelude(STEPWISE_DATA_DIR "/standard.hs");
    Rule generated = gen_rule(*standard.find("foldl"));
    Engine engine;
    Derivation d = engine.derive(parse_expr("sum ([3,7] ++ [5])"), StrategyChoice::Outermost);
    int foldl_steps = 0;
    for (const auto& step : d.steps) {
        if (step.rule_id().str() != "eval.foldl.rule")
            continue;
        ++foldl_steps;
        auto redex = subterm_at(step.before, step.focus);
        REQUIRE(redex);
        auto out = apply_rule_at_root(generated, *redex);
        REQUIRE(out);
        CHECK(replace_at(step.before, step.focus, *out) == step.after);
    }
    CHECK(foldl_steps == 4);
}

TEST_CASE("generated strategies")
{
    PreludeFile file = parse_prelude(kPracticeFile);
    EngineConfig config;
    config.prelude = file;
    Engine engine(config);

    SUBCASE("a variable pattern forces nothing")
    {
        auto steps = engine.next_steps(parse_expr("double (1+2)"), StrategyChoice::Outermost);
        REQUIRE(steps.size() == 1);
        CHECK(steps[0].rule.annotation() == "definition double");
        CHECK(steps[0].result == parse_expr("(1+2) + (1+2)"));
    }
    SUBCASE("a constructor pattern on a value applies at once")
    {
        Strategy s = gen_eval_strat(*file.find("sum''"), engine.whnf());
        auto steps = firsts(s, Context(parse_expr("sum'' []")));
        REQUIRE(steps.size() == 1);
        CHECK(steps[0].result == Expr::lit(0));
    }
    SUBCASE("the first argument of ++ is brought to whnf first")
    {
        PreludeFile standard = load_prelude(STEPWISE_DATA_DIR "/standard.hs");
        EngineConfig generated_only;
        generated_only.builtin_definitions = false;
        generated_only.prelude = standard;
        Engine gen_engine(generated_only);
        Strategy append = gen_eval_strat(*standard.find("++"), gen_engine.whnf());

        auto direct = firsts(append, Context(parse_expr("[3,7] ++ [5]")));
        REQUIRE(direct.size() == 1);
        CHECK(direct[0].rule_id().str() == "eval.append.rule");
        CHECK(direct[0].focus.empty());

        auto nested = firsts(append, Context(parse_expr("([] ++ [3]) ++ [5]")));
        REQUIRE(nested.size() == 1);
        CHECK(nested[0].focus == Path({0, 1}));
        CHECK(nested[0].result == parse_expr("[3] ++ [5]"));

        CHECK(firsts(append, Context(parse_expr("f [3] [5]"))).empty());
    }
}

TEST_CASE("a failed pattern match keeps the evaluation it forced")
{
    PreludeFile standard = load_prelude(STEPWISE_DATA_DIR "/standard.hs");
    EngineConfig config;
    config.builtin_definitions = false;
    config.prelude = standard;
    Engine engine(config);
    Context start(parse_expr("foldl (+) 0 ([] ++ [5])"));

    // The nil binding alone: forcing the list is a visible step, and the run
    // may end after it even though the binding cannot apply.
    const Def& nil_binding = standard.find("foldl")->bindings.front();
    Strategy nil_only = gen_eval_strat(rule_id_for("foldl"), nil_binding, engine.whnf());
    auto steps = firsts(nil_only, start);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].rule_id().str() == "eval.append.rule");
    CHECK(steps[0].result == parse_expr("foldl (+) 0 [5]"));
    CHECK(firsts(steps[0].remainder, steps[0].after).empty());
    CHECK(can_finish(steps[0].remainder, steps[0].after));

    Derivation d = engine.derive(start.root(), StrategyChoice::Outermost);
    REQUIRE(d.steps.size() == 4);
    CHECK(d.steps[0].after == parse_expr("foldl (+) 0 [5]"));
    CHECK(d.steps[1].after == parse_expr("foldl (+) (0 + 5) []"));
    CHECK(d.result() == Expr::lit(5));
}
