#include "stepwise/engine.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "stepwise/parser.hpp"

namespace stepwise {

std::string to_string(StrategyChoice choice)
{
    switch (choice) {
    case StrategyChoice::Outermost: return "outermost";
    case StrategyChoice::Innermost: return "innermost";
    case StrategyChoice::Free: return "free";
    }
    return "outermost";
}

std::optional<StrategyChoice> parse_strategy_choice(std::string_view text)
{
    if (text == "outermost")
        return StrategyChoice::Outermost;
    if (text == "innermost")
        return StrategyChoice::Innermost;
    if (text == "free")
        return StrategyChoice::Free;
    return std::nullopt;
}

std::string to_string(Diagnosis::Kind kind)
{
    switch (kind) {
    case Diagnosis::Kind::CorrectStep: return "CorrectStep";
    case Diagnosis::Kind::EquivalentButOffStrategy: return "EquivalentButOffStrategy";
    case Diagnosis::Kind::CorrectResultWrongPath: return "CorrectResultWrongPath";
    case Diagnosis::Kind::Incorrect: return "Incorrect";
    case Diagnosis::Kind::ParseError: return "ParseError";
    }
    return "Incorrect";
}

StuckError::StuckError(Expr term)
    : std::runtime_error("evaluation is stuck at " + pretty(term)), term_(std::move(term))
{
}

namespace {

Strategy defined(const std::string& function, std::size_t arity)
{
    return check_current("isFun " + function + " " + std::to_string(arity),
                         [function, arity](const Expr& e) { return is_fun(function, arity, e); });
}

Strategy sum_strategy() { return defined("sum", 0) >> rule_step(sum_rule()); }

Strategy foldl_strategy(const Strategy& whnf)
{
    return defined("foldl", 3) >> arg(3, 3, whnf) >> rule_step(foldl_rule());
}

Strategy append_strategy(const Strategy& whnf)
{
    return defined("++", 2) >> arg(1, 2, whnf) >> rule_step(append_rule());
}

Strategy add_strategy(const Strategy& whnf)
{
    return defined("+", 2) >> arg(1, 2, whnf) >> arg(2, 2, whnf) >> rule_step(add_rule());
}

// Left-most innermost, without entering lambda bodies.
Strategy leftmost_innermost(const Strategy& s)
{
    return repeat(fix([&](const Strategy& x) {
        return or_else(check_current("isApp", is_app) >> or_else(child(0, x), child(1, x)), s);
    }));
}

bool is_constructor(const std::string& name)
{
    return is_constructor_name(name) || std::isupper(static_cast<unsigned char>(name[0]));
}

struct StepKey {
    std::string rule;
    Path focus;
    Expr result;
    bool operator==(const StepKey&) const = default;
};

void add_unique(std::vector<StepChoice>& out, std::vector<StepKey>& seen, StepChoice step)
{
    StepKey key{step.rule_id().str(), step.focus, step.result};
    if (std::find(seen.begin(), seen.end(), key) != seen.end())
        return;
    seen.push_back(std::move(key));
    out.push_back(std::move(step));
}

// Every position where some rule applies, pre-order.
void collect_redexes(const std::vector<Rule>& rules, const Context& ctx,
                     std::vector<StepChoice>& out, std::vector<StepKey>& seen)
{
    for (const auto& r : rules) {
        if (auto result = apply_rule_at_root(r, ctx.current())) {
            Context after = ctx.replace(*result);
            add_unique(out, seen,
                       StepChoice{r, ctx.path(), after.root(), after, Process()});
        }
    }
    for (std::size_t i = 0; i < ctx.current().arity(); ++i)
        collect_redexes(rules, *ctx.down(i), out, seen);
}

} // namespace

Engine::Engine(EngineConfig config) : config_(std::move(config))
{
    std::vector<const DefinitionGroup*> groups;
    if (config_.prelude)
        for (const auto& g : config_.prelude->groups)
            groups.push_back(&g);
    auto defined_in_prelude = [&](const std::string& name) {
        return std::any_of(groups.begin(), groups.end(),
                           [&](const DefinitionGroup* g) { return g->function == name; });
    };

    std::vector<std::string> builtins;
    if (config_.builtin_definitions) {
        for (const char* name : {"sum", "foldl", "++"}) {
            if (defined_in_prelude(name))
                warnings_.push_back("the prelude definition of " + std::string(name) +
                                    " replaces the built-in one");
            else
                builtins.push_back(name);
        }
    }
    auto has_builtin = [&](const char* name) {
        return std::find(builtins.begin(), builtins.end(), name) != builtins.end();
    };

    if (has_builtin("sum")) {
        rules_.push_back(sum_rule());
        arities_["sum"] = 0;
    }
    if (has_builtin("foldl")) {
        rules_.push_back(foldl_rule());
        arities_["foldl"] = 3;
    }
    if (has_builtin("++")) {
        rules_.push_back(append_rule());
        arities_["++"] = 2;
    }
    for (const auto* g : groups) {
        rules_.push_back(gen_rule(*g));
        arities_[g->function] = g->arity();
    }
    rules_.push_back(add_rule());
    arities_["+"] = 2;
    rules_.push_back(beta_rule());

    if (config_.prelude) {
        warnings_.insert(warnings_.begin(), config_.prelude->warnings.begin(),
                         config_.prelude->warnings.end());
        for (const auto* g : groups) {
            for (const auto& d : g->bindings) {
                auto vars = pattern_variables(d);
                for (const auto& name : free_variables(d.rhs)) {
                    if (arities_.count(name) || is_constructor(name) ||
                        std::find(vars.begin(), vars.end(), name) != vars.end())
                        continue;
                    warnings_.push_back("line " + std::to_string(d.line) + ": " + d.function +
                                        " refers to the unknown name '" + name + "'");
                }
            }
        }
    }

    whnf_ = fix([&](const Strategy& w) {
        std::vector<Strategy> definitions;
        if (has_builtin("sum"))
            definitions.push_back(sum_strategy());
        if (has_builtin("foldl"))
            definitions.push_back(foldl_strategy(w));
        if (has_builtin("++"))
            definitions.push_back(append_strategy(w));
        for (const auto* g : groups)
            definitions.push_back(gen_eval_strat(*g, w));
        definitions.push_back(add_strategy(w));
        return repeat(spinebu(rule_step(beta_rule()) | alternatives(definitions)));
    });

    outermost_ = fix([&](const Strategy& nf) {
        return whnf_ >> try_(defined(std::string(kCons), 2) >> arg(1, 2, nf) >> arg(2, 2, nf));
    });

    std::vector<Strategy> steps;
    for (const auto& r : rules_)
        steps.push_back(rule_step(r));
    innermost_ = leftmost_innermost(alternatives(steps));
}

const Rule* Engine::find_rule(const RuleId& id) const { return stepwise::find_rule(rules_, id); }

std::optional<std::size_t> Engine::arity(const std::string& function) const
{
    auto it = arities_.find(function);
    if (it == arities_.end())
        return std::nullopt;
    return it->second;
}

const Strategy& Engine::strategy(StrategyChoice choice) const
{
    return choice == StrategyChoice::Innermost ? innermost_ : outermost_;
}

std::vector<StepChoice> Engine::next_steps(const Expr& e, StrategyChoice choice) const
{
    Context ctx(e);
    if (choice != StrategyChoice::Free)
        return firsts(strategy(choice), ctx);

    std::vector<StepChoice> out;
    std::vector<StepKey> seen;
    for (auto& s : firsts(outermost_, ctx))
        add_unique(out, seen, std::move(s));
    for (auto& s : firsts(innermost_, ctx))
        add_unique(out, seen, std::move(s));
    collect_redexes(rules_, ctx, out, seen);
    return out;
}

Engine::Run Engine::run(const Expr& e, StrategyChoice choice) const
{
    if (choice == StrategyChoice::Free)
        choice = StrategyChoice::Outermost;
    Run result{Derivation{e, {}}, false};
    Expr current = e;
    while (true) {
        auto steps = firsts(strategy(choice), Context(current));
        if (steps.empty())
            break;
        if (result.derivation.steps.size() >= config_.budget)
            throw ResourceLimit("step budget of " + std::to_string(config_.budget) +
                                " exceeded");
        StepChoice& step = steps.front();
        result.derivation.steps.push_back(
            DerivationStep{step.rule, step.focus, current, step.result});
        current = step.result;
    }
    result.stuck = !is_value(current);
    return result;
}

Derivation Engine::derive(const Expr& e, StrategyChoice choice) const
{
    Run r = run(e, choice);
    if (r.stuck)
        throw StuckError(r.derivation.result());
    return std::move(r.derivation);
}

std::size_t Engine::steps_remaining(const Expr& e, StrategyChoice choice) const
{
    return derive(e, choice).steps.size();
}

StepChoice Engine::hint(const Expr& e, StrategyChoice choice) const
{
    auto steps = next_steps(e, choice);
    if (steps.empty())
        throw NoStepError(is_value(e) ? "the expression is fully evaluated"
                                      : "no rule applies, but the expression is not a value");
    return std::move(steps.front());
}

std::optional<StepChoice> Engine::apply(const Expr& e, const RuleId& rule,
                                        const std::optional<Path>& focus,
                                        StrategyChoice choice) const
{
    const Rule* r = find_rule(rule);
    if (!r)
        return std::nullopt;
    if (focus) {
        auto ctx = Context::at(e, *focus);
        if (!ctx)
            return std::nullopt;
        auto result = apply_rule_at_root(*r, ctx->current());
        if (!result)
            return std::nullopt;
        Context after = ctx->replace(*result);
        return StepChoice{*r, *focus, after.root(), after, Process()};
    }
    for (auto& s : next_steps(e, choice))
        if (s.rule_id() == rule)
            return std::move(s);
    std::vector<StepChoice> anywhere;
    std::vector<StepKey> seen;
    collect_redexes({*r}, Context(e), anywhere, seen);
    if (anywhere.empty())
        return std::nullopt;
    return std::move(anywhere.front());
}

Expr Engine::normal_form(const Expr& e) const
{
    return run(e, StrategyChoice::Outermost).derivation.result();
}

bool Engine::is_value(const Expr& e) const
{
    if (!e.is_app())
        return true;
    Spine sp = spine(e);
    if (!sp.head.is_var())
        return false;
    const std::string& name = sp.head.name();
    if (is_constructor(name))
        return std::all_of(sp.arguments.begin(), sp.arguments.end(),
                           [this](const Expr& a) { return is_value(a); });
    auto a = arity(name);
    return a && sp.arguments.size() < *a;
}

Diagnosis Engine::diagnose(const Expr& current, const Expr& submitted,
                           StrategyChoice choice) const
{
    Diagnosis d;
    auto permitted = next_steps(current, choice);
    for (const auto& p : permitted)
        d.expected.push_back(p.result);

    if (submitted == current) {
        d.kind = Diagnosis::Kind::Incorrect;
        d.note = "no step taken";
        return d;
    }

    for (const auto& p : permitted) {
        if (p.result != submitted)
            continue;
        d.kind = Diagnosis::Kind::CorrectStep;
        d.rule = p.rule;
        d.expected.clear();
        try {
            d.steps_remaining = steps_remaining(submitted, choice);
        } catch (const StuckError& e) {
            d.note = e.what();
        } catch (const ResourceLimit& e) {
            d.note = e.what();
        }
        return d;
    }

    try {
        Expr submitted_nf = normal_form(submitted);
        for (const auto& p : permitted) {
            if (normal_form(p.result) == submitted_nf) {
                d.kind = Diagnosis::Kind::EquivalentButOffStrategy;
                return d;
            }
        }
        if (normal_form(current) == submitted_nf) {
            d.kind = Diagnosis::Kind::CorrectResultWrongPath;
            return d;
        }
    } catch (const ResourceLimit& e) {
        d.kind = Diagnosis::Kind::Incorrect;
        d.note = std::string("equivalence could not be decided: ") + e.what();
        return d;
    }
    d.kind = Diagnosis::Kind::Incorrect;
    return d;
}

Diagnosis Engine::diagnose(const Expr& current, std::string_view submitted,
                           StrategyChoice choice) const
{
    try {
        return diagnose(current, parse_expr(submitted), choice);
    } catch (const ParseError& e) {
        Diagnosis d;
        d.kind = Diagnosis::Kind::ParseError;
        d.note = e.what();
        return d;
    }
}

} // namespace stepwise
