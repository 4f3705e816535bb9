#include "stepwise/rules.hpp"

#include <algorithm>
#include <stdexcept>

namespace stepwise {

namespace {

bool is_meta(const std::vector<std::string>& meta_vars, const std::string& name)
{
    return std::find(meta_vars.begin(), meta_vars.end(), name) != meta_vars.end();
}

bool match(const std::vector<std::string>& meta_vars, const Expr& pattern, const Expr& e,
           Bindings& bindings)
{
    switch (pattern.kind()) {
    case Expr::Kind::Var:
        if (is_meta(meta_vars, pattern.name())) {
            auto [it, inserted] = bindings.emplace(pattern.name(), e);
            return inserted || it->second == e;
        }
        return e.is_var() && e.name() == pattern.name();
    case Expr::Kind::Lit:
        return e.is_lit() && e.value() == pattern.value();
    case Expr::Kind::App:
        return e.is_app() && match(meta_vars, pattern.function(), e.function(), bindings) &&
               match(meta_vars, pattern.argument(), e.argument(), bindings);
    case Expr::Kind::Abs:
        return e.is_abs() && e.binder() == pattern.binder() &&
               match(meta_vars, pattern.body(), e.body(), bindings);
    }
    return false;
}

void collect_vars(const Expr& e, std::vector<std::string>& out)
{
    switch (e.kind()) {
    case Expr::Kind::Var:
        out.push_back(e.name());
        break;
    case Expr::Kind::App:
        collect_vars(e.function(), out);
        collect_vars(e.argument(), out);
        break;
    case Expr::Kind::Abs:
        collect_vars(e.body(), out);
        break;
    case Expr::Kind::Lit:
        break;
    }
}

Expr instantiate(const RewriteAlternative& alt, const Bindings& bindings)
{
    std::vector<std::pair<std::string, Expr>> subst;
    for (const auto& mv : alt.meta_vars)
        if (auto it = bindings.find(mv); it != bindings.end())
            subst.emplace_back(mv, it->second);
    return substitute_all(subst, alt.rhs);
}

Expr v(const char* name) { return Expr::var(name); }

} // namespace

Rule Rule::rewrite(RuleId id, std::vector<RewriteAlternative> alternatives, std::string annotation,
                   std::optional<std::string> description)
{
    if (alternatives.empty())
        throw std::invalid_argument("rule " + id.str() + " has no alternatives");
    for (const auto& alt : alternatives) {
        std::vector<std::string> lhs_vars;
        collect_vars(alt.lhs, lhs_vars);
        for (const auto& name : free_variables(alt.rhs)) {
            if (is_meta(alt.meta_vars, name) &&
                std::find(lhs_vars.begin(), lhs_vars.end(), name) == lhs_vars.end())
                throw std::invalid_argument("rule " + id.str() + ": meta-variable '" + name +
                                            "' occurs on the right-hand side only");
        }
    }
    auto data = std::make_shared<Data>();
    data->id = std::move(id);
    data->annotation = std::move(annotation);
    data->description = std::move(description);
    data->alternatives = std::move(alternatives);
    return Rule(std::move(data));
}

Rule Rule::primitive(RuleId id, Primitive fn, std::string annotation,
                     std::optional<std::string> description)
{
    auto data = std::make_shared<Data>();
    data->id = std::move(id);
    data->annotation = std::move(annotation);
    data->description = std::move(description);
    data->primitive = std::move(fn);
    return Rule(std::move(data));
}

Rule Rule::described(std::optional<std::string> description) const
{
    auto data = std::make_shared<Data>(*data_);
    data->description = std::move(description);
    return Rule(std::move(data));
}

std::optional<RuleMatch> match_rule(const Rule& r, const Expr& e)
{
    const auto& alts = r.alternatives();
    for (std::size_t i = 0; i < alts.size(); ++i) {
        Bindings bindings;
        if (match(alts[i].meta_vars, alts[i].lhs, e, bindings))
            return RuleMatch{i, std::move(bindings)};
    }
    return std::nullopt;
}

std::optional<Expr> apply_rule_at_root(const Rule& r, const Expr& e)
{
    if (!r.is_intensional())
        return r.data_->primitive(e);
    auto m = match_rule(r, e);
    if (!m)
        return std::nullopt;
    return instantiate(r.alternatives()[m->alternative], m->bindings);
}

Rule sum_rule()
{
    return Rule::rewrite(RuleId("eval.sum.rule"),
                         {{{}, v("sum"), app_n(v("foldl"), {v("+"), Expr::lit(0)})}},
                         "definition sum", "Calculate the sum of a list of numbers");
}

Rule foldl_rule()
{
    std::vector<std::string> mv{"f", "v", "x", "xs"};
    Expr foldl = v("foldl");
    return Rule::rewrite(
        RuleId("eval.foldl.rule"),
        {
            {mv, app_n(foldl, {v("f"), v("v"), nil()}), v("v")},
            {mv, app_n(foldl, {v("f"), v("v"), cons(v("x"), v("xs"))}),
             app_n(foldl, {v("f"), app_n(v("f"), {v("v"), v("x")}), v("xs")})},
        },
        "definition foldl", "Process a list using an operator that associates to the left");
}

Rule append_rule()
{
    std::vector<std::string> mv{"x", "xs", "ys"};
    Expr append = v("++");
    return Rule::rewrite(
        RuleId("eval.append.rule"),
        {
            {mv, app_n(append, {nil(), v("ys")}), v("ys")},
            {mv, app_n(append, {cons(v("x"), v("xs")), v("ys")}),
             cons(v("x"), app_n(append, {v("xs"), v("ys")}))},
        },
        "definition ++", "Append two lists");
}

Rule add_rule()
{
    auto add = [](const Expr& e) -> std::optional<Expr> {
        if (!is_fun("+", 2, e))
            return std::nullopt;
        const Expr& x = e.function().argument();
        const Expr& y = e.argument();
        if (!x.is_lit() || !y.is_lit())
            return std::nullopt;
        std::int64_t sum = 0;
        if (__builtin_add_overflow(x.value(), y.value(), &sum))
            return std::nullopt;
        return Expr::lit(sum);
    };
    return Rule::primitive(RuleId("eval.add.rule"), add, "applying +", "Add two integers");
}

Rule beta_rule()
{
    auto beta = [](const Expr& e) -> std::optional<Expr> {
        if (!e.is_app() || !e.function().is_abs())
            return std::nullopt;
        const Expr& lambda = e.function();
        return substitute(lambda.binder(), e.argument(), lambda.body());
    };
    return Rule::primitive(RuleId("eval.beta.rule"), beta, "beta reduction",
                           "Substitute the argument for the parameter of a lambda abstraction");
}

std::vector<Rule> builtin_rules()
{
    return {sum_rule(), foldl_rule(), append_rule(), add_rule(), beta_rule()};
}

const Rule* find_rule(const std::vector<Rule>& rules, const RuleId& id)
{
    for (const auto& r : rules)
        if (r.id() == id)
            return &r;
    return nullptr;
}

} // namespace stepwise
