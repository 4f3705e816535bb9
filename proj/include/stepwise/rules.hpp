#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stepwise/expr.hpp"

namespace stepwise {

/// Dotted rule identifier such as "eval.sum.rule".
class RuleId {
public:
    RuleId() = default;
    explicit RuleId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const { return value_; }
    bool empty() const { return value_.empty(); }

    friend bool operator==(const RuleId&, const RuleId&) = default;
    friend auto operator<=>(const RuleId&, const RuleId&) = default;

private:
    std::string value_;
};

using Bindings = std::map<std::string, Expr>;

/// One `lhs ~> rhs` case of an intensional rule.
struct RewriteAlternative {
    std::vector<std::string> meta_vars;
    Expr lhs;
    Expr rhs;
};

struct RuleMatch {
    std::size_t alternative = 0;
    Bindings bindings;
};

/// A named rewrite step. Either intensional (alternatives tried in order) or
/// primitive (an arbitrary partial function on expressions).
class Rule {
public:
    using Primitive = std::function<std::optional<Expr>(const Expr&)>;

    /// Throws std::invalid_argument if some alternative uses a meta-variable
    /// on its right-hand side that does not occur on its left-hand side.
    static Rule rewrite(RuleId id, std::vector<RewriteAlternative> alternatives,
                        std::string annotation, std::optional<std::string> description = {});
    static Rule primitive(RuleId id, Primitive fn, std::string annotation,
                          std::optional<std::string> description = {});

    const RuleId& id() const { return data_->id; }
    /// Short text shown between the braces of a derivation, e.g. "definition foldl".
    const std::string& annotation() const { return data_->annotation; }
    const std::optional<std::string>& description() const { return data_->description; }

    bool is_intensional() const { return !data_->primitive; }
    const std::vector<RewriteAlternative>& alternatives() const { return data_->alternatives; }

    /// A copy of this rule with a different description.
    Rule described(std::optional<std::string> description) const;

private:
    struct Data {
        RuleId id;
        std::string annotation;
        std::optional<std::string> description;
        std::vector<RewriteAlternative> alternatives;
        Primitive primitive;
    };
    explicit Rule(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;

    friend std::optional<Expr> apply_rule_at_root(const Rule&, const Expr&);
};

/// First-order match of the rule's alternatives against `e`, in order.
/// Returns nothing for primitive rules.
std::optional<RuleMatch> match_rule(const Rule& r, const Expr& e);

std::optional<Expr> apply_rule_at_root(const Rule& r, const Expr& e);

Rule sum_rule();
Rule foldl_rule();
Rule append_rule();
Rule add_rule();
Rule beta_rule();

/// sum, foldl, append, add and beta, in that order.
std::vector<Rule> builtin_rules();

const Rule* find_rule(const std::vector<Rule>& rules, const RuleId& id);

} // namespace stepwise

template <>
struct std::hash<stepwise::RuleId> {
    std::size_t operator()(const stepwise::RuleId& id) const noexcept
    {
        return std::hash<std::string>{}(id.str());
    }
};
