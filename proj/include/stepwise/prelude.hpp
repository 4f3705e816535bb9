#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stepwise/expr.hpp"
#include "stepwise/rules.hpp"
#include "stepwise/strategy.hpp"

namespace stepwise {

/// A pattern on the left-hand side of a function binding.
class Pat {
public:
    enum class Kind { Con, Var, Lit };

    static Pat con(std::string name, std::vector<Pat> subpatterns = {});
    static Pat var(std::string name);
    static Pat lit(std::int64_t value);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const std::vector<Pat>& subpatterns() const { return subpatterns_; }
    std::int64_t value() const { return value_; }

    friend bool operator==(const Pat&, const Pat&) = default;

private:
    Kind kind_ = Kind::Var;
    std::string name_;
    std::vector<Pat> subpatterns_;
    std::int64_t value_ = 0;
};

/// One binding `f p1 .. pn = rhs`.
struct Def {
    std::string function;
    std::vector<Pat> patterns;
    Expr rhs;
    int line = 0;
};

/// The bindings of one function, with the description from its DESC pragma.
struct DefinitionGroup {
    std::string function;
    std::optional<std::string> description;
    std::vector<Def> bindings;

    std::size_t arity() const { return bindings.front().patterns.size(); }
};

struct PreludeFile {
    std::vector<DefinitionGroup> groups;
    std::vector<std::string> warnings;

    const DefinitionGroup* find(std::string_view function) const;
};

/// Parses a prelude of Haskell-style function definitions.
///
/// `{-# DESC text #-}` describes the definition group that follows it. Type
/// signatures and comments are skipped. Throws ParseError with the line of a
/// malformed binding, an arity mismatch, non-linear patterns, guards, `where`
/// clauses, or a definition of a primitive or a constructor.
PreludeFile parse_prelude(std::string_view source);

/// Reads and parses a prelude file; throws std::runtime_error when the file
/// cannot be read.
PreludeFile load_prelude(const std::string& path);

Expr pat_to_expr(const Pat& p);
std::vector<std::string> pattern_variables(const Def& d);

/// "eval.<name>.rule", with operators spelled out (`++` becomes "append").
RuleId rule_id_for(std::string_view function);

/// The rewrite rule of a single binding.
Rule gen_rule(const RuleId& id, const Def& d, std::optional<std::string> description = {});
/// One rule for all bindings of a function, alternatives in source order.
Rule gen_rule(const DefinitionGroup& group);

/// The evaluation strategy of one binding: match the patterns, forcing
/// arguments to weak head normal form with `whnf` where a constructor or a
/// literal is expected, then apply the binding's rule.
Strategy gen_eval_strat(const RuleId& id, const Def& d, const Strategy& whnf,
                        std::optional<std::string> description = {});
/// The bindings of a group tried in order of appearance.
Strategy gen_eval_strat(const DefinitionGroup& group, const Strategy& whnf);

} // namespace stepwise
