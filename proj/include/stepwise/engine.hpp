#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stepwise/context.hpp"
#include "stepwise/expr.hpp"
#include "stepwise/prelude.hpp"
#include "stepwise/rules.hpp"
#include "stepwise/strategy.hpp"

namespace stepwise {

/// Which steps a student is expected to take. `Free` accepts any step either
/// evaluation order would take, and any rule applied at any position;
/// derivations in that mode follow the outermost order.
enum class StrategyChoice { Outermost, Innermost, Free };

std::string to_string(StrategyChoice choice);
/// "outermost", "innermost" or "free"; nothing otherwise.
std::optional<StrategyChoice> parse_strategy_choice(std::string_view text);

/// Evaluation cannot continue, but the term is not a value.
class StuckError : public std::runtime_error {
public:
    explicit StuckError(Expr term);
    const Expr& term() const { return term_; }

private:
    Expr term_;
};

/// Asked for a next step of a term in normal form.
class NoStepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DerivationStep {
    Rule rule;
    Path focus;
    Expr before;
    Expr after;

    const RuleId& rule_id() const { return rule.id(); }
};

struct Derivation {
    Expr start;
    std::vector<DerivationStep> steps;

    const Expr& result() const { return steps.empty() ? start : steps.back().after; }
};

struct Diagnosis {
    enum class Kind {
        CorrectStep,
        /// Same value as the permitted step, but not a single permitted step.
        EquivalentButOffStrategy,
        /// Same normal form as the current term, yet no step was permitted.
        CorrectResultWrongPath,
        Incorrect,
        ParseError,
    };

    Kind kind = Kind::Incorrect;
    /// For CorrectStep: the rule that was applied.
    std::optional<Rule> rule;
    /// For CorrectStep: steps left after the submitted one, when evaluation
    /// of the submitted term finishes.
    std::optional<std::size_t> steps_remaining;
    /// For Incorrect: the steps that were permitted.
    std::vector<Expr> expected;
    /// Parse error text, or a remark such as "no step taken".
    std::string note;
};

std::string to_string(Diagnosis::Kind kind);

struct EngineConfig {
    /// Enables the hand-written sum, foldl and ++ definitions. Addition and
    /// beta reduction are always available.
    bool builtin_definitions = true;
    std::optional<PreludeFile> prelude;
    std::size_t budget = kDefaultStepBudget;
};

/// Rules and evaluation strategies for one prelude. Immutable after
/// construction and safe to share between threads.
class Engine {
public:
    explicit Engine(EngineConfig config = {});

    /// Every rule the engine can apply, one per defined function.
    const std::vector<Rule>& rules() const { return rules_; }
    const Rule* find_rule(const RuleId& id) const;
    /// Arity of a defined function or primitive.
    std::optional<std::size_t> arity(const std::string& function) const;
    /// Load-time remarks about the prelude.
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::size_t budget() const { return config_.budget; }
    const EngineConfig& config() const { return config_; }

    /// Evaluation to weak head normal form.
    const Strategy& whnf() const { return whnf_; }
    /// Outermost, or left-most innermost, evaluation to normal form. Free
    /// yields the outermost strategy.
    const Strategy& strategy(StrategyChoice choice) const;

    /// Steps permitted next, in preference order.
    std::vector<StepChoice> next_steps(const Expr& e, StrategyChoice choice) const;

    /// The complete derivation. Throws ResourceLimit past the step budget and
    /// StuckError when evaluation halts on a term that is not a value.
    Derivation derive(const Expr& e, StrategyChoice choice) const;
    std::size_t steps_remaining(const Expr& e, StrategyChoice choice) const;

    /// The preferred next step; throws NoStepError in normal form.
    StepChoice hint(const Expr& e, StrategyChoice choice) const;

    /// Applies `rule` at `focus`, or where the strategy would apply it, or at
    /// the first position where it applies. Nothing if it applies nowhere.
    std::optional<StepChoice> apply(const Expr& e, const RuleId& rule,
                                    const std::optional<Path>& focus,
                                    StrategyChoice choice) const;

    /// Outermost normal form; stops quietly on stuck terms.
    Expr normal_form(const Expr& e) const;

    /// Literals, lambdas, variables, constructors applied to values, and
    /// functions applied to fewer arguments than their arity.
    bool is_value(const Expr& e) const;

    Diagnosis diagnose(const Expr& current, const Expr& submitted, StrategyChoice choice) const;
    /// Parses the submission first; a syntax error yields Kind::ParseError.
    Diagnosis diagnose(const Expr& current, std::string_view submitted,
                       StrategyChoice choice) const;

private:
    struct Run {
        Derivation derivation;
        bool stuck = false;
    };
    Run run(const Expr& e, StrategyChoice choice) const;

    EngineConfig config_;
    std::vector<Rule> rules_;
    std::map<std::string, std::size_t> arities_;
    std::vector<std::string> warnings_;
    Strategy whnf_ = succeed();
    Strategy outermost_ = succeed();
    Strategy innermost_ = succeed();
};

} // namespace stepwise
