#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "stepwise/context.hpp"
#include "stepwise/expr.hpp"
#include "stepwise/rules.hpp"

namespace stepwise {

inline constexpr std::size_t kDefaultStepBudget = 10'000;

/// Thrown when a computation exceeds its step budget or a strategy recurses
/// without ever reaching a rewrite step.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StrategyNode;

/// A rewrite strategy: a grammar whose sentences are sequences of rule
/// applications on a Context. Immutable; copies share structure.
class Strategy {
public:
    enum class Kind {
        Succeed,
        Fail,
        RuleStep,
        Check,
        Sequence,
        Choice,
        OrElse,
        PartialSequence,
        Fix,
        Recurse,
        Label,
        Repeat,
        Child,
    };

    Kind kind() const;
    const StrategyNode& node() const { return *node_; }

    explicit Strategy(std::shared_ptr<const StrategyNode> node) : node_(std::move(node)) {}

private:
    std::shared_ptr<const StrategyNode> node_;
};

struct StrategyNode {
    Strategy::Kind kind;
    std::vector<Strategy> operands;
    std::string name; // label text, check name, or recursion variable
    std::size_t index = 0;
    std::optional<Rule> rule;
    std::function<bool(const Expr&)> predicate;
};

Strategy succeed();
Strategy fail();
/// Applies `r` to the focused sub-expression.
Strategy rule_step(Rule r);
Strategy check_current(std::string name, std::function<bool(const Expr&)> predicate);

/// First `first`, then `second`.
Strategy sequence(Strategy first, Strategy second);
Strategy sequence(const std::vector<Strategy>& parts);
/// Either operand.
Strategy choice(Strategy left, Strategy right);
Strategy alternatives(const std::vector<Strategy>& options);
/// `left` if it admits a step here, otherwise `right`.
Strategy or_else(Strategy left, Strategy right);
/// `first`, then `second` when it admits a step; finishing after `first`
/// otherwise. Keeps the effect of `first` visible when `second` fails.
Strategy partial_sequence(Strategy first, Strategy second);
Strategy partial_sequence(const std::vector<Strategy>& parts);

/// Recursion through a named strategy variable.
Strategy fix(std::string variable, Strategy body);
Strategy recurse(std::string variable);
/// Recursion with a fresh variable; `body` receives the recursive reference.
Strategy fix(const std::function<Strategy(const Strategy&)>& body);

Strategy label(std::string text, Strategy s);
/// Applies `s` as long as it admits a step.
Strategy repeat(Strategy s);
Strategy child(std::size_t index, Strategy s);
Strategy try_(Strategy s);

/// `s` at the left-most outermost position where it admits a step, repeated.
Strategy outermost(Strategy s);
/// `s` at the left-most innermost position where it admits a step, repeated.
Strategy innermost(Strategy s);
/// `s` on the left spine of an application, bottom-up.
Strategy spinebu(Strategy s);
/// `s` on argument `i` (1-based) of a function applied to `n` arguments.
/// Throws std::invalid_argument unless 1 <= i <= n.
Strategy arg(std::size_t i, std::size_t n, Strategy s);
/// `parts[k]` on argument k+1 of parts.size() arguments, in sequence.
Strategy args(const std::vector<Strategy>& parts);

inline Strategy operator>>(Strategy a, Strategy b) { return sequence(std::move(a), std::move(b)); }
inline Strategy operator|(Strategy a, Strategy b) { return choice(std::move(a), std::move(b)); }

std::string to_string(const Strategy& s);

/// A strategy part-way through its derivation: what is left to do.
class Process {
public:
    Process() = default;
    explicit Process(const Strategy& s);

    bool finished() const { return !frames_; }

    struct Frames;
    explicit Process(std::shared_ptr<const Frames> frames) : frames_(std::move(frames)) {}
    const std::shared_ptr<const Frames>& frames() const { return frames_; }

private:
    std::shared_ptr<const Frames> frames_;
};

/// One rewrite step permitted next.
struct StepChoice {
    Rule rule;
    Path focus;
    /// The whole term after the step.
    Expr result;
    /// Context after the step (focused where the rule applied).
    Context after;
    Process remainder;

    const RuleId& rule_id() const { return rule.id(); }
};

/// All single steps the strategy permits next, without duplicates, ordered
/// left operand before right operand.
std::vector<StepChoice> firsts(const Strategy& s, const Context& c);
std::vector<StepChoice> firsts(const Process& p, const Context& c);

/// True when the process may stop here without taking another step.
bool can_finish(const Process& p, const Context& c);

/// Every terminal context reachable by running `s` to completion, depth-first
/// in firsts order and deduplicated. Throws ResourceLimit once more than
/// `budget` steps have been explored.
std::vector<Context> apply_all(const Strategy& s, const Context& c,
                               std::size_t budget = kDefaultStepBudget);

} // namespace stepwise
