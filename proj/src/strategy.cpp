#include "stepwise/strategy.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <unordered_set>

namespace stepwise {

namespace {

Strategy make(Strategy::Kind kind, std::vector<Strategy> operands = {}, std::string name = {},
              std::size_t index = 0)
{
    auto node = std::make_shared<StrategyNode>();
    node->kind = kind;
    node->operands = std::move(operands);
    node->name = std::move(name);
    node->index = index;
    return Strategy(std::move(node));
}

std::string fresh_variable()
{
    static std::atomic<std::uint64_t> counter{0};
    return "_r" + std::to_string(++counter);
}

} // namespace

Strategy::Kind Strategy::kind() const { return node_->kind; }

Strategy succeed() { return make(Strategy::Kind::Succeed); }
Strategy fail() { return make(Strategy::Kind::Fail); }

Strategy rule_step(Rule r)
{
    auto node = std::make_shared<StrategyNode>();
    node->kind = Strategy::Kind::RuleStep;
    node->name = r.id().str();
    node->rule = std::move(r);
    return Strategy(std::move(node));
}

Strategy check_current(std::string name, std::function<bool(const Expr&)> predicate)
{
    auto node = std::make_shared<StrategyNode>();
    node->kind = Strategy::Kind::Check;
    node->name = std::move(name);
    node->predicate = std::move(predicate);
    return Strategy(std::move(node));
}

Strategy sequence(Strategy first, Strategy second)
{
    return make(Strategy::Kind::Sequence, {std::move(first), std::move(second)});
}

Strategy sequence(const std::vector<Strategy>& parts)
{
    if (parts.empty())
        return succeed();
    Strategy acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
        acc = sequence(parts[i], acc);
    return acc;
}

Strategy choice(Strategy left, Strategy right)
{
    return make(Strategy::Kind::Choice, {std::move(left), std::move(right)});
}

Strategy alternatives(const std::vector<Strategy>& options)
{
    if (options.empty())
        return fail();
    Strategy acc = options.back();
    for (std::size_t i = options.size() - 1; i-- > 0;)
        acc = choice(options[i], acc);
    return acc;
}

Strategy or_else(Strategy left, Strategy right)
{
    return make(Strategy::Kind::OrElse, {std::move(left), std::move(right)});
}

Strategy partial_sequence(Strategy first, Strategy second)
{
    return make(Strategy::Kind::PartialSequence, {std::move(first), std::move(second)});
}

Strategy partial_sequence(const std::vector<Strategy>& parts)
{
    if (parts.empty())
        return succeed();
    Strategy acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i)
        acc = partial_sequence(acc, parts[i]);
    return acc;
}

Strategy fix(std::string variable, Strategy body)
{
    return make(Strategy::Kind::Fix, {std::move(body)}, std::move(variable));
}

Strategy recurse(std::string variable)
{
    return make(Strategy::Kind::Recurse, {}, std::move(variable));
}

Strategy fix(const std::function<Strategy(const Strategy&)>& body)
{
    std::string var = fresh_variable();
    return fix(var, body(recurse(var)));
}

Strategy label(std::string text, Strategy s)
{
    return make(Strategy::Kind::Label, {std::move(s)}, std::move(text));
}

Strategy repeat(Strategy s) { return make(Strategy::Kind::Repeat, {std::move(s)}); }

Strategy child(std::size_t index, Strategy s)
{
    return make(Strategy::Kind::Child, {std::move(s)}, {}, index);
}

Strategy try_(Strategy s) { return or_else(std::move(s), succeed()); }

Strategy outermost(Strategy s)
{
    Strategy once_top_down = fix([&](const Strategy& x) {
        return or_else(s, or_else(child(0, x), child(1, x)));
    });
    return repeat(once_top_down);
}

Strategy innermost(Strategy s)
{
    Strategy once_bottom_up = fix([&](const Strategy& x) {
        return or_else(or_else(child(0, x), child(1, x)), s);
    });
    return repeat(once_bottom_up);
}

Strategy spinebu(Strategy s)
{
    return fix([&](const Strategy& x) {
        return or_else(sequence(check_current("isApp", is_app), child(0, x)), s);
    });
}

Strategy arg(std::size_t i, std::size_t n, Strategy s)
{
    if (i < 1 || i > n)
        throw std::invalid_argument("arg " + std::to_string(i) + " of " + std::to_string(n) +
                                    " is out of range");
    if (i == n)
        return child(1, std::move(s));
    return child(0, arg(i, n - 1, std::move(s)));
}

Strategy args(const std::vector<Strategy>& parts)
{
    std::vector<Strategy> seq;
    seq.reserve(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i)
        seq.push_back(arg(i + 1, parts.size(), parts[i]));
    return sequence(seq);
}

std::string to_string(const Strategy& s)
{
    const StrategyNode& n = s.node();
    auto bin = [&](const char* op) {
        return "(" + to_string(n.operands[0]) + " " + op + " " + to_string(n.operands[1]) + ")";
    };
    switch (n.kind) {
    case Strategy::Kind::Succeed: return "succeed";
    case Strategy::Kind::Fail: return "fail";
    case Strategy::Kind::RuleStep: return n.name;
    case Strategy::Kind::Check: return "check(" + n.name + ")";
    case Strategy::Kind::Sequence: return bin("<*>");
    case Strategy::Kind::Choice: return bin("<|>");
    case Strategy::Kind::OrElse: return bin("|>");
    case Strategy::Kind::PartialSequence: return bin("<*");
    case Strategy::Kind::Fix: return "fix " + n.name + ". " + to_string(n.operands[0]);
    case Strategy::Kind::Recurse: return n.name;
    case Strategy::Kind::Label: return "label \"" + n.name + "\" " + to_string(n.operands[0]);
    case Strategy::Kind::Repeat: return "repeat " + to_string(n.operands[0]);
    case Strategy::Kind::Child:
        return "child " + std::to_string(n.index) + " " + to_string(n.operands[0]);
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Interpretation.
//
// A process is a stack of frames run left to right. Running it on a context
// yields outcomes: either a rewrite step (with the frames still to run) or
// completion without a further step.

namespace {

struct Env {
    std::string variable;
    Strategy fix_node;
    std::shared_ptr<const Env> fix_env;
    std::shared_ptr<const Env> next;
};
using EnvPtr = std::shared_ptr<const Env>;

enum class FrameKind {
    Run,         // run `strategy` in `env`
    Up,          // move the focus back to the parent
    PartialTail, // run `strategy` if it admits a step, otherwise skip it
};

struct Frame {
    FrameKind kind;
    std::optional<Strategy> strategy;
    EnvPtr env;
};

} // namespace

struct Process::Frames {
    Frame frame;
    std::shared_ptr<const Frames> next;
};

namespace {

using Cont = std::shared_ptr<const Process::Frames>;

Cont push(Frame f, Cont rest)
{
    return std::make_shared<const Process::Frames>(Process::Frames{std::move(f), std::move(rest)});
}

Cont push_run(const Strategy& s, const EnvPtr& env, Cont rest)
{
    return push(Frame{FrameKind::Run, s, env}, std::move(rest));
}

Cont concat(const Cont& front, const Cont& back)
{
    if (!front)
        return back;
    if (!back)
        return front;
    std::vector<const Frame*> frames;
    for (const auto* f = front.get(); f; f = f->next.get())
        frames.push_back(&f->frame);
    Cont out = back;
    for (auto it = frames.rbegin(); it != frames.rend(); ++it)
        out = push(**it, out);
    return out;
}

struct Outcome {
    std::optional<Rule> rule; // set for a step
    Context ctx;
    Cont rest;
};

// Limit on fixpoint unfoldings within one query; only unguarded recursion
// gets anywhere near it.
constexpr std::size_t kUnfoldLimit = 2'000'000;

class Runner {
public:
    void run(Cont k, Context ctx, std::vector<Outcome>& out);

private:
    void run_or_else(const Strategy& left, const Strategy& right, const EnvPtr& env,
                     const Cont& rest, const Context& ctx, std::vector<Outcome>& out);
    void unfold()
    {
        if (++unfolds_ > kUnfoldLimit)
            throw ResourceLimit("strategy recursion does not reach a rewrite step");
    }

    std::size_t unfolds_ = 0;
};

bool has_step(const std::vector<Outcome>& outcomes)
{
    return std::any_of(outcomes.begin(), outcomes.end(),
                       [](const Outcome& o) { return o.rule.has_value(); });
}

void Runner::run_or_else(const Strategy& left, const Strategy& right, const EnvPtr& env,
                         const Cont& rest, const Context& ctx, std::vector<Outcome>& out)
{
    std::vector<Outcome> sub;
    run(push_run(left, env, nullptr), ctx, sub);
    if (!has_step(sub)) {
        run(push_run(right, env, rest), ctx, out);
        return;
    }
    for (auto& o : sub) {
        if (o.rule)
            out.push_back({std::move(o.rule), std::move(o.ctx), concat(o.rest, rest)});
        else
            run(rest, std::move(o.ctx), out);
    }
}

void Runner::run(Cont k, Context ctx, std::vector<Outcome>& out)
{
    while (true) {
        if (!k) {
            out.push_back({std::nullopt, std::move(ctx), nullptr});
            return;
        }
        const Frame& frame = k->frame;
        Cont rest = k->next;

        if (frame.kind == FrameKind::Up) {
            ctx = ctx.up();
            k = std::move(rest);
            continue;
        }
        if (frame.kind == FrameKind::PartialTail) {
            run_or_else(*frame.strategy, succeed(), frame.env, rest, ctx, out);
            return;
        }

        const Strategy& s = *frame.strategy;
        const StrategyNode& n = s.node();
        const EnvPtr& env = frame.env;
        switch (n.kind) {
        case Strategy::Kind::Succeed:
            k = std::move(rest);
            continue;
        case Strategy::Kind::Fail:
            return;
        case Strategy::Kind::RuleStep:
            if (auto result = apply_rule_at_root(*n.rule, ctx.current()))
                out.push_back({n.rule, ctx.replace(std::move(*result)), std::move(rest)});
            return;
        case Strategy::Kind::Check:
            if (!n.predicate(ctx.current()))
                return;
            k = std::move(rest);
            continue;
        case Strategy::Kind::Sequence:
            k = push_run(n.operands[0], env, push_run(n.operands[1], env, std::move(rest)));
            continue;
        case Strategy::Kind::Choice:
            run(push_run(n.operands[0], env, rest), ctx, out);
            k = push_run(n.operands[1], env, std::move(rest));
            continue;
        case Strategy::Kind::OrElse:
            run_or_else(n.operands[0], n.operands[1], env, rest, ctx, out);
            return;
        case Strategy::Kind::PartialSequence:
            k = push_run(n.operands[0], env,
                         push(Frame{FrameKind::PartialTail, n.operands[1], env}, std::move(rest)));
            continue;
        case Strategy::Kind::Fix: {
            unfold();
            auto bound = std::make_shared<const Env>(Env{n.name, s, env, env});
            k = push_run(n.operands[0], bound, std::move(rest));
            continue;
        }
        case Strategy::Kind::Recurse: {
            const Env* e = env.get();
            while (e && e->variable != n.name)
                e = e->next.get();
            if (!e)
                throw std::logic_error("unbound strategy variable " + n.name);
            k = push_run(e->fix_node, e->fix_env, std::move(rest));
            continue;
        }
        case Strategy::Kind::Label:
            k = push_run(n.operands[0], env, std::move(rest));
            continue;
        case Strategy::Kind::Repeat: {
            std::vector<Outcome> sub;
            run(push_run(n.operands[0], env, nullptr), ctx, sub);
            if (!has_step(sub)) {
                k = std::move(rest);
                continue;
            }
            Cont again = push_run(s, env, rest);
            for (auto& o : sub)
                if (o.rule)
                    out.push_back({std::move(o.rule), std::move(o.ctx), concat(o.rest, again)});
            return;
        }
        case Strategy::Kind::Child: {
            auto down = ctx.down(n.index);
            if (!down)
                return;
            ctx = std::move(*down);
            k = push_run(n.operands[0], env, push(Frame{FrameKind::Up, std::nullopt, nullptr},
                                                  std::move(rest)));
            continue;
        }
        }
    }
}

std::vector<Outcome> outcomes(const Process& p, const Context& c)
{
    std::vector<Outcome> out;
    Runner runner;
    runner.run(p.frames(), c, out);
    return out;
}

struct StepKey {
    std::string rule;
    Path focus;
    Expr result;

    bool operator==(const StepKey&) const = default;
};

} // namespace

Process::Process(const Strategy& s) : frames_(push_run(s, nullptr, nullptr)) {}

std::vector<StepChoice> firsts(const Process& p, const Context& c)
{
    std::vector<StepChoice> result;
    std::vector<StepKey> seen;
    for (auto& o : outcomes(p, c)) {
        if (!o.rule)
            continue;
        Path focus = o.ctx.path();
        Expr whole = o.ctx.root();
        StepKey key{o.rule->id().str(), focus, whole};
        if (std::find(seen.begin(), seen.end(), key) != seen.end())
            continue;
        seen.push_back(key);
        result.push_back(StepChoice{*o.rule, std::move(focus), std::move(whole), std::move(o.ctx),
                                    Process(std::move(o.rest))});
    }
    return result;
}

std::vector<StepChoice> firsts(const Strategy& s, const Context& c)
{
    return firsts(Process(s), c);
}

bool can_finish(const Process& p, const Context& c)
{
    auto out = outcomes(p, c);
    return std::any_of(out.begin(), out.end(), [](const Outcome& o) { return !o.rule; });
}

std::vector<Context> apply_all(const Strategy& s, const Context& c, std::size_t budget)
{
    std::vector<Context> terminals;
    std::size_t steps = 0;
    std::vector<std::pair<Process, Context>> stack{{Process(s), c}};
    while (!stack.empty()) {
        auto [process, ctx] = std::move(stack.back());
        stack.pop_back();
        std::vector<std::pair<Process, Context>> next;
        for (auto& o : outcomes(process, ctx)) {
            if (!o.rule) {
                if (std::find(terminals.begin(), terminals.end(), o.ctx) == terminals.end())
                    terminals.push_back(std::move(o.ctx));
                continue;
            }
            if (++steps > budget)
                throw ResourceLimit("step budget of " + std::to_string(budget) + " exceeded");
            next.emplace_back(Process(std::move(o.rest)), std::move(o.ctx));
        }
        for (auto it = next.rbegin(); it != next.rend(); ++it)
            stack.push_back(std::move(*it));
    }
    return terminals;
}

} // namespace stepwise
