// Acceptance report: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <string>

#include "stepwise/engine.hpp"
#include "stepwise/parser.hpp"
#include "support/golden.hpp"
#include "support/properties.hpp"

using namespace stepwise;

namespace {

using Clock = std::chrono::steady_clock;

const char* const kRunningExample = "sum ([3,7] ++ [5])";

Expr p(const char* text) { return parse_expr(text); }

struct Verdict {
    bool ok;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Verdict()>& check)
{
    Verdict v{false, ""};
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("threw: ") + e.what()};
    }
    failures += !v.ok;
    std::cout << (v.ok ? "PASS " : "FAIL ") << name;
    if (!v.detail.empty())
        std::cout << " (" << v.detail << ")";
    std::cout << '\n';
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

const Engine& generated_engine()
{
    static const Engine engine([] {
        EngineConfig config;
        config.builtin_definitions = false;
        config.prelude = load_prelude(STEPWISE_DATA_DIR "/standard.hs");
        return config;
    }());
    return engine;
}

Verdict golden_run(const Engine& engine, StrategyChoice choice, const std::string& file)
{
    auto start = Clock::now();
    Derivation d = engine.derive(p(kRunningExample), choice);
    double took = seconds_since(start);
    bool ok = d.steps.size() == 11 && d.result() == Expr::lit(15) && golden::matches(d, file) &&
              took < 1.0;
    return {ok, std::to_string(d.steps.size()) + " steps, result " + pretty(d.result()) + ", " +
                    std::to_string(took) + " s"};
}

Verdict diagnosis_matrix()
{
    const Engine engine;
    for (auto choice : {StrategyChoice::Outermost, StrategyChoice::Innermost}) {
        Derivation d = engine.derive(p(kRunningExample), choice);
        for (const auto& step : d.steps)
            if (engine.diagnose(step.before, step.after, choice).kind != Diagnosis::Kind::CorrectStep)
                return {false, to_string(choice) + " step to " + pretty(step.after) + " rejected"};
    }
    auto fused = engine.diagnose(p("foldl (+) 0 (3:([7]++[5]))"), p("foldl (+) 3 ([7]++[5])"),
                                 StrategyChoice::Outermost);
    if (fused.kind != Diagnosis::Kind::EquivalentButOffStrategy)
        return {false, "fused step judged " + to_string(fused.kind)};
    auto wrong = engine.diagnose(p("foldl (+) 0 ([3,7] ++ [5])"), p("foldl (+) 1 ([3,7]++[5])"),
                                 StrategyChoice::Outermost);
    if (wrong.kind != Diagnosis::Kind::Incorrect)
        return {false, "wrong step judged " + to_string(wrong.kind)};
    return {true, ""};
}

Verdict property_suite()
{
    auto start = Clock::now();
    std::vector<std::pair<std::string, props::Outcome>> outcomes{
        {"replay", props::derivation_replay()},
        {"round trip", props::parse_pretty_round_trip()},
        {"substitution", props::substitution_oracle()},
        {"partial sequence", props::partial_sequence_law()},
        {"countdown", props::monotone_countdown()},
    };
    double took = seconds_since(start);
    std::string detail;
    bool ok = took < 30.0;
    for (const auto& [name, o] : outcomes) {
        ok = ok && o.passed() && o.cases >= props::kCases;
        detail += name + " " + std::to_string(o.cases - o.failures) + "/" + std::to_string(o.cases) + ", ";
        if (!o.passed())
            detail += "first failure: " + o.first_failure + ", ";
    }
    return {ok, detail + std::to_string(took) + " s"};
}

Verdict stuck_detection()
{
    const Engine& engine = props::practice_engine();
    auto start = Clock::now();
    try {
        engine.derive(p("head (1 : loop)"), StrategyChoice::Innermost);
        return {false, "diverging input produced a derivation"};
    } catch (const ResourceLimit&) {
    }
    double took = seconds_since(start);
    try {
        engine.derive(p("foldl (+) 0 5"), StrategyChoice::Outermost);
        return {false, "stuck term produced a derivation"};
    } catch (const StuckError&) {
    }
    return {took < 20.0, "budget reached after " + std::to_string(took) + " s"};
}

} // namespace

int main()
{
    const Engine builtin;
    report("golden derivation, outermost",
           [&] { return golden_run(builtin, StrategyChoice::Outermost, "running_example_outermost.txt"); });
    report("golden derivation, innermost",
           [&] { return golden_run(builtin, StrategyChoice::Innermost, "running_example_innermost.txt"); });
    report("weak head normal form of (id id) 3 in two steps", [] {
        Derivation d = props::practice_engine().derive(p("(id id) 3"), StrategyChoice::Outermost);
        return Verdict{d.steps.size() == 2 && d.result() == Expr::lit(3),
                       std::to_string(d.steps.size()) + " steps"};
    });
    report("generated definitions reproduce both golden derivations", [] {
        Verdict outer = golden_run(generated_engine(), StrategyChoice::Outermost, "running_example_outermost.txt");
        Verdict inner = golden_run(generated_engine(), StrategyChoice::Innermost, "running_example_innermost.txt");
        return Verdict{outer.ok && inner.ok, outer.detail + "; " + inner.detail};
    });
    report("diagnosis matrix on the running example", diagnosis_matrix);
    report("property suite", property_suite);
    report("diverging and stuck inputs terminate with an error", stuck_detection);
    return failures == 0 ? 0 : 1;
}
