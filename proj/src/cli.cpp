#include "stepwise/cli.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stepwise/parser.hpp"
#include "stepwise/service.hpp"

namespace stepwise {

namespace {

std::string plural_steps(std::size_t n) { return std::to_string(n) + (n == 1 ? " step" : " steps"); }

std::string pad(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

struct CommonOptions {
    std::string strategy = "outermost";
    std::string prelude;
    std::string script;
    bool no_builtins = false;
    std::size_t budget = kDefaultStepBudget;
};

void add_engine_options(CLI::App& cmd, CommonOptions& o, bool with_strategy = true)
{
    if (with_strategy)
        cmd.add_option("-s,--strategy", o.strategy, "outermost, innermost or free")
            ->check(CLI::IsMember({"outermost", "innermost", "free"}))
            ->capture_default_str();
    cmd.add_option("--prelude", o.prelude, "prelude file with function definitions")
        ->envname("STEPWISE_PRELUDE");
    cmd.add_flag("--no-builtins", o.no_builtins,
                 "disable the built-in sum, foldl and ++ definitions");
    cmd.add_option("--budget", o.budget, "maximum number of evaluation steps")
        ->envname("STEPWISE_BUDGET")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::shared_ptr<const Engine> make_engine(const CommonOptions& o, std::ostream& err)
{
    EngineConfig config;
    config.builtin_definitions = !o.no_builtins;
    config.budget = o.budget;
    if (!o.prelude.empty()) {
        try {
            config.prelude = load_prelude(o.prelude);
        } catch (const ParseError& e) {
            throw std::runtime_error(o.prelude + ":" + e.what());
        }
    }
    auto engine = std::make_shared<const Engine>(std::move(config));
    for (const auto& w : engine->warnings())
        err << "warning: " << (o.prelude.empty() ? "" : o.prelude + ": ") << w << '\n';
    return engine;
}

FeedbackScript make_script(const CommonOptions& o)
{
    if (o.script.empty())
        return {};
    try {
        return FeedbackScript::load(o.script);
    } catch (const ParseError& e) {
        throw std::runtime_error(o.script + ":" + e.what());
    }
}

// Raised for bad input; reported with exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Expr parse_argument(const std::string& text)
{
    try {
        return parse_expr(text);
    } catch (const ParseError& e) {
        throw InputError("parse error: " + std::string(e.what()));
    }
}

std::string failure_text(const std::exception& e) { return e.what(); }

} // namespace

std::string format_derivation(const Derivation& d, bool numbered)
{
    std::ostringstream out;
    out << "  " << pretty(d.start) << '\n';
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
        const auto& s = d.steps[i];
        out << "= { " << s.rule.annotation() << " }";
        if (numbered)
            out << "  -- step " << i + 1;
        out << '\n' << "  " << pretty(s.after) << '\n';
    }
    return out.str();
}

std::string format_comparison(const std::string& left_title, const Derivation* left,
                              const std::string& left_failure, const std::string& right_title,
                              const Derivation* right, const std::string& right_failure)
{
    auto column = [](const Derivation* d) {
        std::vector<std::pair<std::string, std::string>> rows; // annotation, expression
        if (!d)
            return rows;
        rows.emplace_back("", pretty(d->start));
        for (const auto& s : d->steps)
            rows.emplace_back("= { " + s.rule.annotation() + " }", pretty(s.after));
        return rows;
    };
    auto lhs = column(left);
    auto rhs = column(right);

    std::size_t width = left_title.size();
    for (const auto& [annotation, expr] : lhs)
        width = std::max({width, annotation.size(), expr.size()});
    width += 4;
    std::size_t rows = std::max(lhs.size(), rhs.size());
    std::size_t index_width = std::to_string(rows).size() + 2;

    std::ostringstream out;
    out << std::string(index_width, ' ') << pad(left_title, width) << right_title << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        if (i > 0) {
            std::string a = i < lhs.size() ? lhs[i].first : "";
            std::string b = i < rhs.size() ? rhs[i].first : "";
            std::string line = std::string(index_width, ' ') + pad(a, width) + b;
            line.erase(line.find_last_not_of(' ') + 1);
            out << line << '\n';
        }
        std::string index = std::to_string(i);
        std::string a = i < lhs.size() ? lhs[i].second : "";
        std::string b = i < rhs.size() ? rhs[i].second : "";
        std::string line = pad(index, index_width) + pad(a, width) + b;
        line.erase(line.find_last_not_of(' ') + 1);
        out << line << '\n';
    }
    auto summary = [](const std::string& title, const Derivation* d, const std::string& failure) {
        if (!d)
            return title + ": " + failure;
        return title + ": " + plural_steps(d->steps.size()) + ", result " + pretty(d->result());
    };
    out << '\n'
        << summary(left_title, left, left_failure) << '\n'
        << summary(right_title, right, right_failure) << '\n';
    return out.str();
}

int practice(const Engine& engine, const FeedbackScript& script, const Expr& start,
             StrategyChoice choice, std::istream& in, std::ostream& out)
{
    Expr current = start;
    std::size_t remaining = engine.steps_remaining(current, choice);
    std::size_t taken = 0;
    out << "Practising with the " << to_string(choice) << " strategy; "
        << plural_steps(remaining) << " to go.\n"
        << "Type the next expression, or :hint, :steps, :quit.\n";

    while (remaining > 0) {
        out << "  " << pretty(current) << "\n> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) {
            out << "\nStopped after " << plural_steps(taken) << ".\n";
            return exit_code::ok;
        }
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);

        if (line == ":quit" || line == ":q") {
            out << "Stopped after " << plural_steps(taken) << ".\n";
            return exit_code::ok;
        }
        if (line == ":steps") {
            out << plural_steps(remaining) << " remaining\n";
            continue;
        }
        if (line == ":hint") {
            StepChoice h = engine.hint(current, choice);
            out << "Hint: " << message_for(script, h.rule_id(), engine.rules()) << " ("
                << h.rule.annotation() << ")\n";
            continue;
        }
        if (line.front() == ':') {
            out << "Unknown command " << line << "; use :hint, :steps or :quit.\n";
            continue;
        }

        Diagnosis d = engine.diagnose(current, std::string_view(line), choice);
        switch (d.kind) {
        case Diagnosis::Kind::CorrectStep:
            current = parse_expr(line);
            ++taken;
            if (d.steps_remaining) {
                remaining = *d.steps_remaining;
                out << "Correct — " << d.rule->annotation() << " ("
                    << plural_steps(remaining) << " remaining)\n";
            } else {
                out << "Correct — " << d.rule->annotation() << " (" << d.note << ")\n";
                return exit_code::evaluation;
            }
            break;
        case Diagnosis::Kind::ParseError:
            out << "Parse error: " << d.note << '\n';
            break;
        case Diagnosis::Kind::EquivalentButOffStrategy:
            out << "Equivalent, but not a single step of the " << to_string(choice)
                << " strategy. Take one step at a time.\n";
            break;
        case Diagnosis::Kind::CorrectResultWrongPath:
            out << "That has the right result, but no step of the strategy leads there.\n";
            break;
        case Diagnosis::Kind::Incorrect:
            out << (d.note.empty() ? "Incorrect." : "Incorrect: " + d.note + ".") << '\n';
            if (!d.expected.empty()) {
                out << "Permitted next steps:\n";
                for (const auto& e : d.expected)
                    out << "  - " << pretty(e) << '\n';
            }
            break;
        }
    }
    out << "  " << pretty(current) << "\nDone: fully evaluated after " << plural_steps(taken)
        << ".\n";
    return exit_code::ok;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err)
{
    CLI::App app{"Stepwise evaluation of a small lazy functional language", "stepwise"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonOptions derive_opts;
    std::string derive_expr;
    bool numbered = false;
    auto* derive_cmd = app.add_subcommand("derive", "print the derivation of an expression");
    derive_cmd->add_option("expression", derive_expr)->required();
    derive_cmd->add_flag("-n,--numbered", numbered, "number the steps");
    add_engine_options(*derive_cmd, derive_opts);

    CommonOptions compare_opts;
    std::string compare_expr;
    auto* compare_cmd =
        app.add_subcommand("compare", "innermost and outermost derivations side by side");
    compare_cmd->add_option("expression", compare_expr)->required();
    add_engine_options(*compare_cmd, compare_opts, false);

    CommonOptions practice_opts;
    std::string practice_expr;
    auto* practice_cmd = app.add_subcommand("practice", "evaluate an expression step by step");
    practice_cmd->add_option("expression", practice_expr)->required();
    add_engine_options(*practice_cmd, practice_opts);
    practice_cmd->add_option("--script", practice_opts.script, "feedback script")
        ->envname("STEPWISE_SCRIPT");

    CommonOptions diagnose_opts;
    std::string diagnose_current, diagnose_submitted;
    auto* diagnose_cmd =
        app.add_subcommand("diagnose", "classify a proposed step from one expression to another");
    diagnose_cmd->add_option("current", diagnose_current)->required();
    diagnose_cmd->add_option("submitted", diagnose_submitted)->required();
    add_engine_options(*diagnose_cmd, diagnose_opts);
    diagnose_cmd->add_option("--script", diagnose_opts.script, "feedback script")
        ->envname("STEPWISE_SCRIPT");

    CommonOptions serve_opts;
    int port = kDefaultPort;
    std::string examples_path;
    HttpOptions http;
    std::string static_dir;
    auto* serve_cmd = app.add_subcommand("serve", "run the JSON service");
    add_engine_options(*serve_cmd, serve_opts, false);
    serve_cmd->add_option("--port", port, "TCP port")
        ->envname("STEPWISE_PORT")
        ->check(CLI::Range(1, 65535))
        ->capture_default_str();
    serve_cmd->add_option("--host", http.host, "address to listen on")
        ->envname("STEPWISE_HOST")
        ->capture_default_str();
    serve_cmd->add_option("--script", serve_opts.script, "feedback script")
        ->envname("STEPWISE_SCRIPT");
    serve_cmd->add_option("--examples", examples_path, "JSON list of example expressions")
        ->envname("STEPWISE_EXAMPLES");
    serve_cmd->add_option("--static", static_dir, "directory with the web front-end")
        ->envname("STEPWISE_STATIC");
    serve_cmd->add_option("--cors-origin", http.cors_origin,
                          "Access-Control-Allow-Origin value; empty disables CORS")
        ->envname("STEPWISE_CORS_ORIGIN")
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::usage_or_parse;
    }

    try {
        if (*derive_cmd) {
            auto engine = make_engine(derive_opts, err);
            Expr e = parse_argument(derive_expr);
            Derivation d = engine->derive(e, *parse_strategy_choice(derive_opts.strategy));
            out << format_derivation(d, numbered);
            return exit_code::ok;
        }
        if (*compare_cmd) {
            auto engine = make_engine(compare_opts, err);
            Expr e = parse_argument(compare_expr);
            std::optional<Derivation> inner, outer;
            std::string inner_failure, outer_failure;
            try {
                inner = engine->derive(e, StrategyChoice::Innermost);
            } catch (const StuckError& x) {
                inner_failure = failure_text(x);
            } catch (const ResourceLimit& x) {
                inner_failure = failure_text(x);
            }
            try {
                outer = engine->derive(e, StrategyChoice::Outermost);
            } catch (const StuckError& x) {
                outer_failure = failure_text(x);
            } catch (const ResourceLimit& x) {
                outer_failure = failure_text(x);
            }
            out << format_comparison("innermost", inner ? &*inner : nullptr, inner_failure,
                                     "outermost", outer ? &*outer : nullptr, outer_failure);
            return inner && outer ? exit_code::ok : exit_code::evaluation;
        }
        if (*practice_cmd) {
            auto engine = make_engine(practice_opts, err);
            FeedbackScript script = make_script(practice_opts);
            Expr e = parse_argument(practice_expr);
            return practice(*engine, script, e, *parse_strategy_choice(practice_opts.strategy),
                            in, out);
        }
        if (*diagnose_cmd) {
            auto engine = make_engine(diagnose_opts, err);
            FeedbackScript script = make_script(diagnose_opts);
            Expr current = parse_argument(diagnose_current);
            StrategyChoice choice = *parse_strategy_choice(diagnose_opts.strategy);
            Diagnosis d = engine->diagnose(current, std::string_view(diagnose_submitted), choice);
            out << to_string(d.kind);
            if (d.rule)
                out << ": " << d.rule->id().str() << " ("
                    << message_for(script, d.rule->id(), engine->rules()) << ")";
            out << '\n';
            if (d.steps_remaining)
                out << plural_steps(*d.steps_remaining) << " remaining\n";
            if (!d.note.empty())
                out << d.note << '\n';
            for (const auto& x : d.expected)
                out << "  permitted: " << pretty(x) << '\n';
            return d.kind == Diagnosis::Kind::ParseError ? exit_code::usage_or_parse
                                                         : exit_code::ok;
        }
        if (*serve_cmd) {
            auto engine = make_engine(serve_opts, err);
            FeedbackScript script = make_script(serve_opts);
            auto examples =
                examples_path.empty() ? default_examples() : load_examples(examples_path);
            Service::Sources sources;
            if (!serve_opts.prelude.empty())
                sources.prelude_path = serve_opts.prelude;
            if (!serve_opts.script.empty())
                sources.script_path = serve_opts.script;
            Service service(engine, std::move(script), std::move(examples), sources);
            if (!static_dir.empty())
                http.static_dir = static_dir;
            HttpServer server(service, http);
            if (!server.bind(port)) {
                err << "error: cannot listen on " << http.host << ":" << port << '\n';
                return exit_code::usage_or_parse;
            }
            out << "stepwise " << kVersion << " listening on http://" << http.host << ":" << port
                << std::endl;
            server.listen_after_bind();
            return exit_code::ok;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage_or_parse;
    } catch (const StuckError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::evaluation;
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::evaluation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage_or_parse;
    }
    return exit_code::usage_or_parse;
}

} // namespace stepwise
