#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stepwise/engine.hpp"
#include "stepwise/feedback.hpp"

namespace stepwise {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage_or_parse = 1;
inline constexpr int evaluation = 2;
} // namespace exit_code

/// Runs the `stepwise` command line with `args` (without the program name).
/// Subcommands: derive, compare, practice, diagnose, serve.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

/// A derivation in textbook layout: each expression indented on its own line,
/// the rule between consecutive expressions as `= { definition foldl }`.
std::string format_derivation(const Derivation& d, bool numbered = false);

/// Two derivations side by side, one row per step index, with a footer
/// giving both step counts. `failure` texts replace a missing derivation.
std::string format_comparison(const std::string& left_title, const Derivation* left,
                              const std::string& left_failure, const std::string& right_title,
                              const Derivation* right, const std::string& right_failure);

/// Interactive practice on `start`; reads candidate steps from `in` until the
/// expression is fully evaluated, `:quit`, or end of input.
int practice(const Engine& engine, const FeedbackScript& script, const Expr& start,
             StrategyChoice choice, std::istream& in, std::ostream& out);

} // namespace stepwise
