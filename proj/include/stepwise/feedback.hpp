#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stepwise/rules.hpp"

namespace stepwise {

/// Texts shown for rules, read from a line-oriented file:
///
///     # comment
///     @locale en
///     eval.foldl.rule = Apply the fold left rule ...
///
/// A later line for the same id replaces an earlier one. Ids need not name a
/// known rule, since prelude rules are only known once a prelude is loaded.
class FeedbackScript {
public:
    FeedbackScript() = default;

    /// Throws ParseError with the line of a malformed entry.
    static FeedbackScript parse(std::string_view source);
    /// Throws std::runtime_error when the file cannot be read.
    static FeedbackScript load(const std::string& path);

    std::optional<std::string> text_for(const RuleId& id) const;
    const std::optional<std::string>& locale() const { return locale_; }
    std::size_t size() const { return texts_.size(); }

private:
    std::map<RuleId, std::string> texts_;
    std::optional<std::string> locale_;
};

/// The script text for `id`, else the rule's description, else the id.
std::string message_for(const FeedbackScript& script, const RuleId& id,
                        const std::vector<Rule>& rules);

} // namespace stepwise
