#include "stepwise/feedback.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "stepwise/parser.hpp"

namespace stepwise {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

bool valid_id(std::string_view id)
{
    for (char c : id)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '=' || c == '#')
            return false;
    return !id.empty();
}

int column_of(std::string_view line, std::string_view part)
{
    return static_cast<int>(part.data() - line.data()) + 1;
}

} // namespace

FeedbackScript FeedbackScript::parse(std::string_view source)
{
    FeedbackScript script;
    int line_no = 0;
    while (!source.empty()) {
        ++line_no;
        std::size_t end = source.find('\n');
        std::string_view line = source.substr(0, end);
        source = end == std::string_view::npos ? std::string_view() : source.substr(end + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);

        std::string_view content = trim(line);
        if (content.empty() || content.front() == '#')
            continue;
        if (content.front() == '@') {
            std::string_view rest = content.substr(1);
            std::size_t space = rest.find_first_of(" \t");
            std::string_view directive = rest.substr(0, space);
            std::string_view value =
                space == std::string_view::npos ? std::string_view() : trim(rest.substr(space));
            if (directive != "locale")
                throw ParseError("unknown directive '@" + std::string(directive) + "'", line_no,
                                 column_of(line, content));
            if (value.empty())
                throw ParseError("@locale needs a language tag", line_no, column_of(line, content));
            script.locale_ = std::string(value);
            continue;
        }

        std::size_t eq = content.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected '<rule id> = <text>'", line_no, column_of(line, content));
        std::string_view id = trim(content.substr(0, eq));
        std::string_view text = trim(content.substr(eq + 1));
        if (!valid_id(id))
            throw ParseError("invalid rule id '" + std::string(id) + "'", line_no,
                             column_of(line, content));
        if (text.empty())
            throw ParseError("missing text for " + std::string(id), line_no,
                             column_of(line, content) + static_cast<int>(eq) + 1);
        script.texts_[RuleId(std::string(id))] = std::string(text);
    }
    return script;
}

FeedbackScript FeedbackScript::load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read feedback script '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

std::optional<std::string> FeedbackScript::text_for(const RuleId& id) const
{
    auto it = texts_.find(id);
    if (it == texts_.end())
        return std::nullopt;
    return it->second;
}

std::string message_for(const FeedbackScript& script, const RuleId& id,
                        const std::vector<Rule>& rules)
{
    if (auto text = script.text_for(id))
        return *text;
    if (const Rule* r = find_rule(rules, id); r && r->description())
        return *r->description();
    return id.str();
}

} // namespace stepwise
