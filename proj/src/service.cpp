#include "stepwise/service.hpp"

#include <algorithm>
#include <fstream>

#include <httplib.h>

#include "stepwise/parser.hpp"

namespace stepwise {

using nlohmann::json;

namespace {

class RequestError : public std::runtime_error {
public:
    RequestError(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind))
    {
    }
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

json path_json(const Path& p) { return p.steps(); }

std::string text_field(const json& request, const char* name)
{
    auto it = request.find(name);
    if (it == request.end() || it->is_null())
        throw RequestError("bad-request", std::string("missing field '") + name + "'");
    if (!it->is_string())
        throw RequestError("bad-request", std::string("field '") + name + "' must be a string");
    return it->get<std::string>();
}

Expr expr_field(const json& request, const char* name)
{
    std::string text = text_field(request, name);
    try {
        return parse_expr(text);
    } catch (const ParseError& e) {
        throw RequestError("parse-error", std::string(name) + ": " + e.what());
    }
}

StrategyChoice strategy_field(const json& request)
{
    auto it = request.find("strategy");
    if (it == request.end() || it->is_null())
        return StrategyChoice::Outermost;
    if (it->is_string())
        if (auto choice = parse_strategy_choice(it->get<std::string>()))
            return *choice;
    throw RequestError("bad-request", "strategy must be \"outermost\", \"innermost\" or \"free\"");
}

std::optional<Path> path_field(const json& request)
{
    auto it = request.find("path");
    if (it == request.end() || it->is_null())
        return std::nullopt;
    if (!it->is_array())
        throw RequestError("bad-request", "path must be an array of child indices");
    std::vector<std::size_t> steps;
    for (const auto& v : *it) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw RequestError("bad-request", "path must be an array of child indices");
        steps.push_back(static_cast<std::size_t>(v.get<long long>()));
    }
    return Path(std::move(steps));
}

std::string diagnosis_message(const Diagnosis& d, const FeedbackScript& script,
                              const Engine& engine)
{
    switch (d.kind) {
    case Diagnosis::Kind::CorrectStep:
        return message_for(script, d.rule->id(), engine.rules());
    case Diagnosis::Kind::EquivalentButOffStrategy:
        return "Your expression has the right value, but it is not a single step of the "
               "chosen strategy.";
    case Diagnosis::Kind::CorrectResultWrongPath:
        return "Your expression has the right result, but no step of the strategy leads to it.";
    case Diagnosis::Kind::Incorrect:
        return d.note == "no step taken" ? "The expression is unchanged: no step was taken."
                                         : "This is not a correct step.";
    case Diagnosis::Kind::ParseError:
        return d.note;
    }
    return d.note;
}

} // namespace

std::vector<std::string> default_examples()
{
    return {
        "sum ([3,7] ++ [5])",
        "foldl (+) 0 [1,2,3]",
        "[1,2] ++ [3]",
        "(\\x -> x + x) (1 + 2)",
        "((1 + 2) + 3) + 4",
    };
}

std::vector<std::string> load_examples(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read examples file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (!doc.is_array())
        throw std::runtime_error(path + ": expected a JSON array of expression strings");
    std::vector<std::string> out;
    for (const auto& item : doc) {
        if (!item.is_string())
            throw std::runtime_error(path + ": expected a JSON array of expression strings");
        std::string text = item.get<std::string>();
        try {
            parse_expr(text);
        } catch (const ParseError& e) {
            throw std::runtime_error(path + ": example \"" + text + "\": " + e.what());
        }
        out.push_back(std::move(text));
    }
    return out;
}

Service::Service(std::shared_ptr<const Engine> engine, FeedbackScript script,
                 std::vector<std::string> examples, Sources sources)
    : engine_(std::move(engine)), examples_(std::move(examples)), sources_(std::move(sources)),
      script_(std::make_shared<const FeedbackScript>(std::move(script)))
{
}

std::shared_ptr<const FeedbackScript> Service::script() const
{
    std::lock_guard lock(script_mutex_);
    return script_;
}

void Service::replace_script(FeedbackScript script)
{
    auto fresh = std::make_shared<const FeedbackScript>(std::move(script));
    std::lock_guard lock(script_mutex_);
    script_ = std::move(fresh);
}

void Service::reload_script()
{
    if (!sources_.script_path)
        throw std::runtime_error("no feedback script file is configured");
    replace_script(FeedbackScript::load(*sources_.script_path));
}

json Service::examples() const { return json{{"examples", examples_}}; }

json Service::health() const
{
    json functions = json::array();
    if (engine_->config().prelude)
        for (const auto& g : engine_->config().prelude->groups)
            functions.push_back(g.function);
    json rules = json::array();
    for (const auto& r : engine_->rules())
        rules.push_back(r.id().str());
    auto script = this->script();
    return json{
        {"status", "ok"},
        {"version", kVersion},
        {"strategies", {"outermost", "innermost", "free"}},
        {"budget", engine_->budget()},
        {"builtinDefinitions", engine_->config().builtin_definitions},
        {"rules", rules},
        {"prelude",
         {{"path", sources_.prelude_path ? json(*sources_.prelude_path) : json(nullptr)},
          {"functions", functions},
          {"warnings", engine_->warnings()}}},
        {"script",
         {{"path", sources_.script_path ? json(*sources_.script_path) : json(nullptr)},
          {"entries", script->size()},
          {"locale", script->locale() ? json(*script->locale()) : json(nullptr)}}},
    };
}

json Service::dispatch(const std::string& service, const json& request) const
{
    const Engine& engine = *engine_;
    auto script = this->script();
    auto step_json = [&](const Rule& rule, const Path& focus, const Expr& result) {
        return json{{"rule", rule.id().str()},
                    {"annotation", rule.annotation()},
                    {"message", message_for(*script, rule.id(), engine.rules())},
                    {"path", path_json(focus)},
                    {"expr", pretty(result)}};
    };

    static const std::vector<std::string> known = {"examples",       "derivation", "onefirst",
                                                   "stepsremaining", "apply",      "diagnose"};
    if (std::find(known.begin(), known.end(), service) == known.end())
        throw RequestError("bad-request", "unknown service '" + service + "'");
    if (service == "examples")
        return examples();

    Expr expr = expr_field(request, "expr");
    StrategyChoice choice = strategy_field(request);

    if (service == "derivation") {
        Derivation d = engine.derive(expr, choice);
        json steps = json::array();
        for (const auto& s : d.steps)
            steps.push_back(step_json(s.rule, s.focus, s.after));
        return json{{"strategy", to_string(choice)},
                    {"start", pretty(d.start)},
                    {"steps", steps},
                    {"result", pretty(d.result())},
                    {"count", d.steps.size()}};
    }
    if (service == "onefirst") {
        StepChoice s = engine.hint(expr, choice);
        json out = step_json(s.rule, s.focus, s.result);
        out["strategy"] = to_string(choice);
        return out;
    }
    if (service == "stepsremaining")
        return json{{"strategy", to_string(choice)},
                    {"steps", engine.steps_remaining(expr, choice)}};
    if (service == "apply") {
        std::optional<StepChoice> s;
        if (request.contains("rule") && !request["rule"].is_null()) {
            RuleId id(text_field(request, "rule"));
            if (!engine.find_rule(id))
                throw RequestError("bad-request", "unknown rule '" + id.str() + "'");
            s = engine.apply(expr, id, path_field(request), choice);
            if (!s)
                throw RequestError("not-applicable",
                                   "rule " + id.str() + " does not apply to this expression");
        } else {
            s = engine.hint(expr, choice);
        }
        json out = step_json(s->rule, s->focus, s->result);
        out["strategy"] = to_string(choice);
        return out;
    }
    if (service == "diagnose") {
        Diagnosis d = engine.diagnose(expr, text_field(request, "submitted"), choice);
        json expected = json::array();
        for (const auto& e : d.expected)
            expected.push_back(pretty(e));
        return json{
            {"strategy", to_string(choice)},
            {"diagnosis", to_string(d.kind)},
            {"message", diagnosis_message(d, *script, engine)},
            {"rule", d.rule ? json(d.rule->id().str()) : json(nullptr)},
            {"annotation", d.rule ? json(d.rule->annotation()) : json(nullptr)},
            {"stepsRemaining", d.steps_remaining ? json(*d.steps_remaining) : json(nullptr)},
            {"expected", d.kind == Diagnosis::Kind::Incorrect ? expected : json::array()},
            {"note", d.note.empty() ? json(nullptr) : json(d.note)},
        };
    }
    throw RequestError("bad-request", "unknown service '" + service + "'");
}

json Service::handle(const json& request) const
{
    json response{{"service", nullptr}, {"ok", false}, {"payload", nullptr}, {"error", nullptr}};
    auto fail = [&](const std::string& kind, const std::string& message) {
        response["ok"] = false;
        response["payload"] = nullptr;
        response["error"] = json{{"kind", kind}, {"message", message}};
        return response;
    };
    if (!request.is_object())
        return fail("bad-request", "the request must be a JSON object");
    auto it = request.find("service");
    if (it == request.end() || !it->is_string())
        return fail("bad-request", "missing field 'service'");
    std::string service = it->get<std::string>();
    response["service"] = service;
    try {
        response["payload"] = dispatch(service, request);
        response["ok"] = true;
        return response;
    } catch (const RequestError& e) {
        return fail(e.kind(), e.what());
    } catch (const StuckError& e) {
        return fail("stuck", e.what());
    } catch (const ResourceLimit& e) {
        return fail("budget-exceeded", e.what());
    } catch (const NoStepError& e) {
        return fail("no-step", e.what());
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
}

std::string Service::handle_text(std::string_view body) const
{
    json request;
    try {
        request = json::parse(body);
    } catch (const json::parse_error& e) {
        json response{{"service", nullptr},
                      {"ok", false},
                      {"payload", nullptr},
                      {"error", {{"kind", "bad-request"}, {"message", e.what()}}}};
        return response.dump();
    }
    return handle(request).dump();
}

struct HttpServer::Impl {
    Impl(Service& service, HttpOptions options) : service(service), options(std::move(options)) {}

    Service& service;
    HttpOptions options;
    httplib::Server server;
};

HttpServer::HttpServer(Service& service, HttpOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options)))
{
    auto& server = impl_->server;
    Impl* impl = impl_.get();
    const std::string json_type = "application/json";

    server.set_post_routing_handler([impl](const httplib::Request&, httplib::Response& res) {
        if (impl->options.cors_origin.empty())
            return;
        res.set_header("Access-Control-Allow-Origin", impl->options.cors_origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
    });
    server.Post("/api", [impl, json_type](const httplib::Request& req, httplib::Response& res) {
        res.set_content(impl->service.handle_text(req.body), json_type);
    });
    server.Get("/api/examples", [impl, json_type](const httplib::Request&, httplib::Response& res) {
        res.set_content(impl->service.examples().dump(), json_type);
    });
    server.Get("/health", [impl, json_type](const httplib::Request&, httplib::Response& res) {
        res.set_content(impl->service.health().dump(), json_type);
    });
    server.Post("/api/reload", [impl, json_type](const httplib::Request&, httplib::Response& res) {
        try {
            impl->service.reload_script();
            res.set_content(json{{"ok", true}}.dump(), json_type);
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(json{{"ok", false}, {"error", e.what()}}.dump(), json_type);
        }
    });
    if (impl->options.static_dir && !server.set_mount_point("/", *impl->options.static_dir))
        throw std::runtime_error("cannot serve static files from '" + *impl->options.static_dir +
                                 "'");
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_any_port() { return impl_->server.bind_to_any_port(impl_->options.host); }

bool HttpServer::bind(int port) { return impl_->server.bind_to_port(impl_->options.host, port); }

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void HttpServer::stop()
{
    if (impl_)
        impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

} // namespace stepwise
