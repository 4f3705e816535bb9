#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stepwise/engine.hpp"
#include "stepwise/feedback.hpp"

namespace stepwise {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kDefaultPort = 8315;

/// Expressions offered by GET /api/examples when no list is configured.
std::vector<std::string> default_examples();

/// Reads a JSON array of expression strings; every entry must parse.
std::vector<std::string> load_examples(const std::string& path);

/// The JSON services of the evaluator. Requests are independent: each one
/// carries the full current expression, so concurrent calls need no
/// coordination apart from the feedback script, which can be swapped while
/// requests are being served.
///
/// Request:  {"service", "expr", "submitted"?, "strategy"?, "rule"?, "path"?}
/// Response: {"service", "ok", "payload", "error": null | {"kind", "message"}}
class Service {
public:
    struct Sources {
        std::optional<std::string> prelude_path;
        std::optional<std::string> script_path;
    };

    Service(std::shared_ptr<const Engine> engine, FeedbackScript script,
            std::vector<std::string> examples, Sources sources = {});

    nlohmann::json handle(const nlohmann::json& request) const;
    /// Same as handle, for a raw request body; malformed JSON is reported as
    /// a "bad-request" error response.
    std::string handle_text(std::string_view body) const;

    nlohmann::json examples() const;
    nlohmann::json health() const;

    std::shared_ptr<const FeedbackScript> script() const;
    void replace_script(FeedbackScript script);
    /// Re-reads the configured script file. Throws on errors, in which case
    /// the current script stays in place.
    void reload_script();

    const Engine& engine() const { return *engine_; }

private:
    nlohmann::json dispatch(const std::string& service, const nlohmann::json& request) const;

    std::shared_ptr<const Engine> engine_;
    std::vector<std::string> examples_;
    Sources sources_;
    mutable std::mutex script_mutex_;
    std::shared_ptr<const FeedbackScript> script_;
};

struct HttpOptions {
    std::string host = "127.0.0.1";
    /// Value of Access-Control-Allow-Origin; empty disables CORS headers.
    std::string cors_origin = "*";
    /// Directory served at "/", e.g. the built web front-end.
    std::optional<std::string> static_dir;
};

/// HTTP front of a Service:
///   POST /api            service request
///   GET  /api/examples   example expressions
///   GET  /health         version and prelude metadata
///   POST /api/reload     re-read the feedback script
class HttpServer {
public:
    HttpServer(Service& service, HttpOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to a free port and returns it, or -1.
    int bind_any_port();
    bool bind(int port);
    /// Serves until stop() is called.
    bool listen_after_bind();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace stepwise
