#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stepwise/expr.hpp"

namespace stepwise {

/// Child indices from the root to a sub-expression. For an application, 0 is
/// the function and 1 the argument; the body of an abstraction is child 0.
class Path {
public:
    Path() = default;
    explicit Path(std::vector<std::size_t> steps) : steps_(std::move(steps)) {}

    const std::vector<std::size_t>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }

    Path child(std::size_t index) const;
    bool is_prefix_of(const Path& other) const;

    /// "[0,1,1]"
    std::string str() const;

    friend bool operator==(const Path&, const Path&) = default;
    friend auto operator<=>(const Path&, const Path&) = default;

private:
    std::vector<std::size_t> steps_;
};

std::optional<Expr> subterm_at(const Expr& root, const Path& path);
/// Replaces the sub-expression at `path`; nothing if the path is invalid.
std::optional<Expr> replace_at(const Expr& root, const Path& path, Expr replacement);

/// A zipper over an expression: the focused sub-expression plus the chain of
/// parents needed to rebuild the whole term.
class Context {
public:
    explicit Context(Expr root) : focus_(std::move(root)) {}

    /// Focuses `path` inside `root`; nothing if the path is invalid.
    static std::optional<Context> at(const Expr& root, const Path& path);

    const Expr& current() const { return focus_; }
    std::size_t depth() const { return depth_; }
    bool at_root() const { return depth_ == 0; }

    std::optional<Context> down(std::size_t index) const;
    /// Requires !at_root().
    Context up() const;
    Context replace(Expr e) const;

    Expr root() const;
    Path path() const;

    /// Same whole term and same focus.
    friend bool operator==(const Context& a, const Context& b);

private:
    struct Crumb {
        Expr parent;
        std::size_t index;
        std::shared_ptr<const Crumb> next;
    };

    Context(Expr focus, std::shared_ptr<const Crumb> crumbs, std::size_t depth)
        : focus_(std::move(focus)), crumbs_(std::move(crumbs)), depth_(depth) {}

    Expr focus_;
    std::shared_ptr<const Crumb> crumbs_;
    std::size_t depth_ = 0;
};

} // namespace stepwise
