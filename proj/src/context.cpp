#include "stepwise/context.hpp"

#include <algorithm>
#include <cassert>

namespace stepwise {

Path Path::child(std::size_t index) const
{
    Path p = *this;
    p.steps_.push_back(index);
    return p;
}

bool Path::is_prefix_of(const Path& other) const
{
    return steps_.size() <= other.steps_.size() &&
           std::equal(steps_.begin(), steps_.end(), other.steps_.begin());
}

std::string Path::str() const
{
    std::string out = "[";
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (i > 0)
            out += ',';
        out += std::to_string(steps_[i]);
    }
    return out + "]";
}

std::optional<Expr> subterm_at(const Expr& root, const Path& path)
{
    const Expr* cur = &root;
    for (std::size_t i : path.steps()) {
        if (i >= cur->arity())
            return std::nullopt;
        cur = &cur->child(i);
    }
    return *cur;
}

std::optional<Expr> replace_at(const Expr& root, const Path& path, Expr replacement)
{
    auto ctx = Context::at(root, path);
    if (!ctx)
        return std::nullopt;
    return ctx->replace(std::move(replacement)).root();
}

std::optional<Context> Context::at(const Expr& root, const Path& path)
{
    Context ctx(root);
    for (std::size_t i : path.steps()) {
        auto next = ctx.down(i);
        if (!next)
            return std::nullopt;
        ctx = std::move(*next);
    }
    return ctx;
}

std::optional<Context> Context::down(std::size_t index) const
{
    if (index >= focus_.arity())
        return std::nullopt;
    auto crumb = std::make_shared<const Crumb>(Crumb{focus_, index, crumbs_});
    return Context(focus_.child(index), std::move(crumb), depth_ + 1);
}

Context Context::up() const
{
    assert(!at_root());
    Expr parent = crumbs_->parent.with_child(crumbs_->index, focus_);
    return Context(std::move(parent), crumbs_->next, depth_ - 1);
}

Context Context::replace(Expr e) const
{
    return Context(std::move(e), crumbs_, depth_);
}

Expr Context::root() const
{
    Expr e = focus_;
    for (const Crumb* c = crumbs_.get(); c; c = c->next.get())
        e = c->parent.with_child(c->index, std::move(e));
    return e;
}

Path Context::path() const
{
    std::vector<std::size_t> steps;
    steps.reserve(depth_);
    for (const Crumb* c = crumbs_.get(); c; c = c->next.get())
        steps.push_back(c->index);
    std::reverse(steps.begin(), steps.end());
    return Path(std::move(steps));
}

bool operator==(const Context& a, const Context& b)
{
    return a.depth_ == b.depth_ && a.path() == b.path() && a.root() == b.root();
}

} // namespace stepwise
