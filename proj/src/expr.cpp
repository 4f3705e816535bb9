#include "stepwise/expr.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <utility>

namespace stepwise {

namespace {

std::size_t mix(std::size_t seed, std::size_t value)
{
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

template <typename T>
const T& shape_as(const ExprNode& node)
{
    const T* p = std::get_if<T>(&node.shape);
    assert(p && "expression accessor used on the wrong shape");
    return *p;
}

} // namespace

Expr Expr::app(Expr function, Expr argument)
{
    std::size_t hash = mix(mix(1, function.hash()), argument.hash());
    std::size_t size = 1 + function.size() + argument.size();
    return Expr(std::make_shared<const ExprNode>(
        ExprNode{App{std::move(function), std::move(argument)}, hash, size}));
}

Expr Expr::abs(std::string binder, Expr body)
{
    assert(!binder.empty());
    std::size_t hash = mix(mix(2, std::hash<std::string>{}(binder)), body.hash());
    std::size_t size = 1 + body.size();
    return Expr(std::make_shared<const ExprNode>(
        ExprNode{Abs{std::move(binder), std::move(body)}, hash, size}));
}

Expr Expr::var(std::string name)
{
    assert(!name.empty());
    std::size_t hash = mix(3, std::hash<std::string>{}(name));
    return Expr(std::make_shared<const ExprNode>(ExprNode{Var{std::move(name)}, hash, 1}));
}

Expr Expr::lit(std::int64_t value)
{
    std::size_t hash = mix(4, std::hash<std::int64_t>{}(value));
    return Expr(std::make_shared<const ExprNode>(ExprNode{Lit{value}, hash, 1}));
}

Expr::Kind Expr::kind() const
{
    return static_cast<Kind>(node_->shape.index());
}

const Expr& Expr::function() const { return shape_as<App>(*node_).function; }
const Expr& Expr::argument() const { return shape_as<App>(*node_).argument; }
const std::string& Expr::binder() const { return shape_as<Abs>(*node_).binder; }
const Expr& Expr::body() const { return shape_as<Abs>(*node_).body; }
const std::string& Expr::name() const { return shape_as<Var>(*node_).name; }
std::int64_t Expr::value() const { return shape_as<Lit>(*node_).value; }

std::size_t Expr::arity() const
{
    switch (kind()) {
    case Kind::App: return 2;
    case Kind::Abs: return 1;
    default: return 0;
    }
}

const Expr& Expr::child(std::size_t index) const
{
    assert(index < arity());
    if (is_abs())
        return body();
    return index == 0 ? function() : argument();
}

Expr Expr::with_child(std::size_t index, Expr replacement) const
{
    assert(index < arity());
    if (child(index).same_node(replacement))
        return *this;
    if (is_abs())
        return abs(binder(), std::move(replacement));
    if (index == 0)
        return app(std::move(replacement), argument());
    return app(function(), std::move(replacement));
}

std::size_t Expr::size() const { return node_->size; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind())
        return false;
    switch (a.kind()) {
    case Expr::Kind::App:
        return a.function() == b.function() && a.argument() == b.argument();
    case Expr::Kind::Abs:
        return a.binder() == b.binder() && a.body() == b.body();
    case Expr::Kind::Var:
        return a.name() == b.name();
    case Expr::Kind::Lit:
        return a.value() == b.value();
    }
    return false;
}

Expr app_n(Expr function, const std::vector<Expr>& arguments)
{
    for (const auto& a : arguments)
        function = Expr::app(std::move(function), a);
    return function;
}

Expr nil() { return Expr::var(std::string(kNil)); }

Expr cons(Expr head, Expr tail)
{
    return app_n(Expr::var(std::string(kCons)), {std::move(head), std::move(tail)});
}

Expr list_of(const std::vector<Expr>& elements)
{
    Expr result = nil();
    for (auto it = elements.rbegin(); it != elements.rend(); ++it)
        result = cons(*it, result);
    return result;
}

Expr int_list(const std::vector<std::int64_t>& values)
{
    std::vector<Expr> elements;
    elements.reserve(values.size());
    for (auto v : values)
        elements.push_back(Expr::lit(v));
    return list_of(elements);
}

bool is_operator_name(std::string_view name)
{
    if (name.empty() || name == kNil)
        return false;
    static constexpr std::string_view symbols = "!#$%&*+./<=>?@\\^|-~:";
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return symbols.find(c) != std::string_view::npos; });
}

bool is_constructor_name(std::string_view name)
{
    return name == kCons || name == kNil;
}

Spine spine(const Expr& e)
{
    Spine result{e, {}};
    while (result.head.is_app()) {
        result.arguments.push_back(result.head.argument());
        result.head = result.head.function();
    }
    std::reverse(result.arguments.begin(), result.arguments.end());
    return result;
}

bool is_app(const Expr& e) { return e.is_app(); }

bool is_fun(std::string_view name, std::size_t arity, const Expr& e)
{
    const Expr* cur = &e;
    for (; arity > 0; --arity) {
        if (!cur->is_app())
            return false;
        cur = &cur->function();
    }
    return cur->is_var() && cur->name() == name;
}

std::optional<std::vector<Expr>> list_elements(const Expr& e)
{
    std::vector<Expr> out;
    const Expr* cur = &e;
    while (is_fun(kCons, 2, *cur)) {
        out.push_back(cur->function().argument());
        cur = &cur->argument();
    }
    if (!(cur->is_var() && cur->name() == kNil))
        return std::nullopt;
    return out;
}

namespace {

void collect_free(const Expr& e, std::vector<std::string>& bound, std::set<std::string>& out)
{
    switch (e.kind()) {
    case Expr::Kind::App:
        collect_free(e.function(), bound, out);
        collect_free(e.argument(), bound, out);
        break;
    case Expr::Kind::Abs:
        bound.push_back(e.binder());
        collect_free(e.body(), bound, out);
        bound.pop_back();
        break;
    case Expr::Kind::Var:
        if (std::find(bound.begin(), bound.end(), e.name()) == bound.end())
            out.insert(e.name());
        break;
    case Expr::Kind::Lit:
        break;
    }
}

using Bindings = std::vector<std::pair<std::string, Expr>>;

const Expr* lookup(const Bindings& bindings, const std::string& name)
{
    for (const auto& [key, value] : bindings)
        if (key == name)
            return &value;
    return nullptr;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid)
{
    for (std::size_t k = 1;; ++k) {
        std::string candidate = base + std::to_string(k);
        if (!avoid.count(candidate))
            return candidate;
    }
}

Expr subst(const Bindings& bindings, const Expr& e)
{
    switch (e.kind()) {
    case Expr::Kind::Var:
        if (const Expr* r = lookup(bindings, e.name()))
            return *r;
        return e;
    case Expr::Kind::Lit:
        return e;
    case Expr::Kind::App: {
        Expr f = subst(bindings, e.function());
        Expr a = subst(bindings, e.argument());
        if (f.same_node(e.function()) && a.same_node(e.argument()))
            return e;
        return Expr::app(std::move(f), std::move(a));
    }
    case Expr::Kind::Abs: {
        const std::string& y = e.binder();
        std::set<std::string> body_free = free_variables(e.body());
        Bindings live;
        std::set<std::string> replacement_free;
        for (const auto& [key, value] : bindings) {
            if (key == y || !body_free.count(key))
                continue;
            live.emplace_back(key, value);
            auto fv = free_variables(value);
            replacement_free.insert(fv.begin(), fv.end());
        }
        if (live.empty())
            return e;
        if (!replacement_free.count(y))
            return Expr::abs(y, subst(live, e.body()));

        std::set<std::string> avoid = replacement_free;
        avoid.insert(body_free.begin(), body_free.end());
        std::string renamed = fresh_name(y, avoid);
        live.emplace_back(y, Expr::var(renamed));
        return Expr::abs(renamed, subst(live, e.body()));
    }
    }
    return e;
}

} // namespace

std::set<std::string> free_variables(const Expr& e)
{
    std::vector<std::string> bound;
    std::set<std::string> out;
    collect_free(e, bound, out);
    return out;
}

bool occurs_free(std::string_view name, const Expr& e)
{
    return free_variables(e).count(std::string(name)) > 0;
}

Expr substitute(const std::string& binder, const Expr& replacement, const Expr& body)
{
    return subst({{binder, replacement}}, body);
}

Expr substitute_all(const std::vector<std::pair<std::string, Expr>>& bindings, const Expr& body)
{
    return subst(bindings, body);
}

} // namespace stepwise
