#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stepwise {

struct ExprNode;

/// Immutable expression of the evaluator's language. Copies share structure.
///
/// Four shapes: application, lambda abstraction, named variable (also used for
/// constructors such as ":" and "[]" and for operators such as "+"), and
/// integer literal.
class Expr {
public:
    enum class Kind { App, Abs, Var, Lit };

    static Expr app(Expr function, Expr argument);
    static Expr abs(std::string binder, Expr body);
    static Expr var(std::string name);
    static Expr lit(std::int64_t value);

    Kind kind() const;
    bool is_app() const { return kind() == Kind::App; }
    bool is_abs() const { return kind() == Kind::Abs; }
    bool is_var() const { return kind() == Kind::Var; }
    bool is_lit() const { return kind() == Kind::Lit; }

    // Accessors; calling one on the wrong shape is a programming error.
    const Expr& function() const;
    const Expr& argument() const;
    const std::string& binder() const;
    const Expr& body() const;
    const std::string& name() const;
    std::int64_t value() const;

    /// Number of direct children (2 for App, 1 for Abs, 0 otherwise).
    std::size_t arity() const;
    const Expr& child(std::size_t index) const;
    Expr with_child(std::size_t index, Expr replacement) const;

    std::size_t size() const;
    std::size_t hash() const;

    /// True when both handles point at the same node.
    bool same_node(const Expr& other) const { return node_ == other.node_; }

    const ExprNode& node() const { return *node_; }

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct App {
    Expr function;
    Expr argument;
};

struct Abs {
    std::string binder;
    Expr body;
};

struct Var {
    std::string name;
};

struct Lit {
    std::int64_t value;
};

struct ExprNode {
    std::variant<App, Abs, Var, Lit> shape;
    std::size_t hash = 0;
    std::size_t size = 1;
};

struct ExprHash {
    std::size_t operator()(const Expr& e) const { return e.hash(); }
};

// Smart constructors.
Expr app_n(Expr function, const std::vector<Expr>& arguments);
Expr nil();
Expr cons(Expr head, Expr tail);
Expr list_of(const std::vector<Expr>& elements);
Expr int_list(const std::vector<std::int64_t>& values);

inline constexpr std::string_view kCons = ":";
inline constexpr std::string_view kNil = "[]";

bool is_operator_name(std::string_view name);
bool is_constructor_name(std::string_view name);

/// Head of the left spine and the arguments it is applied to, in order.
struct Spine {
    Expr head;
    std::vector<Expr> arguments;
};
Spine spine(const Expr& e);

bool is_app(const Expr& e);

/// True iff `e` is `Var name` applied to exactly `arity` arguments.
bool is_fun(std::string_view name, std::size_t arity, const Expr& e);

/// Elements of a complete list (cons chain ending in nil), or nothing.
std::optional<std::vector<Expr>> list_elements(const Expr& e);

std::set<std::string> free_variables(const Expr& e);
bool occurs_free(std::string_view name, const Expr& e);

/// Capture-avoiding substitution of `replacement` for the free occurrences of
/// `binder` in `body`. A captured bound variable `y` is renamed to `y<k>` for
/// the smallest k >= 1 not free in either operand.
Expr substitute(const std::string& binder, const Expr& replacement, const Expr& body);

/// Simultaneous capture-avoiding substitution.
Expr substitute_all(const std::vector<std::pair<std::string, Expr>>& bindings, const Expr& body);

} // namespace stepwise
