#ifndef CBVKIT_CORE_HPP
#define CBVKIT_CORE_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cbvkit {

// ---------------------------------------------------------------------------
// errors
// ---------------------------------------------------------------------------

enum class ErrKind {
  NoRedex,
  RuleDisabled,
  FuelExhausted,
  UnboundVariable,
  TypeMismatch,
  ClassViolation,
  LinearityViolation,
  ModeViolation,
  MalformedCPS,
  MalformedSmallCPS,
  FreshnessViolation,
  GenerationFailed,
  StageMismatch,
  SyntaxError,
  ReservedName,
  UnknownSuite,
  Contract,
};

inline const char* err_name(ErrKind k) {
  switch (k) {
    case ErrKind::NoRedex: return "NoRedex";
    case ErrKind::RuleDisabled: return "RuleDisabled";
    case ErrKind::FuelExhausted: return "FuelExhausted";
    case ErrKind::UnboundVariable: return "UnboundVariable";
    case ErrKind::TypeMismatch: return "TypeMismatch";
    case ErrKind::ClassViolation: return "ClassViolation";
    case ErrKind::LinearityViolation: return "LinearityViolation";
    case ErrKind::ModeViolation: return "ModeViolation";
    case ErrKind::MalformedCPS: return "MalformedCPS";
    case ErrKind::MalformedSmallCPS: return "MalformedSmallCPS";
    case ErrKind::FreshnessViolation: return "FreshnessViolation";
    case ErrKind::GenerationFailed: return "GenerationFailed";
    case ErrKind::StageMismatch: return "StageMismatch";
    case ErrKind::SyntaxError: return "SyntaxError";
    case ErrKind::ReservedName: return "ReservedName";
    case ErrKind::UnknownSuite: return "UnknownSuite";
    case ErrKind::Contract: return "Contract";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& msg)
      : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) { throw Error(k, msg); }

// ---------------------------------------------------------------------------
// names
// ---------------------------------------------------------------------------

// A name is a human-readable stem plus a uid. uid -1 marks a "bare" name as
// written in source text; the freshness supply only ever hands out uids >= 0,
// so fresh names can never collide with user-written ones of the same stem.
struct Name {
  std::string base;
  std::int32_t uid = -1;

  bool bare() const { return uid < 0; }
  bool operator==(const Name& o) const { return uid == o.uid && base == o.base; }
  bool operator!=(const Name& o) const { return !(*this == o); }
  bool operator<(const Name& o) const {
    if (base != o.base) return base < o.base;
    return uid < o.uid;
  }
};

inline std::string show_name(const Name& n) {
  if (n.bare()) return n.base;
  return n.base + "_" + std::to_string(n.uid);
}

using NameSet = std::set<Name>;

// The covariable of the continuation-passing calculi: fixed, never user-declared.
inline const Name& covariable_k() {
  static const Name k{"k", -1};
  return k;
}

inline Name fresh_name(const std::string& stem, const NameSet& avoid) {
  std::int32_t uid = 0;
  // avoid is ordered, so scanning the stem's occupied uids is enough
  for (auto it = avoid.lower_bound(Name{stem, 0}); it != avoid.end() && it->base == stem; ++it) {
    if (it->uid == uid) {
      ++uid;
    } else if (it->uid > uid) {
      break;
    }
  }
  return Name{stem, uid};
}

// Mutable freshness supply threaded through translations: every name it hands
// out is recorded so later requests stay distinct.
class FreshPool {
 public:
  FreshPool() = default;
  explicit FreshPool(NameSet used) : used_(std::move(used)) {}

  Name next(const std::string& stem) {
    Name n = fresh_name(stem, used_);
    used_.insert(n);
    return n;
  }
  void reserve(const Name& n) { used_.insert(n); }
  void reserve_all(const NameSet& ns) { used_.insert(ns.begin(), ns.end()); }
  const NameSet& used() const { return used_; }

 private:
  NameSet used_;
};

// ---------------------------------------------------------------------------
// simple types (with the bottom type used on the CPS side)
// ---------------------------------------------------------------------------

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct TAtom {
  std::string name;
};
struct TArrow {
  Type dom, cod;
};
struct TBot {};
// Inference-internal placeholder; solved types handed to callers never contain it.
struct TVar {
  int id;
};

struct TypeNode {
  std::variant<TAtom, TArrow, TBot, TVar> v;
};

inline Type t_atom(const std::string& a) { return std::make_shared<TypeNode>(TypeNode{TAtom{a}}); }
inline Type t_arrow(Type d, Type c) {
  return std::make_shared<TypeNode>(TypeNode{TArrow{std::move(d), std::move(c)}});
}
inline Type t_bot() {
  static const Type b = std::make_shared<TypeNode>(TypeNode{TBot{}});
  return b;
}
inline Type t_var(int id) { return std::make_shared<TypeNode>(TypeNode{TVar{id}}); }
inline Type t_neg(Type a) { return t_arrow(std::move(a), t_bot()); }

inline const TAtom* as_atom(const Type& t) { return std::get_if<TAtom>(&t->v); }
inline const TArrow* as_arrow(const Type& t) { return std::get_if<TArrow>(&t->v); }
inline bool is_bot(const Type& t) { return std::holds_alternative<TBot>(t->v); }
inline const TVar* as_tvar(const Type& t) { return std::get_if<TVar>(&t->v); }

inline bool type_eq(const Type& a, const Type& b) {
  if (a.get() == b.get()) return true;
  if (a->v.index() != b->v.index()) return false;
  if (auto* x = as_atom(a)) return x->name == as_atom(b)->name;
  if (auto* x = as_arrow(a))
    return type_eq(x->dom, as_arrow(b)->dom) && type_eq(x->cod, as_arrow(b)->cod);
  if (auto* x = as_tvar(a)) return x->id == as_tvar(b)->id;
  return true;  // both TBot
}

inline bool type_ground(const Type& t) {
  if (as_tvar(t)) return false;
  if (auto* ar = as_arrow(t)) return type_ground(ar->dom) && type_ground(ar->cod);
  return true;
}

inline std::string show_type(const Type& t) {
  if (auto* a = as_atom(t)) return a->name;
  if (is_bot(t)) return "_|_";
  if (auto* v = as_tvar(t)) return "?" + std::to_string(v->id);
  auto* ar = as_arrow(t);
  std::string d = show_type(ar->dom);
  if (as_arrow(ar->dom)) d = "(" + d + ")";
  return d + " -> " + show_type(ar->cod);
}

// ---------------------------------------------------------------------------
// typing contexts
// ---------------------------------------------------------------------------

// Consistent by construction: a name is never rebound at a different type.
class TypingContext {
 public:
  TypingContext() = default;

  static TypingContext of(std::initializer_list<std::pair<Name, Type>> ds) {
    TypingContext g;
    for (auto& [n, t] : ds) g.declare(n, t);
    return g;
  }

  void declare(const Name& n, const Type& t) {
    auto it = decls_.find(n);
    if (it != decls_.end() && !type_eq(it->second, t))
      fail(ErrKind::Contract, "inconsistent context: " + show_name(n));
    decls_[n] = t;
  }

  TypingContext extended(const Name& n, const Type& t) const {
    TypingContext g = *this;
    g.decls_[n] = t;  // rebinding in an extension is shadowing, not inconsistency
    return g;
  }

  std::optional<Type> lookup(const Name& n) const {
    auto it = decls_.find(n);
    if (it == decls_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<Name, Type>& declarations() const { return decls_; }

 private:
  std::map<Name, Type> decls_;
};

// ---------------------------------------------------------------------------
// rule identities, redex paths, traces
// ---------------------------------------------------------------------------

struct RuleId {
  std::string calculus;
  std::string rule;

  bool operator==(const RuleId& o) const { return calculus == o.calculus && rule == o.rule; }
};

inline std::string show_rule(const RuleId& r) { return r.calculus + "/" + r.rule; }

// Child indices from the root down to the redex.
using Path = std::vector<int>;

inline std::string show_path(const Path& p) {
  std::string s = "[";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ".";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

template <class Term>
struct TraceStep {
  RuleId rule;
  Path path;
  Term result;
};

template <class Term>
struct Trace {
  Term start;
  std::vector<TraceStep<Term>> steps;

  const Term& end() const { return steps.empty() ? start : steps.back().result; }
  size_t size() const { return steps.size(); }
};

// visitor helper
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace cbvkit

#endif  // CBVKIT_CORE_HPP
