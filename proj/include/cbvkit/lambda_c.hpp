#ifndef CBVKIT_LAMBDA_C_HPP
#define CBVKIT_LAMBDA_C_HPP

#include <algorithm>
#include <cassert>
#include <functional>

#include "cbvkit/core.hpp"
#include "cbvkit/typing.hpp"

// The call-by-value source calculus with let-expressions, its kernel of
// administrative normal forms, and the supporting machinery (substitution,
// alpha-equivalence, redex search, typing).
namespace cbvkit::lc {

struct TermCNode;
using TermC = std::shared_ptr<const TermCNode>;

struct CVar {
  Name name;
};
struct CLam {
  Name binder;
  TermC body;
};
struct CApp {
  TermC fun, arg;
};
struct CLet {
  Name binder;
  TermC bound, body;
};

struct TermCNode {
  std::variant<CVar, CLam, CApp, CLet> v;
};

inline TermC var(Name n) { return std::make_shared<TermCNode>(TermCNode{CVar{std::move(n)}}); }
inline TermC lam(Name x, TermC m) {
  return std::make_shared<TermCNode>(TermCNode{CLam{std::move(x), std::move(m)}});
}
inline TermC app(TermC f, TermC a) {
  return std::make_shared<TermCNode>(TermCNode{CApp{std::move(f), std::move(a)}});
}
inline TermC let_(Name x, TermC m, TermC n) {
  return std::make_shared<TermCNode>(TermCNode{CLet{std::move(x), std::move(m), std::move(n)}});
}

inline const CVar* as_var(const TermC& t) { return std::get_if<CVar>(&t->v); }
inline const CLam* as_lam(const TermC& t) { return std::get_if<CLam>(&t->v); }
inline const CApp* as_app(const TermC& t) { return std::get_if<CApp>(&t->v); }
inline const CLet* as_let(const TermC& t) { return std::get_if<CLet>(&t->v); }

inline bool is_value(const TermC& t) { return as_var(t) || as_lam(t); }

// ---------------------------------------------------------------------------
// structural helpers
// ---------------------------------------------------------------------------

inline size_t node_count(const TermC& t) {
  return std::visit(overloaded{[](const CVar&) -> size_t { return 1; },
                               [](const CLam& l) { return 1 + node_count(l.body); },
                               [](const CApp& a) { return 1 + node_count(a.fun) + node_count(a.arg); },
                               [](const CLet& l) {
                                 return 1 + node_count(l.bound) + node_count(l.body);
                               }},
                    t->v);
}

inline void free_vars_into(const TermC& t, NameSet& acc) {
  std::visit(overloaded{[&](const CVar& x) { acc.insert(x.name); },
                        [&](const CLam& l) {
                          NameSet inner;
                          free_vars_into(l.body, inner);
                          inner.erase(l.binder);
                          acc.insert(inner.begin(), inner.end());
                        },
                        [&](const CApp& a) {
                          free_vars_into(a.fun, acc);
                          free_vars_into(a.arg, acc);
                        },
                        [&](const CLet& l) {
                          free_vars_into(l.bound, acc);
                          NameSet inner;
                          free_vars_into(l.body, inner);
                          inner.erase(l.binder);
                          acc.insert(inner.begin(), inner.end());
                        }},
             t->v);
}

inline NameSet free_vars(const TermC& t) {
  NameSet s;
  free_vars_into(t, s);
  return s;
}

inline void all_names_into(const TermC& t, NameSet& acc) {
  std::visit(overloaded{[&](const CVar& x) { acc.insert(x.name); },
                        [&](const CLam& l) {
                          acc.insert(l.binder);
                          all_names_into(l.body, acc);
                        },
                        [&](const CApp& a) {
                          all_names_into(a.fun, acc);
                          all_names_into(a.arg, acc);
                        },
                        [&](const CLet& l) {
                          acc.insert(l.binder);
                          all_names_into(l.bound, acc);
                          all_names_into(l.body, acc);
                        }},
             t->v);
}

inline NameSet all_names(const TermC& t) {
  NameSet s;
  all_names_into(t, s);
  return s;
}

// Capture-avoiding substitution of a term (in practice always a value) for a
// free variable.
inline TermC subst(const TermC& v, const Name& x, const TermC& t) {
  return std::visit(
      overloaded{
          [&](const CVar& y) { return y.name == x ? v : t; },
          [&](const CLam& l) {
            if (l.binder == x) return t;
            NameSet fv = free_vars(v);
            if (fv.count(l.binder) && free_vars(l.body).count(x)) {
              NameSet avoid = all_names(l.body);
              avoid.insert(fv.begin(), fv.end());
              avoid.insert(x);
              Name b = fresh_name(l.binder.base, avoid);
              TermC body = subst(var(b), l.binder, l.body);
              return lam(b, subst(v, x, body));
            }
            return lam(l.binder, subst(v, x, l.body));
          },
          [&](const CApp& a) { return app(subst(v, x, a.fun), subst(v, x, a.arg)); },
          [&](const CLet& l) {
            TermC bound = subst(v, x, l.bound);
            if (l.binder == x) return let_(l.binder, bound, l.body);
            NameSet fv = free_vars(v);
            if (fv.count(l.binder) && free_vars(l.body).count(x)) {
              NameSet avoid = all_names(l.body);
              avoid.insert(fv.begin(), fv.end());
              avoid.insert(x);
              Name b = fresh_name(l.binder.base, avoid);
              TermC body = subst(var(b), l.binder, l.body);
              return let_(b, bound, subst(v, x, body));
            }
            return let_(l.binder, bound, subst(v, x, l.body));
          }},
      t->v);
}

// de Bruijn-style serialization; two terms are alpha-equivalent iff keys match
inline void canon_key_into(const TermC& t, std::vector<std::pair<Name, int>>& env, int depth,
                           std::string& out) {
  std::visit(overloaded{[&](const CVar& x) {
                          for (auto it = env.rbegin(); it != env.rend(); ++it) {
                            if (it->first == x.name) {
                              out += 'b';
                              out += std::to_string(depth - it->second);
                              return;
                            }
                          }
                          out += 'f';
                          out += show_name(x.name);
                          out += ';';
                        },
                        [&](const CLam& l) {
                          out += 'L';
                          env.emplace_back(l.binder, depth);
                          canon_key_into(l.body, env, depth + 1, out);
                          env.pop_back();
                        },
                        [&](const CApp& a) {
                          out += 'A';
                          canon_key_into(a.fun, env, depth, out);
                          canon_key_into(a.arg, env, depth, out);
                        },
                        [&](const CLet& l) {
                          out += 'T';
                          canon_key_into(l.bound, env, depth, out);
                          env.emplace_back(l.binder, depth);
                          canon_key_into(l.body, env, depth + 1, out);
                          env.pop_back();
                        }},
             t->v);
}

inline std::string canon_key(const TermC& t) {
  std::string s;
  s.reserve(node_count(t) * 3);
  std::vector<std::pair<Name, int>> env;
  canon_key_into(t, env, 0, s);
  return s;
}

inline bool alpha_eq(const TermC& a, const TermC& b) {
  return a.get() == b.get() || canon_key(a) == canon_key(b);
}

// path navigation: child order is fun,arg for App and bound,body for Let
inline std::vector<TermC> children(const TermC& t) {
  return std::visit(overloaded{[](const CVar&) { return std::vector<TermC>{}; },
                               [](const CLam& l) { return std::vector<TermC>{l.body}; },
                               [](const CApp& a) {
                                 return std::vector<TermC>{a.fun, a.arg};
                               },
                               [](const CLet& l) {
                                 return std::vector<TermC>{l.bound, l.body};
                               }},
                    t->v);
}

inline TermC with_child(const TermC& t, int i, const TermC& c) {
  return std::visit(
      overloaded{[&](const CVar&) -> TermC { fail(ErrKind::Contract, "no child"); },
                 [&](const CLam& l) { return lam(l.binder, c); },
                 [&](const CApp& a) { return i == 0 ? app(c, a.arg) : app(a.fun, c); },
                 [&](const CLet& l) {
                   return i == 0 ? let_(l.binder, c, l.body) : let_(l.binder, l.bound, c);
                 }},
      t->v);
}

inline TermC subterm_at(const TermC& t, const Path& p, size_t from = 0) {
  if (from == p.size()) return t;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return subterm_at(cs[static_cast<size_t>(i)], p, from + 1);
}

inline TermC replace_at(const TermC& t, const Path& p, const TermC& sub, size_t from = 0) {
  if (from == p.size()) return sub;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return with_child(t, i, replace_at(cs[static_cast<size_t>(i)], p, sub, from + 1));
}

// pre-order walk over every subterm
inline void positions(const TermC& t, const std::function<void(const Path&, const TermC&)>& fn) {
  Path p;
  std::function<void(const TermC&)> go = [&](const TermC& u) {
    fn(p, u);
    auto cs = children(u);
    for (size_t i = 0; i < cs.size(); ++i) {
      p.push_back(static_cast<int>(i));
      go(cs[i]);
      p.pop_back();
    }
  };
  go(t);
}

// ---------------------------------------------------------------------------
// the full calculus: reduction
// ---------------------------------------------------------------------------

enum class RuleC { B, LetV, EtaLet, Assoc, Let1, Let2 };

inline const char* rule_c_name(RuleC r) {
  switch (r) {
    case RuleC::B: return "B";
    case RuleC::LetV: return "let_v";
    case RuleC::EtaLet: return "eta_let";
    case RuleC::Assoc: return "assoc";
    case RuleC::Let1: return "let_1";
    case RuleC::Let2: return "let_2";
  }
  return "?";
}

inline std::optional<RuleC> rule_c_of_name(const std::string& s) {
  for (RuleC r : {RuleC::B, RuleC::LetV, RuleC::EtaLet, RuleC::Assoc, RuleC::Let1, RuleC::Let2})
    if (s == rule_c_name(r)) return r;
  return std::nullopt;
}

inline RuleId rule_id_c(RuleC r) { return RuleId{"lambda_c", rule_c_name(r)}; }

// Applies the rule at the root of t, or nothing if the pattern or a proviso
// fails.
inline std::optional<TermC> contract_c(const TermC& t, RuleC r) {
  switch (r) {
    case RuleC::B: {
      auto* a = as_app(t);
      if (!a) return std::nullopt;
      auto* l = as_lam(a->fun);
      if (!l) return std::nullopt;
      return let_(l->binder, a->arg, l->body);
    }
    case RuleC::LetV: {
      auto* l = as_let(t);
      if (!l || !is_value(l->bound)) return std::nullopt;
      return subst(l->bound, l->binder, l->body);
    }
    case RuleC::EtaLet: {
      auto* l = as_let(t);
      if (!l) return std::nullopt;
      auto* b = as_var(l->body);
      if (!b || b->name != l->binder) return std::nullopt;
      return l->bound;
    }
    case RuleC::Assoc: {
      auto* outer = as_let(t);
      if (!outer) return std::nullopt;
      auto* inner = as_let(outer->bound);
      if (!inner) return std::nullopt;
      Name x = inner->binder;
      TermC n = inner->body;
      // x is about to scope over P as well
      if (x == outer->binder || free_vars(outer->body).count(x)) {
        NameSet avoid = all_names(t);
        Name x2 = fresh_name(x.base, avoid);
        n = subst(var(x2), x, n);
        x = x2;
      }
      return let_(x, inner->bound, let_(outer->binder, n, outer->body));
    }
    case RuleC::Let1: {
      auto* a = as_app(t);
      if (!a || is_value(a->fun)) return std::nullopt;
      Name x = fresh_name("x", all_names(t));
      return let_(x, a->fun, app(var(x), a->arg));
    }
    case RuleC::Let2: {
      auto* a = as_app(t);
      if (!a || !is_value(a->fun) || is_value(a->arg)) return std::nullopt;
      Name x = fresh_name("x", all_names(t));
      return let_(x, a->arg, app(a->fun, var(x)));
    }
  }
  return std::nullopt;
}

inline TermC step_c(const TermC& t, RuleC r, const Path& p) {
  TermC sub = subterm_at(t, p);
  auto red = contract_c(sub, r);
  if (!red) fail(ErrKind::NoRedex, std::string(rule_c_name(r)) + " at " + show_path(p));
  return replace_at(t, p, *red);
}

struct RedexC {
  RuleC rule;
  Path path;
};

inline std::vector<RedexC> redexes_c(const TermC& t, const std::vector<RuleC>& rules) {
  std::vector<RedexC> out;
  positions(t, [&](const Path& p, const TermC& u) {
    for (RuleC r : rules)
      if (contract_c(u, r)) out.push_back(RedexC{r, p});
  });
  return out;
}

inline const std::vector<RuleC>& all_rules_c() {
  static const std::vector<RuleC> rs = {RuleC::B,     RuleC::LetV, RuleC::EtaLet,
                                        RuleC::Assoc, RuleC::Let1, RuleC::Let2};
  return rs;
}

inline const std::vector<RuleC>& admin_rules() {
  static const std::vector<RuleC> rs = {RuleC::Assoc, RuleC::Let1, RuleC::Let2};
  return rs;
}

// Leftmost-outermost normalization: scan positions in pre-order, trying rules
// in the priority order given.
inline Trace<TermC> normalize_c(const TermC& start, const std::vector<RuleC>& rules, size_t fuel) {
  Trace<TermC> tr{start, {}};
  TermC cur = start;
  for (size_t n = 0; n < fuel; ++n) {
    std::optional<RedexC> pick;
    positions(cur, [&](const Path& p, const TermC& u) {
      if (pick) return;
      for (RuleC r : rules) {
        if (contract_c(u, r)) {
          pick = RedexC{r, p};
          return;
        }
      }
    });
    if (!pick) return tr;
    cur = step_c(cur, pick->rule, pick->path);
    tr.steps.push_back({rule_id_c(pick->rule), pick->path, cur});
  }
  fail(ErrKind::FuelExhausted, "normalize_c after " + std::to_string(fuel) + " steps");
}

// ---------------------------------------------------------------------------
// the kernel: administrative normal forms
// ---------------------------------------------------------------------------

inline bool is_anf(const TermC& t);

inline bool is_anf_value(const TermC& t) {
  if (as_var(t)) return true;
  if (auto* l = as_lam(t)) return is_anf(l->body);
  return false;
}

inline bool is_anf(const TermC& t) {
  if (is_value(t)) return is_anf_value(t);
  if (auto* a = as_app(t)) return is_anf_value(a->fun) && is_anf_value(a->arg);
  auto* l = as_let(t);
  if (!l) return false;
  if (auto* a = as_app(l->bound))
    return is_anf_value(a->fun) && is_anf_value(a->arg) && is_anf(l->body);
  return is_anf_value(l->bound) && is_anf(l->body);
}

// LET y:=M in P, the derived general let of the kernel: pushes the let spine
// of M outward and binds M's terminal value or application to y.
inline TermC let_compose(const Name& y, const TermC& m, const TermC& p) {
  if (auto* l = as_let(m)) {
    Name x = l->binder;
    TermC inner = l->body;
    if (x == y || free_vars(p).count(x)) {
      NameSet avoid = all_names(m);
      all_names_into(p, avoid);
      avoid.insert(y);
      Name x2 = fresh_name(x.base, avoid);
      inner = subst(var(x2), x, inner);
      x = x2;
    }
    return let_(x, l->bound, let_compose(y, inner, p));
  }
  return let_(y, m, p);
}

// 1-hole contexts of the kernel presentation
struct ContextK {
  bool hole = true;  // plain hole when true, otherwise let binder:=[] in body
  Name binder;
  TermC body;

  static ContextK plain() { return ContextK{}; }
  static ContextK let_hole(Name x, TermC p) { return ContextK{false, std::move(x), std::move(p)}; }
};

inline TermC fill_context(const ContextK& k, const TermC& t) {
  return k.hole ? t : let_(k.binder, t, k.body);
}

// (M : K) composes a kernel term with a context without creating admin redexes
inline TermC colon_k(const TermC& m, const ContextK& k) {
  if (auto* l = as_let(m)) {
    Name x = l->binder;
    TermC inner = l->body;
    NameSet kfv = k.hole ? NameSet{} : free_vars(k.body);
    if (!k.hole && (x == k.binder || kfv.count(x))) {
      NameSet avoid = all_names(m);
      avoid.insert(kfv.begin(), kfv.end());
      avoid.insert(k.binder);
      Name x2 = fresh_name(x.base, avoid);
      inner = subst(var(x2), x, inner);
      x = x2;
    }
    return let_(x, l->bound, colon_k(inner, k));
  }
  return fill_context(k, m);
}

enum class RuleAnf { Bv, BvPrime, LetV, EtaLet };

inline const char* rule_anf_name(RuleAnf r) {
  switch (r) {
    case RuleAnf::Bv: return "B_v";
    case RuleAnf::BvPrime: return "B_v'";
    case RuleAnf::LetV: return "let_v";
    case RuleAnf::EtaLet: return "eta_let";
  }
  return "?";
}

inline std::optional<RuleAnf> rule_anf_of_name(const std::string& s) {
  for (RuleAnf r : {RuleAnf::Bv, RuleAnf::BvPrime, RuleAnf::LetV, RuleAnf::EtaLet})
    if (s == rule_anf_name(r)) return r;
  return std::nullopt;
}

inline RuleId rule_id_anf(RuleAnf r) { return RuleId{"anf", rule_anf_name(r)}; }

inline std::optional<TermC> contract_anf(const TermC& t, RuleAnf r) {
  switch (r) {
    case RuleAnf::Bv: {
      auto* l = as_let(t);
      if (!l) return std::nullopt;
      auto* a = as_app(l->bound);
      if (!a) return std::nullopt;
      auto* f = as_lam(a->fun);
      if (!f || !is_value(a->arg)) return std::nullopt;
      Name x = f->binder;
      TermC body = f->body;
      if (free_vars(a->arg).count(x) || free_vars(l->body).count(x)) {
        NameSet avoid = all_names(t);
        Name x2 = fresh_name(x.base, avoid);
        body = subst(var(x2), x, body);
        x = x2;
      }
      return let_(x, a->arg, let_compose(l->binder, body, l->body));
    }
    case RuleAnf::BvPrime: {
      auto* a = as_app(t);
      if (!a) return std::nullopt;
      auto* f = as_lam(a->fun);
      if (!f || !is_value(a->arg)) return std::nullopt;
      return let_(f->binder, a->arg, f->body);
    }
    case RuleAnf::LetV: return contract_c(t, RuleC::LetV);
    case RuleAnf::EtaLet: {
      auto* l = as_let(t);
      if (!l || !as_app(l->bound)) return std::nullopt;
      auto* b = as_var(l->body);
      if (!b || b->name != l->binder) return std::nullopt;
      return l->bound;
    }
  }
  return std::nullopt;
}

struct RedexAnf {
  RuleAnf rule;
  Path path;
};

// In "let x:=VW in M" the application is not an immediate subexpression, so no
// rule may fire at its node; everything else is a candidate position.
inline std::vector<RedexAnf> redexes_anf(const TermC& t, const std::vector<RuleAnf>& rules) {
  std::vector<RedexAnf> out;
  Path p;
  std::function<void(const TermC&, bool)> go = [&](const TermC& u, bool shielded) {
    if (!shielded) {
      for (RuleAnf r : rules)
        if (contract_anf(u, r)) out.push_back(RedexAnf{r, p});
    }
    auto cs = children(u);
    bool shield_first = as_let(u) && as_app(as_let(u)->bound);
    for (size_t i = 0; i < cs.size(); ++i) {
      p.push_back(static_cast<int>(i));
      go(cs[i], shield_first && i == 0);
      p.pop_back();
    }
  };
  go(t, false);
  return out;
}

inline const std::vector<RuleAnf>& all_rules_anf() {
  static const std::vector<RuleAnf> rs = {RuleAnf::Bv, RuleAnf::BvPrime, RuleAnf::LetV,
                                          RuleAnf::EtaLet};
  return rs;
}

inline TermC step_anf(const TermC& t, RuleAnf r, const Path& p) {
  auto rs = redexes_anf(t, {r});
  for (auto& rx : rs) {
    if (rx.path == p) {
      auto red = contract_anf(subterm_at(t, p), r);
      return replace_at(t, p, *red);
    }
  }
  fail(ErrKind::NoRedex, std::string(rule_anf_name(r)) + " at " + show_path(p));
}

// ---------------------------------------------------------------------------
// administrative normalization
// ---------------------------------------------------------------------------

inline Trace<TermC> admin_normalize_trace(const TermC& t, size_t fuel = 10000) {
  return normalize_c(t, admin_rules(), fuel);
}

inline TermC admin_normalize(const TermC& t, size_t fuel = 10000) {
  return admin_normalize_trace(t, fuel).end();
}

// ---------------------------------------------------------------------------
// typing
// ---------------------------------------------------------------------------

inline Type infer_c(TypeSolver& s, const TypingContext& g, const TermC& t) {
  return std::visit(
      overloaded{[&](const CVar& x) -> Type {
                   auto ty = g.lookup(x.name);
                   if (!ty) fail(ErrKind::UnboundVariable, show_name(x.name));
                   return *ty;
                 },
                 [&](const CLam& l) -> Type {
                   Type a = s.fresh();
                   Type b = infer_c(s, g.extended(l.binder, a), l.body);
                   return t_arrow(a, b);
                 },
                 [&](const CApp& a) -> Type {
                   Type tf = infer_c(s, g, a.fun);
                   Type ta = infer_c(s, g, a.arg);
                   Type b = s.fresh();
                   if (!s.unify(tf, t_arrow(ta, b)))
                     fail(ErrKind::TypeMismatch, "application of " + show_type(s.zonk(tf)));
                   return b;
                 },
                 [&](const CLet& l) -> Type {
                   Type ta = infer_c(s, g, l.bound);
                   return infer_c(s, g.extended(l.binder, ta), l.body);
                 }},
      t->v);
}

// Does Gamma |- t : a hold?  Unbound variables and hard clashes surface as
// exceptions; a plain "no" means the expected type does not fit.
inline bool check_c(const TypingContext& g, const TermC& t, const Type& a) {
  TypeSolver s;
  Type ty = infer_c(s, g, t);
  return s.unify(ty, a);
}

// The unique derivable type, when there is one; nullopt when the term types
// but only with free choices left (e.g. a bare lambda).
inline std::optional<Type> synth_c(const TypingContext& g, const TermC& t) {
  TypeSolver s;
  Type ty = s.zonk(infer_c(s, g, t));
  if (!type_ground(ty)) return std::nullopt;
  return ty;
}

}  // namespace cbvkit::lc

#endif  // CBVKIT_LAMBDA_C_HPP
