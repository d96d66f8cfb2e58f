#ifndef CBVKIT_DIRECT_STYLE_HPP
#define CBVKIT_DIRECT_STYLE_HPP

#include <functional>

#include "cbvkit/core.hpp"
#include "cbvkit/cps.hpp"
#include "cbvkit/lambda_c.hpp"
#include "cbvkit/vfs.hpp"

// The two sub-kernels of the administrative normal forms, the calculus of
// generalized applications with its commutative normal forms, and the
// sigma-normal continuation-passing sub-calculus, with the bijections
// between each direct-style system and its proof-theoretic twin.
namespace cbvkit::ds {

using lc::TermC;

// ---------------------------------------------------------------------------
// value-enclosed style: a sub-grammar of the kernel
//   M ::= V | let x:=V in c_x      c_x ::= M | let y:=xW in N
// with x not free in W or N in the second form.
// ---------------------------------------------------------------------------

inline bool is_ves(const TermC& t);

inline bool is_ves_value(const TermC& t) {
  if (lc::as_var(t)) return true;
  if (auto* l = lc::as_lam(t)) return is_ves(l->body);
  return false;
}

// Is b a member of the context class indexed by x?
inline bool is_ves_ctx(const Name& x, const TermC& b) {
  if (auto* l = lc::as_let(b)) {
    if (auto* a = lc::as_app(l->bound)) {
      auto* h = lc::as_var(a->fun);
      if (h && h->name == x) {
        NameSet fv = lc::free_vars(a->arg);
        lc::free_vars_into(l->body, fv);
        fv.erase(l->binder);
        return !fv.count(x) && is_ves_value(a->arg) && is_ves(l->body);
      }
    }
  }
  return is_ves(b);
}

inline bool is_ves(const TermC& t) {
  if (lc::is_value(t)) return is_ves_value(t);
  auto* l = lc::as_let(t);
  if (!l) return false;
  return is_ves_value(l->bound) && is_ves_ctx(l->binder, l->body);
}

// does the body use the second alternative of the context class?
inline bool ves_ctx_is_letapp(const Name& x, const TermC& b) {
  if (auto* l = lc::as_let(b))
    if (auto* a = lc::as_app(l->bound))
      if (auto* h = lc::as_var(a->fun)) {
        if (h->name != x) return false;
        NameSet fv = lc::free_vars(a->arg);
        lc::free_vars_into(l->body, fv);
        fv.erase(l->binder);
        return !fv.count(x);
      }
  return false;
}

inline TermC ves_let_compose(const Name& y, const TermC& m, const TermC& p);

// LET y:=c_z in P, producing another member of the class indexed by z;
// requires z not free in P.
inline TermC ves_let_compose_ctx(const Name& z, const Name& y, const TermC& c, const TermC& p) {
  if (lc::free_vars(p).count(z))
    fail(ErrKind::FreshnessViolation, show_name(z) + " free in the continuation");
  if (ves_ctx_is_letapp(z, c)) {
    auto* l = lc::as_let(c);
    Name x = l->binder;
    TermC n = l->body;
    if (x == y || lc::free_vars(p).count(x)) {
      NameSet avoid = lc::all_names(c);
      lc::all_names_into(p, avoid);
      avoid.insert(y);
      Name x2 = fresh_name(x.base, avoid);
      n = lc::subst(lc::var(x2), x, n);
      x = x2;
    }
    return lc::let_(x, l->bound, ves_let_compose(y, n, p));
  }
  return ves_let_compose(y, c, p);
}

inline TermC ves_let_compose(const Name& y, const TermC& m, const TermC& p) {
  if (lc::is_value(m)) return lc::let_(y, m, p);
  auto* l = lc::as_let(m);
  if (!l || !lc::is_value(l->bound)) fail(ErrKind::Contract, "not in value-enclosed style");
  Name z = l->binder;
  TermC body = l->body;
  if (z == y || lc::free_vars(p).count(z)) {
    NameSet avoid = lc::all_names(m);
    lc::all_names_into(p, avoid);
    avoid.insert(y);
    Name z2 = fresh_name(z.base, avoid);
    body = lc::subst(lc::var(z2), z, body);
    z = z2;
  }
  return lc::let_(z, l->bound, ves_let_compose_ctx(z, y, body, p));
}

enum class RuleVes { Bv, LetV };

inline const char* rule_ves_name(RuleVes r) { return r == RuleVes::Bv ? "B_v" : "let_v"; }

inline RuleId rule_id_ves(RuleVes r) { return RuleId{"ves", rule_ves_name(r)}; }

// The step relation of the sub-grammar: let_v fires on a plain-term body,
// the fused rule on an abstraction cut against a context of the second form.
// Either way the contractum is again in the sub-grammar.
inline std::optional<TermC> contract_ves(const TermC& t, RuleVes r) {
  auto* l = lc::as_let(t);
  if (!l || !lc::is_value(l->bound)) return std::nullopt;
  switch (r) {
    case RuleVes::Bv: {
      auto* f = lc::as_lam(l->bound);
      if (!f || !ves_ctx_is_letapp(l->binder, l->body)) return std::nullopt;
      auto* inner = lc::as_let(l->body);
      auto* a = lc::as_app(inner->bound);
      Name x = f->binder;
      TermC body = f->body;
      if (lc::free_vars(a->arg).count(x) || lc::free_vars(inner->body).count(x) ||
          x == inner->binder) {
        NameSet avoid = lc::all_names(t);
        Name x2 = fresh_name(x.base, avoid);
        body = lc::subst(lc::var(x2), x, body);
        x = x2;
      }
      return lc::let_(x, a->arg, ves_let_compose(inner->binder, body, inner->body));
    }
    case RuleVes::LetV: {
      if (ves_ctx_is_letapp(l->binder, l->body)) return std::nullopt;
      return lc::subst(l->bound, l->binder, l->body);
    }
  }
  return std::nullopt;
}

// The liberal reading of let_v: substitute even into a context of the second
// form.  The result is a kernel term that may leave the sub-grammar, which
// the caller can observe through the flag.
struct VesEscape {
  TermC result;
  bool in_ves;
};

inline std::optional<VesEscape> contract_ves_permissive(const TermC& t) {
  auto* l = lc::as_let(t);
  if (!l || !lc::is_value(l->bound)) return std::nullopt;
  TermC r = lc::subst(l->bound, l->binder, l->body);
  return VesEscape{r, is_ves(r)};
}

struct RedexVes {
  RuleVes rule;
  Path path;
};

inline std::vector<RedexVes> redexes_ves(const TermC& t) {
  std::vector<RedexVes> out;
  lc::positions(t, [&](const Path& p, const TermC& u) {
    for (RuleVes r : {RuleVes::Bv, RuleVes::LetV})
      if (contract_ves(u, r)) out.push_back(RedexVes{r, p});
  });
  return out;
}

inline TermC step_ves(const TermC& t, RuleVes r, const Path& p) {
  TermC sub = lc::subterm_at(t, p);
  auto red = contract_ves(sub, r);
  if (!red) fail(ErrKind::NoRedex, std::string(rule_ves_name(r)) + " at " + show_path(p));
  return lc::replace_at(t, p, *red);
}

// ---------------------------------------------------------------------------
// continuation-enclosing style
//   M ::= V | let x:=VW in M
// ---------------------------------------------------------------------------

inline bool is_ces(const TermC& t);

inline bool is_ces_value(const TermC& t) {
  if (lc::as_var(t)) return true;
  if (auto* l = lc::as_lam(t)) return is_ces(l->body);
  return false;
}

inline bool is_ces(const TermC& t) {
  if (lc::is_value(t)) return is_ces_value(t);
  auto* l = lc::as_let(t);
  if (!l) return false;
  auto* a = lc::as_app(l->bound);
  if (!a) return false;
  return is_ces_value(a->fun) && is_ces_value(a->arg) && is_ces(l->body);
}

// LET of this style: the base case performs the substitution immediately.
inline TermC ces_let_compose(const Name& y, const TermC& m, const TermC& p) {
  if (lc::is_value(m)) return lc::subst(m, y, p);
  auto* l = lc::as_let(m);
  if (!l) fail(ErrKind::Contract, "not in continuation-enclosing style");
  Name x = l->binder;
  TermC body = l->body;
  if (x == y || lc::free_vars(p).count(x)) {
    NameSet avoid = lc::all_names(m);
    lc::all_names_into(p, avoid);
    avoid.insert(y);
    Name x2 = fresh_name(x.base, avoid);
    body = lc::subst(lc::var(x2), x, body);
    x = x2;
  }
  return lc::let_(x, l->bound, ces_let_compose(y, body, p));
}

inline RuleId rule_id_ces() { return RuleId{"ces", "beta_v"}; }

inline std::optional<TermC> contract_ces(const TermC& t) {
  auto* l = lc::as_let(t);
  if (!l) return std::nullopt;
  auto* a = lc::as_app(l->bound);
  if (!a) return std::nullopt;
  auto* f = lc::as_lam(a->fun);
  if (!f || !lc::is_value(a->arg)) return std::nullopt;
  return ces_let_compose(l->binder, lc::subst(a->arg, f->binder, f->body), l->body);
}

inline std::vector<Path> redexes_ces(const TermC& t) {
  std::vector<Path> out;
  lc::positions(t, [&](const Path& p, const TermC& u) {
    if (contract_ces(u)) out.push_back(p);
  });
  return out;
}

inline TermC step_ces(const TermC& t, const Path& p) {
  TermC sub = lc::subterm_at(t, p);
  auto red = contract_ces(sub);
  if (!red) fail(ErrKind::NoRedex, "beta_v at " + show_path(p));
  return lc::replace_at(t, p, *red);
}

// ---------------------------------------------------------------------------
// generalized applications
// ---------------------------------------------------------------------------

struct GNode;
using G = std::shared_ptr<const GNode>;

struct GVar {
  Name name;
};
struct GLam {
  Name binder;
  G body;
};
struct GApp {  // head(arg, binder.cont)
  G head, arg;
  Name binder;
  G cont;
};

struct GNode {
  std::variant<GVar, GLam, GApp> v;
};

inline G gvar(Name n) { return std::make_shared<GNode>(GNode{GVar{std::move(n)}}); }
inline G glam(Name x, G m) { return std::make_shared<GNode>(GNode{GLam{std::move(x), std::move(m)}}); }
inline G gapp(G h, G a, Name x, G c) {
  return std::make_shared<GNode>(
      GNode{GApp{std::move(h), std::move(a), std::move(x), std::move(c)}});
}

inline const GVar* as_gvar(const G& t) { return std::get_if<GVar>(&t->v); }
inline const GLam* as_glam(const G& t) { return std::get_if<GLam>(&t->v); }
inline const GApp* as_gapp(const G& t) { return std::get_if<GApp>(&t->v); }

inline bool is_g_value(const G& t) { return as_gvar(t) || as_glam(t); }

inline bool is_cnf(const G& t) {
  return std::visit(overloaded{[](const GVar&) { return true; },
                               [](const GLam& l) { return is_cnf(l.body); },
                               [](const GApp& a) {
                                 return is_g_value(a.head) && is_g_value(a.arg) && is_cnf(a.head) &&
                                        is_cnf(a.arg) && is_cnf(a.cont);
                               }},
                    t->v);
}

inline size_t node_count(const G& t) {
  return std::visit(overloaded{[](const GVar&) -> size_t { return 1; },
                               [](const GLam& l) { return 1 + node_count(l.body); },
                               [](const GApp& a) {
                                 return 1 + node_count(a.head) + node_count(a.arg) +
                                        node_count(a.cont);
                               }},
                    t->v);
}

inline void free_vars_into(const G& t, NameSet& acc) {
  std::visit(overloaded{[&](const GVar& x) { acc.insert(x.name); },
                        [&](const GLam& l) {
                          NameSet inner;
                          free_vars_into(l.body, inner);
                          inner.erase(l.binder);
                          acc.insert(inner.begin(), inner.end());
                        },
                        [&](const GApp& a) {
                          free_vars_into(a.head, acc);
                          free_vars_into(a.arg, acc);
                          NameSet inner;
                          free_vars_into(a.cont, inner);
                          inner.erase(a.binder);
                          acc.insert(inner.begin(), inner.end());
                        }},
             t->v);
}

inline NameSet free_vars(const G& t) {
  NameSet s;
  free_vars_into(t, s);
  return s;
}

inline void all_names_into(const G& t, NameSet& acc) {
  std::visit(overloaded{[&](const GVar& x) { acc.insert(x.name); },
                        [&](const GLam& l) {
                          acc.insert(l.binder);
                          all_names_into(l.body, acc);
                        },
                        [&](const GApp& a) {
                          acc.insert(a.binder);
                          all_names_into(a.head, acc);
                          all_names_into(a.arg, acc);
                          all_names_into(a.cont, acc);
                        }},
             t->v);
}

inline NameSet all_names(const G& t) {
  NameSet s;
  all_names_into(t, s);
  return s;
}

inline G subst(const G& v, const Name& x, const G& t) {
  auto under = [&](const Name& b, const G& body) -> std::pair<Name, G> {
    if (free_vars(v).count(b)) {
      NameSet avoid = all_names(body);
      all_names_into(v, avoid);
      avoid.insert(x);
      Name b2 = fresh_name(b.base, avoid);
      return {b2, subst(gvar(b2), b, body)};
    }
    return {b, body};
  };
  return std::visit(overloaded{[&](const GVar& y) { return y.name == x ? v : t; },
                               [&](const GLam& l) {
                                 if (l.binder == x) return t;
                                 auto [b, body] = under(l.binder, l.body);
                                 return glam(b, subst(v, x, body));
                               },
                               [&](const GApp& a) {
                                 G h = subst(v, x, a.head);
                                 G g = subst(v, x, a.arg);
                                 if (a.binder == x) return gapp(h, g, a.binder, a.cont);
                                 auto [b, cont] = under(a.binder, a.cont);
                                 return gapp(h, g, b, subst(v, x, cont));
                               }},
                    t->v);
}

inline void canon_key_into(const G& t, std::vector<std::pair<Name, int>>& env, int depth,
                           std::string& out) {
  auto emit_name = [&](const Name& n) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
      if (it->first == n) {
        out += 'b';
        out += std::to_string(depth - it->second);
        return;
      }
    }
    out += 'f';
    out += show_name(n);
    out += ';';
  };
  std::visit(overloaded{[&](const GVar& x) {
                          out += 'v';
                          emit_name(x.name);
                        },
                        [&](const GLam& l) {
                          out += 'L';
                          env.emplace_back(l.binder, depth);
                          canon_key_into(l.body, env, depth + 1, out);
                          env.pop_back();
                        },
                        [&](const GApp& a) {
                          out += 'G';
                          canon_key_into(a.head, env, depth, out);
                          canon_key_into(a.arg, env, depth, out);
                          env.emplace_back(a.binder, depth);
                          canon_key_into(a.cont, env, depth + 1, out);
                          env.pop_back();
                        }},
             t->v);
}

inline std::string canon_key(const G& t) {
  std::string s;
  s.reserve(node_count(t) * 3);
  std::vector<std::pair<Name, int>> env;
  canon_key_into(t, env, 0, s);
  return s;
}

inline bool alpha_eq(const G& a, const G& b) {
  return a.get() == b.get() || canon_key(a) == canon_key(b);
}

inline std::vector<G> children(const G& t) {
  return std::visit(overloaded{[](const GVar&) { return std::vector<G>{}; },
                               [](const GLam& l) { return std::vector<G>{l.body}; },
                               [](const GApp& a) {
                                 return std::vector<G>{a.head, a.arg, a.cont};
                               }},
                    t->v);
}

inline G with_child(const G& t, int i, const G& c) {
  return std::visit(overloaded{[&](const GVar&) -> G { fail(ErrKind::Contract, "no child"); },
                               [&](const GLam& l) { return glam(l.binder, c); },
                               [&](const GApp& a) {
                                 if (i == 0) return gapp(c, a.arg, a.binder, a.cont);
                                 if (i == 1) return gapp(a.head, c, a.binder, a.cont);
                                 return gapp(a.head, a.arg, a.binder, c);
                               }},
                    t->v);
}

inline G subterm_at(const G& t, const Path& p, size_t from = 0) {
  if (from == p.size()) return t;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return subterm_at(cs[static_cast<size_t>(i)], p, from + 1);
}

inline G replace_at(const G& t, const Path& p, const G& sub, size_t from = 0) {
  if (from == p.size()) return sub;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return with_child(t, i, replace_at(cs[static_cast<size_t>(i)], p, sub, from + 1));
}

inline void positions(const G& t, const std::function<void(const Path&, const G&)>& fn) {
  Path p;
  std::function<void(const G&)> go = [&](const G& u) {
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

inline G left_subst(const G& n, const Name& x, const G& p);

// commutative conversions: pi1 hoists an application out of head position,
// pi2 (on a value head) hoists one out of argument position
enum class RuleGa { Pi1, Pi2, BetaV };

inline const char* rule_ga_name(RuleGa r) {
  switch (r) {
    case RuleGa::Pi1: return "pi1";
    case RuleGa::Pi2: return "pi2";
    case RuleGa::BetaV: return "beta_v";
  }
  return "?";
}

inline RuleId rule_id_ga(RuleGa r) { return RuleId{"ga", rule_ga_name(r)}; }

inline std::optional<G> contract_ga(const G& t, RuleGa r) {
  auto* a = as_gapp(t);
  if (!a) return std::nullopt;
  switch (r) {
    case RuleGa::Pi1: {
      auto* h = as_gapp(a->head);
      if (!h) return std::nullopt;
      Name y = h->binder;
      G m3 = h->cont;
      NameSet fv = free_vars(a->arg);
      free_vars_into(a->cont, fv);
      fv.erase(a->binder);
      if (fv.count(y)) {
        NameSet avoid = all_names(t);
        Name y2 = fresh_name(y.base, avoid);
        m3 = subst(gvar(y2), y, m3);
        y = y2;
      }
      return gapp(h->head, h->arg, y, gapp(m3, a->arg, a->binder, a->cont));
    }
    case RuleGa::Pi2: {
      if (!is_g_value(a->head)) return std::nullopt;
      auto* n = as_gapp(a->arg);
      if (!n) return std::nullopt;
      Name y = n->binder;
      G n3 = n->cont;
      NameSet fv = free_vars(a->head);
      free_vars_into(a->cont, fv);
      fv.erase(a->binder);
      if (fv.count(y)) {
        NameSet avoid = all_names(t);
        Name y2 = fresh_name(y.base, avoid);
        n3 = subst(gvar(y2), y, n3);
        y = y2;
      }
      return gapp(n->head, n->arg, y, gapp(a->head, n3, a->binder, a->cont));
    }
    case RuleGa::BetaV: {
      auto* f = as_glam(a->head);
      if (!f || !is_g_value(a->arg)) return std::nullopt;
      return left_subst(subst(a->arg, f->binder, f->body), a->binder, a->cont);
    }
  }
  return std::nullopt;
}

// threads p under the spine of n, substituting at the terminal value
inline G left_subst(const G& n, const Name& x, const G& p) {
  if (is_g_value(n)) return subst(n, x, p);
  auto* a = as_gapp(n);
  if (!a) fail(ErrKind::Contract, "left substitution expects a commutative normal form");
  Name y = a->binder;
  G cont = a->cont;
  if (y == x || free_vars(p).count(y)) {
    NameSet avoid = all_names(n);
    all_names_into(p, avoid);
    avoid.insert(x);
    Name y2 = fresh_name(y.base, avoid);
    cont = subst(gvar(y2), y, cont);
    y = y2;
  }
  return gapp(a->head, a->arg, y, left_subst(cont, x, p));
}

struct RedexGa {
  RuleGa rule;
  Path path;
};

inline std::vector<RedexGa> redexes_ga(const G& t, const std::vector<RuleGa>& rules) {
  std::vector<RedexGa> out;
  positions(t, [&](const Path& p, const G& u) {
    for (RuleGa r : rules)
      if (contract_ga(u, r)) out.push_back(RedexGa{r, p});
  });
  return out;
}

inline G step_ga(const G& t, RuleGa r, const Path& p) {
  G sub = subterm_at(t, p);
  auto red = contract_ga(sub, r);
  if (!red) fail(ErrKind::NoRedex, std::string(rule_ga_name(r)) + " at " + show_path(p));
  return replace_at(t, p, *red);
}

// step relation of the commutative-normal-form calculus (beta only)
inline std::vector<Path> redexes_cnf(const G& t) {
  std::vector<Path> out;
  for (auto& rx : redexes_ga(t, {RuleGa::BetaV})) out.push_back(rx.path);
  return out;
}

inline G step_cnf(const G& t, const Path& p) { return step_ga(t, RuleGa::BetaV, p); }

// outermost-first exhaustive application: pi1 to completion, then pi2, repeat
inline G pi_normalize_ga(const G& t, size_t fuel = 10000) {
  G cur = t;
  for (size_t n = 0; n < fuel; ++n) {
    std::optional<RedexGa> pick;
    positions(cur, [&](const Path& p, const G& u) {
      if (pick && pick->rule == RuleGa::Pi1) return;
      if (contract_ga(u, RuleGa::Pi1)) {
        if (!pick || pick->rule != RuleGa::Pi1) pick = RedexGa{RuleGa::Pi1, p};
      } else if (!pick && contract_ga(u, RuleGa::Pi2)) {
        pick = RedexGa{RuleGa::Pi2, p};
      }
    });
    if (!pick) return cur;
    cur = step_ga(cur, pick->rule, pick->path);
  }
  fail(ErrKind::FuelExhausted, "pi_normalize_ga after " + std::to_string(fuel) + " steps");
}

// ---------------------------------------------------------------------------
// value-enclosed style <-> value-filling style
// ---------------------------------------------------------------------------

inline vfs::V psi(const TermC& t);

inline vfs::V psi_value(const TermC& v) {
  if (auto* x = lc::as_var(v)) return vfs::vvar(x->name);
  if (auto* l = lc::as_lam(v)) return vfs::vlam(l->binder, psi(l->body));
  fail(ErrKind::Contract, "not a value");
}

inline vfs::V psi_ctx(const Name& x, const TermC& c) {
  if (ves_ctx_is_letapp(x, c)) {
    auto* l = lc::as_let(c);
    auto* a = lc::as_app(l->bound);
    return vfs::vgapp(psi_value(a->arg), l->binder, psi(l->body));
  }
  return vfs::vbind(x, psi(c));
}

inline vfs::V psi(const TermC& t) {
  if (lc::is_value(t)) return vfs::vret(psi_value(t));
  auto* l = lc::as_let(t);
  if (!l || !lc::is_value(l->bound)) fail(ErrKind::Contract, "not in value-enclosed style");
  return vfs::vcut(psi_value(l->bound), psi_ctx(l->binder, l->body));
}

inline TermC theta(const vfs::V& t, FreshPool& pool);

inline TermC theta_value(const vfs::V& v, FreshPool& pool) {
  if (auto* x = vfs::as_vvar(v)) return lc::var(x->name);
  if (auto* l = vfs::as_vlam(v)) return lc::lam(l->binder, theta(l->body, pool));
  fail(ErrKind::Contract, "not a value");
}

inline TermC theta_ctx(const Name& x, const vfs::V& c, FreshPool& pool) {
  if (auto* b = vfs::as_vbind(c)) return lc::subst(lc::var(x), b->binder, theta(b->body, pool));
  if (auto* g = vfs::as_vgapp(c))
    return lc::let_(g->binder, lc::app(lc::var(x), theta_value(g->arg, pool)),
                    theta(g->body, pool));
  fail(ErrKind::Contract, "not a formal context");
}

inline TermC theta(const vfs::V& t, FreshPool& pool) {
  if (auto* r = vfs::as_vret(t)) return theta_value(r->val, pool);
  if (auto* c = vfs::as_vcut(t)) {
    Name x = pool.next("x");
    return lc::let_(x, theta_value(c->val, pool), theta_ctx(x, c->ctx, pool));
  }
  fail(ErrKind::Contract, "not a term");
}

inline TermC theta(const vfs::V& t) {
  FreshPool pool(vfs::all_names(t));
  return theta(t, pool);
}

// ---------------------------------------------------------------------------
// continuation-enclosing style <-> commutative normal forms
// ---------------------------------------------------------------------------

inline G upsilon(const TermC& t) {
  if (auto* x = lc::as_var(t)) return gvar(x->name);
  if (auto* l = lc::as_lam(t)) return glam(l->binder, upsilon(l->body));
  auto* l = lc::as_let(t);
  if (!l) fail(ErrKind::Contract, "not in continuation-enclosing style");
  auto* a = lc::as_app(l->bound);
  if (!a) fail(ErrKind::Contract, "not in continuation-enclosing style");
  return gapp(upsilon(a->fun), upsilon(a->arg), l->binder, upsilon(l->body));
}

inline TermC phi(const G& t) {
  return std::visit(overloaded{[&](const GVar& x) { return lc::var(x.name); },
                               [&](const GLam& l) { return lc::lam(l.binder, phi(l.body)); },
                               [&](const GApp& a) {
                                 return lc::let_(a.binder, lc::app(phi(a.head), phi(a.arg)),
                                                 phi(a.cont));
                               }},
                    t->v);
}

// ---------------------------------------------------------------------------
// the sigma-normal continuation-passing sub-calculus
// commands are kV or VW(\x.M); no K V commands
// ---------------------------------------------------------------------------

inline bool is_small_cps(const cps::C& t) {
  bool ok = cps::mode_ok(t, cps::Mode::CPS);
  cps::positions(t, [&](const Path&, const cps::C& u) {
    if (cps::as_appk(u)) ok = false;
  });
  return ok;
}

inline void require_small_cps(const cps::C& t) {
  if (!is_small_cps(t) || !cps::linear_k(t))
    fail(ErrKind::MalformedSmallCPS, "expected a sigma-normal command");
}

inline cps::C cnf_negative_value(const G& v);

inline cps::C cnf_negative(const G& m) {
  if (is_g_value(m)) return cps::kapp(cnf_negative_value(m));
  auto* a = as_gapp(m);
  return cps::appvwk(cnf_negative_value(a->head), cnf_negative_value(a->arg),
                     cps::klam(a->binder, cnf_negative(a->cont)));
}

inline cps::C cnf_negative_value(const G& v) {
  if (auto* x = as_gvar(v)) return cps::cvar(x->name);
  if (auto* l = as_glam(v)) return cps::clam(l->binder, cps::lamk(cnf_negative(l->body)));
  fail(ErrKind::Contract, "not a value");
}

inline cps::C cnf_negative_term(const G& m) { return cps::lamk(cnf_negative(m)); }

inline G cps_inverse_value(const cps::C& v);

inline G cps_inverse(const cps::C& m) {
  if (auto* a = cps::as_kapp(m)) return cps_inverse_value(a->val);
  if (auto* a = cps::as_appvwk(m)) {
    auto* f = cps::as_klam(a->k);
    if (!f) fail(ErrKind::MalformedSmallCPS, "bare continuation");
    return gapp(cps_inverse_value(a->v), cps_inverse_value(a->w), f->binder,
                cps_inverse(f->body));
  }
  fail(ErrKind::MalformedSmallCPS, "not a command of the sub-calculus");
}

inline G cps_inverse_value(const cps::C& v) {
  if (auto* x = cps::as_cvar(v)) return gvar(x->name);
  if (auto* l = cps::as_clam(v)) {
    auto* lk = cps::as_lamk(l->body);
    if (!lk) fail(ErrKind::MalformedSmallCPS, "value body is not a term");
    return glam(l->binder, cps_inverse(lk->body));
  }
  fail(ErrKind::MalformedSmallCPS, "not a value");
}

inline G cps_inverse_term(const cps::C& t) {
  auto* lk = cps::as_lamk(t);
  if (!lk) fail(ErrKind::MalformedSmallCPS, "not a term");
  return cps_inverse(lk->body);
}

// [\x.N / k]M with the reduction of the resulting redex fused in:
// each kV becomes [V/x]N on the spot
inline cps::C small_subst_k(const Name& x, const cps::C& n, const cps::C& m) {
  if (auto* a = cps::as_kapp(m)) return cps::subst_value(a->val, x, n);
  if (auto* a = cps::as_appvwk(m)) {
    auto* f = cps::as_klam(a->k);
    if (!f) fail(ErrKind::MalformedSmallCPS, "bare continuation");
    Name z = f->binder;
    cps::C body = f->body;
    NameSet nfv = cps::free_vars(n);
    if (nfv.count(z)) {
      NameSet avoid = cps::all_names(body);
      avoid.insert(nfv.begin(), nfv.end());
      avoid.insert(x);
      Name z2 = fresh_name(z.base, avoid);
      body = cps::subst_value(cps::cvar(z2), z, body);
      z = z2;
    }
    return cps::appvwk(a->v, a->w, cps::klam(z, small_subst_k(x, n, body)));
  }
  fail(ErrKind::MalformedSmallCPS, "not a command of the sub-calculus");
}

inline RuleId rule_id_small_cps() { return RuleId{"cps_small", "beta_v"}; }

inline std::optional<cps::C> contract_small_cps(const cps::C& t) {
  auto* a = cps::as_appvwk(t);
  if (!a) return std::nullopt;
  auto* f = cps::as_clam(a->v);
  if (!f) return std::nullopt;
  auto* lk = cps::as_lamk(f->body);
  if (!lk) return std::nullopt;
  auto* kl = cps::as_klam(a->k);
  if (!kl) fail(ErrKind::MalformedSmallCPS, "bare continuation");
  return small_subst_k(kl->binder, kl->body, cps::subst_value(a->w, f->binder, lk->body));
}

inline std::vector<Path> redexes_small_cps(const cps::C& t) {
  std::vector<Path> out;
  cps::positions(t, [&](const Path& p, const cps::C& u) {
    if (cps::as_appvwk(u) && contract_small_cps(u)) out.push_back(p);
  });
  return out;
}

inline cps::C step_small_cps(const cps::C& t, const Path& p) {
  cps::C sub = cps::subterm_at(t, p);
  auto red = contract_small_cps(sub);
  if (!red) fail(ErrKind::NoRedex, "beta_v at " + show_path(p));
  return cps::replace_at(t, p, *red);
}

// ---------------------------------------------------------------------------
// the expansion square of the application constructor
// ---------------------------------------------------------------------------

struct ExpansionReport {
  bool ok = true;
  std::string detail;
};

// Both expansions of VW: e1 = let x:=V in xW, e2 = let y:=VW in y, and the
// common refinement e3 = let x:=V in let y:=xW in y.  Four reduction edges
// connect them; the two paths from e3 must meet at VW.
inline ExpansionReport expansion_diagram_check(const TermC& v, const TermC& w) {
  ExpansionReport rep;
  if (!lc::is_value(v) || !lc::is_value(w)) {
    rep.ok = false;
    rep.detail = "corners need values";
    return rep;
  }
  NameSet avoid = lc::all_names(v);
  lc::all_names_into(w, avoid);
  Name x = fresh_name("x", avoid);
  avoid.insert(x);
  Name y = fresh_name("y", avoid);

  TermC vw = lc::app(v, w);
  TermC e1 = lc::let_(x, v, lc::app(lc::var(x), w));
  TermC e2 = lc::let_(y, vw, lc::var(y));
  TermC e3 = lc::let_(x, v, lc::let_(y, lc::app(lc::var(x), w), lc::var(y)));

  auto expect = [&](const TermC& from, lc::RuleC r, const TermC& to, const char* what) {
    auto got = lc::contract_c(from, r);
    if (!got || !lc::alpha_eq(*got, to)) {
      rep.ok = false;
      rep.detail += std::string(what) + " edge failed; ";
    }
  };
  expect(e1, lc::RuleC::LetV, vw, "left");
  expect(e2, lc::RuleC::EtaLet, vw, "top");
  expect(e3, lc::RuleC::LetV, e2, "bottom");
  // the eta edge of the square fires inside the body of e3
  try {
    TermC stepped = lc::step_c(e3, lc::RuleC::EtaLet, Path{1});
    if (!lc::alpha_eq(stepped, e1)) {
      rep.ok = false;
      rep.detail += "right edge failed; ";
    }
  } catch (const Error&) {
    rep.ok = false;
    rep.detail += "right edge missing; ";
  }
  if (!is_ves(e3)) {
    rep.ok = false;
    rep.detail += "refinement leaves value-enclosed style; ";
  }
  if (!is_ces(e2)) {
    rep.ok = false;
    rep.detail += "expansion leaves continuation-enclosing style; ";
  }
  return rep;
}

// generalized-application typing: head A->B, argument A, continuation under B
inline Type infer_ga(TypeSolver& s, const TypingContext& g, const G& t) {
  return std::visit(overloaded{[&](const GVar& x) -> Type {
                                 auto ty = g.lookup(x.name);
                                 if (!ty) fail(ErrKind::UnboundVariable, show_name(x.name));
                                 return *ty;
                               },
                               [&](const GLam& l) -> Type {
                                 Type a = s.fresh();
                                 Type b = infer_ga(s, g.extended(l.binder, a), l.body);
                                 return t_arrow(a, b);
                               },
                               [&](const GApp& a) -> Type {
                                 Type th = infer_ga(s, g, a.head);
                                 Type ta = infer_ga(s, g, a.arg);
                                 Type b = s.fresh();
                                 if (!s.unify(th, t_arrow(ta, b)))
                                   fail(ErrKind::TypeMismatch, "generalized application head");
                                 return infer_ga(s, g.extended(a.binder, b), a.cont);
                               }},
                    t->v);
}

inline bool check_ga(const TypingContext& g, const G& t, const Type& a) {
  TypeSolver s;
  Type ty = infer_ga(s, g, t);
  return s.unify(ty, a);
}

}  // namespace cbvkit::ds

#endif  // CBVKIT_DIRECT_STYLE_HPP
