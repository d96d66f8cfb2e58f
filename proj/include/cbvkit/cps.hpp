#ifndef CBVKIT_CPS_HPP
#define CBVKIT_CPS_HPP

#include <functional>

#include "cbvkit/core.hpp"
#include "cbvkit/lambda_c.hpp"
#include "cbvkit/typing.hpp"
#include "cbvkit/vfs.hpp"

// Continuation-passing targets.  One node family covers both systems; a mode
// flag selects which: the classical target where the covariable k is itself a
// continuation, and the modified one where k only occurs applied (kV) and
// continuations are always abstractions.
namespace cbvkit::cps {

enum class Mode { RCPS, CPS };

inline const char* mode_name(Mode m) { return m == Mode::RCPS ? "rcps" : "cps"; }

struct CNode;
using C = std::shared_ptr<const CNode>;

struct KLamN {  // continuation \x.M
  Name binder;
  C body;
};
struct KVarN {};  // the continuation k itself (first system only)
struct AppKN {    // command K V
  C k;
  C val;
};
struct AppVWKN {  // command V W K
  C v, w, k;
};
struct KAppN {  // command k V (modified system only)
  C val;
};
struct ValVarN {
  Name name;
};
struct ValLamN {  // value \x.P
  Name binder;
  C body;
};
struct LamKN {  // term \k.M
  C body;
};

struct CNode {
  std::variant<KLamN, KVarN, AppKN, AppVWKN, KAppN, ValVarN, ValLamN, LamKN> v;
};

inline C klam(Name x, C m) { return std::make_shared<CNode>(CNode{KLamN{std::move(x), std::move(m)}}); }
inline C kvar() { return std::make_shared<CNode>(CNode{KVarN{}}); }
inline C appk(C k, C v) { return std::make_shared<CNode>(CNode{AppKN{std::move(k), std::move(v)}}); }
inline C appvwk(C v, C w, C k) {
  return std::make_shared<CNode>(CNode{AppVWKN{std::move(v), std::move(w), std::move(k)}});
}
inline C kapp(C v) { return std::make_shared<CNode>(CNode{KAppN{std::move(v)}}); }
inline C cvar(Name n) { return std::make_shared<CNode>(CNode{ValVarN{std::move(n)}}); }
inline C clam(Name x, C p) {
  return std::make_shared<CNode>(CNode{ValLamN{std::move(x), std::move(p)}});
}
inline C lamk(C m) { return std::make_shared<CNode>(CNode{LamKN{std::move(m)}}); }

inline const KLamN* as_klam(const C& t) { return std::get_if<KLamN>(&t->v); }
inline const KVarN* as_kvar(const C& t) { return std::get_if<KVarN>(&t->v); }
inline const AppKN* as_appk(const C& t) { return std::get_if<AppKN>(&t->v); }
inline const AppVWKN* as_appvwk(const C& t) { return std::get_if<AppVWKN>(&t->v); }
inline const KAppN* as_kapp(const C& t) { return std::get_if<KAppN>(&t->v); }
inline const ValVarN* as_cvar(const C& t) { return std::get_if<ValVarN>(&t->v); }
inline const ValLamN* as_clam(const C& t) { return std::get_if<ValLamN>(&t->v); }
inline const LamKN* as_lamk(const C& t) { return std::get_if<LamKN>(&t->v); }

inline bool is_command(const C& t) { return as_appk(t) || as_appvwk(t) || as_kapp(t); }
inline bool is_continuation(const C& t) { return as_klam(t) || as_kvar(t); }
inline bool is_cps_value(const C& t) { return as_cvar(t) || as_clam(t); }
inline bool is_cps_term(const C& t) { return as_lamk(t) != nullptr; }

// ---------------------------------------------------------------------------
// structural helpers
// ---------------------------------------------------------------------------

inline size_t node_count(const C& t) {
  return std::visit(
      overloaded{[](const KLamN& n) { return 1 + node_count(n.body); },
                 [](const KVarN&) -> size_t { return 1; },
                 [](const AppKN& n) { return 1 + node_count(n.k) + node_count(n.val); },
                 [](const AppVWKN& n) {
                   return 1 + node_count(n.v) + node_count(n.w) + node_count(n.k);
                 },
                 [](const KAppN& n) { return 1 + node_count(n.val); },
                 [](const ValVarN&) -> size_t { return 1; },
                 [](const ValLamN& n) { return 1 + node_count(n.body); },
                 [](const LamKN& n) { return 1 + node_count(n.body); }},
      t->v);
}

// Free names; the covariable counts as free where it occurs unbound.
inline void free_vars_into(const C& t, NameSet& acc) {
  auto bound = [&acc](const Name& b, const C& body) {
    NameSet inner;
    free_vars_into(body, inner);
    inner.erase(b);
    acc.insert(inner.begin(), inner.end());
  };
  std::visit(overloaded{[&](const KLamN& n) { bound(n.binder, n.body); },
                        [&](const KVarN&) { acc.insert(covariable_k()); },
                        [&](const AppKN& n) {
                          free_vars_into(n.k, acc);
                          free_vars_into(n.val, acc);
                        },
                        [&](const AppVWKN& n) {
                          free_vars_into(n.v, acc);
                          free_vars_into(n.w, acc);
                          free_vars_into(n.k, acc);
                        },
                        [&](const KAppN& n) {
                          acc.insert(covariable_k());
                          free_vars_into(n.val, acc);
                        },
                        [&](const ValVarN& n) { acc.insert(n.name); },
                        [&](const ValLamN& n) { bound(n.binder, n.body); },
                        [&](const LamKN& n) { bound(covariable_k(), n.body); }},
             t->v);
}

inline NameSet free_vars(const C& t) {
  NameSet s;
  free_vars_into(t, s);
  return s;
}

inline void all_names_into(const C& t, NameSet& acc) {
  std::visit(overloaded{[&](const KLamN& n) {
                          acc.insert(n.binder);
                          all_names_into(n.body, acc);
                        },
                        [&](const KVarN&) {},
                        [&](const AppKN& n) {
                          all_names_into(n.k, acc);
                          all_names_into(n.val, acc);
                        },
                        [&](const AppVWKN& n) {
                          all_names_into(n.v, acc);
                          all_names_into(n.w, acc);
                          all_names_into(n.k, acc);
                        },
                        [&](const KAppN& n) { all_names_into(n.val, acc); },
                        [&](const ValVarN& n) { acc.insert(n.name); },
                        [&](const ValLamN& n) {
                          acc.insert(n.binder);
                          all_names_into(n.body, acc);
                        },
                        [&](const LamKN& n) { all_names_into(n.body, acc); }},
             t->v);
}

inline NameSet all_names(const C& t) {
  NameSet s;
  all_names_into(t, s);
  return s;
}

// substitution of a value for an ordinary variable
inline C subst_value(const C& v, const Name& x, const C& t) {
  if (x == covariable_k()) fail(ErrKind::Contract, "the covariable is not an ordinary variable");
  auto under = [&](const Name& b, const C& body) -> std::pair<Name, C> {
    if (free_vars(v).count(b)) {
      NameSet avoid = all_names(body);
      all_names_into(v, avoid);
      avoid.insert(x);
      Name b2 = fresh_name(b.base, avoid);
      return {b2, subst_value(cvar(b2), b, body)};
    }
    return {b, body};
  };
  return std::visit(
      overloaded{[&](const KLamN& n) {
                   if (n.binder == x) return t;
                   auto [b, body] = under(n.binder, n.body);
                   return klam(b, subst_value(v, x, body));
                 },
                 [&](const KVarN&) { return t; },
                 [&](const AppKN& n) {
                   return appk(subst_value(v, x, n.k), subst_value(v, x, n.val));
                 },
                 [&](const AppVWKN& n) {
                   return appvwk(subst_value(v, x, n.v), subst_value(v, x, n.w),
                                 subst_value(v, x, n.k));
                 },
                 [&](const KAppN& n) { return kapp(subst_value(v, x, n.val)); },
                 [&](const ValVarN& n) { return n.name == x ? v : t; },
                 [&](const ValLamN& n) {
                   if (n.binder == x) return t;
                   auto [b, body] = under(n.binder, n.body);
                   return clam(b, subst_value(v, x, body));
                 },
                 [&](const LamKN& n) { return lamk(subst_value(v, x, n.body)); }},
      t->v);
}

// [K/k]t: substitute a continuation for the covariable; stops at \k binders
inline C subst_cont(const C& knew, const C& t) {
  auto under = [&](const Name& b, const C& body) -> std::pair<Name, C> {
    if (free_vars(knew).count(b)) {
      NameSet avoid = all_names(body);
      all_names_into(knew, avoid);
      Name b2 = fresh_name(b.base, avoid);
      return {b2, subst_value(cvar(b2), b, body)};
    }
    return {b, body};
  };
  return std::visit(
      overloaded{[&](const KLamN& n) {
                   auto [b, body] = under(n.binder, n.body);
                   return klam(b, subst_cont(knew, body));
                 },
                 [&](const KVarN&) { return knew; },
                 [&](const AppKN& n) { return appk(subst_cont(knew, n.k), n.val); },
                 [&](const AppVWKN& n) { return appvwk(n.v, n.w, subst_cont(knew, n.k)); },
                 [&](const KAppN& n) { return appk(knew, n.val); },
                 [&](const ValVarN&) { return t; },
                 [&](const ValLamN&) { return t; },
                 [&](const LamKN&) { return t; }},
      t->v);
}

inline void canon_key_into(const C& t, std::vector<std::pair<Name, int>>& env, int depth,
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
  auto under = [&](const Name& b, const C& body) {
    env.emplace_back(b, depth);
    canon_key_into(body, env, depth + 1, out);
    env.pop_back();
  };
  std::visit(overloaded{[&](const KLamN& n) {
                          out += 'K';
                          under(n.binder, n.body);
                        },
                        [&](const KVarN&) { out += 'k'; },
                        [&](const AppKN& n) {
                          out += 'a';
                          canon_key_into(n.k, env, depth, out);
                          canon_key_into(n.val, env, depth, out);
                        },
                        [&](const AppVWKN& n) {
                          out += 'w';
                          canon_key_into(n.v, env, depth, out);
                          canon_key_into(n.w, env, depth, out);
                          canon_key_into(n.k, env, depth, out);
                        },
                        [&](const KAppN& n) {
                          out += 'j';
                          canon_key_into(n.val, env, depth, out);
                        },
                        [&](const ValVarN& n) {
                          out += 'v';
                          emit_name(n.name);
                        },
                        [&](const ValLamN& n) {
                          out += 'L';
                          under(n.binder, n.body);
                        },
                        [&](const LamKN& n) {
                          out += 'T';
                          canon_key_into(n.body, env, depth, out);
                        }},
             t->v);
}

inline std::string canon_key(const C& t) {
  std::string s;
  s.reserve(node_count(t) * 3);
  std::vector<std::pair<Name, int>> env;
  canon_key_into(t, env, 0, s);
  return s;
}

inline bool alpha_eq(const C& a, const C& b) {
  return a.get() == b.get() || canon_key(a) == canon_key(b);
}

inline std::vector<C> children(const C& t) {
  return std::visit(overloaded{[](const KLamN& n) { return std::vector<C>{n.body}; },
                               [](const KVarN&) { return std::vector<C>{}; },
                               [](const AppKN& n) { return std::vector<C>{n.k, n.val}; },
                               [](const AppVWKN& n) { return std::vector<C>{n.v, n.w, n.k}; },
                               [](const KAppN& n) { return std::vector<C>{n.val}; },
                               [](const ValVarN&) { return std::vector<C>{}; },
                               [](const ValLamN& n) { return std::vector<C>{n.body}; },
                               [](const LamKN& n) { return std::vector<C>{n.body}; }},
                    t->v);
}

inline C with_child(const C& t, int i, const C& c) {
  return std::visit(
      overloaded{[&](const KLamN& n) { return klam(n.binder, c); },
                 [&](const KVarN&) -> C { fail(ErrKind::Contract, "no child"); },
                 [&](const AppKN& n) { return i == 0 ? appk(c, n.val) : appk(n.k, c); },
                 [&](const AppVWKN& n) {
                   if (i == 0) return appvwk(c, n.w, n.k);
                   if (i == 1) return appvwk(n.v, c, n.k);
                   return appvwk(n.v, n.w, c);
                 },
                 [&](const KAppN&) { return kapp(c); },
                 [&](const ValVarN&) -> C { fail(ErrKind::Contract, "no child"); },
                 [&](const ValLamN& n) { return clam(n.binder, c); },
                 [&](const LamKN&) { return lamk(c); }},
      t->v);
}

inline C subterm_at(const C& t, const Path& p, size_t from = 0) {
  if (from == p.size()) return t;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return subterm_at(cs[static_cast<size_t>(i)], p, from + 1);
}

inline C replace_at(const C& t, const Path& p, const C& sub, size_t from = 0) {
  if (from == p.size()) return sub;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return with_child(t, i, replace_at(cs[static_cast<size_t>(i)], p, sub, from + 1));
}

inline void positions(const C& t, const std::function<void(const Path&, const C&)>& fn) {
  Path p;
  std::function<void(const C&)> go = [&](const C& u) {
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
// well-formedness: mode and linearity of the covariable
// ---------------------------------------------------------------------------

inline size_t free_k_count(const C& t) {
  return std::visit(overloaded{[](const KLamN& n) { return free_k_count(n.body); },
                               [](const KVarN&) -> size_t { return 1; },
                               [](const AppKN& n) {
                                 return free_k_count(n.k) + free_k_count(n.val);
                               },
                               [](const AppVWKN& n) {
                                 return free_k_count(n.v) + free_k_count(n.w) + free_k_count(n.k);
                               },
                               [](const KAppN& n) { return 1 + free_k_count(n.val); },
                               [](const ValVarN&) -> size_t { return 0; },
                               [](const ValLamN& n) { return free_k_count(n.body); },
                               [](const LamKN&) -> size_t { return 0; }},
                    t->v);
}

inline bool mode_ok(const C& t, Mode mode) {
  bool ok = true;
  positions(t, [&](const Path&, const C& u) {
    if (mode == Mode::RCPS && as_kapp(u)) ok = false;
    if (mode == Mode::CPS && as_kvar(u)) ok = false;
  });
  return ok;
}

// every command and continuation owns exactly one free occurrence of k
inline bool linear_k(const C& t) {
  bool ok = true;
  positions(t, [&](const Path&, const C& u) {
    if ((is_command(u) || is_continuation(u)) && free_k_count(u) != 1) ok = false;
  });
  return ok;
}

inline bool well_formed(const C& t, Mode mode) { return mode_ok(t, mode) && linear_k(t); }

inline void require_well_formed(const C& t, Mode mode) {
  if (!mode_ok(t, mode)) fail(ErrKind::ModeViolation, mode_name(mode));
  if (!linear_k(t)) fail(ErrKind::LinearityViolation, "covariable not linear");
}

// ---------------------------------------------------------------------------
// contexts and structural substitution
// ---------------------------------------------------------------------------

struct ContextCPS {
  bool k_hole;  // K[_] when true, [_]WK otherwise
  C k;
  C w;  // unused for K[_]

  static ContextCPS khole(C k) { return ContextCPS{true, std::move(k), nullptr}; }
  static ContextCPS holewk(C w, C k) { return ContextCPS{false, std::move(k), std::move(w)}; }
};

inline C fill_cps(const ContextCPS& c, const C& v) {
  return c.k_hole ? appk(c.k, v) : appvwk(v, c.w, c.k);
}

// K_C := \z.C[z]
inline C reify_context(const ContextCPS& c) {
  NameSet avoid = all_names(c.k);
  if (c.w) all_names_into(c.w, avoid);
  Name z = fresh_name("z", avoid);
  return klam(z, fill_cps(c, cvar(z)));
}

// [C/k]cmd: the unique kV occurrence becomes C[V]
inline C struct_subst(const ContextCPS& c, const C& cmd) {
  return std::visit(
      overloaded{[&](const KLamN& n) -> C {
                   NameSet cfv = free_vars(c.k);
                   if (c.w) free_vars_into(c.w, cfv);
                   Name b = n.binder;
                   C body = n.body;
                   if (cfv.count(b)) {
                     NameSet avoid = all_names(n.body);
                     avoid.insert(cfv.begin(), cfv.end());
                     Name b2 = fresh_name(b.base, avoid);
                     body = subst_value(cvar(b2), b, body);
                     b = b2;
                   }
                   return klam(b, struct_subst(c, body));
                 },
                 [&](const KVarN&) -> C { fail(ErrKind::ModeViolation, "expected the modified system"); },
                 [&](const AppKN& n) -> C { return appk(struct_subst(c, n.k), n.val); },
                 [&](const AppVWKN& n) -> C { return appvwk(n.v, n.w, struct_subst(c, n.k)); },
                 [&](const KAppN& n) -> C { return fill_cps(c, n.val); },
                 [&](const ValVarN&) -> C { return cmd; },
                 [&](const ValLamN&) -> C { return cmd; },
                 [&](const LamKN&) -> C { return cmd; }},
      cmd->v);
}

// ---------------------------------------------------------------------------
// reduction
// ---------------------------------------------------------------------------

enum class RuleCps { SigmaV, BetaV, EtaK, Bv };

inline const char* rule_cps_name(RuleCps r) {
  switch (r) {
    case RuleCps::SigmaV: return "sigma_v";
    case RuleCps::BetaV: return "beta_v";
    case RuleCps::EtaK: return "eta_k";
    case RuleCps::Bv: return "B_v";
  }
  return "?";
}

inline RuleId rule_id_cps(RuleCps r, Mode m) { return RuleId{mode_name(m), rule_cps_name(r)}; }

inline const std::vector<RuleCps>& rules_for_mode(Mode m) {
  static const std::vector<RuleCps> rcps = {RuleCps::SigmaV, RuleCps::BetaV, RuleCps::EtaK};
  static const std::vector<RuleCps> cps = {RuleCps::SigmaV, RuleCps::Bv};
  return m == Mode::RCPS ? rcps : cps;
}

inline std::optional<C> contract_cps(const C& t, RuleCps r, Mode mode) {
  auto enabled = rules_for_mode(mode);
  if (std::find(enabled.begin(), enabled.end(), r) == enabled.end())
    fail(ErrKind::ModeViolation, std::string(rule_cps_name(r)) + " in " + mode_name(mode));
  switch (r) {
    case RuleCps::SigmaV: {
      auto* a = as_appk(t);
      if (!a) return std::nullopt;
      auto* f = as_klam(a->k);
      if (!f) return std::nullopt;
      return subst_value(a->val, f->binder, f->body);
    }
    case RuleCps::BetaV: {
      auto* a = as_appvwk(t);
      if (!a) return std::nullopt;
      auto* f = as_clam(a->v);
      if (!f) return std::nullopt;
      auto* lk = as_lamk(f->body);
      if (!lk) return std::nullopt;
      return subst_cont(a->k, subst_value(a->w, f->binder, lk->body));
    }
    case RuleCps::EtaK: {
      auto* f = as_klam(t);
      if (!f) return std::nullopt;
      auto* a = as_appk(f->body);
      if (!a) return std::nullopt;
      auto* x = as_cvar(a->val);
      if (!x || x->name != f->binder) return std::nullopt;
      if (free_vars(a->k).count(f->binder)) return std::nullopt;
      return a->k;
    }
    case RuleCps::Bv: {
      auto* a = as_appvwk(t);
      if (!a) return std::nullopt;
      auto* f = as_clam(a->v);
      if (!f) return std::nullopt;
      auto* lk = as_lamk(f->body);
      if (!lk) return std::nullopt;
      Name x = f->binder;
      C body = lk->body;
      if (free_vars(a->k).count(x)) {
        NameSet avoid = all_names(t);
        Name x2 = fresh_name(x.base, avoid);
        body = subst_value(cvar(x2), x, body);
        x = x2;
      }
      return appk(klam(x, subst_cont(a->k, body)), a->w);
    }
  }
  return std::nullopt;
}

struct RedexCps {
  RuleCps rule;
  Path path;
};

inline std::vector<RedexCps> redexes_cps(const C& t, Mode mode) {
  std::vector<RedexCps> out;
  positions(t, [&](const Path& p, const C& u) {
    for (RuleCps r : rules_for_mode(mode))
      if (contract_cps(u, r, mode)) out.push_back(RedexCps{r, p});
  });
  return out;
}

inline C step_cps(const C& t, RuleCps r, const Path& p, Mode mode) {
  C sub = subterm_at(t, p);
  auto red = contract_cps(sub, r, mode);
  if (!red) fail(ErrKind::NoRedex, std::string(rule_cps_name(r)) + " at " + show_path(p));
  return replace_at(t, p, *red);
}

// ---------------------------------------------------------------------------
// typing
// ---------------------------------------------------------------------------

// Sequents carry the covariable's type through kA, with k : neg kA.
inline Type infer_cps_value(TypeSolver& s, const TypingContext& g, const C& t);

inline void check_cps_command(TypeSolver& s, const TypingContext& g, const Type& kA, const C& t);

// returns the type A' such that K : neg A'
inline Type infer_cps_cont(TypeSolver& s, const TypingContext& g, const Type& kA, const C& t) {
  if (auto* f = as_klam(t)) {
    Type a = s.fresh();
    check_cps_command(s, g.extended(f->binder, a), kA, f->body);
    return a;
  }
  if (as_kvar(t)) return kA;
  fail(ErrKind::Contract, "not a continuation");
}

inline void check_cps_command(TypeSolver& s, const TypingContext& g, const Type& kA, const C& t) {
  if (auto* a = as_appk(t)) {
    Type av = infer_cps_value(s, g, a->val);
    Type ak = infer_cps_cont(s, g, kA, a->k);
    if (!s.unify(av, ak)) fail(ErrKind::TypeMismatch, "value against continuation");
    return;
  }
  if (auto* a = as_appvwk(t)) {
    Type tv = infer_cps_value(s, g, a->v);
    Type tw = infer_cps_value(s, g, a->w);
    Type aprime = infer_cps_cont(s, g, kA, a->k);
    if (!s.unify(tv, t_arrow(tw, t_neg(t_neg(aprime)))))
      fail(ErrKind::TypeMismatch, "triple command head");
    return;
  }
  if (auto* a = as_kapp(t)) {
    Type tv = infer_cps_value(s, g, a->val);
    if (!s.unify(tv, kA)) fail(ErrKind::TypeMismatch, "value against the covariable");
    return;
  }
  fail(ErrKind::Contract, "not a command");
}

inline Type infer_cps_term(TypeSolver& s, const TypingContext& g, const C& t) {
  auto* lk = as_lamk(t);
  if (!lk) fail(ErrKind::Contract, "not a term");
  Type a = s.fresh();
  check_cps_command(s, g, a, lk->body);
  return t_neg(t_neg(a));
}

inline Type infer_cps_value(TypeSolver& s, const TypingContext& g, const C& t) {
  if (auto* x = as_cvar(t)) {
    auto ty = g.lookup(x->name);
    if (!ty) fail(ErrKind::UnboundVariable, show_name(x->name));
    return *ty;
  }
  if (auto* l = as_clam(t)) {
    Type a = s.fresh();
    Type b = infer_cps_term(s, g.extended(l->binder, a), l->body);
    return t_arrow(a, b);
  }
  fail(ErrKind::Contract, "not a value");
}

// the two type classes of the target
inline bool is_class_a(const Type& t);
inline bool is_class_b(const Type& t);

inline bool is_class_a(const Type& t) {
  if (as_atom(t)) return true;
  if (as_tvar(t)) return true;  // free choice, instantiable inside the class
  if (auto* ar = as_arrow(t)) return is_class_a(ar->dom) && is_class_b(ar->cod);
  return false;
}

inline bool is_class_b(const Type& t) {
  if (as_tvar(t)) return true;
  auto* outer = as_arrow(t);
  if (!outer || !is_bot(outer->cod)) return false;
  auto* inner = as_arrow(outer->dom);
  if (!inner || !is_bot(inner->cod)) return false;
  return is_class_a(inner->dom);
}

struct CpsCheckResult {
  bool ok = false;
  std::string error;
};

// Full judgment check for a command under Gamma with k : neg kA, including
// linearity and the class discipline on the solved types.
inline CpsCheckResult typecheck_cps_command(const TypingContext& g, const Type& kA, const C& t,
                                            Mode mode) {
  CpsCheckResult res;
  try {
    if (!mode_ok(t, mode)) fail(ErrKind::ModeViolation, mode_name(mode));
    if (!linear_k(t)) fail(ErrKind::LinearityViolation, "covariable not linear");
    TypeSolver s;
    check_cps_command(s, g, kA, t);
    for (auto& [n, ty] : g.declarations())
      if (!is_class_a(s.zonk(ty)))
        fail(ErrKind::ClassViolation, show_name(n) + " : " + show_type(s.zonk(ty)));
    if (!is_class_a(s.zonk(kA))) fail(ErrKind::ClassViolation, "covariable type");
    res.ok = true;
  } catch (const Error& e) {
    res.error = e.what();
  }
  return res;
}

inline CpsCheckResult typecheck_cps_term(const TypingContext& g, const C& t, const Type& expected) {
  CpsCheckResult res;
  try {
    if (!linear_k(t)) fail(ErrKind::LinearityViolation, "covariable not linear");
    TypeSolver s;
    Type ty = infer_cps_term(s, g, t);
    if (!s.unify(ty, expected)) fail(ErrKind::TypeMismatch, "term type");
    for (auto& [n, tt] : g.declarations())
      if (!is_class_a(s.zonk(tt)))
        fail(ErrKind::ClassViolation, show_name(n) + " : " + show_type(s.zonk(tt)));
    if (!is_class_b(s.zonk(ty))) fail(ErrKind::ClassViolation, "term type class");
    res.ok = true;
  } catch (const Error& e) {
    res.error = e.what();
  }
  return res;
}

// Gamma | A |- C : _|_ given k : neg kA
inline CpsCheckResult typecheck_cps_context(const TypingContext& g, const Type& kA,
                                            const ContextCPS& c, const Type& hole) {
  CpsCheckResult res;
  try {
    TypeSolver s;
    if (c.k_hole) {
      Type aprime = infer_cps_cont(s, g, kA, c.k);
      if (!s.unify(hole, aprime)) fail(ErrKind::TypeMismatch, "hole against continuation");
    } else {
      Type tw = infer_cps_value(s, g, c.w);
      Type aprime = infer_cps_cont(s, g, kA, c.k);
      if (!s.unify(hole, t_arrow(tw, t_neg(t_neg(aprime)))))
        fail(ErrKind::TypeMismatch, "hole against argument and continuation");
    }
    res.ok = true;
  } catch (const Error& e) {
    res.error = e.what();
  }
  return res;
}

// ---------------------------------------------------------------------------
// type translation: A-dagger and the double negation A-bar
// ---------------------------------------------------------------------------

inline Type type_dagger(const Type& a);

inline Type type_bar(const Type& a) { return t_neg(t_neg(type_dagger(a))); }

inline Type type_dagger(const Type& a) {
  if (as_atom(a)) return a;
  if (auto* ar = as_arrow(a)) return t_arrow(type_dagger(ar->dom), type_bar(ar->cod));
  fail(ErrKind::Contract, "source types have no bottom");
}

inline TypingContext context_dagger(const TypingContext& g) {
  TypingContext out;
  for (auto& [n, t] : g.declarations()) out.declare(n, type_dagger(t));
  return out;
}

// ---------------------------------------------------------------------------
// the translation from the source calculus
// ---------------------------------------------------------------------------

enum class CpsVariant { Underlined, Modified };

inline Mode variant_mode(CpsVariant v) {
  return v == CpsVariant::Underlined ? Mode::RCPS : Mode::CPS;
}

inline C translate_value_cps(const lc::TermC& v, CpsVariant variant, FreshPool& pool);

// (M : K)
inline C translate_colon_cps(const lc::TermC& m, const C& k, CpsVariant variant, FreshPool& pool) {
  using namespace lc;
  if (is_value(m)) return appk(k, translate_value_cps(m, variant, pool));
  if (auto* a = as_app(m)) {
    if (!is_value(a->fun)) {
      Name mm = pool.next("m");
      C inner = translate_colon_cps(app(var(mm), a->arg), k, variant, pool);
      return translate_colon_cps(a->fun, klam(mm, inner), variant, pool);
    }
    if (!is_value(a->arg)) {
      Name nn = pool.next("n");
      C inner = translate_colon_cps(app(a->fun, var(nn)), k, variant, pool);
      return translate_colon_cps(a->arg, klam(nn, inner), variant, pool);
    }
    return appvwk(translate_value_cps(a->fun, variant, pool),
                  translate_value_cps(a->arg, variant, pool), k);
  }
  auto* l = as_let(m);
  Name y = l->binder;
  lc::TermC body = l->body;
  if (free_vars(k).count(y)) {
    Name y2 = pool.next(y.base);
    body = lc::subst(lc::var(y2), y, body);
    y = y2;
  }
  return translate_colon_cps(l->bound, klam(y, translate_colon_cps(body, k, variant, pool)),
                             variant, pool);
}

// M-star: the top-level command.  The classical variant passes k itself; the
// modified one passes its eta-expansion so that k only ever occurs applied.
inline C translate_star(const lc::TermC& m, CpsVariant variant, FreshPool& pool) {
  if (variant == CpsVariant::Underlined) return translate_colon_cps(m, kvar(), variant, pool);
  Name x = pool.next("x");
  return translate_colon_cps(m, klam(x, kapp(cvar(x))), variant, pool);
}

inline C translate_value_cps(const lc::TermC& v, CpsVariant variant, FreshPool& pool) {
  using namespace lc;
  if (auto* x = as_var(v)) return cvar(x->name);
  if (auto* l = as_lam(v)) return clam(l->binder, lamk(translate_star(l->body, variant, pool)));
  fail(ErrKind::Contract, "not a value");
}

inline C cps_translate_star(const lc::TermC& m, CpsVariant variant = CpsVariant::Modified) {
  FreshPool pool(lc::all_names(m));
  return translate_star(m, variant, pool);
}

// M-bar = \k.M-star
inline C cps_translate_bar(const lc::TermC& m, CpsVariant variant = CpsVariant::Modified) {
  return lamk(cps_translate_star(m, variant));
}

inline C cps_translate_value(const lc::TermC& v, CpsVariant variant = CpsVariant::Modified) {
  FreshPool pool(lc::all_names(v));
  return translate_value_cps(v, variant, pool);
}

// ---------------------------------------------------------------------------
// the negative translation from the sub-kernel, and its inverse
// ---------------------------------------------------------------------------

// Test hook: CollapseBindCut deliberately beta-reduces the binding-context
// clause instead of building the application, which silently breaks the
// one-to-one correspondence.
enum class NegCorruption { None, CollapseBindCut };

inline C negative_value(const vfs::V& v, NegCorruption corrupt = NegCorruption::None);

inline C negative_command(const vfs::V& m, NegCorruption corrupt = NegCorruption::None) {
  using namespace vfs;
  if (auto* r = as_vret(m)) return kapp(negative_value(r->val, corrupt));
  auto* c = as_vcut(m);
  if (!c) fail(ErrKind::Contract, "not a term");
  if (auto* b = as_vbind(c->ctx)) {
    C body = negative_command(b->body, corrupt);
    C val = negative_value(c->val, corrupt);
    if (corrupt == NegCorruption::CollapseBindCut) return subst_value(val, b->binder, body);
    return appk(klam(b->binder, body), val);
  }
  auto* g = as_vgapp(c->ctx);
  return appvwk(negative_value(c->val, corrupt), negative_value(g->arg, corrupt),
                klam(g->binder, negative_command(g->body, corrupt)));
}

inline C negative_value(const vfs::V& v, NegCorruption corrupt) {
  using namespace vfs;
  if (auto* x = as_vvar(v)) return cvar(x->name);
  if (auto* l = as_vlam(v)) return clam(l->binder, lamk(negative_command(l->body, corrupt)));
  fail(ErrKind::Contract, "not a value");
}

// M-minus = \k.M-wr
inline C negative_term(const vfs::V& m, NegCorruption corrupt = NegCorruption::None) {
  return lamk(negative_command(m, corrupt));
}

// c-wr: formal contexts become contexts of the target
inline ContextCPS negative_context(const vfs::V& c) {
  using namespace vfs;
  if (auto* b = as_vbind(c)) return ContextCPS::khole(klam(b->binder, negative_command(b->body)));
  if (auto* g = as_vgapp(c))
    return ContextCPS::holewk(negative_value(g->arg),
                              klam(g->binder, negative_command(g->body)));
  fail(ErrKind::Contract, "not a formal context");
}

// type translation of the negative stage (same shape as the dagger one)
inline Type type_tilde(const Type& a) { return type_dagger(a); }
inline Type type_minus(const Type& a) { return t_neg(t_neg(type_tilde(a))); }

inline vfs::V inverse_value(const C& v);

inline vfs::V inverse_command(const C& m) {
  if (auto* a = as_kapp(m)) return vfs::vret(inverse_value(a->val));
  if (auto* a = as_appk(m)) {
    auto* f = as_klam(a->k);
    if (!f) fail(ErrKind::MalformedCPS, "command with a bare continuation");
    return vfs::vcut(inverse_value(a->val), vfs::vbind(f->binder, inverse_command(f->body)));
  }
  if (auto* a = as_appvwk(m)) {
    auto* f = as_klam(a->k);
    if (!f) fail(ErrKind::MalformedCPS, "command with a bare continuation");
    return vfs::vcut(inverse_value(a->v),
                     vfs::vgapp(inverse_value(a->w), f->binder, inverse_command(f->body)));
  }
  fail(ErrKind::MalformedCPS, "not a command");
}

inline vfs::V inverse_value(const C& v) {
  if (auto* x = as_cvar(v)) return vfs::vvar(x->name);
  if (auto* l = as_clam(v)) {
    auto* lk = as_lamk(l->body);
    if (!lk) fail(ErrKind::MalformedCPS, "value body is not a term");
    return vfs::vlam(l->binder, inverse_command(lk->body));
  }
  fail(ErrKind::MalformedCPS, "not a value");
}

inline vfs::V inverse_term(const C& t) {
  auto* lk = as_lamk(t);
  if (!lk) fail(ErrKind::MalformedCPS, "not a term");
  return inverse_command(lk->body);
}

inline vfs::V inverse_negative(const C& t) {
  require_well_formed(t, Mode::CPS);
  if (is_cps_term(t)) return inverse_term(t);
  return inverse_command(t);
}

// ---------------------------------------------------------------------------
// decomposition of the whole-term translation through the sub-kernel
// ---------------------------------------------------------------------------

// Checks, for one source term, that translating through the sub-kernel and
// then negatively agrees on the nose with the direct translation.
inline std::vector<std::string> decomposition_failures(const lc::TermC& m,
                                                       const vfs::V* ctx_body = nullptr,
                                                       const Name* ctx_binder = nullptr) {
  std::vector<std::string> bad;
  // values: (V-circ)~ = V-dagger, on every value subterm
  lc::positions(m, [&](const Path&, const lc::TermC& u) {
    if (!lc::is_value(u)) return;
    FreshPool pool(lc::all_names(u));
    C lhs = negative_value(vfs::translate_value(u, pool));
    C rhs = cps_translate_value(u, CpsVariant::Modified);
    if (!alpha_eq(lhs, rhs)) bad.push_back("value clause differs");
  });
  // (M ; x.N)-wr = (M : \x.N-wr)
  {
    NameSet used = lc::all_names(m);
    Name x;
    vfs::V n;
    if (ctx_body && ctx_binder) {
      x = *ctx_binder;
      n = *ctx_body;
      vfs::all_names_into(n, used);
      used.insert(x);
    } else {
      x = fresh_name("x", used);
      used.insert(x);
      n = vfs::vret(vfs::vvar(x));
    }
    FreshPool pool_l(used), pool_r(used);
    C lhs = negative_command(vfs::translate_colon(m, x, n, pool_l));
    C rhs = translate_colon_cps(m, klam(x, negative_command(n)), CpsVariant::Modified, pool_r);
    if (!alpha_eq(lhs, rhs)) bad.push_back("context clause differs");
  }
  // (M-bullet)-wr = M-star
  {
    C lhs = negative_command(vfs::vfs_translate(m));
    C rhs = cps_translate_star(m, CpsVariant::Modified);
    if (!alpha_eq(lhs, rhs)) bad.push_back("command clause differs");
  }
  // (M-bullet)-minus = M-bar
  {
    C lhs = negative_term(vfs::vfs_translate(m));
    C rhs = cps_translate_bar(m, CpsVariant::Modified);
    if (!alpha_eq(lhs, rhs)) bad.push_back("term clause differs");
  }
  return bad;
}

}  // namespace cbvkit::cps

#endif  // CBVKIT_CPS_HPP
