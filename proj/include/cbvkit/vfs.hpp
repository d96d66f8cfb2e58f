#ifndef CBVKIT_VFS_HPP
#define CBVKIT_VFS_HPP

#include <functional>

#include "cbvkit/core.hpp"
#include "cbvkit/lambda_c.hpp"
#include "cbvkit/ljq.hpp"
#include "cbvkit/typing.hpp"

// The value-filling sub-kernel of the simplified sequent calculus: terms cut
// a value against a formal context, which is either a binding x.M or a
// generalized argument (W, x.M).  Also the translation into it from the
// source calculus.
namespace cbvkit::vfs {

struct VNode;
using V = std::shared_ptr<const VNode>;

struct VVar {
  Name name;
};
struct VLam {
  Name binder;
  V body;
};
struct VRet {
  V val;
};
struct VCut {  // value cut against a formal context
  V val;
  V ctx;
};
struct VBind {  // formal context x.M
  Name binder;
  V body;
};
struct VGApp {  // formal context (W, x.M)
  V arg;
  Name binder;
  V body;
};

struct VNode {
  std::variant<VVar, VLam, VRet, VCut, VBind, VGApp> v;
};

inline V vvar(Name n) { return std::make_shared<VNode>(VNode{VVar{std::move(n)}}); }
inline V vlam(Name x, V m) { return std::make_shared<VNode>(VNode{VLam{std::move(x), std::move(m)}}); }
inline V vret(V val) { return std::make_shared<VNode>(VNode{VRet{std::move(val)}}); }
inline V vcut(V val, V ctx) {
  return std::make_shared<VNode>(VNode{VCut{std::move(val), std::move(ctx)}});
}
inline V vbind(Name x, V m) {
  return std::make_shared<VNode>(VNode{VBind{std::move(x), std::move(m)}});
}
inline V vgapp(V w, Name x, V m) {
  return std::make_shared<VNode>(VNode{VGApp{std::move(w), std::move(x), std::move(m)}});
}

inline const VVar* as_vvar(const V& t) { return std::get_if<VVar>(&t->v); }
inline const VLam* as_vlam(const V& t) { return std::get_if<VLam>(&t->v); }
inline const VRet* as_vret(const V& t) { return std::get_if<VRet>(&t->v); }
inline const VCut* as_vcut(const V& t) { return std::get_if<VCut>(&t->v); }
inline const VBind* as_vbind(const V& t) { return std::get_if<VBind>(&t->v); }
inline const VGApp* as_vgapp(const V& t) { return std::get_if<VGApp>(&t->v); }

inline bool is_vfs_value(const V& t);
inline bool is_vfs_term(const V& t);
inline bool is_vfs_ctx(const V& t);

inline bool is_vfs_value(const V& t) {
  if (as_vvar(t)) return true;
  if (auto* l = as_vlam(t)) return is_vfs_term(l->body);
  return false;
}
inline bool is_vfs_term(const V& t) {
  if (auto* r = as_vret(t)) return is_vfs_value(r->val);
  if (auto* c = as_vcut(t)) return is_vfs_value(c->val) && is_vfs_ctx(c->ctx);
  return false;
}
inline bool is_vfs_ctx(const V& t) {
  if (auto* b = as_vbind(t)) return is_vfs_term(b->body);
  if (auto* g = as_vgapp(t)) return is_vfs_value(g->arg) && is_vfs_term(g->body);
  return false;
}

// ---------------------------------------------------------------------------
// structural helpers
// ---------------------------------------------------------------------------

inline size_t node_count(const V& t) {
  return std::visit(overloaded{[](const VVar&) -> size_t { return 1; },
                               [](const VLam& l) { return 1 + node_count(l.body); },
                               [](const VRet& r) { return 1 + node_count(r.val); },
                               [](const VCut& c) { return 1 + node_count(c.val) + node_count(c.ctx); },
                               [](const VBind& b) { return 1 + node_count(b.body); },
                               [](const VGApp& g) {
                                 return 1 + node_count(g.arg) + node_count(g.body);
                               }},
                    t->v);
}

inline void free_vars_into(const V& t, NameSet& acc) {
  auto bound = [&acc](const Name& b, const V& body) {
    NameSet inner;
    free_vars_into(body, inner);
    inner.erase(b);
    acc.insert(inner.begin(), inner.end());
  };
  std::visit(overloaded{[&](const VVar& x) { acc.insert(x.name); },
                        [&](const VLam& l) { bound(l.binder, l.body); },
                        [&](const VRet& r) { free_vars_into(r.val, acc); },
                        [&](const VCut& c) {
                          free_vars_into(c.val, acc);
                          free_vars_into(c.ctx, acc);
                        },
                        [&](const VBind& b) { bound(b.binder, b.body); },
                        [&](const VGApp& g) {
                          free_vars_into(g.arg, acc);
                          bound(g.binder, g.body);
                        }},
             t->v);
}

inline NameSet free_vars(const V& t) {
  NameSet s;
  free_vars_into(t, s);
  return s;
}

inline void all_names_into(const V& t, NameSet& acc) {
  std::visit(overloaded{[&](const VVar& x) { acc.insert(x.name); },
                        [&](const VLam& l) {
                          acc.insert(l.binder);
                          all_names_into(l.body, acc);
                        },
                        [&](const VRet& r) { all_names_into(r.val, acc); },
                        [&](const VCut& c) {
                          all_names_into(c.val, acc);
                          all_names_into(c.ctx, acc);
                        },
                        [&](const VBind& b) {
                          acc.insert(b.binder);
                          all_names_into(b.body, acc);
                        },
                        [&](const VGApp& g) {
                          acc.insert(g.binder);
                          all_names_into(g.arg, acc);
                          all_names_into(g.body, acc);
                        }},
             t->v);
}

inline NameSet all_names(const V& t) {
  NameSet s;
  all_names_into(t, s);
  return s;
}

// plain capture-avoiding substitution of a value for a variable
inline V subst(const V& v, const Name& x, const V& t) {
  auto under = [&](const Name& b, const V& body) -> std::pair<Name, V> {
    if (free_vars(v).count(b)) {
      NameSet avoid = all_names(body);
      all_names_into(v, avoid);
      avoid.insert(x);
      Name b2 = fresh_name(b.base, avoid);
      return {b2, subst(vvar(b2), b, body)};
    }
    return {b, body};
  };
  return std::visit(
      overloaded{[&](const VVar& y) { return y.name == x ? v : t; },
                 [&](const VLam& l) {
                   if (l.binder == x) return t;
                   auto [b, body] = under(l.binder, l.body);
                   return vlam(b, subst(v, x, body));
                 },
                 [&](const VRet& r) { return vret(subst(v, x, r.val)); },
                 [&](const VCut& c) { return vcut(subst(v, x, c.val), subst(v, x, c.ctx)); },
                 [&](const VBind& bnode) {
                   if (bnode.binder == x) return t;
                   auto [b, body] = under(bnode.binder, bnode.body);
                   return vbind(b, subst(v, x, body));
                 },
                 [&](const VGApp& g) {
                   V arg = subst(v, x, g.arg);
                   if (g.binder == x) return vgapp(arg, g.binder, g.body);
                   auto [b, body] = under(g.binder, g.body);
                   return vgapp(arg, b, subst(v, x, body));
                 }},
      t->v);
}

inline void canon_key_into(const V& t, std::vector<std::pair<Name, int>>& env, int depth,
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
  auto under = [&](const Name& b, const V& body) {
    env.emplace_back(b, depth);
    canon_key_into(body, env, depth + 1, out);
    env.pop_back();
  };
  std::visit(overloaded{[&](const VVar& x) {
                          out += 'v';
                          emit_name(x.name);
                        },
                        [&](const VLam& l) {
                          out += 'L';
                          under(l.binder, l.body);
                        },
                        [&](const VRet& r) {
                          out += 'R';
                          canon_key_into(r.val, env, depth, out);
                        },
                        [&](const VCut& c) {
                          out += 'C';
                          canon_key_into(c.val, env, depth, out);
                          canon_key_into(c.ctx, env, depth, out);
                        },
                        [&](const VBind& b) {
                          out += 'B';
                          under(b.binder, b.body);
                        },
                        [&](const VGApp& g) {
                          out += 'G';
                          canon_key_into(g.arg, env, depth, out);
                          under(g.binder, g.body);
                        }},
             t->v);
}

inline std::string canon_key(const V& t) {
  std::string s;
  s.reserve(node_count(t) * 3);
  std::vector<std::pair<Name, int>> env;
  canon_key_into(t, env, 0, s);
  return s;
}

inline bool alpha_eq(const V& a, const V& b) {
  return a.get() == b.get() || canon_key(a) == canon_key(b);
}

inline std::vector<V> children(const V& t) {
  return std::visit(overloaded{[](const VVar&) { return std::vector<V>{}; },
                               [](const VLam& l) { return std::vector<V>{l.body}; },
                               [](const VRet& r) { return std::vector<V>{r.val}; },
                               [](const VCut& c) { return std::vector<V>{c.val, c.ctx}; },
                               [](const VBind& b) { return std::vector<V>{b.body}; },
                               [](const VGApp& g) { return std::vector<V>{g.arg, g.body}; }},
                    t->v);
}

inline V with_child(const V& t, int i, const V& c) {
  return std::visit(overloaded{[&](const VVar&) -> V { fail(ErrKind::Contract, "no child"); },
                               [&](const VLam& l) { return vlam(l.binder, c); },
                               [&](const VRet&) { return vret(c); },
                               [&](const VCut& n) { return i == 0 ? vcut(c, n.ctx) : vcut(n.val, c); },
                               [&](const VBind& b) { return vbind(b.binder, c); },
                               [&](const VGApp& g) {
                                 return i == 0 ? vgapp(c, g.binder, g.body)
                                               : vgapp(g.arg, g.binder, c);
                               }},
                    t->v);
}

inline V subterm_at(const V& t, const Path& p, size_t from = 0) {
  if (from == p.size()) return t;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return subterm_at(cs[static_cast<size_t>(i)], p, from + 1);
}

inline V replace_at(const V& t, const Path& p, const V& sub, size_t from = 0) {
  if (from == p.size()) return sub;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return with_child(t, i, replace_at(cs[static_cast<size_t>(i)], p, sub, from + 1));
}

inline void positions(const V& t, const std::function<void(const Path&, const V&)>& fn) {
  Path p;
  std::function<void(const V&)> go = [&](const V& u) {
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
// cut composition: (M : c') and (c : c')
// ---------------------------------------------------------------------------

inline V colon_vfs(const V& m, const V& cprime);

inline V ctx_compose(const V& c, const V& cprime) {
  if (auto* b = as_vbind(c)) {
    Name x = b->binder;
    V body = b->body;
    if (free_vars(cprime).count(x)) {
      NameSet avoid = all_names(c);
      all_names_into(cprime, avoid);
      Name x2 = fresh_name(x.base, avoid);
      body = subst(vvar(x2), x, body);
      x = x2;
    }
    return vbind(x, colon_vfs(body, cprime));
  }
  if (auto* g = as_vgapp(c)) {
    Name x = g->binder;
    V body = g->body;
    if (free_vars(cprime).count(x)) {
      NameSet avoid = all_names(c);
      all_names_into(cprime, avoid);
      Name x2 = fresh_name(x.base, avoid);
      body = subst(vvar(x2), x, body);
      x = x2;
    }
    return vgapp(g->arg, x, colon_vfs(body, cprime));
  }
  fail(ErrKind::Contract, "ctx_compose expects a formal context");
}

inline V colon_vfs(const V& m, const V& cprime) {
  if (auto* r = as_vret(m)) return vcut(r->val, cprime);
  if (auto* c = as_vcut(m)) return vcut(c->val, ctx_compose(c->ctx, cprime));
  fail(ErrKind::Contract, "colon_vfs expects a term");
}

// ---------------------------------------------------------------------------
// reduction
// ---------------------------------------------------------------------------

enum class RuleVfs { Bv, SigmaV };

inline const char* rule_vfs_name(RuleVfs r) { return r == RuleVfs::Bv ? "B_v" : "sigma_v"; }

inline RuleId rule_id_vfs(RuleVfs r) { return RuleId{"vfs", rule_vfs_name(r)}; }

inline std::optional<V> contract_vfs(const V& t, RuleVfs r) {
  switch (r) {
    case RuleVfs::Bv: {
      auto* c = as_vcut(t);
      if (!c) return std::nullopt;
      auto* f = as_vlam(c->val);
      if (!f) return std::nullopt;
      auto* g = as_vgapp(c->ctx);
      if (!g) return std::nullopt;
      Name x = f->binder;
      V body = f->body;
      NameSet outside = free_vars(g->body);  // names visible to N
      free_vars_into(g->arg, outside);
      if (outside.count(x)) {
        NameSet avoid = all_names(t);
        Name x2 = fresh_name(x.base, avoid);
        body = subst(vvar(x2), x, body);
        x = x2;
      }
      return vcut(g->arg, vbind(x, colon_vfs(body, vbind(g->binder, g->body))));
    }
    case RuleVfs::SigmaV: {
      auto* c = as_vcut(t);
      if (!c) return std::nullopt;
      auto* b = as_vbind(c->ctx);
      if (!b) return std::nullopt;
      return subst(c->val, b->binder, b->body);
    }
  }
  return std::nullopt;
}

struct RedexVfs {
  RuleVfs rule;
  Path path;
};

inline std::vector<RedexVfs> redexes_vfs(const V& t) {
  std::vector<RedexVfs> out;
  positions(t, [&](const Path& p, const V& u) {
    for (RuleVfs r : {RuleVfs::Bv, RuleVfs::SigmaV})
      if (contract_vfs(u, r)) out.push_back(RedexVfs{r, p});
  });
  return out;
}

inline V step_vfs(const V& t, RuleVfs r, const Path& p) {
  V sub = subterm_at(t, p);
  auto red = contract_vfs(sub, r);
  if (!red) fail(ErrKind::NoRedex, std::string(rule_vfs_name(r)) + " at " + show_path(p));
  return replace_at(t, p, *red);
}

// ---------------------------------------------------------------------------
// to and from the kernel
// ---------------------------------------------------------------------------

// The expansion that recovers a left introduction as a value cut.
inline V expand_lintro(const Name& y, const V& w, const Name& x, const V& m) {
  return vcut(vvar(y), vgapp(w, x, m));
}

inline ljq::Q embed_lnf(const V& t) {
  return std::visit(
      overloaded{[&](const VVar& x) { return ljq::qvar(x.name); },
                 [&](const VLam& l) { return ljq::qlam(l.binder, embed_lnf(l.body)); },
                 [&](const VRet& r) { return ljq::qret(embed_lnf(r.val)); },
                 [&](const VCut& c) -> ljq::Q {
                   ljq::Q val = embed_lnf(c.val);
                   if (auto* b = as_vbind(c.ctx))
                     return ljq::cutv(val, b->binder, embed_lnf(b->body));
                   auto* g = as_vgapp(c.ctx);
                   ljq::Q arg = embed_lnf(g->arg);
                   ljq::Q body = embed_lnf(g->body);
                   NameSet avoid = ljq::all_names(arg);
                   ljq::all_names_into(body, avoid);
                   ljq::all_names_into(val, avoid);
                   avoid.insert(g->binder);
                   Name y = fresh_name("y", avoid);
                   return ljq::cutv(val, y, ljq::qli(y, arg, g->binder, body));
                 },
                 [&](const VBind&) -> ljq::Q { fail(ErrKind::Contract, "context has no embedding"); },
                 [&](const VGApp&) -> ljq::Q {
                   fail(ErrKind::Contract, "context has no embedding");
                 }},
      t->v);
}

// Partial inverse of the embedding: maps any left normal form into the
// sub-kernel by expanding bare left introductions.
inline V from_lnf(const ljq::Q& t) {
  using namespace ljq;
  if (auto* x = as_qvar(t)) return vvar(x->name);
  if (auto* l = as_qlam(t)) return vlam(l->binder, from_lnf(l->body));
  if (auto* r = as_qret(t)) return vret(from_lnf(r->val));
  if (auto* li = as_qli(t))
    return expand_lintro(li->head, from_lnf(li->val), li->binder, from_lnf(li->body));
  if (auto* c = as_qcut(t)) {
    auto* r = as_qret(c->left);
    if (!r) fail(ErrKind::Contract, "from_lnf expects a left normal form");
    return vcut(from_lnf(r->val), vbind(c->binder, from_lnf(c->body)));
  }
  fail(ErrKind::Contract, "from_lnf expects a left normal form");
}

// ---------------------------------------------------------------------------
// typing
// ---------------------------------------------------------------------------

inline Type infer_vfs(TypeSolver& s, const TypingContext& g, const V& t);

// Gamma | hole ==> c : result
inline Type infer_vfs_ctx(TypeSolver& s, const TypingContext& g, const V& c, const Type& hole) {
  if (auto* b = as_vbind(c)) return infer_vfs(s, g.extended(b->binder, hole), b->body);
  if (auto* ga = as_vgapp(c)) {
    Type a = s.fresh(), b = s.fresh();
    if (!s.unify(hole, t_arrow(a, b)))
      fail(ErrKind::TypeMismatch, "generalized argument against " + show_type(s.zonk(hole)));
    Type tw = infer_vfs(s, g, ga->arg);
    if (!s.unify(tw, a)) fail(ErrKind::TypeMismatch, "generalized argument value");
    return infer_vfs(s, g.extended(ga->binder, b), ga->body);
  }
  fail(ErrKind::Contract, "not a formal context");
}

inline Type infer_vfs(TypeSolver& s, const TypingContext& g, const V& t) {
  return std::visit(overloaded{[&](const VVar& x) -> Type {
                                 auto ty = g.lookup(x.name);
                                 if (!ty) fail(ErrKind::UnboundVariable, show_name(x.name));
                                 return *ty;
                               },
                               [&](const VLam& l) -> Type {
                                 Type a = s.fresh();
                                 Type b = infer_vfs(s, g.extended(l.binder, a), l.body);
                                 return t_arrow(a, b);
                               },
                               [&](const VRet& r) -> Type { return infer_vfs(s, g, r.val); },
                               [&](const VCut& c) -> Type {
                                 Type a = infer_vfs(s, g, c.val);
                                 return infer_vfs_ctx(s, g, c.ctx, a);
                               },
                               [&](const VBind&) -> Type {
                                 fail(ErrKind::Contract, "context needs a hole type");
                               },
                               [&](const VGApp&) -> Type {
                                 fail(ErrKind::Contract, "context needs a hole type");
                               }},
                    t->v);
}

inline bool check_vfs(const TypingContext& g, const V& t, const Type& a) {
  TypeSolver s;
  Type ty = infer_vfs(s, g, t);
  return s.unify(ty, a);
}

inline bool check_vfs_ctx(const TypingContext& g, const V& c, const Type& hole, const Type& b) {
  TypeSolver s;
  Type ty = infer_vfs_ctx(s, g, c, hole);
  return s.unify(ty, b);
}

// ---------------------------------------------------------------------------
// the translation from the source calculus
// ---------------------------------------------------------------------------

inline V translate_value(const lc::TermC& v, FreshPool& pool);

// (M ; x.N): cut the translation of M against the binding context x.N
inline V translate_colon(const lc::TermC& m, const Name& x, const V& n, FreshPool& pool) {
  using namespace lc;
  if (is_value(m)) return vcut(translate_value(m, pool), vbind(x, n));
  if (auto* a = as_app(m)) {
    if (!is_value(a->fun)) {
      Name mm = pool.next("m");
      V inner = translate_colon(app(var(mm), a->arg), x, n, pool);
      return translate_colon(a->fun, mm, inner, pool);
    }
    if (!is_value(a->arg)) {
      Name nn = pool.next("n");
      V inner = translate_colon(app(a->fun, var(nn)), x, n, pool);
      return translate_colon(a->arg, nn, inner, pool);
    }
    return vcut(translate_value(a->fun, pool), vgapp(translate_value(a->arg, pool), x, n));
  }
  auto* l = as_let(m);
  Name y = l->binder;
  lc::TermC body = l->body;
  if (free_vars(n).count(y)) {
    Name y2 = pool.next(y.base);
    body = lc::subst(lc::var(y2), y, body);
    y = y2;
  }
  return translate_colon(l->bound, y, translate_colon(body, x, n, pool), pool);
}

inline V translate_value(const lc::TermC& v, FreshPool& pool) {
  using namespace lc;
  if (auto* x = as_var(v)) return vvar(x->name);
  if (auto* l = as_lam(v)) {
    Name z = pool.next("z");
    return vlam(l->binder, translate_colon(l->body, z, vret(vvar(z)), pool));
  }
  fail(ErrKind::Contract, "not a value");
}

// M bullet: the whole-term translation
inline V vfs_translate(const lc::TermC& m) {
  FreshPool pool(lc::all_names(m));
  Name z = pool.next("z");
  return translate_colon(m, z, vret(vvar(z)), pool);
}

}  // namespace cbvkit::vfs

#endif  // CBVKIT_VFS_HPP
