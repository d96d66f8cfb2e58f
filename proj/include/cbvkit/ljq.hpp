#ifndef CBVKIT_LJQ_HPP
#define CBVKIT_LJQ_HPP

#include <functional>

#include "cbvkit/core.hpp"
#include "cbvkit/typing.hpp"

// Term calculi for the focused sequent calculus: the original system with
// explicit-substitution cuts, its mild modification, the simplified
// single-cut calculus, and the latter's kernel of left normal forms.
//
// One node family covers all three layers; recognizers carve out the
// sub-syntaxes.  Values are Var, Lam, Cut1; terms are Ret, LIntro, Cut2, Cut.
// The simplified calculus drops Cut1/Cut2; the kernel further restricts the
// left component of every Cut to a Ret.
namespace cbvkit::ljq {

struct QNode;
using Q = std::shared_ptr<const QNode>;

struct QVar {
  Name name;
};
struct QLam {
  Name binder;
  Q body;
};
struct QCut1 {  // explicit substitution into a value
  Q val;
  Name binder;
  Q body;
};
struct QRet {  // dereliction of a value into a term
  Q val;
};
struct QLi {  // left introduction  head(val, binder.body)
  Name head;
  Q val;
  Name binder;
  Q body;
};
struct QCut2 {  // explicit substitution into a term
  Q val;
  Name binder;
  Q body;
};
struct QCut {  // the general cut
  Q left;
  Name binder;
  Q body;
};

struct QNode {
  std::variant<QVar, QLam, QCut1, QRet, QLi, QCut2, QCut> v;
};

inline Q qvar(Name n) { return std::make_shared<QNode>(QNode{QVar{std::move(n)}}); }
inline Q qlam(Name x, Q m) { return std::make_shared<QNode>(QNode{QLam{std::move(x), std::move(m)}}); }
inline Q qcut1(Q v, Name x, Q w) {
  return std::make_shared<QNode>(QNode{QCut1{std::move(v), std::move(x), std::move(w)}});
}
inline Q qret(Q v) { return std::make_shared<QNode>(QNode{QRet{std::move(v)}}); }
inline Q qli(Name h, Q v, Name y, Q n) {
  return std::make_shared<QNode>(QNode{QLi{std::move(h), std::move(v), std::move(y), std::move(n)}});
}
inline Q qcut2(Q v, Name x, Q n) {
  return std::make_shared<QNode>(QNode{QCut2{std::move(v), std::move(x), std::move(n)}});
}
inline Q qcut(Q m, Name x, Q n) {
  return std::make_shared<QNode>(QNode{QCut{std::move(m), std::move(x), std::move(n)}});
}

inline const QVar* as_qvar(const Q& t) { return std::get_if<QVar>(&t->v); }
inline const QLam* as_qlam(const Q& t) { return std::get_if<QLam>(&t->v); }
inline const QCut1* as_qcut1(const Q& t) { return std::get_if<QCut1>(&t->v); }
inline const QRet* as_qret(const Q& t) { return std::get_if<QRet>(&t->v); }
inline const QLi* as_qli(const Q& t) { return std::get_if<QLi>(&t->v); }
inline const QCut2* as_qcut2(const Q& t) { return std::get_if<QCut2>(&t->v); }
inline const QCut* as_qcut(const Q& t) { return std::get_if<QCut>(&t->v); }

inline bool is_q_value(const Q& t) { return as_qvar(t) || as_qlam(t) || as_qcut1(t); }

// membership in the simplified calculus (no explicit-substitution cuts)
inline bool in_simplified(const Q& t) {
  return std::visit(overloaded{[](const QVar&) { return true; },
                               [](const QLam& l) { return in_simplified(l.body); },
                               [](const QCut1&) { return false; },
                               [](const QRet& r) { return in_simplified(r.val); },
                               [](const QLi& l) {
                                 return in_simplified(l.val) && in_simplified(l.body);
                               },
                               [](const QCut2&) { return false; },
                               [](const QCut& c) {
                                 return in_simplified(c.left) && in_simplified(c.body);
                               }},
                    t->v);
}

// left normal forms: every cut's left component is a Ret
inline bool in_lnf(const Q& t) {
  return std::visit(overloaded{[](const QVar&) { return true; },
                               [](const QLam& l) { return in_lnf(l.body); },
                               [](const QCut1&) { return false; },
                               [](const QRet& r) { return in_lnf(r.val); },
                               [](const QLi& l) { return in_lnf(l.val) && in_lnf(l.body); },
                               [](const QCut2&) { return false; },
                               [](const QCut& c) {
                                 return as_qret(c.left) && in_lnf(c.left) && in_lnf(c.body);
                               }},
                    t->v);
}

// the kernel's cut, a cut whose left side is already a value
inline Q cutv(Q v, Name x, Q n) { return qcut(qret(std::move(v)), std::move(x), std::move(n)); }

// ---------------------------------------------------------------------------
// structural helpers
// ---------------------------------------------------------------------------

inline size_t node_count(const Q& t) {
  return std::visit(
      overloaded{[](const QVar&) -> size_t { return 1; },
                 [](const QLam& l) { return 1 + node_count(l.body); },
                 [](const QCut1& c) { return 1 + node_count(c.val) + node_count(c.body); },
                 [](const QRet& r) { return 1 + node_count(r.val); },
                 [](const QLi& l) { return 1 + node_count(l.val) + node_count(l.body); },
                 [](const QCut2& c) { return 1 + node_count(c.val) + node_count(c.body); },
                 [](const QCut& c) { return 1 + node_count(c.left) + node_count(c.body); }},
      t->v);
}

inline void free_vars_into(const Q& t, NameSet& acc) {
  auto bound = [&acc](const Name& b, const Q& body) {
    NameSet inner;
    free_vars_into(body, inner);
    inner.erase(b);
    acc.insert(inner.begin(), inner.end());
  };
  std::visit(overloaded{[&](const QVar& x) { acc.insert(x.name); },
                        [&](const QLam& l) { bound(l.binder, l.body); },
                        [&](const QCut1& c) {
                          free_vars_into(c.val, acc);
                          bound(c.binder, c.body);
                        },
                        [&](const QRet& r) { free_vars_into(r.val, acc); },
                        [&](const QLi& l) {
                          acc.insert(l.head);
                          free_vars_into(l.val, acc);
                          bound(l.binder, l.body);
                        },
                        [&](const QCut2& c) {
                          free_vars_into(c.val, acc);
                          bound(c.binder, c.body);
                        },
                        [&](const QCut& c) {
                          free_vars_into(c.left, acc);
                          bound(c.binder, c.body);
                        }},
             t->v);
}

inline NameSet free_vars(const Q& t) {
  NameSet s;
  free_vars_into(t, s);
  return s;
}

inline void all_names_into(const Q& t, NameSet& acc) {
  std::visit(overloaded{[&](const QVar& x) { acc.insert(x.name); },
                        [&](const QLam& l) {
                          acc.insert(l.binder);
                          all_names_into(l.body, acc);
                        },
                        [&](const QCut1& c) {
                          acc.insert(c.binder);
                          all_names_into(c.val, acc);
                          all_names_into(c.body, acc);
                        },
                        [&](const QRet& r) { all_names_into(r.val, acc); },
                        [&](const QLi& l) {
                          acc.insert(l.head);
                          acc.insert(l.binder);
                          all_names_into(l.val, acc);
                          all_names_into(l.body, acc);
                        },
                        [&](const QCut2& c) {
                          acc.insert(c.binder);
                          all_names_into(c.val, acc);
                          all_names_into(c.body, acc);
                        },
                        [&](const QCut& c) {
                          acc.insert(c.binder);
                          all_names_into(c.left, acc);
                          all_names_into(c.body, acc);
                        }},
             t->v);
}

inline NameSet all_names(const Q& t) {
  NameSet s;
  all_names_into(t, s);
  return s;
}

// ---------------------------------------------------------------------------
// substitution
// ---------------------------------------------------------------------------

// Value substitution [v/y]t.  The delicate case is a left introduction headed
// by y itself: a variable replaces the head in place, while an abstraction
// must be re-cut against the introduction (substituting it directly would
// undo the very step that produced it).
inline Q subst_value(const Q& v, const Name& y, const Q& t);

namespace detail {

// rename-or-keep for descending a binder: returns the (possibly renamed)
// binder and body
inline std::pair<Name, Q> enter_binder(const Q& v, const Name& y, const Name& b, const Q& body) {
  if (free_vars(v).count(b)) {
    NameSet avoid = all_names(body);
    all_names_into(v, avoid);
    avoid.insert(y);
    Name b2 = fresh_name(b.base, avoid);
    return {b2, subst_value(qvar(b2), b, body)};
  }
  return {b, body};
}

}  // namespace detail

inline Q subst_value(const Q& v, const Name& y, const Q& t) {
  if (!is_q_value(v)) fail(ErrKind::Contract, "subst_value: substituent must be a value");
  return std::visit(
      overloaded{
          [&](const QVar& x) { return x.name == y ? v : t; },
          [&](const QLam& l) {
            if (l.binder == y) return t;
            auto [b, body] = detail::enter_binder(v, y, l.binder, l.body);
            return qlam(b, subst_value(v, y, body));
          },
          [&](const QCut1& c) {
            Q val = subst_value(v, y, c.val);
            if (c.binder == y) return qcut1(val, c.binder, c.body);
            auto [b, body] = detail::enter_binder(v, y, c.binder, c.body);
            return qcut1(val, b, subst_value(v, y, body));
          },
          [&](const QRet& r) { return qret(subst_value(v, y, r.val)); },
          [&](const QLi& l) {
            Q val = subst_value(v, y, l.val);
            Q body = l.body;
            Name b = l.binder;
            if (b != y) {
              auto [b2, body2] = detail::enter_binder(v, y, b, body);
              b = b2;
              body = subst_value(v, y, body2);
            }
            if (l.head != y) return qli(l.head, val, b, body);
            if (auto* xv = as_qvar(v)) return qli(xv->name, val, b, body);
            // abstraction into head position: re-cut, binding a fresh head
            NameSet avoid = all_names(v);
            all_names_into(val, avoid);
            all_names_into(body, avoid);
            avoid.insert(b);
            avoid.insert(y);
            Name h = fresh_name(y.base, avoid);
            return qcut(qret(v), h, qli(h, val, b, body));
          },
          [&](const QCut2& c) {
            Q val = subst_value(v, y, c.val);
            if (c.binder == y) return qcut2(val, c.binder, c.body);
            auto [b, body] = detail::enter_binder(v, y, c.binder, c.body);
            return qcut2(val, b, subst_value(v, y, body));
          },
          [&](const QCut& c) {
            Q left = subst_value(v, y, c.left);
            if (c.binder == y) return qcut(left, c.binder, c.body);
            auto [b, body] = detail::enter_binder(v, y, c.binder, c.body);
            return qcut(left, b, subst_value(v, y, body));
          }},
      t->v);
}

// ---------------------------------------------------------------------------
// alpha-equivalence
// ---------------------------------------------------------------------------

inline void canon_key_into(const Q& t, std::vector<std::pair<Name, int>>& env, int depth,
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
  auto under = [&](const Name& b, const Q& body) {
    env.emplace_back(b, depth);
    canon_key_into(body, env, depth + 1, out);
    env.pop_back();
  };
  std::visit(overloaded{[&](const QVar& x) {
                          out += 'v';
                          emit_name(x.name);
                        },
                        [&](const QLam& l) {
                          out += 'L';
                          under(l.binder, l.body);
                        },
                        [&](const QCut1& c) {
                          out += '1';
                          canon_key_into(c.val, env, depth, out);
                          under(c.binder, c.body);
                        },
                        [&](const QRet& r) {
                          out += 'R';
                          canon_key_into(r.val, env, depth, out);
                        },
                        [&](const QLi& l) {
                          out += 'I';
                          emit_name(l.head);
                          canon_key_into(l.val, env, depth, out);
                          under(l.binder, l.body);
                        },
                        [&](const QCut2& c) {
                          out += '2';
                          canon_key_into(c.val, env, depth, out);
                          under(c.binder, c.body);
                        },
                        [&](const QCut& c) {
                          out += 'C';
                          canon_key_into(c.left, env, depth, out);
                          under(c.binder, c.body);
                        }},
             t->v);
}

inline std::string canon_key(const Q& t) {
  std::string s;
  s.reserve(node_count(t) * 3);
  std::vector<std::pair<Name, int>> env;
  canon_key_into(t, env, 0, s);
  return s;
}

inline bool alpha_eq(const Q& a, const Q& b) {
  return a.get() == b.get() || canon_key(a) == canon_key(b);
}

// ---------------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------------

inline std::vector<Q> children(const Q& t) {
  return std::visit(overloaded{[](const QVar&) { return std::vector<Q>{}; },
                               [](const QLam& l) { return std::vector<Q>{l.body}; },
                               [](const QCut1& c) { return std::vector<Q>{c.val, c.body}; },
                               [](const QRet& r) { return std::vector<Q>{r.val}; },
                               [](const QLi& l) { return std::vector<Q>{l.val, l.body}; },
                               [](const QCut2& c) { return std::vector<Q>{c.val, c.body}; },
                               [](const QCut& c) { return std::vector<Q>{c.left, c.body}; }},
                    t->v);
}

inline Q with_child(const Q& t, int i, const Q& c) {
  return std::visit(
      overloaded{[&](const QVar&) -> Q { fail(ErrKind::Contract, "no child"); },
                 [&](const QLam& l) { return qlam(l.binder, c); },
                 [&](const QCut1& n) {
                   return i == 0 ? qcut1(c, n.binder, n.body) : qcut1(n.val, n.binder, c);
                 },
                 [&](const QRet&) { return qret(c); },
                 [&](const QLi& n) {
                   return i == 0 ? qli(n.head, c, n.binder, n.body)
                                 : qli(n.head, n.val, n.binder, c);
                 },
                 [&](const QCut2& n) {
                   return i == 0 ? qcut2(c, n.binder, n.body) : qcut2(n.val, n.binder, c);
                 },
                 [&](const QCut& n) {
                   return i == 0 ? qcut(c, n.binder, n.body) : qcut(n.left, n.binder, c);
                 }},
      t->v);
}

inline Q subterm_at(const Q& t, const Path& p, size_t from = 0) {
  if (from == p.size()) return t;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return subterm_at(cs[static_cast<size_t>(i)], p, from + 1);
}

inline Q replace_at(const Q& t, const Path& p, const Q& sub, size_t from = 0) {
  if (from == p.size()) return sub;
  auto cs = children(t);
  int i = p[from];
  if (i < 0 || static_cast<size_t>(i) >= cs.size()) fail(ErrKind::NoRedex, "bad path");
  return with_child(t, i, replace_at(cs[static_cast<size_t>(i)], p, sub, from + 1));
}

inline void positions(const Q& t, const std::function<void(const Path&, const Q&)>& fn) {
  Path p;
  std::function<void(const Q&)> go = [&](const Q& u) {
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
// the original calculus and its modification: rules (1)..(14)
// ---------------------------------------------------------------------------

enum class LjqMode { Original, Modified };

namespace detail {

// Does the full left-hand side of rule (1) match, proviso included?
inline bool matches_rule1(const Q& t) {
  auto* c = as_qcut(t);
  if (!c) return false;
  auto* r = as_qret(c->left);
  if (!r || !as_qlam(r->val)) return false;
  auto* li = as_qli(c->body);
  if (!li || li->head != c->binder) return false;
  NameSet fv = free_vars(li->val);
  free_vars_into(li->body, fv);
  fv.erase(li->binder);
  return !fv.count(c->binder);
}

// Full left-hand side of rule (5), proviso included.
inline bool matches_rule5(const Q& t) {
  auto* outer = as_qcut(t);
  if (!outer) return false;
  auto* inner = as_qcut(outer->left);
  if (!inner) return false;
  auto* r = as_qret(inner->left);
  if (!r) return false;
  auto* li = as_qli(inner->body);
  if (!li || li->head != inner->binder) return false;
  NameSet fv = free_vars(li->val);
  free_vars_into(li->body, fv);
  fv.erase(li->binder);
  return !fv.count(inner->binder);
}

// Rename binder b of an explicit substitution's target when pushing
// [v/x] under it would be wrong: b captured in v, or b shadows x.
inline std::pair<Name, Q> push_binder(const Q& v, const Name& x, const Name& b, const Q& body) {
  if (b == x || free_vars(v).count(b)) {
    NameSet avoid = all_names(body);
    all_names_into(v, avoid);
    avoid.insert(x);
    avoid.insert(b);
    Name b2 = fresh_name(b.base, avoid);
    return {b2, subst_value(qvar(b2), b, body)};
  }
  return {b, body};
}

}  // namespace detail

inline RuleId rule_id_ljq(int n) { return RuleId{"ljq", std::to_string(n)}; }

inline std::optional<Q> contract_ljq(const Q& t, int rule, LjqMode mode) {
  switch (rule) {
    case 1: {
      if (!detail::matches_rule1(t)) return std::nullopt;
      auto* c = as_qcut(t);
      auto* r = as_qret(c->left);
      auto* f = as_qlam(r->val);
      auto* li = as_qli(c->body);
      return qcut(qcut(qret(li->val), f->binder, f->body), li->binder, li->body);
    }
    case 2: {
      auto* c = as_qcut(t);
      if (!c) return std::nullopt;
      auto* r = as_qret(c->left);
      if (!r || !as_qvar(r->val)) return std::nullopt;
      return subst_value(r->val, c->binder, c->body);
    }
    case 3: {
      auto* c = as_qcut(t);
      if (!c) return std::nullopt;
      auto* r = as_qret(c->body);
      if (!r) return std::nullopt;
      auto* x = as_qvar(r->val);
      if (!x || x->name != c->binder) return std::nullopt;
      return c->left;
    }
    case 4: {
      auto* c = as_qcut(t);
      if (!c) return std::nullopt;
      auto* li = as_qli(c->left);
      if (!li) return std::nullopt;
      Name y = li->binder;
      Q p = li->body;
      if (free_vars(c->body).count(y)) {
        NameSet avoid = all_names(t);
        Name y2 = fresh_name(y.base, avoid);
        p = subst_value(qvar(y2), y, p);
        y = y2;
      }
      return qli(li->head, li->val, y, qcut(p, c->binder, c->body));
    }
    case 5: {
      if (mode == LjqMode::Modified) fail(ErrKind::RuleDisabled, "rule (5) is dropped here");
      if (!detail::matches_rule5(t)) return std::nullopt;
      auto* outer = as_qcut(t);
      auto* inner = as_qcut(outer->left);
      auto* li = as_qli(inner->body);
      Name y = inner->binder;
      Name z = li->binder;
      Q p = li->body;
      Q v = li->val;
      NameSet nfv = free_vars(outer->body);
      if (nfv.count(y)) {
        NameSet avoid = all_names(t);
        Name y2 = fresh_name(y.base, avoid);
        // the proviso says y is not free in v or p, so only the head moves
        y = y2;
      }
      if (nfv.count(z)) {
        NameSet avoid = all_names(t);
        avoid.insert(y);
        Name z2 = fresh_name(z.base, avoid);
        p = subst_value(qvar(z2), z, p);
        z = z2;
      }
      return qcut(inner->left, y, qli(y, v, z, qcut(p, outer->binder, outer->body)));
    }
    case 6: {
      auto* outer = as_qcut(t);
      if (!outer) return std::nullopt;
      auto* inner = as_qcut(outer->left);
      if (!inner) return std::nullopt;
      if (mode == LjqMode::Original && detail::matches_rule5(t)) return std::nullopt;
      Name y = inner->binder;
      Q p = inner->body;
      if (free_vars(outer->body).count(y)) {
        NameSet avoid = all_names(t);
        Name y2 = fresh_name(y.base, avoid);
        p = subst_value(qvar(y2), y, p);
        y = y2;
      }
      return qcut(inner->left, y, qcut(p, outer->binder, outer->body));
    }
    case 7: {
      auto* c = as_qcut(t);
      if (!c) return std::nullopt;
      auto* r = as_qret(c->left);
      if (!r || !as_qlam(r->val)) return std::nullopt;
      if (detail::matches_rule1(t)) return std::nullopt;
      return qcut2(r->val, c->binder, c->body);
    }
    case 8: {
      auto* c = as_qcut1(t);
      if (!c) return std::nullopt;
      auto* x = as_qvar(c->body);
      if (!x || x->name != c->binder) return std::nullopt;
      return c->val;
    }
    case 9: {
      auto* c = as_qcut1(t);
      if (!c) return std::nullopt;
      auto* y = as_qvar(c->body);
      if (!y || y->name == c->binder) return std::nullopt;
      return c->body;
    }
    case 10: {
      auto* c = as_qcut1(t);
      if (!c) return std::nullopt;
      auto* l = as_qlam(c->body);
      if (!l) return std::nullopt;
      auto [b, body] = detail::push_binder(c->val, c->binder, l->binder, l->body);
      return qlam(b, qcut2(c->val, c->binder, body));
    }
    case 11: {
      auto* c = as_qcut2(t);
      if (!c) return std::nullopt;
      auto* r = as_qret(c->body);
      if (!r) return std::nullopt;
      return qret(qcut1(c->val, c->binder, r->val));
    }
    case 12: {
      auto* c = as_qcut2(t);
      if (!c) return std::nullopt;
      auto* li = as_qli(c->body);
      if (!li || li->head != c->binder) return std::nullopt;
      auto [z, p] = detail::push_binder(c->val, c->binder, li->binder, li->body);
      Name h = c->binder;
      if (free_vars(c->val).count(h)) {
        NameSet avoid = all_names(t);
        h = fresh_name(h.base, avoid);
      }
      return qcut(qret(c->val), h,
                  qli(h, qcut1(c->val, c->binder, li->val), z, qcut2(c->val, c->binder, p)));
    }
    case 13: {
      auto* c = as_qcut2(t);
      if (!c) return std::nullopt;
      auto* li = as_qli(c->body);
      if (!li || li->head == c->binder) return std::nullopt;
      auto [z, p] = detail::push_binder(c->val, c->binder, li->binder, li->body);
      return qli(li->head, qcut1(c->val, c->binder, li->val), z, qcut2(c->val, c->binder, p));
    }
    case 14: {
      auto* c = as_qcut2(t);
      if (!c) return std::nullopt;
      auto* in = as_qcut(c->body);
      if (!in) return std::nullopt;
      auto [y, n] = detail::push_binder(c->val, c->binder, in->binder, in->body);
      return qcut(qcut2(c->val, c->binder, in->left), y, qcut2(c->val, c->binder, n));
    }
    default: fail(ErrKind::Contract, "ljq rule number out of range");
  }
}

struct RedexLjq {
  int rule;
  Path path;
};

inline std::vector<RedexLjq> redexes_ljq(const Q& t, LjqMode mode) {
  std::vector<RedexLjq> out;
  positions(t, [&](const Path& p, const Q& u) {
    for (int r = 1; r <= 14; ++r) {
      if (r == 5 && mode == LjqMode::Modified) continue;
      if (contract_ljq(u, r, mode)) out.push_back(RedexLjq{r, p});
    }
  });
  return out;
}

inline Q step_ljq(const Q& t, int rule, const Path& p, LjqMode mode) {
  Q sub = subterm_at(t, p);
  auto red = contract_ljq(sub, rule, mode);
  if (!red) fail(ErrKind::NoRedex, "rule (" + std::to_string(rule) + ") at " + show_path(p));
  return replace_at(t, p, *red);
}

// ---------------------------------------------------------------------------
// the simplified calculus
// ---------------------------------------------------------------------------

enum class RuleQ { Bv, SigmaV, EtaCut, Pi1, Pi2 };

inline const char* rule_q_name(RuleQ r) {
  switch (r) {
    case RuleQ::Bv: return "B_v";
    case RuleQ::SigmaV: return "sigma_v";
    case RuleQ::EtaCut: return "eta_cut";
    case RuleQ::Pi1: return "pi1";
    case RuleQ::Pi2: return "pi2";
  }
  return "?";
}

inline std::optional<RuleQ> rule_q_of_name(const std::string& s) {
  for (RuleQ r : {RuleQ::Bv, RuleQ::SigmaV, RuleQ::EtaCut, RuleQ::Pi1, RuleQ::Pi2})
    if (s == rule_q_name(r)) return r;
  return std::nullopt;
}

inline RuleId rule_id_q(RuleQ r) { return RuleId{"q", rule_q_name(r)}; }

inline std::optional<Q> contract_q(const Q& t, RuleQ r) {
  switch (r) {
    case RuleQ::Bv: {
      if (!detail::matches_rule1(t)) return std::nullopt;
      return contract_ljq(t, 1, LjqMode::Modified);
    }
    case RuleQ::SigmaV: {
      auto* c = as_qcut(t);
      if (!c) return std::nullopt;
      auto* r0 = as_qret(c->left);
      if (!r0) return std::nullopt;
      if (detail::matches_rule1(t)) return std::nullopt;  // the B_v shape wins
      return subst_value(r0->val, c->binder, c->body);
    }
    case RuleQ::EtaCut: return contract_ljq(t, 3, LjqMode::Modified);
    case RuleQ::Pi1: return contract_ljq(t, 4, LjqMode::Modified);
    case RuleQ::Pi2: return contract_ljq(t, 6, LjqMode::Modified);
  }
  return std::nullopt;
}

struct RedexQ {
  RuleQ rule;
  Path path;
};

inline const std::vector<RuleQ>& all_rules_q() {
  static const std::vector<RuleQ> rs = {RuleQ::Bv, RuleQ::SigmaV, RuleQ::EtaCut, RuleQ::Pi1,
                                        RuleQ::Pi2};
  return rs;
}

inline std::vector<RedexQ> redexes_q(const Q& t, const std::vector<RuleQ>& rules) {
  std::vector<RedexQ> out;
  positions(t, [&](const Path& p, const Q& u) {
    for (RuleQ r : rules)
      if (contract_q(u, r)) out.push_back(RedexQ{r, p});
  });
  return out;
}

inline Q step_q(const Q& t, RuleQ r, const Path& p) {
  Q sub = subterm_at(t, p);
  auto red = contract_q(sub, r);
  if (!red) fail(ErrKind::NoRedex, std::string(rule_q_name(r)) + " at " + show_path(p));
  return replace_at(t, p, *red);
}

// ---------------------------------------------------------------------------
// the kernel of the simplified calculus
// ---------------------------------------------------------------------------

// Cut of a kernel term against z.N, pushing down the spine so the result
// stays left-normal.
inline Q cutvc(const Q& m, const Name& z, const Q& n) {
  if (auto* r = as_qret(m)) return cutv(r->val, z, n);
  if (auto* li = as_qli(m)) {
    Name y = li->binder;
    Q body = li->body;
    if (free_vars(n).count(y)) {
      NameSet avoid = all_names(m);
      all_names_into(n, avoid);
      avoid.insert(z);
      Name y2 = fresh_name(y.base, avoid);
      body = subst_value(qvar(y2), y, body);
      y = y2;
    }
    return qli(li->head, li->val, y, cutvc(body, z, n));
  }
  if (auto* c = as_qcut(m)) {
    auto* r = as_qret(c->left);
    if (!r) fail(ErrKind::Contract, "cutvc expects a left-normal term");
    Name y = c->binder;
    Q body = c->body;
    if (free_vars(n).count(y)) {
      NameSet avoid = all_names(m);
      all_names_into(n, avoid);
      avoid.insert(z);
      Name y2 = fresh_name(y.base, avoid);
      body = subst_value(qvar(y2), y, body);
      y = y2;
    }
    return cutv(r->val, y, cutvc(body, z, n));
  }
  fail(ErrKind::Contract, "cutvc expects a term");
}

enum class RuleLnf { Bv, SigmaV };

inline const char* rule_lnf_name(RuleLnf r) { return r == RuleLnf::Bv ? "B_v" : "sigma_v"; }

inline RuleId rule_id_lnf(RuleLnf r) { return RuleId{"lnf", rule_lnf_name(r)}; }

inline std::optional<Q> contract_lnf(const Q& t, RuleLnf r) {
  switch (r) {
    case RuleLnf::Bv: {
      if (!detail::matches_rule1(t)) return std::nullopt;
      auto* c = as_qcut(t);
      auto* r0 = as_qret(c->left);
      auto* f = as_qlam(r0->val);
      auto* li = as_qli(c->body);
      Name x = f->binder;
      Q body = f->body;
      if (free_vars(li->body).count(x) || x == li->binder) {
        NameSet avoid = all_names(t);
        Name x2 = fresh_name(x.base, avoid);
        body = subst_value(qvar(x2), x, body);
        x = x2;
      }
      return cutv(li->val, x, cutvc(body, li->binder, li->body));
    }
    case RuleLnf::SigmaV: {
      auto* c = as_qcut(t);
      if (!c) return std::nullopt;
      auto* r0 = as_qret(c->left);
      if (!r0) return std::nullopt;
      if (detail::matches_rule1(t)) return std::nullopt;
      return subst_value(r0->val, c->binder, c->body);
    }
  }
  return std::nullopt;
}

struct RedexLnf {
  RuleLnf rule;
  Path path;
};

inline std::vector<RedexLnf> redexes_lnf(const Q& t) {
  std::vector<RedexLnf> out;
  positions(t, [&](const Path& p, const Q& u) {
    for (RuleLnf r : {RuleLnf::Bv, RuleLnf::SigmaV})
      if (contract_lnf(u, r)) out.push_back(RedexLnf{r, p});
  });
  return out;
}

inline Q step_lnf(const Q& t, RuleLnf r, const Path& p) {
  Q sub = subterm_at(t, p);
  auto red = contract_lnf(sub, r);
  if (!red) fail(ErrKind::NoRedex, std::string(rule_lnf_name(r)) + " at " + show_path(p));
  return replace_at(t, p, *red);
}

// ---------------------------------------------------------------------------
// simplification and kernelization maps
// ---------------------------------------------------------------------------

// Collapses the explicit-substitution cuts into actual substitutions; the
// identity on terms already in the simplified calculus.
inline Q smp(const Q& t) {
  return std::visit(
      overloaded{[&](const QVar&) { return t; },
                 [&](const QLam& l) { return qlam(l.binder, smp(l.body)); },
                 [&](const QCut1& c) { return subst_value(smp(c.val), c.binder, smp(c.body)); },
                 [&](const QRet& r) { return qret(smp(r.val)); },
                 [&](const QLi& l) { return qli(l.head, smp(l.val), l.binder, smp(l.body)); },
                 [&](const QCut2& c) { return subst_value(smp(c.val), c.binder, smp(c.body)); },
                 [&](const QCut& c) { return qcut(smp(c.left), c.binder, smp(c.body)); }},
      t->v);
}

// Fully left-permutes every cut; the identity on left normal forms.
inline Q knl(const Q& t) {
  return std::visit(
      overloaded{[&](const QVar&) -> Q { return t; },
                 [&](const QLam& l) -> Q { return qlam(l.binder, knl(l.body)); },
                 [&](const QCut1&) -> Q { fail(ErrKind::Contract, "knl expects a simplified term"); },
                 [&](const QRet& r) -> Q { return qret(knl(r.val)); },
                 [&](const QLi& l) -> Q { return qli(l.head, knl(l.val), l.binder, knl(l.body)); },
                 [&](const QCut2&) -> Q { fail(ErrKind::Contract, "knl expects a simplified term"); },
                 [&](const QCut& c) -> Q { return cutvc(knl(c.left), c.binder, knl(c.body)); }},
      t->v);
}

// ---------------------------------------------------------------------------
// typing: focused judgments for values, ordinary judgments for terms
// ---------------------------------------------------------------------------

inline Type infer_q(TypeSolver& s, const TypingContext& g, const Q& t) {
  return std::visit(
      overloaded{[&](const QVar& x) -> Type {
                   auto ty = g.lookup(x.name);
                   if (!ty) fail(ErrKind::UnboundVariable, show_name(x.name));
                   return *ty;
                 },
                 [&](const QLam& l) -> Type {
                   Type a = s.fresh();
                   Type b = infer_q(s, g.extended(l.binder, a), l.body);
                   return t_arrow(a, b);
                 },
                 [&](const QCut1& c) -> Type {
                   Type a = infer_q(s, g, c.val);
                   return infer_q(s, g.extended(c.binder, a), c.body);
                 },
                 [&](const QRet& r) -> Type { return infer_q(s, g, r.val); },
                 [&](const QLi& l) -> Type {
                   auto th = g.lookup(l.head);
                   if (!th) fail(ErrKind::UnboundVariable, show_name(l.head));
                   Type a = s.fresh(), b = s.fresh();
                   if (!s.unify(*th, t_arrow(a, b)))
                     fail(ErrKind::TypeMismatch, "left introduction on " + show_type(s.zonk(*th)));
                   Type tv = infer_q(s, g, l.val);
                   if (!s.unify(tv, a))
                     fail(ErrKind::TypeMismatch, "left introduction argument");
                   return infer_q(s, g.extended(l.binder, b), l.body);
                 },
                 [&](const QCut2& c) -> Type {
                   Type a = infer_q(s, g, c.val);
                   return infer_q(s, g.extended(c.binder, a), c.body);
                 },
                 [&](const QCut& c) -> Type {
                   Type a = infer_q(s, g, c.left);
                   return infer_q(s, g.extended(c.binder, a), c.body);
                 }},
      t->v);
}

inline bool check_q(const TypingContext& g, const Q& t, const Type& a) {
  TypeSolver s;
  Type ty = infer_q(s, g, t);
  return s.unify(ty, a);
}

inline std::optional<Type> synth_q(const TypingContext& g, const Q& t) {
  TypeSolver s;
  Type ty = s.zonk(infer_q(s, g, t));
  if (!type_ground(ty)) return std::nullopt;
  return ty;
}

}  // namespace cbvkit::ljq

#endif  // CBVKIT_LJQ_HPP
