#ifndef CBVKIT_TYPING_HPP
#define CBVKIT_TYPING_HPP

#include <vector>

#include "cbvkit/core.hpp"

namespace cbvkit {

// Solves the equations a syntax-directed typing derivation generates.
// Binders carry no annotations, so their types enter as variables; a judgment
// Gamma |- t : A holds iff the equations have a solution with the result
// unified against A.
class TypeSolver {
 public:
  Type fresh() {
    bindings_.emplace_back();
    return t_var(static_cast<int>(bindings_.size()) - 1);
  }

  Type resolve(Type t) const {
    while (auto* v = as_tvar(t)) {
      const auto& b = bindings_[static_cast<size_t>(v->id)];
      if (!b) break;
      t = *b;
    }
    return t;
  }

  bool unify(const Type& a0, const Type& b0) {
    Type a = resolve(a0), b = resolve(b0);
    if (auto* va = as_tvar(a)) {
      if (auto* vb = as_tvar(b); vb && vb->id == va->id) return true;
      if (occurs(va->id, b)) return false;
      bindings_[static_cast<size_t>(va->id)] = b;
      return true;
    }
    if (as_tvar(b)) return unify(b, a);
    if (a->v.index() != b->v.index()) return false;
    if (auto* x = as_atom(a)) return x->name == as_atom(b)->name;
    if (auto* x = as_arrow(a)) {
      auto* y = as_arrow(b);
      return unify(x->dom, y->dom) && unify(x->cod, y->cod);
    }
    return true;  // TBot
  }

  // Fully substitute solved variables; unsolved ones remain as TVar.
  Type zonk(const Type& t0) const {
    Type t = resolve(t0);
    if (auto* ar = as_arrow(t)) return t_arrow(zonk(ar->dom), zonk(ar->cod));
    return t;
  }

 private:
  bool occurs(int id, const Type& t0) const {
    Type t = resolve(t0);
    if (auto* v = as_tvar(t)) return v->id == id;
    if (auto* ar = as_arrow(t)) return occurs(id, ar->dom) || occurs(id, ar->cod);
    return false;
  }

  std::vector<std::optional<Type>> bindings_;
};

}  // namespace cbvkit

#endif  // CBVKIT_TYPING_HPP
