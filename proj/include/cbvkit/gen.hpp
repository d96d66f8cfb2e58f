#ifndef CBVKIT_GEN_HPP
#define CBVKIT_GEN_HPP

#include <deque>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "cbvkit/cps.hpp"
#include "cbvkit/direct_style.hpp"
#include "cbvkit/lambda_c.hpp"
#include "cbvkit/ljq.hpp"
#include "cbvkit/vfs.hpp"

// Random term generation (typed and raw), exhaustive enumeration of small
// terms up to alpha-equivalence, and the search utilities the property
// suites are built on.
namespace cbvkit::gen {

// mt19937_64 with hand-rolled draws so streams are identical across
// platforms and standard libraries
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }
  size_t below(size_t n) { return n == 0 ? 0 : static_cast<size_t>(eng_() % n); }
  bool chance(double p) { return static_cast<double>(eng_() % 1000000) < p * 1000000.0; }

  template <class T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::mt19937_64 eng_;
};

struct GenConfig {
  size_t max_size = 12;
  std::vector<std::string> atom_pool = {"a", "b"};
  double value_bias = 0.5;
  std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------
// typed generation for the source calculus
// ---------------------------------------------------------------------------

namespace detail {

inline Type random_type(Rng& rng, const GenConfig& cfg, size_t depth) {
  if (depth == 0 || rng.chance(0.6)) return t_atom(rng.pick(cfg.atom_pool));
  return t_arrow(random_type(rng, cfg, depth - 1), random_type(rng, cfg, depth - 1));
}

inline std::vector<Name> vars_of_type(const TypingContext& g, const Type& a) {
  std::vector<Name> out;
  for (auto& [n, t] : g.declarations())
    if (type_eq(t, a)) out.push_back(n);
  return out;
}

struct CGen {
  Rng& rng;
  const GenConfig& cfg;
  int fresh_counter = 0;

  Name binder(const char* stem) { return Name{stem, fresh_counter++}; }

  // a value of the requested type, or nothing if the budget cannot fit one
  std::optional<lc::TermC> value(const TypingContext& g, const Type& a, size_t size) {
    auto vars = vars_of_type(g, a);
    bool can_lam = as_arrow(a) && size >= 2;
    if (!vars.empty() && (!can_lam || rng.chance(0.5))) return lc::var(rng.pick(vars));
    if (can_lam) {
      auto* ar = as_arrow(a);
      Name x = binder("x");
      auto body = term(g.extended(x, ar->dom), ar->cod, size - 1);
      if (body) return lc::lam(x, *body);
    }
    if (!vars.empty()) return lc::var(rng.pick(vars));
    return std::nullopt;
  }

  std::optional<lc::TermC> term(const TypingContext& g, const Type& a, size_t size) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (size <= 1 || rng.chance(cfg.value_bias)) {
        if (auto v = value(g, a, size)) return v;
        if (size <= 1) continue;
      }
      switch (rng.below(3)) {
        case 0: {  // application
          if (size < 3) break;
          Type arg_ty = random_type(rng, cfg, 1);
          size_t sf = 1 + rng.below(size - 2);
          auto f = term(g, t_arrow(arg_ty, a), sf);
          if (!f) break;
          auto x = term(g, arg_ty, size - 1 - sf);
          if (!x) break;
          return lc::app(*f, *x);
        }
        case 1: {  // let
          if (size < 3) break;
          Type bound_ty = random_type(rng, cfg, 1);
          size_t sb = 1 + rng.below(size - 2);
          auto m = term(g, bound_ty, sb);
          if (!m) break;
          Name x = binder("x");
          auto n = term(g.extended(x, bound_ty), a, size - 1 - sb);
          if (!n) break;
          return lc::let_(x, *m, *n);
        }
        default: {
          if (auto v = value(g, a, size)) return v;
          break;
        }
      }
    }
    return std::nullopt;
  }
};

}  // namespace detail

// context with enough inhabitants that any small type can be produced
inline TypingContext default_gen_context(const GenConfig& cfg) {
  TypingContext g;
  int i = 0;
  for (auto& a : cfg.atom_pool) {
    g.declare(Name{"v", i++}, t_atom(a));
    g.declare(Name{"g", i++}, t_arrow(t_atom(a), t_atom(cfg.atom_pool[0])));
  }
  g.declare(Name{"h", i++},
            t_arrow(t_atom(cfg.atom_pool[0]),
                    t_arrow(t_atom(cfg.atom_pool[0]), t_atom(cfg.atom_pool[0]))));
  return g;
}

inline lc::TermC gen_typed_c(const GenConfig& cfg, const TypingContext& g, const Type& a) {
  Rng rng(cfg.seed);
  detail::CGen gen{rng, cfg};
  for (int attempt = 0; attempt < 64; ++attempt) {
    if (auto t = gen.term(g, a, cfg.max_size)) return *t;
  }
  fail(ErrKind::GenerationFailed, "no inhabitant of " + show_type(a) + " within budget");
}

// term of the requested type containing at least one redex of the rule
struct TypedRedexCase {
  lc::TermC term;
  Type type;
  TypingContext ctx;
};

inline std::optional<lc::TermC> build_redex(detail::CGen& gen, const TypingContext& g,
                                            const Type& a, size_t size, lc::RuleC rule) {
  using namespace lc;
  auto& rng = gen.rng;
  auto nonvalue = [&](const TypingContext& gg, const Type& ty,
                      size_t sz) -> std::optional<TermC> {
    auto t = gen.term(gg, ty, sz < 3 ? 1 : sz - 2);
    if (!t) return std::nullopt;
    if (is_value(*t)) {
      Name z = gen.binder("z");
      return let_(z, *t, var(z));
    }
    return t;
  };
  switch (rule) {
    case RuleC::B: {
      Type a0 = detail::random_type(rng, gen.cfg, 1);
      Name x = gen.binder("x");
      auto body = gen.term(g.extended(x, a0), a, size / 2 + 1);
      auto arg = gen.term(g, a0, size / 2 + 1);
      if (!body || !arg) return std::nullopt;
      return app(lam(x, *body), *arg);
    }
    case RuleC::LetV: {
      Type a0 = detail::random_type(rng, gen.cfg, 1);
      auto v = gen.value(g, a0, size / 2 + 1);
      if (!v) return std::nullopt;
      Name x = gen.binder("x");
      auto body = gen.term(g.extended(x, a0), a, size / 2 + 1);
      if (!body) return std::nullopt;
      return let_(x, *v, *body);
    }
    case RuleC::EtaLet: {
      auto m = gen.term(g, a, size);
      if (!m) return std::nullopt;
      Name x = gen.binder("x");
      return let_(x, *m, var(x));
    }
    case RuleC::Assoc: {
      Type a0 = detail::random_type(rng, gen.cfg, 1);
      Type a1 = detail::random_type(rng, gen.cfg, 1);
      auto m = gen.term(g, a0, size / 3 + 1);
      if (!m) return std::nullopt;
      Name x = gen.binder("x");
      auto n = gen.term(g.extended(x, a0), a1, size / 3 + 1);
      if (!n) return std::nullopt;
      Name y = gen.binder("y");
      auto p = gen.term(g.extended(y, a1), a, size / 3 + 1);
      if (!p) return std::nullopt;
      return let_(y, let_(x, *m, *n), *p);
    }
    case RuleC::Let1: {
      Type a0 = detail::random_type(rng, gen.cfg, 1);
      auto f = nonvalue(g, t_arrow(a0, a), size / 2 + 1);
      auto x = gen.term(g, a0, size / 2 + 1);
      if (!f || !x) return std::nullopt;
      return app(*f, *x);
    }
    case RuleC::Let2: {
      Type a0 = detail::random_type(rng, gen.cfg, 1);
      auto f = gen.value(g, t_arrow(a0, a), size / 2 + 1);
      auto x = nonvalue(g, a0, size / 2 + 1);
      if (!f || !x) return std::nullopt;
      return app(*f, *x);
    }
  }
  return std::nullopt;
}

// a typed term with a redex of the given rule somewhere inside
inline TypedRedexCase gen_typed_redex(const GenConfig& cfg, lc::RuleC rule) {
  using namespace lc;
  Rng rng(cfg.seed);
  detail::CGen gen{rng, cfg};
  TypingContext g = default_gen_context(cfg);
  for (int attempt = 0; attempt < 64; ++attempt) {
    Type target = detail::random_type(rng, cfg, 1);
    // build the redex, then maybe wrap it in surrounding structure
    auto redex = build_redex(gen, g, target, cfg.max_size, rule);
    if (!redex) continue;
    TermC t = *redex;
    Type ty = target;
    size_t wraps = rng.below(3);
    for (size_t i = 0; i < wraps; ++i) {
      switch (rng.below(3)) {
        case 0: {  // under a lambda
          Name x = gen.binder("w");
          Type a0 = detail::random_type(rng, cfg, 1);
          // the redex may mention names bound outside; keep the context flat
          t = lam(x, t);
          ty = t_arrow(a0, ty);
          break;
        }
        case 1: {  // bound by a let
          Name x = gen.binder("w");
          auto body = gen.term(g.extended(x, ty), target, 3);
          if (body) {
            t = let_(x, t, *body);
            ty = target;
          }
          break;
        }
        default: {  // in a let body
          Type a0 = detail::random_type(rng, cfg, 1);
          auto bound = gen.term(g, a0, 3);
          if (bound) {
            Name x = gen.binder("w");
            t = let_(x, *bound, t);
          }
          break;
        }
      }
    }
    if (!redexes_c(t, {rule}).empty() && check_c(g, t, ty)) return {t, ty, g};
  }
  fail(ErrKind::GenerationFailed, std::string("no ") + rule_c_name(rule) + " case");
}

// ---------------------------------------------------------------------------
// raw (untyped) generation per grammar
// ---------------------------------------------------------------------------

inline std::vector<Name> base_scope() {
  return {Name{"x", -1}, Name{"y", -1}};
}

inline lc::TermC gen_raw_c(Rng& rng, size_t size, std::vector<Name>& scope, int& counter) {
  using namespace lc;
  if (size <= 1) return var(scope[rng.below(scope.size())]);
  switch (rng.below(4)) {
    case 0: {
      Name b{"u", counter++};
      scope.push_back(b);
      TermC body = gen_raw_c(rng, size - 1, scope, counter);
      scope.pop_back();
      return lam(b, body);
    }
    case 1: {
      size_t sl = 1 + rng.below(size - 1);
      TermC f = gen_raw_c(rng, sl, scope, counter);
      TermC a = gen_raw_c(rng, size > sl + 1 ? size - 1 - sl : 1, scope, counter);
      return app(f, a);
    }
    default: {
      size_t sl = 1 + rng.below(size - 1);
      TermC m = gen_raw_c(rng, sl, scope, counter);
      Name b{"u", counter++};
      scope.push_back(b);
      TermC n = gen_raw_c(rng, size > sl + 1 ? size - 1 - sl : 1, scope, counter);
      scope.pop_back();
      return let_(b, m, n);
    }
  }
}

inline lc::TermC gen_raw_c(Rng& rng, size_t size) {
  auto scope = base_scope();
  int counter = 0;
  return gen_raw_c(rng, size, scope, counter);
}

inline ljq::Q gen_raw_q_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                              bool with_explicit);
inline ljq::Q gen_raw_q_term(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                             bool with_explicit);

inline ljq::Q gen_raw_q_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                              bool with_explicit) {
  using namespace ljq;
  if (size <= 1) return qvar(scope[rng.below(scope.size())]);
  if (with_explicit && size >= 3 && rng.chance(0.3)) {
    size_t sl = 1 + rng.below(size - 2);
    Q v = gen_raw_q_value(rng, sl, scope, counter, with_explicit);
    Name b{"u", counter++};
    scope.push_back(b);
    Q w = gen_raw_q_value(rng, size - 1 - sl, scope, counter, with_explicit);
    scope.pop_back();
    return qcut1(v, b, w);
  }
  Name b{"u", counter++};
  scope.push_back(b);
  Q body = gen_raw_q_term(rng, size - 1, scope, counter, with_explicit);
  scope.pop_back();
  return qlam(b, body);
}

inline ljq::Q gen_raw_q_term(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                             bool with_explicit) {
  using namespace ljq;
  if (size <= 2) return qret(gen_raw_q_value(rng, size > 1 ? size - 1 : 1, scope, counter,
                                             with_explicit));
  switch (rng.below(4)) {
    case 0: return qret(gen_raw_q_value(rng, size - 1, scope, counter, with_explicit));
    case 1: {  // left introduction on a variable in scope
      Name h = scope[rng.below(scope.size())];
      size_t sl = 1 + rng.below(size - 2);
      Q v = gen_raw_q_value(rng, sl, scope, counter, with_explicit);
      Name b{"u", counter++};
      scope.push_back(b);
      Q n = gen_raw_q_term(rng, size - 1 - sl, scope, counter, with_explicit);
      scope.pop_back();
      return qli(h, v, b, n);
    }
    case 2: {
      size_t sl = 1 + rng.below(size - 2);
      Q m = gen_raw_q_term(rng, sl, scope, counter, with_explicit);
      Name b{"u", counter++};
      scope.push_back(b);
      Q n = gen_raw_q_term(rng, size - 1 - sl, scope, counter, with_explicit);
      scope.pop_back();
      return qcut(m, b, n);
    }
    default: {
      if (with_explicit) {
        size_t sl = 1 + rng.below(size - 2);
        Q v = gen_raw_q_value(rng, sl, scope, counter, with_explicit);
        Name b{"u", counter++};
        scope.push_back(b);
        Q n = gen_raw_q_term(rng, size - 1 - sl, scope, counter, with_explicit);
        scope.pop_back();
        return qcut2(v, b, n);
      }
      return qret(gen_raw_q_value(rng, size - 1, scope, counter, with_explicit));
    }
  }
}

inline ljq::Q gen_raw_q(Rng& rng, size_t size, bool with_explicit) {
  auto scope = base_scope();
  int counter = 0;
  return gen_raw_q_term(rng, size, scope, counter, with_explicit);
}

inline vfs::V gen_raw_vfs_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter);
inline vfs::V gen_raw_vfs_term(Rng& rng, size_t size, std::vector<Name>& scope, int& counter);

inline vfs::V gen_raw_vfs_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter) {
  using namespace vfs;
  if (size <= 1) return vvar(scope[rng.below(scope.size())]);
  Name b{"u", counter++};
  scope.push_back(b);
  V body = gen_raw_vfs_term(rng, size - 1, scope, counter);
  scope.pop_back();
  return vlam(b, body);
}

inline vfs::V gen_raw_vfs_term(Rng& rng, size_t size, std::vector<Name>& scope, int& counter) {
  using namespace vfs;
  if (size <= 2 || rng.chance(0.35))
    return vret(gen_raw_vfs_value(rng, size > 1 ? size - 1 : 1, scope, counter));
  size_t sv = 1 + rng.below(size - 2);
  V val = gen_raw_vfs_value(rng, sv, scope, counter);
  size_t rest = size - 1 - sv;
  if (rest >= 3 && rng.chance(0.5)) {
    size_t sa = 1 + rng.below(rest - 2);
    V arg = gen_raw_vfs_value(rng, sa, scope, counter);
    Name b{"u", counter++};
    scope.push_back(b);
    V body = gen_raw_vfs_term(rng, rest - 1 - sa, scope, counter);
    scope.pop_back();
    return vcut(val, vgapp(arg, b, body));
  }
  Name b{"u", counter++};
  scope.push_back(b);
  V body = gen_raw_vfs_term(rng, rest >= 1 ? rest : 1, scope, counter);
  scope.pop_back();
  return vcut(val, vbind(b, body));
}

inline vfs::V gen_raw_vfs(Rng& rng, size_t size) {
  auto scope = base_scope();
  int counter = 0;
  return gen_raw_vfs_term(rng, size, scope, counter);
}

inline ds::G gen_raw_ga(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                        bool cnf_only);

inline ds::G gen_raw_ga_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                              bool cnf_only) {
  using namespace ds;
  if (size <= 1) return gvar(scope[rng.below(scope.size())]);
  Name b{"u", counter++};
  scope.push_back(b);
  G body = gen_raw_ga(rng, size - 1, scope, counter, cnf_only);
  scope.pop_back();
  return glam(b, body);
}

inline ds::G gen_raw_ga(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                        bool cnf_only) {
  using namespace ds;
  if (size >= 4 && rng.chance(0.55)) {
    size_t sh = 1 + rng.below(size - 3);
    size_t sa = 1 + rng.below(size - 2 - sh);
    G head = cnf_only ? gen_raw_ga_value(rng, sh, scope, counter, true)
                      : gen_raw_ga(rng, sh, scope, counter, false);
    G arg = cnf_only ? gen_raw_ga_value(rng, sa, scope, counter, true)
                     : gen_raw_ga(rng, sa, scope, counter, false);
    Name b{"u", counter++};
    scope.push_back(b);
    size_t sc = size - 1 - sh - sa;
    G cont = gen_raw_ga(rng, sc >= 1 ? sc : 1, scope, counter, cnf_only);
    scope.pop_back();
    return gapp(head, arg, b, cont);
  }
  return gen_raw_ga_value(rng, size, scope, counter, cnf_only);
}

inline ds::G gen_raw_ga(Rng& rng, size_t size, bool cnf_only) {
  auto scope = base_scope();
  int counter = 0;
  return gen_raw_ga(rng, size, scope, counter, cnf_only);
}

// value-enclosed style, respecting the context-class constraint
inline lc::TermC gen_raw_ves_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter);
inline lc::TermC gen_raw_ves_term(Rng& rng, size_t size, std::vector<Name>& scope, int& counter);

inline lc::TermC gen_raw_ves_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter) {
  using namespace lc;
  if (size <= 1) return var(scope[rng.below(scope.size())]);
  Name b{"u", counter++};
  scope.push_back(b);
  TermC body = gen_raw_ves_term(rng, size - 1, scope, counter);
  scope.pop_back();
  return lam(b, body);
}

inline lc::TermC gen_raw_ves_term(Rng& rng, size_t size, std::vector<Name>& scope, int& counter) {
  using namespace lc;
  if (size <= 2) return gen_raw_ves_value(rng, size, scope, counter);
  size_t sv = 1 + rng.below(size > 3 ? size - 3 : 1);
  TermC v = gen_raw_ves_value(rng, sv, scope, counter);
  Name x{"u", counter++};
  size_t rest = size - 1 - sv;
  // second alternative: let y := x W in N with x absent from W and N
  if (rest >= 4 && rng.chance(0.45)) {
    size_t sw = 1 + rng.below(rest - 3);
    TermC w = gen_raw_ves_value(rng, sw, scope, counter);  // x not in scope here
    Name y{"u", counter++};
    scope.push_back(y);
    TermC n = gen_raw_ves_term(rng, rest - 2 - sw, scope, counter);
    scope.pop_back();
    return let_(x, v, let_(y, app(var(x), w), n));
  }
  scope.push_back(x);
  TermC n = gen_raw_ves_term(rng, rest >= 1 ? rest : 1, scope, counter);
  scope.pop_back();
  return let_(x, v, n);
}

inline lc::TermC gen_raw_ves(Rng& rng, size_t size) {
  auto scope = base_scope();
  int counter = 0;
  return gen_raw_ves_term(rng, size, scope, counter);
}

inline lc::TermC gen_raw_ces_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter);
inline lc::TermC gen_raw_ces_term(Rng& rng, size_t size, std::vector<Name>& scope, int& counter);

inline lc::TermC gen_raw_ces_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter) {
  using namespace lc;
  if (size <= 1) return var(scope[rng.below(scope.size())]);
  Name b{"u", counter++};
  scope.push_back(b);
  TermC body = gen_raw_ces_term(rng, size - 1, scope, counter);
  scope.pop_back();
  return lam(b, body);
}

inline lc::TermC gen_raw_ces_term(Rng& rng, size_t size, std::vector<Name>& scope, int& counter) {
  using namespace lc;
  if (size <= 4) return gen_raw_ces_value(rng, size, scope, counter);
  size_t sv = 1 + rng.below(size - 4);
  size_t sw = 1 + rng.below(size - 3 - sv);
  TermC v = gen_raw_ces_value(rng, sv, scope, counter);
  TermC w = gen_raw_ces_value(rng, sw, scope, counter);
  Name x{"u", counter++};
  scope.push_back(x);
  TermC n = gen_raw_ces_term(rng, size - 2 - sv - sw, scope, counter);
  scope.pop_back();
  return let_(x, app(v, w), n);
}

inline lc::TermC gen_raw_ces(Rng& rng, size_t size) {
  auto scope = base_scope();
  int counter = 0;
  return gen_raw_ces_term(rng, size, scope, counter);
}

// commands with the covariable used linearly, by construction
inline cps::C gen_raw_cps_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                                cps::Mode mode);

inline cps::C gen_raw_cps_command(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                                  cps::Mode mode) {
  using namespace cps;
  auto cont = [&](size_t sz) -> C {
    if (mode == Mode::RCPS && (sz <= 1 || rng.chance(0.3))) return kvar();
    Name b{"u", counter++};
    scope.push_back(b);
    C body = gen_raw_cps_command(rng, sz > 1 ? sz - 1 : 1, scope, counter, mode);
    scope.pop_back();
    return klam(b, body);
  };
  if (size <= 2 || rng.chance(0.3)) {
    C v = gen_raw_cps_value(rng, size > 1 ? size - 1 : 1, scope, counter, mode);
    if (mode == Mode::CPS) return kapp(v);
    return appk(kvar(), v);
  }
  if (rng.chance(0.5)) {
    size_t sk = 1 + rng.below(size - 1);
    C k = cont(sk);
    C v = gen_raw_cps_value(rng, size > sk + 1 ? size - 1 - sk : 1, scope, counter, mode);
    return appk(k, v);
  }
  size_t sv = 1 + rng.below(size > 3 ? size - 3 : 1);
  size_t sw = 1 + rng.below(size > sv + 2 ? size - sv - 2 : 1);
  C v = gen_raw_cps_value(rng, sv, scope, counter, mode);
  C w = gen_raw_cps_value(rng, sw, scope, counter, mode);
  C k = cont(size > sv + sw + 1 ? size - 1 - sv - sw : 1);
  return appvwk(v, w, k);
}

inline cps::C gen_raw_cps_value(Rng& rng, size_t size, std::vector<Name>& scope, int& counter,
                                cps::Mode mode) {
  using namespace cps;
  if (size <= 2) return cvar(scope[rng.below(scope.size())]);
  Name b{"u", counter++};
  scope.push_back(b);
  C body = gen_raw_cps_command(rng, size - 2, scope, counter, mode);
  scope.pop_back();
  return clam(b, lamk(body));
}

inline cps::C gen_raw_cps(Rng& rng, size_t size, cps::Mode mode) {
  auto scope = base_scope();
  int counter = 0;
  return gen_raw_cps_command(rng, size, scope, counter, mode);
}

// ---------------------------------------------------------------------------
// exhaustive enumeration up to alpha-equivalence
// ---------------------------------------------------------------------------

// Binders take canonical depth-indexed names, so each alpha-class is built
// exactly once; the rewrite relations are alpha-invariant, which makes the
// representative as good as the whole class.
namespace detail {

inline Name enum_binder(int depth) { return Name{"b", depth}; }

template <class Fn>
void enum_c_terms(size_t size, int depth, const Fn& fn) {
  using namespace lc;
  if (size == 0) return;
  if (size == 1) {
    fn(var(Name{"x", -1}));
    fn(var(Name{"y", -1}));
    for (int i = 0; i < depth; ++i) fn(var(enum_binder(i)));
    return;
  }
  enum_c_terms(size - 1, depth + 1, [&](const TermC& b) { fn(lam(enum_binder(depth), b)); });
  for (size_t ls = 1; ls + 1 < size; ++ls) {
    enum_c_terms(ls, depth, [&](const TermC& f) {
      enum_c_terms(size - 1 - ls, depth, [&](const TermC& a) { fn(app(f, a)); });
    });
    enum_c_terms(ls, depth, [&](const TermC& m) {
      enum_c_terms(size - 1 - ls, depth + 1,
                   [&](const TermC& n) { fn(let_(enum_binder(depth), m, n)); });
    });
  }
}

template <class Fn>
void enum_q_values(size_t size, int depth, const Fn& fn);

template <class Fn>
void enum_q_terms(size_t size, int depth, const Fn& fn) {
  using namespace ljq;
  if (size < 2) return;
  enum_q_values(size - 1, depth, [&](const Q& v) { fn(qret(v)); });
  if (size >= 4) {
    // heads range over everything in scope
    std::vector<Name> heads = {Name{"x", -1}, Name{"y", -1}};
    for (int i = 0; i < depth; ++i) heads.push_back(enum_binder(i));
    for (size_t ls = 1; ls + 2 < size; ++ls) {
      enum_q_values(ls, depth, [&](const Q& v) {
        enum_q_terms(size - 1 - ls, depth + 1, [&](const Q& n) {
          for (auto& h : heads) fn(qli(h, v, enum_binder(depth), n));
        });
      });
    }
  }
  for (size_t ls = 2; ls + 2 < size; ++ls) {
    enum_q_terms(ls, depth, [&](const Q& m) {
      enum_q_terms(size - 1 - ls, depth + 1,
                   [&](const Q& n) { fn(qcut(m, enum_binder(depth), n)); });
    });
  }
}

template <class Fn>
void enum_q_values(size_t size, int depth, const Fn& fn) {
  using namespace ljq;
  if (size == 0) return;
  if (size == 1) {
    fn(qvar(Name{"x", -1}));
    fn(qvar(Name{"y", -1}));
    for (int i = 0; i < depth; ++i) fn(qvar(enum_binder(i)));
    return;
  }
  enum_q_terms(size - 1, depth + 1, [&](const Q& b) { fn(qlam(enum_binder(depth), b)); });
}

template <class Fn>
void enum_ga_terms(size_t size, int depth, const Fn& fn) {
  using namespace ds;
  if (size == 0) return;
  if (size == 1) {
    fn(gvar(Name{"x", -1}));
    fn(gvar(Name{"y", -1}));
    for (int i = 0; i < depth; ++i) fn(gvar(enum_binder(i)));
    return;
  }
  enum_ga_terms(size - 1, depth + 1, [&](const G& b) { fn(glam(enum_binder(depth), b)); });
  for (size_t hs = 1; hs + 2 < size; ++hs) {
    enum_ga_terms(hs, depth, [&](const G& h) {
      for (size_t as = 1; hs + as + 1 < size; ++as) {
        enum_ga_terms(as, depth, [&](const G& a) {
          enum_ga_terms(size - 1 - hs - as, depth + 1,
                        [&](const G& c) { fn(gapp(h, a, enum_binder(depth), c)); });
        });
      }
    });
  }
}

}  // namespace detail

template <class Fn>
void enumerate_c_upto(size_t max_size, const Fn& fn) {
  for (size_t s = 1; s <= max_size; ++s) detail::enum_c_terms(s, 0, fn);
}

template <class Fn>
void enumerate_q_upto(size_t max_size, const Fn& fn) {
  for (size_t s = 1; s <= max_size; ++s) detail::enum_q_terms(s, 0, fn);
}

template <class Fn>
void enumerate_ga_upto(size_t max_size, const Fn& fn) {
  for (size_t s = 1; s <= max_size; ++s) detail::enum_ga_terms(s, 0, fn);
}

// ---------------------------------------------------------------------------
// reachability search and brute-force normal forms
// ---------------------------------------------------------------------------

// a rewriting system packaged for searching
template <class T>
struct Rewriting {
  std::function<std::vector<std::pair<RuleId, Path>>(const T&)> redexes;
  std::function<T(const T&, const RuleId&, const Path&)> step;
  std::function<std::string(const T&)> key;
  std::function<size_t(const T&)> size;
};

inline Rewriting<lc::TermC> rewriting_c(const std::vector<lc::RuleC>& rules) {
  return Rewriting<lc::TermC>{
      [rules](const lc::TermC& t) {
        std::vector<std::pair<RuleId, Path>> out;
        for (auto& rx : lc::redexes_c(t, rules)) out.emplace_back(lc::rule_id_c(rx.rule), rx.path);
        return out;
      },
      [](const lc::TermC& t, const RuleId& r, const Path& p) {
        return lc::step_c(t, *lc::rule_c_of_name(r.rule), p);
      },
      [](const lc::TermC& t) { return lc::canon_key(t); }};
}

inline Rewriting<ljq::Q> rewriting_q(const std::vector<ljq::RuleQ>& rules) {
  return Rewriting<ljq::Q>{
      [rules](const ljq::Q& t) {
        std::vector<std::pair<RuleId, Path>> out;
        for (auto& rx : ljq::redexes_q(t, rules)) out.emplace_back(ljq::rule_id_q(rx.rule), rx.path);
        return out;
      },
      [](const ljq::Q& t, const RuleId& r, const Path& p) {
        return ljq::step_q(t, *ljq::rule_q_of_name(r.rule), p);
      },
      [](const ljq::Q& t) { return ljq::canon_key(t); }};
}

inline Rewriting<ljq::Q> rewriting_ljq(ljq::LjqMode mode) {
  return Rewriting<ljq::Q>{
      [mode](const ljq::Q& t) {
        std::vector<std::pair<RuleId, Path>> out;
        for (auto& rx : ljq::redexes_ljq(t, mode))
          out.emplace_back(ljq::rule_id_ljq(rx.rule), rx.path);
        return out;
      },
      [mode](const ljq::Q& t, const RuleId& r, const Path& p) {
        return ljq::step_ljq(t, std::stoi(r.rule), p, mode);
      },
      [](const ljq::Q& t) { return ljq::canon_key(t); }};
}

inline Rewriting<ljq::Q> rewriting_lnf() {
  return Rewriting<ljq::Q>{
      [](const ljq::Q& t) {
        std::vector<std::pair<RuleId, Path>> out;
        for (auto& rx : ljq::redexes_lnf(t)) out.emplace_back(ljq::rule_id_lnf(rx.rule), rx.path);
        return out;
      },
      [](const ljq::Q& t, const RuleId& r, const Path& p) {
        return ljq::step_lnf(t, r.rule == "B_v" ? ljq::RuleLnf::Bv : ljq::RuleLnf::SigmaV, p);
      },
      [](const ljq::Q& t) { return ljq::canon_key(t); }};
}

inline Rewriting<vfs::V> rewriting_vfs() {
  return Rewriting<vfs::V>{
      [](const vfs::V& t) {
        std::vector<std::pair<RuleId, Path>> out;
        for (auto& rx : vfs::redexes_vfs(t)) out.emplace_back(vfs::rule_id_vfs(rx.rule), rx.path);
        return out;
      },
      [](const vfs::V& t, const RuleId& r, const Path& p) {
        return vfs::step_vfs(t, r.rule == "B_v" ? vfs::RuleVfs::Bv : vfs::RuleVfs::SigmaV, p);
      },
      [](const vfs::V& t) { return vfs::canon_key(t); }};
}

inline Rewriting<cps::C> rewriting_cps(cps::Mode mode) {
  return Rewriting<cps::C>{
      [mode](const cps::C& t) {
        std::vector<std::pair<RuleId, Path>> out;
        for (auto& rx : cps::redexes_cps(t, mode))
          out.emplace_back(cps::rule_id_cps(rx.rule, mode), rx.path);
        return out;
      },
      [mode](const cps::C& t, const RuleId& r, const Path& p) {
        for (auto rr : cps::rules_for_mode(mode))
          if (r.rule == cps::rule_cps_name(rr)) return cps::step_cps(t, rr, p, mode);
        fail(ErrKind::Contract, "rule not in mode");
      },
      [](const cps::C& t) { return cps::canon_key(t); }};
}

inline Rewriting<ds::G> rewriting_ga(const std::vector<ds::RuleGa>& rules) {
  return Rewriting<ds::G>{
      [rules](const ds::G& t) {
        std::vector<std::pair<RuleId, Path>> out;
        for (auto& rx : ds::redexes_ga(t, rules)) out.emplace_back(ds::rule_id_ga(rx.rule), rx.path);
        return out;
      },
      [](const ds::G& t, const RuleId& r, const Path& p) {
        using ds::RuleGa;
        RuleGa rr = r.rule == "pi1" ? RuleGa::Pi1 : r.rule == "pi2" ? RuleGa::Pi2 : RuleGa::BetaV;
        return ds::step_ga(t, rr, p);
      },
      [](const ds::G& t) { return ds::canon_key(t); }};
}

// all normal forms reachable from t, up to alpha; fuel caps explored states
template <class T>
std::vector<T> brute_force_normal_forms(const Rewriting<T>& sys, const T& t, size_t fuel = 100000) {
  std::vector<T> nfs;
  std::unordered_set<std::string> seen, nf_keys;
  std::deque<T> queue;
  queue.push_back(t);
  seen.insert(sys.key(t));
  size_t expanded = 0;
  while (!queue.empty()) {
    if (++expanded > fuel) fail(ErrKind::FuelExhausted, "state budget exceeded");
    T cur = queue.front();
    queue.pop_front();
    auto rs = sys.redexes(cur);
    if (rs.empty()) {
      if (nf_keys.insert(sys.key(cur)).second) nfs.push_back(cur);
      continue;
    }
    for (auto& [rule, path] : rs) {
      T next = sys.step(cur, rule, path);
      if (seen.insert(sys.key(next)).second) queue.push_back(next);
    }
  }
  return nfs;
}

// breadth-first witness that target is reachable from start
template <class T>
std::optional<Trace<T>> reaches(const Rewriting<T>& sys, const T& start, const T& target,
                                size_t fuel = 1000) {
  std::string want = sys.key(target);
  if (sys.key(start) == want) return Trace<T>{start, {}};
  struct Node {
    T term;
    int parent;
    RuleId rule;
    Path path;
  };
  std::vector<Node> nodes;
  std::unordered_set<std::string> seen;
  nodes.push_back({start, -1, RuleId{}, {}});
  seen.insert(sys.key(start));
  size_t expanded = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (++expanded > fuel) return std::nullopt;
    auto rs = sys.redexes(nodes[i].term);
    for (auto& [rule, path] : rs) {
      T next = sys.step(nodes[i].term, rule, path);
      std::string key = sys.key(next);
      if (!seen.insert(key).second) continue;
      nodes.push_back({next, static_cast<int>(i), rule, path});
      if (key == want) {
        // rebuild the path of steps
        std::vector<TraceStep<T>> steps;
        for (int at = static_cast<int>(nodes.size()) - 1; at > 0; at = nodes[at].parent)
          steps.push_back({nodes[at].rule, nodes[at].path, nodes[at].term});
        std::reverse(steps.begin(), steps.end());
        return Trace<T>{start, std::move(steps)};
      }
    }
  }
  return std::nullopt;
}

}  // namespace cbvkit::gen

#endif  // CBVKIT_GEN_HPP
