#ifndef CBVKIT_SYNTAX_HPP
#define CBVKIT_SYNTAX_HPP

#include <cctype>
#include <sstream>

#include "cbvkit/core.hpp"
#include "cbvkit/cps.hpp"
#include "cbvkit/direct_style.hpp"
#include "cbvkit/lambda_c.hpp"
#include "cbvkit/ljq.hpp"
#include "cbvkit/vfs.hpp"

// Concrete syntax.  One lexer for every calculus; parsing is recursive
// descent, printing is minimal-parenthesis.
//
//   source terms        \x. M    M N    let x = M in N
//   sequent terms       ^V    x(V, y. N)    cut(M, x. N)    cut_v(V, x. N)
//                       cut1(V, x. W)    cut2(V, x. N)
//   value-filling       cut_v(V, x. N)    cut_v(V, (W, x. N))
//   continuation side   \k. M    K @ V    V W K    k @ V
//   generalized apps    M(N, x. P)
//   types               a    A -> B    _|_
//
// The identifier k is the covariable and cannot be used as a name anywhere
// else.  Identifiers ending in _<digits> denote freshened names.
namespace cbvkit::syntax {

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

enum class Tok {
  Ident,
  KwLet,
  KwIn,
  KwCut,
  KwCutV,
  KwCut1,
  KwCut2,
  KwK,
  Lambda,
  Dot,
  LParen,
  RParen,
  Comma,
  Eq,
  Colon,
  At,
  Caret,
  Arrow,
  Bot,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line = 1, col = 1;
};

inline Name ident_to_name(const std::string& s) {
  auto us = s.rfind('_');
  if (us != std::string::npos && us + 1 < s.size()) {
    std::string digits = s.substr(us + 1);
    bool all = !digits.empty();
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) all = false;
    // leading zeros stay part of the base so printing round-trips
    if (all && us > 0 && (digits == "0" || digits[0] != '0')) {
      return Name{s.substr(0, us), static_cast<std::int32_t>(std::stol(digits))};
    }
  }
  return Name{s, -1};
}

class Lexer {
 public:
  explicit Lexer(std::string src) : src_(std::move(src)) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrKind::SyntaxError,
         msg + " at " + std::to_string(tok_.line) + ":" + std::to_string(tok_.col));
  }

  Token expect(Tok kind, const std::string& what) {
    if (tok_.kind != kind) error("expected " + what);
    return next();
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_ = Token{Tok::End, "", line_, col_};
      return;
    }
    char c = src_[pos_];
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two('-', '>')) {
      bump();
      bump();
      tok_.kind = Tok::Arrow;
      tok_.text = "->";
      return;
    }
    if (c == '_' && pos_ + 2 < src_.size() && src_[pos_ + 1] == '|' && src_[pos_ + 2] == '_') {
      bump();
      bump();
      bump();
      tok_.kind = Tok::Bot;
      tok_.text = "_|_";
      return;
    }
    switch (c) {
      case '\\': bump(); tok_ = mk(Tok::Lambda, "\\"); return;
      case '.': bump(); tok_ = mk(Tok::Dot, "."); return;
      case '(': bump(); tok_ = mk(Tok::LParen, "("); return;
      case ')': bump(); tok_ = mk(Tok::RParen, ")"); return;
      case ',': bump(); tok_ = mk(Tok::Comma, ","); return;
      case '=': bump(); tok_ = mk(Tok::Eq, "="); return;
      case ':': bump(); tok_ = mk(Tok::Colon, ":"); return;
      case '@': bump(); tok_ = mk(Tok::At, "@"); return;
      case '^': bump(); tok_ = mk(Tok::Caret, "^"); return;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
              src_[pos_] == '\'')) {
        s += src_[pos_];
        bump();
      }
      Tok k = Tok::Ident;
      if (s == "let") k = Tok::KwLet;
      else if (s == "in") k = Tok::KwIn;
      else if (s == "cut") k = Tok::KwCut;
      else if (s == "cut_v") k = Tok::KwCutV;
      else if (s == "cut1") k = Tok::KwCut1;
      else if (s == "cut2") k = Tok::KwCut2;
      else if (s == "k") k = Tok::KwK;
      tok_ = mk(k, s);
      return;
    }
    fail(ErrKind::SyntaxError, std::string("unexpected character '") + c + "' at " +
                                   std::to_string(line_) + ":" + std::to_string(col_));
  }

  Token mk(Tok k, std::string s) { return Token{k, std::move(s), tok_.line, tok_.col}; }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_{Tok::End, "", 1, 1};
};

inline Name parse_binder(Lexer& lx) {
  if (lx.peek().kind == Tok::KwK)
    fail(ErrKind::ReservedName, "k is the covariable and cannot be bound");
  Token t = lx.expect(Tok::Ident, "a name");
  return ident_to_name(t.text);
}

inline Name parse_plain_name(Lexer& lx) {
  if (lx.peek().kind == Tok::KwK)
    fail(ErrKind::ReservedName, "k is the covariable and cannot be used here");
  Token t = lx.expect(Tok::Ident, "a name");
  return ident_to_name(t.text);
}

// ---------------------------------------------------------------------------
// types
// ---------------------------------------------------------------------------

inline Type parse_type(Lexer& lx);

inline Type parse_type_atom(Lexer& lx) {
  if (lx.peek().kind == Tok::Bot) {
    lx.next();
    return t_bot();
  }
  if (lx.peek().kind == Tok::LParen) {
    lx.next();
    Type t = parse_type(lx);
    lx.expect(Tok::RParen, ")");
    return t;
  }
  Token t = lx.expect(Tok::Ident, "a type atom");
  return t_atom(t.text);
}

inline Type parse_type(Lexer& lx) {
  Type l = parse_type_atom(lx);
  if (lx.peek().kind == Tok::Arrow) {
    lx.next();
    return t_arrow(l, parse_type(lx));
  }
  return l;
}

inline Type parse_type_string(const std::string& s) {
  Lexer lx(s);
  Type t = parse_type(lx);
  if (lx.peek().kind != Tok::End) lx.error("trailing input after type");
  return t;
}

// "x : a, f : a -> b"
inline TypingContext parse_context(const std::string& s) {
  TypingContext g;
  Lexer lx(s);
  if (lx.peek().kind == Tok::End) return g;
  for (;;) {
    Name n = parse_plain_name(lx);
    lx.expect(Tok::Colon, ":");
    g.declare(n, parse_type(lx));
    if (lx.peek().kind != Tok::Comma) break;
    lx.next();
  }
  if (lx.peek().kind != Tok::End) lx.error("trailing input after context");
  return g;
}

// ---------------------------------------------------------------------------
// source calculus
// ---------------------------------------------------------------------------

inline lc::TermC parse_c_term(Lexer& lx);

inline lc::TermC parse_c_atom(Lexer& lx) {
  if (lx.peek().kind == Tok::LParen) {
    lx.next();
    lc::TermC t = parse_c_term(lx);
    lx.expect(Tok::RParen, ")");
    return t;
  }
  return lc::var(parse_plain_name(lx));
}

inline bool starts_c_atom(const Token& t) {
  return t.kind == Tok::Ident || t.kind == Tok::LParen || t.kind == Tok::KwK;
}

inline lc::TermC parse_c_term(Lexer& lx) {
  if (lx.peek().kind == Tok::Lambda) {
    lx.next();
    Name x = parse_binder(lx);
    lx.expect(Tok::Dot, ".");
    return lc::lam(x, parse_c_term(lx));
  }
  if (lx.peek().kind == Tok::KwLet) {
    lx.next();
    Name x = parse_binder(lx);
    lx.expect(Tok::Eq, "=");
    lc::TermC m = parse_c_term(lx);
    lx.expect(Tok::KwIn, "in");
    return lc::let_(x, m, parse_c_term(lx));
  }
  lc::TermC t = parse_c_atom(lx);
  while (starts_c_atom(lx.peek()) || lx.peek().kind == Tok::Lambda) {
    lc::TermC a = lx.peek().kind == Tok::Lambda ? parse_c_term(lx) : parse_c_atom(lx);
    t = lc::app(t, a);
    if (lx.peek().kind == Tok::Lambda) break;  // a lambda argument extends to the end
  }
  return t;
}

inline lc::TermC parse_c(const std::string& s) {
  Lexer lx(s);
  lc::TermC t = parse_c_term(lx);
  if (lx.peek().kind != Tok::End) lx.error("trailing input");
  return t;
}

inline std::string show_c(const lc::TermC& t, int prec = 0) {
  // prec 0: anywhere, 1: application head, 2: application argument
  return std::visit(
      overloaded{[&](const lc::CVar& x) { return show_name(x.name); },
                 [&](const lc::CLam& l) {
                   std::string s = "\\" + show_name(l.binder) + ". " + show_c(l.body, 0);
                   return prec > 0 ? "(" + s + ")" : s;
                 },
                 [&](const lc::CApp& a) {
                   std::string s = show_c(a.fun, 1) + " " + show_c(a.arg, 2);
                   return prec > 1 ? "(" + s + ")" : s;
                 },
                 [&](const lc::CLet& l) {
                   std::string s = "let " + show_name(l.binder) + " = " + show_c(l.bound, 0) +
                                   " in " + show_c(l.body, 0);
                   return prec > 0 ? "(" + s + ")" : s;
                 }},
      t->v);
}

// ---------------------------------------------------------------------------
// sequent calculi
// ---------------------------------------------------------------------------

inline ljq::Q parse_q_term(Lexer& lx);

inline ljq::Q parse_q_value(Lexer& lx) {
  if (lx.peek().kind == Tok::Lambda) {
    lx.next();
    Name x = parse_binder(lx);
    lx.expect(Tok::Dot, ".");
    return ljq::qlam(x, parse_q_term(lx));
  }
  if (lx.peek().kind == Tok::KwCut1) {
    lx.next();
    lx.expect(Tok::LParen, "(");
    ljq::Q v = parse_q_value(lx);
    lx.expect(Tok::Comma, ",");
    Name x = parse_binder(lx);
    lx.expect(Tok::Dot, ".");
    ljq::Q w = parse_q_value(lx);
    lx.expect(Tok::RParen, ")");
    return ljq::qcut1(v, x, w);
  }
  if (lx.peek().kind == Tok::LParen) {
    lx.next();
    ljq::Q v = parse_q_value(lx);
    lx.expect(Tok::RParen, ")");
    return v;
  }
  return ljq::qvar(parse_plain_name(lx));
}

inline ljq::Q parse_q_term(Lexer& lx) {
  switch (lx.peek().kind) {
    case Tok::Caret: {
      lx.next();
      return ljq::qret(parse_q_value(lx));
    }
    case Tok::KwCut: {
      lx.next();
      lx.expect(Tok::LParen, "(");
      ljq::Q m = parse_q_term(lx);
      lx.expect(Tok::Comma, ",");
      Name x = parse_binder(lx);
      lx.expect(Tok::Dot, ".");
      ljq::Q n = parse_q_term(lx);
      lx.expect(Tok::RParen, ")");
      return ljq::qcut(m, x, n);
    }
    case Tok::KwCutV: {
      lx.next();
      lx.expect(Tok::LParen, "(");
      ljq::Q v = parse_q_value(lx);
      lx.expect(Tok::Comma, ",");
      Name x = parse_binder(lx);
      lx.expect(Tok::Dot, ".");
      ljq::Q n = parse_q_term(lx);
      lx.expect(Tok::RParen, ")");
      return ljq::cutv(v, x, n);
    }
    case Tok::KwCut2: {
      lx.next();
      lx.expect(Tok::LParen, "(");
      ljq::Q v = parse_q_value(lx);
      lx.expect(Tok::Comma, ",");
      Name x = parse_binder(lx);
      lx.expect(Tok::Dot, ".");
      ljq::Q n = parse_q_term(lx);
      lx.expect(Tok::RParen, ")");
      return ljq::qcut2(v, x, n);
    }
    case Tok::Ident: {
      Name h = parse_plain_name(lx);
      lx.expect(Tok::LParen, "(");
      ljq::Q v = parse_q_value(lx);
      lx.expect(Tok::Comma, ",");
      Name y = parse_binder(lx);
      lx.expect(Tok::Dot, ".");
      ljq::Q n = parse_q_term(lx);
      lx.expect(Tok::RParen, ")");
      return ljq::qli(h, v, y, n);
    }
    default: lx.error("expected a term");
  }
}

inline ljq::Q parse_q(const std::string& s) {
  Lexer lx(s);
  ljq::Q t = parse_q_term(lx);
  if (lx.peek().kind != Tok::End) lx.error("trailing input");
  return t;
}

inline std::string show_q(const ljq::Q& t) {
  using namespace ljq;
  return std::visit(
      overloaded{[&](const QVar& x) { return show_name(x.name); },
                 [&](const QLam& l) { return "\\" + show_name(l.binder) + ". " + show_q(l.body); },
                 [&](const QCut1& c) {
                   return "cut1(" + show_q(c.val) + ", " + show_name(c.binder) + ". " +
                          show_q(c.body) + ")";
                 },
                 [&](const QRet& r) {
                   std::string v = show_q(r.val);
                   if (as_qlam(r.val) || as_qcut1(r.val)) return "^(" + v + ")";
                   return "^" + v;
                 },
                 [&](const QLi& l) {
                   return show_name(l.head) + "(" + show_q(l.val) + ", " + show_name(l.binder) +
                          ". " + show_q(l.body) + ")";
                 },
                 [&](const QCut2& c) {
                   return "cut2(" + show_q(c.val) + ", " + show_name(c.binder) + ". " +
                          show_q(c.body) + ")";
                 },
                 [&](const QCut& c) {
                   if (auto* r = as_qret(c.left))
                     return "cut_v(" + show_q(r->val) + ", " + show_name(c.binder) + ". " +
                            show_q(c.body) + ")";
                   return "cut(" + show_q(c.left) + ", " + show_name(c.binder) + ". " +
                          show_q(c.body) + ")";
                 }},
      t->v);
}

// ---------------------------------------------------------------------------
// value-filling style
// ---------------------------------------------------------------------------

inline vfs::V parse_vfs_term(Lexer& lx);

inline vfs::V parse_vfs_value(Lexer& lx) {
  if (lx.peek().kind == Tok::Lambda) {
    lx.next();
    Name x = parse_binder(lx);
    lx.expect(Tok::Dot, ".");
    return vfs::vlam(x, parse_vfs_term(lx));
  }
  if (lx.peek().kind == Tok::LParen) {
    lx.next();
    vfs::V v = parse_vfs_value(lx);
    lx.expect(Tok::RParen, ")");
    return v;
  }
  return vfs::vvar(parse_plain_name(lx));
}

inline vfs::V parse_vfs_ctx(Lexer& lx) {
  if (lx.peek().kind == Tok::LParen) {
    lx.next();
    vfs::V w = parse_vfs_value(lx);
    lx.expect(Tok::Comma, ",");
    Name x = parse_binder(lx);
    lx.expect(Tok::Dot, ".");
    vfs::V m = parse_vfs_term(lx);
    lx.expect(Tok::RParen, ")");
    return vfs::vgapp(w, x, m);
  }
  Name x = parse_binder(lx);
  lx.expect(Tok::Dot, ".");
  return vfs::vbind(x, parse_vfs_term(lx));
}

inline vfs::V parse_vfs_term(Lexer& lx) {
  if (lx.peek().kind == Tok::Caret) {
    lx.next();
    return vfs::vret(parse_vfs_value(lx));
  }
  lx.expect(Tok::KwCutV, "cut_v");
  lx.expect(Tok::LParen, "(");
  vfs::V v = parse_vfs_value(lx);
  lx.expect(Tok::Comma, ",");
  vfs::V c = parse_vfs_ctx(lx);
  lx.expect(Tok::RParen, ")");
  return vfs::vcut(v, c);
}

inline vfs::V parse_vfs(const std::string& s) {
  Lexer lx(s);
  vfs::V t = parse_vfs_term(lx);
  if (lx.peek().kind != Tok::End) lx.error("trailing input");
  return t;
}

inline std::string show_vfs(const vfs::V& t) {
  using namespace vfs;
  return std::visit(
      overloaded{[&](const VVar& x) { return show_name(x.name); },
                 [&](const VLam& l) { return "\\" + show_name(l.binder) + ". " + show_vfs(l.body); },
                 [&](const VRet& r) {
                   std::string v = show_vfs(r.val);
                   if (as_vlam(r.val)) return "^(" + v + ")";
                   return "^" + v;
                 },
                 [&](const VCut& c) {
                   return "cut_v(" + show_vfs(c.val) + ", " + show_vfs(c.ctx) + ")";
                 },
                 [&](const VBind& b) { return show_name(b.binder) + ". " + show_vfs(b.body); },
                 [&](const VGApp& g) {
                   return "(" + show_vfs(g.arg) + ", " + show_name(g.binder) + ". " +
                          show_vfs(g.body) + ")";
                 }},
      t->v);
}

// ---------------------------------------------------------------------------
// continuation-passing systems
// ---------------------------------------------------------------------------

inline cps::C parse_cps_command(Lexer& lx, cps::Mode mode);
inline cps::C parse_cps_term(Lexer& lx, cps::Mode mode);

// a lambda in command position: a value (\x. \k. M), a continuation
// (\x. command), or a term (\k. M)
inline cps::C parse_cps_lambda(Lexer& lx, cps::Mode mode) {
  lx.expect(Tok::Lambda, "\\");
  if (lx.peek().kind == Tok::KwK) {
    lx.next();
    lx.expect(Tok::Dot, ".");
    return cps::lamk(parse_cps_command(lx, mode));
  }
  Name x = parse_binder(lx);
  lx.expect(Tok::Dot, ".");
  if (lx.peek().kind == Tok::Lambda) {
    // value: the body must be a term
    return cps::clam(x, parse_cps_term(lx, mode));
  }
  return cps::klam(x, parse_cps_command(lx, mode));
}

inline cps::C parse_cps_value(Lexer& lx, cps::Mode mode) {
  if (lx.peek().kind == Tok::Lambda) {
    lx.next();
    Name x = parse_binder(lx);
    lx.expect(Tok::Dot, ".");
    return cps::clam(x, parse_cps_term(lx, mode));
  }
  if (lx.peek().kind == Tok::LParen) {
    lx.next();
    cps::C v = parse_cps_value(lx, mode);
    lx.expect(Tok::RParen, ")");
    return v;
  }
  return cps::cvar(parse_plain_name(lx));
}

inline cps::C parse_cps_term(Lexer& lx, cps::Mode mode) {
  lx.expect(Tok::Lambda, "\\");
  if (lx.peek().kind != Tok::KwK) lx.error("a term abstracts the covariable");
  lx.next();
  lx.expect(Tok::Dot, ".");
  return cps::lamk(parse_cps_command(lx, mode));
}

// an atom usable as value or continuation
inline cps::C parse_cps_atom(Lexer& lx, cps::Mode mode) {
  if (lx.peek().kind == Tok::KwK) {
    if (mode != cps::Mode::RCPS) fail(ErrKind::ModeViolation, "bare k only in the classical system");
    lx.next();
    return cps::kvar();
  }
  if (lx.peek().kind == Tok::LParen) {
    lx.next();
    cps::C t = parse_cps_lambda(lx, mode);
    lx.expect(Tok::RParen, ")");
    return t;
  }
  return cps::cvar(parse_plain_name(lx));
}

inline cps::C parse_cps_command(Lexer& lx, cps::Mode mode) {
  if (lx.peek().kind == Tok::KwK) {
    lx.next();
    lx.expect(Tok::At, "@");
    cps::C v = parse_cps_value(lx, mode);
    if (mode == cps::Mode::RCPS) return cps::appk(cps::kvar(), v);
    return cps::kapp(v);
  }
  cps::C a1 = parse_cps_atom(lx, mode);
  if (lx.peek().kind == Tok::At) {
    lx.next();
    if (!cps::is_continuation(a1)) lx.error("@ needs a continuation on the left");
    return cps::appk(a1, parse_cps_value(lx, mode));
  }
  if (!cps::is_cps_value(a1)) lx.error("a triple command starts with a value");
  cps::C a2 = parse_cps_atom(lx, mode);
  if (!cps::is_cps_value(a2)) lx.error("the second component must be a value");
  cps::C a3 = parse_cps_atom(lx, mode);
  if (!cps::is_continuation(a3)) lx.error("the third component must be a continuation");
  return cps::appvwk(a1, a2, a3);
}

// accepts a command, a term, or a bare continuation
inline cps::C parse_cps(const std::string& s, cps::Mode mode) {
  Lexer lx(s);
  cps::C t;
  if (lx.peek().kind == Tok::Lambda) {
    t = parse_cps_lambda(lx, mode);
  } else if (lx.peek().kind == Tok::KwK) {
    // could be "k" alone or "k @ V"
    Lexer probe(s);
    probe.next();
    if (probe.peek().kind == Tok::End) {
      if (mode != cps::Mode::RCPS)
        fail(ErrKind::ModeViolation, "bare k only in the classical system");
      lx.next();
      t = cps::kvar();
    } else {
      t = parse_cps_command(lx, mode);
    }
  } else {
    t = parse_cps_command(lx, mode);
  }
  if (lx.peek().kind != Tok::End) lx.error("trailing input");
  return t;
}

inline std::string show_cps(const cps::C& t) {
  using namespace cps;
  return std::visit(
      overloaded{[&](const KLamN& n) {
                   return "\\" + show_name(n.binder) + ". " + show_cps(n.body);
                 },
                 [&](const KVarN&) { return std::string("k"); },
                 [&](const AppKN& n) {
                   std::string ks = show_cps(n.k);
                   if (as_klam(n.k)) ks = "(" + ks + ")";
                   std::string vs = show_cps(n.val);
                   if (as_clam(n.val)) vs = "(" + vs + ")";
                   return ks + " @ " + vs;
                 },
                 [&](const AppVWKN& n) {
                   auto wrap = [&](const C& c) {
                     std::string s = show_cps(c);
                     if (as_clam(c) || as_klam(c)) s = "(" + s + ")";
                     return s;
                   };
                   return wrap(n.v) + " " + wrap(n.w) + " " + wrap(n.k);
                 },
                 [&](const KAppN& n) {
                   std::string vs = show_cps(n.val);
                   if (as_clam(n.val)) vs = "(" + vs + ")";
                   return "k @ " + vs;
                 },
                 [&](const ValVarN& n) { return show_name(n.name); },
                 [&](const ValLamN& n) {
                   return "\\" + show_name(n.binder) + ". " + show_cps(n.body);
                 },
                 [&](const LamKN& n) { return "\\k. " + show_cps(n.body); }},
      t->v);
}

// ---------------------------------------------------------------------------
// generalized applications
// ---------------------------------------------------------------------------

inline ds::G parse_ga_term(Lexer& lx);

inline ds::G parse_ga_atom(Lexer& lx) {
  if (lx.peek().kind == Tok::Lambda) {
    lx.next();
    Name x = parse_binder(lx);
    lx.expect(Tok::Dot, ".");
    return ds::glam(x, parse_ga_term(lx));
  }
  return ds::gvar(parse_plain_name(lx));
}

inline ds::G parse_ga_term(Lexer& lx) {
  ds::G t = parse_ga_atom(lx);
  while (lx.peek().kind == Tok::LParen) {
    lx.next();
    ds::G arg = parse_ga_term(lx);
    lx.expect(Tok::Comma, ",");
    Name x = parse_binder(lx);
    lx.expect(Tok::Dot, ".");
    ds::G cont = parse_ga_term(lx);
    lx.expect(Tok::RParen, ")");
    t = ds::gapp(t, arg, x, cont);
  }
  return t;
}

inline ds::G parse_ga(const std::string& s) {
  Lexer lx(s);
  ds::G t = parse_ga_term(lx);
  if (lx.peek().kind != Tok::End) lx.error("trailing input");
  return t;
}

inline std::string show_ga(const ds::G& t, bool head_pos = false) {
  using namespace ds;
  return std::visit(overloaded{[&](const GVar& x) { return show_name(x.name); },
                               [&](const GLam& l) {
                                 std::string s =
                                     "\\" + show_name(l.binder) + ". " + show_ga(l.body);
                                 return head_pos ? "(" + s + ")" : s;
                               },
                               [&](const GApp& a) {
                                 return show_ga(a.head, true) + "(" + show_ga(a.arg) + ", " +
                                        show_name(a.binder) + ". " + show_ga(a.cont) + ")";
                               }},
                    t->v);
}

// lambdas in head position would swallow the application syntax, so they are
// parenthesized there; everything round-trips

}  // namespace cbvkit::syntax

#endif  // CBVKIT_SYNTAX_HPP
