#include "stwmc/formula_io.hpp"

#include <sstream>
#include <vector>

#include "stwmc/error.hpp"

namespace stwmc {

namespace {

struct Sexp {
  std::string atom;          // nonempty for atoms
  std::vector<Sexp> kids;    // nonempty for lists
  bool is_atom() const { return !atom.empty(); }
  const std::string& head() const {
    if (is_atom() || kids.empty() || !kids[0].is_atom())
      throw ParseError("expected (op ...) form");
    return kids[0].atom;
  }
  size_t arity() const { return kids.size() - 1; }
  const Sexp& arg(size_t i) const { return kids[i + 1]; }
};

struct Lexer {
  const std::string& s;
  size_t i = 0;
  void skip() {
    while (i < s.size()) {
      if (isspace((unsigned char)s[i])) {
        ++i;
      } else if (s[i] == ';') {  // ; comment to end of line
        while (i < s.size() && s[i] != '\n') ++i;
      } else {
        break;
      }
    }
  }
  Sexp parse() {
    skip();
    if (i >= s.size()) throw ParseError("unexpected end of formula");
    if (s[i] == '(') {
      ++i;
      Sexp e;
      while (true) {
        skip();
        if (i >= s.size()) throw ParseError("missing ')'");
        if (s[i] == ')') {
          ++i;
          break;
        }
        e.kids.push_back(parse());
      }
      if (e.kids.empty()) throw ParseError("empty () form");
      return e;
    }
    size_t start = i;
    while (i < s.size() && !isspace((unsigned char)s[i]) && s[i] != '(' && s[i] != ')') ++i;
    Sexp e;
    e.atom = s.substr(start, i - start);
    return e;
  }
};

Sexp parse_sexp(const std::string& text) {
  Lexer lx{text};
  Sexp e = lx.parse();
  lx.skip();
  if (lx.i != text.size()) throw ParseError("trailing input after formula");
  return e;
}

const std::string& atom(const Sexp& e) {
  if (!e.is_atom()) throw ParseError("expected a name");
  return e.atom;
}

// --- MSO ---

MsoPtr mso_of(const Sexp& e) {
  using F = MsoFormula;
  if (e.is_atom()) {
    if (e.atom == "true") return F::ltrue();
    if (e.atom == "false") return F::lfalse();
    throw ParseError("bad MSO atom: " + e.atom);
  }
  const std::string& h = e.head();
  auto need = [&](size_t n) {
    if (e.arity() != n) throw ParseError("(" + h + " ..) expects " + std::to_string(n) + " arguments");
  };
  if (h == "label") { need(2); return F::letter(atom(e.arg(0)), atom(e.arg(1))); }
  if (h == "on") { need(2); return F::on_proc(atom(e.arg(0)), atom(e.arg(1))); }
  if (h == "eq") { need(2); return F::eq(atom(e.arg(0)), atom(e.arg(1))); }
  if (h == "succ") { need(2); return F::succ(atom(e.arg(0)), atom(e.arg(1))); }
  if (h == "match") {
    need(3);
    std::string d = atom(e.arg(0));
    if (d == "*") d = "";
    return F::match(d, atom(e.arg(1)), atom(e.arg(2)));
  }
  if (h == "in") { need(2); return F::in_set(atom(e.arg(0)), atom(e.arg(1))); }
  if (h == "not") { need(1); return F::lnot(mso_of(e.arg(0))); }
  if (h == "or" || h == "and") {
    std::vector<MsoPtr> xs;
    for (size_t i = 0; i < e.arity(); ++i) xs.push_back(mso_of(e.arg(i)));
    return h == "or" ? F::big_or(xs) : F::big_and(xs);
  }
  if (h == "implies") { need(2); return F::implies(mso_of(e.arg(0)), mso_of(e.arg(1))); }
  if (h == "exists1") { need(2); return F::exists1(atom(e.arg(0)), mso_of(e.arg(1))); }
  if (h == "exists2") { need(2); return F::exists2(atom(e.arg(0)), mso_of(e.arg(1))); }
  if (h == "forall1") { need(2); return F::forall1(atom(e.arg(0)), mso_of(e.arg(1))); }
  if (h == "forall2") { need(2); return F::forall2(atom(e.arg(0)), mso_of(e.arg(1))); }
  if (h == "le") { need(2); return F::le(atom(e.arg(0)), atom(e.arg(1))); }
  throw ParseError("unknown MSO operator: " + h);
}

// --- PDL ---

PdlPathPtr path_of(const Sexp& e);

PdlStatePtr state_of(const Sexp& e) {
  using S = PdlState;
  if (e.is_atom()) {
    if (e.atom == "true") return S::ltrue();
    if (e.atom == "false") return S::lfalse();
    throw ParseError("bad PDL state atom: " + e.atom);
  }
  const std::string& h = e.head();
  auto need = [&](size_t n) {
    if (e.arity() != n) throw ParseError("(" + h + " ..) expects " + std::to_string(n) + " arguments");
  };
  if (h == "ap" || h == "on") { need(1); return S::ap_atom(atom(e.arg(0))); }
  if (h == "not") { need(1); return S::lnot(state_of(e.arg(0))); }
  if (h == "or" || h == "and") {
    std::vector<PdlStatePtr> xs;
    for (size_t i = 0; i < e.arity(); ++i) xs.push_back(state_of(e.arg(i)));
    return h == "or" ? S::big_or(xs) : S::big_and(xs);
  }
  if (h == "implies") { need(2); return S::implies(state_of(e.arg(0)), state_of(e.arg(1))); }
  if (h == "dia") { need(2); return S::dia(path_of(e.arg(0)), state_of(e.arg(1))); }
  if (h == "box") { need(2); return S::box(path_of(e.arg(0)), state_of(e.arg(1))); }
  if (h == "loop") { need(1); return S::loop(path_of(e.arg(0))); }
  throw ParseError("unknown PDL state operator: " + h);
}

PdlPathPtr path_of(const Sexp& e) {
  using P = PdlPath;
  if (e.is_atom()) throw ParseError("bad PDL path atom: " + e.atom);
  const std::string& h = e.head();
  auto need = [&](size_t n) {
    if (e.arity() != n) throw ParseError("(" + h + " ..) expects " + std::to_string(n) + " arguments");
  };
  if (h == "edge") { need(1); return P::edge_label(atom(e.arg(0))); }
  if (h == "test") { need(1); return P::test_of(state_of(e.arg(0))); }
  if (h == "star") { need(1); return P::star(path_of(e.arg(0))); }
  if (h == "plus") { need(1); return P::plus(path_of(e.arg(0))); }
  if (h == "conv") { need(1); return P::conv(path_of(e.arg(0))); }
  if (h == "cat" || h == "alt" || h == "cap") {
    std::vector<PdlPathPtr> xs;
    for (size_t i = 0; i < e.arity(); ++i) xs.push_back(path_of(e.arg(i)));
    if (xs.empty()) throw ParseError("(" + h + ") needs arguments");
    if (h == "cat") return P::cat(xs);
    if (h == "alt") return P::alt(xs);
    return P::cap(xs);
  }
  if (h == "pow") { need(2); return P::power(path_of(e.arg(0)), std::stoi(atom(e.arg(1)))); }
  if (h == "powlt") { need(2); return P::power_lt(path_of(e.arg(0)), std::stoi(atom(e.arg(1)))); }
  throw ParseError("unknown PDL path operator: " + h);
}

PdlSentencePtr sentence_of(const Sexp& e) {
  if (e.is_atom()) throw ParseError("bad PDL sentence: " + e.atom);
  const std::string& h = e.head();
  if (h == "E") {
    if (e.arity() != 1) throw ParseError("(E f) expects one argument");
    return PdlSentence::exists(state_of(e.arg(0)));
  }
  if (h == "A") {
    if (e.arity() != 1) throw ParseError("(A f) expects one argument");
    return PdlSentence::always(state_of(e.arg(0)));
  }
  if (h == "not") {
    if (e.arity() != 1) throw ParseError("(not f) expects one argument");
    return PdlSentence::lnot(sentence_of(e.arg(0)));
  }
  if (h == "or" || h == "and") {
    if (e.arity() == 0) throw ParseError("(" + h + ") needs arguments");
    PdlSentencePtr acc = sentence_of(e.arg(0));
    for (size_t i = 1; i < e.arity(); ++i)
      acc = h == "or" ? PdlSentence::lor(acc, sentence_of(e.arg(i)))
                      : PdlSentence::land(acc, sentence_of(e.arg(i)));
    return acc;
  }
  throw ParseError("unknown PDL sentence operator: " + h);
}

}  // namespace

MsoPtr parse_mso(const std::string& text) { return mso_of(parse_sexp(text)); }
PdlSentencePtr parse_pdl_sentence(const std::string& text) {
  return sentence_of(parse_sexp(text));
}
PdlStatePtr parse_pdl_state(const std::string& text) { return state_of(parse_sexp(text)); }
PdlPathPtr parse_pdl_path(const std::string& text) { return path_of(parse_sexp(text)); }

std::string pdl_path_to_text(const PdlPathPtr& p) {
  using K = PdlPath::Kind;
  std::ostringstream o;
  switch (p->kind) {
    case K::Edge: o << "(edge " << p->edge << ")"; break;
    case K::Test: o << "(test " << pdl_state_to_text(p->test) << ")"; break;
    case K::Alt:
    case K::Cat:
    case K::Cap: {
      o << (p->kind == K::Alt ? "(alt" : p->kind == K::Cat ? "(cat" : "(cap");
      for (const auto& q : p->parts) o << " " << pdl_path_to_text(q);
      o << ")";
      break;
    }
    case K::Star: o << "(star " << pdl_path_to_text(p->parts[0]) << ")"; break;
    case K::Conv: o << "(conv " << pdl_path_to_text(p->parts[0]) << ")"; break;
  }
  return o.str();
}

std::string pdl_state_to_text(const PdlStatePtr& s) {
  using K = PdlState::Kind;
  std::ostringstream o;
  switch (s->kind) {
    case K::Ap: o << "(ap " << s->ap << ")"; break;
    case K::True: o << "true"; break;
    case K::Or:
      o << "(or " << pdl_state_to_text(s->lhs) << " " << pdl_state_to_text(s->rhs) << ")";
      break;
    case K::Not: o << "(not " << pdl_state_to_text(s->lhs) << ")"; break;
    case K::Dia:
      o << "(dia " << pdl_path_to_text(s->path) << " " << pdl_state_to_text(s->lhs) << ")";
      break;
    case K::Loop: o << "(loop " << pdl_path_to_text(s->path) << ")"; break;
  }
  return o.str();
}

std::string pdl_sentence_to_text(const PdlSentencePtr& f) {
  using K = PdlSentence::Kind;
  std::ostringstream o;
  switch (f->kind) {
    case K::E: o << "(E " << pdl_state_to_text(f->state) << ")"; break;
    case K::Or:
      o << "(or " << pdl_sentence_to_text(f->lhs) << " " << pdl_sentence_to_text(f->rhs) << ")";
      break;
    case K::Not: o << "(not " << pdl_sentence_to_text(f->lhs) << ")"; break;
  }
  return o.str();
}

}  // namespace stwmc
