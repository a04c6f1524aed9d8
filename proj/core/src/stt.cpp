#include "stwmc/stt.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "stwmc/error.hpp"

namespace stwmc {

namespace {
SttPtr mk(Stt t) { return std::make_shared<Stt>(std::move(t)); }
}  // namespace

SttPtr Stt::leaf(int i, std::string a, std::string p) {
  Stt t;
  t.kind = Kind::Leaf;
  t.i = i;
  t.letter = std::move(a);
  t.proc = std::move(p);
  return mk(std::move(t));
}
SttPtr Stt::add(int i, int j, std::string edge, SttPtr sub) {
  Stt t;
  t.kind = Kind::Add;
  t.i = i;
  t.j = j;
  t.edge = std::move(edge);
  t.left = std::move(sub);
  return mk(std::move(t));
}
SttPtr Stt::forget(int i, SttPtr sub) {
  Stt t;
  t.kind = Kind::Forget;
  t.i = i;
  t.left = std::move(sub);
  return mk(std::move(t));
}
SttPtr Stt::rename(int i, int j, SttPtr sub) {
  Stt t;
  t.kind = Kind::Rename;
  t.i = i;
  t.j = j;
  t.left = std::move(sub);
  return mk(std::move(t));
}
SttPtr Stt::oplus(SttPtr l, SttPtr r) {
  Stt t;
  t.kind = Kind::Oplus;
  t.left = std::move(l);
  t.right = std::move(r);
  return mk(std::move(t));
}

int Stt::num_nodes() const {
  int n = 1;
  if (left) n += left->num_nodes();
  if (right) n += right->num_nodes();
  return n;
}
int Stt::num_leaves() const {
  if (kind == Kind::Leaf) return 1;
  int n = 0;
  if (left) n += left->num_leaves();
  if (right) n += right->num_leaves();
  return n;
}
int Stt::height() const {
  int h = 0;
  if (left) h = std::max(h, left->height());
  if (right) h = std::max(h, right->height());
  return h + 1;
}
int Stt::max_color() const {
  int c = kind == Kind::Leaf ? i : 0;
  if (kind == Kind::Add || kind == Kind::Rename) c = std::max(i, j);
  if (kind == Kind::Forget) c = i;
  if (left) c = std::max(c, left->max_color());
  if (right) c = std::max(c, right->max_color());
  return c;
}

namespace {

// preorder position counter shared across the recursion, for error reporting
ColoredGraph eval_rec(const SttPtr& t, LabeledGraph& g, int& pos) {
  const int my_pos = pos++;
  switch (t->kind) {
    case Stt::Kind::Leaf: {
      ColoredGraph c;
      int v = g.add_vertex(t->letter, t->proc);
      c.chi[t->i] = v;
      return c;
    }
    case Stt::Kind::Add: {
      ColoredGraph c = eval_rec(t->left, g, pos);
      auto it = c.chi.find(t->i);
      auto jt = c.chi.find(t->j);
      if (it != c.chi.end() && jt != c.chi.end()) {
        auto& edges = t->edge == "proc" ? g.proc_edges : g.ds_edges[t->edge];
        std::pair<int, int> e{it->second, jt->second};
        if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
      }
      return c;
    }
    case Stt::Kind::Forget: {
      ColoredGraph c = eval_rec(t->left, g, pos);
      c.chi.erase(t->i);
      return c;
    }
    case Stt::Kind::Rename: {
      ColoredGraph c = eval_rec(t->left, g, pos);
      auto it = c.chi.find(t->i);
      auto jt = c.chi.find(t->j);
      int vi = it == c.chi.end() ? -1 : it->second;
      int vj = jt == c.chi.end() ? -1 : jt->second;
      c.chi.erase(t->i);
      c.chi.erase(t->j);
      if (vj >= 0) c.chi[t->i] = vj;
      if (vi >= 0) c.chi[t->j] = vi;
      return c;
    }
    case Stt::Kind::Oplus: {
      ColoredGraph a = eval_rec(t->left, g, pos);
      ColoredGraph b = eval_rec(t->right, g, pos);
      for (const auto& [color, v] : b.chi) {
        if (a.chi.count(color))
          throw InvalidSttError(my_pos, "oplus joins terms sharing active color " +
                                            std::to_string(color));
        a.chi[color] = v;
      }
      return a;
    }
  }
  throw InvalidSttError(my_pos, "malformed term");
}

}  // namespace

ColoredGraph eval_stt(const SttPtr& t) {
  ColoredGraph out;
  int pos = 0;
  ColoredGraph c = eval_rec(t, out.graph, pos);
  out.chi = std::move(c.chi);
  return out;
}

namespace {
// nullopt = invalid; otherwise the set of active colors
std::optional<std::set<int>> valid_rec(const SttPtr& t, int k) {
  auto in_range = [&](int c) { return c >= 1 && c <= k; };
  switch (t->kind) {
    case Stt::Kind::Leaf:
      if (!in_range(t->i)) return std::nullopt;
      return std::set<int>{t->i};
    case Stt::Kind::Add: {
      if (!in_range(t->i) || !in_range(t->j)) return std::nullopt;
      return valid_rec(t->left, k);
    }
    case Stt::Kind::Forget: {
      if (!in_range(t->i)) return std::nullopt;
      auto s = valid_rec(t->left, k);
      if (!s) return std::nullopt;
      s->erase(t->i);
      return s;
    }
    case Stt::Kind::Rename: {
      if (!in_range(t->i) || !in_range(t->j)) return std::nullopt;
      auto s = valid_rec(t->left, k);
      if (!s) return std::nullopt;
      bool hi = s->count(t->i), hj = s->count(t->j);
      s->erase(t->i);
      s->erase(t->j);
      if (hj) s->insert(t->i);
      if (hi) s->insert(t->j);
      return s;
    }
    case Stt::Kind::Oplus: {
      auto a = valid_rec(t->left, k);
      auto b = valid_rec(t->right, k);
      if (!a || !b) return std::nullopt;
      for (int c : *b)
        if (!a->insert(c).second) return std::nullopt;
      return a;
    }
  }
  return std::nullopt;
}
}  // namespace

bool check_valid_stt(const SttPtr& t, int k) { return valid_rec(t, k).has_value(); }

std::vector<int> active_colors(const SttPtr& t) {
  auto s = valid_rec(t, t->max_color());
  if (!s) {
    // fall back to evaluation for terms that valid_rec rejects
    auto c = eval_stt(t);
    std::vector<int> out;
    for (const auto& [color, v] : c.chi) out.push_back(color);
    return out;
  }
  return std::vector<int>(s->begin(), s->end());
}

namespace {
int apply_perm(const std::map<int, int>& perm, int c) {
  auto it = perm.find(c);
  return it == perm.end() ? c : it->second;
}

SttPtr elim_rec(const SttPtr& t, std::map<int, int> perm) {
  switch (t->kind) {
    case Stt::Kind::Leaf:
      return Stt::leaf(apply_perm(perm, t->i), t->letter, t->proc);
    case Stt::Kind::Add:
      return Stt::add(apply_perm(perm, t->i), apply_perm(perm, t->j), t->edge,
                      elim_rec(t->left, perm));
    case Stt::Kind::Forget:
      return Stt::forget(apply_perm(perm, t->i), elim_rec(t->left, perm));
    case Stt::Kind::Rename: {
      int pi = apply_perm(perm, t->i), pj = apply_perm(perm, t->j);
      // swap below: the operation exchanges the two colors
      std::map<int, int> next = perm;
      next[t->i] = pj;
      next[t->j] = pi;
      return elim_rec(t->left, next);
    }
    case Stt::Kind::Oplus:
      return Stt::oplus(elim_rec(t->left, perm), elim_rec(t->right, perm));
  }
  return t;
}
}  // namespace

SttPtr eliminate_rename(const SttPtr& t) { return elim_rec(t, {}); }

std::string stt_to_text(const SttPtr& t) {
  std::ostringstream o;
  switch (t->kind) {
    case Stt::Kind::Leaf: o << "(leaf " << t->i << " " << t->letter << " " << t->proc << ")"; break;
    case Stt::Kind::Add:
      o << "(add " << t->i << " " << t->j << " " << t->edge << " " << stt_to_text(t->left) << ")";
      break;
    case Stt::Kind::Forget: o << "(forget " << t->i << " " << stt_to_text(t->left) << ")"; break;
    case Stt::Kind::Rename:
      o << "(rename " << t->i << " " << t->j << " " << stt_to_text(t->left) << ")";
      break;
    case Stt::Kind::Oplus:
      o << "(oplus " << stt_to_text(t->left) << " " << stt_to_text(t->right) << ")";
      break;
  }
  return o.str();
}

namespace {

struct SttLexer {
  const std::string& s;
  size_t i = 0;
  void skip() {
    while (i < s.size()) {
      if (isspace((unsigned char)s[i])) ++i;
      else if (s[i] == ';') { while (i < s.size() && s[i] != '\n') ++i; }
      else break;
    }
  }
  std::string token() {
    skip();
    if (i >= s.size()) throw ParseError("unexpected end of STT");
    if (s[i] == '(' || s[i] == ')') return std::string(1, s[i++]);
    size_t start = i;
    while (i < s.size() && !isspace((unsigned char)s[i]) && s[i] != '(' && s[i] != ')') ++i;
    return s.substr(start, i - start);
  }
  SttPtr parse() {
    std::string t = token();
    if (t != "(") throw ParseError("expected '(' in STT");
    std::string op = token();
    SttPtr out;
    if (op == "leaf") {
      int c = std::stoi(token());
      std::string a = token(), p = token();
      out = Stt::leaf(c, a, p);
    } else if (op == "add") {
      int a = std::stoi(token()), b = std::stoi(token());
      std::string e = token();
      out = Stt::add(a, b, e, parse());
    } else if (op == "forget") {
      int a = std::stoi(token());
      out = Stt::forget(a, parse());
    } else if (op == "rename") {
      int a = std::stoi(token()), b = std::stoi(token());
      out = Stt::rename(a, b, parse());
    } else if (op == "oplus") {
      SttPtr l = parse();
      SttPtr r = parse();
      out = Stt::oplus(l, r);
    } else {
      throw ParseError("unknown STT operator: " + op);
    }
    if (token() != ")") throw ParseError("expected ')' in STT");
    return out;
  }
};

void dot_rec(const SttPtr& t, int& id, std::ostringstream& o, int parent) {
  int me = id++;
  std::string label;
  switch (t->kind) {
    case Stt::Kind::Leaf:
      label = "(" + std::to_string(t->i) + "," + t->letter + "," + t->proc + ")";
      break;
    case Stt::Kind::Add:
      label = "Add_" + std::to_string(t->i) + "," + std::to_string(t->j) + "^" + t->edge;
      break;
    case Stt::Kind::Forget: label = "Forget_" + std::to_string(t->i); break;
    case Stt::Kind::Rename:
      label = "Rename_" + std::to_string(t->i) + "," + std::to_string(t->j);
      break;
    case Stt::Kind::Oplus: label = "(+)"; break;
  }
  o << "  n" << me << " [label=\"" << label << "\"];\n";
  if (parent >= 0) o << "  n" << parent << " -> n" << me << ";\n";
  if (t->left) dot_rec(t->left, id, o, me);
  if (t->right) dot_rec(t->right, id, o, me);
}

}  // namespace

SttPtr parse_stt(const std::string& text) {
  SttLexer lx{text};
  SttPtr t = lx.parse();
  lx.skip();
  if (lx.i != text.size()) throw ParseError("trailing input after STT");
  return t;
}

std::string stt_to_dot(const SttPtr& t) {
  std::ostringstream o;
  o << "digraph stt {\n  node [shape=box];\n";
  int id = 0;
  dot_rec(t, id, o, -1);
  o << "}\n";
  return o.str();
}

}  // namespace stwmc
