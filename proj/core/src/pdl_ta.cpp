#include "stwmc/pdl_ta.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "stwmc/error.hpp"
#include "stwmc/formula_io.hpp"

namespace stwmc {

// ---------------------------------------------------------------------------
// Interpretation into trees (used by the direct-evaluation oracle; the
// automaton compiles walking NFAs straight from the source formula instead)

namespace {

std::string color_ap(int i) { return "color:" + std::to_string(i); }
std::string forget_ap(int i) { return "forget:" + std::to_string(i); }
std::string add_ap(int i, int j, const std::string& e) {
  return "add:" + std::to_string(i) + ":" + std::to_string(j) + ":" + e;
}

using S = PdlState;
using P = PdlPath;

PdlPathPtr tree_up() {
  return P::alt({P::conv(P::edge_label("d0")), P::conv(P::edge_label("d1"))});
}
PdlPathPtr tree_down() { return P::alt({P::edge_label("d0"), P::edge_label("d1")}); }

// gamma~^k: climb from the source leaf to the Add node without losing the
// color, then descend to the target leaf.
PdlPathPtr interpret_edge(const std::string& gamma, int k) {
  std::vector<PdlPathPtr> alts;
  for (int i = 1; i <= k; ++i)
    for (int j = 1; j <= k; ++j) {
      PdlPathPtr up_i =
          P::plus(P::cat({P::test_of(S::lnot(S::ap_atom(forget_ap(i)))), tree_up()}));
      PdlPathPtr down_j =
          P::plus(P::cat({P::test_of(S::lnot(S::ap_atom(forget_ap(j)))), tree_down()}));
      alts.push_back(P::cat({P::test_of(S::ap_atom(color_ap(i))), up_i,
                             P::test_of(S::ap_atom(add_ap(i, j, gamma))), down_j,
                             P::test_of(S::ap_atom(color_ap(j)))}));
    }
  return P::alt(std::move(alts));
}

PdlStatePtr interpret_state(const PdlStatePtr& s, int k);

PdlPathPtr interpret_path(const PdlPathPtr& p, int k) {
  switch (p->kind) {
    case PdlPath::Kind::Edge: return interpret_edge(p->edge, k);
    case PdlPath::Kind::Test: return P::test_of(interpret_state(p->test, k));
    case PdlPath::Kind::Cap:
      throw DialectUnsupportedError("path intersection is outside the automaton pipeline");
    case PdlPath::Kind::Alt:
    case PdlPath::Kind::Cat: {
      std::vector<PdlPathPtr> parts;
      for (const auto& q : p->parts) parts.push_back(interpret_path(q, k));
      return p->kind == PdlPath::Kind::Alt ? P::alt(std::move(parts))
                                           : P::cat(std::move(parts));
    }
    case PdlPath::Kind::Star: return P::star(interpret_path(p->parts[0], k));
    case PdlPath::Kind::Conv: return P::conv(interpret_path(p->parts[0], k));
  }
  return p;
}

PdlStatePtr interpret_state(const PdlStatePtr& s, int k) {
  switch (s->kind) {
    case PdlState::Kind::Ap: return s;
    case PdlState::Kind::True: return s;
    case PdlState::Kind::Or:
      return S::lor(interpret_state(s->lhs, k), interpret_state(s->rhs, k));
    case PdlState::Kind::Not: return S::lnot(interpret_state(s->lhs, k));
    case PdlState::Kind::Dia:
      return S::dia(interpret_path(s->path, k), interpret_state(s->lhs, k));
    case PdlState::Kind::Loop: return S::loop(interpret_path(s->path, k));
  }
  return s;
}

PdlStatePtr leafness() { return S::lnot(S::dia(tree_down(), S::ltrue())); }

}  // namespace

PdlSentencePtr interpret_pdl(const PdlSentencePtr& phi, int k) {
  switch (phi->kind) {
    case PdlSentence::Kind::E:
      return PdlSentence::exists(S::land(leafness(), interpret_state(phi->state, k)));
    case PdlSentence::Kind::Or:
      return PdlSentence::lor(interpret_pdl(phi->lhs, k), interpret_pdl(phi->rhs, k));
    case PdlSentence::Kind::Not: return PdlSentence::lnot(interpret_pdl(phi->lhs, k));
  }
  return phi;
}

std::string tree_symbol_string(const SttSymbol& s) {
  switch (s.kind) {
    case SttSymbol::Kind::Leaf:
      return "leaf:" + std::to_string(s.i) + ":" + s.letter + ":" + s.proc;
    case SttSymbol::Kind::Add:
      return "add:" + std::to_string(s.i) + ":" + std::to_string(s.j) + ":" + s.edge;
    case SttSymbol::Kind::Forget: return "forget:" + std::to_string(s.i);
    case SttSymbol::Kind::Oplus: return "oplus";
  }
  return "?";
}

bool tree_ap_holds(const std::string& sym, const std::string& ap) {
  if (ap.rfind("add:", 0) == 0 || ap.rfind("forget:", 0) == 0 || ap == "oplus")
    return sym == ap;
  if (sym.rfind("leaf:", 0) != 0) return false;
  // leaf:<i>:<letter>:<proc>
  size_t c1 = sym.find(':');
  size_t c2 = sym.find(':', c1 + 1);
  size_t c3 = sym.find(':', c2 + 1);
  std::string color = sym.substr(c1 + 1, c2 - c1 - 1);
  std::string letter = sym.substr(c2 + 1, c3 - c2 - 1);
  std::string proc = sym.substr(c3 + 1);
  if (ap.rfind("color:", 0) == 0) return ap.substr(6) == color;
  return ap == letter || ap == proc;
}

namespace {
void tree_graph_rec(const SttPtr& t, LabeledGraph& g, int parent, int dir) {
  int me = g.add_vertex(tree_symbol_string(symbol_of_node(*t)), "");
  if (parent >= 0) g.ds_edges[dir == 0 ? "d0" : "d1"].push_back({parent, me});
  if (t->left) tree_graph_rec(t->left, g, me, 0);
  if (t->right) tree_graph_rec(t->right, g, me, 1);
}
}  // namespace

LabeledGraph stt_to_tree_graph(const SttPtr& t) {
  LabeledGraph g;
  tree_graph_rec(t, g, -1, 0);
  return g;
}

ApSemantics tree_ap_semantics() {
  return [](const LabeledGraph& g, int v, const std::string& ap) {
    return tree_ap_holds(g.vertices[v].letter, ap);
  };
}

bool eval_tree_sentence(const SttPtr& t, const PdlSentencePtr& tree_phi) {
  LabeledGraph g = stt_to_tree_graph(t);
  return eval_pdl_sentence(g, tree_phi, tree_ap_semantics());
}

// ---------------------------------------------------------------------------
// Walking NFAs over tree moves and tests

namespace {

enum Move { MV_D0 = 0, MV_D1 = 1, MV_U0 = 2, MV_U1 = 3 };

struct WalkNfa {
  struct Tr {
    int kind;     // 0..3 moves, 4 = test
    int test_id;  // into the shared test table (kind 4)
    int to;
  };
  std::vector<std::vector<Tr>> trans;
  std::vector<int> initials;
  std::vector<int> finals;
  int size() const { return (int)trans.size(); }
};

// Thompson-style builder with epsilon edges; eliminates epsilons at the end.
// In source mode, atomic programs are CBM edge labels and expand into the
// compact climb/descend walk through the matching Add node; in tree mode the
// атomic programs are d0/d1. Converse flips the walk direction.
struct PathCompiler {
  std::vector<PdlStatePtr>* tests;
  bool source_mode;
  int k = 0;

  std::vector<std::vector<WalkNfa::Tr>> trans;  // kind 5 = epsilon

  int fresh() {
    trans.emplace_back();
    return (int)trans.size() - 1;
  }
  void eps(int a, int b) { trans[a].push_back({5, -1, b}); }
  void move(int a, Move m, int b) { trans[a].push_back({(int)m, -1, b}); }
  int test_id(const PdlStatePtr& s) {
    tests->push_back(s);
    return (int)tests->size() - 1;
  }
  void test(int a, const PdlStatePtr& s, int b) { trans[a].push_back({4, test_id(s), b}); }

  // climb/descend block for one CBM edge label: from the starting leaf up to
  // the Add node guarding its color, then down to the other endpoint. The
  // reversed walk has the same up-then-down shape; only the roles of the two
  // colors in the Add test swap.
  std::pair<int, int> edge_block(const std::string& gamma, bool rev) {
    int entry = fresh(), exit = fresh();
    // shared descend part per descended color
    std::vector<int> descend_in(k + 1);
    for (int j = 1; j <= k; ++j) {
      int p = fresh(), q = fresh();
      descend_in[j] = p;
      test(p, S::lnot(S::ap_atom(forget_ap(j))), q);
      int qq = fresh();
      move(q, MV_D0, qq);
      move(q, MV_D1, qq);
      eps(qq, p);  // keep descending
      test(qq, S::ap_atom(color_ap(j)), exit);
    }
    for (int i = 1; i <= k; ++i) {
      int a = fresh(), b = fresh(), c = fresh();
      test(entry, S::ap_atom(color_ap(i)), a);
      test(a, S::lnot(S::ap_atom(forget_ap(i))), b);
      move(b, MV_U0, c);
      move(b, MV_U1, c);
      eps(c, a);  // keep climbing
      for (int j = 1; j <= k; ++j) {
        int src = rev ? j : i, tgt = rev ? i : j;
        test(c, S::ap_atom(add_ap(src, tgt, gamma)), descend_in[j]);
      }
    }
    return {entry, exit};
  }

  std::pair<int, int> build(const PdlPathPtr& p, bool rev) {
    switch (p->kind) {
      case PdlPath::Kind::Edge: {
        if (source_mode) return edge_block(p->edge, rev);
        int a = fresh(), b = fresh();
        Move m;
        if (p->edge == "d0")
          m = rev ? MV_U0 : MV_D0;
        else if (p->edge == "d1")
          m = rev ? MV_U1 : MV_D1;
        else
          throw UnknownSymbolError("tree paths use the programs d0/d1 only, got " + p->edge);
        move(a, m, b);
        return {a, b};
      }
      case PdlPath::Kind::Test: {
        int a = fresh(), b = fresh();
        test(a, p->test, b);
        return {a, b};
      }
      case PdlPath::Kind::Alt: {
        int a = fresh(), b = fresh();
        for (const auto& q : p->parts) {
          auto [x, y] = build(q, rev);
          eps(a, x);
          eps(y, b);
        }
        return {a, b};
      }
      case PdlPath::Kind::Cat: {
        int a = -1, b = -1;
        auto order = p->parts;
        if (rev) std::reverse(order.begin(), order.end());
        for (const auto& q : order) {
          auto [x, y] = build(q, rev);
          if (a < 0)
            a = x;
          else
            eps(b, x);
          b = y;
        }
        if (a < 0) {
          a = fresh();
          b = a;
        }
        return {a, b};
      }
      case PdlPath::Kind::Star: {
        auto [x, y] = build(p->parts[0], rev);
        int a = fresh(), b = fresh();
        eps(a, x);
        eps(y, b);
        eps(a, b);
        eps(b, a);
        return {a, b};
      }
      case PdlPath::Kind::Conv: return build(p->parts[0], !rev);
      case PdlPath::Kind::Cap:
        throw DialectUnsupportedError("path intersection is outside the automaton pipeline");
    }
    return {fresh(), fresh()};
  }

  WalkNfa finish(int start, int end) {
    const int n = (int)trans.size();
    std::vector<std::vector<int>> clo(n);
    for (int s = 0; s < n; ++s) {
      std::vector<bool> seen(n, false);
      std::vector<int> stack{s};
      seen[s] = true;
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        clo[s].push_back(x);
        for (const auto& t : trans[x])
          if (t.kind == 5 && !seen[t.to]) {
            seen[t.to] = true;
            stack.push_back(t.to);
          }
      }
    }
    WalkNfa out;
    out.trans.resize(n);
    for (int s = 0; s < n; ++s)
      for (const auto& t : trans[s]) {
        if (t.kind == 5) continue;
        for (int u : clo[t.to]) out.trans[s].push_back({t.kind, t.test_id, u});
      }
    out.initials = clo[start];
    out.finals = {end};
    return out;
  }
};

WalkNfa compile_path(const PdlPathPtr& p, std::vector<PdlStatePtr>* tests, bool source_mode,
                     int k) {
  PathCompiler pc;
  pc.tests = tests;
  pc.source_mode = source_mode;
  pc.k = k;
  auto [start, end] = pc.build(p, false);
  return pc.finish(start, end);
}

// ---------------------------------------------------------------------------
// Relations and sets over NFA states, hash-consed per modal atom

struct RelStore {
  int n = 0;
  int words = 0;
  std::vector<std::vector<uint64_t>> rels;
  std::map<std::vector<uint64_t>, int> rel_index;
  std::vector<std::vector<uint64_t>> sets;
  std::map<std::vector<uint64_t>, int> set_index;

  void init(int states) {
    n = states;
    words = (states + 63) / 64;
  }
  int intern_rel(std::vector<uint64_t> r) {
    auto it = rel_index.find(r);
    if (it != rel_index.end()) return it->second;
    int id = (int)rels.size();
    rel_index[r] = id;
    rels.push_back(std::move(r));
    return id;
  }
  int intern_set(std::vector<uint64_t> s) {
    auto it = set_index.find(s);
    if (it != set_index.end()) return it->second;
    int id = (int)sets.size();
    set_index[s] = id;
    sets.push_back(std::move(s));
    return id;
  }

  std::vector<uint64_t> empty_rel() const {
    return std::vector<uint64_t>((size_t)n * words, 0);
  }
  std::vector<uint64_t> id_rel() const {
    auto r = empty_rel();
    for (int i = 0; i < n; ++i) r[(size_t)i * words + (i >> 6)] |= (uint64_t)1 << (i & 63);
    return r;
  }
  std::vector<uint64_t> empty_set() const { return std::vector<uint64_t>(words, 0); }

  static bool set_get(const std::vector<uint64_t>& s, int i) {
    return (s[i >> 6] >> (i & 63)) & 1;
  }
  static void set_put(std::vector<uint64_t>& s, int i) {
    s[i >> 6] |= (uint64_t)1 << (i & 63);
  }
  bool rel_get(const std::vector<uint64_t>& r, int i, int j) const {
    return (r[(size_t)i * words + (j >> 6)] >> (j & 63)) & 1;
  }
  void rel_put(std::vector<uint64_t>& r, int i, int j) const {
    r[(size_t)i * words + (j >> 6)] |= (uint64_t)1 << (j & 63);
  }

  std::vector<uint64_t> rel_union(const std::vector<uint64_t>& a,
                                  const std::vector<uint64_t>& b) const {
    auto r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] |= b[i];
    return r;
  }

  std::vector<uint64_t> compose(const std::vector<uint64_t>& a,
                                const std::vector<uint64_t>& b) const {
    auto r = empty_rel();
    for (int i = 0; i < n; ++i)
      for (int w = 0; w < words; ++w) {
        uint64_t bits = a[(size_t)i * words + w];
        while (bits) {
          int j = w * 64 + std::countr_zero(bits);
          bits &= bits - 1;
          for (int x = 0; x < words; ++x)
            r[(size_t)i * words + x] |= b[(size_t)j * words + x];
        }
      }
    return r;
  }

  // reflexive-transitive closure (Warshall)
  std::vector<uint64_t> closure(std::vector<uint64_t> r) const {
    for (int i = 0; i < n; ++i) rel_put(r, i, i);
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        if (rel_get(r, i, m))
          for (int w = 0; w < words; ++w) r[(size_t)i * words + w] |= r[(size_t)m * words + w];
    return r;
  }

  std::vector<uint64_t> image(const std::vector<uint64_t>& set,
                              const std::vector<uint64_t>& rel) const {
    auto out = empty_set();
    for (int w = 0; w < words; ++w) {
      uint64_t bits = set[w];
      while (bits) {
        int i = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        for (int x = 0; x < words; ++x) out[x] |= rel[(size_t)i * words + x];
      }
    }
    return out;
  }

  bool sets_intersect(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) const {
    for (int w = 0; w < words; ++w)
      if (a[w] & b[w]) return true;
    return false;
  }
  bool set_empty(const std::vector<uint64_t>& a) const {
    for (auto x : a)
      if (x) return false;
    return true;
  }
  bool rel_meets(const std::vector<uint64_t>& r, const std::vector<uint64_t>& from,
                 const std::vector<uint64_t>& to) const {
    for (int i = 0; i < n; ++i) {
      if (!set_get(from, i)) continue;
      for (int w = 0; w < words; ++w)
        if (r[(size_t)i * words + w] & to[w]) return true;
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// The tree automaton

struct ModalAtom {
  const PdlState* node = nullptr;
  bool is_loop = false;
  WalkNfa nfa;
  RelStore store;
  std::vector<uint64_t> initial_set, final_set;
  std::vector<std::array<std::vector<int>, 4>> by_move;
  std::vector<std::vector<std::pair<int, int>>> tests_of;  // state -> (test id, to)
  std::vector<int> my_tests;                               // test ids used by this NFA
  // summary memo: (sym, child loop ids, masked test truth) -> node info
  struct NodeInfo {
    int loops, down;
    std::array<int, 2> E{-1, -1}, F{-1, -1}, B{-1, -1}, G{-1, -1};
  };
  std::map<std::tuple<int, int, int, uint64_t>, NodeInfo> memo;
};

struct ClassDesc {
  int modal;
  bool positive;
  std::array<int, 3> ids{-1, -1, -1};  // Dia: {X,-,-}; Loop: {R,U,D}
  auto operator<=>(const ClassDesc&) const = default;
};

struct VecInterner {
  std::vector<std::vector<int>> store;
  std::map<std::vector<int>, StateId> index;
  StateId intern(std::vector<int> v) {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    StateId id = (StateId)store.size();
    index[v] = id;
    store.push_back(std::move(v));
    return id;
  }
  const std::vector<int>& get(StateId id) const { return store[id]; }
};

class PdlTreeNta : public Nta {
 public:
  enum class Mode { Tree, Source };

  PdlTreeNta(SttAlphabet alph, PdlSentencePtr phi, Mode mode, int k)
      : Nta(std::move(alph)), phi_(std::move(phi)), mode_(mode), k_(k) {
    collect_sentence(phi_);
    if (modals_.size() > 20)
      throw LimitExceededError("too many modal subformulas for the tree automaton");
    if (e_nodes_.size() > 60)
      throw LimitExceededError("too many E subformulas for the tree automaton");
    for (auto& m : modals_) {
      m.store.init(m.nfa.size());
      auto ini = m.store.empty_set();
      for (int s : m.nfa.initials) RelStore::set_put(ini, s);
      m.initial_set = std::move(ini);
      auto fin = m.store.empty_set();
      for (int s : m.nfa.finals) RelStore::set_put(fin, s);
      m.final_set = std::move(fin);
      m.by_move.resize(m.nfa.size());
      m.tests_of.resize(m.nfa.size());
      for (int s = 0; s < m.nfa.size(); ++s)
        for (const auto& t : m.nfa.trans[s]) {
          if (t.kind == 4) {
            m.tests_of[s].push_back({t.test_id, t.to});
            m.my_tests.push_back(t.test_id);
          } else {
            m.by_move[s][t.kind].push_back(t.to);
          }
        }
      std::sort(m.my_tests.begin(), m.my_tests.end());
      m.my_tests.erase(std::unique(m.my_tests.begin(), m.my_tests.end()), m.my_tests.end());
    }
    // a modal verdict is only read where some test or E argument mentions it
    for (const auto& t : tests_) test_deps_ |= direct_modal_deps(t.get());
    for (const auto* e : e_nodes_) e_deps_ |= direct_modal_deps(e->state.get());
  }

  std::vector<StateId> leaf_states(int sym) override { return cached(sym, -1, -1); }
  std::vector<StateId> unary_steps(StateId s, int sym) override {
    return cached(sym, (int64_t)s, -1);
  }
  std::vector<StateId> binary_steps(StateId l, StateId r, int sym) override {
    return cached(sym, (int64_t)l, (int64_t)r);
  }

  bool accepting(StateId q) override {
    const Decoded d = decode(q);
    for (const auto& c : d.classes)
      if (c.positive) return false;  // unredeemed positive claim
    return eval_sentence(phi_, d.ebits);
  }

  size_t discovered_states() const override { return interner_.store.size(); }

 private:
  struct Decoded {
    std::vector<int> loops, down;
    std::vector<ClassDesc> classes;
    uint64_t ebits = 0;
  };

  void collect_sentence(const PdlSentencePtr& f) {
    if (f->kind == PdlSentence::Kind::E) {
      e_nodes_.push_back(f.get());
      collect_state(f->state);
      return;
    }
    if (f->lhs) collect_sentence(f->lhs);
    if (f->rhs) collect_sentence(f->rhs);
  }

  // modal atoms dedupe structurally, through the printed form
  void collect_state(const PdlStatePtr& s) {
    switch (s->kind) {
      case PdlState::Kind::Ap:
      case PdlState::Kind::True: return;
      case PdlState::Kind::Or:
        collect_state(s->lhs);
        collect_state(s->rhs);
        return;
      case PdlState::Kind::Not: collect_state(s->lhs); return;
      case PdlState::Kind::Dia:
      case PdlState::Kind::Loop: {
        if (modal_index_.count(s.get())) return;
        std::string key = pdl_state_to_text(s);
        auto it = modal_by_text_.find(key);
        if (it != modal_by_text_.end()) {
          modal_index_[s.get()] = it->second;
          return;
        }
        collect_path_tests(s->path);
        if (s->kind == PdlState::Kind::Dia) collect_state(s->lhs);
        ModalAtom m;
        m.node = s.get();
        m.is_loop = s->kind == PdlState::Kind::Loop;
        PdlPathPtr full =
            m.is_loop ? s->path
                      : P::cat({s->path, P::test_of(s->lhs ? s->lhs : S::ltrue())});
        m.nfa = compile_path(full, &tests_, mode_ == Mode::Source, k_);
        int idx = (int)modals_.size();
        modal_index_[s.get()] = idx;
        modal_by_text_[key] = idx;
        modals_.push_back(std::move(m));
        return;
      }
    }
  }

  void collect_path_tests(const PdlPathPtr& p) {
    if (p->kind == PdlPath::Kind::Test) collect_state(p->test);
    for (const auto& q : p->parts) collect_path_tests(q);
  }

  // modals whose verdict a formula reads directly (no recursion below them)
  uint32_t direct_modal_deps(const PdlState* s) const {
    switch (s->kind) {
      case PdlState::Kind::Ap:
      case PdlState::Kind::True: return 0;
      case PdlState::Kind::Or:
        return direct_modal_deps(s->lhs.get()) | direct_modal_deps(s->rhs.get());
      case PdlState::Kind::Not: return direct_modal_deps(s->lhs.get());
      case PdlState::Kind::Dia:
      case PdlState::Kind::Loop: return uint32_t(1) << modal_index_.at(s);
    }
    return 0;
  }

  bool truth(const PdlState* s, const std::string& sym_string,
             const std::vector<bool>& verdicts) const {
    switch (s->kind) {
      case PdlState::Kind::Ap: return tree_ap_holds(sym_string, s->ap);
      case PdlState::Kind::True: return true;
      case PdlState::Kind::Or:
        return truth(s->lhs.get(), sym_string, verdicts) ||
               truth(s->rhs.get(), sym_string, verdicts);
      case PdlState::Kind::Not: return !truth(s->lhs.get(), sym_string, verdicts);
      case PdlState::Kind::Dia:
      case PdlState::Kind::Loop: return verdicts[modal_index_.at(s)];
    }
    return false;
  }

  bool eval_sentence(const PdlSentencePtr& f, uint64_t ebits) const {
    switch (f->kind) {
      case PdlSentence::Kind::E: {
        size_t idx =
            std::find(e_nodes_.begin(), e_nodes_.end(), f.get()) - e_nodes_.begin();
        return (ebits >> idx) & 1;
      }
      case PdlSentence::Kind::Or:
        return eval_sentence(f->lhs, ebits) || eval_sentence(f->rhs, ebits);
      case PdlSentence::Kind::Not: return !eval_sentence(f->lhs, ebits);
    }
    return false;
  }

  StateId intern(const Decoded& d) {
    std::vector<int> v;
    v.reserve(2 * modals_.size() + 4 * d.classes.size() + 3);
    for (size_t m = 0; m < modals_.size(); ++m) {
      v.push_back(d.loops[m]);
      v.push_back(d.down[m]);
    }
    v.push_back((int)(d.ebits & 0xffffffff));
    v.push_back((int)(d.ebits >> 32));
    v.push_back((int)d.classes.size());
    for (const auto& c : d.classes) {
      v.push_back(c.modal * 2 + (c.positive ? 1 : 0));
      v.push_back(c.ids[0]);
      v.push_back(c.ids[1]);
      v.push_back(c.ids[2]);
    }
    return interner_.intern(std::move(v));
  }

  Decoded decode(StateId q) const {
    const auto& v = interner_.get(q);
    Decoded d;
    size_t at = 0;
    d.loops.resize(modals_.size());
    d.down.resize(modals_.size());
    for (size_t m = 0; m < modals_.size(); ++m) {
      d.loops[m] = v[at++];
      d.down[m] = v[at++];
    }
    d.ebits = (uint32_t)v[at] | ((uint64_t)(uint32_t)v[at + 1] << 32);
    at += 2;
    int nc = v[at++];
    for (int c = 0; c < nc; ++c) {
      ClassDesc cd;
      cd.modal = v[at] / 2;
      cd.positive = v[at] % 2;
      ++at;
      cd.ids = {v[at], v[at + 1], v[at + 2]};
      at += 3;
      d.classes.push_back(cd);
    }
    return d;
  }

  std::vector<StateId> cached(int sym, int64_t l, int64_t r) {
    auto key = std::make_tuple(sym, l, r);
    auto it = compute_memo_.find(key);
    if (it != compute_memo_.end()) return it->second;
    auto res = compute(sym, l, r);
    compute_memo_[key] = res;
    return res;
  }

  std::vector<StateId> compute(int sym, int64_t left, int64_t right);

  PdlSentencePtr phi_;
  Mode mode_;
  int k_;
  std::vector<PdlStatePtr> tests_;
  std::vector<ModalAtom> modals_;
  std::map<const PdlState*, int> modal_index_;
  std::map<std::string, int> modal_by_text_;
  std::vector<const PdlSentence*> e_nodes_;
  uint32_t test_deps_ = 0, e_deps_ = 0;
  VecInterner interner_;
  std::map<std::tuple<int, int64_t, int64_t>, std::vector<StateId>> compute_memo_;
};

std::vector<StateId> PdlTreeNta::compute(int sym, int64_t left, int64_t right) {
  const SttSymbol& symbol = alphabet().symbols[sym];
  const std::string sym_string = tree_symbol_string(symbol);
  const int arity = symbol.arity();
  if ((arity >= 1) != (left >= 0)) return {};
  if ((arity == 2) != (right >= 0)) return {};

  Decoded child[2];
  if (left >= 0) child[0] = decode((StateId)left);
  if (right >= 0) child[1] = decode((StateId)right);

  const int M = (int)modals_.size();
  std::vector<StateId> out;

  const bool e_contributes =
      mode_ == Mode::Tree || symbol.kind == SttSymbol::Kind::Leaf;
  const uint32_t consumed = test_deps_ | (e_contributes ? e_deps_ : 0);

  // enumerate verdicts over the consumed modals only; unread verdicts need no
  // enforcement and default to false
  std::vector<uint32_t> guesses{0};
  for (uint32_t g = (0 - consumed) & consumed; g != 0; g = (g - consumed) & consumed)
    guesses.push_back(g);

  for (uint32_t guess : guesses) {
    std::vector<bool> verdicts(M);
    for (int m = 0; m < M; ++m) verdicts[m] = (guess >> m) & 1;

    std::vector<bool> test_truth(tests_.size());
    for (size_t t = 0; t < tests_.size(); ++t)
      test_truth[t] = truth(tests_[t].get(), sym_string, verdicts);

    Decoded next;
    next.loops.resize(M);
    next.down.resize(M);
    bool rejected = false;

    std::vector<ModalAtom::NodeInfo> info(M);

    for (int m = 0; m < M; ++m) {
      ModalAtom& mo = modals_[m];
      RelStore& st = mo.store;

      uint64_t test_mask = 0;
      for (size_t x = 0; x < mo.my_tests.size(); ++x)
        if (test_truth[mo.my_tests[x]]) test_mask |= (uint64_t)1 << x;
      auto memo_key = std::make_tuple(sym, arity >= 1 ? child[0].loops[m] : -1,
                                      arity == 2 ? child[1].loops[m] : -1, test_mask);
      auto mit = mo.memo.find(memo_key);
      if (mit != mo.memo.end()) {
        info[m] = mit->second;
      } else {
        auto T = st.empty_rel();
        for (int s = 0; s < mo.nfa.size(); ++s)
          for (auto [tid, to] : mo.tests_of[s])
            if (test_truth[tid]) st.rel_put(T, s, to);

        auto step_rel = [&](Move mv) {
          auto r = st.empty_rel();
          for (int s = 0; s < mo.nfa.size(); ++s)
            for (int to : mo.by_move[s][mv]) st.rel_put(r, s, to);
          return r;
        };

        auto acc = T;
        std::vector<uint64_t> child_loops[2];
        for (int c = 0; c < arity; ++c) {
          child_loops[c] = st.rels[child[c].loops[m]];
          auto dip = st.compose(step_rel(c == 0 ? MV_D0 : MV_D1),
                                st.compose(child_loops[c], step_rel(c == 0 ? MV_U0 : MV_U1)));
          acc = st.rel_union(acc, dip);
        }
        auto loops_w = st.closure(std::move(acc));

        auto down_now = mo.final_set;
        for (int c = 0; c < arity; ++c) {
          const auto& cd = st.sets[child[c].down[m]];
          for (int s = 0; s < mo.nfa.size(); ++s)
            for (int to : mo.by_move[s][c == 0 ? MV_D0 : MV_D1])
              if (RelStore::set_get(cd, to)) RelStore::set_put(down_now, s);
        }
        auto down_full = st.empty_set();
        for (int s = 0; s < mo.nfa.size(); ++s)
          for (int w = 0; w < st.words; ++w)
            if (loops_w[(size_t)s * st.words + w] & down_now[w]) {
              RelStore::set_put(down_full, s);
              break;
            }

        ModalAtom::NodeInfo ni;
        ni.loops = st.intern_rel(loops_w);
        ni.down = st.intern_set(down_full);
        for (int c = 0; c < arity; ++c) {
          auto Kacc = T;
          if (arity == 2) {
            int sib = 1 - c;
            auto dip =
                st.compose(step_rel(sib == 0 ? MV_D0 : MV_D1),
                           st.compose(st.rels[child[sib].loops[m]],
                                      step_rel(sib == 0 ? MV_U0 : MV_U1)));
            Kacc = st.rel_union(Kacc, dip);
          }
          auto K = st.closure(std::move(Kacc));
          auto up = step_rel(c == 0 ? MV_U0 : MV_U1);
          auto dn = step_rel(c == 0 ? MV_D0 : MV_D1);
          ni.E[c] = st.intern_rel(st.compose(up, st.compose(K, dn)));
          ni.F[c] = st.intern_rel(st.compose(up, K));
          ni.B[c] = st.intern_rel(st.compose(K, dn));
          ni.G[c] = st.intern_rel(st.closure(st.rel_union(child_loops[c], st.rels[ni.E[c]])));
        }
        mo.memo[memo_key] = ni;
        info[m] = ni;
      }
      next.loops[m] = info[m].loops;
      next.down[m] = info[m].down;
    }

    std::vector<ClassDesc> classes;

    // evolve the children's pending claims
    for (int c = 0; c < arity && !rejected; ++c) {
      for (const ClassDesc& cd : child[c].classes) {
        ModalAtom& mo = modals_[cd.modal];
        RelStore& st = mo.store;
        const auto& loops_w = st.rels[info[cd.modal].loops];
        const auto& down_w = st.sets[info[cd.modal].down];
        if (!mo.is_loop) {
          const auto& X = st.sets[cd.ids[0]];
          auto upX = st.empty_set();
          for (int s = 0; s < mo.nfa.size(); ++s)
            if (RelStore::set_get(X, s))
              for (int to : mo.by_move[s][c == 0 ? MV_U0 : MV_U1])
                RelStore::set_put(upX, to);
          auto X2 = st.image(upX, loops_w);
          bool hit =
              st.sets_intersect(X2, mo.final_set) || st.sets_intersect(X2, down_w);
          if (cd.positive) {
            if (hit) continue;
            if (st.set_empty(X2)) {
              rejected = true;
              break;
            }
            classes.push_back({cd.modal, true, {st.intern_set(X2), -1, -1}});
          } else {
            if (hit) {
              rejected = true;
              break;
            }
            if (!st.set_empty(X2))
              classes.push_back({cd.modal, false, {st.intern_set(X2), -1, -1}});
          }
        } else {
          const auto& R = st.rels[cd.ids[0]];
          const auto& U = st.rels[cd.ids[1]];
          const auto& D = st.rels[cd.ids[2]];
          const auto& G = st.rels[info[cd.modal].G[c]];
          auto UG = st.compose(U, G);
          auto R2 = st.rel_union(R, st.compose(UG, D));
          auto U2 = st.compose(UG, st.rels[info[cd.modal].F[c]]);
          auto D2 = st.compose(st.rels[info[cd.modal].B[c]], st.compose(G, D));
          bool hit = st.rel_meets(R2, mo.initial_set, mo.final_set);
          bool frozen = true;
          for (auto x : U2)
            if (x) {
              frozen = false;
              break;
            }
          if (cd.positive) {
            if (hit) continue;
            if (frozen) {
              rejected = true;
              break;
            }
            classes.push_back(
                {cd.modal, true, {st.intern_rel(R2), st.intern_rel(U2), st.intern_rel(D2)}});
          } else {
            if (hit) {
              rejected = true;
              break;
            }
            if (!frozen)
              classes.push_back({cd.modal, false,
                                 {st.intern_rel(R2), st.intern_rel(U2), st.intern_rel(D2)}});
          }
        }
      }
    }
    if (rejected) continue;

    // claims guessed at this node (consumed modals only)
    for (int m = 0; m < M && !rejected; ++m) {
      if (!((consumed >> m) & 1)) continue;
      ModalAtom& mo = modals_[m];
      RelStore& st = mo.store;
      const auto& loops_w = st.rels[info[m].loops];
      const auto& down_w = st.sets[info[m].down];
      if (!mo.is_loop) {
        auto X0 = st.image(mo.initial_set, loops_w);
        bool hit = st.sets_intersect(X0, mo.final_set) || st.sets_intersect(X0, down_w);
        if (verdicts[m]) {
          if (hit) continue;
          if (st.set_empty(X0)) {
            rejected = true;
            break;
          }
          classes.push_back({m, true, {st.intern_set(X0), -1, -1}});
        } else {
          if (hit) {
            rejected = true;
            break;
          }
          if (!st.set_empty(X0)) classes.push_back({m, false, {st.intern_set(X0), -1, -1}});
        }
      } else {
        bool hit = st.rel_meets(loops_w, mo.initial_set, mo.final_set);
        int idr = st.intern_rel(st.id_rel());
        if (verdicts[m]) {
          if (hit) continue;
          classes.push_back({m, true, {info[m].loops, idr, idr}});
        } else {
          if (hit) {
            rejected = true;
            break;
          }
          classes.push_back({m, false, {info[m].loops, idr, idr}});
        }
      }
    }
    if (rejected) continue;

    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    next.classes = std::move(classes);

    next.ebits = 0;
    for (int c = 0; c < arity; ++c) next.ebits |= child[c].ebits;
    for (size_t e = 0; e < e_nodes_.size(); ++e) {
      bool contributes = mode_ == Mode::Tree || symbol.kind == SttSymbol::Kind::Leaf;
      if (contributes && truth(e_nodes_[e]->state.get(), sym_string, verdicts))
        next.ebits |= (uint64_t)1 << e;
    }

    out.push_back(intern(next));
  }

  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::shared_ptr<Nta> pdl_tree_to_nta(const PdlSentencePtr& tree_phi,
                                     const SttAlphabet& alphabet) {
  return std::make_shared<PdlTreeNta>(alphabet, tree_phi, PdlTreeNta::Mode::Tree, 0);
}

std::shared_ptr<Nta> build_A_phi(const PdlSentencePtr& phi, const SttAlphabet& alphabet,
                                 int k) {
  return std::make_shared<PdlTreeNta>(alphabet, phi, PdlTreeNta::Mode::Source, k);
}

}  // namespace stwmc
