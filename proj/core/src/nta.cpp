#include "stwmc/nta.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "stwmc/error.hpp"

namespace stwmc {

std::string SttSymbol::str() const {
  switch (kind) {
    case Kind::Leaf: return "(" + std::to_string(i) + "," + letter + "," + proc + ")";
    case Kind::Add: return "Add_" + std::to_string(i) + "," + std::to_string(j) + "^" + edge;
    case Kind::Forget: return "Forget_" + std::to_string(i);
    case Kind::Oplus: return "oplus";
  }
  return "?";
}

int SttAlphabet::find(const SttSymbol& s) const {
  for (int i = 0; i < (int)symbols.size(); ++i)
    if (symbols[i] == s) return i;
  return -1;
}

int SttAlphabet::find_checked(const SttSymbol& s) const {
  int i = find(s);
  if (i < 0) throw UnknownSymbolError("symbol not in alphabet: " + s.str());
  return i;
}

SttAlphabet SttAlphabet::for_cbm(const Architecture& arch, const std::vector<std::string>& sigma,
                                 int k, bool include_same_color_adds) {
  SttAlphabet a;
  for (int i = 1; i <= k; ++i)
    for (const auto& l : sigma)
      for (const auto& p : arch.procs)
        a.symbols.push_back(SttSymbol{SttSymbol::Kind::Leaf, i, 0, "", l, p});
  std::vector<std::string> edges{"proc"};
  for (const auto& d : arch.ds) edges.push_back(d.name);
  for (const auto& e : edges)
    for (int i = 1; i <= k; ++i)
      for (int j = 1; j <= k; ++j) {
        if (i == j && !include_same_color_adds) continue;
        a.symbols.push_back(SttSymbol{SttSymbol::Kind::Add, i, j, e, "", ""});
      }
  for (int i = 1; i <= k; ++i)
    a.symbols.push_back(SttSymbol{SttSymbol::Kind::Forget, i, 0, "", "", ""});
  a.symbols.push_back(SttSymbol{SttSymbol::Kind::Oplus});
  return a;
}

SttSymbol symbol_of_node(const Stt& node) {
  switch (node.kind) {
    case Stt::Kind::Leaf:
      return SttSymbol{SttSymbol::Kind::Leaf, node.i, 0, "", node.letter, node.proc};
    case Stt::Kind::Add:
      return SttSymbol{SttSymbol::Kind::Add, node.i, node.j, node.edge, "", ""};
    case Stt::Kind::Forget:
      return SttSymbol{SttSymbol::Kind::Forget, node.i, 0, "", "", ""};
    case Stt::Kind::Oplus: return SttSymbol{SttSymbol::Kind::Oplus};
    case Stt::Kind::Rename:
      throw UnknownSymbolError("rename nodes must be eliminated before automata run");
  }
  return SttSymbol{};
}

// ---------------------------------------------------------------------------
// Product

namespace {

class ProductNta : public Nta {
 public:
  ProductNta(std::shared_ptr<Nta> a, std::shared_ptr<Nta> b)
      : Nta(a->alphabet()), a_(std::move(a)), b_(std::move(b)) {}

  StateId intern(StateId x, StateId y) {
    auto key = std::make_pair(x, y);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    StateId id = (StateId)pairs_.size();
    pairs_.push_back(key);
    index_[key] = id;
    return id;
  }

  std::vector<StateId> leaf_states(int sym) override {
    std::vector<StateId> out;
    for (StateId x : a_->leaf_states(sym))
      for (StateId y : b_->leaf_states(sym)) out.push_back(intern(x, y));
    return out;
  }
  std::vector<StateId> unary_steps(StateId s, int sym) override {
    auto [x, y] = pairs_[s];
    std::vector<StateId> out;
    auto xs = a_->unary_steps(x, sym);
    if (xs.empty()) return out;
    auto ys = b_->unary_steps(y, sym);
    for (StateId x2 : xs)
      for (StateId y2 : ys) out.push_back(intern(x2, y2));
    return out;
  }
  std::vector<StateId> binary_steps(StateId l, StateId r, int sym) override {
    auto [xl, yl] = pairs_[l];
    auto [xr, yr] = pairs_[r];
    std::vector<StateId> out;
    auto xs = a_->binary_steps(xl, xr, sym);
    if (xs.empty()) return out;
    auto ys = b_->binary_steps(yl, yr, sym);
    for (StateId x2 : xs)
      for (StateId y2 : ys) out.push_back(intern(x2, y2));
    return out;
  }
  bool accepting(StateId s) override {
    auto [x, y] = pairs_[s];
    return a_->accepting(x) && b_->accepting(y);
  }
  size_t discovered_states() const override { return pairs_.size(); }
  std::string state_name(StateId s) const override {
    auto [x, y] = pairs_[s];
    return "<" + a_->state_name(x) + " | " + b_->state_name(y) + ">";
  }
  uint32_t color_mask(StateId s) const override {
    auto [x, y] = pairs_[s];
    return a_->color_mask(x) | b_->color_mask(y);
  }

 private:
  std::shared_ptr<Nta> a_, b_;
  std::vector<std::pair<StateId, StateId>> pairs_;
  std::map<std::pair<StateId, StateId>, StateId> index_;
};

}  // namespace

std::unique_ptr<Nta> nta_intersect(std::shared_ptr<Nta> a, std::shared_ptr<Nta> b) {
  if (!(a->alphabet() == b->alphabet()))
    throw AlphabetMismatchError("intersection needs identical alphabets");
  return std::make_unique<ProductNta>(std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// Emptiness / membership

namespace {

struct Derivation {
  int sym = -1;
  int left = -1, right = -1;  // indices into the discovery table
  int height = 0;
};

SttPtr rebuild(const SttAlphabet& alph, const std::vector<Derivation>& how,
               const std::vector<StateId>& states, int idx) {
  const Derivation& d = how[idx];
  const SttSymbol& sym = alph.symbols[d.sym];
  switch (sym.kind) {
    case SttSymbol::Kind::Leaf: return Stt::leaf(sym.i, sym.letter, sym.proc);
    case SttSymbol::Kind::Add:
      return Stt::add(sym.i, sym.j, sym.edge, rebuild(alph, how, states, d.left));
    case SttSymbol::Kind::Forget:
      return Stt::forget(sym.i, rebuild(alph, how, states, d.left));
    case SttSymbol::Kind::Oplus:
      return Stt::oplus(rebuild(alph, how, states, d.left),
                        rebuild(alph, how, states, d.right));
  }
  return nullptr;
}

}  // namespace

NonemptyResult nta_nonempty(Nta& a, const NonemptyOptions& opts) {
  const SttAlphabet& alph = a.alphabet();
  NonemptyResult res;

  std::vector<StateId> states;           // discovery order
  std::vector<Derivation> how;           // witness per discovered entry
  std::map<StateId, int> seen;           // state -> discovery index
  std::map<uint32_t, std::vector<int>> by_mask;  // discovered, bucketed for (+)
  // worklist of discovery indices, processed in (height, index) order
  using QItem = std::pair<int, int>;     // (height, index)
  std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> work;

  int found_at = -1;  // earliest-discovered accepting state of minimal height
  auto discover = [&](StateId s, const Derivation& d) {
    auto it = seen.find(s);
    if (it != seen.end()) return;
    int idx = (int)states.size();
    states.push_back(s);
    how.push_back(d);
    seen[s] = idx;
    by_mask[a.color_mask(s)].push_back(idx);
    work.push({d.height, idx});
    if (a.accepting(s) && (found_at < 0 || d.height < how[found_at].height))
      found_at = idx;
  };

  std::vector<int> leaf_syms, unary_syms, binary_syms;
  for (int i = 0; i < alph.size(); ++i) {
    switch (alph.symbols[i].arity()) {
      case 0: leaf_syms.push_back(i); break;
      case 1: unary_syms.push_back(i); break;
      default: binary_syms.push_back(i); break;
    }
  }

  for (int sym : leaf_syms)
    for (StateId s : a.leaf_states(sym)) discover(s, Derivation{sym, -1, -1, 1});

  while (!work.empty()) {
    auto [h, idx] = work.top();
    // all future discoveries have height > h, so a found witness of height
    // <= h is already minimal
    if (found_at >= 0 && opts.stop_at_first_witness && how[found_at].height <= h) break;
    work.pop();
    if (states.size() > opts.max_discovered)
      throw LimitExceededError("nonemptiness exceeded the state budget");
    StateId s = states[idx];
    const uint32_t mask = a.color_mask(s);
    for (int sym : unary_syms)
      for (StateId t : a.unary_steps(s, sym)) discover(t, Derivation{sym, idx, -1, h + 1});
    // combine with every discovered partner whose colors are compatible
    for (int sym : binary_syms) {
      for (auto& [bmask, bucket] : by_mask) {
        if ((bmask & mask) != 0) continue;
        // bucket may grow while iterating; new entries pair later when popped
        const size_t upto = bucket.size();
        for (size_t bi = 0; bi < upto; ++bi) {
          int other = bucket[bi];
          int oh = how[other].height;
          for (StateId t : a.binary_steps(s, states[other], sym))
            discover(t, Derivation{sym, idx, other, std::max(h, oh) + 1});
          if (other != idx)
            for (StateId t : a.binary_steps(states[other], s, sym))
              discover(t, Derivation{sym, other, idx, std::max(h, oh) + 1});
        }
      }
    }
  }
  res.states_discovered = states.size();
  res.saturated = work.empty();
  if (found_at >= 0) res.witness = rebuild(alph, how, states, found_at);
  return res;
}

namespace {

std::vector<StateId> run_states_rec(Nta& a, const SttPtr& t) {
  int sym = a.alphabet().find_checked(symbol_of_node(*t));
  std::vector<StateId> out;
  switch (t->kind) {
    case Stt::Kind::Leaf: out = a.leaf_states(sym); break;
    case Stt::Kind::Add:
    case Stt::Kind::Forget: {
      for (StateId s : run_states_rec(a, t->left))
        for (StateId r : a.unary_steps(s, sym)) out.push_back(r);
      break;
    }
    case Stt::Kind::Oplus: {
      auto ls = run_states_rec(a, t->left);
      auto rs = run_states_rec(a, t->right);
      for (StateId l : ls)
        for (StateId r : rs)
          for (StateId x : a.binary_steps(l, r, sym)) out.push_back(x);
      break;
    }
    case Stt::Kind::Rename:
      throw UnknownSymbolError("rename nodes must be eliminated before automata run");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<StateId> nta_run_states(Nta& a, const SttPtr& t) { return run_states_rec(a, t); }

bool nta_member(Nta& a, const SttPtr& t) {
  for (StateId s : nta_run_states(a, t))
    if (a.accepting(s)) return true;
  return false;
}

uint64_t nta_count_reachable(Nta& a, uint64_t max_discovered) {
  NonemptyOptions opts;
  opts.stop_at_first_witness = false;
  opts.max_discovered = max_discovered;
  NonemptyResult r = nta_nonempty(a, opts);
  return r.states_discovered;
}

}  // namespace stwmc
