#include "stwmc/stt_automata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "stwmc/error.hpp"

namespace stwmc {

namespace {

// States are encoded as int vectors and hash-consed per automaton.
struct Interner {
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

// ---------------------------------------------------------------------------
// A_valid: state = active color bitmask

class ValidNta : public Nta {
 public:
  ValidNta(SttAlphabet a, int k) : Nta(std::move(a)), k_(k) {}

  std::vector<StateId> leaf_states(int sym) override {
    const SttSymbol& s = alphabet().symbols[sym];
    if (s.i < 1 || s.i > k_) return {};
    return {intern_mask(1 << (s.i - 1))};
  }
  std::vector<StateId> unary_steps(StateId q, int sym) override {
    const SttSymbol& s = alphabet().symbols[sym];
    int P = mask_of(q);
    if (s.kind == SttSymbol::Kind::Add) {
      if (s.i < 1 || s.i > k_ || s.j < 1 || s.j > k_) return {};
      return {q};  // Add on missing colors is a no-op and stays valid
    }
    if (s.i < 1 || s.i > k_) return {};
    return {intern_mask(P & ~(1 << (s.i - 1)))};
  }
  std::vector<StateId> binary_steps(StateId l, StateId r, int sym) override {
    (void)sym;
    int Pl = mask_of(l), Pr = mask_of(r);
    if (Pl & Pr) return {};
    return {intern_mask(Pl | Pr)};
  }
  bool accepting(StateId) override { return true; }
  size_t discovered_states() const override { return interner_.store.size(); }
  uint32_t color_mask(StateId q) const override { return (uint32_t)mask_of(q); }
  std::string state_name(StateId q) const override {
    return "P=" + std::to_string(mask_of(q));
  }

 private:
  StateId intern_mask(int m) { return interner_.intern({m}); }
  int mask_of(StateId q) const { return interner_.get(q)[0]; }
  int k_;
  Interner interner_;
};

// ---------------------------------------------------------------------------
// A_acyclic: state = (P, prec rows)

class AcyclicNta : public Nta {
 public:
  AcyclicNta(SttAlphabet a, int k) : Nta(std::move(a)), k_(k) {}

  std::vector<StateId> leaf_states(int sym) override {
    const SttSymbol& s = alphabet().symbols[sym];
    if (s.i < 1 || s.i > k_) return {};
    std::vector<int> v(1 + k_, 0);
    v[0] = 1 << (s.i - 1);
    return {interner_.intern(std::move(v))};
  }

  std::vector<StateId> unary_steps(StateId q, int sym) override {
    const SttSymbol& s = alphabet().symbols[sym];
    std::vector<int> v = interner_.get(q);
    int& P = v[0];
    auto less = [&](int i, int j) { return (v[i] >> (j - 1)) & 1; };  // i prec j
    if (s.kind == SttSymbol::Kind::Add) {
      int i = s.i, j = s.j;
      if (i < 1 || i > k_ || j < 1 || j > k_) return {};
      if (!((P >> (i - 1)) & 1) || !((P >> (j - 1)) & 1) || i == j) return {};
      if (less(j, i)) return {};
      // prec' = (prec u {(i,j)})^+
      v[i] |= 1 << (j - 1);
      for (bool changed = true; changed;) {
        changed = false;
        for (int x = 1; x <= k_; ++x)
          for (int y = 1; y <= k_; ++y) {
            if (!((v[x] >> (y - 1)) & 1)) continue;
            int add = v[y] & ~v[x];
            if (add) {
              v[x] |= add;
              changed = true;
            }
          }
      }
      for (int x = 1; x <= k_; ++x)
        if ((v[x] >> (x - 1)) & 1) return {};  // cycle
      return {interner_.intern(std::move(v))};
    }
    // Forget
    int i = s.i;
    if (i < 1 || i > k_ || !((P >> (i - 1)) & 1)) return {};
    P &= ~(1 << (i - 1));
    v[i] = 0;
    for (int x = 1; x <= k_; ++x) v[x] &= ~(1 << (i - 1));
    return {interner_.intern(std::move(v))};
  }

  std::vector<StateId> binary_steps(StateId l, StateId r, int sym) override {
    (void)sym;
    const auto& a = interner_.get(l);
    const auto& b = interner_.get(r);
    if (a[0] & b[0]) return {};
    std::vector<int> v(1 + k_, 0);
    v[0] = a[0] | b[0];
    for (int x = 1; x <= k_; ++x) v[x] = a[x] | b[x];
    return {interner_.intern(std::move(v))};
  }

  bool accepting(StateId) override { return true; }
  size_t discovered_states() const override { return interner_.store.size(); }
  uint32_t color_mask(StateId q) const override { return (uint32_t)interner_.get(q)[0]; }

 private:
  int k_;
  Interner interner_;
};

// ---------------------------------------------------------------------------
// A_edges: state = (P, pi, alpha, beta, gamma)

class EdgesNta : public Nta {
 public:
  EdgesNta(SttAlphabet a, const Architecture& arch, int k)
      : Nta(std::move(a)), arch_(arch), k_(k) {}

  // layout: [0]=P, [1..k]=pi (proc+1 or 0), [k+1]=alpha, [k+2]=beta, [k+3]=gamma
  std::vector<StateId> leaf_states(int sym) override {
    const SttSymbol& s = alphabet().symbols[sym];
    if (s.i < 1 || s.i > k_) return {};
    int p = arch_.proc_index(s.proc);
    if (p < 0) return {};
    std::vector<int> v(k_ + 4, 0);
    v[0] = 1 << (s.i - 1);
    v[s.i] = p + 1;
    return {interner_.intern(std::move(v))};
  }

  std::vector<StateId> unary_steps(StateId q, int sym) override {
    const SttSymbol& s = alphabet().symbols[sym];
    std::vector<int> v = interner_.get(q);
    int P = v[0];
    int& alpha = v[k_ + 1];
    int& beta = v[k_ + 2];
    int& gamma = v[k_ + 3];
    auto in = [&](int m, int c) { return (m >> (c - 1)) & 1; };
    if (s.kind == SttSymbol::Kind::Add) {
      int i = s.i, j = s.j;
      if (i < 1 || i > k_ || j < 1 || j > k_ || i == j) return {};
      if (!in(P, i) || !in(P, j)) return {};
      if (s.edge == "proc") {
        if (v[i] != v[j]) return {};
        if (in(alpha, i) || in(beta, j)) return {};
        alpha |= 1 << (i - 1);
        beta |= 1 << (j - 1);
      } else {
        int d = arch_.ds_index(s.edge);
        if (d < 0) return {};
        if (in(gamma, i) || in(gamma, j)) return {};
        if (v[i] != arch_.ds[d].writer + 1 || v[j] != arch_.ds[d].reader + 1) return {};
        gamma |= (1 << (i - 1)) | (1 << (j - 1));
      }
      return {interner_.intern(std::move(v))};
    }
    int i = s.i;
    if (i < 1 || i > k_ || !in(P, i)) return {};
    v[0] &= ~(1 << (i - 1));
    v[i] = 0;
    alpha &= ~(1 << (i - 1));
    beta &= ~(1 << (i - 1));
    gamma &= ~(1 << (i - 1));
    return {interner_.intern(std::move(v))};
  }

  std::vector<StateId> binary_steps(StateId l, StateId r, int sym) override {
    (void)sym;
    const auto& a = interner_.get(l);
    const auto& b = interner_.get(r);
    if (a[0] & b[0]) return {};
    std::vector<int> v(k_ + 4, 0);
    for (size_t x = 0; x < v.size(); ++x) v[x] = a[x] | b[x];
    return {interner_.intern(std::move(v))};
  }

  bool accepting(StateId) override { return true; }
  size_t discovered_states() const override { return interner_.store.size(); }
  uint32_t color_mask(StateId q) const override { return (uint32_t)interner_.get(q)[0]; }

 private:
  const Architecture arch_;
  int k_;
  Interner interner_;
};

}  // namespace

std::shared_ptr<Nta> build_A_valid(const SttAlphabet& alphabet, int k) {
  return std::make_shared<ValidNta>(alphabet, k);
}
std::shared_ptr<Nta> build_A_acyclic(const SttAlphabet& alphabet, int k) {
  return std::make_shared<AcyclicNta>(alphabet, k);
}
std::shared_ptr<Nta> build_A_edges(const SttAlphabet& alphabet, const Architecture& arch,
                                   int k) {
  return std::make_shared<EdgesNta>(alphabet, arch, k);
}

// ---------------------------------------------------------------------------
// A_cbm

namespace {

// Decoded CBM-automaton state. prec is a strict partial order on active
// colors; L/R flag processes whose extremal event lost its color; replay
// relations remember edges already present; policy relations R_d track the
// newest-color abstraction (zeta(e), zeta(f)) of every d-edge.
struct CbmState {
  int P = 0;
  std::vector<int> pi;      // size k+1, proc+1 or 0
  int alpha = 0, beta = 0, gamma = 0;
  std::vector<int> prec;    // size k+1 rows, bit j-1 => i prec j
  int L = 0, R = 0;
  std::vector<int> rep_proc;              // k+1 rows
  std::vector<std::vector<int>> rep_ds;   // per ds, k+1 rows
  std::vector<std::vector<int>> pol;      // per policy ds, (k+procs) rows

  bool in(int mask, int c) const { return (mask >> (c - 1)) & 1; }
  bool less(int i, int j) const { return (prec[i] >> (j - 1)) & 1; }
};

class CbmNta : public Nta {
 public:
  CbmNta(SttAlphabet a, const Architecture& arch, int k, CbmAutomatonOptions opts)
      : Nta(std::move(a)), arch_(arch), k_(k), opts_(opts) {
    for (int d = 0; d < arch_.num_ds(); ++d)
      if (arch_.ds[d].kind != DsKind::Bag) policy_ds_.push_back(d);
  }

  std::vector<StateId> leaf_states(int sym) override {
    const SttSymbol& s = alphabet().symbols[sym];
    if (s.i < 1 || s.i > k_) return {};
    int p = arch_.proc_index(s.proc);
    if (p < 0) return {};
    CbmState st = empty_state();
    st.P = 1 << (s.i - 1);
    st.pi[s.i] = p + 1;
    return {intern(st)};
  }

  std::vector<StateId> unary_steps(StateId q, int sym) override {
    const SttSymbol& s = alphabet().symbols[sym];
    CbmState st = decode(q);
    if (s.kind == SttSymbol::Kind::Add) {
      if (s.i < 1 || s.i > k_ || s.j < 1 || s.j > k_ || s.i == s.j) return {};
      if (!st.in(st.P, s.i) || !st.in(st.P, s.j)) return {};
      if (s.edge == "proc") return add_proc(st, s.i, s.j);
      int d = arch_.ds_index(s.edge);
      if (d < 0) return {};
      return add_data(st, s.i, s.j, d);
    }
    return forget(st, s.i);
  }

  std::vector<StateId> binary_steps(StateId l, StateId r, int sym) override;

  bool accepting(StateId q) override { return decode(q).P == 0; }
  size_t discovered_states() const override { return interner_.store.size(); }
  uint32_t color_mask(StateId q) const override { return (uint32_t)interner_.get(q)[0]; }
  std::string state_name(StateId q) const override;

 private:
  CbmState empty_state() const {
    CbmState st;
    st.pi.assign(k_ + 1, 0);
    st.prec.assign(k_ + 1, 0);
    st.rep_proc.assign(k_ + 1, 0);
    st.rep_ds.assign(arch_.num_ds(), std::vector<int>(k_ + 1, 0));
    st.pol.assign(policy_ds_.size(), std::vector<int>(k_ + arch_.num_procs(), 0));
    return st;
  }

  StateId intern(const CbmState& st) {
    std::vector<int> v;
    v.push_back(st.P);
    v.insert(v.end(), st.pi.begin() + 1, st.pi.end());
    v.push_back(st.alpha);
    v.push_back(st.beta);
    v.push_back(st.gamma);
    v.insert(v.end(), st.prec.begin() + 1, st.prec.end());
    v.push_back(st.L);
    v.push_back(st.R);
    if (opts_.replay) {
      v.insert(v.end(), st.rep_proc.begin() + 1, st.rep_proc.end());
      for (const auto& rows : st.rep_ds) v.insert(v.end(), rows.begin() + 1, rows.end());
    }
    for (const auto& rows : st.pol) v.insert(v.end(), rows.begin(), rows.end());
    return interner_.intern(std::move(v));
  }

  CbmState decode(StateId q) const {
    const std::vector<int>& v = interner_.get(q);
    CbmState st = empty_state();
    size_t at = 0;
    st.P = v[at++];
    for (int c = 1; c <= k_; ++c) st.pi[c] = v[at++];
    st.alpha = v[at++];
    st.beta = v[at++];
    st.gamma = v[at++];
    for (int c = 1; c <= k_; ++c) st.prec[c] = v[at++];
    st.L = v[at++];
    st.R = v[at++];
    if (opts_.replay) {
      for (int c = 1; c <= k_; ++c) st.rep_proc[c] = v[at++];
      for (auto& rows : st.rep_ds)
        for (int c = 1; c <= k_; ++c) rows[c] = v[at++];
    }
    for (auto& rows : st.pol)
      for (auto& row : rows) row = v[at++];
    return st;
  }

  // successor of i in the per-process chain of prec, or 0
  int chain_next(const CbmState& st, int i) const {
    int best = 0;
    for (int j = 1; j <= k_; ++j) {
      if (j == i || !st.in(st.P, j) || st.pi[j] != st.pi[i]) continue;
      if (!st.less(i, j)) continue;
      if (best == 0 || st.less(j, best)) best = j;
    }
    return best;
  }
  int chain_prev(const CbmState& st, int i) const {
    int best = 0;
    for (int j = 1; j <= k_; ++j) {
      if (j == i || !st.in(st.P, j) || st.pi[j] != st.pi[i]) continue;
      if (!st.less(j, i)) continue;
      if (best == 0 || st.less(best, j)) best = j;
    }
    return best;
  }

  // policy coordinates: colors 1..k -> 0..k-1, process p -> k+p
  int coord_color(int c) const { return c - 1; }
  int coord_proc(int p) const { return k_ + p; }
  bool coord_is_color(int x) const { return x < k_; }

  // region order along one process: start region < every color region;
  // color regions follow prec. nullopt when prec leaves the pair unordered.
  std::optional<bool> coord_less(const CbmState& st, int x, int y) const {
    if (x == y) return std::nullopt;
    if (!coord_is_color(x) && coord_is_color(y)) return true;
    if (coord_is_color(x) && !coord_is_color(y)) return false;
    if (!coord_is_color(x) && !coord_is_color(y)) return std::nullopt;
    int i = x + 1, j = y + 1;
    if (st.less(i, j)) return true;
    if (st.less(j, i)) return false;
    return std::nullopt;
  }

  bool policy_violation(const CbmState& st, DsKind kind, std::pair<int, int> e1,
                        std::pair<int, int> e2) const {
    auto lt = [&](int a, int b) {
      auto r = coord_less(st, a, b);
      return r.has_value() && *r;
    };
    auto [x1, y1] = e1;
    auto [x2, y2] = e2;
    if (kind == DsKind::Stack) {
      if (lt(x1, x2) && lt(x2, y1) && lt(y1, y2)) return true;
      if (lt(x2, x1) && lt(x1, y2) && lt(y2, y1)) return true;
    } else if (kind == DsKind::Queue) {
      if (lt(x1, x2) && lt(y2, y1)) return true;
      if (lt(x2, x1) && lt(y1, y2)) return true;
    }
    return false;
  }

  std::vector<std::pair<int, int>> policy_pairs(const CbmState& st, size_t pd) const {
    std::vector<std::pair<int, int>> out;
    const auto& rows = st.pol[pd];
    const int dim = k_ + arch_.num_procs();
    for (int x = 0; x < dim; ++x)
      for (int y = 0; y < dim; ++y)
        if ((rows[x] >> y) & 1) out.push_back({x, y});
    return out;
  }

  std::vector<StateId> add_proc(CbmState st, int i, int j) {
    if (opts_.replay && st.in(st.rep_proc[i], j)) return {intern(st)};
    // hole: i is the right end of a block whose immediate chain successor is j
    if (st.in(st.alpha, i)) return {};
    if (chain_next(st, i) != j) return {};
    st.alpha |= 1 << (i - 1);
    st.beta |= 1 << (j - 1);
    if (opts_.replay) st.rep_proc[i] |= 1 << (j - 1);
    return {intern(st)};
  }

  std::vector<StateId> add_data(CbmState st, int i, int j, int d) {
    if (opts_.replay && st.in(st.rep_ds[d][i], j)) return {intern(st)};
    if (!st.less(i, j)) return {};
    if (st.pi[i] != arch_.ds[d].writer + 1 || st.pi[j] != arch_.ds[d].reader + 1) return {};
    if (st.in(st.gamma, i) || st.in(st.gamma, j)) return {};
    // LIFO/FIFO: the fresh edge is checked against every edge recorded in R_d
    auto pit = std::find(policy_ds_.begin(), policy_ds_.end(), d);
    if (pit != policy_ds_.end()) {
      size_t pd = pit - policy_ds_.begin();
      std::pair<int, int> fresh{coord_color(i), coord_color(j)};
      for (auto& old : policy_pairs(st, pd))
        if (policy_violation(st, arch_.ds[d].kind, old, fresh)) return {};
      st.pol[pd][fresh.first] |= 1 << fresh.second;
    }
    st.gamma |= (1 << (i - 1)) | (1 << (j - 1));
    if (opts_.replay) st.rep_ds[d][i] |= 1 << (j - 1);
    return {intern(st)};
  }

  std::vector<StateId> forget(CbmState st, int i) {
    if (i < 1 || i > k_ || !st.in(st.P, i)) return {};
    const int p = st.pi[i] - 1;
    if (p < 0) return {};
    bool is_max = true, is_min = true;
    for (int j = 1; j <= k_; ++j) {
      if (j == i || !st.in(st.P, j) || st.pi[j] != st.pi[i]) continue;
      if (st.less(i, j)) is_max = false;
      if (st.less(j, i)) is_min = false;
    }
    bool ok_right = st.in(st.alpha, i) || (!((st.R >> p) & 1) && is_max);
    bool ok_left = st.in(st.beta, i) || (!((st.L >> p) & 1) && is_min);
    if (!ok_right || !ok_left) return {};

    // policy coordinates referring to i collapse to the previous block color
    // (its chain predecessor when that edge is real) or to the process start
    int prev = chain_prev(st, i);
    int new_coord = (prev != 0 && st.in(st.alpha, prev)) ? coord_color(prev) : coord_proc(p);
    const int dim = k_ + arch_.num_procs();
    for (auto& rows : st.pol) {
      std::vector<int> next(dim, 0);
      for (int x = 0; x < dim; ++x)
        for (int y = 0; y < dim; ++y) {
          if (!((rows[x] >> y) & 1)) continue;
          int nx = x == coord_color(i) ? new_coord : x;
          int ny = y == coord_color(i) ? new_coord : y;
          next[nx] |= 1 << ny;
        }
      rows = std::move(next);
    }

    if (!st.in(st.beta, i)) st.L |= 1 << p;
    if (!st.in(st.alpha, i)) st.R |= 1 << p;
    st.P &= ~(1 << (i - 1));
    st.pi[i] = 0;
    st.alpha &= ~(1 << (i - 1));
    st.beta &= ~(1 << (i - 1));
    st.gamma &= ~(1 << (i - 1));
    st.prec[i] = 0;
    for (int x = 1; x <= k_; ++x) st.prec[x] &= ~(1 << (i - 1));
    if (opts_.replay) {
      st.rep_proc[i] = 0;
      for (int x = 1; x <= k_; ++x) st.rep_proc[x] &= ~(1 << (i - 1));
      for (auto& rows : st.rep_ds) {
        rows[i] = 0;
        for (int x = 1; x <= k_; ++x) rows[x] &= ~(1 << (i - 1));
      }
    }
    return {intern(st)};
  }

  const Architecture arch_;
  int k_;
  CbmAutomatonOptions opts_;
  std::vector<int> policy_ds_;
  Interner interner_;
};

std::vector<StateId> CbmNta::binary_steps(StateId l, StateId r, int sym) {
  (void)sym;
  CbmState a = decode(l), b = decode(r);
  if (a.P & b.P) return {};
  if (a.L & b.L) return {};
  if (a.R & b.R) return {};

  CbmState base = empty_state();
  base.P = a.P | b.P;
  for (int c = 1; c <= k_; ++c) base.pi[c] = a.pi[c] | b.pi[c];
  base.alpha = a.alpha | b.alpha;
  base.beta = a.beta | b.beta;
  base.gamma = a.gamma | b.gamma;
  base.L = a.L | b.L;
  base.R = a.R | b.R;
  if (opts_.replay) {
    for (int c = 1; c <= k_; ++c) base.rep_proc[c] = a.rep_proc[c] | b.rep_proc[c];
    for (int d = 0; d < arch_.num_ds(); ++d)
      for (int c = 1; c <= k_; ++c) base.rep_ds[d][c] = a.rep_ds[d][c] | b.rep_ds[d][c];
  }
  for (size_t pd = 0; pd < policy_ds_.size(); ++pd)
    for (size_t x = 0; x < base.pol[pd].size(); ++x)
      base.pol[pd][x] = a.pol[pd][x] | b.pol[pd][x];

  // collect colors and cross pairs
  std::vector<int> colors;
  for (int c = 1; c <= k_; ++c)
    if (base.in(base.P, c)) colors.push_back(c);
  std::vector<std::pair<int, int>> cross;  // unordered pairs, one from each side
  for (int i : colors)
    for (int j : colors) {
      if (i >= j) continue;
      bool ia = a.in(a.P, i), ja = a.in(a.P, j);
      if (ia != ja) cross.push_back({i, j});
    }

  std::vector<StateId> out;
  // choice per cross pair: 0 = i prec j, 1 = j prec i, 2 = incomparable
  // (same-process pairs must be comparable)
  std::vector<int> choice(cross.size(), 0);
  auto emit = [&]() {
    CbmState st = base;
    for (int c = 1; c <= k_; ++c) st.prec[c] = a.prec[c] | b.prec[c];
    for (size_t x = 0; x < cross.size(); ++x) {
      auto [i, j] = cross[x];
      if (choice[x] == 0) st.prec[i] |= 1 << (j - 1);
      if (choice[x] == 1) st.prec[j] |= 1 << (i - 1);
    }
    // transitive closure
    for (bool changed = true; changed;) {
      changed = false;
      for (int x : colors)
        for (int y : colors) {
          if (!st.less(x, y)) continue;
          int add = st.prec[y] & ~st.prec[x];
          if (add) {
            st.prec[x] |= add;
            changed = true;
          }
        }
    }
    for (int x : colors)
      if (st.less(x, x)) return;  // cyclic guess
    // the closure may not add same-side pairs beyond the original orders
    for (int x : colors)
      for (int y : colors) {
        if (x == y || !st.less(x, y)) continue;
        bool xa = a.in(a.P, x), ya = a.in(a.P, y);
        if (xa && ya && !a.less(x, y)) return;
        if (!xa && !ya && !b.less(x, y)) return;
      }
    // per-process totality
    for (int x : colors)
      for (int y : colors) {
        if (x >= y || st.pi[x] != st.pi[y]) continue;
        if (!st.less(x, y) && !st.less(y, x)) return;
      }
    // shuffle condition: chains only interleave at block boundaries
    for (int x : colors)
      for (int y : colors) {
        if (x == y || st.pi[x] != st.pi[y]) continue;
        bool cover = st.less(x, y) && chain_next(st, x) == y;
        if (!(st.in(st.alpha, x) || st.in(st.beta, y))) continue;
        bool cover_a = a.in(a.P, x) && a.in(a.P, y) && a.less(x, y) && chain_next(a, x) == y;
        bool cover_b = b.in(b.P, x) && b.in(b.P, y) && b.less(x, y) && chain_next(b, x) == y;
        if (cover != (cover_a || cover_b)) return;
      }
    // forgotten extremal events pin the first/last block of their process
    auto lr_ok = [&](const CbmState& from, const CbmState& other) {
      for (int i = 1; i <= k_; ++i) {
        if (!from.in(from.P, i)) continue;
        int p = from.pi[i] - 1;
        if ((other.L >> p) & 1) {
          bool found = false;
          for (int j = 1; j <= k_; ++j)
            if (other.in(other.P, j) && other.pi[j] == from.pi[i] && st.less(j, i))
              found = true;
          if (!found) return false;
        }
        if ((other.R >> p) & 1) {
          bool found = false;
          for (int j = 1; j <= k_; ++j)
            if (other.in(other.P, j) && other.pi[j] == from.pi[i] && st.less(i, j))
              found = true;
          if (!found) return false;
        }
      }
      return true;
    };
    if (!lr_ok(a, b) || !lr_ok(b, a)) return;
    // LIFO/FIFO across the two sides
    for (size_t pd = 0; pd < policy_ds_.size(); ++pd) {
      DsKind kind = arch_.ds[policy_ds_[pd]].kind;
      for (auto& e1 : policy_pairs(a, pd))
        for (auto& e2 : policy_pairs(b, pd))
          if (policy_violation(st, kind, e1, e2)) return;
    }
    out.push_back(intern(st));
  };

  std::function<void(size_t)> rec = [&](size_t x) {
    if (x == cross.size()) {
      emit();
      return;
    }
    auto [i, j] = cross[x];
    bool same_proc = base.pi[i] == base.pi[j];
    for (int c = 0; c < (same_proc ? 2 : 3); ++c) {
      choice[x] = c;
      rec(x + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string CbmNta::state_name(StateId q) const {
  CbmState st = decode(q);
  std::ostringstream o;
  o << "P=" << st.P << " a=" << st.alpha << " b=" << st.beta << " g=" << st.gamma
    << " L=" << st.L << " R=" << st.R;
  return o.str();
}

}  // namespace

std::shared_ptr<Nta> build_A_cbm(const SttAlphabet& alphabet, const Architecture& arch,
                                 int k, const CbmAutomatonOptions& opts) {
  return std::make_shared<CbmNta>(alphabet, arch, k, opts);
}

// ---------------------------------------------------------------------------
// A_sys

namespace {

class SysNta : public Nta {
 public:
  SysNta(SttAlphabet a, const Cpds& s, int k) : Nta(std::move(a)), s_(s), k_(k) {}

  // layout: [0]=P, [1..k]=pi (proc+1), [k+1]=alpha, [k+2]=beta,
  // [k+3..2k+2]=delta (trans+1), then per proc sigma (loc+1 or 0)
  std::vector<StateId> leaf_states(int sym) override {
    const SttSymbol& sy = alphabet().symbols[sym];
    if (sy.i < 1 || sy.i > k_) return {};
    int p = s_.arch.proc_index(sy.proc);
    if (p < 0) return {};
    std::vector<StateId> out;
    for (int t = 0; t < (int)s_.trans.size(); ++t) {
      if (s_.trans[t].proc != p || s_.trans[t].letter != sy.letter) continue;
      std::vector<int> v(2 * k_ + 3 + s_.arch.num_procs(), 0);
      v[0] = 1 << (sy.i - 1);
      v[sy.i] = p + 1;
      v[k_ + 2 + sy.i] = t + 1;
      out.push_back(interner_.intern(std::move(v)));
    }
    return out;
  }

  std::vector<StateId> unary_steps(StateId q, int sym) override {
    const SttSymbol& sy = alphabet().symbols[sym];
    std::vector<int> v = interner_.get(q);
    int P = v[0];
    auto in = [&](int m, int c) { return (m >> (c - 1)) & 1; };
    auto delta = [&](int c) { return v[k_ + 2 + c] - 1; };
    if (sy.kind == SttSymbol::Kind::Add) {
      int i = sy.i, j = sy.j;
      if (i < 1 || i > k_ || j < 1 || j > k_ || i == j) return {};
      if (!in(P, i) || !in(P, j)) return {};
      const Transition& ti = s_.trans[delta(i)];
      const Transition& tj = s_.trans[delta(j)];
      if (sy.edge == "proc") {
        if (ti.tgt != tj.src) return {};
        v[k_ + 1] |= 1 << (i - 1);
        v[k_ + 2] |= 1 << (j - 1);
        return {interner_.intern(std::move(v))};
      }
      int d = s_.arch.ds_index(sy.edge);
      if (d < 0) return {};
      if (ti.kind != Transition::Kind::Write || ti.ds != d) return {};
      if (tj.kind != Transition::Kind::Read || tj.ds != d) return {};
      if (ti.value != tj.value) return {};
      return {interner_.intern(std::move(v))};
    }
    int i = sy.i;
    if (i < 1 || i > k_ || !in(P, i)) return {};
    const Transition& ti = s_.trans[delta(i)];
    bool in_beta = in(v[k_ + 2], i);
    if (!in_beta && ti.src != s_.init) return {};
    bool in_alpha = in(v[k_ + 1], i);
    int p = v[i] - 1;
    if (!in_alpha) v[2 * k_ + 3 + p] = ti.tgt + 1;  // record the final location
    v[0] &= ~(1 << (i - 1));
    v[i] = 0;
    v[k_ + 1] &= ~(1 << (i - 1));
    v[k_ + 2] &= ~(1 << (i - 1));
    v[k_ + 2 + i] = 0;
    return {interner_.intern(std::move(v))};
  }

  std::vector<StateId> binary_steps(StateId l, StateId r, int sym) override {
    (void)sym;
    const auto& a = interner_.get(l);
    const auto& b = interner_.get(r);
    if (a[0] & b[0]) return {};
    for (int p = 0; p < s_.arch.num_procs(); ++p)
      if (a[2 * k_ + 3 + p] && b[2 * k_ + 3 + p]) return {};
    std::vector<int> v(a.size(), 0);
    for (size_t x = 0; x < v.size(); ++x) v[x] = a[x] | b[x];
    return {interner_.intern(std::move(v))};
  }

  bool accepting(StateId q) override {
    const auto& v = interner_.get(q);
    if (v[0] != 0) return false;
    std::vector<int> tuple(s_.arch.num_procs());
    for (int p = 0; p < s_.arch.num_procs(); ++p)
      tuple[p] = v[2 * k_ + 3 + p] ? v[2 * k_ + 3 + p] - 1 : s_.init;
    for (const auto& fin : s_.fin)
      if (fin == tuple) return true;
    return false;
  }
  size_t discovered_states() const override { return interner_.store.size(); }
  uint32_t color_mask(StateId q) const override { return (uint32_t)interner_.get(q)[0]; }

 private:
  const Cpds s_;
  int k_;
  Interner interner_;
};

}  // namespace

std::shared_ptr<Nta> build_A_sys(const SttAlphabet& alphabet, const Cpds& s, int k) {
  return std::make_shared<SysNta>(alphabet, s, k);
}

}  // namespace stwmc
