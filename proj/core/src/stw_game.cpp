#include "stwmc/stw_game.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>

#include "stwmc/error.hpp"

namespace stwmc {

namespace {

struct Edge {
  std::string label;
  int u, v;
};

using Mask = uint32_t;

struct Game {
  const LabeledGraph& g;
  int k;
  int n;
  std::vector<Edge> edges;
  // memo: (S,U) -> winning mark set (0 = losing, valid since marks are nonempty)
  std::map<std::pair<Mask, Mask>, Mask> memo;
  std::vector<int> leaf_order;  // vertex ids in leaf emission order

  // Connected components of the subgraph on S with all U-U edges dropped.
  std::vector<Mask> components(Mask S, Mask U) const {
    std::vector<int> parent(n);
    for (int v = 0; v < n; ++v) parent[v] = v;
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const Edge& e : edges) {
      if (!((S >> e.u) & 1) || !((S >> e.v) & 1)) continue;
      if (((U >> e.u) & 1) && ((U >> e.v) & 1)) continue;  // removed
      parent[find(e.u)] = find(e.v);
    }
    std::map<int, Mask> by_root;
    for (int v = 0; v < n; ++v)
      if ((S >> v) & 1) by_root[find(v)] |= Mask(1) << v;
    std::vector<Mask> out;
    for (auto& [r, m] : by_root) out.push_back(m);
    return out;
  }

  bool win(Mask S, Mask U) {
    if (std::popcount(U) > k) return false;
    auto comps = components(S, U);
    if (comps.size() > 1) {
      for (Mask c : comps)
        if (!win(c, U & c)) return false;
      return true;
    }
    if (U == S) return true;
    auto key = std::make_pair(S, U);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second != 0;
    memo[key] = 0;  // guards against re-entry; positions strictly shrink anyway
    Mask free = S & ~U;
    int budget = k - std::popcount(U);
    // nonempty subsets of the unmarked vertices, small first, fixed order
    std::vector<Mask> cands;
    for (Mask M = free; M; M = (M - 1) & free) cands.push_back(M);
    std::sort(cands.begin(), cands.end(), [](Mask a, Mask b) {
      int pa = std::popcount(a), pb = std::popcount(b);
      return pa != pb ? pa < pb : a < b;
    });
    for (Mask M : cands) {
      if (std::popcount(M) > budget) continue;
      if (win(S, U | M)) {
        memo[key] = M;
        return true;
      }
    }
    return false;
  }

  // colors: vertex -> color for currently marked vertices
  SttPtr build(Mask S, Mask U, std::map<int, int>& colors) {
    auto comps = components(S, U);
    if (comps.size() > 1) {
      SttPtr acc;
      for (Mask c : comps) {
        SttPtr part = build(c, U & c, colors);
        acc = acc ? Stt::oplus(acc, part) : part;
      }
      return acc;
    }
    if (U == S) {
      // all marked: emit leaves (edge-free position by the eager-removal rule)
      SttPtr acc;
      for (int v = 0; v < n; ++v) {
        if (!((S >> v) & 1)) continue;
        SttPtr leaf = Stt::leaf(colors.at(v), g.vertices[v].letter, g.vertices[v].proc);
        leaf_order.push_back(v);
        acc = acc ? Stt::oplus(acc, leaf) : leaf;
      }
      return acc;
    }
    Mask M = memo.at({S, U});
    Mask newU = U | M;
    // assign smallest free colors to the new marks
    std::vector<int> marked;
    for (int v = 0; v < n; ++v)
      if ((M >> v) & 1) marked.push_back(v);
    for (int v : marked) {
      for (int c = 1; c <= k; ++c) {
        bool used = false;
        for (auto& [w, cw] : colors)
          if (cw == c && ((newU >> w) & 1)) used = true;
        if (!used) {
          colors[v] = c;
          break;
        }
      }
    }
    SttPtr t = build(S, newU, colors);
    // edges that become marked-marked now get added here
    for (const Edge& e : edges) {
      if (!((S >> e.u) & 1) || !((S >> e.v) & 1)) continue;
      bool before = ((U >> e.u) & 1) && ((U >> e.v) & 1);
      bool after = ((newU >> e.u) & 1) && ((newU >> e.v) & 1);
      if (!before && after) t = Stt::add(colors.at(e.u), colors.at(e.v), e.label, t);
    }
    for (int v : marked) t = Stt::forget(colors.at(v), t);
    return t;
  }
};

}  // namespace

std::optional<StwWitness> stw_oracle(const LabeledGraph& g, int k) {
  const int n = g.num_vertices();
  if (n == 0) throw EmptyBehaviorError("no STT denotes the empty graph");
  if (n > 10) throw LimitExceededError("stw_oracle capped at 10 vertices");
  if (k < 1) return std::nullopt;
  Game game{g, k, n};
  for (auto [u, v] : g.proc_edges) game.edges.push_back({"proc", u, v});
  for (const auto& [d, es] : g.ds_edges)
    for (auto [u, v] : es) game.edges.push_back({d, u, v});
  Mask all = n == 32 ? ~Mask(0) : ((Mask(1) << n) - 1);
  if (!game.win(all, 0)) return std::nullopt;

  std::map<int, int> colors;
  SttPtr t = game.build(all, 0, colors);
  StwWitness w;
  w.stt = t;
  // build() emits leaves in the term's left-to-right order, which is the order
  // eval_stt numbers vertices in
  w.leaf_vertex = std::move(game.leaf_order);
  return w;
}

int min_stt_colors(const LabeledGraph& g) {
  for (int k = 1; k <= g.num_vertices(); ++k)
    if (stw_oracle(g, k)) return k;
  return g.num_vertices();  // unreachable: k = |V| always wins
}

}  // namespace stwmc
