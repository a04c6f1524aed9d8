#include "stwmc/cbm.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "stwmc/error.hpp"

namespace stwmc {

int Cbm::num_events() const {
  int n = 0;
  for (const auto& w : words) n += (int)w.size();
  return n;
}

int Cbm::event_index(EventId e) const {
  int base = 0;
  for (int p = 0; p < e.proc; ++p) base += (int)words[p].size();
  return base + e.pos - 1;
}

EventId Cbm::event_at(int idx) const {
  for (int p = 0; p < (int)words.size(); ++p) {
    if (idx < (int)words[p].size()) return EventId{p, idx + 1};
    idx -= (int)words[p].size();
  }
  return EventId{};
}

std::vector<EventId> Cbm::all_events() const {
  std::vector<EventId> out;
  for (int p = 0; p < (int)words.size(); ++p)
    for (int i = 1; i <= (int)words[p].size(); ++i) out.push_back(EventId{p, i});
  return out;
}

const MatchEdge* Cbm::match_from(EventId w) const {
  for (const auto& m : matches)
    if (m.w == w) return &m;
  return nullptr;
}

const MatchEdge* Cbm::match_to(EventId r) const {
  for (const auto& m : matches)
    if (m.r == r) return &m;
  return nullptr;
}

void Cbm::sort_matches() { std::sort(matches.begin(), matches.end()); }

int LabeledGraph::add_vertex(const std::string& letter, const std::string& proc) {
  vertices.push_back(Vertex{letter, proc});
  return (int)vertices.size() - 1;
}

const char* axiom_name(AxiomKind k) {
  switch (k) {
    case AxiomKind::Labels: return "labels";
    case AxiomKind::ProcessChain: return "process-chain";
    case AxiomKind::Disjointness: return "disjointness";
    case AxiomKind::Acyclicity: return "acyclicity";
    case AxiomKind::Lifo: return "lifo";
    case AxiomKind::Fifo: return "fifo";
    case AxiomKind::Writer: return "writer";
    case AxiomKind::Reader: return "reader";
  }
  return "?";
}

namespace {

ValidationResult fail(AxiomKind k, std::string detail) {
  ValidationResult r;
  r.violation = k;
  r.detail = std::move(detail);
  return r;
}

// Transitive closure over n vertices given adjacency lists; false on cycle.
bool closure_acyclic(int n, const std::vector<std::vector<int>>& succ,
                     std::vector<std::vector<bool>>* reach) {
  // Kahn + propagation in reverse topological order.
  std::vector<int> indeg(n, 0);
  for (int v = 0; v < n; ++v)
    for (int w : succ[v]) indeg[w]++;
  std::vector<int> order, queue;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    order.push_back(v);
    for (int w : succ[v])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  if ((int)order.size() != n) return false;
  reach->assign(n, std::vector<bool>(n, false));
  for (int i = n - 1; i >= 0; --i) {
    int v = order[i];
    for (int w : succ[v]) {
      (*reach)[v][w] = true;
      for (int x = 0; x < n; ++x)
        if ((*reach)[w][x]) (*reach)[v][x] = true;
    }
  }
  return true;
}

}  // namespace

ValidationResult validate_cbm(const LabeledGraph& g, const Architecture& arch) {
  const int n = g.num_vertices();

  // labels: vertex processes and edge labels must be declared
  for (const auto& v : g.vertices)
    if (arch.proc_index(v.proc) < 0)
      return fail(AxiomKind::Labels, "unknown process " + v.proc);
  for (const auto& [d, edges] : g.ds_edges) {
    if (arch.ds_index(d) < 0) return fail(AxiomKind::Labels, "unknown data structure " + d);
    for (auto [u, v] : edges)
      if (u < 0 || u >= n || v < 0 || v >= n)
        return fail(AxiomKind::Labels, "edge endpoint out of range");
  }
  for (auto [u, v] : g.proc_edges)
    if (u < 0 || u >= n || v < 0 || v >= n)
      return fail(AxiomKind::Labels, "edge endpoint out of range");

  // process-chain: -> is a union of per-process successor chains covering E_p
  std::vector<int> succ(n, -1), pred(n, -1);
  for (auto [u, v] : g.proc_edges) {
    if (g.vertices[u].proc != g.vertices[v].proc)
      return fail(AxiomKind::ProcessChain, "proc edge across processes");
    if (u == v) return fail(AxiomKind::ProcessChain, "proc self-loop");
    if (succ[u] != -1 && succ[u] != v)
      return fail(AxiomKind::ProcessChain, "branching proc edge");
    if (pred[v] != -1 && pred[v] != u)
      return fail(AxiomKind::ProcessChain, "merging proc edge");
    succ[u] = v;
    pred[v] = u;
  }
  // per process: exactly one chain covering all its vertices
  std::vector<EventId> vertex_event(n);
  std::vector<std::vector<int>> order_of_proc(arch.num_procs());
  for (int p = 0; p < arch.num_procs(); ++p) {
    std::vector<int> verts;
    for (int v = 0; v < n; ++v)
      if (arch.proc_index(g.vertices[v].proc) == p) verts.push_back(v);
    if (verts.empty()) continue;
    int start = -1;
    for (int v : verts)
      if (pred[v] == -1) {
        if (start != -1)
          return fail(AxiomKind::ProcessChain,
                      "process " + arch.procs[p] + " is not a single chain");
        start = v;
      }
    if (start == -1)
      return fail(AxiomKind::ProcessChain, "proc edge cycle on " + arch.procs[p]);
    std::vector<int>& chain = order_of_proc[p];
    for (int v = start; v != -1; v = succ[v]) {
      if ((int)chain.size() > (int)verts.size())
        return fail(AxiomKind::ProcessChain, "proc edge cycle on " + arch.procs[p]);
      chain.push_back(v);
    }
    if (chain.size() != verts.size())
      return fail(AxiomKind::ProcessChain,
                  "process " + arch.procs[p] + " is not a single chain");
    for (int i = 0; i < (int)chain.size(); ++i)
      vertex_event[chain[i]] = EventId{p, i + 1};
  }

  // disjointness: all match edges pairwise disjoint as 4-tuples
  {
    std::set<int> used;
    for (const auto& [d, edges] : g.ds_edges) {
      (void)d;
      for (auto [u, v] : edges) {
        if (u == v) return fail(AxiomKind::Disjointness, "match self-loop");
        if (!used.insert(u).second || !used.insert(v).second)
          return fail(AxiomKind::Disjointness, "shared match endpoint");
      }
    }
  }

  // acyclicity of -> u |>
  std::vector<std::vector<int>> adj(n);
  for (int v = 0; v < n; ++v)
    if (succ[v] != -1) adj[v].push_back(succ[v]);
  for (const auto& [d, edges] : g.ds_edges) {
    (void)d;
    for (auto [u, v] : edges) adj[u].push_back(v);
  }
  std::vector<std::vector<bool>> reach;
  if (!closure_acyclic(n, adj, &reach))
    return fail(AxiomKind::Acyclicity, "cycle in -> u |>");

  // lifo / fifo
  for (const auto& [dname, edges] : g.ds_edges) {
    const auto& d = arch.ds[arch.ds_index(dname)];
    if (d.kind == DsKind::Stack) {
      for (auto [e1, f1] : edges)
        for (auto [e2, f2] : edges) {
          if (e1 == e2) continue;
          if (reach[e1][e2] && reach[e2][f1] && !reach[f2][f1])
            return fail(AxiomKind::Lifo, "stack " + dname + " violates LIFO");
        }
    } else if (d.kind == DsKind::Queue) {
      for (auto [e1, f1] : edges)
        for (auto [e2, f2] : edges) {
          if (e1 == e2) continue;
          if (reach[e1][e2] && !reach[f1][f2])
            return fail(AxiomKind::Fifo, "queue " + dname + " violates FIFO");
        }
    }
  }

  // writer / reader
  for (const auto& [dname, edges] : g.ds_edges) {
    const auto& d = arch.ds[arch.ds_index(dname)];
    for (auto [u, v] : edges) {
      if (arch.proc_index(g.vertices[u].proc) != d.writer)
        return fail(AxiomKind::Writer, "write on wrong process for " + dname);
      if (arch.proc_index(g.vertices[v].proc) != d.reader)
        return fail(AxiomKind::Reader, "read on wrong process for " + dname);
    }
  }

  ValidationResult r;
  Cbm m;
  m.arch = arch;
  m.words.resize(arch.num_procs());
  for (int p = 0; p < arch.num_procs(); ++p)
    for (int v : order_of_proc[p]) m.words[p].push_back(g.vertices[v].letter);
  for (const auto& [dname, edges] : g.ds_edges) {
    int di = arch.ds_index(dname);
    for (auto [u, v] : edges)
      m.matches.push_back(MatchEdge{di, vertex_event[u], vertex_event[v]});
  }
  m.sort_matches();
  r.cbm = std::move(m);
  r.vertex_event = std::move(vertex_event);
  return r;
}

LabeledGraph cbm_to_graph(const Cbm& m) {
  LabeledGraph g;
  std::vector<std::vector<int>> vertex_of(m.words.size());
  for (int p = 0; p < (int)m.words.size(); ++p) {
    for (int i = 0; i < (int)m.words[p].size(); ++i) {
      int v = g.add_vertex(m.words[p][i], m.arch.procs[p]);
      vertex_of[p].push_back(v);
      if (i > 0) g.proc_edges.push_back({vertex_of[p][i - 1], v});
    }
  }
  for (const auto& e : m.matches)
    g.ds_edges[m.arch.ds[e.ds].name].push_back(
        {vertex_of[e.w.proc][e.w.pos - 1], vertex_of[e.r.proc][e.r.pos - 1]});
  return g;
}

std::optional<CausalOrder> causal_order(const Cbm& m) {
  const int n = m.num_events();
  std::vector<std::vector<int>> succ(n);
  for (int p = 0; p < (int)m.words.size(); ++p)
    for (int i = 1; i < (int)m.words[p].size(); ++i)
      succ[m.event_index(EventId{p, i})].push_back(m.event_index(EventId{p, i + 1}));
  for (const auto& e : m.matches)
    succ[m.event_index(e.w)].push_back(m.event_index(e.r));

  CausalOrder ord;
  ord.n = n;
  const int wpr = ord.words_per_row();
  ord.bits.assign((size_t)n * wpr, 0);

  std::vector<int> indeg(n, 0);
  for (int v = 0; v < n; ++v)
    for (int w : succ[v]) indeg[w]++;
  std::vector<int> topo, queue;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.back();
    queue.pop_back();
    topo.push_back(v);
    for (int w : succ[v])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  if ((int)topo.size() != n) return std::nullopt;
  for (int i = n - 1; i >= 0; --i) {
    int v = topo[i];
    uint64_t* row = &ord.bits[(size_t)v * wpr];
    for (int w : succ[v]) {
      row[w >> 6] |= (uint64_t)1 << (w & 63);
      const uint64_t* wrow = &ord.bits[(size_t)w * wpr];
      for (int k = 0; k < wpr; ++k) row[k] |= wrow[k];
    }
  }
  return ord;
}

}  // namespace stwmc
