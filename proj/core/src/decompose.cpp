#include "stwmc/decompose.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "stwmc/classes.hpp"
#include "stwmc/error.hpp"

namespace stwmc {

int nested_word_colors() { return 4; }
int context_bounded_colors(int k) { return std::max(4, 2 * k); }
int scope_bounded_colors(int k) { return std::max(4, 2 * k); }
int exist_bounded_colors(const Architecture& arch, int k) {
  return k * arch.num_ds() + arch.num_procs() + 1;
}

bool stt_evaluates_to_cbm(const SttPtr& t, const Cbm& m) {
  ColoredGraph cg = eval_stt(t);
  ValidationResult vr = validate_cbm(cg.graph, m.arch);
  return vr.ok() && *vr.cbm == m;
}

namespace {

// Split-CBM workspace for single-process strategies. Positions are 1-based
// within the unique process word; the term is assembled inside-out, so a frame
// recurses on the shrunk state first and then wraps its Adds and Forgets.
struct MnwState {
  const Cbm* m;
  int palette;
  std::map<int, int> color;                 // position -> active color
  std::set<std::pair<int, int>> proc_edges; // edges still present
  std::map<int, std::pair<int, int>> write_to;  // w -> (r, ds), present matches
  std::map<int, int> read_of;                   // r -> w

  const std::string& letter(int pos) const { return m->words[0][pos - 1]; }
  const std::string& proc_name() const { return m->arch.procs[0]; }

  static MnwState init(const Cbm& m, int palette) {
    MnwState st;
    st.m = &m;
    st.palette = palette;
    const int n = (int)m.words[0].size();
    for (int i = 1; i < n; ++i) st.proc_edges.insert({i, i + 1});
    for (const auto& e : m.matches) {
      st.write_to[e.w.pos] = {e.r.pos, e.ds};
      st.read_of[e.r.pos] = e.w.pos;
    }
    return st;
  }

  // Colors of two events in one segment never clash; different (+)-branches
  // may reuse indices, so only the segment's own events count as occupied.
  int alloc(int pos, const std::set<int>& seg) {
    std::set<int> used;
    for (int q : seg) {
      auto it = color.find(q);
      if (it != color.end()) used.insert(it->second);
    }
    for (int c = 1; c <= palette; ++c)
      if (!used.count(c)) {
        color[pos] = c;
        return c;
      }
    throw LimitExceededError("decomposition exceeded its color budget");
  }

  int stack_of_present(int pos) const {  // ds touched via a present match, or -1
    auto w = write_to.find(pos);
    if (w != write_to.end()) return w->second.second;
    auto r = read_of.find(pos);
    if (r != read_of.end()) return write_to.at(r->second).second;
    return -1;
  }

  std::vector<std::set<int>> components(const std::set<int>& seg) const {
    std::map<int, int> parent;
    for (int v : seg) parent[v] = v;
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto join = [&](int a, int b) {
      if (seg.count(a) && seg.count(b)) parent[find(a)] = find(b);
    };
    for (auto [u, v] : proc_edges) join(u, v);
    for (const auto& [w, rd] : write_to) join(w, rd.first);
    std::map<int, std::set<int>> by_root;
    for (int v : seg) by_root[find(v)].insert(v);
    std::vector<std::set<int>> out;
    for (auto& [r, s] : by_root) out.push_back(std::move(s));
    std::sort(out.begin(), out.end(),
              [](const std::set<int>& a, const std::set<int>& b) { return *a.begin() < *b.begin(); });
    return out;
  }

  // Generalized endpoint strategy for a single-stack well-nested segment,
  // tolerating pre-colored interior points and absent proc edges.
  SttPtr build_gnw(const std::set<int>& seg) {
    auto comps = components(seg);
    if (comps.size() > 1) {
      SttPtr acc;
      for (const auto& c : comps) {
        SttPtr part = build_gnw(c);
        acc = acc ? Stt::oplus(acc, part) : part;
      }
      return acc;
    }

    const int lo = *seg.begin();
    std::vector<int> created;
    std::vector<std::tuple<int, int, std::string>> added;  // (cu, cv, label)

    if (!color.count(lo)) created.push_back(lo), alloc(lo, seg);

    SttPtr inner;
    auto wt = write_to.find(lo);
    if (wt == write_to.end()) {
      // lo is unmatched here: detach it from its successor
      if (seg.size() == 1) {
        inner = Stt::leaf(color.at(lo), letter(lo), proc_name());
      } else {
        int nxt = *std::next(seg.begin());
        if (!color.count(nxt)) created.push_back(nxt), alloc(nxt, seg);
        auto edge = std::make_pair(lo, nxt);
        bool had_edge = proc_edges.erase(edge) > 0;
        if (had_edge) added.push_back({color.at(lo), color.at(nxt), "proc"});
        std::set<int> rest(std::next(seg.begin()), seg.end());
        SttPtr l = Stt::leaf(color.at(lo), letter(lo), proc_name());
        inner = Stt::oplus(l, build_gnw(rest));
        if (had_edge) proc_edges.insert(edge);
      }
    } else {
      auto [f, ds] = wt->second;
      const std::string& dname = m->arch.ds[ds].name;
      if (!color.count(f)) created.push_back(f), alloc(f, seg);
      if (f == *seg.rbegin()) {
        // the match closes the segment: add it and continue on the rest
        write_to.erase(lo);
        read_of.erase(f);
        added.push_back({color.at(lo), color.at(f), dname});
        inner = build_gnw(seg);
        write_to[lo] = {f, ds};
        read_of[f] = lo;
      } else {
        // interior read: split right after it
        auto it = seg.upper_bound(f);
        int g = *it;
        bool had_edge = false;
        std::pair<int, int> edge{f, g};
        if (proc_edges.count(edge)) {
          if (!color.count(g)) created.push_back(g), alloc(g, seg);
          proc_edges.erase(edge);
          had_edge = true;
          added.push_back({color.at(f), color.at(g), "proc"});
        }
        write_to.erase(lo);
        read_of.erase(f);
        added.push_back({color.at(lo), color.at(f), dname});
        std::set<int> left(seg.begin(), seg.upper_bound(f));
        std::set<int> right(it, seg.end());
        inner = Stt::oplus(build_gnw(left), build_gnw(right));
        write_to[lo] = {f, ds};
        read_of[f] = lo;
        if (had_edge) proc_edges.insert(edge);
      }
    }

    for (auto& [cu, cv, lab] : added) inner = Stt::add(cu, cv, lab, inner);
    for (auto it = created.rbegin(); it != created.rend(); ++it) {
      inner = Stt::forget(color.at(*it), inner);
      color.erase(*it);
    }
    return inner;
  }

  // Scope strategy: repeatedly isolate the leftmost pending write's stack by
  // splitting the prefix up to its read into contexts.
  SttPtr build_scope(const std::set<int>& seg) {
    auto comps = components(seg);
    if (comps.size() > 1) {
      SttPtr acc;
      for (const auto& c : comps) {
        SttPtr part = build_scope(c);
        acc = acc ? Stt::oplus(acc, part) : part;
      }
      return acc;
    }

    // single (present-)stack or match-free segments are nested words
    std::set<int> stacks;
    for (int v : seg) {
      int d = stack_of_present(v);
      if (d >= 0) stacks.insert(d);
    }
    if (stacks.size() <= 1) return build_gnw(seg);

    int e = -1;
    for (int v : seg)
      if (write_to.count(v)) {
        e = v;
        break;
      }
    int f = write_to.at(e).first;

    std::vector<int> created;
    std::vector<std::tuple<int, int, std::string>> added;
    std::vector<std::pair<int, int>> removed;
    auto ensure = [&](int pos) {
      if (!color.count(pos)) created.push_back(pos), alloc(pos, seg);
    };
    auto cut = [&](int u, int v) {
      std::pair<int, int> edge{u, v};
      if (!proc_edges.count(edge)) return;
      ensure(u);
      ensure(v);
      proc_edges.erase(edge);
      removed.push_back(edge);
      added.push_back({color.at(u), color.at(v), "proc"});
    };

    // split the process edge right behind the read
    auto after_f = seg.upper_bound(f);
    if (after_f != seg.end()) cut(f, *after_f);

    // divide the prefix [min(seg) .. f] into its contexts (greedy boundaries;
    // events whose matches were already added count as internal)
    std::vector<int> prefix(seg.begin(), seg.upper_bound(f));
    {
      int cur_stack = -1;
      for (size_t i = 0; i < prefix.size(); ++i) {
        int d = stack_of_present(prefix[i]);
        if (d < 0) continue;
        if (cur_stack == -1) {
          cur_stack = d;
        } else if (d != cur_stack) {
          cut(prefix[i - 1], prefix[i]);
          cur_stack = d;
        }
      }
    }

    SttPtr inner = build_scope(seg);
    for (auto& [cu, cv, lab] : added) inner = Stt::add(cu, cv, lab, inner);
    for (auto it = created.rbegin(); it != created.rend(); ++it) {
      inner = Stt::forget(color.at(*it), inner);
      color.erase(*it);
    }
    for (auto& edge : removed) proc_edges.insert(edge);
    return inner;
  }
};

}  // namespace

SttPtr decompose_nested_word(const Cbm& m) {
  if (m.arch.num_procs() != 1 || m.arch.num_ds() != 1 ||
      m.arch.ds[0].kind != DsKind::Stack)
    throw WrongShapeError("nested words need one process over one stack");
  if (m.empty()) throw EmptyBehaviorError("the empty behavior has no term");
  MnwState st = MnwState::init(m, nested_word_colors());
  std::set<int> all;
  for (int i = 1; i <= (int)m.words[0].size(); ++i) all.insert(i);
  return st.build_gnw(all);
}

SttPtr decompose_context_bounded(const Cbm& m, int k) {
  require_mnw_arch(m.arch);
  if (m.empty()) throw EmptyBehaviorError("the empty behavior has no term");
  if (!in_context_k(m, k)) throw NotInClassError("behavior is not " + std::to_string(k) + "-context-bounded");
  MnwState st = MnwState::init(m, context_bounded_colors(k));
  std::set<int> all;
  for (int i = 1; i <= (int)m.words[0].size(); ++i) all.insert(i);

  auto contexts = context_split(m);
  std::vector<int> created;
  std::vector<std::tuple<int, int, std::string>> added;
  for (auto [lo, hi] : contexts) {
    if (!st.color.count(lo)) created.push_back(lo), st.alloc(lo, all);
    if (!st.color.count(hi)) created.push_back(hi), st.alloc(hi, all);
  }
  for (size_t i = 0; i + 1 < contexts.size(); ++i) {
    int u = contexts[i].second, v = contexts[i + 1].first;
    st.proc_edges.erase({u, v});
    added.push_back({st.color.at(u), st.color.at(v), "proc"});
  }

  SttPtr inner;
  for (const auto& comp : st.components(all)) {
    SttPtr part = st.build_gnw(comp);
    inner = inner ? Stt::oplus(inner, part) : part;
  }
  for (auto& [cu, cv, lab] : added) inner = Stt::add(cu, cv, lab, inner);
  for (auto it = created.rbegin(); it != created.rend(); ++it) {
    inner = Stt::forget(st.color.at(*it), inner);
    st.color.erase(*it);
  }
  return inner;
}

SttPtr decompose_scope_bounded(const Cbm& m, int k) {
  require_mnw_arch(m.arch);
  if (m.empty()) throw EmptyBehaviorError("the empty behavior has no term");
  if (!in_scope_k(m, k)) throw NotInClassError("behavior is not " + std::to_string(k) + "-scope-bounded");
  MnwState st = MnwState::init(m, scope_bounded_colors(k));
  std::set<int> all;
  for (int i = 1; i <= (int)m.words[0].size(); ++i) all.insert(i);
  return st.build_scope(all);
}

SttPtr decompose_exist_bounded(const Cbm& m, int k) {
  if (m.empty()) throw EmptyBehaviorError("the empty behavior has no term");
  auto lin = bounded_linearization(m, k);
  if (!lin) throw NotInClassError("behavior is not existentially " + std::to_string(k) + "-bounded");
  const Architecture& arch = m.arch;
  const int palette = exist_bounded_colors(arch, k);

  std::map<int, int> color;  // dense event index -> color
  auto alloc = [&](int idx) {
    std::set<int> used;
    for (auto& [q, c] : color) used.insert(c);
    for (int c = 1; c <= palette; ++c)
      if (!used.count(c)) {
        color[idx] = c;
        return c;
      }
    throw LimitExceededError("existential decomposition exceeded its color budget");
  };

  std::vector<int> last_on_proc(arch.num_procs(), -1);  // dense index of latest event
  std::vector<bool> placed(m.num_events(), false);
  SttPtr acc;
  for (const EventId& e : *lin) {
    int idx = m.event_index(e);
    alloc(idx);
    placed[idx] = true;
    SttPtr leaf = Stt::leaf(color.at(idx), m.letter(e), arch.procs[e.proc]);
    acc = acc ? Stt::oplus(acc, leaf) : leaf;

    std::vector<int> maybe_free{idx};
    if (e.pos > 1) {
      int prev = m.event_index(EventId{e.proc, e.pos - 1});
      acc = Stt::add(color.at(prev), color.at(idx), "proc", acc);
      maybe_free.push_back(prev);
    }
    if (const MatchEdge* edge = m.match_to(e)) {
      int w = m.event_index(edge->w);
      acc = Stt::add(color.at(w), color.at(idx), arch.ds[edge->ds].name, acc);
      maybe_free.push_back(w);
    }
    last_on_proc[e.proc] = idx;

    // a color stays while its event is the newest on its process (the next
    // ->-edge still needs it) or a write whose read is not yet placed
    for (int x : maybe_free) {
      if (!color.count(x)) continue;
      EventId xe = m.event_at(x);
      if (last_on_proc[xe.proc] == x && xe.pos < (int)m.words[xe.proc].size()) continue;
      bool pending_write = false;
      if (const MatchEdge* edge = m.match_from(xe))
        pending_write = !placed[m.event_index(edge->r)];
      if (!pending_write) {
        acc = Stt::forget(color.at(x), acc);
        color.erase(x);
      }
    }
  }
  for (auto& [idx, c] : std::map<int, int>(color)) acc = Stt::forget(c, acc);
  return acc;
}

}  // namespace stwmc
