#include "stwmc/classes.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "stwmc/error.hpp"

namespace stwmc {

void require_mnw_arch(const Architecture& arch) {
  if (arch.num_procs() != 1 || !arch.stacks_only())
    throw WrongArchitectureError(
        "context/phase/scope classes require one process over stacks");
}

void require_existential_shape(const Cbm& m) {
  std::set<std::string> letters;
  for (const auto& w : m.words)
    for (const auto& a : w) letters.insert(a);
  if (letters.size() > 1)
    throw WrongArchitectureError("existential bounds assume a singleton alphabet");
  for (const auto& e : m.all_events())
    if (!m.match_from(e) && !m.match_to(e))
      throw WrongArchitectureError("existential bounds assume no internal events");
}

namespace {

// stack accessed by event (p, pos) or -1
int touched_ds(const Cbm& m, EventId e) {
  if (const MatchEdge* edge = m.match_from(e)) return edge->ds;
  if (const MatchEdge* edge = m.match_to(e)) return edge->ds;
  return -1;
}

int read_ds(const Cbm& m, EventId e) {
  if (const MatchEdge* edge = m.match_to(e)) return edge->ds;
  return -1;
}

// greedy minimal interval cover; access(i) < 0 means unconstrained
std::vector<std::pair<int, int>> greedy_split(int n, const std::function<int(int)>& access) {
  std::vector<std::pair<int, int>> out;
  int start = 1, cur = -1;
  for (int i = 1; i <= n; ++i) {
    int d = access(i);
    if (d < 0) continue;
    if (cur == -1) {
      cur = d;
    } else if (d != cur) {
      out.push_back({start, i - 1});
      start = i;
      cur = d;
    }
  }
  if (n >= 1) out.push_back({start, n});
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> context_split(const Cbm& m) {
  require_mnw_arch(m.arch);
  int n = m.num_events();
  return greedy_split(n, [&](int i) { return touched_ds(m, EventId{0, i}); });
}

std::vector<std::pair<int, int>> phase_split(const Cbm& m) {
  require_mnw_arch(m.arch);
  int n = m.num_events();
  return greedy_split(n, [&](int i) { return read_ds(m, EventId{0, i}); });
}

bool in_context_k(const Cbm& m, int k) { return (int)context_split(m).size() <= k; }
bool in_phase_k(const Cbm& m, int k) { return (int)phase_split(m).size() <= k; }

bool in_scope_k(const Cbm& m, int k) {
  require_mnw_arch(m.arch);
  for (const auto& e : m.matches) {
    int lo = e.w.pos, hi = e.r.pos;
    auto cover = greedy_split(hi - lo + 1, [&](int i) {
      return touched_ds(m, EventId{0, lo + i - 1});
    });
    if ((int)cover.size() > k) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> build_rightsquig(const Cbm& m, int k) {
  std::vector<std::pair<int, int>> out;
  for (int d = 0; d < m.arch.num_ds(); ++d) {
    std::vector<EventId> writes, reads;
    for (const auto& e : m.matches)
      if (e.ds == d) {
        writes.push_back(e.w);
        reads.push_back(e.r);
      }
    std::sort(writes.begin(), writes.end());
    std::sort(reads.begin(), reads.end());
    for (size_t i = 0; i + k < writes.size(); ++i)
      out.push_back({m.event_index(reads[i]), m.event_index(writes[i + k])});
  }
  return out;
}

bool in_exist_k(const Cbm& m, int k) {
  require_existential_shape(m);
  const int n = m.num_events();
  std::vector<std::vector<int>> succ(n);
  for (int p = 0; p < m.arch.num_procs(); ++p)
    for (int i = 1; i < (int)m.words[p].size(); ++i)
      succ[m.event_index({p, i})].push_back(m.event_index({p, i + 1}));
  for (const auto& e : m.matches)
    succ[m.event_index(e.w)].push_back(m.event_index(e.r));
  for (auto [f, e] : build_rightsquig(m, k)) succ[f].push_back(e);
  // cycle check
  std::vector<int> indeg(n, 0);
  for (int v = 0; v < n; ++v)
    for (int w : succ[v]) indeg[w]++;
  std::deque<int> q;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) q.push_back(v);
  int seen = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    ++seen;
    for (int w : succ[v])
      if (--indeg[w] == 0) q.push_back(w);
  }
  return seen == n;
}

namespace {

std::optional<std::vector<EventId>> bounded_lin_impl(const Cbm& m, int k, bool global) {
  const int P = m.arch.num_procs();
  const int D = m.arch.num_ds();
  std::vector<int> next(P, 1);
  std::vector<int> pending(D, 0);
  std::vector<EventId> out;
  std::set<std::vector<int>> failed;

  std::function<bool()> go = [&]() -> bool {
    if ((int)out.size() == m.num_events()) return true;
    std::vector<int> key(next);
    key.insert(key.end(), pending.begin(), pending.end());
    if (failed.count(key)) return false;
    for (int p = 0; p < P; ++p) {
      if (next[p] > (int)m.words[p].size()) continue;
      EventId e{p, next[p]};
      int d = -1;
      bool is_write = false;
      if (const MatchEdge* edge = m.match_from(e)) {
        d = edge->ds;
        is_write = true;
      } else if (const MatchEdge* edge = m.match_to(e)) {
        d = edge->ds;
        // the matching write must already be placed
        if (std::find(out.begin(), out.end(), edge->w) == out.end()) continue;
      }
      if (is_write) {
        int total = global ? std::accumulate(pending.begin(), pending.end(), 0) : pending[d];
        if (total + 1 > k) continue;
        pending[d]++;
      } else if (d >= 0) {
        pending[d]--;
      }
      next[p]++;
      out.push_back(e);
      if (go()) return true;
      out.pop_back();
      next[p]--;
      if (is_write) pending[d]--;
      else if (d >= 0) pending[d]++;
    }
    failed.insert(key);
    return false;
  };
  if (!go()) return std::nullopt;
  return out;
}

}  // namespace

std::optional<std::vector<EventId>> bounded_linearization(const Cbm& m, int k) {
  return bounded_lin_impl(m, k, false);
}
std::optional<std::vector<EventId>> bounded_linearization_global(const Cbm& m, int k) {
  return bounded_lin_impl(m, k, true);
}

bool in_exist_k_global(const Cbm& m, int k) {
  return bounded_linearization_global(m, k).has_value();
}

// ---------------------------------------------------------------------------
// LCPDL formulas

namespace {

using S = PdlState;
using P = PdlPath;

PdlPathPtr ds_edge(const Architecture& arch, int d) {
  return P::edge_label(arch.ds[d].name);
}

// RW_d: the event accesses data structure d
PdlStatePtr rw_d(const Architecture& arch, int d) {
  return S::dia(P::alt({ds_edge(arch, d), P::conv(ds_edge(arch, d))}), S::ltrue());
}

// onlyRW_d: spans a context accessing only d
PdlPathPtr only_rw(const Architecture& arch, int d) {
  std::vector<PdlStatePtr> others;
  for (int d2 = 0; d2 < arch.num_ds(); ++d2)
    if (d2 != d) others.push_back(rw_d(arch, d2));
  PdlStatePtr clean = S::lnot(S::big_or(others));
  PdlPathPtr proc = P::edge_label("proc");
  return P::cat({P::star(P::cat({P::test_of(clean), proc})), P::test_of(clean)});
}

// onlyR_d: spans a phase reading only from d
PdlPathPtr only_r(const Architecture& arch, int d) {
  std::vector<PdlStatePtr> others;
  for (int d2 = 0; d2 < arch.num_ds(); ++d2)
    if (d2 != d) others.push_back(S::dia(P::conv(ds_edge(arch, d2)), S::ltrue()));
  PdlStatePtr clean = S::lnot(S::big_or(others));
  PdlPathPtr proc = P::edge_label("proc");
  return P::cat({P::star(P::cat({P::test_of(clean), proc})), P::test_of(clean)});
}

PdlSentencePtr interval_cover_formula(const Architecture& arch, int k,
                                      const std::function<PdlPathPtr(int)>& span) {
  PdlPathPtr proc = P::edge_label("proc");
  PdlStatePtr first = S::lnot(S::dia(P::conv(proc), S::ltrue()));
  PdlStatePtr last = S::lnot(S::dia(proc, S::ltrue()));
  std::vector<PdlPathPtr> spans;
  for (int d = 0; d < arch.num_ds(); ++d) spans.push_back(span(d));
  PdlPathPtr one = P::alt(spans);
  PdlPathPtr step = P::cat({one, proc});
  PdlPathPtr pi = P::cat({P::test_of(first), P::power_lt(step, k), one, P::test_of(last)});
  return PdlSentence::exists(S::dia(pi, S::ltrue()));
}

}  // namespace

PdlSentencePtr gen_context_lcpdl(const Architecture& arch, int k) {
  return interval_cover_formula(arch, k, [&](int d) { return only_rw(arch, d); });
}

PdlSentencePtr gen_phase_lcpdl(const Architecture& arch, int k) {
  return interval_cover_formula(arch, k, [&](int d) { return only_r(arch, d); });
}

PdlSentencePtr gen_scope_lcpdl(const Architecture& arch, int k) {
  PdlPathPtr proc = P::edge_label("proc");
  std::vector<PdlPathPtr> changes;
  for (int d = 0; d < arch.num_ds(); ++d)
    for (int d2 = 0; d2 < arch.num_ds(); ++d2) {
      if (d == d2) continue;
      changes.push_back(P::cat(
          {P::test_of(rw_d(arch, d)), P::plus(proc), P::test_of(rw_d(arch, d2))}));
    }
  std::vector<PdlPathPtr> convs;
  for (int d = 0; d < arch.num_ds(); ++d) convs.push_back(P::conv(ds_edge(arch, d)));
  PdlPathPtr pi = P::cat({P::power(P::alt(changes), k), P::alt(convs)});
  return PdlSentence::lnot(PdlSentence::exists(S::loop(pi)));
}

PdlSentencePtr gen_existB_lcpdl(const Architecture& arch, int k) {
  PdlPathPtr proc = P::edge_label("proc");
  std::vector<PdlPathPtr> squigs;
  for (int d = 0; d < arch.num_ds(); ++d) {
    PdlStatePtr writes_d = S::dia(ds_edge(arch, d), S::ltrue());
    PdlPathPtr hop = P::cat({proc, P::star(P::cat({P::test_of(S::lnot(writes_d)), proc})),
                             P::test_of(writes_d)});
    squigs.push_back(P::cat({P::conv(ds_edge(arch, d)), P::power(hop, k)}));
  }
  std::vector<PdlPathPtr> all{proc};
  for (int d = 0; d < arch.num_ds(); ++d) all.push_back(ds_edge(arch, d));
  for (auto& s : squigs) all.push_back(s);
  return PdlSentence::lnot(PdlSentence::exists(S::loop(P::plus(P::alt(all)))));
}

// ---------------------------------------------------------------------------
// MSO formulas

namespace {

MsoPtr stack_d(const Architecture& arch, int d, const std::string& x) {
  using F = MsoFormula;
  std::string z = "__t" + x;
  return F::exists1(z, F::lor(F::match(arch.ds[d].name, x, z), F::match(arch.ds[d].name, z, x)));
}

MsoPtr cont_k(const Architecture& arch, int k, const std::string& x, const std::string& y) {
  using F = MsoFormula;
  // no k+1 events between x and y lying in pairwise distinct contexts
  std::vector<std::string> vars;
  for (int i = 1; i <= k + 1; ++i) vars.push_back("__c" + std::to_string(i));
  auto lt = [&](const std::string& a, const std::string& b) {
    return F::land(F::le(a, b), F::lnot(F::eq(a, b)));
  };
  std::vector<MsoPtr> cj;
  cj.push_back(F::le(x, vars[0]));
  for (int i = 0; i < k; ++i) cj.push_back(lt(vars[i], vars[i + 1]));
  cj.push_back(F::le(vars[k], y));
  for (int i = 0; i < k; ++i) {
    std::vector<MsoPtr> pairs;
    for (int d = 0; d < arch.num_ds(); ++d)
      for (int d2 = 0; d2 < arch.num_ds(); ++d2) {
        if (d == d2) continue;
        pairs.push_back(F::land(stack_d(arch, d, vars[i]), stack_d(arch, d2, vars[i + 1])));
      }
    cj.push_back(F::big_or(pairs));
  }
  MsoPtr body = F::big_and(cj);
  for (int i = k; i >= 0; --i) body = F::exists1(vars[i], body);
  return F::lnot(body);
}

}  // namespace

MsoPtr gen_context_mso(const Architecture& arch, int k) {
  using F = MsoFormula;
  return F::forall1("x", F::forall1("y", cont_k(arch, k, "x", "y")));
}

MsoPtr gen_scope_mso(const Architecture& arch, int k) {
  using F = MsoFormula;
  return F::forall1(
      "x", F::forall1("y", F::implies(F::match("", "x", "y"), cont_k(arch, k, "x", "y"))));
}

// ---------------------------------------------------------------------------
// CPDS generators

Cpds gen_context_cpds(const Architecture& arch, const std::vector<std::string>& sigma, int k) {
  require_mnw_arch(arch);
  Cpds s;
  s.arch = arch;
  s.alphabet = sigma;
  s.values = {"u"};
  s.locs.push_back("in");
  for (int d = 0; d < arch.num_ds(); ++d)
    for (int i = 1; i <= k; ++i) s.locs.push_back(arch.ds[d].name + ":" + std::to_string(i));
  s.init = 0;
  auto loc = [&](int d, int i) { return arch.ds[d].name + ":" + std::to_string(i); };
  const std::string p = arch.procs[0];
  for (const auto& a : sigma) {
    if (k >= 1) s.add_internal(p, "in", a, "in");  // k=0 admits only the empty CBM
    for (int d = 0; d < arch.num_ds(); ++d) {
      if (k >= 1) {
        s.add_write(p, "in", a, arch.ds[d].name, "u", loc(d, 1));
        s.add_read(p, "in", a, arch.ds[d].name, "u", loc(d, 1));
      }
      for (int i = 1; i <= k; ++i) {
        s.add_internal(p, loc(d, i), a, loc(d, i));
        s.add_write(p, loc(d, i), a, arch.ds[d].name, "u", loc(d, i));
        s.add_read(p, loc(d, i), a, arch.ds[d].name, "u", loc(d, i));
        for (int d2 = 0; d2 < arch.num_ds(); ++d2) {
          if (d2 == d || i == k) continue;
          s.add_write(p, loc(d, i), a, arch.ds[d2].name, "u", loc(d2, i + 1));
          s.add_read(p, loc(d, i), a, arch.ds[d2].name, "u", loc(d2, i + 1));
        }
      }
    }
  }
  for (int l = 0; l < (int)s.locs.size(); ++l) s.fin.push_back({l});
  s.check();
  return s;
}

Cpds gen_scope_cpds(const Architecture& arch, const std::vector<std::string>& sigma, int k) {
  require_mnw_arch(arch);
  const int D = arch.num_ds();
  Cpds s;
  s.arch = arch;
  s.alphabet = sigma;
  s.values = {"o", "i"};

  // locations: in, pref, then (current stack, counter vector in {0..k}^DS)
  std::vector<std::vector<int>> vecs;
  {
    std::vector<int> cur(D, 0);
    std::function<void(int)> rec = [&](int d) {
      if (d == D) {
        vecs.push_back(cur);
        return;
      }
      for (int c = 0; c <= k; ++c) {
        cur[d] = c;
        rec(d + 1);
      }
      cur[d] = 0;
    };
    rec(0);
  }
  auto loc_name = [&](int d, const std::vector<int>& c) {
    std::string out = arch.ds[d].name;
    for (int x : c) out += ":" + std::to_string(x);
    return out;
  };
  s.locs = {"in", "pref"};
  for (int d = 0; d < D; ++d)
    for (const auto& c : vecs) s.locs.push_back(loc_name(d, c));
  s.init = 0;

  const std::string p = arch.procs[0];
  // context switch: bump every pending counter; nullopt when one passes k
  auto bump = [&](const std::vector<int>& c) -> std::optional<std::vector<int>> {
    std::vector<int> out = c;
    for (int& x : out)
      if (x >= 1) {
        if (x == k) return std::nullopt;
        ++x;
      }
    return out;
  };

  for (const auto& a : sigma) {
    s.add_internal(p, "in", a, "pref");
    s.add_internal(p, "pref", a, "pref");
    // first stack access (a write; a first read never occurs in a CBM)
    for (int d = 0; d < D; ++d) {
      if (k >= 1) {
        std::vector<int> c(D, 0);
        c[d] = 1;
        s.add_write(p, "in", a, arch.ds[d].name, "o", loc_name(d, c));
        s.add_write(p, "pref", a, arch.ds[d].name, "o", loc_name(d, c));
      }
    }
    for (int d0 = 0; d0 < D; ++d0)
      for (const auto& c : vecs) {
        const std::string from = loc_name(d0, c);
        s.add_internal(p, from, a, from);
        for (int d = 0; d < D; ++d) {
          std::optional<std::vector<int>> after =
              d == d0 ? std::optional<std::vector<int>>(c) : bump(c);
          if (!after) continue;
          std::vector<int> cc = *after;
          // push
          if (cc[d] == 0) {
            if (k >= 1) {
              std::vector<int> c2 = cc;
              c2[d] = 1;
              s.add_write(p, from, a, arch.ds[d].name, "o", loc_name(d, c2));
            }
          } else {
            s.add_write(p, from, a, arch.ds[d].name, "i", loc_name(d, cc));
          }
          // pop
          if (cc[d] >= 1) {
            std::vector<int> c2 = cc;
            c2[d] = 0;
            s.add_read(p, from, a, arch.ds[d].name, "o", loc_name(d, c2));
            s.add_read(p, from, a, arch.ds[d].name, "i", loc_name(d, cc));
          }
        }
      }
  }
  for (int l = 0; l < (int)s.locs.size(); ++l) s.fin.push_back({l});
  s.check();
  return s;
}

}  // namespace stwmc
