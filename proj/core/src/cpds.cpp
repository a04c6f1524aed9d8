#include "stwmc/cpds.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "stwmc/error.hpp"

namespace stwmc {

int Cpds::loc_index(const std::string& name) const {
  for (int i = 0; i < (int)locs.size(); ++i)
    if (locs[i] == name) return i;
  return -1;
}

int Cpds::value_index(const std::string& name) const {
  for (int i = 0; i < (int)values.size(); ++i)
    if (values[i] == name) return i;
  return -1;
}

bool Cpds::has_letter(const std::string& a) const {
  return std::find(alphabet.begin(), alphabet.end(), a) != alphabet.end();
}

namespace {
int need(int idx, const std::string& what, const std::string& name) {
  if (idx < 0) throw UnknownSymbolError("unknown " + what + ": " + name);
  return idx;
}
}  // namespace

void Cpds::add_internal(const std::string& p, const std::string& src, const std::string& a,
                        const std::string& tgt) {
  trans.push_back(Transition{Transition::Kind::Internal, arch.proc_index_checked(p),
                             need(loc_index(src), "location", src), a, -1, -1,
                             need(loc_index(tgt), "location", tgt)});
}

void Cpds::add_write(const std::string& p, const std::string& src, const std::string& a,
                     const std::string& d, const std::string& v, const std::string& tgt) {
  trans.push_back(Transition{Transition::Kind::Write, arch.proc_index_checked(p),
                             need(loc_index(src), "location", src), a,
                             arch.ds_index_checked(d), need(value_index(v), "value", v),
                             need(loc_index(tgt), "location", tgt)});
}

void Cpds::add_read(const std::string& p, const std::string& src, const std::string& a,
                    const std::string& d, const std::string& v, const std::string& tgt) {
  trans.push_back(Transition{Transition::Kind::Read, arch.proc_index_checked(p),
                             need(loc_index(src), "location", src), a,
                             arch.ds_index_checked(d), need(value_index(v), "value", v),
                             need(loc_index(tgt), "location", tgt)});
}

std::vector<int> Cpds::trans_at(int proc, int src, const std::string& letter) const {
  std::vector<int> out;
  for (int i = 0; i < (int)trans.size(); ++i)
    if (trans[i].proc == proc && trans[i].src == src && trans[i].letter == letter)
      out.push_back(i);
  return out;
}

std::vector<int> Cpds::trans_of_proc(int proc) const {
  std::vector<int> out;
  for (int i = 0; i < (int)trans.size(); ++i)
    if (trans[i].proc == proc) out.push_back(i);
  return out;
}

void Cpds::check() const {
  arch.check();
  if (locs.empty()) throw ParseError("CPDS needs at least one location");
  if (values.empty()) throw ParseError("CPDS needs at least one value");
  if (init < 0 || init >= (int)locs.size()) throw ParseError("bad initial location");
  for (const auto& tup : fin)
    if ((int)tup.size() != arch.num_procs())
      throw ParseError("final tuple must assign a location to every process");
  for (const auto& t : trans) {
    if (!has_letter(t.letter)) throw UnknownSymbolError("transition letter not in alphabet: " + t.letter);
    if (t.kind == Transition::Kind::Write && t.proc != arch.ds[t.ds].writer)
      throw ParseError("write transition on non-writer process for " + arch.ds[t.ds].name);
    if (t.kind == Transition::Kind::Read && t.proc != arch.ds[t.ds].reader)
      throw ParseError("read transition on non-reader process for " + arch.ds[t.ds].name);
  }
}

// ---------------------------------------------------------------------------
// Operational semantics

namespace {

struct Config {
  std::vector<int> locs;                       // per process
  std::vector<std::vector<int>> contents;      // per ds, value indices in write order
  bool operator<(const Config& o) const {
    if (locs != o.locs) return locs < o.locs;
    return contents < o.contents;
  }
};

bool op_search(const Cpds& s, const GammaWord& w, size_t i, const Config& c,
               std::set<std::pair<size_t, Config>>& seen) {
  if (i == w.size()) {
    for (const auto& z : c.contents)
      if (!z.empty()) return false;
    for (const auto& tup : s.fin)
      if (tup == c.locs) return true;
    return false;
  }
  if (!seen.insert({i, c}).second) return false;
  const GammaLetter& l = w[i];
  int p = s.arch.proc_index(l.proc);
  if (p < 0) throw UnknownSymbolError("unknown process: " + l.proc);
  if (!s.has_letter(l.letter)) throw UnknownSymbolError("unknown letter: " + l.letter);
  int di = -1;
  if (l.is_write || l.is_read) di = s.arch.ds_index_checked(l.ds);

  for (int ti : s.trans_at(p, c.locs[p], l.letter)) {
    const Transition& t = s.trans[ti];
    if (l.is_write) {
      if (t.kind != Transition::Kind::Write || t.ds != di) continue;
      Config c2 = c;
      c2.locs[p] = t.tgt;
      c2.contents[di].push_back(t.value);
      if (op_search(s, w, i + 1, c2, seen)) return true;
    } else if (l.is_read) {
      if (t.kind != Transition::Kind::Read || t.ds != di) continue;
      const auto& z = c.contents[di];
      if (z.empty()) continue;
      switch (s.arch.ds[di].kind) {
        case DsKind::Stack: {
          if (z.back() != t.value) break;
          Config c2 = c;
          c2.locs[p] = t.tgt;
          c2.contents[di].pop_back();
          if (op_search(s, w, i + 1, c2, seen)) return true;
          break;
        }
        case DsKind::Queue: {
          if (z.front() != t.value) break;
          Config c2 = c;
          c2.locs[p] = t.tgt;
          c2.contents[di].erase(c2.contents[di].begin());
          if (op_search(s, w, i + 1, c2, seen)) return true;
          break;
        }
        case DsKind::Bag: {
          // remove any occurrence of the value; one position per distinct index
          for (size_t k = 0; k < z.size(); ++k) {
            if (z[k] != t.value) continue;
            Config c2 = c;
            c2.locs[p] = t.tgt;
            c2.contents[di].erase(c2.contents[di].begin() + k);
            if (op_search(s, w, i + 1, c2, seen)) return true;
            break;  // removing equal values is interchangeable
          }
          break;
        }
      }
    } else {
      if (t.kind != Transition::Kind::Internal) continue;
      Config c2 = c;
      c2.locs[p] = t.tgt;
      if (op_search(s, w, i + 1, c2, seen)) return true;
    }
  }
  return false;
}

}  // namespace

bool op_accepts(const Cpds& s, const GammaWord& w) {
  if (w.empty()) return false;  // Lop(S) discards the empty word
  Config c;
  c.locs.assign(s.arch.num_procs(), s.init);
  c.contents.resize(s.arch.num_ds());
  std::set<std::pair<size_t, Config>> seen;
  return op_search(s, w, 0, c, seen);
}

// ---------------------------------------------------------------------------
// Graph semantics: run search

namespace {

struct RunSearch {
  const Cpds& s;
  const Cbm& m;
  const std::vector<std::vector<int>>& init_options;  // per process
  std::vector<EventId> order;          // fixed topological order of events
  std::vector<int> pos_in_order;       // dense event index -> step
  std::vector<int> write_partner;      // per dense event index: -1 or dense write idx
  std::vector<int> read_partner;
  std::vector<int> ds_of_event;        // -1 if internal
  std::set<std::vector<int>> failed;   // memo key: step + locs tuple + pending values

  std::map<EventId, int> assignment;
  std::vector<int> chosen_value;       // per dense event (writes only)

  // locs[p] is -1 until the first event of p fixes its initial location
  bool search(size_t step, std::vector<int>& locs) {
    if (step == order.size()) {
      for (const auto& tup : s.fin) {
        bool ok = true;
        for (int p = 0; p < (int)locs.size() && ok; ++p) {
          if (locs[p] >= 0) {
            ok = tup[p] == locs[p];
          } else {
            ok = std::find(init_options[p].begin(), init_options[p].end(), tup[p]) !=
                 init_options[p].end();
          }
        }
        if (ok) return true;
      }
      return false;
    }
    std::vector<int> key;
    key.push_back((int)step);
    key.insert(key.end(), locs.begin(), locs.end());
    // only values of writes whose read is still ahead can influence the future
    for (int idx = 0; idx < (int)chosen_value.size(); ++idx)
      if (chosen_value[idx] >= 0 && pos_in_order[write_partner[idx]] >= (int)step)
        key.push_back(idx * 64 + chosen_value[idx]);
    if (failed.count(key)) return false;

    EventId e = order[step];
    int idx = m.event_index(e);
    int p = e.proc;
    const std::string& a = m.letter(e);
    std::vector<int> candidates;
    if (locs[p] >= 0) {
      candidates = s.trans_at(p, locs[p], a);
    } else {
      for (int src : init_options[p]) {
        auto more = s.trans_at(p, src, a);
        candidates.insert(candidates.end(), more.begin(), more.end());
      }
    }
    for (int ti : candidates) {
      const Transition& t = s.trans[ti];
      if (ds_of_event[idx] < 0) {
        if (t.kind != Transition::Kind::Internal) continue;
      } else if (write_partner[idx] >= 0) {
        // e is a write on ds_of_event[idx]
        if (t.kind != Transition::Kind::Write || t.ds != ds_of_event[idx]) continue;
      } else {
        // e is a read; its write was assigned earlier (topological order)
        if (t.kind != Transition::Kind::Read || t.ds != ds_of_event[idx]) continue;
        if (chosen_value[read_partner[idx]] != t.value) continue;
      }
      int old = locs[p];
      locs[p] = t.tgt;
      assignment[e] = ti;
      if (write_partner[idx] >= 0) chosen_value[idx] = t.value;
      if (search(step + 1, locs)) return true;
      if (write_partner[idx] >= 0) chosen_value[idx] = -1;
      assignment.erase(e);
      locs[p] = old;
    }
    failed.insert(key);
    return false;
  }
};

}  // namespace

std::optional<Run> find_run_from(const Cpds& s, const Cbm& m,
                                 const std::vector<std::vector<int>>& init_options);

std::optional<Run> find_run(const Cpds& s, const Cbm& m) {
  std::vector<std::vector<int>> opts(s.arch.num_procs(), std::vector<int>{s.init});
  return find_run_from(s, m, opts);
}

std::optional<Run> find_run_from(const Cpds& s, const Cbm& m,
                                 const std::vector<std::vector<int>>& init_options) {
  RunSearch rs{s, m, init_options};
  const int n = m.num_events();
  auto ord = causal_order(m);
  if (!ord) return std::nullopt;

  // deterministic topological order: repeatedly least minimal event
  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;
  while (!remaining.empty()) {
    int pick = -1;
    for (int e : remaining) {
      bool minimal = true;
      for (int f : remaining)
        if (f != e && ord->less(f, e)) {
          minimal = false;
          break;
        }
      if (minimal) {
        pick = e;
        break;
      }
    }
    rs.order.push_back(m.event_at(pick));
    remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
  }
  rs.pos_in_order.assign(n, -1);
  for (int i = 0; i < n; ++i) rs.pos_in_order[m.event_index(rs.order[i])] = i;

  rs.write_partner.assign(n, -1);
  rs.read_partner.assign(n, -1);
  rs.ds_of_event.assign(n, -1);
  rs.chosen_value.assign(n, -1);
  for (const auto& edge : m.matches) {
    int wi = m.event_index(edge.w), ri = m.event_index(edge.r);
    rs.write_partner[wi] = ri;
    rs.read_partner[ri] = wi;
    rs.ds_of_event[wi] = edge.ds;
    rs.ds_of_event[ri] = edge.ds;
  }
  std::vector<int> locs(s.arch.num_procs(), -1);
  if (!rs.search(0, locs)) return std::nullopt;
  Run r;
  r.trans_of_event = std::move(rs.assignment);
  return r;
}

bool run_is_consistent(const Cpds& s, const Cbm& m, const Run& rho) {
  std::vector<int> cur(s.arch.num_procs(), s.init);
  for (int p = 0; p < s.arch.num_procs(); ++p) {
    for (int i = 1; i <= (int)m.words[p].size(); ++i) {
      EventId e{p, i};
      auto it = rho.trans_of_event.find(e);
      if (it == rho.trans_of_event.end()) return false;
      const Transition& t = s.trans[it->second];
      if (t.proc != p || t.src != cur[p] || t.letter != m.letter(e)) return false;
      cur[p] = t.tgt;
    }
  }
  for (const auto& edge : m.matches) {
    const Transition& tw = s.trans[rho.trans_of_event.at(edge.w)];
    const Transition& tr = s.trans[rho.trans_of_event.at(edge.r)];
    if (tw.kind != Transition::Kind::Write || tw.ds != edge.ds) return false;
    if (tr.kind != Transition::Kind::Read || tr.ds != edge.ds) return false;
    if (tw.value != tr.value) return false;
  }
  for (const auto& e : m.all_events()) {
    const Transition& t = s.trans[rho.trans_of_event.at(e)];
    if (m.match_from(e)) {
      if (t.kind != Transition::Kind::Write) return false;
    } else if (m.match_to(e)) {
      if (t.kind != Transition::Kind::Read) return false;
    } else if (t.kind != Transition::Kind::Internal) {
      return false;
    }
  }
  for (const auto& tup : s.fin)
    if (tup == cur) return true;
  return false;
}

Cpds client_server_cpds() {
  Cpds s;
  s.arch = client_server_arch();
  s.alphabet = {"a", "b"};
  s.values = {"a", "b"};
  s.locs = {"0", "1", "2", "3", "4"};
  s.init = 0;
  s.fin = {{0, 0}};
  // client p1: fire-and-forget requests, acknowledgments read back in any order
  for (std::string x : {"a", "b"}) {
    s.add_write("p1", "0", x, "c1", x, "0");
    s.add_read("p1", "0", x, "c2", x, "0");
  }
  // server p2: 0 idle; 1/2 holding a pending a/b request; 3/4 acknowledging a
  // popped a/b task
  s.add_read("p2", "0", "a", "c1", "a", "1");
  s.add_read("p2", "0", "b", "c1", "b", "2");
  s.add_write("p2", "1", "a", "c2", "a", "0");
  s.add_write("p2", "2", "b", "c2", "b", "0");
  s.add_write("p2", "1", "a", "s", "a", "0");
  s.add_write("p2", "2", "b", "s", "b", "0");
  s.add_read("p2", "0", "a", "s", "a", "3");
  s.add_read("p2", "0", "b", "s", "b", "4");
  s.add_write("p2", "3", "a", "c2", "a", "0");
  s.add_write("p2", "4", "b", "c2", "b", "0");
  s.check();
  return s;
}

}  // namespace stwmc
