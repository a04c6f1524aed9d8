#include "stwmc/synthesis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "stwmc/error.hpp"

namespace stwmc {

// defined in cpds.cpp
std::optional<Run> find_run_from(const Cpds& s, const Cbm& m,
                                 const std::vector<std::vector<int>>& init_options);

namespace {

std::vector<std::vector<int>> init_sets_of(const Transducer& t) {
  if (t.uses_init_sets()) return t.init_sets;
  return std::vector<std::vector<int>>(t.cpds.arch.num_procs(),
                                       std::vector<int>{t.cpds.init});
}

Transducer universal_skeleton(const Architecture& arch,
                              const std::vector<std::string>& sigma) {
  Transducer t;
  t.cpds.arch = arch;
  t.cpds.alphabet = sigma;
  t.cpds.values = {"v"};
  t.cpds.locs = {"1"};
  t.cpds.init = 0;
  t.cpds.fin = {std::vector<int>(arch.num_procs(), 0)};
  for (int p = 0; p < arch.num_procs(); ++p)
    for (const auto& a : sigma) t.cpds.add_internal(arch.procs[p], "1", a, "1");
  for (const auto& d : arch.ds)
    for (const auto& a : sigma) {
      t.cpds.add_write(arch.procs[d.writer], "1", a, d.name, "v", "1");
      t.cpds.add_read(arch.procs[d.reader], "1", a, d.name, "v", "1");
    }
  t.output.assign(t.cpds.trans.size(), 0);
  return t;
}

}  // namespace

std::optional<Run> transducer_run(const Transducer& t, const Cbm& m) {
  return find_run_from(t.cpds, m, init_sets_of(t));
}

Transducer atomic_letter_transducer(const Architecture& arch,
                                    const std::vector<std::string>& sigma,
                                    const std::string& letter) {
  Transducer t = universal_skeleton(arch, sigma);
  for (size_t i = 0; i < t.cpds.trans.size(); ++i)
    t.output[i] = t.cpds.trans[i].letter == letter ? 1 : 0;
  return t;
}

Transducer atomic_proc_transducer(const Architecture& arch,
                                  const std::vector<std::string>& sigma,
                                  const std::string& proc) {
  Transducer t = universal_skeleton(arch, sigma);
  int p = arch.proc_index_checked(proc);
  for (size_t i = 0; i < t.cpds.trans.size(); ++i)
    t.output[i] = t.cpds.trans[i].proc == p ? 1 : 0;
  return t;
}

Transducer transducer_not(const Transducer& t) {
  Transducer out = t;
  for (auto& g : out.output) g = 1 - g;
  return out;
}

Transducer transducer_product(const Transducer& a, const Transducer& b,
                              const std::function<int(int, int)>& combine) {
  if (!(a.cpds.arch == b.cpds.arch) || a.cpds.alphabet != b.cpds.alphabet)
    throw AlphabetMismatchError("transducer product needs one architecture and alphabet");
  Transducer t;
  t.cpds.arch = a.cpds.arch;
  t.cpds.alphabet = a.cpds.alphabet;
  auto loc_name = [&](int x, int y) { return a.cpds.locs[x] + "|" + b.cpds.locs[y]; };
  auto val_name = [&](int x, int y) { return a.cpds.values[x] + "|" + b.cpds.values[y]; };
  for (const auto& lx : a.cpds.locs)
    for (const auto& ly : b.cpds.locs) t.cpds.locs.push_back(lx + "|" + ly);
  for (const auto& vx : a.cpds.values)
    for (const auto& vy : b.cpds.values) t.cpds.values.push_back(vx + "|" + vy);
  t.cpds.init = t.cpds.loc_index(loc_name(a.cpds.init, b.cpds.init));
  for (const auto& fa : a.cpds.fin)
    for (const auto& fb : b.cpds.fin) {
      std::vector<int> tup;
      for (int p = 0; p < t.cpds.arch.num_procs(); ++p)
        tup.push_back(t.cpds.loc_index(loc_name(fa[p], fb[p])));
      t.cpds.fin.push_back(tup);
    }
  auto ia = init_sets_of(a), ib = init_sets_of(b);
  t.init_sets.resize(t.cpds.arch.num_procs());
  for (int p = 0; p < t.cpds.arch.num_procs(); ++p)
    for (int x : ia[p])
      for (int y : ib[p]) t.init_sets[p].push_back(t.cpds.loc_index(loc_name(x, y)));

  for (size_t i = 0; i < a.cpds.trans.size(); ++i)
    for (size_t j = 0; j < b.cpds.trans.size(); ++j) {
      const Transition& x = a.cpds.trans[i];
      const Transition& y = b.cpds.trans[j];
      if (x.kind != y.kind || x.proc != y.proc || x.letter != y.letter) continue;
      if (x.kind != Transition::Kind::Internal && x.ds != y.ds) continue;
      Transition z;
      z.kind = x.kind;
      z.proc = x.proc;
      z.letter = x.letter;
      z.ds = x.ds;
      z.src = t.cpds.loc_index(loc_name(x.src, y.src));
      z.tgt = t.cpds.loc_index(loc_name(x.tgt, y.tgt));
      z.value = x.kind == Transition::Kind::Internal
                    ? -1
                    : t.cpds.value_index(val_name(x.value, y.value));
      t.cpds.trans.push_back(z);
      t.output.push_back(combine(a.output[i], b.output[j]));
    }
  return t;
}

Transducer transducer_or(const Transducer& a, const Transducer& b) {
  return transducer_product(a, b, [](int x, int y) { return std::max(x, y); });
}

// ---------------------------------------------------------------------------
// Path automata

namespace {

struct PathNfaBuilder {
  PathAutomaton out;
  std::vector<std::vector<std::pair<int, int>>> eps;  // adjacency (from -> to)

  int fresh() {
    eps.emplace_back();
    return out.states++;
  }
  void add_eps(int x, int y) { eps[x].push_back({y, 0}); }

  std::pair<int, int> build(const PdlPathPtr& p) {
    switch (p->kind) {
      case PdlPath::Kind::Edge: {
        int a = fresh(), b = fresh();
        PathAutomaton::Tr t;
        t.from = a;
        t.to = b;
        if (p->edge == "proc") {
          t.kind = 1;
        } else {
          t.kind = 2;
          out.edge_names.push_back(p->edge);
          t.edge_name = (int)out.edge_names.size() - 1;
        }
        out.trans.push_back(t);
        return {a, b};
      }
      case PdlPath::Kind::Test: {
        int a = fresh(), b = fresh();
        out.tests.push_back(p->test);
        out.trans.push_back({a, 0, (int)out.tests.size() - 1, -1, b});
        return {a, b};
      }
      case PdlPath::Kind::Alt: {
        int a = fresh(), b = fresh();
        for (const auto& q : p->parts) {
          auto [x, y] = build(q);
          add_eps(a, x);
          add_eps(y, b);
        }
        return {a, b};
      }
      case PdlPath::Kind::Cat: {
        int a = -1, b = -1;
        for (const auto& q : p->parts) {
          auto [x, y] = build(q);
          if (a < 0)
            a = x;
          else
            add_eps(b, x);
          b = y;
        }
        if (a < 0) {
          a = fresh();
          b = a;
        }
        return {a, b};
      }
      case PdlPath::Kind::Star: {
        auto [x, y] = build(p->parts[0]);
        int a = fresh(), b = fresh();
        add_eps(a, x);
        add_eps(y, b);
        add_eps(a, b);
        add_eps(b, a);
        return {a, b};
      }
      case PdlPath::Kind::Conv:
      case PdlPath::Kind::Cap:
        throw DialectUnsupportedError(
            "synthesis covers plain PDL paths (no converse, no intersection)");
    }
    return {fresh(), fresh()};
  }

  std::vector<std::string> edge_names;
};

}  // namespace

PathAutomaton path_to_automaton(const PdlPathPtr& path) {
  PathNfaBuilder pb;
  auto [start, end] = pb.build(path);
  // epsilon elimination
  const int n = pb.out.states;
  std::vector<std::vector<int>> clo(n);
  for (int s = 0; s < n; ++s) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      clo[s].push_back(x);
      for (auto [y, _] : pb.eps[x])
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
    }
  }
  PathAutomaton out;
  out.states = n;
  out.tests = pb.out.tests;
  out.edge_names = pb.out.edge_names;
  for (const auto& t : pb.out.trans)
    for (int u : clo[t.to]) {
      PathAutomaton::Tr t2 = t;
      t2.to = u;
      out.trans.push_back(t2);
    }
  out.initials = clo[start];
  out.finals = {end};
  return out;
}

// ---------------------------------------------------------------------------
// Diamond transducer

namespace {

struct NuMachine {
  PathAutomaton b;
  int nstates;

  using Set = uint32_t;  // path-automaton state sets

  Set finals = 0;
  Set initials = 0;

  Set closure_tests(Set target, uint32_t enabled_tests) const {
    Set x = target;
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& t : b.trans) {
        if (t.kind != 0) continue;
        if (!((enabled_tests >> t.test_id) & 1)) continue;
        if (((x >> t.to) & 1) && !((x >> t.from) & 1)) {
          x |= Set(1) << t.from;
          changed = true;
        }
      }
    }
    return x;
  }

  Set pre_proc(Set v) const {
    Set x = 0;
    for (const auto& t : b.trans)
      if (t.kind == 1 && ((v >> t.to) & 1)) x |= Set(1) << t.from;
    return x;
  }

  Set pre_ds(int ds, Set w, const Architecture& arch) const {
    Set x = 0;
    for (const auto& t : b.trans)
      if (t.kind == 2 && b.edge_names[t.edge_name] == arch.ds[ds].name && ((w >> t.to) & 1))
        x |= Set(1) << t.from;
    return x;
  }
};

}  // namespace

Transducer diamond_transducer(const Architecture& arch, const std::vector<std::string>& sigma,
                              const PdlPathPtr& path) {
  NuMachine nm;
  nm.b = path_to_automaton(path);
  nm.nstates = nm.b.states;
  if (nm.nstates > 30) throw LimitExceededError("path automaton too large for the nu machine");
  for (int f : nm.b.finals) nm.finals |= uint32_t(1) << f;
  for (int i : nm.b.initials) nm.initials |= uint32_t(1) << i;

  // test transducers composed into the H machine with bit-vector outputs
  const int ntests = (int)nm.b.tests.size();
  if (ntests > 10) throw LimitExceededError("too many tests in one path");
  Transducer H = universal_skeleton(arch, sigma);
  for (auto& g : H.output) g = 0;  // no tests: outputs all 0
  for (int ti = 0; ti < ntests; ++ti) {
    Transducer st = state_transducer(arch, sigma, nm.b.tests[ti]);
    int shift = ti;
    H = transducer_product(H, st, [shift](int acc, int bit) { return acc | (bit << shift); });
  }

  // nu sets reachable backward from the empty set, to a fixpoint over all
  // (target, guard, carried value) combinations
  std::set<uint32_t> nu_sets{0};
  {
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<uint32_t> snapshot(nu_sets.begin(), nu_sets.end());
      for (uint32_t v : snapshot)
        for (uint32_t hg = 0; hg < (uint32_t(1) << ntests); ++hg) {
          uint32_t u = nm.closure_tests(nm.finals | nm.pre_proc(v), hg);
          if (nu_sets.insert(u).second) grew = true;
          for (int d = 0; d < arch.num_ds(); ++d)
            for (uint32_t w : snapshot) {
              uint32_t uw =
                  nm.closure_tests(nm.finals | nm.pre_proc(v) | nm.pre_ds(d, w, arch), hg);
              if (nu_sets.insert(uw).second) grew = true;
            }
          if (nu_sets.size() > 4096)
            throw LimitExceededError("nu machine exceeded its set budget");
        }
    }
  }
  std::vector<uint32_t> sets(nu_sets.begin(), nu_sets.end());
  auto set_name = [&](uint32_t s) { return "n" + std::to_string(s); };
  auto set_index = [&](uint32_t s) {
    return (int)(std::find(sets.begin(), sets.end(), s) - sets.begin());
  };

  // compose H with the nu machine
  Transducer t;
  t.cpds.arch = arch;
  t.cpds.alphabet = sigma;
  for (const auto& lh : H.cpds.locs)
    for (uint32_t s : sets) t.cpds.locs.push_back(lh + "@" + set_name(s));
  for (const auto& vh : H.cpds.values)
    for (uint32_t s : sets) t.cpds.values.push_back(vh + "@" + set_name(s));
  auto loc_of = [&](int lh, uint32_t s) {
    return lh * (int)sets.size() + set_index(s);
  };
  auto val_of = [&](int vh, uint32_t s) {
    return vh * (int)sets.size() + set_index(s);
  };
  t.cpds.init = 0;
  auto ih = init_sets_of(H);
  t.init_sets.resize(arch.num_procs());
  for (int p = 0; p < arch.num_procs(); ++p)
    for (int x : ih[p])
      for (uint32_t s : sets) t.init_sets[p].push_back(loc_of(x, s));
  for (const auto& fh : H.cpds.fin) {
    std::vector<int> tup;
    for (int p = 0; p < arch.num_procs(); ++p) tup.push_back(loc_of(fh[p], 0));  // nu = empty
    t.cpds.fin.push_back(tup);
  }

  for (size_t i = 0; i < H.cpds.trans.size(); ++i) {
    const Transition& x = H.cpds.trans[i];
    uint32_t hg = (uint32_t)H.output[i];
    switch (x.kind) {
      case Transition::Kind::Internal: {
        for (uint32_t v : sets) {
          uint32_t u = nm.closure_tests(nm.finals | nm.pre_proc(v), hg);
          if (!nu_sets.count(u)) continue;
          Transition z = x;
          z.src = loc_of(x.src, u);
          z.tgt = loc_of(x.tgt, v);
          t.cpds.trans.push_back(z);
          t.output.push_back((int)u);  // nu(e), projected to a flag later
        }
        break;
      }
      case Transition::Kind::Write: {
        for (uint32_t v : sets)
          for (uint32_t w : sets) {
            uint32_t u = nm.closure_tests(
                nm.finals | nm.pre_proc(v) | nm.pre_ds(x.ds, w, arch), hg);
            if (!nu_sets.count(u)) continue;
            Transition z = x;
            z.src = loc_of(x.src, u);
            z.tgt = loc_of(x.tgt, v);
            z.value = val_of(x.value, w);
            t.cpds.trans.push_back(z);
            t.output.push_back((int)u);
          }
        break;
      }
      case Transition::Kind::Read: {
        for (uint32_t v : sets) {
          uint32_t u = nm.closure_tests(nm.finals | nm.pre_proc(v), hg);
          if (!nu_sets.count(u)) continue;
          Transition z = x;
          z.src = loc_of(x.src, u);
          z.tgt = loc_of(x.tgt, v);
          z.value = val_of(x.value, u);  // the read re-announces its own nu set
          t.cpds.trans.push_back(z);
          t.output.push_back((int)u);
        }
        break;
      }
    }
  }
  // final composition step: output 1 iff some initial state is in nu(e)
  for (auto& g : t.output) g = (uint32_t(g) & nm.initials) ? 1 : 0;
  return t;
}

// ---------------------------------------------------------------------------
// State formulas

Transducer state_transducer(const Architecture& arch, const std::vector<std::string>& sigma,
                            const PdlStatePtr& s) {
  switch (s->kind) {
    case PdlState::Kind::Ap: {
      bool is_letter = std::find(sigma.begin(), sigma.end(), s->ap) != sigma.end();
      bool is_proc = arch.proc_index(s->ap) >= 0;
      if (is_letter && is_proc)
        return transducer_or(atomic_letter_transducer(arch, sigma, s->ap),
                             atomic_proc_transducer(arch, sigma, s->ap));
      if (is_proc) return atomic_proc_transducer(arch, sigma, s->ap);
      return atomic_letter_transducer(arch, sigma, s->ap);
    }
    case PdlState::Kind::True: {
      Transducer t = universal_skeleton(arch, sigma);
      for (auto& g : t.output) g = 1;
      return t;
    }
    case PdlState::Kind::Or:
      return transducer_or(state_transducer(arch, sigma, s->lhs),
                           state_transducer(arch, sigma, s->rhs));
    case PdlState::Kind::Not: return transducer_not(state_transducer(arch, sigma, s->lhs));
    case PdlState::Kind::Dia: {
      // <pi>sigma == <pi . test(sigma)> true
      PdlPathPtr full = PdlPath::cat({s->path, PdlPath::test_of(s->lhs)});
      return diamond_transducer(arch, sigma, full);
    }
    case PdlState::Kind::Loop:
      throw DialectUnsupportedError("synthesis covers plain PDL (no loop)");
  }
  throw DialectUnsupportedError("unsupported state formula");
}

// ---------------------------------------------------------------------------
// Sentence level

namespace {

Cpds flatten(const Transducer& t, std::vector<int> keep_outputs) {
  // keeps transitions whose index is in keep_outputs (already filtered by the
  // caller); resolves init sets with a fresh initial location
  Cpds s = t.cpds;
  std::vector<Transition> trans;
  for (int i : keep_outputs) trans.push_back(s.trans[i]);
  s.trans = std::move(trans);

  auto sets = init_sets_of(t);
  bool trivial = true;
  for (int p = 0; p < s.arch.num_procs(); ++p)
    if (sets[p].size() != 1 || sets[p][0] != s.init) trivial = false;
  if (trivial) return s;

  s.locs.push_back("@init");
  int iota = (int)s.locs.size() - 1;
  int before = (int)s.trans.size();
  for (int i = 0; i < before; ++i) {
    const Transition& tr = s.trans[i];
    if (std::find(sets[tr.proc].begin(), sets[tr.proc].end(), tr.src) !=
        sets[tr.proc].end()) {
      Transition z = tr;
      z.src = iota;
      s.trans.push_back(z);
    }
  }
  std::vector<std::vector<int>> fin2;
  for (const auto& f : s.fin) {
    // every subset of processes may still sit on the fresh initial location
    std::vector<int> iota_ok;
    for (int p = 0; p < s.arch.num_procs(); ++p)
      if (std::find(sets[p].begin(), sets[p].end(), f[p]) != sets[p].end())
        iota_ok.push_back(p);
    for (int mask = 0; mask < (1 << iota_ok.size()); ++mask) {
      std::vector<int> f2 = f;
      for (size_t b = 0; b < iota_ok.size(); ++b)
        if ((mask >> b) & 1) f2[iota_ok[b]] = iota;
      fin2.push_back(f2);
    }
  }
  std::sort(fin2.begin(), fin2.end());
  fin2.erase(std::unique(fin2.begin(), fin2.end()), fin2.end());
  s.fin = std::move(fin2);
  s.init = iota;
  return s;
}

}  // namespace

Cpds restrict_to_output_one(const Transducer& t) {
  std::vector<int> keep;
  for (size_t i = 0; i < t.cpds.trans.size(); ++i)
    if (t.output[i] == 1) keep.push_back((int)i);
  return flatten(t, keep);
}

Cpds require_some_output_one(const Transducer& t) {
  // pair every location with a per-process flag: some event on this process
  // produced output 1
  Transducer t2;
  t2.cpds.arch = t.cpds.arch;
  t2.cpds.alphabet = t.cpds.alphabet;
  t2.cpds.values = t.cpds.values;
  auto name = [&](int l, int b) { return t.cpds.locs[l] + (b ? "+" : "-"); };
  for (const auto& l : t.cpds.locs) {
    t2.cpds.locs.push_back(l + "-");
    t2.cpds.locs.push_back(l + "+");
  }
  t2.cpds.init = t2.cpds.loc_index(name(t.cpds.init, 0));
  auto sets = init_sets_of(t);
  t2.init_sets.resize(t.cpds.arch.num_procs());
  for (int p = 0; p < t.cpds.arch.num_procs(); ++p)
    for (int x : sets[p]) t2.init_sets[p].push_back(t2.cpds.loc_index(name(x, 0)));
  for (size_t i = 0; i < t.cpds.trans.size(); ++i) {
    const Transition& x = t.cpds.trans[i];
    for (int b = 0; b < 2; ++b) {
      Transition z = x;
      z.src = t2.cpds.loc_index(name(x.src, b));
      z.tgt = t2.cpds.loc_index(name(x.tgt, b | t.output[i]));
      t2.cpds.trans.push_back(z);
      t2.output.push_back(t.output[i]);
    }
  }
  // accepting: underlying tuple final and at least one process flagged
  for (const auto& f : t.cpds.fin)
    for (int mask = 1; mask < (1 << t.cpds.arch.num_procs()); ++mask) {
      std::vector<int> f2;
      for (int p = 0; p < t.cpds.arch.num_procs(); ++p)
        f2.push_back(t2.cpds.loc_index(name(f[p], (mask >> p) & 1)));
      t2.cpds.fin.push_back(f2);
    }
  std::vector<int> keep(t2.cpds.trans.size());
  for (size_t i = 0; i < keep.size(); ++i) keep[i] = (int)i;
  return flatten(t2, keep);
}

Cpds cpds_union(const Cpds& a, const Cpds& b) {
  if (!(a.arch == b.arch) || a.alphabet != b.alphabet)
    throw AlphabetMismatchError("union needs one architecture and alphabet");
  Cpds s;
  s.arch = a.arch;
  s.alphabet = a.alphabet;
  s.locs = {"@u"};
  for (const auto& l : a.locs) s.locs.push_back("L." + l);
  for (const auto& l : b.locs) s.locs.push_back("R." + l);
  for (const auto& v : a.values) s.values.push_back("L." + v);
  for (const auto& v : b.values) s.values.push_back("R." + v);
  s.init = 0;
  auto la = [&](int x) { return 1 + x; };
  auto lb = [&](int x) { return 1 + (int)a.locs.size() + x; };
  auto va = [&](int x) { return x; };
  auto vb = [&](int x) { return (int)a.values.size() + x; };
  for (const auto& t : a.trans) {
    Transition z = t;
    z.src = la(t.src);
    z.tgt = la(t.tgt);
    if (t.kind != Transition::Kind::Internal) z.value = va(t.value);
    s.trans.push_back(z);
    if (t.src == a.init) {
      z.src = 0;
      s.trans.push_back(z);
    }
  }
  for (const auto& t : b.trans) {
    Transition z = t;
    z.src = lb(t.src);
    z.tgt = lb(t.tgt);
    if (t.kind != Transition::Kind::Internal) z.value = vb(t.value);
    s.trans.push_back(z);
    if (t.src == b.init) {
      z.src = 0;
      s.trans.push_back(z);
    }
  }
  // the final tuples decide the side globally; a process without events sits
  // on the shared initial location and counts for either side
  for (const auto& f : a.fin)
    for (int mask = 0; mask < (1 << s.arch.num_procs()); ++mask) {
      std::vector<int> f2;
      bool ok = true;
      for (int p = 0; p < s.arch.num_procs(); ++p) {
        if ((mask >> p) & 1) {
          if (f[p] != a.init) {
            ok = false;
            break;
          }
          f2.push_back(0);
        } else {
          f2.push_back(la(f[p]));
        }
      }
      if (ok) s.fin.push_back(f2);
    }
  for (const auto& f : b.fin)
    for (int mask = 0; mask < (1 << s.arch.num_procs()); ++mask) {
      std::vector<int> f2;
      bool ok = true;
      for (int p = 0; p < s.arch.num_procs(); ++p) {
        if ((mask >> p) & 1) {
          if (f[p] != b.init) {
            ok = false;
            break;
          }
          f2.push_back(0);
        } else {
          f2.push_back(lb(f[p]));
        }
      }
      if (ok) s.fin.push_back(f2);
    }
  std::sort(s.fin.begin(), s.fin.end());
  s.fin.erase(std::unique(s.fin.begin(), s.fin.end()), s.fin.end());
  return s;
}

Cpds cpds_intersection(const Cpds& a, const Cpds& b) {
  Transducer ta, tb;
  ta.cpds = a;
  ta.output.assign(a.trans.size(), 0);
  tb.cpds = b;
  tb.output.assign(b.trans.size(), 0);
  Transducer prod = transducer_product(ta, tb, [](int, int) { return 0; });
  std::vector<int> keep(prod.cpds.trans.size());
  for (size_t i = 0; i < keep.size(); ++i) keep[i] = (int)i;
  return flatten(prod, keep);
}

namespace {

// normalized sentence: positive combination of E sigma / A sigma
Cpds synth_rec(const Architecture& arch, const std::vector<std::string>& sigma,
               const PdlSentencePtr& f, bool positive) {
  switch (f->kind) {
    case PdlSentence::Kind::Not: return synth_rec(arch, sigma, f->lhs, !positive);
    case PdlSentence::Kind::Or: {
      Cpds x = synth_rec(arch, sigma, f->lhs, positive);
      Cpds y = synth_rec(arch, sigma, f->rhs, positive);
      return positive ? cpds_union(x, y) : cpds_intersection(x, y);
    }
    case PdlSentence::Kind::E: {
      PdlStatePtr s = positive ? f->state : PdlState::lnot(f->state);
      Transducer t = state_transducer(arch, sigma, s);
      // E sigma when positive; !E sigma == A !sigma otherwise
      return positive ? require_some_output_one(t) : restrict_to_output_one(t);
    }
  }
  throw DialectUnsupportedError("unsupported sentence");
}

}  // namespace

Cpds synthesize(const Architecture& arch, const std::vector<std::string>& sigma,
                const PdlSentencePtr& phi) {
  if (dialect_of(phi) != PdlDialect::Pdl)
    throw DialectUnsupportedError("synthesis is restricted to plain PDL sentences");
  Cpds s = synth_rec(arch, sigma, phi, true);
  s.check();
  return s;
}

}  // namespace stwmc
