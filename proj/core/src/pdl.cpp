#include "stwmc/pdl.hpp"

#include <algorithm>

#include "stwmc/error.hpp"

namespace stwmc {

namespace {
PdlStatePtr mks(PdlState s) { return std::make_shared<PdlState>(std::move(s)); }
PdlPathPtr mkp(PdlPath p) { return std::make_shared<PdlPath>(std::move(p)); }
PdlSentencePtr mkf(PdlSentence f) { return std::make_shared<PdlSentence>(std::move(f)); }
}  // namespace

PdlStatePtr PdlState::ap_atom(std::string name) {
  return mks({Kind::Ap, std::move(name), nullptr, nullptr, nullptr});
}
PdlStatePtr PdlState::ltrue() { return mks({Kind::True, "", nullptr, nullptr, nullptr}); }
PdlStatePtr PdlState::lfalse() { return lnot(ltrue()); }
PdlStatePtr PdlState::lor(PdlStatePtr a, PdlStatePtr b) {
  return mks({Kind::Or, "", std::move(a), std::move(b), nullptr});
}
PdlStatePtr PdlState::land(PdlStatePtr a, PdlStatePtr b) {
  return lnot(lor(lnot(std::move(a)), lnot(std::move(b))));
}
PdlStatePtr PdlState::lnot(PdlStatePtr a) {
  return mks({Kind::Not, "", std::move(a), nullptr, nullptr});
}
PdlStatePtr PdlState::implies(PdlStatePtr a, PdlStatePtr b) {
  return lor(lnot(std::move(a)), std::move(b));
}
PdlStatePtr PdlState::dia(PdlPathPtr p, PdlStatePtr s) {
  return mks({Kind::Dia, "", std::move(s), nullptr, std::move(p)});
}
PdlStatePtr PdlState::box(PdlPathPtr p, PdlStatePtr s) {
  return lnot(dia(std::move(p), lnot(std::move(s))));
}
PdlStatePtr PdlState::loop(PdlPathPtr p) {
  return mks({Kind::Loop, "", nullptr, nullptr, std::move(p)});
}
PdlStatePtr PdlState::big_or(std::vector<PdlStatePtr> xs) {
  if (xs.empty()) return lfalse();
  PdlStatePtr acc = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) acc = lor(acc, xs[i]);
  return acc;
}
PdlStatePtr PdlState::big_and(std::vector<PdlStatePtr> xs) {
  if (xs.empty()) return ltrue();
  PdlStatePtr acc = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) acc = land(acc, xs[i]);
  return acc;
}

PdlPathPtr PdlPath::edge_label(std::string gamma) {
  return mkp({Kind::Edge, std::move(gamma), nullptr, {}});
}
PdlPathPtr PdlPath::test_of(PdlStatePtr s) {
  return mkp({Kind::Test, "", std::move(s), {}});
}
PdlPathPtr PdlPath::alt(std::vector<PdlPathPtr> ps) {
  if (ps.size() == 1) return ps[0];
  return mkp({Kind::Alt, "", nullptr, std::move(ps)});
}
PdlPathPtr PdlPath::cat(std::vector<PdlPathPtr> ps) {
  if (ps.size() == 1) return ps[0];
  return mkp({Kind::Cat, "", nullptr, std::move(ps)});
}
PdlPathPtr PdlPath::star(PdlPathPtr p) { return mkp({Kind::Star, "", nullptr, {std::move(p)}}); }
PdlPathPtr PdlPath::plus(PdlPathPtr p) { return cat({p, star(p)}); }
PdlPathPtr PdlPath::conv(PdlPathPtr p) { return mkp({Kind::Conv, "", nullptr, {std::move(p)}}); }
PdlPathPtr PdlPath::cap(std::vector<PdlPathPtr> ps) {
  if (ps.size() == 1) return ps[0];
  return mkp({Kind::Cap, "", nullptr, std::move(ps)});
}
PdlPathPtr PdlPath::power(PdlPathPtr p, int n) {
  if (n == 0) return test_of(PdlState::ltrue());
  std::vector<PdlPathPtr> ps(n, p);
  return cat(std::move(ps));
}
PdlPathPtr PdlPath::power_lt(PdlPathPtr p, int n) {
  std::vector<PdlPathPtr> alts;
  for (int i = 0; i < n; ++i) alts.push_back(power(p, i));
  if (alts.empty()) return cat({test_of(PdlState::lfalse())});
  return alt(std::move(alts));
}

PdlSentencePtr PdlSentence::exists(PdlStatePtr s) {
  return mkf({Kind::E, std::move(s), nullptr, nullptr});
}
PdlSentencePtr PdlSentence::always(PdlStatePtr s) {
  return lnot(exists(PdlState::lnot(std::move(s))));
}
PdlSentencePtr PdlSentence::lor(PdlSentencePtr a, PdlSentencePtr b) {
  return mkf({Kind::Or, nullptr, std::move(a), std::move(b)});
}
PdlSentencePtr PdlSentence::land(PdlSentencePtr a, PdlSentencePtr b) {
  return lnot(lor(lnot(std::move(a)), lnot(std::move(b))));
}
PdlSentencePtr PdlSentence::lnot(PdlSentencePtr a) {
  return mkf({Kind::Not, nullptr, std::move(a), nullptr});
}

const char* dialect_name(PdlDialect d) {
  switch (d) {
    case PdlDialect::Pdl: return "PDL";
    case PdlDialect::Cpdl: return "CPDL";
    case PdlDialect::Lcpdl: return "LCPDL";
    case PdlDialect::Icpdl: return "ICPDL";
  }
  return "?";
}

namespace {
void scan_path(const PdlPathPtr& p, bool* conv, bool* loop, bool* cap);
void scan_state(const PdlStatePtr& s, bool* conv, bool* loop, bool* cap) {
  if (!s) return;
  if (s->kind == PdlState::Kind::Loop) *loop = true;
  scan_state(s->lhs, conv, loop, cap);
  scan_state(s->rhs, conv, loop, cap);
  scan_path(s->path, conv, loop, cap);
}
void scan_path(const PdlPathPtr& p, bool* conv, bool* loop, bool* cap) {
  if (!p) return;
  if (p->kind == PdlPath::Kind::Conv) *conv = true;
  if (p->kind == PdlPath::Kind::Cap) *cap = true;
  scan_state(p->test, conv, loop, cap);
  for (const auto& q : p->parts) scan_path(q, conv, loop, cap);
}
}  // namespace

PdlDialect dialect_of_state(const PdlStatePtr& s) {
  bool conv = false, loop = false, cap = false;
  scan_state(s, &conv, &loop, &cap);
  if (cap) return PdlDialect::Icpdl;
  if (loop) return PdlDialect::Lcpdl;
  if (conv) return PdlDialect::Cpdl;
  return PdlDialect::Pdl;
}

PdlDialect dialect_of(const PdlSentencePtr& f) {
  if (!f) return PdlDialect::Pdl;
  PdlDialect a = f->state ? dialect_of_state(f->state) : PdlDialect::Pdl;
  PdlDialect b = dialect_of(f->lhs), c = dialect_of(f->rhs);
  return std::max({a, b, c});
}

// ---------------------------------------------------------------------------
// Evaluation

ApSemantics cbm_ap_semantics() {
  return [](const LabeledGraph& g, int v, const std::string& ap) {
    return g.vertices[v].letter == ap || g.vertices[v].proc == ap;
  };
}

std::vector<std::pair<int, int>> VertexRelation::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (at(u, v)) out.push_back({u, v});
  return out;
}

namespace {

VertexRelation rel_empty(int n) {
  VertexRelation r;
  r.n = n;
  r.bits.assign((size_t)n * r.wpr(), 0);
  return r;
}

VertexRelation rel_id(int n) {
  VertexRelation r = rel_empty(n);
  for (int v = 0; v < n; ++v) r.set(v, v);
  return r;
}

VertexRelation rel_union(const VertexRelation& a, const VertexRelation& b) {
  VertexRelation r = a;
  for (size_t i = 0; i < r.bits.size(); ++i) r.bits[i] |= b.bits[i];
  return r;
}

VertexRelation rel_inter(const VertexRelation& a, const VertexRelation& b) {
  VertexRelation r = a;
  for (size_t i = 0; i < r.bits.size(); ++i) r.bits[i] &= b.bits[i];
  return r;
}

VertexRelation rel_compose(const VertexRelation& a, const VertexRelation& b) {
  VertexRelation r = rel_empty(a.n);
  const int w = r.wpr();
  for (int u = 0; u < a.n; ++u) {
    for (int m = 0; m < a.n; ++m) {
      if (!a.at(u, m)) continue;
      const uint64_t* brow = &b.bits[(size_t)m * w];
      uint64_t* rrow = &r.bits[(size_t)u * w];
      for (int k = 0; k < w; ++k) rrow[k] |= brow[k];
    }
  }
  return r;
}

VertexRelation rel_converse(const VertexRelation& a) {
  VertexRelation r = rel_empty(a.n);
  for (int u = 0; u < a.n; ++u)
    for (int v = 0; v < a.n; ++v)
      if (a.at(u, v)) r.set(v, u);
  return r;
}

// reflexive-transitive closure, iterated squaring until stable
VertexRelation rel_star(const VertexRelation& a) {
  VertexRelation r = rel_union(a, rel_id(a.n));
  while (true) {
    VertexRelation next = rel_union(r, rel_compose(r, r));
    if (next.bits == r.bits) return r;
    r = std::move(next);
  }
}

struct PdlEval {
  const LabeledGraph& g;
  const ApSemantics& ap;

  std::vector<bool> state(const PdlStatePtr& s) {
    const int n = g.num_vertices();
    std::vector<bool> out(n, false);
    switch (s->kind) {
      case PdlState::Kind::Ap:
        for (int v = 0; v < n; ++v) out[v] = ap(g, v, s->ap);
        break;
      case PdlState::Kind::True: out.assign(n, true); break;
      case PdlState::Kind::Or: {
        auto a = state(s->lhs), b = state(s->rhs);
        for (int v = 0; v < n; ++v) out[v] = a[v] || b[v];
        break;
      }
      case PdlState::Kind::Not: {
        auto a = state(s->lhs);
        for (int v = 0; v < n; ++v) out[v] = !a[v];
        break;
      }
      case PdlState::Kind::Dia: {
        auto r = path(s->path);
        auto target = state(s->lhs);
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n && !out[u]; ++v) out[u] = r.at(u, v) && target[v];
        break;
      }
      case PdlState::Kind::Loop: {
        auto r = path(s->path);
        for (int v = 0; v < n; ++v) out[v] = r.at(v, v);
        break;
      }
    }
    return out;
  }

  VertexRelation path(const PdlPathPtr& p) {
    const int n = g.num_vertices();
    switch (p->kind) {
      case PdlPath::Kind::Edge: {
        VertexRelation r = rel_empty(n);
        if (p->edge == "proc") {
          for (auto [u, v] : g.proc_edges) r.set(u, v);
        } else {
          auto it = g.ds_edges.find(p->edge);
          if (it != g.ds_edges.end())
            for (auto [u, v] : it->second) r.set(u, v);
        }
        return r;
      }
      case PdlPath::Kind::Test: {
        VertexRelation r = rel_empty(n);
        auto t = state(p->test);
        for (int v = 0; v < n; ++v)
          if (t[v]) r.set(v, v);
        return r;
      }
      case PdlPath::Kind::Alt: {
        VertexRelation r = rel_empty(n);
        for (const auto& q : p->parts) r = rel_union(r, path(q));
        return r;
      }
      case PdlPath::Kind::Cat: {
        VertexRelation r = rel_id(n);
        for (const auto& q : p->parts) r = rel_compose(r, path(q));
        return r;
      }
      case PdlPath::Kind::Star: return rel_star(path(p->parts[0]));
      case PdlPath::Kind::Conv: return rel_converse(path(p->parts[0]));
      case PdlPath::Kind::Cap: {
        VertexRelation r = path(p->parts[0]);
        for (size_t i = 1; i < p->parts.size(); ++i) r = rel_inter(r, path(p->parts[i]));
        return r;
      }
    }
    return rel_empty(n);
  }
};

}  // namespace

std::vector<int> eval_pdl_state(const LabeledGraph& g, const PdlStatePtr& s,
                                const ApSemantics& ap) {
  PdlEval ev{g, ap};
  auto set = ev.state(s);
  std::vector<int> out;
  for (int v = 0; v < (int)set.size(); ++v)
    if (set[v]) out.push_back(v);
  return out;
}

VertexRelation eval_pdl_path(const LabeledGraph& g, const PdlPathPtr& p,
                             const ApSemantics& ap) {
  PdlEval ev{g, ap};
  return ev.path(p);
}

bool eval_pdl_sentence(const LabeledGraph& g, const PdlSentencePtr& f, const ApSemantics& ap) {
  switch (f->kind) {
    case PdlSentence::Kind::E: return !eval_pdl_state(g, f->state, ap).empty();
    case PdlSentence::Kind::Or:
      return eval_pdl_sentence(g, f->lhs, ap) || eval_pdl_sentence(g, f->rhs, ap);
    case PdlSentence::Kind::Not: return !eval_pdl_sentence(g, f->lhs, ap);
  }
  return false;
}

bool eval_pdl_sentence_cbm(const Cbm& m, const PdlSentencePtr& f) {
  LabeledGraph g = cbm_to_graph(m);
  return eval_pdl_sentence(g, f);
}

// ---------------------------------------------------------------------------
// Well-formedness sentences

WellFormedness gen_cbm_wellformed_lcpdl(const Architecture& arch,
                                        const std::vector<std::string>& sigma) {
  using S = PdlState;
  using P = PdlPath;
  WellFormedness wf;

  auto edge = [](const std::string& l) { return P::edge_label(l); };
  auto any_match = [&] {
    std::vector<PdlPathPtr> ds;
    for (const auto& d : arch.ds) ds.push_back(edge(d.name));
    return P::alt(std::move(ds));
  };
  PdlPathPtr proc = edge("proc");
  PdlPathPtr rmatch = any_match();

  // LABELS: every event carries exactly one process and one letter
  {
    std::vector<PdlStatePtr> ps;
    for (int p = 0; p < arch.num_procs(); ++p) {
      std::vector<PdlStatePtr> cj{S::ap_atom(arch.procs[p])};
      for (int q = 0; q < arch.num_procs(); ++q)
        if (q != p) cj.push_back(S::lnot(S::ap_atom(arch.procs[q])));
      ps.push_back(S::big_and(cj));
    }
    std::vector<PdlStatePtr> as;
    for (const auto& a : sigma) {
      std::vector<PdlStatePtr> cj{S::ap_atom(a)};
      for (const auto& b : sigma)
        if (b != a) cj.push_back(S::lnot(S::ap_atom(b)));
      as.push_back(S::big_and(cj));
    }
    wf.sentences.push_back(
        {"LABELS", PdlSentence::always(S::land(S::big_or(ps), S::big_or(as)))});
  }

  // ORDER: no (-> + |>)^+ loop
  wf.sentences.push_back(
      {"ORDER", PdlSentence::always(
                    S::lnot(S::loop(P::plus(P::alt({proc, rmatch})))))});

  // PROCESS: -> stays within one process
  {
    std::vector<PdlStatePtr> alts;
    for (const auto& p : arch.procs)
      alts.push_back(S::land(S::ap_atom(p), S::dia(proc, S::ap_atom(p))));
    wf.sentences.push_back(
        {"PROCESS", PdlSentence::always(
                        S::implies(S::dia(proc, S::ltrue()), S::big_or(alts)))});
  }

  // WRITER / READER
  {
    std::vector<PdlStatePtr> ws, rs;
    for (const auto& d : arch.ds) {
      ws.push_back(S::implies(S::dia(edge(d.name), S::ltrue()),
                              S::ap_atom(arch.procs[d.writer])));
      rs.push_back(S::implies(S::dia(P::conv(edge(d.name)), S::ltrue()),
                              S::ap_atom(arch.procs[d.reader])));
    }
    wf.sentences.push_back({"WRITER", PdlSentence::always(S::big_and(ws))});
    wf.sentences.push_back({"READER", PdlSentence::always(S::big_and(rs))});
  }

  // DISJOINT: no shared endpoints between distinct match edges
  {
    std::vector<PdlStatePtr> bad;
    bad.push_back(S::dia(P::cat({rmatch, rmatch}), S::ltrue()));
    for (int d = 0; d < arch.num_ds(); ++d)
      for (int d2 = 0; d2 < arch.num_ds(); ++d2) {
        if (d == d2) continue;
        bad.push_back(S::land(S::dia(edge(arch.ds[d].name), S::ltrue()),
                              S::dia(edge(arch.ds[d2].name), S::ltrue())));
        bad.push_back(S::land(S::dia(P::conv(edge(arch.ds[d].name)), S::ltrue()),
                              S::dia(P::conv(edge(arch.ds[d2].name)), S::ltrue())));
      }
    PdlSentencePtr part1 = PdlSentence::lnot(PdlSentence::exists(S::big_or(bad)));
    // two parallel d-edges between -> -connected events are distinct but share
    // endpoints: detected with a loop
    std::vector<PdlStatePtr> loops;
    for (const auto& d : arch.ds) {
      loops.push_back(S::loop(P::cat({edge(d.name), P::plus(proc), P::conv(edge(d.name))})));
      loops.push_back(S::loop(P::cat({P::conv(edge(d.name)), P::plus(proc), edge(d.name)})));
    }
    PdlSentencePtr part2 = PdlSentence::lnot(PdlSentence::exists(S::big_or(loops)));
    wf.sentences.push_back({"DISJOINT", PdlSentence::land(part1, part2)});
  }

  // FIFO per queue
  {
    std::vector<PdlStatePtr> cj;
    for (const auto& d : arch.ds) {
      if (d.kind != DsKind::Queue) continue;
      cj.push_back(S::lnot(S::loop(P::cat(
          {edge(d.name), P::plus(proc), P::conv(edge(d.name)), P::plus(proc)}))));
    }
    wf.sentences.push_back({"FIFO", PdlSentence::always(S::big_and(cj))});
  }

  // LIFO per stack: the matching read is reachable by skipping balanced or
  // non-accessing events
  {
    std::vector<PdlStatePtr> cj;
    for (const auto& d : arch.ds) {
      if (d.kind != DsKind::Stack) continue;
      PdlPathPtr dm = edge(d.name);
      PdlStatePtr untouched = S::lnot(S::dia(P::alt({dm, P::conv(dm)}), S::ltrue()));
      PdlPathPtr skip =
          P::alt({P::cat({dm, proc}), P::cat({P::test_of(untouched), proc})});
      cj.push_back(S::implies(
          S::dia(dm, S::ltrue()),
          S::loop(P::cat({proc, P::star(skip), P::conv(dm)}))));
    }
    wf.sentences.push_back({"LIFO", PdlSentence::always(S::big_and(cj))});
  }

  return wf;
}

// ---------------------------------------------------------------------------
// ICPDL -> MSO

namespace {

struct PdlToMso {
  int fresh = 0;
  std::string new_var() { return "__v" + std::to_string(fresh++); }
  std::string new_set() { return "__S" + std::to_string(fresh++); }

  MsoPtr state(const PdlStatePtr& s, const std::string& x) {
    using F = MsoFormula;
    switch (s->kind) {
      case PdlState::Kind::Ap:
        // a proposition is a letter or a process name; both atoms exist, and
        // exactly one can hold, so the disjunction is faithful
        return F::lor(F::letter(s->ap, x), F::on_proc(s->ap, x));
      case PdlState::Kind::True: return F::eq(x, x);
      case PdlState::Kind::Or: return F::lor(state(s->lhs, x), state(s->rhs, x));
      case PdlState::Kind::Not: return F::lnot(state(s->lhs, x));
      case PdlState::Kind::Dia: {
        std::string y = new_var();
        return F::exists1(y, F::land(path(s->path, x, y), state(s->lhs, y)));
      }
      case PdlState::Kind::Loop: return path(s->path, x, x);
    }
    return MsoFormula::lfalse();
  }

  MsoPtr path(const PdlPathPtr& p, const std::string& x, const std::string& y) {
    using F = MsoFormula;
    switch (p->kind) {
      case PdlPath::Kind::Edge:
        if (p->edge == "proc") return F::succ(x, y);
        return F::match(p->edge, x, y);
      case PdlPath::Kind::Test: return F::land(F::eq(x, y), state(p->test, x));
      case PdlPath::Kind::Alt: {
        std::vector<MsoPtr> alts;
        for (const auto& q : p->parts) alts.push_back(path(q, x, y));
        return F::big_or(alts);
      }
      case PdlPath::Kind::Cat: {
        std::string cur = x;
        std::vector<MsoPtr> steps;
        std::vector<std::string> mids;
        for (size_t i = 0; i < p->parts.size(); ++i) {
          std::string nxt = i + 1 == p->parts.size() ? y : new_var();
          steps.push_back(path(p->parts[i], cur, nxt));
          if (i + 1 != p->parts.size()) mids.push_back(nxt);
          cur = nxt;
        }
        MsoPtr body = F::big_and(steps);
        for (auto it = mids.rbegin(); it != mids.rend(); ++it) body = F::exists1(*it, body);
        return body;
      }
      case PdlPath::Kind::Star: {
        // forall X (x in X and forall z z' (z in X and pi(z,z') => z' in X) => y in X)
        std::string X = new_set(), z = new_var(), z2 = new_var();
        MsoPtr closed = F::forall1(
            z, F::forall1(z2, F::implies(F::land(F::in_set(z, X), path(p->parts[0], z, z2)),
                                         F::in_set(z2, X))));
        return F::forall2(X, F::implies(F::land(F::in_set(x, X), closed), F::in_set(y, X)));
      }
      case PdlPath::Kind::Conv: return path(p->parts[0], y, x);
      case PdlPath::Kind::Cap: {
        std::vector<MsoPtr> cj;
        for (const auto& q : p->parts) cj.push_back(path(q, x, y));
        return F::big_and(cj);
      }
    }
    return MsoFormula::lfalse();
  }

  MsoPtr sentence(const PdlSentencePtr& f) {
    using F = MsoFormula;
    switch (f->kind) {
      case PdlSentence::Kind::E: {
        std::string x = new_var();
        return F::exists1(x, state(f->state, x));
      }
      case PdlSentence::Kind::Or: return F::lor(sentence(f->lhs), sentence(f->rhs));
      case PdlSentence::Kind::Not: return F::lnot(sentence(f->lhs));
    }
    return MsoFormula::lfalse();
  }
};

}  // namespace

MsoPtr pdl_to_mso(const PdlSentencePtr& f) {
  PdlToMso tr;
  return tr.sentence(f);
}

}  // namespace stwmc
