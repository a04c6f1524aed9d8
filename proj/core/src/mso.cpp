#include "stwmc/mso.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>

#include "stwmc/error.hpp"

namespace stwmc {

namespace {
MsoPtr mk(MsoFormula::Kind k, std::string name, std::string v1, std::string v2, MsoPtr l,
          MsoPtr r) {
  auto f = std::make_shared<MsoFormula>();
  f->kind = k;
  f->name = std::move(name);
  f->var1 = std::move(v1);
  f->var2 = std::move(v2);
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}
}  // namespace

MsoPtr MsoFormula::letter(std::string a, std::string x) {
  return mk(Kind::Letter, std::move(a), std::move(x), "", nullptr, nullptr);
}
MsoPtr MsoFormula::on_proc(std::string p, std::string x) {
  return mk(Kind::OnProc, std::move(p), std::move(x), "", nullptr, nullptr);
}
MsoPtr MsoFormula::eq(std::string x, std::string y) {
  return mk(Kind::Eq, "", std::move(x), std::move(y), nullptr, nullptr);
}
MsoPtr MsoFormula::match(std::string d, std::string x, std::string y) {
  return mk(Kind::Match, std::move(d), std::move(x), std::move(y), nullptr, nullptr);
}
MsoPtr MsoFormula::succ(std::string x, std::string y) {
  return mk(Kind::Succ, "", std::move(x), std::move(y), nullptr, nullptr);
}
MsoPtr MsoFormula::in_set(std::string x, std::string X) {
  return mk(Kind::InSet, "", std::move(x), std::move(X), nullptr, nullptr);
}
MsoPtr MsoFormula::lor(MsoPtr a, MsoPtr b) {
  return mk(Kind::Or, "", "", "", std::move(a), std::move(b));
}
MsoPtr MsoFormula::lnot(MsoPtr a) { return mk(Kind::Not, "", "", "", std::move(a), nullptr); }
MsoPtr MsoFormula::exists1(std::string x, MsoPtr body) {
  return mk(Kind::Exists1, "", std::move(x), "", std::move(body), nullptr);
}
MsoPtr MsoFormula::exists2(std::string X, MsoPtr body) {
  return mk(Kind::Exists2, "", std::move(X), "", std::move(body), nullptr);
}

MsoPtr MsoFormula::land(MsoPtr a, MsoPtr b) { return lnot(lor(lnot(a), lnot(b))); }
MsoPtr MsoFormula::implies(MsoPtr a, MsoPtr b) { return lor(lnot(a), b); }
MsoPtr MsoFormula::forall1(std::string x, MsoPtr body) {
  return lnot(exists1(std::move(x), lnot(body)));
}
MsoPtr MsoFormula::forall2(std::string X, MsoPtr body) {
  return lnot(exists2(std::move(X), lnot(body)));
}
MsoPtr MsoFormula::big_or(std::vector<MsoPtr> xs) {
  if (xs.empty()) return lfalse();
  MsoPtr acc = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) acc = lor(acc, xs[i]);
  return acc;
}
MsoPtr MsoFormula::big_and(std::vector<MsoPtr> xs) {
  if (xs.empty()) return ltrue();
  MsoPtr acc = xs[0];
  for (size_t i = 1; i < xs.size(); ++i) acc = land(acc, xs[i]);
  return acc;
}
MsoPtr MsoFormula::ltrue() { return lnot(lfalse()); }
MsoPtr MsoFormula::lfalse() {
  // false = exists x (x != x): avoids a dedicated constant
  return exists1("__f", lnot(eq("__f", "__f")));
}
MsoPtr MsoFormula::is_write(std::string x) {
  return exists1("__w", match("", x, "__w"));
}
MsoPtr MsoFormula::is_read(std::string x) { return exists1("__r", match("", "__r", x)); }
MsoPtr MsoFormula::is_local(std::string x) {
  return land(lnot(is_write(x)), lnot(is_read(x)));
}
MsoPtr MsoFormula::is_min(std::string x) { return lnot(exists1("__p", succ("__p", x))); }
MsoPtr MsoFormula::is_max(std::string x) { return lnot(exists1("__s", succ(x, "__s"))); }

MsoPtr MsoFormula::le(std::string x, std::string y) {
  // x <= y  =  forall X ( x in X and closed(X) => y in X ),
  // closed(X) = forall z z' ( z in X and (z -> z' or z |> z') => z' in X )
  MsoPtr closed = forall1(
      "__z", forall1("__z2",
                     implies(land(in_set("__z", "__X"),
                                  lor(succ("__z", "__z2"), match("", "__z", "__z2"))),
                             in_set("__z2", "__X"))));
  return forall2("__X", implies(land(in_set(x, "__X"), closed), in_set(y, "__X")));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct EvalCtx {
  const LabeledGraph& g;
  const Architecture* arch;  // may be null for raw graphs
  MsoEvalOptions opts;
  std::map<std::string, int> first;                 // var -> vertex
  std::map<std::string, std::vector<bool>> second;  // var -> characteristic vector

  bool ap_letter(int v, const std::string& a) const { return g.vertices[v].letter == a; }
  bool ap_proc(int v, const std::string& p) const { return g.vertices[v].proc == p; }

  int var(const std::string& x) const {
    auto it = first.find(x);
    if (it == first.end()) throw UnboundVariableError("unbound first-order variable " + x);
    return it->second;
  }
  const std::vector<bool>& svar(const std::string& X) const {
    auto it = second.find(X);
    if (it == second.end()) throw UnboundVariableError("unbound second-order variable " + X);
    return it->second;
  }

  bool eval(const MsoPtr& f) {
    using K = MsoFormula::Kind;
    switch (f->kind) {
      case K::Letter: return ap_letter(var(f->var1), f->name);
      case K::OnProc: return ap_proc(var(f->var1), f->name);
      case K::Eq: return var(f->var1) == var(f->var2);
      case K::Match: {
        int u = var(f->var1), v = var(f->var2);
        for (const auto& [d, edges] : g.ds_edges) {
          if (!f->name.empty() && d != f->name) continue;
          for (auto [a, b] : edges)
            if (a == u && b == v) return true;
        }
        return false;
      }
      case K::Succ: {
        int u = var(f->var1), v = var(f->var2);
        for (auto [a, b] : g.proc_edges)
          if (a == u && b == v) return true;
        return false;
      }
      case K::InSet: return svar(f->var2).at(var(f->var1));
      case K::Or: return eval(f->lhs) || eval(f->rhs);
      case K::Not: return !eval(f->lhs);
      case K::Exists1: {
        for (int v = 0; v < g.num_vertices(); ++v) {
          first[f->var1] = v;
          if (eval(f->lhs)) {
            first.erase(f->var1);
            return true;
          }
        }
        first.erase(f->var1);
        return false;
      }
      case K::Exists2: {
        const int n = g.num_vertices();
        if (n > opts.max_events_for_exists2)
          throw LimitExceededError("exists2 enumeration limited to " +
                                   std::to_string(opts.max_events_for_exists2) + " events");
        // Transition-cover blocks are evaluated by partition enumeration; the
        // generic path enumerates all subsets.
        if (auto fast = try_partition_block(f)) return *fast;
        std::vector<bool> set(n, false);
        bool found = false;
        for (uint64_t mask = 0; mask < (uint64_t(1) << n) && !found; ++mask) {
          for (int v = 0; v < n; ++v) set[v] = (mask >> v) & 1;
          second[f->var1] = set;
          found = eval(f->lhs);
        }
        second.erase(f->var1);
        return found;
      }
    }
    return false;
  }

  // exists X1..Xn (Partition((Xi)) and body): sound to enumerate only the
  // partitions, i.e. functions from events to the n set variables. Detected
  // syntactically on the shape gen_phi_S emits.
  std::optional<bool> try_partition_block(const MsoPtr& f);
  bool eval_partition_block(const std::vector<std::string>& vars, const MsoPtr& body);
  bool eval3_prune(const MsoPtr& f, int undecided_from);  // 3-valued pruning helper
};

// Collects exists2-prefix variables and returns the innermost body.
const MsoFormula* peel_exists2(const MsoPtr& f, std::vector<std::string>* vars) {
  const MsoFormula* cur = f.get();
  while (cur->kind == MsoFormula::Kind::Exists2) {
    vars->push_back(cur->var1);
    cur = cur->lhs.get();
  }
  return cur;
}

// land is encoded with Or/Not: a and b == !(!a or !b).
bool as_and(const MsoFormula* f, const MsoFormula** a, const MsoFormula** b) {
  if (f->kind != MsoFormula::Kind::Not || f->lhs->kind != MsoFormula::Kind::Or)
    return false;
  const MsoFormula* l = f->lhs->lhs.get();
  const MsoFormula* r = f->lhs->rhs.get();
  if (l->kind != MsoFormula::Kind::Not || r->kind != MsoFormula::Kind::Not) return false;
  *a = l->lhs.get();
  *b = r->lhs.get();
  return true;
}

void flatten_and(const MsoFormula* f, std::vector<const MsoFormula*>* out) {
  const MsoFormula *a, *b;
  if (as_and(f, &a, &b)) {
    flatten_and(a, out);
    flatten_and(b, out);
  } else {
    out->push_back(f);
  }
}

void flatten_or(const MsoFormula* f, std::vector<const MsoFormula*>* out) {
  if (f->kind == MsoFormula::Kind::Or) {
    flatten_or(f->lhs.get(), out);
    flatten_or(f->rhs.get(), out);
  } else {
    out->push_back(f);
  }
}

// Exact check for Partition((X_t)) = forall x OR_t ( x in X_t and AND_{u != t}
// not x in X_u ). Enumeration may be restricted to partitions only if some
// conjunct provably forces one.
bool is_partition_marker(const MsoFormula* f, const std::vector<std::string>& vars) {
  if (f->kind != MsoFormula::Kind::Not) return false;
  const MsoFormula* e = f->lhs.get();
  if (e->kind != MsoFormula::Kind::Exists1) return false;
  const std::string& x = e->var1;
  if (e->lhs->kind != MsoFormula::Kind::Not) return false;
  std::vector<const MsoFormula*> alts;
  flatten_or(e->lhs->lhs.get(), &alts);
  if (alts.size() != vars.size()) return false;
  std::set<std::string> covered;
  for (const MsoFormula* alt : alts) {
    std::vector<const MsoFormula*> lits;
    flatten_and(alt, &lits);
    std::string pos;
    std::set<std::string> neg;
    for (const MsoFormula* lit : lits) {
      if (lit->kind == MsoFormula::Kind::InSet && lit->var1 == x) {
        if (!pos.empty()) return false;
        pos = lit->var2;
      } else if (lit->kind == MsoFormula::Kind::Not &&
                 lit->lhs->kind == MsoFormula::Kind::InSet && lit->lhs->var1 == x) {
        neg.insert(lit->lhs->var2);
      } else {
        return false;
      }
    }
    if (pos.empty() || neg.count(pos)) return false;
    if (neg.size() != vars.size() - 1) return false;
    for (const auto& v : vars)
      if (v != pos && !neg.count(v)) return false;
    covered.insert(pos);
  }
  for (const auto& v : vars)
    if (!covered.count(v)) return false;
  return true;
}

std::optional<bool> EvalCtx::try_partition_block(const MsoPtr& f) {
  std::vector<std::string> vars;
  const MsoFormula* body = peel_exists2(f, &vars);
  if (vars.size() < 2) return std::nullopt;
  std::vector<const MsoFormula*> conjuncts;
  flatten_and(body, &conjuncts);
  bool has_partition = false;
  for (const MsoFormula* c : conjuncts)
    if (is_partition_marker(c, vars)) {
      has_partition = true;
      break;
    }
  if (!has_partition) return std::nullopt;

  const int n = g.num_vertices();
  const int t = (int)vars.size();
  for (const auto& v : vars) second[v].assign(n, false);

  // DFS over events choosing the block each event belongs to, pruning with a
  // 3-valued check of the body after each choice.
  MsoPtr body_sp(f, body);  // aliasing: keeps f alive
  std::function<bool(int)> go = [&](int e) -> bool {
    if (e == n) return eval(body_sp);
    if (!eval3_prune(body_sp, e)) return false;
    for (int i = 0; i < t; ++i) {
      second[vars[i]][e] = true;
      if (go(e + 1)) return true;
      second[vars[i]][e] = false;
    }
    return false;
  };
  bool res = go(0);
  for (const auto& v : vars) second.erase(v);
  return res;
}

// 3-valued evaluation where set membership of events >= undecided_from is
// unknown: returns false only if the formula R is definitely false for every
// completion. Conservative: unknown propagates as "may be true".
namespace three_valued {
enum V { F, T, U };
}  // namespace three_valued

bool EvalCtx::eval3_prune(const MsoPtr& f, int undecided_from) {
  using K = MsoFormula::Kind;
  using namespace three_valued;
  std::function<V(const MsoFormula*)> ev = [&](const MsoFormula* x) -> V {
    switch (x->kind) {
      case K::Letter: return ap_letter(var(x->var1), x->name) ? T : F;
      case K::OnProc: return ap_proc(var(x->var1), x->name) ? T : F;
      case K::Eq: return var(x->var1) == var(x->var2) ? T : F;
      case K::Match:
      case K::Succ: {
        MsoPtr tmp(std::shared_ptr<const MsoFormula>(), x);
        return eval(tmp) ? T : F;
      }
      case K::InSet: {
        int v = var(x->var1);
        auto it = second.find(x->var2);
        if (it == second.end()) throw UnboundVariableError("unbound " + x->var2);
        if (v >= undecided_from) return U;
        return it->second[v] ? T : F;
      }
      case K::Or: {
        V a = ev(x->lhs.get());
        if (a == T) return T;
        V b = ev(x->rhs.get());
        if (b == T) return T;
        return (a == U || b == U) ? U : F;
      }
      case K::Not: {
        V a = ev(x->lhs.get());
        return a == U ? U : (a == T ? F : T);
      }
      case K::Exists1: {
        V acc = F;
        for (int v = 0; v < g.num_vertices(); ++v) {
          first[x->var1] = v;
          V a = ev(x->lhs.get());
          if (a == T) {
            acc = T;
            break;
          }
          if (a == U) acc = U;
        }
        first.erase(x->var1);
        return acc;
      }
      case K::Exists2:
        return U;  // nested blocks: no pruning information
    }
    return U;
  };
  return ev(f.get()) != F;
}

}  // namespace

bool eval_mso_graph(const LabeledGraph& g, const MsoPtr& phi, const MsoEvalOptions& opts) {
  EvalCtx ctx{g, nullptr, opts};
  return ctx.eval(phi);
}

bool eval_mso(const Cbm& m, const MsoPtr& phi, const Interpretation& interp,
              const MsoEvalOptions& opts) {
  LabeledGraph g = cbm_to_graph(m);
  EvalCtx ctx{g, &m.arch, opts};
  for (const auto& [x, e] : interp.first) ctx.first[x] = m.event_index(e);
  for (const auto& [X, es] : interp.second) {
    std::vector<bool> set(g.num_vertices(), false);
    for (const auto& e : es) set[m.event_index(e)] = true;
    ctx.second[X] = set;
  }
  return ctx.eval(phi);
}

// ---------------------------------------------------------------------------
// Phi_S

MsoPtr gen_phi_S(const Cpds& s) {
  using F = MsoFormula;
  const int T = (int)s.trans.size();
  auto xt = [&](int t) { return "X" + std::to_string(t); };

  std::vector<MsoPtr> conjuncts;

  // Partition
  {
    std::vector<MsoPtr> alts;
    for (int t = 0; t < T; ++t) {
      std::vector<MsoPtr> sub{F::in_set("x", xt(t))};
      for (int u = 0; u < T; ++u)
        if (u != t) sub.push_back(F::lnot(F::in_set("x", xt(u))));
      alts.push_back(F::big_and(sub));
    }
    conjuncts.push_back(F::forall1("x", F::big_or(alts)));
  }

  // letter/process consistency: p(x) and a(x) => OR_{t in Trans(p,a)} X_t(x)
  {
    std::vector<MsoPtr> per_pa;
    for (int p = 0; p < s.arch.num_procs(); ++p)
      for (const auto& a : s.alphabet) {
        std::vector<MsoPtr> opts_;
        for (int t = 0; t < T; ++t)
          if (s.trans[t].proc == p && s.trans[t].letter == a)
            opts_.push_back(F::in_set("x", xt(t)));
        per_pa.push_back(F::implies(
            F::land(F::on_proc(s.arch.procs[p], "x"), F::letter(a, "x")), F::big_or(opts_)));
      }
    conjuncts.push_back(F::forall1("x", F::big_and(per_pa)));
  }

  // an event covered by a write/read/internal transition must be one
  {
    std::vector<MsoPtr> per_t;
    for (int t = 0; t < T; ++t) {
      MsoPtr shape;
      switch (s.trans[t].kind) {
        case Transition::Kind::Write: shape = F::is_write("x"); break;
        case Transition::Kind::Read: shape = F::is_read("x"); break;
        case Transition::Kind::Internal: shape = F::is_local("x"); break;
      }
      per_t.push_back(F::implies(F::in_set("x", xt(t)), shape));
    }
    conjuncts.push_back(F::forall1("x", F::big_and(per_t)));
  }

  // -> adjacency: x -> x' => OR_{tgt(t)=src(t')} X_t(x) and X_t'(x')
  {
    std::vector<MsoPtr> opts_;
    for (int t = 0; t < T; ++t)
      for (int u = 0; u < T; ++u)
        if (s.trans[t].tgt == s.trans[u].src && s.trans[t].proc == s.trans[u].proc)
          opts_.push_back(F::land(F::in_set("x", xt(t)), F::in_set("x2", xt(u))));
    conjuncts.push_back(F::forall1(
        "x", F::forall1("x2", F::implies(F::succ("x", "x2"), F::big_or(opts_)))));
  }

  // |>d value consistency
  {
    std::vector<MsoPtr> per_d;
    for (int d = 0; d < s.arch.num_ds(); ++d) {
      std::vector<MsoPtr> opts_;
      for (int t = 0; t < T; ++t)
        for (int u = 0; u < T; ++u) {
          const auto& tw = s.trans[t];
          const auto& tr = s.trans[u];
          if (tw.kind == Transition::Kind::Write && tr.kind == Transition::Kind::Read &&
              tw.ds == d && tr.ds == d && tw.value == tr.value)
            opts_.push_back(F::land(F::in_set("x", xt(t)), F::in_set("x2", xt(u))));
        }
      per_d.push_back(F::implies(F::match(s.arch.ds[d].name, "x", "x2"), F::big_or(opts_)));
    }
    conjuncts.push_back(F::forall1("x", F::forall1("x2", F::big_and(per_d))));
  }

  // min(x) => initial transition
  {
    std::vector<MsoPtr> opts_;
    for (int t = 0; t < T; ++t)
      if (s.trans[t].src == s.init) opts_.push_back(F::in_set("x", xt(t)));
    conjuncts.push_back(F::forall1("x", F::implies(F::is_min("x"), F::big_or(opts_))));
  }

  // final: OR over (fin tuple, set P of silent processes)
  {
    std::vector<MsoPtr> cases;
    for (const auto& tup : s.fin) {
      // P ranges over subsets of processes allowed to be empty (l_p == init)
      std::vector<int> can_be_empty;
      for (int p = 0; p < s.arch.num_procs(); ++p)
        if (tup[p] == s.init) can_be_empty.push_back(p);
      const int k = (int)can_be_empty.size();
      for (int mask = 0; mask < (1 << k); ++mask) {
        std::vector<bool> in_p(s.arch.num_procs(), false);
        for (int i = 0; i < k; ++i)
          if ((mask >> i) & 1) in_p[can_be_empty[i]] = true;
        std::vector<MsoPtr> sub;
        for (int p = 0; p < s.arch.num_procs(); ++p) {
          if (in_p[p]) {
            sub.push_back(F::lnot(F::exists1("x", F::on_proc(s.arch.procs[p], "x"))));
          } else {
            std::vector<MsoPtr> opts_;
            for (int t = 0; t < T; ++t)
              if (s.trans[t].proc == p && s.trans[t].tgt == tup[p])
                opts_.push_back(F::in_set("x", xt(t)));
            sub.push_back(F::exists1(
                "x", F::big_and({F::on_proc(s.arch.procs[p], "x"), F::is_max("x"),
                                 F::big_or(opts_)})));
          }
        }
        cases.push_back(F::big_and(sub));
      }
    }
    conjuncts.push_back(F::big_or(cases));
  }

  MsoPtr body = MsoFormula::big_and(conjuncts);
  for (int t = T - 1; t >= 0; --t) body = MsoFormula::exists2(xt(t), body);
  return body;
}

// ---------------------------------------------------------------------------
// Phi_cbm

MsoPtr gen_phi_cbm_mso(const Architecture& arch) {
  using F = MsoFormula;
  std::vector<MsoPtr> cj;

  // -> edges stay within a process; no branching/merging; no self loop
  cj.push_back(F::forall1(
      "x", F::forall1("y", F::implies(F::succ("x", "y"),
                                      F::big_and({F::lnot(F::eq("x", "y")),
                                                  F::big_or([&] {
                                                    std::vector<MsoPtr> same;
                                                    for (const auto& p : arch.procs)
                                                      same.push_back(F::land(
                                                          F::on_proc(p, "x"),
                                                          F::on_proc(p, "y")));
                                                    return same;
                                                  }())})))));
  cj.push_back(F::forall1(
      "x", F::forall1("y", F::forall1("z", F::implies(F::land(F::succ("x", "y"),
                                                              F::succ("x", "z")),
                                                      F::eq("y", "z"))))));
  cj.push_back(F::forall1(
      "x", F::forall1("y", F::forall1("z", F::implies(F::land(F::succ("y", "x"),
                                                              F::succ("z", "x")),
                                                      F::eq("y", "z"))))));

  // same process => connected by ->* one way or the other (single chain)
  {
    // reach(x,y) via closed sets over -> only
    auto reach = [&](const std::string& x, const std::string& y) {
      MsoPtr closed = F::forall1(
          "__z", F::forall1("__z2", F::implies(F::land(F::in_set("__z", "__C"),
                                                       F::succ("__z", "__z2")),
                                               F::in_set("__z2", "__C"))));
      return F::forall2("__C",
                        F::implies(F::land(F::in_set(x, "__C"), closed), F::in_set(y, "__C")));
    };
    std::vector<MsoPtr> same;
    for (const auto& p : arch.procs)
      same.push_back(F::land(F::on_proc(p, "x"), F::on_proc(p, "y")));
    cj.push_back(F::forall1(
        "x", F::forall1("y", F::implies(F::big_or(same),
                                        F::lor(reach("x", "y"), reach("y", "x"))))));
  }

  // disjointness
  cj.push_back(F::forall1(
      "x", F::forall1("y", F::forall1("z", F::implies(F::land(F::match("", "x", "y")
                                                              ,
                                                              F::match("", "x", "z")),
                                                      F::eq("y", "z"))))));
  cj.push_back(F::forall1(
      "x", F::forall1("y", F::forall1("z", F::implies(F::land(F::match("", "y", "x"),
                                                              F::match("", "z", "x")),
                                                      F::eq("y", "z"))))));
  cj.push_back(F::lnot(F::exists1(
      "x", F::exists1("y", F::exists1("z", F::land(F::match("", "y", "x"),
                                                   F::match("", "x", "z")))))));
  // an edge carries exactly one ds label
  for (int d = 0; d < arch.num_ds(); ++d)
    for (int d2 = d + 1; d2 < arch.num_ds(); ++d2)
      cj.push_back(F::lnot(F::exists1(
          "x", F::exists1("y", F::land(F::match(arch.ds[d].name, "x", "y"),
                                       F::match(arch.ds[d2].name, "x", "y"))))));

  // acyclicity: no edge closing a <=-cycle
  cj.push_back(F::lnot(F::exists1(
      "x", F::exists1("y", F::land(F::lor(F::succ("x", "y"), F::match("", "x", "y")),
                                   F::le("y", "x"))))));

  // writer/reader
  for (const auto& d : arch.ds) {
    cj.push_back(F::forall1(
        "x", F::forall1("y", F::implies(F::match(d.name, "x", "y"),
                                        F::land(F::on_proc(arch.procs[d.writer], "x"),
                                                F::on_proc(arch.procs[d.reader], "y"))))));
  }

  // lifo / fifo; x < y  =  x <= y and x != y
  auto lt = [&](const std::string& x, const std::string& y) {
    return F::land(F::le(x, y), F::lnot(F::eq(x, y)));
  };
  for (const auto& d : arch.ds) {
    if (d.kind == DsKind::Stack) {
      cj.push_back(F::forall1(
          "e1", F::forall1(
                    "f1", F::forall1(
                              "e2", F::forall1(
                                        "f2", F::implies(
                                                  F::big_and({F::match(d.name, "e1", "f1"),
                                                              F::match(d.name, "e2", "f2"),
                                                              lt("e1", "e2"), lt("e2", "f1")}),
                                                  lt("f2", "f1")))))));
    } else if (d.kind == DsKind::Queue) {
      cj.push_back(F::forall1(
          "e1", F::forall1(
                    "f1", F::forall1(
                              "e2", F::forall1(
                                        "f2", F::implies(
                                                  F::big_and({F::match(d.name, "e1", "f1"),
                                                              F::match(d.name, "e2", "f2"),
                                                              lt("e1", "e2")}),
                                                  lt("f1", "f2")))))));
    }
  }

  return MsoFormula::big_and(cj);
}

std::string mso_to_text(const MsoPtr& f) {
  using K = MsoFormula::Kind;
  std::ostringstream o;
  switch (f->kind) {
    case K::Letter: o << "(label " << f->name << " " << f->var1 << ")"; break;
    case K::OnProc: o << "(on " << f->name << " " << f->var1 << ")"; break;
    case K::Eq: o << "(eq " << f->var1 << " " << f->var2 << ")"; break;
    case K::Match:
      o << "(match " << (f->name.empty() ? "*" : f->name) << " " << f->var1 << " "
        << f->var2 << ")";
      break;
    case K::Succ: o << "(succ " << f->var1 << " " << f->var2 << ")"; break;
    case K::InSet: o << "(in " << f->var1 << " " << f->var2 << ")"; break;
    case K::Or: o << "(or " << mso_to_text(f->lhs) << " " << mso_to_text(f->rhs) << ")"; break;
    case K::Not: o << "(not " << mso_to_text(f->lhs) << ")"; break;
    case K::Exists1: o << "(exists1 " << f->var1 << " " << mso_to_text(f->lhs) << ")"; break;
    case K::Exists2: o << "(exists2 " << f->var1 << " " << mso_to_text(f->lhs) << ")"; break;
  }
  return o.str();
}

}  // namespace stwmc
