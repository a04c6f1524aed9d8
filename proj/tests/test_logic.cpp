#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "stwmc/enumerate.hpp"
#include "stwmc/error.hpp"
#include "stwmc/formula_io.hpp"
#include "stwmc/io.hpp"
#include "stwmc/mso.hpp"
#include "stwmc/pdl.hpp"

using namespace stwmc;
using F = MsoFormula;
using S = PdlState;
using P = PdlPath;

namespace {

Cbm client_server_cbm() {
  CbmFile f = load_cbm_file(std::string(STWMC_TEST_DATA) + "/client_server_example.cbm");
  auto r = validate_cbm(f.graph, f.arch);
  REQUIRE(r.ok());
  return *r.cbm;
}

// forall x (a(x) => exists y (x <= y and b(y)))
MsoPtr phi1_mso() {
  return F::forall1(
      "x", F::implies(F::letter("a", "x"),
                      F::exists1("y", F::land(F::le("x", "y"), F::letter("b", "y")))));
}

// req-ack(x,y) agreement on letters
MsoPtr phi2_mso() {
  auto req_ack = [&](const std::string& x, const std::string& y) {
    MsoPtr direct = F::exists1(
        "x1", F::exists1("x2", F::big_and({F::match("c1", x, "x1"), F::succ("x1", "x2"),
                                           F::match("c2", "x2", y)})));
    MsoPtr stacked = F::exists1(
        "x1",
        F::exists1(
            "x2", F::exists1(
                      "x3", F::exists1("x4", F::big_and({F::match("c1", x, "x1"),
                                                         F::succ("x1", "x2"),
                                                         F::match("s", "x2", "x3"),
                                                         F::succ("x3", "x4"),
                                                         F::match("c2", "x4", y)})))));
    return F::land(F::on_proc("p1", x), F::lor(direct, stacked));
  };
  return F::forall1(
      "x", F::forall1(
               "y", F::implies(req_ack("x", "y"),
                               F::lor(F::land(F::letter("a", "x"), F::letter("a", "y")),
                                      F::land(F::letter("b", "x"), F::letter("b", "y"))))));
}

PdlSentencePtr phi1_pdl(const Architecture& arch) {
  std::vector<PdlPathPtr> moves{P::edge_label("proc")};
  for (const auto& d : arch.ds) moves.push_back(P::edge_label(d.name));
  return PdlSentence::always(
      S::implies(S::ap_atom("a"), S::dia(P::star(P::alt(moves)), S::ap_atom("b"))));
}

}  // namespace

TEST_CASE("phi1 fails on the all-a exchange") {
  Architecture a = client_server_arch();
  Cbm m;
  m.arch = a;
  m.words = {{"a", "a"}, {"a", "a"}};
  m.matches = {MatchEdge{0, {0, 1}, {1, 1}}, MatchEdge{1, {1, 2}, {0, 2}}};
  m.sort_matches();
  REQUIRE(validate_cbm(cbm_to_graph(m), a).ok());
  CHECK(!eval_mso(m, phi1_mso()));
  CHECK(!eval_pdl_sentence_cbm(m, phi1_pdl(a)));
}

TEST_CASE("phi2 holds on the example behavior") {
  Cbm m = client_server_cbm();
  CHECK(eval_mso(m, phi2_mso()));
  CHECK(!eval_pdl_sentence_cbm(m, phi1_pdl(m.arch)));
}

TEST_CASE("exists1 on the empty behavior is false") {
  Cbm m;
  m.arch = client_server_arch();
  m.words = {{}, {}};
  CHECK(!eval_mso(m, F::exists1("x", F::ltrue())));
  CHECK(eval_mso(m, F::forall1("x", F::lfalse())));
}

TEST_CASE("unbound variables are reported") {
  Cbm m;
  m.arch = client_server_arch();
  m.words = {{"a"}, {}};
  CHECK_THROWS_AS(eval_mso(m, F::letter("a", "x")), UnboundVariableError);
}

TEST_CASE("pdl path relation basics") {
  Architecture one;
  one.add_proc("p");
  Cbm m;
  m.arch = one;
  m.words = {{"a", "b", "c"}};
  LabeledGraph g = cbm_to_graph(m);

  auto r = eval_pdl_path(g, P::edge_label("proc"));
  CHECK(r.pairs() == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  auto loop = eval_pdl_state(g, S::loop(P::edge_label("proc")));
  CHECK(loop.empty());
  auto star = eval_pdl_path(g, P::star(P::edge_label("proc")));
  CHECK(star.pairs().size() == 6);  // reflexive-transitive
}

TEST_CASE("path semantics algebra") {
  Cbm m = client_server_cbm();
  LabeledGraph g = cbm_to_graph(m);
  PdlPathPtr proc = P::edge_label("proc");
  PdlPathPtr match = P::alt({P::edge_label("c1"), P::edge_label("c2"), P::edge_label("s")});

  auto cat = eval_pdl_path(g, P::cat({proc, match}));
  auto a = eval_pdl_path(g, proc);
  auto b = eval_pdl_path(g, match);
  for (int u = 0; u < g.num_vertices(); ++u)
    for (int v = 0; v < g.num_vertices(); ++v) {
      bool expect = false;
      for (int w = 0; w < g.num_vertices(); ++w)
        if (a.at(u, w) && b.at(w, v)) expect = true;
      CHECK(cat.at(u, v) == expect);
    }

  auto conv = eval_pdl_path(g, P::conv(match));
  for (auto [u, v] : b.pairs()) CHECK(conv.at(v, u));

  auto capr = eval_pdl_path(g, P::cap({P::star(proc), P::cat({proc, proc})}));
  auto pp = eval_pdl_path(g, P::cat({proc, proc}));
  CHECK(capr.pairs() == pp.pairs());
}

TEST_CASE("well-formedness sentences hold on enumerated behaviors") {
  Architecture a = client_server_arch();
  WellFormedness wf = gen_cbm_wellformed_lcpdl(a, {"a", "b"});
  REQUIRE(wf.sentences.size() == 8);
  int checked = 0;
  enumerate_cbms(a, {"a", "b"}, 4, [&](const Cbm& m) {
    LabeledGraph g = cbm_to_graph(m);
    for (auto& [name, phi] : wf.sentences) {
      INFO(name);
      CHECK(eval_pdl_sentence(g, phi));
    }
    ++checked;
  });
  CHECK(checked > 100);
}

TEST_CASE("well-formedness sentences reject the named violations") {
  Architecture a = client_server_arch();
  WellFormedness wf = gen_cbm_wellformed_lcpdl(a, {"a", "b"});
  auto sentence = [&](const std::string& n) {
    for (auto& [name, phi] : wf.sentences)
      if (name == n) return phi;
    REQUIRE(false);
    return wf.sentences[0].second;
  };

  // crossing queue edges
  LabeledGraph cross;
  int e1 = cross.add_vertex("a", "p1");
  int e2 = cross.add_vertex("a", "p1");
  int f1 = cross.add_vertex("a", "p2");
  int f2 = cross.add_vertex("a", "p2");
  cross.proc_edges = {{e1, e2}, {f2, f1}};
  cross.ds_edges["c1"] = {{e1, f1}, {e2, f2}};
  CHECK(!eval_pdl_sentence(cross, sentence("FIFO")));

  // a 2-cycle of proc edges
  LabeledGraph cyc;
  int x = cyc.add_vertex("a", "p1");
  int y = cyc.add_vertex("a", "p1");
  cyc.proc_edges = {{x, y}, {y, x}};
  CHECK(!eval_pdl_sentence(cyc, sentence("ORDER")));

  // LIFO violation: crossing stack edges
  LabeledGraph lifo;
  int s1 = lifo.add_vertex("a", "p2");
  int s2 = lifo.add_vertex("a", "p2");
  int s3 = lifo.add_vertex("a", "p2");
  int s4 = lifo.add_vertex("a", "p2");
  lifo.proc_edges = {{s1, s2}, {s2, s3}, {s3, s4}};
  lifo.ds_edges["s"] = {{s1, s3}, {s2, s4}};
  CHECK(!eval_pdl_sentence(lifo, sentence("LIFO")));

  // wrong writer
  LabeledGraph ww;
  int w1 = ww.add_vertex("a", "p2");
  int w2 = ww.add_vertex("a", "p2");
  ww.proc_edges = {{w1, w2}};
  ww.ds_edges["c1"] = {{w1, w2}};
  CHECK(!eval_pdl_sentence(ww, sentence("WRITER")));
}

TEST_CASE("phi_cbm agrees with validation") {
  Architecture a = client_server_arch();
  MsoPtr phi = gen_phi_cbm_mso(a);

  CHECK(eval_mso_graph(cbm_to_graph(client_server_cbm()), phi));

  // two ->-chains on one process are not a single total order
  LabeledGraph two;
  int t1 = two.add_vertex("a", "p1");
  int t2 = two.add_vertex("a", "p1");
  int t3 = two.add_vertex("a", "p1");
  int t4 = two.add_vertex("a", "p1");
  two.proc_edges = {{t1, t2}, {t3, t4}};
  CHECK(!validate_cbm(two, a).ok());
  CHECK(!eval_mso_graph(two, phi));

  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    LabeledGraph g;
    int n = 1 + (int)(rng() % 5);
    for (int v = 0; v < n; ++v)
      g.add_vertex(rng() % 2 ? "a" : "b", rng() % 2 ? "p1" : "p2");
    int edges = (int)(rng() % 4);
    for (int e = 0; e < edges; ++e) {
      int u = (int)(rng() % n), v = (int)(rng() % n);
      switch (rng() % 4) {
        case 0: g.proc_edges.push_back({u, v}); break;
        case 1: g.ds_edges["c1"].push_back({u, v}); break;
        case 2: g.ds_edges["c2"].push_back({u, v}); break;
        default: g.ds_edges["s"].push_back({u, v}); break;
      }
    }
    bool valid = validate_cbm(g, a).ok();
    bool mso = eval_mso_graph(g, phi);
    INFO(trial);
    REQUIRE(valid == mso);
  }
}

TEST_CASE("phi_S equivalence with the run oracle on a small system") {
  Architecture one;
  one.add_proc("p");
  one.add_ds("s", DsKind::Stack, "p", "p");
  Cpds s;
  s.arch = one;
  s.alphabet = {"a", "b"};
  s.values = {"v"};
  s.locs = {"0", "1"};
  s.init = 0;
  s.fin = {{0}};
  s.add_internal("p", "0", "a", "1");
  s.add_internal("p", "1", "b", "0");
  s.add_write("p", "0", "a", "s", "v", "0");
  s.add_read("p", "0", "b", "s", "v", "0");
  s.check();
  MsoPtr phi = gen_phi_S(s);
  int n = 0;
  enumerate_cbms(one, {"a", "b"}, 4, [&](const Cbm& m) {
    bool run = find_run(s, m).has_value();
    bool mso = eval_mso(m, phi);
    INFO(cbm_to_text(m, "-"));
    REQUIRE(run == mso);
    ++n;
  });
  CHECK(n > 20);
}

TEST_CASE("phi_S of a final-less system is unsatisfiable") {
  Cpds s = client_server_cpds();
  s.fin.clear();
  MsoPtr phi = gen_phi_S(s);
  enumerate_cbms(s.arch, {"a", "b"}, 2, [&](const Cbm& m) { CHECK(!eval_mso(m, phi)); });
}

TEST_CASE("phi_S of the one-loop system holds everywhere") {
  Architecture one;
  one.add_proc("p");
  Cpds s;
  s.arch = one;
  s.alphabet = {"a"};
  s.values = {"v"};
  s.locs = {"0"};
  s.init = 0;
  s.fin = {{0}};
  s.add_internal("p", "0", "a", "0");
  MsoPtr phi = gen_phi_S(s);
  enumerate_cbms(one, {"a"}, 4, [&](const Cbm& m) { CHECK(eval_mso(m, phi)); });
}

TEST_CASE("phi_S on the client-server system") {
  Cpds s = client_server_cpds();
  MsoPtr phi = gen_phi_S(s);
  int n = 0;
  enumerate_cbms(s.arch, {"a", "b"}, 3, [&](const Cbm& m) {
    bool run = find_run(s, m).has_value();
    bool mso = eval_mso(m, phi);
    INFO(cbm_to_text(m, "-"));
    REQUIRE(run == mso);
    ++n;
  });
  CHECK(n > 100);
}

TEST_CASE("pdl_to_mso eval agreement") {
  Architecture a = client_server_arch();
  std::vector<PdlSentencePtr> corpus;
  corpus.push_back(phi1_pdl(a));
  corpus.push_back(PdlSentence::exists(S::ap_atom("a")));
  corpus.push_back(PdlSentence::exists(
      S::loop(P::cat({P::edge_label("c1"), P::conv(P::edge_label("c1"))}))));
  corpus.push_back(PdlSentence::always(
      S::implies(S::dia(P::edge_label("c1"), S::ltrue()), S::ap_atom("p1"))));
  corpus.push_back(PdlSentence::exists(
      S::dia(P::cap({P::star(P::edge_label("proc")), P::cat({P::edge_label("proc")})}),
             S::ap_atom("b"))));

  enumerate_cbms(a, {"a", "b"}, 3, [&](const Cbm& m) {
    for (const auto& phi : corpus) {
      bool direct = eval_pdl_sentence_cbm(m, phi);
      bool viamso = eval_mso(m, pdl_to_mso(phi));
      REQUIRE(direct == viamso);
    }
  });
}

TEST_CASE("formula files parse and print") {
  auto phi = parse_pdl_sentence("(A (implies (ap a) (dia (star (edge proc)) (ap b))))");
  CHECK(dialect_of(phi) == PdlDialect::Pdl);
  auto printed = pdl_sentence_to_text(phi);
  auto again = parse_pdl_sentence(printed);
  CHECK(pdl_sentence_to_text(again) == printed);

  auto loopy = parse_pdl_sentence("(not (E (loop (plus (edge proc)))))");
  CHECK(dialect_of(loopy) == PdlDialect::Lcpdl);
  auto cappy = parse_pdl_sentence("(E (dia (cap (edge proc) (edge proc)) true))");
  CHECK(dialect_of(cappy) == PdlDialect::Icpdl);
  auto convd = parse_pdl_sentence("(E (dia (conv (edge c1)) true))");
  CHECK(dialect_of(convd) == PdlDialect::Cpdl);

  auto mso = parse_mso("(forall1 x (implies (label a x) (exists1 y (succ x y))))");
  Cbm m;
  m.arch = client_server_arch();
  m.words = {{"a", "b"}, {}};
  CHECK(eval_mso(m, mso));
  CHECK_THROWS_AS(parse_mso("(bogus x)"), ParseError);
  CHECK_THROWS_AS(parse_pdl_sentence("(E (dia (edge proc)))"), ParseError);
}
