#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stwmc/cpds.hpp"
#include "stwmc/enumerate.hpp"
#include "stwmc/error.hpp"
#include "stwmc/gamma.hpp"
#include "stwmc/io.hpp"

using namespace stwmc;

namespace {

// The ten-event client-server behavior: two requests a b, the server defers
// the first on its stack and serves the second immediately.
Cbm client_server_cbm() {
  Cbm m;
  m.arch = client_server_arch();
  m.words = {{"a", "b", "b", "a"}, {"a", "a", "b", "b", "a", "a"}};
  // c1: p1.1 |> p2.1, p1.2 |> p2.3 ; c2: p2.4 |> p1.3, p2.6 |> p1.4 ; s: p2.2 |> p2.5
  m.matches = {
      MatchEdge{0, {0, 1}, {1, 1}}, MatchEdge{0, {0, 2}, {1, 3}},
      MatchEdge{1, {1, 4}, {0, 3}}, MatchEdge{1, {1, 6}, {0, 4}},
      MatchEdge{2, {1, 2}, {1, 5}},
  };
  m.sort_matches();
  return m;
}

}  // namespace

TEST_CASE("single vertex graph validates") {
  Architecture a = client_server_arch();
  LabeledGraph g;
  g.add_vertex("a", "p1");
  auto r = validate_cbm(g, a);
  REQUIRE(r.ok());
  CHECK(r.cbm->num_events() == 1);
}

TEST_CASE("client-server example graph validates") {
  Cbm m = client_server_cbm();
  LabeledGraph g = cbm_to_graph(m);
  auto r = validate_cbm(g, m.arch);
  REQUIRE(r.ok());
  CHECK(*r.cbm == m);
}

TEST_CASE("crossing queue edges violate FIFO") {
  Architecture a = client_server_arch();
  LabeledGraph g;
  int e1 = g.add_vertex("a", "p1");
  int e2 = g.add_vertex("a", "p1");
  int f1 = g.add_vertex("a", "p2");
  int f2 = g.add_vertex("a", "p2");
  g.proc_edges = {{e1, e2}, {f2, f1}};
  g.ds_edges["c1"] = {{e1, f1}, {e2, f2}};
  auto r = validate_cbm(g, a);
  REQUIRE(!r.ok());
  CHECK(*r.violation == AxiomKind::Fifo);
}

TEST_CASE("validation names the first broken axiom") {
  Architecture a = client_server_arch();
  SUBCASE("unknown process") {
    LabeledGraph g;
    g.add_vertex("a", "nobody");
    CHECK(*validate_cbm(g, a).violation == AxiomKind::Labels);
  }
  SUBCASE("branching proc edge") {
    LabeledGraph g;
    int x = g.add_vertex("a", "p1");
    int y = g.add_vertex("a", "p1");
    int z = g.add_vertex("a", "p1");
    g.proc_edges = {{x, y}, {x, z}};
    CHECK(*validate_cbm(g, a).violation == AxiomKind::ProcessChain);
  }
  SUBCASE("shared match endpoint") {
    LabeledGraph g;
    int x = g.add_vertex("a", "p1");
    int y = g.add_vertex("a", "p2");
    int z = g.add_vertex("a", "p2");
    g.proc_edges = {{y, z}};
    g.ds_edges["c1"] = {{x, y}, {x, z}};
    CHECK(*validate_cbm(g, a).violation == AxiomKind::Disjointness);
  }
  SUBCASE("match against the word order is a cycle") {
    LabeledGraph g;
    int x = g.add_vertex("a", "p2");
    int y = g.add_vertex("a", "p2");
    g.proc_edges = {{x, y}};
    g.ds_edges["s"] = {{y, x}};
    CHECK(*validate_cbm(g, a).violation == AxiomKind::Acyclicity);
  }
  SUBCASE("wrong writer") {
    LabeledGraph g;
    int x = g.add_vertex("a", "p2");
    int y = g.add_vertex("a", "p1");
    g.ds_edges["c1"] = {{x, y}};
    CHECK(*validate_cbm(g, a).violation == AxiomKind::Writer);
  }
}

TEST_CASE("the client-server behavior has exactly 9 linearizations") {
  Cbm m = client_server_cbm();
  CHECK(count_linear_extensions(m) == 9);
  auto lins = linearizations(m);
  CHECK(lins.size() == 9);
  // the two words listed for Lin(M) are present
  GammaWord w1 = parse_gamma_word(
      "(p1,a,c1!)(p1,b,c1!)(p2,a,c1?)(p2,a,s!)(p2,b,c1?)(p2,b,c2!)(p2,a,s?)(p2,a,c2!)"
      "(p1,b,c2?)(p1,a,c2?)");
  GammaWord w2 = parse_gamma_word(
      "(p1,a,c1!)(p2,a,c1?)(p2,a,s!)(p1,b,c1!)(p2,b,c1?)(p2,b,c2!)(p2,a,s?)(p2,a,c2!)"
      "(p1,b,c2?)(p1,a,c2?)");
  CHECK(lins.count(w1) == 1);
  CHECK(lins.count(w2) == 1);
}

TEST_CASE("degenerate linearization counts") {
  Architecture a = client_server_arch();
  Cbm single;
  single.arch = a;
  single.words = {{"a"}, {}};
  CHECK(linearizations(single).size() == 1);

  Cbm indep;
  indep.arch = a;
  indep.words = {{"a"}, {"a"}};
  CHECK(linearizations(indep).size() == 2);
}

TEST_CASE("operational membership on the paper words") {
  Cpds s = client_server_cpds();
  CHECK(op_accepts(s, parse_gamma_word("(p1,a,c1!)(p2,a,c1?)(p2,a,c2!)(p1,a,c2?)")));
  CHECK(op_accepts(
      s, parse_gamma_word("(p1,a,c1!)(p1,b,c1!)(p2,a,c1?)(p2,a,s!)(p2,b,c1?)(p2,b,c2!)"
                          "(p1,b,c2?)(p2,a,s?)(p2,a,c2!)(p1,a,c2?)")));
  CHECK(!op_accepts(s, parse_gamma_word("(p1,a,c1!)")));
  CHECK(!op_accepts(s, GammaWord{}));  // the empty word is discarded
  CHECK_THROWS_AS(op_accepts(s, parse_gamma_word("(p9,a,c1!)")), UnknownSymbolError);
}

TEST_CASE("run search agrees with the depicted run") {
  Cpds s = client_server_cpds();
  Cbm m = client_server_cbm();
  auto run = find_run(s, m);
  REQUIRE(run.has_value());
  CHECK(run_is_consistent(s, m, *run));

  Cbm empty;
  empty.arch = s.arch;
  empty.words = {{}, {}};
  CHECK(find_run(s, empty).has_value());  // Fin contains (0,0)

  // two-event exchange that strands the server outside Fin
  Cbm bad;
  bad.arch = s.arch;
  bad.words = {{"a"}, {"a"}};
  bad.matches = {MatchEdge{0, {0, 1}, {1, 1}}};
  CHECK(!find_run(s, bad).has_value());
}

TEST_CASE("gamma word reconstruction") {
  Architecture bag_arch;
  bag_arch.add_proc("p");
  bag_arch.add_ds("d", DsKind::Bag, "p", "p");

  auto m = gamma_word_to_cbm(bag_arch, parse_gamma_word("(p,a,d!)(p,a,d?)"));
  REQUIRE(m.has_value());
  REQUIRE(m->matches.size() == 1);
  CHECK(m->matches[0].w == EventId{0, 1});
  CHECK(m->matches[0].r == EventId{0, 2});

  // two pending writes resolved FIFO
  auto m2 = gamma_word_to_cbm(bag_arch, parse_gamma_word("(p,a,d!)(p,a,d!)(p,a,d?)(p,a,d?)"));
  REQUIRE(m2.has_value());
  Cbm expect;
  expect.arch = bag_arch;
  expect.words = {{"a", "a", "a", "a"}};
  expect.matches = {MatchEdge{0, {0, 1}, {0, 3}}, MatchEdge{0, {0, 2}, {0, 4}}};
  expect.sort_matches();
  CHECK(*m2 == expect);

  CHECK(!gamma_word_to_cbm(bag_arch, parse_gamma_word("(p,a,d?)")).has_value());
  CHECK(!gamma_word_to_cbm(bag_arch, parse_gamma_word("(p,a,d!)")).has_value());
}

TEST_CASE("enumerate_cbms canonical smalls") {
  Architecture free1;
  free1.add_proc("p");
  auto out = enumerate_cbms_vec(free1, {"a"}, 2);
  CHECK(out.size() == 3);  // empty, a, aa

  Architecture st1;
  st1.add_proc("p");
  st1.add_ds("s", DsKind::Stack, "p", "p");
  auto out2 = enumerate_cbms_vec(st1, {"a"}, 2);
  CHECK(out2.size() == 4);  // empty, a, aa, aa with the match (1,2)

  CHECK_THROWS_AS(enumerate_cbms_vec(st1, {"a"}, 13), LimitExceededError);
}

TEST_CASE("every enumerated behavior round-trips through validation") {
  Architecture a = client_server_arch();
  int count = 0;
  enumerate_cbms(a, {"a", "b"}, 3, [&](const Cbm& m) {
    ++count;
    auto r = validate_cbm(cbm_to_graph(m), a);
    REQUIRE(r.ok());
    REQUIRE(*r.cbm == m);
  });
  CHECK(count > 0);
}

TEST_CASE("every linearization reconstructs its behavior") {
  Architecture a = client_server_arch();
  enumerate_cbms(a, {"a"}, 4, [&](const Cbm& m) {
    for (const auto& w : linearizations(m)) {
      auto back = gamma_word_to_cbm(a, w);
      REQUIRE(back.has_value());
      CHECK(*back == m);
    }
  });
}

TEST_CASE("causal order restricted to a process is the word order") {
  Architecture a = client_server_arch();
  enumerate_cbms(a, {"a"}, 4, [&](const Cbm& m) {
    auto ord = causal_order(m);
    REQUIRE(ord.has_value());
    for (int p = 0; p < a.num_procs(); ++p)
      for (int i = 1; i <= (int)m.words[p].size(); ++i)
        for (int j = 1; j <= (int)m.words[p].size(); ++j) {
          bool lt = ord->less(m.event_index({p, i}), m.event_index({p, j}));
          CHECK(lt == (i < j));
        }
  });
}

TEST_CASE("semantics coincidence on short words") {
  // Lin(L(S)) == Lop(S), checked on all words of length <= 4 over the gamma
  // alphabet (the acceptance suite pushes this to length 8)
  Cpds s = client_server_cpds();
  auto alphabet = gamma_alphabet(s.arch, s.alphabet);
  std::function<void(GammaWord&)> rec = [&](GammaWord& w) {
    if (!w.empty()) {
      bool op = op_accepts(s, w);
      auto m = gamma_word_to_cbm(s.arch, w);
      bool graph = m.has_value() && find_run(s, *m).has_value();
      REQUIRE(op == graph);
    }
    if (w.size() == 4) return;
    for (const auto& l : alphabet) {
      w.push_back(l);
      rec(w);
      w.pop_back();
    }
  };
  GammaWord w;
  rec(w);
}

TEST_CASE("file formats round-trip") {
  Cpds s = client_server_cpds();
  std::string arch_text = arch_to_text(s.arch);
  {
    std::stringstream in(arch_text);
    Architecture back = parse_arch(in);
    CHECK(back == s.arch);
  }
  Cbm m = client_server_cbm();
  std::string cbm_text = cbm_to_text(m, std::string(STWMC_TEST_DATA) + "/client_server.arch");
  {
    std::stringstream in(cbm_text);
    CbmFile f = parse_cbm_file(in, ".");
    auto r = validate_cbm(f.graph, f.arch);
    REQUIRE(r.ok());
    CHECK(*r.cbm == m);
  }
  std::string cpds_text = cpds_to_text(s, std::string(STWMC_TEST_DATA) + "/client_server.arch");
  {
    std::stringstream in(cpds_text);
    Cpds back = parse_cpds(in, ".");
    CHECK(back.locs == s.locs);
    CHECK(back.trans == s.trans);
    CHECK(back.fin == s.fin);
  }
  CHECK(cbm_to_dot(m).find("digraph") == 0);
}
