#ifndef STWMC_CBM_HPP
#define STWMC_CBM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stwmc/arch.hpp"

namespace stwmc {

// Event identity is (process index, 1-based position in the process word).
struct EventId {
  int proc = -1;
  int pos = 0;
  bool operator==(const EventId&) const = default;
  auto operator<=>(const EventId&) const = default;
};

struct MatchEdge {
  int ds;      // index into arch.ds
  EventId w;   // write event, on Writer(ds)
  EventId r;   // read event, on Reader(ds)
  bool operator==(const MatchEdge&) const = default;
  auto operator<=>(const MatchEdge&) const = default;
};

// A concurrent behavior with matching: one word per process plus disjoint
// write-read edges per data structure, subject to the CBM axioms.
struct Cbm {
  Architecture arch;
  std::vector<std::vector<std::string>> words;  // words[p] = letters of process p
  std::vector<MatchEdge> matches;               // kept sorted for canonical identity

  int num_events() const;
  const std::string& letter(EventId e) const { return words[e.proc][e.pos - 1]; }
  bool empty() const { return num_events() == 0; }

  // Dense event numbering: events of p0 in order, then p1, ...
  int event_index(EventId e) const;
  EventId event_at(int idx) const;
  std::vector<EventId> all_events() const;

  const MatchEdge* match_from(EventId w) const;  // edge with this write, or null
  const MatchEdge* match_to(EventId r) const;    // edge with this read, or null

  void sort_matches();
  bool operator==(const Cbm&) const = default;
  auto operator<=>(const Cbm&) const = default;
};

// A raw vertex/edge-labeled graph over (Sigma x Procs, {proc} + DS). No axioms
// are assumed; validate_cbm decides whether it denotes a CBM.
struct LabeledGraph {
  struct Vertex {
    std::string letter;
    std::string proc;
    bool operator==(const Vertex&) const = default;
  };
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> proc_edges;
  std::map<std::string, std::vector<std::pair<int, int>>> ds_edges;

  int add_vertex(const std::string& letter, const std::string& proc);
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  bool operator==(const LabeledGraph&) const = default;
};

enum class AxiomKind {
  Labels,
  ProcessChain,
  Disjointness,
  Acyclicity,
  Lifo,
  Fifo,
  Writer,
  Reader,
};

const char* axiom_name(AxiomKind k);

struct ValidationResult {
  std::optional<Cbm> cbm;               // set iff the graph is a CBM
  std::optional<AxiomKind> violation;   // first violated axiom otherwise
  std::string detail;
  // When valid: vertex_event[v] is the event the graph vertex v was mapped to.
  std::vector<EventId> vertex_event;
  bool ok() const { return cbm.has_value(); }
};

// Checks the CBM axioms on g, in the order: labels, process-chain,
// disjointness, acyclicity, lifo, fifo, writer, reader.
ValidationResult validate_cbm(const LabeledGraph& g, const Architecture& arch);

LabeledGraph cbm_to_graph(const Cbm& m);

// Strict causal order < = (-> u |>)^+ as a dense boolean matrix:
// row e contains bit f iff e < f. Events in dense numbering.
struct CausalOrder {
  int n = 0;
  std::vector<uint64_t> bits;  // n rows of ceil(n/64) words
  int words_per_row() const { return (n + 63) / 64; }
  bool less(int e, int f) const {
    return (bits[e * words_per_row() + (f >> 6)] >> (f & 63)) & 1;
  }
};

// Computes < for a structurally well-formed CBM; returns nullopt on a cycle.
std::optional<CausalOrder> causal_order(const Cbm& m);

}  // namespace stwmc

#endif
