#ifndef STWMC_SYNTHESIS_HPP
#define STWMC_SYNTHESIS_HPP

#include <functional>
#include <map>
#include <optional>

#include "stwmc/cpds.hpp"
#include "stwmc/pdl.hpp"

namespace stwmc {

// A CPDS with per-transition boolean outputs and, as a generalization kept
// first-class, a set of global initial tuples (product form, one option set
// per process). Every state-formula transducer accepts all CBMs, and on every
// accepting run the output of an event's transition says whether the event
// satisfies the formula.
struct Transducer {
  Cpds cpds;                              // cpds.init unused when init_sets set
  std::vector<std::vector<int>> init_sets;  // per process, allowed initial locs
  std::vector<int> output;                // per transition, 0/1

  bool uses_init_sets() const { return !init_sets.empty(); }
};

// Accepting-run search honoring init_sets; reuses the core search.
std::optional<Run> transducer_run(const Transducer& t, const Cbm& m);

Transducer atomic_letter_transducer(const Architecture& arch,
                                    const std::vector<std::string>& sigma,
                                    const std::string& letter);
Transducer atomic_proc_transducer(const Architecture& arch,
                                  const std::vector<std::string>& sigma,
                                  const std::string& proc);

Transducer transducer_not(const Transducer& t);
Transducer transducer_or(const Transducer& a, const Transducer& b);

// General product; outputs are paired via combine(out_a, out_b).
Transducer transducer_product(const Transducer& a, const Transducer& b,
                              const std::function<int(int, int)>& combine);

// Diamond: the backward-deterministic nu-set machine for <pi>true, composed
// over the test transducers of pi. Locations and values are the reachable
// nu-sets of the path automaton.
Transducer diamond_transducer(const Architecture& arch, const std::vector<std::string>& sigma,
                              const PdlPathPtr& path);

// Word automaton over the path alphabet Omega = tests u {proc} u DS, with
// states 0..n-1. Exposed for the backward-determinism test.
struct PathAutomaton {
  struct Tr {
    int from;
    int kind;  // 0 = test, 1 = proc edge, 2 = ds edge
    int test_id = -1;
    int edge_name = -1;  // into edge_names (kind 2)
    int to;
  };
  int states = 0;
  std::vector<Tr> trans;
  std::vector<int> initials, finals;
  std::vector<PdlStatePtr> tests;
  std::vector<std::string> edge_names;
};
PathAutomaton path_to_automaton(const PdlPathPtr& path);

// Full synthesis: PDL sentence (no converse, no loop, no intersection) to a
// CPDS with L(S) = L_cbm(Phi). DialectUnsupportedError otherwise.
Cpds synthesize(const Architecture& arch, const std::vector<std::string>& sigma,
                const PdlSentencePtr& phi);

// State-formula transducer (exposed for the output-correctness tests).
Transducer state_transducer(const Architecture& arch, const std::vector<std::string>& sigma,
                            const PdlStatePtr& s);

// Union/intersection of CPDS languages.
Cpds cpds_union(const Cpds& a, const Cpds& b);
Cpds cpds_intersection(const Cpds& a, const Cpds& b);

// Flattens a transducer's init-set generalization into a plain CPDS accepting
// the gamma=1-restricted language (used by the A-sigma case) or the full one.
Cpds restrict_to_output_one(const Transducer& t);  // A sigma
Cpds require_some_output_one(const Transducer& t); // E sigma

}  // namespace stwmc

#endif
