#ifndef STWMC_STT_AUTOMATA_HPP
#define STWMC_STT_AUTOMATA_HPP

#include <memory>

#include "stwmc/cpds.hpp"
#include "stwmc/nta.hpp"

namespace stwmc {

// Validity: state = active color set; at most 2^k states.
std::shared_ptr<Nta> build_A_valid(const SttAlphabet& alphabet, int k);

// Valid k-STTs with acyclic graph: state = (P, strict order on P).
std::shared_ptr<Nta> build_A_acyclic(const SttAlphabet& alphabet, int k);

// Local edge discipline: proc edges non-branching within a process, data
// edges disjoint and writer/reader-respecting. State = (P, pi, alpha, beta,
// gamma).
std::shared_ptr<Nta> build_A_edges(const SttAlphabet& alphabet, const Architecture& arch,
                                   int k);

struct CbmAutomatonOptions {
  // Replay keeps per-edge relations so that re-adding an existing edge is a
  // no-op; with false the paper's base automaton rejects duplicated edges.
  bool replay = true;
};

// Full CBM recognition: accepts tau iff tau is a valid k-STT and its
// evaluation is an uncolored CBM (split blocks resolved, LIFO/FIFO enforced).
std::shared_ptr<Nta> build_A_cbm(const SttAlphabet& alphabet, const Architecture& arch,
                                 int k, const CbmAutomatonOptions& opts = {});

// Run simulation for a CPDS: on terms accepted by the CBM automaton, accepts
// iff the denoted behavior is accepted by s.
std::shared_ptr<Nta> build_A_sys(const SttAlphabet& alphabet, const Cpds& s, int k);

}  // namespace stwmc

#endif
