#ifndef STWMC_PDL_TA_HPP
#define STWMC_PDL_TA_HPP

#include <memory>

#include "stwmc/nta.hpp"
#include "stwmc/pdl.hpp"

namespace stwmc {

// Tree-level formulas reuse the PDL types with atomic programs "d0"/"d1"
// (left/right child) and atomic propositions describing node symbols:
//   "oplus" | "forget:<i>" | "add:<i>:<j>:<edge>" | "color:<i>"
// plus the source propositions (letters and process names, true at leaves).

// Rewrites a CBM-level LCPDL sentence to an equivalent tree-level sentence
// over valid k-STTs: edge atoms become color-to-color walks through the
// matching Add node, E is relativized to leaves. Intersection paths raise
// DialectUnsupportedError.
PdlSentencePtr interpret_pdl(const PdlSentencePtr& phi, int k);

// Encoded symbol string as used in tree propositions / tree graphs.
std::string tree_symbol_string(const SttSymbol& s);
bool tree_ap_holds(const std::string& symbol_string, const std::string& ap);

// The term as a graph: one vertex per node (preorder), edge sets d0/d1,
// vertex letter = encoded symbol. For the direct-evaluation oracle.
LabeledGraph stt_to_tree_graph(const SttPtr& t);
ApSemantics tree_ap_semantics();

bool eval_tree_sentence(const SttPtr& t, const PdlSentencePtr& tree_phi);

// NTA over the given alphabet accepting exactly the trees satisfying the
// tree-level LCPDL sentence. Built from walking-automaton summaries: per path
// formula the automaton tracks the in-subtree loop relation and the
// reach-final set, plus deterministic claim classes for diamonds and loops;
// modal truth values are guessed per node and enforced by the classes.
std::shared_ptr<Nta> pdl_tree_to_nta(const PdlSentencePtr& tree_phi,
                                     const SttAlphabet& alphabet);

// interpret_pdl + pdl_tree_to_nta: for every valid k-STT of a CBM, membership
// coincides with the CBM-level semantics of phi.
std::shared_ptr<Nta> build_A_phi(const PdlSentencePtr& phi, const SttAlphabet& alphabet,
                                 int k);

}  // namespace stwmc

#endif
