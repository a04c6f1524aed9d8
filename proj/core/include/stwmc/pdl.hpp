#ifndef STWMC_PDL_HPP
#define STWMC_PDL_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "stwmc/cbm.hpp"
#include "stwmc/mso.hpp"

namespace stwmc {

// ICPDL(AP, Gamma) over labeled graphs. For CBMs, AP = Procs u Sigma and the
// atomic programs are {proc} u DS.
struct PdlState;
struct PdlPath;
using PdlStatePtr = std::shared_ptr<const PdlState>;
using PdlPathPtr = std::shared_ptr<const PdlPath>;

struct PdlState {
  enum class Kind { Ap, True, Or, Not, Dia, Loop };
  Kind kind;
  std::string ap;
  PdlStatePtr lhs, rhs;
  PdlPathPtr path;

  static PdlStatePtr ap_atom(std::string name);
  static PdlStatePtr ltrue();
  static PdlStatePtr lfalse();
  static PdlStatePtr lor(PdlStatePtr a, PdlStatePtr b);
  static PdlStatePtr land(PdlStatePtr a, PdlStatePtr b);
  static PdlStatePtr lnot(PdlStatePtr a);
  static PdlStatePtr implies(PdlStatePtr a, PdlStatePtr b);
  static PdlStatePtr dia(PdlPathPtr p, PdlStatePtr s);   // <pi> sigma
  static PdlStatePtr box(PdlPathPtr p, PdlStatePtr s);   // [pi] sigma
  static PdlStatePtr loop(PdlPathPtr p);                 // Loop<pi>
  static PdlStatePtr big_or(std::vector<PdlStatePtr> xs);
  static PdlStatePtr big_and(std::vector<PdlStatePtr> xs);
};

struct PdlPath {
  enum class Kind { Edge, Test, Alt, Cat, Star, Conv, Cap };
  Kind kind;
  std::string edge;  // "proc" or a ds name (atomic programs)
  PdlStatePtr test;
  std::vector<PdlPathPtr> parts;  // Alt/Cat/Cap n-ary; Star/Conv unary

  static PdlPathPtr edge_label(std::string gamma);
  static PdlPathPtr test_of(PdlStatePtr s);
  static PdlPathPtr alt(std::vector<PdlPathPtr> ps);
  static PdlPathPtr cat(std::vector<PdlPathPtr> ps);
  static PdlPathPtr star(PdlPathPtr p);
  static PdlPathPtr plus(PdlPathPtr p);                          // pi . pi*
  static PdlPathPtr conv(PdlPathPtr p);
  static PdlPathPtr cap(std::vector<PdlPathPtr> ps);
  static PdlPathPtr power(PdlPathPtr p, int n);                  // pi^n
  static PdlPathPtr power_lt(PdlPathPtr p, int n);               // sum pi^i, i<n
};

struct PdlSentence;
using PdlSentencePtr = std::shared_ptr<const PdlSentence>;
struct PdlSentence {
  enum class Kind { E, Or, Not };
  Kind kind;
  PdlStatePtr state;
  PdlSentencePtr lhs, rhs;

  static PdlSentencePtr exists(PdlStatePtr s);    // E sigma
  static PdlSentencePtr always(PdlStatePtr s);    // A sigma = !E !sigma
  static PdlSentencePtr lor(PdlSentencePtr a, PdlSentencePtr b);
  static PdlSentencePtr land(PdlSentencePtr a, PdlSentencePtr b);
  static PdlSentencePtr lnot(PdlSentencePtr a);
};

enum class PdlDialect { Pdl, Cpdl, Lcpdl, Icpdl };
const char* dialect_name(PdlDialect d);

// Smallest dialect admitting the constructors used: converse lifts Pdl to
// Cpdl, loop to Lcpdl, intersection to Icpdl.
PdlDialect dialect_of(const PdlSentencePtr& s);
PdlDialect dialect_of_state(const PdlStatePtr& s);

// Semantics of atomic propositions: defaults to CBM conventions (ap is a
// letter or a process name). Tree interpretations plug their own.
using ApSemantics = std::function<bool(const LabeledGraph&, int vertex, const std::string& ap)>;
ApSemantics cbm_ap_semantics();

// Relation as bitset rows over vertices.
struct VertexRelation {
  int n = 0;
  std::vector<uint64_t> bits;
  int wpr() const { return (n + 63) / 64; }
  bool at(int u, int v) const { return (bits[(size_t)u * wpr() + (v >> 6)] >> (v & 63)) & 1; }
  void set(int u, int v) { bits[(size_t)u * wpr() + (v >> 6)] |= (uint64_t)1 << (v & 63); }
  std::vector<std::pair<int, int>> pairs() const;
};

std::vector<int> eval_pdl_state(const LabeledGraph& g, const PdlStatePtr& s,
                                const ApSemantics& ap = cbm_ap_semantics());
VertexRelation eval_pdl_path(const LabeledGraph& g, const PdlPathPtr& p,
                             const ApSemantics& ap = cbm_ap_semantics());
bool eval_pdl_sentence(const LabeledGraph& g, const PdlSentencePtr& f,
                       const ApSemantics& ap = cbm_ap_semantics());
bool eval_pdl_sentence_cbm(const Cbm& m, const PdlSentencePtr& f);

// The eight LCPDL well-formedness sentences for labeled graphs over arch:
// LABELS, ORDER, PROCESS, WRITER, READER, DISJOINT, FIFO, LIFO. They hold on
// every CBM; ORDER..LIFO reject the corresponding axiom violations (the
// total-order-per-process condition is not LCPDL-expressible).
struct WellFormedness {
  std::vector<std::pair<std::string, PdlSentencePtr>> sentences;
};
WellFormedness gen_cbm_wellformed_lcpdl(const Architecture& arch,
                                        const std::vector<std::string>& sigma);

// ICPDL -> MSO translation; eval agreement is the tested contract.
MsoPtr pdl_to_mso(const PdlSentencePtr& f);

}  // namespace stwmc

#endif
