#ifndef STWMC_MSO_HPP
#define STWMC_MSO_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "stwmc/cbm.hpp"
#include "stwmc/cpds.hpp"

namespace stwmc {

// MSO(A, Sigma) over CBMs / labeled graphs. Atoms: a(x), p(x), x=y, x |>d y,
// x -> y, x in X; connectives or/not; quantifiers exists1/exists2. Everything
// else is a derived macro built by the helpers below.
struct MsoFormula;
using MsoPtr = std::shared_ptr<const MsoFormula>;

struct MsoFormula {
  enum class Kind { Letter, OnProc, Eq, Match, Succ, InSet, Or, Not, Exists1, Exists2 };
  Kind kind;
  std::string name;        // letter/proc name for atoms, ds name for Match ("" = any ds)
  std::string var1, var2;  // variables
  MsoPtr lhs, rhs;

  static MsoPtr letter(std::string a, std::string x);
  static MsoPtr on_proc(std::string p, std::string x);
  static MsoPtr eq(std::string x, std::string y);
  static MsoPtr match(std::string d, std::string x, std::string y);  // d == "" for |> any
  static MsoPtr succ(std::string x, std::string y);
  static MsoPtr in_set(std::string x, std::string X);
  static MsoPtr lor(MsoPtr a, MsoPtr b);
  static MsoPtr lnot(MsoPtr a);
  static MsoPtr exists1(std::string x, MsoPtr body);
  static MsoPtr exists2(std::string X, MsoPtr body);

  // macros
  static MsoPtr land(MsoPtr a, MsoPtr b);
  static MsoPtr implies(MsoPtr a, MsoPtr b);
  static MsoPtr forall1(std::string x, MsoPtr body);
  static MsoPtr forall2(std::string X, MsoPtr body);
  static MsoPtr big_or(std::vector<MsoPtr> xs);   // empty = false
  static MsoPtr big_and(std::vector<MsoPtr> xs);  // empty = true
  static MsoPtr ltrue();
  static MsoPtr lfalse();
  static MsoPtr is_write(std::string x);
  static MsoPtr is_read(std::string x);
  static MsoPtr is_local(std::string x);
  static MsoPtr is_min(std::string x);   // no ->-predecessor
  static MsoPtr is_max(std::string x);   // no ->-successor
  // x <= y via the closed-set definition (second-order)
  static MsoPtr le(std::string x, std::string y);
};

struct Interpretation {
  std::map<std::string, EventId> first;
  std::map<std::string, std::set<EventId>> second;
};

struct MsoEvalOptions {
  int max_events_for_exists2 = 16;
};

// Standard inductive semantics; exists2 enumerates all 2^|E| subsets, guarded.
// Throws UnboundVariableError / LimitExceededError.
bool eval_mso(const Cbm& m, const MsoPtr& phi, const Interpretation& interp = {},
              const MsoEvalOptions& opts = {});

// Same semantics over a raw labeled graph (used by gen_phi_cbm_mso tests):
// -> is the proc-edge relation, |>d the ds edges; no chain structure assumed.
bool eval_mso_graph(const LabeledGraph& g, const MsoPtr& phi,
                    const MsoEvalOptions& opts = {});

// The sentence Phi_S with L(Phi_S) = L(S): existential transition-set cover
// with partition, letter/process consistency, adjacency, value consistency,
// initial and final constraints.
MsoPtr gen_phi_S(const Cpds& s);

// Sentence true on a labeled graph iff validate_cbm succeeds.
MsoPtr gen_phi_cbm_mso(const Architecture& arch);

std::string mso_to_text(const MsoPtr& f);

}  // namespace stwmc

#endif
