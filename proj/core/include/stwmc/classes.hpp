#ifndef STWMC_CLASSES_HPP
#define STWMC_CLASSES_HPP

#include <optional>
#include <vector>

#include "stwmc/cbm.hpp"
#include "stwmc/cpds.hpp"
#include "stwmc/mso.hpp"
#include "stwmc/pdl.hpp"

namespace stwmc {

// Concrete underapproximation classes. Context/phase/scope assume multiply
// nested words (one process, stacks only); existential bounds assume a
// singleton alphabet without internal events.

// Greedy minimal split into maximal contexts (intervals accessing one stack).
// Returns the list of context boundaries as (first,last) 1-based positions.
std::vector<std::pair<int, int>> context_split(const Cbm& m);
std::vector<std::pair<int, int>> phase_split(const Cbm& m);

bool in_context_k(const Cbm& m, int k);
bool in_phase_k(const Cbm& m, int k);
bool in_scope_k(const Cbm& m, int k);

// Local existential bound: some linearization keeps at most k pending
// messages per data structure. Decided by acyclicity of < u ~>_k.
bool in_exist_k(const Cbm& m, int k);
// Global variant: at most k pending messages in total.
bool in_exist_k_global(const Cbm& m, int k);

// The ~>_k relation: (f, e) with f the i-th read and e the (i+k)-th write on
// some d, as dense event-index pairs.
std::vector<std::pair<int, int>> build_rightsquig(const Cbm& m, int k);

// Lexicographically least k-bounded linearization (local bound), if any.
std::optional<std::vector<EventId>> bounded_linearization(const Cbm& m, int k);
std::optional<std::vector<EventId>> bounded_linearization_global(const Cbm& m, int k);

// LCPDL class formulas, exactly the printed shapes. Context and phase use
// converse only (CPDL); scope and existential use Loop.
PdlSentencePtr gen_context_lcpdl(const Architecture& arch, int k);
PdlSentencePtr gen_phase_lcpdl(const Architecture& arch, int k);
PdlSentencePtr gen_scope_lcpdl(const Architecture& arch, int k);
PdlSentencePtr gen_existB_lcpdl(const Architecture& arch, int k);

// MSO versions for context and scope (cont_k built as printed).
MsoPtr gen_context_mso(const Architecture& arch, int k);
MsoPtr gen_scope_mso(const Architecture& arch, int k);

// CPDS generators: L = Context_k resp. Scope_k over MNW architectures.
Cpds gen_context_cpds(const Architecture& arch, const std::vector<std::string>& sigma, int k);
Cpds gen_scope_cpds(const Architecture& arch, const std::vector<std::string>& sigma, int k);

void require_mnw_arch(const Architecture& arch);      // 1 proc, stacks only
void require_existential_shape(const Cbm& m);         // singleton Sigma, no internal events

}  // namespace stwmc

#endif
