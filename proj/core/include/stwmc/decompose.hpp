#ifndef STWMC_DECOMPOSE_HPP
#define STWMC_DECOMPOSE_HPP

#include "stwmc/cbm.hpp"
#include "stwmc/stt.hpp"

namespace stwmc {

// Decomposition strategies producing STTs whose evaluation reproduces the
// input CBM (event-indexed). Colors are asserted against the declared bound;
// the empty CBM has no term and raises EmptyBehaviorError.

// Nested words (one process, one stack): 4 colors.
SttPtr decompose_nested_word(const Cbm& m);

// k-context-bounded multiply nested words: max(4, 2k) colors.
SttPtr decompose_context_bounded(const Cbm& m, int k);

// k-scope-bounded multiply nested words: max(4, 2k) colors.
SttPtr decompose_scope_bounded(const Cbm& m, int k);

// Existentially k-bounded behaviors: k*|DS| + |Procs| + 1 colors, following
// the lexicographically least k-bounded linearization.
SttPtr decompose_exist_bounded(const Cbm& m, int k);

// Color budget each strategy promises.
int nested_word_colors();
int context_bounded_colors(int k);
int scope_bounded_colors(int k);
int exist_bounded_colors(const Architecture& arch, int k);

// Checks eval_stt(t) against m (graph equality after canonical reordering).
bool stt_evaluates_to_cbm(const SttPtr& t, const Cbm& m);

}  // namespace stwmc

#endif
