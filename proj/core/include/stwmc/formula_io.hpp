#ifndef STWMC_FORMULA_IO_HPP
#define STWMC_FORMULA_IO_HPP

#include <string>

#include "stwmc/mso.hpp"
#include "stwmc/pdl.hpp"

namespace stwmc {

// Parenthesized prefix syntax.
// MSO: (exists1 x f) (exists2 X f) (label a x) (on p x) (succ x y)
//      (match d x y) with d == * for any, (eq x y) (in x X) (or f f) (not f)
//      plus macros (and ..) (implies f f) (forall1 x f) (forall2 X f) true false.
// PDL sentences: (E f) (A f) (or ..) (and ..) (not f).
// PDL state: (ap a) (on p) (dia P f) (loop P) (or ..) (and ..) (not f)
//            (implies f f) (box P f) true false.
// PDL path: (edge proc) (edge d) (test f) (cat ..) (alt ..) (star P) (plus P)
//           (conv P) (cap ..) (pow P n) (powlt P n).
MsoPtr parse_mso(const std::string& text);
PdlSentencePtr parse_pdl_sentence(const std::string& text);
PdlStatePtr parse_pdl_state(const std::string& text);
PdlPathPtr parse_pdl_path(const std::string& text);

std::string pdl_sentence_to_text(const PdlSentencePtr& f);
std::string pdl_state_to_text(const PdlStatePtr& s);
std::string pdl_path_to_text(const PdlPathPtr& p);

}  // namespace stwmc

#endif
