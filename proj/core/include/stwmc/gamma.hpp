#ifndef STWMC_GAMMA_HPP
#define STWMC_GAMMA_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stwmc/cbm.hpp"

namespace stwmc {

// One letter of the operational alphabet Gamma:
// (p, a) for internal events, (p, a, d!) / (p, a, d?) for write/read events.
struct GammaLetter {
  std::string proc;
  std::string letter;
  std::string ds;  // empty for internal
  bool is_write = false;
  bool is_read = false;

  static GammaLetter internal(std::string p, std::string a);
  static GammaLetter write(std::string p, std::string a, std::string d);
  static GammaLetter read(std::string p, std::string a, std::string d);

  std::string str() const;  // "(p,a)", "(p,a,d!)", "(p,a,d?)"
  bool operator==(const GammaLetter&) const = default;
  auto operator<=>(const GammaLetter&) const = default;
};

using GammaWord = std::vector<GammaLetter>;

std::string gamma_word_str(const GammaWord& w);
GammaWord parse_gamma_word(const std::string& text);  // "(p,a,d!)(q,b)..." format

// gamma_M(e) for an event of m.
GammaLetter gamma_of_event(const Cbm& m, EventId e);

// All words induced by linearizations of <, deduplicated as words.
std::set<GammaWord> linearizations(const Cbm& m);

// Number of linear extensions of < (not deduplicated as words).
long long count_linear_extensions(const Cbm& m);

// Reconstructs the CBM with w in Lin(M). Unique when the architecture has no
// bags; bag matches are resolved FIFO (i-th read of d matches i-th write of d).
// Returns nullopt when w is a linearization of no CBM (unmatched reads or
// leftover writes). Throws UnknownSymbolError on undeclared names.
std::optional<Cbm> gamma_word_to_cbm(const Architecture& arch, const GammaWord& w);

// All Gamma letters over (arch, sigma); used by exhaustive word enumeration.
std::vector<GammaLetter> gamma_alphabet(const Architecture& arch,
                                        const std::vector<std::string>& sigma);

}  // namespace stwmc

#endif
