#ifndef STWMC_NTA_HPP
#define STWMC_NTA_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stwmc/arch.hpp"
#include "stwmc/stt.hpp"

namespace stwmc {

// Ranked alphabet Lambda^k over (Sigma x Procs, {proc} u DS): leaves (i,a,p),
// unary Add/Forget, binary (+).
struct SttSymbol {
  enum class Kind { Leaf, Add, Forget, Oplus };
  Kind kind = Kind::Oplus;
  int i = 0, j = 0;
  std::string edge;            // Add
  std::string letter, proc;    // Leaf
  bool operator==(const SttSymbol&) const = default;
  auto operator<=>(const SttSymbol&) const = default;
  int arity() const {
    switch (kind) {
      case Kind::Leaf: return 0;
      case Kind::Add:
      case Kind::Forget: return 1;
      case Kind::Oplus: return 2;
    }
    return 0;
  }
  std::string str() const;
};

struct SttAlphabet {
  std::vector<SttSymbol> symbols;
  int find(const SttSymbol& s) const;               // -1 if absent
  int find_checked(const SttSymbol& s) const;       // throws UnknownSymbolError
  int size() const { return (int)symbols.size(); }
  bool operator==(const SttAlphabet&) const = default;

  // Full alphabet for k-STTs of CBMs over (arch, sigma). Edge labels are
  // {proc} plus the ds names; Add symbols carry i != j unless
  // include_same_color_adds is set.
  static SttAlphabet for_cbm(const Architecture& arch, const std::vector<std::string>& sigma,
                             int k, bool include_same_color_adds = false);
};

SttSymbol symbol_of_node(const Stt& node);

using StateId = uint32_t;

// Bottom-up nondeterministic tree automaton with lazily materialized states.
// Transition functions are total oracles (possibly returning empty sets).
class Nta {
 public:
  explicit Nta(SttAlphabet alphabet) : alphabet_(std::move(alphabet)) {}
  virtual ~Nta() = default;
  const SttAlphabet& alphabet() const { return alphabet_; }

  virtual std::vector<StateId> leaf_states(int sym) = 0;
  virtual std::vector<StateId> unary_steps(StateId s, int sym) = 0;
  virtual std::vector<StateId> binary_steps(StateId left, StateId right, int sym) = 0;
  virtual bool accepting(StateId s) = 0;
  virtual size_t discovered_states() const = 0;
  virtual std::string state_name(StateId s) const { return std::to_string(s); }

  // Active-color bitmask when the automaton tracks one (bit i-1 for color i).
  // Two states can only combine under (+) when their masks are disjoint; 0 is
  // the safe "unknown" default. Purely a pruning hint for emptiness search.
  virtual uint32_t color_mask(StateId) const { return 0; }

 private:
  SttAlphabet alphabet_;
};

// L(a) n L(b) via the lazy product construction; AlphabetMismatchError when
// the alphabets differ.
std::unique_ptr<Nta> nta_intersect(std::shared_ptr<Nta> a, std::shared_ptr<Nta> b);

struct NonemptyOptions {
  bool stop_at_first_witness = true;  // false: saturate (exact emptiness + counts)
  uint64_t max_discovered = 50'000'000;
};

struct NonemptyResult {
  std::optional<SttPtr> witness;  // minimal-height, deterministic
  uint64_t states_discovered = 0;
  bool saturated = false;         // worklist ran dry
};

NonemptyResult nta_nonempty(Nta& a, const NonemptyOptions& opts = {});

// Bottom-up state-set evaluation; UnknownSymbolError on foreign symbols.
bool nta_member(Nta& a, const SttPtr& t);
std::vector<StateId> nta_run_states(Nta& a, const SttPtr& t);

// Saturates the reachable state space (no acceptance early-exit).
uint64_t nta_count_reachable(Nta& a, uint64_t max_discovered = 50'000'000);

}  // namespace stwmc

#endif
