#ifndef STWMC_CPDS_HPP
#define STWMC_CPDS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stwmc/cbm.hpp"
#include "stwmc/gamma.hpp"

namespace stwmc {

struct Transition {
  enum class Kind { Internal, Write, Read };
  Kind kind = Kind::Internal;
  int proc = -1;
  int src = -1;
  std::string letter;
  int ds = -1;        // Write/Read only
  int value = -1;     // index into Cpds::values, Write/Read only
  int tgt = -1;
  bool operator==(const Transition&) const = default;
  auto operator<=>(const Transition&) const = default;
};

// A system of concurrent processes with data structures. Write transitions
// exist only on Writer(d), reads only on Reader(d); every final tuple assigns
// one location to each process.
struct Cpds {
  Architecture arch;
  std::vector<std::string> alphabet;
  std::vector<std::string> values;
  std::vector<std::string> locs;
  int init = -1;
  std::vector<std::vector<int>> fin;        // tuples, one location per process
  std::vector<Transition> trans;

  int loc_index(const std::string& name) const;
  int value_index(const std::string& name) const;
  bool has_letter(const std::string& a) const;

  void add_internal(const std::string& p, const std::string& src, const std::string& a,
                    const std::string& tgt);
  void add_write(const std::string& p, const std::string& src, const std::string& a,
                 const std::string& d, const std::string& v, const std::string& tgt);
  void add_read(const std::string& p, const std::string& src, const std::string& a,
                const std::string& d, const std::string& v, const std::string& tgt);

  // Transition ids on process p with the given source and letter.
  std::vector<int> trans_at(int proc, int src, const std::string& letter) const;
  std::vector<int> trans_of_proc(int proc) const;

  void check() const;  // writer/reader discipline, tuple widths, name validity
};

// A run maps every event to a transition consistent with the location chaining
// per process and one exchanged value per match edge.
struct Run {
  std::map<EventId, int> trans_of_event;  // -> index into Cpds::trans
};

// Membership of w in Lop(S), decided on the infinite configuration automaton.
// The empty word is not in Lop(S). Throws UnknownSymbolError if w mentions
// undeclared processes, letters, or data structures.
bool op_accepts(const Cpds& s, const GammaWord& w);

// Backtracking search for an accepting run of s on m. Deterministic; memoized
// on (per-process progress, location tuple, pending write values).
std::optional<Run> find_run(const Cpds& s, const Cbm& m);

bool run_is_consistent(const Cpds& s, const Cbm& m, const Run& rho);

// The client-server system over client_server_arch(): the client sends a/b
// requests on c1; the server acknowledges on c2, possibly deferring requests
// on its stack s. Locs {0..4}, init 0, Fin {(0,0)}, Val {a,b}.
Cpds client_server_cpds();

}  // namespace stwmc

#endif
