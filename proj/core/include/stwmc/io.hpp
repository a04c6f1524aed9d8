#ifndef STWMC_IO_HPP
#define STWMC_IO_HPP

#include <iosfwd>
#include <string>

#include "stwmc/cbm.hpp"
#include "stwmc/cpds.hpp"

namespace stwmc {

// .arch: lines `proc <name>`, `stack <d> <p>`, `queue <d> <writer> <reader>`,
// `bag <d> <writer> <reader>`; `#` starts a comment.
Architecture parse_arch(std::istream& in);
Architecture load_arch(const std::string& path);
std::string arch_to_text(const Architecture& a);

// .cpds: `arch <path>`, `alphabet ...`, `values ...`, `locs ...`, `init <loc>`,
// `final p=l q=m [; ...]`, `trans <p> <src> <letter> [!<d> <v> | ?<d> <v>] <tgt>`.
// Relative arch paths resolve against the .cpds file's directory.
Cpds load_cpds(const std::string& path);
Cpds parse_cpds(std::istream& in, const std::string& base_dir);
std::string cpds_to_text(const Cpds& s, const std::string& arch_path);

// .cbm: `arch <path>`, `events <p>: a b ...`, `match <d>: <p>.<i> <q>.<j>`.
// The raw graph is returned; validation is the caller's decision.
struct CbmFile {
  Architecture arch;
  LabeledGraph graph;
};
CbmFile load_cbm_file(const std::string& path);
CbmFile parse_cbm_file(std::istream& in, const std::string& base_dir);
std::string cbm_to_text(const Cbm& m, const std::string& arch_path);

// DOT rendering: one row per process, left-to-right, match edges labeled by ds.
std::string cbm_to_dot(const Cbm& m);
std::string graph_to_dot(const LabeledGraph& g);

}  // namespace stwmc

#endif
