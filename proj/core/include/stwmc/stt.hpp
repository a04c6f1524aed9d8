#ifndef STWMC_STT_HPP
#define STWMC_STT_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stwmc/cbm.hpp"

namespace stwmc {

// Special tree terms over (Sigma x Procs, {proc} u DS):
//   (i,a,p) leaf | Add_{i,j}^gamma t | Forget_i t | Rename_{i,j} t | t (+) t
// Rename is redundant and eliminated before automata see a term.
struct Stt;
using SttPtr = std::shared_ptr<const Stt>;

struct Stt {
  enum class Kind { Leaf, Add, Forget, Rename, Oplus };
  Kind kind;
  int i = 0, j = 0;
  std::string edge;    // "proc" or ds name, Add only
  std::string letter;  // Leaf only
  std::string proc;    // Leaf only
  SttPtr left, right;

  static SttPtr leaf(int i, std::string a, std::string p);
  static SttPtr add(int i, int j, std::string edge, SttPtr t);
  static SttPtr forget(int i, SttPtr t);
  static SttPtr rename(int i, int j, SttPtr t);
  static SttPtr oplus(SttPtr l, SttPtr r);

  int num_nodes() const;
  int num_leaves() const;
  int height() const;
  int max_color() const;
};

struct ColoredGraph {
  LabeledGraph graph;
  std::map<int, int> chi;  // color -> vertex (partial injective)
};

// Exact algebra semantics. Vertices are numbered by leaf order (left to
// right). Add on missing colors is a no-op; (+) with overlapping active colors
// throws InvalidSttError with the preorder index of the offending node.
ColoredGraph eval_stt(const SttPtr& t);

// True iff every node is well-formed and each (+) joins terms with disjoint
// active color sets, colors within [1..k].
bool check_valid_stt(const SttPtr& t, int k);

// Semantics-preserving removal of Rename nodes.
SttPtr eliminate_rename(const SttPtr& t);

// Active colors after evaluating t (domain of chi), without building the graph.
std::vector<int> active_colors(const SttPtr& t);

std::string stt_to_text(const SttPtr& t);
SttPtr parse_stt(const std::string& text);
std::string stt_to_dot(const SttPtr& t);

}  // namespace stwmc

#endif
