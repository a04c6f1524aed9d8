#ifndef STWMC_STW_GAME_HPP
#define STWMC_STW_GAME_HPP

#include <optional>
#include <vector>

#include "stwmc/stt.hpp"

namespace stwmc {

struct StwWitness {
  SttPtr stt;
  // leaf order -> original vertex id; eval_stt(stt) reproduces the input graph
  // under this renaming.
  std::vector<int> leaf_vertex;
};

// Decides whether the decomposition game is winnable with at most k colors and
// returns a witness k-STT if so. Search over marked positions, memoized on
// (vertex set, marked set); edges between marked vertices are always removed
// eagerly, which never hurts. Guard: at most 10 vertices.
std::optional<StwWitness> stw_oracle(const LabeledGraph& g, int k);

// Least k such that a k-STT denotes g: stw(g) = special_tree_width(g) + 1.
int min_stt_colors(const LabeledGraph& g);

}  // namespace stwmc

#endif
