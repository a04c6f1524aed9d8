#ifndef STWMC_ENUMERATE_HPP
#define STWMC_ENUMERATE_HPP

#include <functional>
#include <vector>

#include "stwmc/cbm.hpp"

namespace stwmc {

struct EnumerateOptions {
  // With true, only CBMs where every event is matched (no internal events).
  bool no_internal_events = false;
};

// Every valid CBM over (arch, sigma) with at most max_events events, each
// exactly once, in canonical order (word-length vector, then letters, then
// match sets). Throws LimitExceededError when max_events > 12.
void enumerate_cbms(const Architecture& arch, const std::vector<std::string>& sigma,
                    int max_events, const std::function<void(const Cbm&)>& yield,
                    const EnumerateOptions& opts = {});

std::vector<Cbm> enumerate_cbms_vec(const Architecture& arch,
                                    const std::vector<std::string>& sigma, int max_events,
                                    const EnumerateOptions& opts = {});

}  // namespace stwmc

#endif
