#include "stwmc/enumerate.hpp"

#include <algorithm>

#include "stwmc/error.hpp"

namespace stwmc {

namespace {

// Role of an event in a candidate CBM: internal, write on ds, or read on ds.
struct Role {
  int kind = 0;  // 0 internal, 1 write, 2 read
  int ds = -1;
};

// All length vectors (|w_p|)_p with the given total.
void length_vectors(int procs, int total, std::vector<int>& cur,
                    const std::function<void(const std::vector<int>&)>& yield) {
  if ((int)cur.size() == procs) {
    if (total == 0) yield(cur);
    return;
  }
  for (int len = 0; len <= total; ++len) {
    cur.push_back(len);
    length_vectors(procs, total - len, cur, yield);
    cur.pop_back();
  }
}

struct ShapeEnum {
  const Architecture& arch;
  const std::vector<int>& lens;
  bool no_internal;
  std::vector<std::vector<Role>> roles;  // per proc
  std::vector<std::vector<MatchEdge>> match_sets;

  // Candidate roles for event (p, i): internal plus writes/reads allowed there.
  std::vector<Role> candidates(int p) const {
    std::vector<Role> out;
    if (!no_internal) out.push_back(Role{0, -1});
    for (int d = 0; d < arch.num_ds(); ++d) {
      if (arch.ds[d].writer == p) out.push_back(Role{1, d});
      if (arch.ds[d].reader == p) out.push_back(Role{2, d});
    }
    return out;
  }

  void run() {
    roles.assign(arch.num_procs(), {});
    rec_proc(0);
  }

  void rec_proc(int p) {
    if (p == arch.num_procs()) {
      derive_matches();
      return;
    }
    rec_event(p, 0);
  }

  void rec_event(int p, int i) {
    if (i == lens[p]) {
      rec_proc(p + 1);
      return;
    }
    for (const Role& r : candidates(p)) {
      roles[p].push_back(r);
      rec_event(p, i + 1);
      roles[p].pop_back();
    }
  }

  // Stacks/queues have a unique discipline-respecting matching per role
  // vector; bags need all bijections. Counting/acyclicity filtered later.
  void derive_matches() {
    std::vector<std::vector<MatchEdge>> forced(1);
    for (int d = 0; d < arch.num_ds(); ++d) {
      std::vector<EventId> writes, reads;
      for (int p = 0; p < arch.num_procs(); ++p)
        for (int i = 0; i < lens[p]; ++i) {
          if (roles[p][i].kind == 1 && roles[p][i].ds == d) writes.push_back({p, i + 1});
          if (roles[p][i].kind == 2 && roles[p][i].ds == d) reads.push_back({p, i + 1});
        }
      if (writes.size() != reads.size()) return;  // every role event is matched
      switch (arch.ds[d].kind) {
        case DsKind::Stack: {
          // unique non-crossing matching via stack replay on the single process
          std::vector<EventId> stack;
          std::vector<MatchEdge> edges;
          size_t wi = 0, ri = 0;
          // events of this ds in process order (writer == reader)
          std::vector<std::pair<EventId, bool>> seq;  // (event, is_write)
          while (wi < writes.size() || ri < reads.size()) {
            if (ri == reads.size() || (wi < writes.size() && writes[wi] < reads[ri]))
              seq.push_back({writes[wi++], true});
            else
              seq.push_back({reads[ri++], false});
          }
          for (auto& [e, w] : seq) {
            if (w) {
              stack.push_back(e);
            } else {
              if (stack.empty()) return;  // pop before any push
              edges.push_back(MatchEdge{d, stack.back(), e});
              stack.pop_back();
            }
          }
          if (!stack.empty()) return;
          for (auto& fs : forced) fs.insert(fs.end(), edges.begin(), edges.end());
          break;
        }
        case DsKind::Queue: {
          for (auto& fs : forced)
            for (size_t i = 0; i < writes.size(); ++i)
              fs.push_back(MatchEdge{d, writes[i], reads[i]});
          break;
        }
        case DsKind::Bag: {
          // all bijections writes -> reads
          std::vector<int> perm(writes.size());
          for (size_t i = 0; i < perm.size(); ++i) perm[i] = (int)i;
          std::vector<std::vector<MatchEdge>> expanded;
          do {
            for (const auto& fs : forced) {
              auto copy = fs;
              for (size_t i = 0; i < writes.size(); ++i)
                copy.push_back(MatchEdge{d, writes[i], reads[perm[i]]});
              expanded.push_back(std::move(copy));
            }
          } while (std::next_permutation(perm.begin(), perm.end()));
          if (writes.empty()) break;  // next_permutation ran once; forced unchanged
          forced = std::move(expanded);
          break;
        }
      }
    }
    for (auto& fs : forced) {
      std::sort(fs.begin(), fs.end());
      match_sets.push_back(std::move(fs));
    }
  }
};

}  // namespace

void enumerate_cbms(const Architecture& arch, const std::vector<std::string>& sigma,
                    int max_events, const std::function<void(const Cbm&)>& yield,
                    const EnumerateOptions& opts) {
  if (max_events > 12) throw LimitExceededError("enumerate_cbms capped at 12 events");
  std::vector<std::string> letters = sigma;
  std::sort(letters.begin(), letters.end());

  for (int n = 0; n <= max_events; ++n) {
    std::vector<int> cur;
    length_vectors(arch.num_procs(), n, cur, [&](const std::vector<int>& lens) {
      ShapeEnum se{arch, lens, opts.no_internal_events};
      se.run();
      std::sort(se.match_sets.begin(), se.match_sets.end());
      se.match_sets.erase(std::unique(se.match_sets.begin(), se.match_sets.end()),
                          se.match_sets.end());
      if (se.match_sets.empty()) return;

      if (letters.empty() && n > 0) return;
      // letter assignments in lexicographic order over the concatenated words
      std::vector<int> letter_idx(n, 0);
      while (true) {
        Cbm base;
        base.arch = arch;
        base.words.resize(arch.num_procs());
        int k = 0;
        for (int p = 0; p < arch.num_procs(); ++p)
          for (int i = 0; i < lens[p]; ++i) base.words[p].push_back(letters[letter_idx[k++]]);

        for (const auto& ms : se.match_sets) {
          Cbm m = base;
          m.matches = ms;
          if (causal_order(m).has_value()) yield(m);
        }

        int pos = n - 1;
        while (pos >= 0 && letter_idx[pos] == (int)letters.size() - 1) letter_idx[pos--] = 0;
        if (pos < 0) break;
        letter_idx[pos]++;
      }
    });
  }
}

std::vector<Cbm> enumerate_cbms_vec(const Architecture& arch,
                                    const std::vector<std::string>& sigma, int max_events,
                                    const EnumerateOptions& opts) {
  std::vector<Cbm> out;
  enumerate_cbms(arch, sigma, max_events, [&](const Cbm& m) { out.push_back(m); }, opts);
  return out;
}

}  // namespace stwmc
