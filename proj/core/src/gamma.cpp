#include "stwmc/gamma.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "stwmc/error.hpp"

namespace stwmc {

GammaLetter GammaLetter::internal(std::string p, std::string a) {
  return GammaLetter{std::move(p), std::move(a), "", false, false};
}
GammaLetter GammaLetter::write(std::string p, std::string a, std::string d) {
  return GammaLetter{std::move(p), std::move(a), std::move(d), true, false};
}
GammaLetter GammaLetter::read(std::string p, std::string a, std::string d) {
  return GammaLetter{std::move(p), std::move(a), std::move(d), false, true};
}

std::string GammaLetter::str() const {
  std::string s = "(" + proc + "," + letter;
  if (is_write) s += "," + ds + "!";
  if (is_read) s += "," + ds + "?";
  return s + ")";
}

std::string gamma_word_str(const GammaWord& w) {
  std::string s;
  for (const auto& l : w) s += l.str();
  return s;
}

GammaWord parse_gamma_word(const std::string& text) {
  GammaWord w;
  size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && isspace((unsigned char)text[i])) ++i; };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') throw ParseError("expected '(' in gamma word");
    size_t close = text.find(')', i);
    if (close == std::string::npos) throw ParseError("unterminated gamma letter");
    std::string body = text.substr(i + 1, close - i - 1);
    std::vector<std::string> parts;
    std::stringstream ss(body);
    std::string part;
    while (std::getline(ss, part, ',')) parts.push_back(part);
    if (parts.size() == 2) {
      w.push_back(GammaLetter::internal(parts[0], parts[1]));
    } else if (parts.size() == 3 && !parts[2].empty()) {
      char tag = parts[2].back();
      std::string d = parts[2].substr(0, parts[2].size() - 1);
      if (tag == '!')
        w.push_back(GammaLetter::write(parts[0], parts[1], d));
      else if (tag == '?')
        w.push_back(GammaLetter::read(parts[0], parts[1], d));
      else
        throw ParseError("gamma letter must end in ! or ?: " + body);
    } else {
      throw ParseError("bad gamma letter: (" + body + ")");
    }
    i = close + 1;
    skip_ws();
  }
  return w;
}

GammaLetter gamma_of_event(const Cbm& m, EventId e) {
  if (const MatchEdge* edge = m.match_from(e))
    return GammaLetter::write(m.arch.procs[e.proc], m.letter(e), m.arch.ds[edge->ds].name);
  if (const MatchEdge* edge = m.match_to(e))
    return GammaLetter::read(m.arch.procs[e.proc], m.letter(e), m.arch.ds[edge->ds].name);
  return GammaLetter::internal(m.arch.procs[e.proc], m.letter(e));
}

namespace {

// Enumerates linear extensions of < by repeatedly picking a minimal event.
template <typename F>
void extensions_rec(const Cbm& m, const CausalOrder& ord, std::vector<int>& remaining,
                    std::vector<int>& prefix, const F& emit) {
  if (remaining.empty()) {
    emit(prefix);
    return;
  }
  for (size_t idx = 0; idx < remaining.size(); ++idx) {
    int e = remaining[idx];
    bool minimal = true;
    for (int f : remaining)
      if (f != e && ord.less(f, e)) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    std::vector<int> rest;
    rest.reserve(remaining.size() - 1);
    for (int f : remaining)
      if (f != e) rest.push_back(f);
    prefix.push_back(e);
    extensions_rec(m, ord, rest, prefix, emit);
    prefix.pop_back();
  }
}

}  // namespace

std::set<GammaWord> linearizations(const Cbm& m) {
  std::set<GammaWord> out;
  auto ord = causal_order(m);
  if (!ord) return out;
  std::vector<int> remaining(m.num_events());
  for (int i = 0; i < m.num_events(); ++i) remaining[i] = i;
  std::vector<int> prefix;
  extensions_rec(m, *ord, remaining, prefix, [&](const std::vector<int>& lin) {
    GammaWord w;
    w.reserve(lin.size());
    for (int idx : lin) w.push_back(gamma_of_event(m, m.event_at(idx)));
    out.insert(std::move(w));
  });
  return out;
}

long long count_linear_extensions(const Cbm& m) {
  long long count = 0;
  auto ord = causal_order(m);
  if (!ord) return 0;
  std::vector<int> remaining(m.num_events());
  for (int i = 0; i < m.num_events(); ++i) remaining[i] = i;
  std::vector<int> prefix;
  extensions_rec(m, *ord, remaining, prefix, [&](const std::vector<int>&) { ++count; });
  return count;
}

std::optional<Cbm> gamma_word_to_cbm(const Architecture& arch, const GammaWord& w) {
  Cbm m;
  m.arch = arch;
  m.words.resize(arch.num_procs());
  // Pending write events per data structure, in write order.
  std::vector<std::deque<EventId>> pending(arch.num_ds());
  for (const auto& l : w) {
    int p = arch.proc_index(l.proc);
    if (p < 0) throw UnknownSymbolError("unknown process in gamma word: " + l.proc);
    m.words[p].push_back(l.letter);
    EventId e{p, (int)m.words[p].size()};
    if (l.is_write || l.is_read) {
      int di = arch.ds_index(l.ds);
      if (di < 0) throw UnknownSymbolError("unknown data structure in gamma word: " + l.ds);
      const auto& d = arch.ds[di];
      if (l.is_write) {
        if (p != d.writer) return std::nullopt;
        pending[di].push_back(e);
      } else {
        if (p != d.reader) return std::nullopt;
        if (pending[di].empty()) return std::nullopt;  // unmatched read
        EventId we;
        switch (d.kind) {
          case DsKind::Stack:
            we = pending[di].back();
            pending[di].pop_back();
            break;
          case DsKind::Queue:
          case DsKind::Bag:  // bag resolved FIFO-deterministically
            we = pending[di].front();
            pending[di].pop_front();
            break;
        }
        m.matches.push_back(MatchEdge{di, we, e});
      }
    }
  }
  for (const auto& q : pending)
    if (!q.empty()) return std::nullopt;  // leftover unmatched writes
  m.sort_matches();
  // The reconstruction must really be a CBM with w among its linearizations;
  // the per-kind pops guarantee LIFO/FIFO, and acyclicity holds since every
  // edge goes forward in w.
  return m;
}

std::vector<GammaLetter> gamma_alphabet(const Architecture& arch,
                                        const std::vector<std::string>& sigma) {
  std::vector<GammaLetter> out;
  for (int p = 0; p < arch.num_procs(); ++p)
    for (const auto& a : sigma) out.push_back(GammaLetter::internal(arch.procs[p], a));
  for (const auto& d : arch.ds)
    for (const auto& a : sigma) {
      out.push_back(GammaLetter::write(arch.procs[d.writer], a, d.name));
      out.push_back(GammaLetter::read(arch.procs[d.reader], a, d.name));
    }
  return out;
}

}  // namespace stwmc
