#include "stwmc/io.hpp"

#include <fstream>
#include <sstream>

#include "stwmc/error.hpp"

namespace stwmc {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string stripped = line.substr(0, line.find('#'));
  std::vector<std::string> toks;
  std::stringstream ss(stripped);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

std::string dirname_of(const std::string& path) {
  auto pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (!path.empty() && path[0] == '/') return path;
  return base_dir + "/" + path;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return in;
}

}  // namespace

Architecture parse_arch(std::istream& in) {
  Architecture a;
  std::string line;
  while (std::getline(in, line)) {
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks[0] == "proc" && toks.size() == 2) {
      a.add_proc(toks[1]);
    } else if (toks[0] == "stack" && toks.size() == 3) {
      a.add_ds(toks[1], DsKind::Stack, toks[2], toks[2]);
    } else if (toks[0] == "queue" && toks.size() == 4) {
      a.add_ds(toks[1], DsKind::Queue, toks[2], toks[3]);
    } else if (toks[0] == "bag" && toks.size() == 4) {
      a.add_ds(toks[1], DsKind::Bag, toks[2], toks[3]);
    } else {
      throw ParseError("bad .arch line: " + line);
    }
  }
  a.check();
  return a;
}

Architecture load_arch(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_arch(in);
}

std::string arch_to_text(const Architecture& a) {
  std::string out;
  for (const auto& p : a.procs) out += "proc " + p + "\n";
  for (const auto& d : a.ds) {
    if (d.kind == DsKind::Stack)
      out += "stack " + d.name + " " + a.procs[d.writer] + "\n";
    else
      out += std::string(ds_kind_name(d.kind)) + " " + d.name + " " + a.procs[d.writer] +
             " " + a.procs[d.reader] + "\n";
  }
  return out;
}

Cpds parse_cpds(std::istream& in, const std::string& base_dir) {
  Cpds s;
  bool have_arch = false;
  std::string line;
  std::vector<std::vector<std::string>> deferred_trans;
  std::vector<std::string> final_lines;
  while (std::getline(in, line)) {
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "arch" && toks.size() == 2) {
      s.arch = load_arch(resolve(base_dir, toks[1]));
      have_arch = true;
    } else if (key == "alphabet") {
      s.alphabet.assign(toks.begin() + 1, toks.end());
    } else if (key == "values") {
      s.values.assign(toks.begin() + 1, toks.end());
    } else if (key == "locs") {
      s.locs.assign(toks.begin() + 1, toks.end());
    } else if (key == "init" && toks.size() == 2) {
      s.init = -2;  // resolved after locs are known
      final_lines.push_back("init " + toks[1]);
    } else if (key == "final") {
      std::string rest;
      for (size_t i = 1; i < toks.size(); ++i) rest += toks[i] + " ";
      final_lines.push_back("final " + rest);
    } else if (key == "trans") {
      deferred_trans.push_back(toks);
    } else {
      throw ParseError("bad .cpds line: " + line);
    }
  }
  if (!have_arch) throw ParseError(".cpds file needs an arch line");

  for (const auto& fl : final_lines) {
    auto toks = tokenize(fl);
    if (toks[0] == "init") {
      s.init = s.loc_index(toks[1]);
      if (s.init < 0) throw ParseError("unknown initial location: " + toks[1]);
      continue;
    }
    // final p=l q=m ; p=l q=m ...
    std::vector<int> tuple(s.arch.num_procs(), -1);
    auto flush = [&] {
      for (int i = 0; i < (int)tuple.size(); ++i)
        if (tuple[i] < 0)
          throw ParseError("final tuple misses process " + s.arch.procs[i]);
      s.fin.push_back(tuple);
      tuple.assign(s.arch.num_procs(), -1);
    };
    for (size_t i = 1; i < toks.size(); ++i) {
      if (toks[i] == ";") {
        flush();
        continue;
      }
      auto eq = toks[i].find('=');
      if (eq == std::string::npos) throw ParseError("bad final entry: " + toks[i]);
      int p = s.arch.proc_index_checked(toks[i].substr(0, eq));
      int l = s.loc_index(toks[i].substr(eq + 1));
      if (l < 0) throw ParseError("unknown location in final: " + toks[i]);
      tuple[p] = l;
    }
    flush();
  }

  for (const auto& toks : deferred_trans) {
    // trans <p> <src> <letter> [!<d> <v> | ?<d> <v>] <tgt>
    if (toks.size() == 5) {
      s.add_internal(toks[1], toks[2], toks[3], toks[4]);
    } else if (toks.size() == 7) {
      const std::string& op = toks[4];
      if (op.empty() || (op[0] != '!' && op[0] != '?'))
        throw ParseError("bad trans op: " + op);
      std::string d = op.substr(1);
      if (op[0] == '!')
        s.add_write(toks[1], toks[2], toks[3], d, toks[5], toks[6]);
      else
        s.add_read(toks[1], toks[2], toks[3], d, toks[5], toks[6]);
    } else {
      std::string l;
      for (const auto& t : toks) l += t + " ";
      throw ParseError("bad trans line: " + l);
    }
  }
  s.check();
  return s;
}

Cpds load_cpds(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_cpds(in, dirname_of(path));
}

std::string cpds_to_text(const Cpds& s, const std::string& arch_path) {
  std::ostringstream out;
  out << "arch " << arch_path << "\n";
  out << "alphabet";
  for (const auto& a : s.alphabet) out << " " << a;
  out << "\nvalues";
  for (const auto& v : s.values) out << " " << v;
  out << "\nlocs";
  for (const auto& l : s.locs) out << " " << l;
  out << "\ninit " << s.locs[s.init] << "\n";
  if (!s.fin.empty()) {
    out << "final";
    for (size_t i = 0; i < s.fin.size(); ++i) {
      if (i) out << " ;";
      for (int p = 0; p < s.arch.num_procs(); ++p)
        out << " " << s.arch.procs[p] << "=" << s.locs[s.fin[i][p]];
    }
    out << "\n";
  }
  for (const auto& t : s.trans) {
    out << "trans " << s.arch.procs[t.proc] << " " << s.locs[t.src] << " " << t.letter;
    if (t.kind == Transition::Kind::Write)
      out << " !" << s.arch.ds[t.ds].name << " " << s.values[t.value];
    if (t.kind == Transition::Kind::Read)
      out << " ?" << s.arch.ds[t.ds].name << " " << s.values[t.value];
    out << " " << s.locs[t.tgt] << "\n";
  }
  return out.str();
}

CbmFile parse_cbm_file(std::istream& in, const std::string& base_dir) {
  CbmFile f;
  bool have_arch = false;
  std::string line;
  std::vector<std::vector<int>> vertex_of;  // per proc, per position
  struct PendingMatch {
    std::string ds, we, re;
  };
  std::vector<PendingMatch> pending;
  while (std::getline(in, line)) {
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks[0] == "arch" && toks.size() == 2) {
      f.arch = load_arch(resolve(base_dir, toks[1]));
      vertex_of.resize(f.arch.num_procs());
      have_arch = true;
    } else if (toks[0] == "events" && toks.size() >= 2) {
      if (!have_arch) throw ParseError("events before arch");
      std::string pname = toks[1];
      if (!pname.empty() && pname.back() == ':') pname.pop_back();
      int p = f.arch.proc_index_checked(pname);
      if (!vertex_of[p].empty()) throw ParseError("duplicate events line for " + pname);
      for (size_t i = 2; i < toks.size(); ++i) {
        int prev = vertex_of[p].empty() ? -1 : vertex_of[p].back();
        int v = f.graph.add_vertex(toks[i], pname);
        vertex_of[p].push_back(v);
        if (prev >= 0) f.graph.proc_edges.push_back({prev, v});
      }
    } else if (toks[0] == "match" && toks.size() == 4) {
      std::string d = toks[1];
      if (!d.empty() && d.back() == ':') d.pop_back();
      pending.push_back(PendingMatch{d, toks[2], toks[3]});
    } else {
      throw ParseError("bad .cbm line: " + line);
    }
  }
  if (!have_arch) throw ParseError(".cbm file needs an arch line");

  auto event_vertex = [&](const std::string& ref) {
    auto dot = ref.find('.');
    if (dot == std::string::npos) throw ParseError("bad event reference: " + ref);
    int p = f.arch.proc_index_checked(ref.substr(0, dot));
    int i = std::stoi(ref.substr(dot + 1));
    if (i < 1 || i > (int)vertex_of[p].size())
      throw ParseError("event out of range: " + ref);
    return vertex_of[p][i - 1];
  };
  for (const auto& pm : pending)
    f.graph.ds_edges[pm.ds].push_back({event_vertex(pm.we), event_vertex(pm.re)});
  return f;
}

CbmFile load_cbm_file(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_cbm_file(in, dirname_of(path));
}

std::string cbm_to_text(const Cbm& m, const std::string& arch_path) {
  std::ostringstream out;
  out << "arch " << arch_path << "\n";
  for (int p = 0; p < m.arch.num_procs(); ++p) {
    if (m.words[p].empty()) continue;
    out << "events " << m.arch.procs[p] << ":";
    for (const auto& a : m.words[p]) out << " " << a;
    out << "\n";
  }
  for (const auto& e : m.matches)
    out << "match " << m.arch.ds[e.ds].name << ": " << m.arch.procs[e.w.proc] << "."
        << e.w.pos << " " << m.arch.procs[e.r.proc] << "." << e.r.pos << "\n";
  return out.str();
}

std::string cbm_to_dot(const Cbm& m) {
  std::ostringstream out;
  out << "digraph cbm {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (int p = 0; p < m.arch.num_procs(); ++p) {
    out << "  subgraph cluster_" << p << " {\n    label=\"" << m.arch.procs[p]
        << "\";\n    rank=same;\n";
    for (int i = 1; i <= (int)m.words[p].size(); ++i)
      out << "    e" << p << "_" << i << " [label=\"" << m.words[p][i - 1] << "\"];\n";
    out << "  }\n";
  }
  for (int p = 0; p < m.arch.num_procs(); ++p)
    for (int i = 1; i + 1 <= (int)m.words[p].size(); ++i)
      out << "  e" << p << "_" << i << " -> e" << p << "_" << i + 1 << ";\n";
  for (const auto& e : m.matches)
    out << "  e" << e.w.proc << "_" << e.w.pos << " -> e" << e.r.proc << "_" << e.r.pos
        << " [label=\"" << m.arch.ds[e.ds].name << "\", style=dashed];\n";
  out << "}\n";
  return out.str();
}

std::string graph_to_dot(const LabeledGraph& g) {
  std::ostringstream out;
  out << "digraph g {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (int v = 0; v < g.num_vertices(); ++v)
    out << "  v" << v << " [label=\"" << g.vertices[v].letter << "@" << g.vertices[v].proc
        << "\"];\n";
  for (auto [u, v] : g.proc_edges) out << "  v" << u << " -> v" << v << ";\n";
  for (const auto& [d, edges] : g.ds_edges)
    for (auto [u, v] : edges)
      out << "  v" << u << " -> v" << v << " [label=\"" << d << "\", style=dashed];\n";
  out << "}\n";
  return out.str();
}

}  // namespace stwmc
