#include "stwmc/arch.hpp"

#include <set>

#include "stwmc/error.hpp"

namespace stwmc {

const char* ds_kind_name(DsKind k) {
  switch (k) {
    case DsKind::Stack: return "stack";
    case DsKind::Queue: return "queue";
    case DsKind::Bag: return "bag";
  }
  return "?";
}

int Architecture::proc_index(const std::string& name) const {
  for (int i = 0; i < (int)procs.size(); ++i)
    if (procs[i] == name) return i;
  return -1;
}

int Architecture::ds_index(const std::string& name) const {
  for (int i = 0; i < (int)ds.size(); ++i)
    if (ds[i].name == name) return i;
  return -1;
}

int Architecture::proc_index_checked(const std::string& name) const {
  int i = proc_index(name);
  if (i < 0) throw UnknownSymbolError("unknown process: " + name);
  return i;
}

int Architecture::ds_index_checked(const std::string& name) const {
  int i = ds_index(name);
  if (i < 0) throw UnknownSymbolError("unknown data structure: " + name);
  return i;
}

bool Architecture::has_bags() const {
  for (const auto& d : ds)
    if (d.kind == DsKind::Bag) return true;
  return false;
}

bool Architecture::stacks_only() const {
  for (const auto& d : ds)
    if (d.kind != DsKind::Stack) return false;
  return true;
}

void Architecture::add_proc(const std::string& name) { procs.push_back(name); }

void Architecture::add_ds(const std::string& name, DsKind kind, const std::string& writer,
                          const std::string& reader) {
  ds.push_back(Ds{name, kind, proc_index_checked(writer), proc_index_checked(reader)});
}

void Architecture::check() const {
  std::set<std::string> names(procs.begin(), procs.end());
  if (names.size() != procs.size()) throw ParseError("duplicate process name");
  for (const auto& d : ds) {
    if (names.count(d.name)) throw ParseError("data structure name clashes with process: " + d.name);
    if (!names.insert(d.name).second) throw ParseError("duplicate data structure name: " + d.name);
    if (d.kind == DsKind::Stack && d.writer != d.reader)
      throw ParseError("stack " + d.name + " must have writer == reader");
    if (d.writer < 0 || d.writer >= (int)procs.size() || d.reader < 0 ||
        d.reader >= (int)procs.size())
      throw ParseError("data structure " + d.name + " references unknown process");
  }
}

Architecture client_server_arch() {
  Architecture a;
  a.add_proc("p1");
  a.add_proc("p2");
  a.add_ds("c1", DsKind::Queue, "p1", "p2");
  a.add_ds("c2", DsKind::Queue, "p2", "p1");
  a.add_ds("s", DsKind::Stack, "p2", "p2");
  return a;
}

}  // namespace stwmc
