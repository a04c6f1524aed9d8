#ifndef STWMC_ARCH_HPP
#define STWMC_ARCH_HPP

#include <string>
#include <vector>

namespace stwmc {

enum class DsKind { Stack, Queue, Bag };

const char* ds_kind_name(DsKind k);

// Topology of a system: processes plus typed data structures, each with a
// designated writer and reader process. Stacks are self-loops: writer == reader.
struct Architecture {
  struct Ds {
    std::string name;
    DsKind kind;
    int writer;  // index into procs
    int reader;
    bool operator==(const Ds&) const = default;
  };

  std::vector<std::string> procs;
  std::vector<Ds> ds;

  int proc_index(const std::string& name) const;   // -1 if absent
  int ds_index(const std::string& name) const;     // -1 if absent
  int proc_index_checked(const std::string& name) const;  // throws UnknownSymbolError
  int ds_index_checked(const std::string& name) const;

  bool has_bags() const;
  bool stacks_only() const;
  int num_procs() const { return static_cast<int>(procs.size()); }
  int num_ds() const { return static_cast<int>(ds.size()); }

  void add_proc(const std::string& name);
  void add_ds(const std::string& name, DsKind kind, const std::string& writer,
              const std::string& reader);

  // Checks name uniqueness and the stack self-loop constraint.
  void check() const;

  bool operator==(const Architecture&) const = default;
};

// The two-process client-server architecture used throughout the test data:
// queues c1 (p1 -> p2) and c2 (p2 -> p1), stack s on p2.
Architecture client_server_arch();

}  // namespace stwmc

#endif
