#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "esst/logic/formula.hpp"

namespace esst::frontend {

using logic::Formula;
using logic::LinearTerm;
using logic::VarId;

struct SourcePos {
  int line = 0;
  int col = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& msg);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

struct Stmt {
  enum class Kind { Assign, Havoc, Prim, Local, If, While, Assert };
  Kind kind;
  SourcePos pos;
  std::optional<VarId> target;   // Assign/Havoc/Local, optional for Prim
  LinearTerm value;              // Assign, Local initializer
  Formula cond;                  // If/While/Assert
  std::string prim;              // await/generate/cooperate/join
  std::string arg;
  std::vector<Stmt> then_body;   // If then, While body
  std::vector<Stmt> else_body;
};

struct Thread {
  std::string name;
  std::vector<VarId> locals;
  std::vector<Stmt> body;
};

struct ThreadedProgram {
  std::vector<std::string> globals;
  std::map<std::string, long> global_init;  // explicit initializers only
  std::vector<std::string> events;
  std::vector<Thread> threads;  // threads[0] is main

  std::vector<VarId> global_vars() const;
  bool is_global(VarId v) const;
  /// Index of the thread owning local v, or -1 for globals/unknown symbols.
  int owner_of(VarId v) const;
  int thread_index(const std::string& name) const;
  bool has_event(const std::string& name) const;
};

/// Locals are interned as "<thread>.<name>" so that local sets are disjoint.
std::string local_symbol(const std::string& thread, const std::string& name);

}  // namespace esst::frontend
