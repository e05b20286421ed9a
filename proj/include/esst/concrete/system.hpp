#pragma once

#include <unordered_map>
#include <vector>

#include "esst/frontend/blocks.hpp"
#include "esst/frontend/cfg.hpp"
#include "esst/sched/scheduler.hpp"

namespace esst::concrete {

using frontend::Cfg;
using frontend::Loc;
using logic::VarId;

/// A parsed program together with everything derived from it once.
struct System {
  frontend::ThreadedProgram program;
  std::vector<Cfg> cfgs;
  sched::Topology topo;
  std::vector<VarId> vars;  // globals first, then locals thread by thread
  std::unordered_map<VarId, int> slot;
  std::vector<frontend::AtomicBlock> blocks;
  std::map<frontend::BlockId, frontend::AccessSummary> summaries;

  static System build(frontend::ThreadedProgram p);
  static System from_source(std::string_view text);
  static System from_file(const std::string& path);

  std::size_t num_threads() const { return cfgs.size(); }
  int slot_of(VarId v) const;
  bool is_global(VarId v) const { return program.is_global(v); }
};

}  // namespace esst::concrete
