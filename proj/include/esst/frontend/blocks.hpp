#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "esst/frontend/cfg.hpp"

namespace esst::frontend {

/// A block is identified by its owner and entry location.
struct BlockId {
  int thread = 0;
  Loc entry = 0;
  auto operator<=>(const BlockId&) const = default;
};

std::string to_string(const BlockId& b);

struct AtomicBlock {
  BlockId id;
  std::string owner;
  std::set<int> member_edges;  // edge indices into the owner's CFG
  std::set<Loc> exits;         // targets of blocking edges, plus sinks reached
};

struct AccessSummary {
  std::set<VarId> globals_read;
  std::set<VarId> globals_written;
  std::set<std::string> events_generated;
  std::set<std::string> events_awaited;
  std::set<std::string> threads_joined;
  bool reaches_exit = false;  // a path of the block ends the thread
};

/// Blocks of one thread: entries are the CFG entry and the targets of
/// blocking primitive calls; members are the edges reachable from the entry
/// without passing through a blocking call (the blocking edge itself is the
/// last member on its path).
std::vector<AtomicBlock> identify_atomic_blocks(const Cfg& cfg, int thread_index);

std::map<BlockId, AccessSummary> compute_access_summary(const ThreadedProgram& p, const std::vector<Cfg>& cfgs,
                                                        const std::vector<AtomicBlock>& blocks);

}  // namespace esst::frontend
