#pragma once

#include <map>
#include <set>
#include <vector>

#include "esst/concrete/system.hpp"
#include "esst/frontend/blocks.hpp"
#include "esst/sched/scheduler.hpp"

namespace esst::por {

using frontend::AccessSummary;
using frontend::BlockId;
using frontend::Loc;
using BlockSet = std::set<BlockId>;

enum class Mode { None, Persistent, Sleep, Both };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& s);  // throws std::invalid_argument

/// Summary of what running a block may do before the thread yields: the
/// block itself plus every block entered through an await/join exit (those
/// calls may return without yielding). Cooperate exits always yield.
std::map<BlockId, AccessSummary> transition_summaries(const concrete::System& sys);

/// Symmetric, reflexive dependence over blocks, decided from summaries:
/// a write to a global the other reads or writes, a generate of an event the
/// other awaits, or a join on the other's thread when the other may terminate.
class DependenceRelation {
 public:
  DependenceRelation() = default;
  DependenceRelation(std::map<BlockId, AccessSummary> summaries, std::vector<std::string> thread_names,
                     std::vector<std::string> event_names);

  static DependenceRelation of(const concrete::System& sys);

  bool dependent(const BlockId& a, const BlockId& b) const;
  const AccessSummary& summary(const BlockId& b) const;
  bool known(const BlockId& b) const { return summaries_.count(b) > 0; }
  std::vector<std::pair<BlockId, BlockId>> pairs() const;  // a <= b
  const std::string& event_name(int e) const { return event_names_.at(static_cast<std::size_t>(e)); }

 private:
  std::map<BlockId, AccessSummary> summaries_;
  std::vector<std::string> thread_names_;
  std::vector<std::string> event_names_;
};

DependenceRelation valid_dependence(const std::map<BlockId, AccessSummary>& summaries,
                                    const std::vector<std::string>& thread_names,
                                    const std::vector<std::string>& event_names);

/// Current block of every thread that is not terminated.
std::vector<BlockId> current_blocks(const sched::SchedulerState& s, const std::vector<Loc>& locs);

/// Enabled blocks that must run before the (disabled) block can run.
BlockSet necessary_enabling_set(const BlockId& block, const BlockSet& enabled, const sched::SchedulerState& s,
                                const DependenceRelation& d);

struct PersistentChoice {
  std::vector<std::size_t> chosen;  // indices into the scheduler choices, in order
  BlockSet blocks;                  // P
};

/// Persistent-set computation seeded with the enabled block whose thread
/// comes first in the round-robin order (lowest thread index otherwise).
PersistentChoice persistent(const sched::SchedulerState& s, const std::vector<Loc>& locs,
                            const std::vector<sched::SchedChoice>& choices, const DependenceRelation& d);

struct SleepResult {
  std::vector<std::size_t> reduced;  // indices into the candidate list
  std::vector<BlockSet> next_sleep;  // parallel to reduced
};

/// Sleep-set filtering of candidate blocks (given in exploration order).
SleepResult sleep(const BlockSet& z, const std::vector<BlockId>& candidates, const DependenceRelation& d);

}  // namespace esst::por
