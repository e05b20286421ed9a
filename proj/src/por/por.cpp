#include "esst/por/por.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace esst::por {

using sched::Status;

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::None: return "none";
    case Mode::Persistent: return "persistent";
    case Mode::Sleep: return "sleep";
    case Mode::Both: return "both";
  }
  return "?";
}

Mode parse_mode(const std::string& s) {
  if (s == "none") return Mode::None;
  if (s == "persistent") return Mode::Persistent;
  if (s == "sleep") return Mode::Sleep;
  if (s == "both") return Mode::Both;
  throw std::invalid_argument("unknown POR mode '" + s + "'");
}

namespace {

void merge_into(AccessSummary& dst, const AccessSummary& src) {
  dst.globals_read.insert(src.globals_read.begin(), src.globals_read.end());
  dst.globals_written.insert(src.globals_written.begin(), src.globals_written.end());
  dst.events_generated.insert(src.events_generated.begin(), src.events_generated.end());
  dst.events_awaited.insert(src.events_awaited.begin(), src.events_awaited.end());
  dst.threads_joined.insert(src.threads_joined.begin(), src.threads_joined.end());
  dst.reaches_exit = dst.reaches_exit || src.reaches_exit;
}

template <typename A, typename B>
bool intersects(const A& a, const B& b) {
  for (const auto& x : a)
    if (b.count(x)) return true;
  return false;
}

}  // namespace

std::map<BlockId, AccessSummary> transition_summaries(const concrete::System& sys) {
  // Successor blocks reachable without yielding. A block entered through
  // await/join also counts that call: resuming the thread depends on it.
  std::map<BlockId, std::vector<BlockId>> next;
  std::map<BlockId, AccessSummary> base = sys.summaries;
  for (const auto& b : sys.blocks) {
    const auto& cfg = sys.cfgs[static_cast<std::size_t>(b.id.thread)];
    for (int ei : b.member_edges) {
      const auto& e = cfg.edges[static_cast<std::size_t>(ei)];
      const auto* p = std::get_if<logic::PrimCall>(&e.op);
      if (!p || (p->name != "await" && p->name != "join")) continue;
      const BlockId dst{b.id.thread, e.dst};
      next[b.id].push_back(dst);
      if (p->name == "await") base[dst].events_awaited.insert(p->arg);
      else base[dst].threads_joined.insert(p->arg);
    }
  }
  std::map<BlockId, AccessSummary> out;
  for (const auto& b : sys.blocks) {
    AccessSummary acc;
    std::set<BlockId> seen{b.id};
    std::deque<BlockId> q{b.id};
    while (!q.empty()) {
      const BlockId cur = q.front();
      q.pop_front();
      merge_into(acc, base.at(cur));
      for (const auto& n : next[cur])
        if (seen.insert(n).second) q.push_back(n);
    }
    out.emplace(b.id, std::move(acc));
  }
  return out;
}

DependenceRelation::DependenceRelation(std::map<BlockId, AccessSummary> summaries,
                                       std::vector<std::string> thread_names, std::vector<std::string> event_names)
    : summaries_(std::move(summaries)),
      thread_names_(std::move(thread_names)),
      event_names_(std::move(event_names)) {}

DependenceRelation DependenceRelation::of(const concrete::System& sys) {
  return DependenceRelation(transition_summaries(sys), sys.topo.threads, sys.topo.events);
}

const AccessSummary& DependenceRelation::summary(const BlockId& b) const {
  auto it = summaries_.find(b);
  if (it == summaries_.end()) throw std::out_of_range("no summary for block " + frontend::to_string(b));
  return it->second;
}

bool DependenceRelation::dependent(const BlockId& a, const BlockId& b) const {
  if (a == b) return true;
  const auto& sa = summary(a);
  const auto& sb = summary(b);
  if (intersects(sa.globals_written, sb.globals_read) || intersects(sa.globals_written, sb.globals_written) ||
      intersects(sb.globals_written, sa.globals_read))
    return true;
  if (intersects(sa.events_generated, sb.events_awaited) || intersects(sb.events_generated, sa.events_awaited))
    return true;
  auto joins = [&](const AccessSummary& j, const BlockId& other, const AccessSummary& so) {
    if (!so.reaches_exit) return false;
    if (other.thread < 0 || static_cast<std::size_t>(other.thread) >= thread_names_.size()) return false;
    return j.threads_joined.count(thread_names_[static_cast<std::size_t>(other.thread)]) > 0;
  };
  return joins(sa, b, sb) || joins(sb, a, sa);
}

std::vector<std::pair<BlockId, BlockId>> DependenceRelation::pairs() const {
  std::vector<std::pair<BlockId, BlockId>> out;
  for (auto i = summaries_.begin(); i != summaries_.end(); ++i)
    for (auto j = i; j != summaries_.end(); ++j)
      if (dependent(i->first, j->first)) out.emplace_back(i->first, j->first);
  return out;
}

DependenceRelation valid_dependence(const std::map<BlockId, AccessSummary>& summaries,
                                    const std::vector<std::string>& thread_names,
                                    const std::vector<std::string>& event_names) {
  return DependenceRelation(summaries, thread_names, event_names);
}

std::vector<BlockId> current_blocks(const sched::SchedulerState& s, const std::vector<Loc>& locs) {
  std::vector<BlockId> out;
  for (std::size_t t = 0; t < locs.size(); ++t)
    if (s.status[t].kind != Status::Terminated) out.push_back(BlockId{static_cast<int>(t), locs[t]});
  return out;
}

BlockSet necessary_enabling_set(const BlockId& block, const BlockSet& enabled, const sched::SchedulerState& s,
                                const DependenceRelation& d) {
  if (enabled.count(block)) throw std::invalid_argument("necessary_enabling_set: block is enabled");
  BlockSet out;
  const auto& st = s.status.at(static_cast<std::size_t>(block.thread));
  if (st.kind == Status::Waiting) {
    const std::string& ev = d.event_name(st.arg);
    for (const auto& e : enabled)
      if (d.summary(e).events_generated.count(ev)) out.insert(e);
  } else if (st.kind == Status::Joining) {
    for (const auto& e : enabled)
      if (e.thread == st.arg && d.summary(e).reaches_exit) out.insert(e);
  }
  return out;
}

PersistentChoice persistent(const sched::SchedulerState& s, const std::vector<Loc>& locs,
                            const std::vector<sched::SchedChoice>& choices, const DependenceRelation& d) {
  PersistentChoice pc;
  if (choices.empty()) return pc;
  BlockSet enabled;
  for (const auto& c : choices) enabled.insert(BlockId{c.thread, locs[static_cast<std::size_t>(c.thread)]});
  // Seed: first chosen thread in round-robin order, else lowest index.
  std::size_t seed = 0;
  std::size_t best = SIZE_MAX;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const auto& order = s.committed_order;
    const auto it = std::find(order.begin(), order.end(), choices[i].thread);
    const std::size_t rank = it != order.end() ? static_cast<std::size_t>(it - order.begin())
                                               : order.size() + static_cast<std::size_t>(choices[i].thread);
    if (rank < best) {
      best = rank;
      seed = i;
    }
  }
  const auto universe = current_blocks(s, locs);
  BlockSet b{BlockId{choices[seed].thread, locs[static_cast<std::size_t>(choices[seed].thread)]}};
  std::deque<BlockId> work(b.begin(), b.end());
  while (!work.empty()) {
    const BlockId cur = work.front();
    work.pop_front();
    BlockSet add;
    if (enabled.count(cur)) {
      for (const auto& u : universe)
        if (d.dependent(cur, u)) add.insert(u);
    } else {
      add = necessary_enabling_set(cur, enabled, s, d);
    }
    for (const auto& a : add)
      if (b.insert(a).second) work.push_back(a);
  }
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const BlockId id{choices[i].thread, locs[static_cast<std::size_t>(choices[i].thread)]};
    if (b.count(id)) {
      pc.chosen.push_back(i);
      pc.blocks.insert(id);
    }
  }
  return pc;
}

SleepResult sleep(const BlockSet& z0, const std::vector<BlockId>& candidates, const DependenceRelation& d) {
  SleepResult r;
  BlockSet z = z0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const BlockId& a = candidates[i];
    if (z0.count(a)) continue;
    BlockSet next;
    for (const auto& beta : z)
      if (!d.dependent(a, beta)) next.insert(beta);
    r.reduced.push_back(i);
    r.next_sleep.push_back(std::move(next));
    z.insert(a);
  }
  return r;
}

}  // namespace esst::por
