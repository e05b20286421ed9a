#include "esst/frontend/blocks.hpp"

#include <deque>

namespace esst::frontend {

std::string to_string(const BlockId& b) {
  return "T" + std::to_string(b.thread) + "@l" + std::to_string(b.entry);
}

std::vector<AtomicBlock> identify_atomic_blocks(const Cfg& cfg, int thread_index) {
  std::set<Loc> entries{cfg.entry};
  for (const auto& e : cfg.edges)
    if (is_blocking(e.op)) entries.insert(e.dst);
  std::vector<AtomicBlock> out;
  for (Loc start : entries) {
    AtomicBlock b;
    b.id = BlockId{thread_index, start};
    b.owner = cfg.thread;
    std::set<Loc> seen{start};
    std::deque<Loc> q{start};
    while (!q.empty()) {
      const Loc l = q.front();
      q.pop_front();
      if (cfg.outgoing(l).empty()) b.exits.insert(l);
      for (int ei : cfg.outgoing(l)) {
        const Edge& e = cfg.edges[static_cast<std::size_t>(ei)];
        b.member_edges.insert(ei);
        if (is_blocking(e.op)) {
          b.exits.insert(e.dst);
        } else if (seen.insert(e.dst).second) {
          q.push_back(e.dst);
        }
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::map<BlockId, AccessSummary> compute_access_summary(const ThreadedProgram& p, const std::vector<Cfg>& cfgs,
                                                        const std::vector<AtomicBlock>& blocks) {
  std::map<BlockId, AccessSummary> out;
  for (const auto& b : blocks) {
    AccessSummary s;
    const Cfg& cfg = cfgs[static_cast<std::size_t>(b.id.thread)];
    for (int ei : b.member_edges) {
      const Edge& e = cfg.edges[static_cast<std::size_t>(ei)];
      for (VarId v : logic::vars_read(e.op))
        if (p.is_global(v)) s.globals_read.insert(v);
      for (VarId v : logic::vars_written(e.op))
        if (p.is_global(v)) s.globals_written.insert(v);
      if (const auto* c = std::get_if<logic::PrimCall>(&e.op)) {
        if (c->name == "generate") s.events_generated.insert(c->arg);
        if (c->name == "await") s.events_awaited.insert(c->arg);
        if (c->name == "join") s.threads_joined.insert(c->arg);
      }
    }
    s.reaches_exit = b.exits.count(cfg.exit) > 0;
    out.emplace(b.id, std::move(s));
  }
  return out;
}

}  // namespace esst::frontend
