#pragma once

#include <set>
#include <string>
#include <vector>

#include "esst/frontend/program.hpp"
#include "esst/logic/operation.hpp"

namespace esst::frontend {

using logic::Operation;
using Loc = int;

struct Edge {
  Loc src;
  Operation op;
  Loc dst;
};

struct Cfg {
  std::string thread;
  int num_locations = 0;
  Loc entry = 0;
  Loc exit = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out;  // edge indices per location, in edge order
  std::set<Loc> error_locations;

  bool is_error(Loc l) const { return error_locations.count(l) > 0; }
  const std::vector<int>& outgoing(Loc l) const { return out[static_cast<std::size_t>(l)]; }
};

/// One CFG per thread, in thread order. Guards are split into their DNF
/// cubes, one Assume edge per cube. Global initializers (default 0) are
/// assignments at the start of main; locals are zeroed at their declaration.
std::vector<Cfg> build_cfgs(const ThreadedProgram& p);

/// Structural checks: no edge into the entry, error locations are sinks, the
/// exit has no successors, every non-exit location is reachable.
std::vector<std::string> check_cfg(const Cfg& cfg);

bool is_blocking(const Operation& op);

std::string to_dot(const Cfg& cfg);

}  // namespace esst::frontend
