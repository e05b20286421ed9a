#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "esst/concrete/system.hpp"

namespace esst::concrete {

struct Configuration {
  std::vector<Loc> locs;
  std::vector<long> values;  // indexed by System::slot
  sched::SchedulerState sched;

  bool operator==(const Configuration&) const = default;
  std::size_t hash() const;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const { return c.hash(); }
};

/// One transition of the interpreter. Thread steps follow a CFG edge (or, for
/// a running thread parked at its exit, a silent termination step); scheduler
/// steps hand control to `thread`.
struct Step {
  enum class Kind { Thread, Exit, Scheduler };
  Kind kind = Kind::Thread;
  int thread = -1;
  int edge = -1;                // index into the thread's CFG edges
  std::optional<long> havoc;    // value drawn for x := *
  bool end_of_instant = false;  // scheduler steps only

  bool operator==(const Step&) const = default;
};

struct Trace {
  std::vector<Configuration> configs;  // configs.size() == steps.size() + 1
  std::vector<Step> steps;
};

Configuration initial_configuration(const System& sys);

long eval_term(const System& sys, const Configuration& c, const logic::LinearTerm& t);
bool eval_formula(const System& sys, const Configuration& c, const logic::Formula& f);

/// Right-hand side of an edge: value plus scheduler state (primitives go
/// through sexec). Havoc edges need `havoc`.
std::pair<long, sched::SchedulerState> eval_rhs(const System& sys, const Configuration& c, int thread,
                                                 const logic::Operation& op, std::optional<long> havoc);

bool is_error(const System& sys, const Configuration& c);

/// Applies one step if enabled.
std::optional<Configuration> apply(const System& sys, const Configuration& c, const Step& s);

/// All successors in canonical order (edge order, then value order; or
/// scheduler choice order).
std::vector<std::pair<Step, Configuration>> step(const System& sys, const Configuration& c,
                                                 const std::vector<long>& value_set);

enum class ReachVerdict { Unsafe, NoErrorFound };

struct ReachResult {
  ReachVerdict verdict = ReachVerdict::NoErrorFound;
  Trace trace;
  std::size_t states = 0;
  bool depth_limited = false;
};

struct ReachOptions {
  std::vector<long> value_set{-1, 0, 1, 2};
  int depth = 500;
  std::size_t max_states = 2'000'000;
};

/// Breadth-first search with a visited set; throws logic::CapacityError once
/// max_states distinct configurations are exceeded.
ReachResult bounded_reach(const System& sys, const ReachOptions& opts = {});

/// Replays a step sequence from the initial configuration; nullopt when some
/// step is not enabled.
std::optional<Trace> replay(const System& sys, const std::vector<Step>& steps);

/// Checks that every consecutive pair of the trace is related by `apply`.
bool check_trace(const System& sys, const Trace& t);

std::string location_name(Loc l);
std::string render_text(const System& sys, const Trace& t);
std::string render_structured(const System& sys, const Trace& t);
/// Parses the structured rendering back into steps.
std::vector<Step> parse_structured(const System& sys, const std::string& text);

}  // namespace esst::concrete
