#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "esst/frontend/program.hpp"
#include "esst/logic/operation.hpp"

namespace esst::sched {

enum class Status : std::uint8_t { Running, Runnable, Waiting, Cooperated, Joining, Terminated };

struct ThreadStatus {
  Status kind = Status::Runnable;
  int arg = -1;  // event index for Waiting, thread index for Joining
  bool operator==(const ThreadStatus&) const = default;
};

/// Names used to resolve primitive arguments and to print states.
struct Topology {
  std::vector<std::string> threads;
  std::vector<std::string> events;

  static Topology of(const frontend::ThreadedProgram& p);
  int event_index(const std::string& e) const;
  int thread_index(const std::string& t) const;
};

/// Explicit FairThreads scheduler state. `visited` marks threads whose turn
/// in the current round-robin pass has come (run or skipped).
struct SchedulerState {
  std::vector<ThreadStatus> status;
  std::vector<bool> notified;
  std::vector<int> committed_order;
  std::vector<bool> visited;

  int running() const;  // -1 if none
  bool is_committed(int t) const;
  bool operator==(const SchedulerState&) const = default;
  std::size_t hash() const;
  std::string to_string(const Topology& topo) const;
};

struct SchedulerStateHash {
  std::size_t operator()(const SchedulerState& s) const { return s.hash(); }
};

class SchedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

SchedulerState initial_state(const Topology& topo);

struct SexecResult {
  long value = 0;
  SchedulerState state;
};

/// Executes a primitive for the running caller.
SexecResult sexec(const SchedulerState& s, const logic::PrimCall& call, int caller, const Topology& topo);

SchedulerState on_thread_exit(const SchedulerState& s, int t);

struct SchedChoice {
  int thread;
  SchedulerState state;
  bool end_of_instant = false;  // this choice went through an end-of-instant
  bool commits = false;         // chosen thread was not yet in the round-robin order
};

/// Round-robin with lazy order commitment: the next committed thread whose
/// turn has not come in this pass, else every runnable thread not yet
/// committed. A pass with nothing left restarts while anything is runnable;
/// otherwise cooperated threads are woken by an end-of-instant.
std::vector<SchedChoice> sched(const SchedulerState& s);

std::string status_name(const ThreadStatus& st, const Topology& topo);

}  // namespace esst::sched
