#include "esst/sched/scheduler.hpp"

#include <algorithm>
#include <sstream>

namespace esst::sched {

Topology Topology::of(const frontend::ThreadedProgram& p) {
  Topology t;
  for (const auto& th : p.threads) t.threads.push_back(th.name);
  t.events = p.events;
  return t;
}

int Topology::event_index(const std::string& e) const {
  auto it = std::find(events.begin(), events.end(), e);
  return it == events.end() ? -1 : static_cast<int>(it - events.begin());
}

int Topology::thread_index(const std::string& t) const {
  auto it = std::find(threads.begin(), threads.end(), t);
  return it == threads.end() ? -1 : static_cast<int>(it - threads.begin());
}

int SchedulerState::running() const {
  for (std::size_t i = 0; i < status.size(); ++i)
    if (status[i].kind == Status::Running) return static_cast<int>(i);
  return -1;
}

bool SchedulerState::is_committed(int t) const {
  return std::find(committed_order.begin(), committed_order.end(), t) != committed_order.end();
}

std::size_t SchedulerState::hash() const {
  std::size_t h = 0x5ced;
  auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& st : status) mix(static_cast<std::size_t>(st.kind) * 131 + static_cast<std::size_t>(st.arg + 1));
  for (bool b : notified) mix(b);
  for (int t : committed_order) mix(static_cast<std::size_t>(t) + 7);
  for (bool b : visited) mix(b ? 3 : 5);
  return h;
}

std::string status_name(const ThreadStatus& st, const Topology& topo) {
  switch (st.kind) {
    case Status::Running: return "Running";
    case Status::Runnable: return "Runnable";
    case Status::Waiting: return "Waiting(" + topo.events.at(static_cast<std::size_t>(st.arg)) + ")";
    case Status::Cooperated: return "Cooperated";
    case Status::Joining: return "Joining(" + topo.threads.at(static_cast<std::size_t>(st.arg)) + ")";
    case Status::Terminated: return "Terminated";
  }
  return "?";
}

std::string SchedulerState::to_string(const Topology& topo) const {
  std::ostringstream os;
  for (std::size_t i = 0; i < status.size(); ++i) {
    if (i) os << ' ';
    os << topo.threads[i] << '=' << status_name(status[i], topo);
  }
  os << " notified={";
  bool first = true;
  for (std::size_t e = 0; e < notified.size(); ++e)
    if (notified[e]) {
      os << (first ? "" : ",") << topo.events[e];
      first = false;
    }
  os << "} order=[";
  for (std::size_t i = 0; i < committed_order.size(); ++i)
    os << (i ? "," : "") << topo.threads[static_cast<std::size_t>(committed_order[i])];
  os << ']';
  return os.str();
}

SchedulerState initial_state(const Topology& topo) {
  SchedulerState s;
  s.status.assign(topo.threads.size(), ThreadStatus{Status::Runnable, -1});
  s.notified.assign(topo.events.size(), false);
  s.visited.assign(topo.threads.size(), false);
  if (!topo.threads.empty()) {
    s.status[0] = ThreadStatus{Status::Running, -1};
    s.committed_order.push_back(0);
    s.visited[0] = true;
  }
  return s;
}

SexecResult sexec(const SchedulerState& s, const logic::PrimCall& call, int caller, const Topology& topo) {
  if (caller < 0 || static_cast<std::size_t>(caller) >= s.status.size() ||
      s.status[static_cast<std::size_t>(caller)].kind != Status::Running)
    throw SchedError("sexec: caller is not running");
  SexecResult r;
  r.state = s;
  auto& me = r.state.status[static_cast<std::size_t>(caller)];
  if (call.name == "await") {
    const int e = topo.event_index(call.arg);
    if (e < 0) throw SchedError("sexec: unknown event " + call.arg);
    if (!r.state.notified[static_cast<std::size_t>(e)]) me = ThreadStatus{Status::Waiting, e};
  } else if (call.name == "generate") {
    const int e = topo.event_index(call.arg);
    if (e < 0) throw SchedError("sexec: unknown event " + call.arg);
    r.state.notified[static_cast<std::size_t>(e)] = true;
    for (auto& st : r.state.status)
      if (st.kind == Status::Waiting && st.arg == e) st = ThreadStatus{Status::Runnable, -1};
  } else if (call.name == "cooperate") {
    me = ThreadStatus{Status::Cooperated, -1};
  } else if (call.name == "join") {
    const int t = topo.thread_index(call.arg);
    if (t < 0) throw SchedError("sexec: unknown thread " + call.arg);
    if (r.state.status[static_cast<std::size_t>(t)].kind != Status::Terminated) me = ThreadStatus{Status::Joining, t};
  } else {
    throw SchedError("sexec: unknown primitive " + call.name);
  }
  return r;
}

SchedulerState on_thread_exit(const SchedulerState& s, int t) {
  const auto& st = s.status.at(static_cast<std::size_t>(t));
  if (st.kind == Status::Terminated) throw SchedError("thread already terminated");
  if (st.kind != Status::Running) throw SchedError("on_thread_exit: thread is not running");
  SchedulerState r = s;
  r.status[static_cast<std::size_t>(t)] = ThreadStatus{Status::Terminated, -1};
  for (auto& o : r.status)
    if (o.kind == Status::Joining && o.arg == t) o = ThreadStatus{Status::Runnable, -1};
  return r;
}

namespace {

std::vector<SchedChoice> candidates(const SchedulerState& s, bool eoi) {
  std::vector<SchedChoice> out;
  for (std::size_t k = 0; k < s.committed_order.size(); ++k) {
    const int t = s.committed_order[k];
    if (s.visited[static_cast<std::size_t>(t)] || s.status[static_cast<std::size_t>(t)].kind != Status::Runnable)
      continue;
    SchedChoice c{t, s, eoi, false};
    c.state.status[static_cast<std::size_t>(t)] = ThreadStatus{Status::Running, -1};
    for (std::size_t j = 0; j <= k; ++j) c.state.visited[static_cast<std::size_t>(s.committed_order[j])] = true;
    out.push_back(std::move(c));
    return out;
  }
  for (std::size_t t = 0; t < s.status.size(); ++t) {
    if (s.status[t].kind != Status::Runnable || s.is_committed(static_cast<int>(t))) continue;
    SchedChoice c{static_cast<int>(t), s, eoi, true};
    c.state.status[t] = ThreadStatus{Status::Running, -1};
    c.state.committed_order.push_back(static_cast<int>(t));
    for (int u : s.committed_order) c.state.visited[static_cast<std::size_t>(u)] = true;
    c.state.visited[t] = true;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

std::vector<SchedChoice> sched(const SchedulerState& s) {
  if (s.running() >= 0) throw SchedError("sched: a thread is still running");
  auto out = candidates(s, false);
  if (!out.empty()) return out;
  const auto any = [&](Status k) {
    return std::any_of(s.status.begin(), s.status.end(), [&](const ThreadStatus& st) { return st.kind == k; });
  };
  if (any(Status::Runnable)) {
    SchedulerState next = s;
    std::fill(next.visited.begin(), next.visited.end(), false);
    return candidates(next, false);
  }
  if (any(Status::Cooperated)) {
    SchedulerState next = s;
    for (auto& st : next.status)
      if (st.kind == Status::Cooperated) st = ThreadStatus{Status::Runnable, -1};
    std::fill(next.notified.begin(), next.notified.end(), false);
    std::fill(next.visited.begin(), next.visited.end(), false);
    return candidates(next, true);
  }
  return out;
}

}  // namespace esst::sched
