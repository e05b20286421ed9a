#include <doctest.h>

#include <random>

#include "esst/frontend/parser.hpp"
#include "esst/sched/scheduler.hpp"

using namespace esst::sched;
using esst::logic::PrimCall;

namespace {

Topology topo3() { return Topology{{"main", "t1", "t2"}, {"e", "f"}}; }

PrimCall prim(const char* name, const char* arg = "") { return PrimCall{std::nullopt, name, arg}; }

int running_count(const SchedulerState& s) {
  int n = 0;
  for (const auto& st : s.status) n += st.kind == Status::Running;
  return n;
}

}  // namespace

TEST_CASE("initial state") {
  const auto s = initial_state(topo3());
  CHECK(s.status[0].kind == Status::Running);
  CHECK(s.status[1].kind == Status::Runnable);
  CHECK(s.status[2].kind == Status::Runnable);
  CHECK(s.committed_order == std::vector<int>{0});
  CHECK(s.running() == 0);
  const auto one = initial_state(Topology{{"main"}, {}});
  CHECK(one.status.size() == 1);
  CHECK(one.running() == 0);
}

TEST_CASE("main is required by the frontend") {
  CHECK_THROWS(esst::frontend::parse_program("thread worker { }"));
}

TEST_CASE("await and generate") {
  const auto topo = topo3();
  auto s = initial_state(topo);
  auto w = sexec(s, prim("await", "e"), 0, topo);
  CHECK(w.value == 0);
  CHECK(w.state.status[0] == ThreadStatus{Status::Waiting, 0});

  auto g = sexec(s, prim("generate", "e"), 0, topo);
  CHECK(g.state.notified[0]);
  CHECK(g.state.status[0].kind == Status::Running);
  // a notification earlier in the instant is observed without waiting
  auto w2 = sexec(g.state, prim("await", "e"), 0, topo);
  CHECK(w2.state == g.state);

  // generate wakes a waiter
  SchedulerState s2 = s;
  s2.status[1] = {Status::Waiting, 0};
  auto g2 = sexec(s2, prim("generate", "e"), 0, topo);
  CHECK(g2.state.status[1].kind == Status::Runnable);
  CHECK(g2.state.notified[0]);
}

TEST_CASE("cooperate and join") {
  const auto topo = topo3();
  auto s = initial_state(topo);
  CHECK(sexec(s, prim("cooperate"), 0, topo).state.status[0].kind == Status::Cooperated);
  auto j = sexec(s, prim("join", "t1"), 0, topo);
  CHECK(j.state.status[0] == ThreadStatus{Status::Joining, 1});
  SchedulerState done = s;
  done.status[1] = {Status::Terminated, -1};
  CHECK(sexec(done, prim("join", "t1"), 0, topo).state.status[0].kind == Status::Running);
  CHECK_THROWS(sexec(s, prim("frobnicate"), 0, topo));
  CHECK_THROWS(sexec(s, prim("cooperate"), 1, topo));  // caller not running
}

TEST_CASE("thread exit wakes joiners and is absorbing") {
  const auto topo = topo3();
  SchedulerState s = initial_state(topo);
  s.status[0] = {Status::Joining, 1};
  s.status[1] = {Status::Running, -1};
  auto e = on_thread_exit(s, 1);
  CHECK(e.status[1].kind == Status::Terminated);
  CHECK(e.status[0].kind == Status::Runnable);
  CHECK(e.status[2].kind == Status::Runnable);
  CHECK_THROWS(on_thread_exit(e, 1));

  SchedulerState lone = initial_state(topo);
  auto l = on_thread_exit(lone, 0);
  CHECK(l.status[0].kind == Status::Terminated);
  CHECK(l.status[1] == lone.status[1]);
  CHECK(l.status[2] == lone.status[2]);
}

TEST_CASE("never scheduled runnable threads are all candidates") {
  const auto topo = topo3();
  auto s = sexec(initial_state(topo), prim("cooperate"), 0, topo).state;
  const auto ch = sched(s);
  REQUIRE(ch.size() == 2);
  CHECK(ch[0].thread == 1);
  CHECK(ch[1].thread == 2);
  for (const auto& c : ch) {
    CHECK(c.commits);
    CHECK(c.state.committed_order.back() == c.thread);
    CHECK(running_count(c.state) == 1);
  }
}

TEST_CASE("committed order is followed deterministically") {
  SchedulerState s;
  s.status = {{Status::Cooperated, -1}, {Status::Runnable, -1}, {Status::Runnable, -1}};
  s.notified = {false, false};
  s.committed_order = {0, 2, 1};
  s.visited = {true, false, false};
  const auto ch = sched(s);
  REQUIRE(ch.size() == 1);
  CHECK(ch[0].thread == 2);
  CHECK_FALSE(ch[0].commits);
}

TEST_CASE("end of instant wakes cooperated threads and clears notifications") {
  SchedulerState s;
  s.status = {{Status::Cooperated, -1}, {Status::Waiting, 1}, {Status::Cooperated, -1}};
  s.notified = {true, false};
  s.committed_order = {0, 1, 2};
  s.visited = {true, true, true};
  const auto ch = sched(s);
  REQUIRE(ch.size() == 1);
  CHECK(ch[0].end_of_instant);
  CHECK(ch[0].thread == 0);
  CHECK(ch[0].state.status[1] == ThreadStatus{Status::Waiting, 1});
  CHECK(ch[0].state.status[2].kind == Status::Runnable);
  CHECK_FALSE(ch[0].state.notified[0]);
}

TEST_CASE("nothing runnable and nothing cooperated is terminal") {
  SchedulerState s;
  s.status = {{Status::Waiting, 0}, {Status::Terminated, -1}, {Status::Joining, 0}};
  s.notified = {false, false};
  s.committed_order = {0};
  s.visited = {true, false, false};
  CHECK(sched(s).empty());
}

TEST_CASE("sched rejects a running thread") {
  CHECK_THROWS(sched(initial_state(topo3())));
}

TEST_CASE("random scheduler walks keep the invariants") {
  const auto topo = topo3();
  std::mt19937 rng(7);
  const char* prims[] = {"await", "generate", "cooperate", "join"};
  for (int run = 0; run < 200; ++run) {
    SchedulerState s = initial_state(topo);
    std::vector<int> order = s.committed_order;
    for (int step = 0; step < 40; ++step) {
      const int r = s.running();
      if (r >= 0) {
        CHECK(running_count(s) == 1);
        const char* p = prims[rng() % 4];
        std::string arg;
        if (std::string(p) == "await" || std::string(p) == "generate") arg = topo.events[rng() % 2];
        if (std::string(p) == "join") arg = topo.threads[rng() % 3];
        if (std::string(p) == "join" && arg == topo.threads[static_cast<std::size_t>(r)]) continue;
        if (rng() % 8 == 0) {
          s = on_thread_exit(s, r);
        } else {
          s = sexec(s, PrimCall{std::nullopt, p, arg}, r, topo).state;
        }
        continue;
      }
      CHECK(running_count(s) == 0);
      const auto ch = sched(s);
      if (ch.empty()) break;
      for (const auto& c : ch) {
        CHECK(running_count(c.state) == 1);
        CHECK(c.state.running() == c.thread);
        if (c.end_of_instant)
          for (bool n : c.state.notified) CHECK_FALSE(n);
        // append-only order
        REQUIRE(c.state.committed_order.size() >= order.size());
        CHECK(std::equal(order.begin(), order.end(), c.state.committed_order.begin()));
      }
      s = ch[rng() % ch.size()].state;
      order = s.committed_order;
    }
  }
}
