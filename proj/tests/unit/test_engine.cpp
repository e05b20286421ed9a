#include <doctest.h>

#include <deque>

#include "esst/concrete/interpreter.hpp"
#include "esst/engine/checker.hpp"
#include "esst/logic/post.hpp"
#include "esst/logic/solver.hpp"
#include "helpers.hpp"

using namespace esst::engine;
using esst::concrete::System;
using esst::sched::Status;
using th::C;
using th::V;

namespace {

// Unfolds the ARF breadth-first (no coverage) until an error node shows up.
int find_error(Checker& c, int limit = 5000) {
  std::deque<int> q{c.initial_node()};
  while (!q.empty() && limit-- > 0) {
    const int n = q.front();
    q.pop_front();
    if (c.node(n).unsat) continue;
    if (c.is_error(n)) return n;
    const auto kids = c.node(n).running() ? c.expand_e1(n) : c.expand_e2(n);
    q.insert(q.end(), kids.begin(), kids.end());
  }
  return -1;
}

// First satisfiable E1 child taking edge `edge` (any edge when -1).
int e1_child(Checker& c, int n, int edge = -1) {
  for (int k : c.expand_e1(n))
    if (!c.node(k).unsat && (edge < 0 || c.node(k).edge == edge)) return k;
  return -1;
}

esst::logic::Atom atom(const esst::logic::Formula& f) { return f.as_atom(); }

}  // namespace

TEST_CASE("initial node") {
  const auto sys = System::from_file(ESST_CORPUS_DIR "/ft-token-ring.3.tp");
  Checker c(sys);
  const auto& r = c.node(c.initial_node());
  CHECK(r.link == ArfNode::Link::Root);
  CHECK(r.parent == -1);
  CHECK(r.locs.size() == 4);
  for (std::size_t t = 0; t < r.locs.size(); ++t) {
    CHECK(r.locs[t] == sys.cfgs[t].entry);
    CHECK(r.regions[t].is_true());
  }
  CHECK(r.global.is_true());
  CHECK(r.sched.running() == 0);
  CHECK(r.sleep.empty());
}

TEST_CASE("E1 marks infeasible assumes") {
  const auto sys = System::from_source("global int y = 7; thread main { if (y < 0) { y := 1; } }");
  Checker c(sys);
  c.ledger().add_global(atom(th::lt(V("y"), C(0))));
  const int init = e1_child(c, c.initial_node());
  REQUIRE(init >= 0);
  CHECK(esst::logic::entails(c.node(init).conjunction(), th::ge(V("y"), C(0))));
  const auto kids = c.expand_e1(init);
  REQUIRE(kids.size() == 2);
  int unsat = 0;
  for (int k : kids) unsat += c.node(k).unsat ? 1 : 0;
  CHECK(unsat == 1);
}

TEST_CASE("E1 havocs other threads' regions on a global write") {
  const auto sys = System::from_source(
      "global int g; thread main { cooperate(); g := 1; } thread t { local int k; g := 0; k := 3; cooperate(); }");
  Checker c(sys);
  const auto g0 = atom(th::eq(V("g"), C(0)));
  const auto k3 = atom(th::eq(V("t.k"), C(3)));
  for (Loc l = 0; l < sys.cfgs[1].num_locations; ++l) {
    c.ledger().add_location(1, l, g0);
    c.ledger().add_location(1, l, k3);
  }
  // main: g := 0 (initializer), cooperate
  int n = e1_child(c, c.initial_node());
  n = e1_child(c, n);
  REQUIRE(!c.node(n).running());
  int to_t = -1;
  for (int k : c.expand_e2(n))
    if (c.node(k).thread == 1) to_t = k;
  REQUIRE(to_t >= 0);
  CHECK(c.node(to_t).link == ArfNode::Link::Connector);
  // t: k := 0, g := 0, k := 3, cooperate
  n = to_t;
  while (c.node(n).running()) n = e1_child(c, n);
  CHECK(c.node(n).sched.status[1].kind == Status::Cooperated);
  CHECK(esst::logic::entails(c.node(n).regions[1], th::eq(V("g"), C(0))));
  CHECK(esst::logic::entails(c.node(n).regions[1], th::eq(V("t.k"), C(3))));
  // back to main, which writes g: t keeps k = 3 but forgets g = 0
  const auto back = c.expand_e2(n);
  REQUIRE(back.size() == 1);
  n = e1_child(c, back[0]);
  CHECK(std::holds_alternative<esst::logic::Assign>(c.node(n).label));
  CHECK_FALSE(esst::logic::entails(c.node(n).regions[1], th::eq(V("g"), C(0))));
  CHECK(esst::logic::entails(c.node(n).regions[1], th::eq(V("t.k"), C(3))));
}

TEST_CASE("E1 through cooperate and thread exit") {
  const auto sys = System::from_source("thread main { cooperate(); } thread a { }");
  Checker c(sys);
  const int n = e1_child(c, c.initial_node());
  CHECK(c.node(n).sched.status[0].kind == Status::Cooperated);
  CHECK(c.node(n).label == esst::logic::skip());
  CHECK_FALSE(c.node(n).running());
}

TEST_CASE("E2 copies regions into one connector per choice") {
  const auto sys = System::from_source("global int g; thread main { cooperate(); } thread a { } thread b { }");
  Checker c(sys);
  c.ledger().add_global(atom(th::eq(V("g"), C(0))));
  int n = e1_child(c, c.initial_node());
  n = e1_child(c, n);
  const auto kids = c.expand_e2(n);
  REQUIRE(kids.size() == 2);
  for (int k : kids) {
    CHECK(c.node(k).link == ArfNode::Link::Connector);
    CHECK(c.node(k).regions == c.node(n).regions);
    CHECK(c.node(k).global == c.node(n).global);
    CHECK(c.node(k).locs == c.node(n).locs);
    CHECK(c.node(k).running());
  }
  CHECK(c.node(kids[0]).thread != c.node(kids[1]).thread);

  // nothing left to schedule: no children
  const auto lone = System::from_source("event e; thread main { await(e); }");
  Checker d(lone);
  const int w = e1_child(d, d.initial_node());
  CHECK(d.node(w).sched.status[0].kind == Status::Waiting);
  CHECK(d.expand_e2(w).empty());
}

TEST_CASE("coverage") {
  const auto sys = System::from_source("global int g; thread main { while (true) { g := 1 - g; } }");
  Checker c(sys);
  const int r = c.initial_node();
  CHECK(c.covers(r, r));
  const int a = e1_child(c, r);
  CHECK_FALSE(c.covers(r, a));  // different locations
  CHECK(c.covers(a, a));
}

TEST_CASE("feasible counterexamples") {
  const auto sys = System::from_source("thread main { assert(false); }");
  Checker c(sys);
  const int err = find_error(c);
  REQUIRE(err >= 0);
  std::optional<esst::concrete::Trace> trace;
  CHECK(c.check_counterexample(c.counterexample_to(err), trace) == Checker::CexStatus::Feasible);
  REQUIRE(trace);
  CHECK(esst::concrete::check_trace(sys, *trace));

  const auto f8 = System::from_source(
      "global int x; global int y; global int z;"
      "thread main { x := x + y; y := 7; x := z; assert(x >= y + z); }");
  Checker d(f8);
  const int e8 = find_error(d);
  REQUIRE(e8 >= 0);
  CHECK(d.check_counterexample(d.counterexample_to(e8), trace) == Checker::CexStatus::Feasible);
  CHECK(esst::concrete::is_error(f8, trace->configs.back()));
}

TEST_CASE("spurious counterexample, refinement and divergence") {
  const char* src =
      "global int x; global int y;"
      "thread main { y := *; x := y; if (x > 0) { x := x + 1; y := x; assert(y >= 0); } }";
  const auto sys = System::from_source(src);
  Checker c(sys);
  const int err = find_error(c);
  REQUIRE(err >= 0);
  const auto cex = c.counterexample_to(err);
  std::optional<esst::concrete::Trace> trace;
  CHECK(c.check_counterexample(cex, trace) == Checker::CexStatus::Spurious);
  CHECK_FALSE(trace);

  const auto before = c.ledger().total();
  CHECK(c.refine(cex));
  CHECK(c.ledger().total() > before);
  CHECK_FALSE(c.refine(cex));  // nothing new learned from the same path

  CHECK(run_esst(sys).verdict == Verdict::Safe);
}

TEST_CASE("predicate placement") {
  const auto sys = System::from_source(
      "global int g; thread main { local int a; a := 1; } thread t { local int b; b := 2; }");
  PrecisionLedger led;
  led.thread.resize(2);
  const auto own = atom(th::eq(V("main.a"), C(1)));
  const auto mixed = atom(th::lt(V("main.a"), V("t.b")));
  const auto glob = atom(th::le(V("g"), V("main.a")));

  place_predicate(led, sys, 0, 1, own, false);
  CHECK(led.at(0, 1).contains(own));
  CHECK_FALSE(led.global.contains(own));

  place_predicate(led, sys, 0, 1, mixed, false);
  CHECK(led.global.contains(mixed));
  CHECK_FALSE(led.at(0, 1).contains(mixed));

  place_predicate(led, sys, 0, 1, glob, false);
  CHECK(led.global.contains(glob));
  CHECK(led.at(0, 1).contains(glob));

  PrecisionLedger tl;
  tl.thread.resize(2);
  place_predicate(tl, sys, 0, 1, own, true);
  CHECK(tl.thread[0].contains(own));
  for (Loc l = 0; l < sys.cfgs[0].num_locations; ++l) CHECK(tl.at(0, l).contains(own));
  CHECK(tl.invariant_holds(sys.cfgs));
}

TEST_CASE("run_esst on the corpus") {
  auto load = [](const char* n) { return System::from_file(std::string(ESST_CORPUS_DIR "/") + n + ".tp"); };
  CHECK(run_esst(load("fact1")).verdict == Verdict::Safe);
  CHECK(run_esst(load("fact1-bug")).verdict == Verdict::Unsafe);
  CHECK(run_esst(load("ft-token-ring.3")).verdict == Verdict::Safe);
  CHECK(run_esst(load("fact2")).verdict == Verdict::Safe);

  Options tiny;
  tiny.max_nodes = 10;
  const auto r = run_esst(load("ft-token-ring.3"), tiny);
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.reason.rfind("capacity", 0) == 0);
}

TEST_CASE("ARF invariants after a run") {
  for (const char* name : {"fact1", "fact1-bug", "fact1-mod", "fact2", "ft-token-ring.3", "ft-token-ring-bug.3"})
    for (auto mode : {esst::por::Mode::None, esst::por::Mode::Both}) {
      CAPTURE(name);
      const auto sys = System::from_file(std::string(ESST_CORPUS_DIR "/") + name + ".tp");
      Options opts;
      opts.mode = mode;
      Checker c(sys, opts);
      const auto res = c.run();
      REQUIRE(res.verdict != Verdict::Unknown);

      if (res.verdict == Verdict::Safe) {
        CHECK(esst::concrete::bounded_reach(sys).verdict == esst::concrete::ReachVerdict::NoErrorFound);
      } else {
        REQUIRE(res.trace);
        CHECK(esst::concrete::check_trace(sys, *res.trace));
        CHECK(esst::concrete::is_error(sys, res.trace->configs.back()));
      }

      for (std::size_t id = 0; id < c.node_count(); ++id) {
        const auto& n = c.node(static_cast<int>(id));
        if (n.removed) continue;
        if (n.covered_by >= 0) CHECK(n.children.empty());
        if (n.parent < 0) continue;
        const auto& p = c.node(n.parent);
        if (n.link == ArfNode::Link::Connector) {
          CHECK_FALSE(p.running());
        } else {
          CHECK(p.running());
          if (n.edge >= 0 && !p.unsat)
            CHECK(esst::logic::entails(esst::logic::strongest_post(p.conjunction(), n.label), n.conjunction()));
        }
      }
    }
}

TEST_CASE("thread-level placement keeps the ledger invariant") {
  const auto sys = System::from_file(ESST_CORPUS_DIR "/fact1-mod.tp");
  Options opts;
  opts.thread_placement = true;
  Checker c(sys, opts);
  CHECK(c.run().verdict == Verdict::Safe);
  CHECK(c.ledger().invariant_holds(sys.cfgs));
  CHECK(c.to_dot().find("digraph") != std::string::npos);
}
