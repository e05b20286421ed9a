#include <doctest.h>

#include "esst/concrete/interpreter.hpp"
#include "esst/concrete/system.hpp"
#include "esst/logic/operation.hpp"
#include "esst/logic/solver.hpp"

using namespace esst::concrete;
using esst::logic::Assign;
using esst::logic::Assume;
using esst::logic::program_var;

namespace {

long value_of(const System& sys, const Configuration& c, const char* name) {
  return c.values[static_cast<std::size_t>(sys.slot_of(program_var(name)))];
}

}  // namespace

TEST_CASE("initial configuration") {
  const auto sys = System::from_source("global int g = 3; thread main { g := 2; } thread w { }");
  const auto c = initial_configuration(sys);
  CHECK(c.locs[0] == sys.cfgs[0].entry);
  CHECK(c.sched.running() == 0);
  CHECK(value_of(sys, c, "g") == 0);  // the initializer is an edge of main
  CHECK_FALSE(is_error(sys, c));
}

TEST_CASE("disabled assume has no successor") {
  const auto sys = System::from_source("global int g; thread main { if (g < 0) { g := 1; } }");
  auto c = initial_configuration(sys);
  // run the initializer
  auto succ = step(sys, c, {0});
  REQUIRE(succ.size() == 1);
  c = succ[0].second;
  for (int e : sys.cfgs[0].outgoing(c.locs[0])) {
    const auto* as = std::get_if<Assume>(&sys.cfgs[0].edges[static_cast<std::size_t>(e)].op);
    REQUIRE(as);
    const bool enabled = eval_formula(sys, c, as->cond);
    CHECK(apply(sys, c, Step{Step::Kind::Thread, 0, e, std::nullopt, false}).has_value() == enabled);
  }
  CHECK(step(sys, c, {0}).size() == 1);
}

TEST_CASE("assignment updates the store") {
  const auto sys = System::from_source("global int g; thread main { g := 2; }");
  auto c = initial_configuration(sys);
  c = step(sys, c, {0}).at(0).second;
  auto s = step(sys, c, {0});
  REQUIRE(s.size() == 1);
  CHECK(value_of(sys, s[0].second, "g") == 2);
}

TEST_CASE("havoc draws every value of the value set") {
  const auto sys = System::from_source("global int g; thread main { g := *; }");
  auto c = step(sys, initial_configuration(sys), {0}).at(0).second;
  auto s = step(sys, c, {-1, 0, 1, 2});
  REQUIRE(s.size() == 4);
  CHECK(value_of(sys, s[3].second, "g") == 2);
  CHECK(s[0].first.havoc == -1);
}

TEST_CASE("two uncommitted threads give two scheduler successors") {
  const auto sys = System::from_source("thread main { cooperate(); } thread a { } thread b { }");
  auto c = initial_configuration(sys);
  auto s = step(sys, c, {0});
  REQUIRE(s.size() == 1);
  c = s[0].second;
  CHECK(c.sched.running() == -1);
  s = step(sys, c, {0});
  REQUIRE(s.size() == 2);
  CHECK(s[0].first.kind == Step::Kind::Scheduler);
  CHECK(s[0].first.thread == 1);
  CHECK(s[1].first.thread == 2);
}

TEST_CASE("bounded reach") {
  const auto bug = System::from_file(ESST_CORPUS_DIR "/fact1-bug.tp");
  auto r = bounded_reach(bug);
  CHECK(r.verdict == ReachVerdict::Unsafe);
  CHECK(is_error(bug, r.trace.configs.back()));
  CHECK(check_trace(bug, r.trace));

  const auto ok = System::from_source("thread main { assert(1 == 1); }");
  CHECK(bounded_reach(ok).verdict == ReachVerdict::NoErrorFound);

  const auto ring = System::from_file(ESST_CORPUS_DIR "/ft-token-ring-bug.3.tp");
  CHECK(bounded_reach(ring).verdict == ReachVerdict::Unsafe);

  const auto safe = System::from_file(ESST_CORPUS_DIR "/fact1.tp");
  CHECK(bounded_reach(safe).verdict == ReachVerdict::NoErrorFound);
}

TEST_CASE("bounded reach respects the depth and the state cap") {
  const auto sys = System::from_source("global int g; thread main { while (true) { g := g + 1; } }");
  ReachOptions o;
  o.depth = 20;
  auto r = bounded_reach(sys, o);
  CHECK(r.verdict == ReachVerdict::NoErrorFound);
  CHECK(r.depth_limited);
  o.depth = 100000;
  o.max_states = 50;
  CHECK_THROWS_AS(bounded_reach(sys, o), esst::logic::CapacityError);
}

TEST_CASE("replay, check_trace and the structured round trip") {
  const auto sys = System::from_file(ESST_CORPUS_DIR "/ft-token-ring-bug.3.tp");
  const auto r = bounded_reach(sys);
  REQUIRE(r.verdict == ReachVerdict::Unsafe);
  const auto again = replay(sys, r.trace.steps);
  REQUIRE(again);
  CHECK(again->configs == r.trace.configs);

  const auto text = render_structured(sys, r.trace);
  CHECK(parse_structured(sys, text) == r.trace.steps);
  CHECK_FALSE(render_text(sys, r.trace).empty());

  Trace broken = r.trace;
  broken.configs.back().values[0] += 5;
  CHECK_FALSE(check_trace(sys, broken));

  std::vector<Step> bad{Step{Step::Kind::Scheduler, 1, -1, std::nullopt, false}};
  CHECK_FALSE(replay(sys, bad).has_value());  // main is running
}
