#include <doctest.h>

#include "esst/concrete/system.hpp"
#include "esst/por/por.hpp"
#include "properties.hpp"

using namespace esst::por;
using esst::logic::program_var;
using esst::sched::SchedulerState;
using esst::sched::Status;

namespace {

AccessSummary reads(const char* g) {
  AccessSummary s;
  s.globals_read.insert(program_var(g));
  return s;
}

AccessSummary writes(const char* g) {
  AccessSummary s;
  s.globals_written.insert(program_var(g));
  return s;
}

SchedulerState all_runnable(int n) {
  SchedulerState s;
  s.status.assign(static_cast<std::size_t>(n), {Status::Runnable, -1});
  s.notified.assign(1, false);
  s.visited.assign(static_cast<std::size_t>(n), false);
  return s;
}

}  // namespace

TEST_CASE("dependence from summaries") {
  const BlockId a{0, 0}, b{1, 0}, c{2, 0}, d{0, 1};
  std::map<BlockId, AccessSummary> sums{{a, writes("x")}, {b, reads("x")}, {c, reads("y")}, {d, AccessSummary{}}};
  sums[d].events_generated.insert("e");
  sums[c].events_awaited.insert("e");
  const DependenceRelation rel(sums, {"t0", "t1", "t2"}, {"e"});
  CHECK(rel.dependent(a, a));
  CHECK(rel.dependent(a, b));
  CHECK(rel.dependent(b, a));
  CHECK_FALSE(rel.dependent(b, c));  // two reads
  CHECK_FALSE(rel.dependent(a, c));
  CHECK(rel.dependent(c, d));  // generate vs await
  CHECK_THROWS(rel.dependent(a, BlockId{5, 5}));

  std::map<BlockId, AccessSummary> js{{a, AccessSummary{}}, {b, AccessSummary{}}};
  js[a].threads_joined.insert("t1");
  CHECK_FALSE(DependenceRelation(js, {"t0", "t1"}, {}).dependent(a, b));
  js[b].reaches_exit = true;
  CHECK(DependenceRelation(js, {"t0", "t1"}, {}).dependent(a, b));
}

TEST_CASE("necessary enabling sets") {
  const BlockId w{0, 1}, g{1, 0}, o{2, 0};
  std::map<BlockId, AccessSummary> sums{{w, AccessSummary{}}, {g, AccessSummary{}}, {o, AccessSummary{}}};
  sums[g].events_generated.insert("e");
  sums[o].reaches_exit = true;
  const DependenceRelation rel(sums, {"t0", "t1", "t2"}, {"e"});
  auto s = all_runnable(3);
  s.status[0] = {Status::Waiting, 0};
  CHECK(necessary_enabling_set(w, {g, o}, s, rel) == BlockSet{g});
  s.status[0] = {Status::Joining, 2};
  CHECK(necessary_enabling_set(w, {g, o}, s, rel) == BlockSet{o});
  s.status[0] = {Status::Cooperated, -1};
  CHECK(necessary_enabling_set(w, {g, o}, s, rel).empty());
  CHECK_THROWS(necessary_enabling_set(g, {g, o}, s, rel));
}

TEST_CASE("persistent sets") {
  auto s = all_runnable(3);
  s.status[0] = {Status::Cooperated, -1};
  s.committed_order = {0};
  s.visited[0] = true;
  const std::vector<Loc> locs{0, 0, 0};
  const auto choices = esst::sched::sched(s);
  REQUIRE(choices.size() == 2);

  std::map<BlockId, AccessSummary> indep{{{0, 0}, {}}, {{1, 0}, writes("x")}, {{2, 0}, writes("y")}};
  auto p = persistent(s, locs, choices, DependenceRelation(indep, {"m", "a", "b"}, {"e"}));
  CHECK(p.chosen.size() == 1);
  CHECK(p.blocks == BlockSet{{1, 0}});

  std::map<BlockId, AccessSummary> dep{{{0, 0}, {}}, {{1, 0}, writes("x")}, {{2, 0}, reads("x")}};
  p = persistent(s, locs, choices, DependenceRelation(dep, {"m", "a", "b"}, {"e"}));
  CHECK(p.chosen == std::vector<std::size_t>{0, 1});

  CHECK(persistent(s, locs, {}, DependenceRelation(dep, {"m", "a", "b"}, {"e"})).chosen.empty());
}

TEST_CASE("persistent set on the token ring start is a strict subset") {
  const auto sys = esst::concrete::System::from_file(ESST_CORPUS_DIR "/ft-token-ring.3.tp");
  const auto rel = DependenceRelation::of(sys);
  auto s = esst::sched::initial_state(sys.topo);
  s.status[0] = {Status::Cooperated, -1};  // main's first cooperate
  std::vector<Loc> locs;
  for (const auto& cfg : sys.cfgs) locs.push_back(cfg.entry);
  const auto choices = esst::sched::sched(s);
  REQUIRE(choices.size() == 3);
  const auto p = persistent(s, locs, choices, rel);
  CHECK(!p.chosen.empty());
  CHECK(p.chosen.size() < choices.size());
}

TEST_CASE("sleep sets") {
  const BlockId a{0, 0}, b{1, 0}, c{2, 0};
  std::map<BlockId, AccessSummary> sums{{a, writes("x")}, {b, writes("y")}, {c, reads("x")}};
  const DependenceRelation rel(sums, {"t0", "t1", "t2"}, {});

  auto r = sleep({}, {a, b}, rel);
  REQUIRE(r.reduced == std::vector<std::size_t>{0, 1});
  CHECK(r.next_sleep[0].empty());
  CHECK(r.next_sleep[1] == BlockSet{a});

  r = sleep({}, {a, c}, rel);
  CHECK(r.next_sleep[1].empty());  // c depends on a

  r = sleep({a, b}, {a, b}, rel);
  CHECK(r.reduced.empty());

  r = sleep({b}, {a, c}, rel);
  REQUIRE(r.reduced.size() == 2);
  CHECK(r.next_sleep[0] == BlockSet{b});
  CHECK(r.next_sleep[1] == BlockSet{b});
}

TEST_CASE("transition summaries include blocks entered through await") {
  const auto sys = esst::concrete::System::from_file(ESST_CORPUS_DIR "/ft-token-ring.3.tp");
  const auto ts = transition_summaries(sys);
  CHECK(ts.size() == sys.blocks.size());
  for (const auto& [id, s] : sys.summaries) {
    const auto& t = ts.at(id);
    for (auto v : s.globals_written) CHECK(t.globals_written.count(v));
    for (const auto& e : s.events_generated) CHECK(t.events_generated.count(e));
  }
}

TEST_CASE("mode names round trip") {
  for (auto m : {Mode::None, Mode::Persistent, Mode::Sleep, Mode::Both}) CHECK(parse_mode(mode_name(m)) == m);
  CHECK_THROWS_AS(parse_mode("some"), std::invalid_argument);
}

TEST_CASE("random persistent and sleep properties") {
  const auto o = props::por(99, 300);
  INFO(o.detail);
  CHECK(o.passed);
}
