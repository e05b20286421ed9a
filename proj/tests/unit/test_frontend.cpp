#include <doctest.h>

#include <algorithm>

#include "esst/concrete/system.hpp"
#include "esst/frontend/blocks.hpp"
#include "esst/frontend/cfg.hpp"
#include "esst/frontend/parser.hpp"
#include "helpers.hpp"

using namespace esst::frontend;
using esst::logic::Assign;
using esst::logic::Assume;
using esst::logic::PrimCall;
using esst::logic::program_var;

namespace {

const Edge* find_edge(const Cfg& cfg, const std::function<bool(const Edge&)>& pred) {
  for (const auto& e : cfg.edges)
    if (pred(e)) return &e;
  return nullptr;
}

bool is_prim(const Edge& e, const std::string& name) {
  const auto* p = std::get_if<PrimCall>(&e.op);
  return p && p->name == name;
}

}  // namespace

TEST_CASE("minimal program parses") {
  auto p = parse_program("global int g=0; thread main { g := 1; }");
  CHECK(p.globals.size() == 1);
  CHECK(p.threads.size() == 1);
  CHECK(p.threads[0].name == "main");
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(parse_program("event e; thread main { local int x; await(x+1); }"), ParseError);
  CHECK_THROWS_AS(parse_program("thread main { y := 1; }"), ParseError);
  CHECK_THROWS_AS(parse_program("thread main { } thread main { }"), ParseError);
  CHECK_THROWS_AS(parse_program("thread worker { } thread main { }"), ParseError);
  CHECK_THROWS_AS(parse_program("global int g; thread main { g := g * g; }"), ParseError);
  CHECK_THROWS_AS(parse_program("thread main { await(nothing); }"), ParseError);
  CHECK_THROWS_AS(parse_program("int f() { } thread main { }"), ParseError);
  try {
    parse_program("thread main {\n  x := 1;\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos().line == 2);
    CHECK(std::string(e.what()).find("2:") == 0);
  }
}

TEST_CASE("token ring corpus file has main and three workers") {
  auto p = parse_file(ESST_CORPUS_DIR "/ft-token-ring.3.tp");
  REQUIRE(p.threads.size() == 4);
  CHECK(p.threads[0].name == "main");
  CHECK(p.events.size() == 4);
}

TEST_CASE("locals are scoped to their thread") {
  auto p = parse_program("thread main { local int x = 1; } thread t { local int x; x := 2; }");
  CHECK(p.owner_of(program_var(local_symbol("main", "x"))) == 0);
  CHECK(p.owner_of(program_var(local_symbol("t", "x"))) == 1);
  CHECK(p.threads[0].locals != p.threads[1].locals);
}

TEST_CASE("assert lowers to a continue edge and an error edge") {
  auto p = parse_program("global int y; thread main { y := *; assert(y >= 0); }");
  auto cfgs = build_cfgs(p);
  const Cfg& cfg = cfgs[0];
  REQUIRE(cfg.error_locations.size() == 1);
  const Loc err = *cfg.error_locations.begin();
  const auto y = th::V("y");
  const Edge* ok = find_edge(cfg, [&](const Edge& e) {
    const auto* a = std::get_if<Assume>(&e.op);
    return a && a->cond == th::ge(y, th::C(0)) && !cfg.is_error(e.dst);
  });
  const Edge* bad = find_edge(cfg, [&](const Edge& e) {
    const auto* a = std::get_if<Assume>(&e.op);
    return a && a->cond == th::lt(y, th::C(0)) && e.dst == err;
  });
  CHECK(ok != nullptr);
  CHECK(bad != nullptr);
  CHECK(cfg.outgoing(err).empty());
  CHECK(check_cfg(cfg).empty());
}

TEST_CASE("while lowers to guarded back edges") {
  auto p = parse_program("global int c; thread main { while (c > 0) { c := c - 1; } }");
  const Cfg cfg = build_cfgs(p)[0];
  CHECK(check_cfg(cfg).empty());
  const auto c = th::V("c");
  const Edge* in = find_edge(cfg, [&](const Edge& e) {
    const auto* a = std::get_if<Assume>(&e.op);
    return a && a->cond == th::gt(c, th::C(0));
  });
  const Edge* out = find_edge(cfg, [&](const Edge& e) {
    const auto* a = std::get_if<Assume>(&e.op);
    return a && a->cond == th::le(c, th::C(0));
  });
  REQUIRE(in);
  REQUIRE(out);
  CHECK(in->src == out->src);
  CHECK(out->dst == cfg.exit);
  const Edge* dec = find_edge(cfg, [](const Edge& e) { return std::holds_alternative<Assign>(e.op); });
  REQUIRE(dec);
  CHECK(dec->dst == in->src);
  // nothing enters the entry
  for (const auto& e : cfg.edges) CHECK(e.dst != cfg.entry);
}

TEST_CASE("empty thread body has entry equal to exit") {
  auto cfgs = build_cfgs(parse_program("thread main { }"));
  CHECK(cfgs[0].entry == cfgs[0].exit);
  CHECK(cfgs[0].edges.empty());
}

TEST_CASE("disjunctive guards become one edge per cube") {
  auto p = parse_program("global int a; global int b; thread main { if (a > 0 || b > 0) { a := 0; } }");
  const Cfg cfg = build_cfgs(p)[0];
  int assumes = 0;
  for (const auto& e : cfg.edges) {
    if (const auto* as = std::get_if<Assume>(&e.op)) {
      ++assumes;
      CHECK(as->cond.kind() != esst::logic::Formula::Kind::Or);
    }
  }
  CHECK(assumes == 3);  // two cubes in, one cube out
}

TEST_CASE("global initializers run at the start of main") {
  auto p = parse_program("global int g = 5; thread main { g := g + 1; } thread t { }");
  const auto cfgs = build_cfgs(p);
  const Edge* init = find_edge(cfgs[0], [&](const Edge& e) { return e.src == cfgs[0].entry; });
  REQUIRE(init);
  const auto* a = std::get_if<Assign>(&init->op);
  REQUIRE(a);
  CHECK(a->target == program_var("g"));
  CHECK(a->value == th::C(5));
}

TEST_CASE("loop with one blocking call gives two blocks") {
  // entry, a loop whose body ends in an await, and the loop exit
  auto p = parse_program(R"(
    global int c;
    event e;
    thread main {
      c := 1;
      while (c > 0) {
        c := c + 1;
        await(e);
        c := c - 2;
      }
    })");
  const auto cfgs = build_cfgs(p);
  const Cfg& cfg = cfgs[0];
  const auto blocks = identify_atomic_blocks(cfg, 0);
  REQUIRE(blocks.size() == 2);
  const Edge* w = find_edge(cfg, [](const Edge& e) { return is_prim(e, "await"); });
  REQUIRE(w);
  const Loc after = w->dst;
  CHECK(blocks[0].id.entry == cfg.entry);
  CHECK(blocks[1].id.entry == after);
  const std::set<Loc> exits{after, cfg.exit};
  CHECK(blocks[0].exits == exits);
  CHECK(blocks[1].exits == exits);
  // together the blocks cover every edge
  std::set<int> covered;
  for (const auto& b : blocks) covered.insert(b.member_edges.begin(), b.member_edges.end());
  CHECK(covered.size() == cfg.edges.size());
}

TEST_CASE("block counts") {
  auto plain = build_cfgs(parse_program("global int g; thread main { g := 1; if (g > 0) { g := 2; } }"));
  CHECK(identify_atomic_blocks(plain[0], 0).size() == 1);
  auto two = build_cfgs(parse_program("thread main { cooperate(); cooperate(); }"));
  CHECK(identify_atomic_blocks(two[0], 0).size() == 3);
}

TEST_CASE("block entries follow blocking calls") {
  const auto sys = esst::concrete::System::from_file(ESST_CORPUS_DIR "/ft-pc-sfifo2.tp");
  for (const auto& b : sys.blocks) {
    const Cfg& cfg = sys.cfgs[static_cast<std::size_t>(b.id.thread)];
    if (b.id.entry == cfg.entry) continue;
    bool blocked_in = false;
    for (const auto& e : cfg.edges)
      if (e.dst == b.id.entry && is_blocking(e.op)) blocked_in = true;
    CHECK(blocked_in);
  }
}

TEST_CASE("access summaries") {
  auto p = parse_program(R"(
    global int g;
    event e;
    thread main { local int l; g := l + 1; }
    thread t { local int x; x := await(e); }
    thread u { if (g > 0) { generate(e); } }
  )");
  const auto cfgs = build_cfgs(p);
  std::vector<AtomicBlock> blocks;
  for (std::size_t t = 0; t < cfgs.size(); ++t) {
    auto b = identify_atomic_blocks(cfgs[t], static_cast<int>(t));
    blocks.insert(blocks.end(), b.begin(), b.end());
  }
  const auto sums = compute_access_summary(p, cfgs, blocks);
  const VarId g = program_var("g");
  const auto& m = sums.at(BlockId{0, cfgs[0].entry});
  CHECK(m.globals_written == std::set<VarId>{g});
  CHECK(m.globals_read.empty());
  CHECK(m.reaches_exit);
  const auto& t = sums.at(BlockId{1, cfgs[1].entry});
  CHECK(t.events_awaited == std::set<std::string>{"e"});
  const auto& u = sums.at(BlockId{2, cfgs[2].entry});
  CHECK(u.globals_read == std::set<VarId>{g});
  CHECK(u.events_generated == std::set<std::string>{"e"});
}

TEST_CASE("every corpus CFG is well formed") {
  for (const char* name : {"fact1", "fact1-bug", "fact1-mod", "fact2", "ft-pc-sfifo1", "ft-pc-sfifo2",
                           "ft-token-ring.5", "ft-token-ring-bug.5"}) {
    const auto sys = esst::concrete::System::from_file(std::string(ESST_CORPUS_DIR) + "/" + name + ".tp");
    for (const auto& cfg : sys.cfgs) {
      INFO(name << " " << cfg.thread);
      CHECK(check_cfg(cfg).empty());
    }
  }
}
