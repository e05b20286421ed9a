#include "esst/frontend/cfg.hpp"

#include <deque>
#include <sstream>

#include "esst/logic/solver.hpp"

namespace esst::frontend {

using logic::Assign;
using logic::Assume;
using logic::PrimCall;

bool is_blocking(const Operation& op) {
  const auto* p = std::get_if<PrimCall>(&op);
  return p && (p->name == "await" || p->name == "cooperate" || p->name == "join");
}

namespace {

class Builder {
 public:
  explicit Builder(Cfg& cfg) : cfg_(cfg) {}

  Loc fresh() { return cfg_.num_locations++; }

  void edge(Loc a, Operation op, Loc b) { cfg_.edges.push_back(Edge{a, std::move(op), b}); }

  void guard(Loc a, const Formula& cond, Loc b) {
    for (const auto& cube : logic::to_dnf(cond)) {
      std::vector<Formula> lits;
      for (const auto& at : cube) lits.push_back(Formula::atom(at));
      edge(a, Assume{Formula::conj(std::move(lits))}, b);
    }
  }

  void block(const std::vector<Stmt>& stmts, Loc from, Loc to) {
    if (stmts.empty()) {
      if (from != to) edge(from, logic::skip(), to);
      return;
    }
    Loc cur = from;
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      const Loc nxt = i + 1 == stmts.size() ? to : fresh();
      stmt(stmts[i], cur, nxt);
      cur = nxt;
    }
  }

  void stmt(const Stmt& s, Loc from, Loc to) {
    switch (s.kind) {
      case Stmt::Kind::Assign:
      case Stmt::Kind::Local: edge(from, Assign{*s.target, s.value}, to); break;
      case Stmt::Kind::Havoc: edge(from, Assign{*s.target, std::nullopt}, to); break;
      case Stmt::Kind::Prim: edge(from, PrimCall{s.target, s.prim, s.arg}, to); break;
      case Stmt::Kind::Assert: {
        guard(from, s.cond, to);
        const Formula neg = s.cond.negate();
        if (!logic::to_dnf(neg).empty()) {
          const Loc err = fresh();
          cfg_.error_locations.insert(err);
          guard(from, neg, err);
        }
        break;
      }
      case Stmt::Kind::If: {
        branch(s.then_body, s.cond, from, to);
        branch(s.else_body, s.cond.negate(), from, to);
        break;
      }
      case Stmt::Kind::While: {
        Loc head = from;
        if (head == cfg_.entry) {
          head = fresh();
          edge(from, logic::skip(), head);
        }
        if (s.then_body.empty()) {
          guard(head, s.cond, head);
        } else {
          const Loc b0 = fresh();
          guard(head, s.cond, b0);
          block(s.then_body, b0, head);
        }
        guard(head, s.cond.negate(), to);
        break;
      }
    }
  }

  void branch(const std::vector<Stmt>& body, const Formula& cond, Loc from, Loc to) {
    if (body.empty()) {
      guard(from, cond, to);
      return;
    }
    if (logic::to_dnf(cond).empty()) return;
    const Loc b0 = fresh();
    guard(from, cond, b0);
    block(body, b0, to);
  }

 private:
  Cfg& cfg_;
};

// Drops unreachable locations (other than entry and exit) and renumbers.
void compact(Cfg& cfg) {
  std::vector<bool> seen(static_cast<std::size_t>(cfg.num_locations), false);
  std::vector<std::vector<int>> succ(seen.size());
  for (const auto& e : cfg.edges) succ[static_cast<std::size_t>(e.src)].push_back(e.dst);
  std::deque<Loc> q{cfg.entry};
  seen[static_cast<std::size_t>(cfg.entry)] = true;
  while (!q.empty()) {
    const Loc l = q.front();
    q.pop_front();
    for (Loc d : succ[static_cast<std::size_t>(l)])
      if (!seen[static_cast<std::size_t>(d)]) {
        seen[static_cast<std::size_t>(d)] = true;
        q.push_back(d);
      }
  }
  seen[static_cast<std::size_t>(cfg.exit)] = true;
  std::vector<Loc> remap(seen.size(), -1);
  int n = 0;
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i]) remap[i] = n++;
  std::vector<Edge> edges;
  for (auto& e : cfg.edges)
    if (seen[static_cast<std::size_t>(e.src)])
      edges.push_back(Edge{remap[static_cast<std::size_t>(e.src)], std::move(e.op), remap[static_cast<std::size_t>(e.dst)]});
  std::set<Loc> errs;
  for (Loc l : cfg.error_locations)
    if (seen[static_cast<std::size_t>(l)]) errs.insert(remap[static_cast<std::size_t>(l)]);
  cfg.edges = std::move(edges);
  cfg.error_locations = std::move(errs);
  cfg.entry = remap[static_cast<std::size_t>(cfg.entry)];
  cfg.exit = remap[static_cast<std::size_t>(cfg.exit)];
  cfg.num_locations = n;
  cfg.out.assign(static_cast<std::size_t>(n), {});
  for (std::size_t i = 0; i < cfg.edges.size(); ++i)
    cfg.out[static_cast<std::size_t>(cfg.edges[i].src)].push_back(static_cast<int>(i));
}

}  // namespace

std::vector<Cfg> build_cfgs(const ThreadedProgram& p) {
  std::vector<Cfg> out;
  for (std::size_t t = 0; t < p.threads.size(); ++t) {
    const Thread& th = p.threads[t];
    Cfg cfg;
    cfg.thread = th.name;
    Builder b(cfg);
    cfg.entry = b.fresh();
    std::vector<Stmt> body;
    if (t == 0) {
      for (const auto& g : p.globals) {
        Stmt init;
        init.kind = Stmt::Kind::Assign;
        init.target = logic::program_var(g);
        auto it = p.global_init.find(g);
        init.value = LinearTerm(logic::Rational(it == p.global_init.end() ? 0 : it->second));
        body.push_back(std::move(init));
      }
    }
    body.insert(body.end(), th.body.begin(), th.body.end());
    if (body.empty()) {
      cfg.exit = cfg.entry;
    } else {
      cfg.exit = b.fresh();
      b.block(body, cfg.entry, cfg.exit);
    }
    compact(cfg);
    out.push_back(std::move(cfg));
  }
  return out;
}

std::vector<std::string> check_cfg(const Cfg& cfg) {
  std::vector<std::string> problems;
  for (const auto& e : cfg.edges) {
    if (e.dst == cfg.entry) problems.push_back("edge into entry from l" + std::to_string(e.src));
    if (cfg.is_error(e.src)) problems.push_back("error location l" + std::to_string(e.src) + " has a successor");
    if (e.src == cfg.exit) problems.push_back("exit has a successor");
  }
  if (cfg.is_error(cfg.exit)) problems.push_back("exit is an error location");
  std::vector<bool> seen(static_cast<std::size_t>(cfg.num_locations), false);
  std::deque<Loc> q{cfg.entry};
  seen[static_cast<std::size_t>(cfg.entry)] = true;
  while (!q.empty()) {
    const Loc l = q.front();
    q.pop_front();
    for (int ei : cfg.outgoing(l)) {
      const Loc d = cfg.edges[static_cast<std::size_t>(ei)].dst;
      if (!seen[static_cast<std::size_t>(d)]) {
        seen[static_cast<std::size_t>(d)] = true;
        q.push_back(d);
      }
    }
  }
  for (int l = 0; l < cfg.num_locations; ++l)
    if (!seen[static_cast<std::size_t>(l)] && l != cfg.exit) problems.push_back("l" + std::to_string(l) + " unreachable");
  return problems;
}

std::string to_dot(const Cfg& cfg) {
  std::ostringstream os;
  os << "digraph \"" << cfg.thread << "\" {\n";
  for (int l = 0; l < cfg.num_locations; ++l) {
    os << "  l" << l << " [label=\"l" << l << "\"";
    if (cfg.is_error(l)) os << ", shape=box, color=red";
    if (l == cfg.exit) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (const auto& e : cfg.edges) {
    std::string label = logic::to_string(e.op);
    for (auto& c : label)
      if (c == '"') c = '\'';
    os << "  l" << e.src << " -> l" << e.dst << " [label=\"" << label << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace esst::frontend
