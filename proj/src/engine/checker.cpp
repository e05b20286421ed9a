#include "esst/engine/checker.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "esst/logic/interpolation.hpp"

namespace esst::engine {

using logic::Assign;
using logic::Assume;
using logic::Atom;
using logic::LinearTerm;
using logic::PrimCall;
using logic::VarId;
using sched::Status;

namespace {

struct Timeout : std::runtime_error {
  Timeout() : std::runtime_error("timeout") {}
};

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Safe: return "SAFE";
    case Verdict::Unsafe: return "UNSAFE";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

// ---------------------------------------------------------------- ledger

Precision PrecisionLedger::at(int t, Loc l) const {
  Precision p;
  if (auto it = location.find({t, l}); it != location.end()) p = it->second;
  if (static_cast<std::size_t>(t) < thread.size()) p = p.united(thread[static_cast<std::size_t>(t)]);
  return p;
}

bool PrecisionLedger::add_location(int t, Loc l, const Atom& p) { return location[{t, l}].insert(p); }

bool PrecisionLedger::add_thread(int t, int num_locations, const Atom& p) {
  if (thread.size() <= static_cast<std::size_t>(t)) thread.resize(static_cast<std::size_t>(t) + 1);
  bool changed = thread[static_cast<std::size_t>(t)].insert(p);
  for (Loc l = 0; l < num_locations; ++l) changed |= location[{t, l}].insert(p);
  return changed;
}

std::size_t PrecisionLedger::total() const {
  std::size_t n = global.size();
  for (const auto& [k, p] : location) n += p.size();
  for (const auto& p : thread) n += p.size();
  return n;
}

bool PrecisionLedger::invariant_holds(const std::vector<frontend::Cfg>& cfgs) const {
  for (std::size_t t = 0; t < thread.size() && t < cfgs.size(); ++t)
    for (Loc l = 0; l < cfgs[t].num_locations; ++l) {
      auto it = location.find({static_cast<int>(t), l});
      for (const auto& p : thread[t])
        if (it == location.end() || !it->second.contains(p)) return false;
    }
  return true;
}

Formula ArfNode::conjunction() const {
  std::vector<Formula> parts{global};
  parts.insert(parts.end(), regions.begin(), regions.end());
  return Formula::conj(std::move(parts));
}

void place_predicate(PrecisionLedger& ledger, const System& sys, int thread, Loc l, const Atom& p,
                     bool thread_level) {
  bool only_local = true, local_or_global = true;
  for (VarId v : p.vars()) {
    const int owner = sys.program.owner_of(v);
    if (owner != thread) only_local = false;
    if (owner != thread && !sys.is_global(v)) local_or_global = false;
  }
  if (only_local) {
    if (thread_level)
      ledger.add_thread(thread, sys.cfgs[static_cast<std::size_t>(thread)].num_locations, p);
    else
      ledger.add_location(thread, l, p);
    return;
  }
  ledger.add_global(p);
  if (local_or_global) ledger.add_location(thread, l, p);
}

// ---------------------------------------------------------------- checker

Checker::Checker(const System& sys, Options opts)
    : sys_(sys), opts_(std::move(opts)), dep_(por::DependenceRelation::of(sys)) {
  ledger_.thread.resize(sys.num_threads());
  start_ = std::chrono::steady_clock::now();
}

void Checker::check_budget() {
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  if (opts_.timeout_seconds > 0 && elapsed > opts_.timeout_seconds) throw Timeout();
  if (nodes_.size() > opts_.max_nodes) throw logic::CapacityError("node limit reached");
}

int Checker::add_node(ArfNode n) {
  n.id = static_cast<int>(nodes_.size());
  if (n.parent >= 0) nodes_[static_cast<std::size_t>(n.parent)].children.push_back(n.id);
  nodes_.push_back(std::move(n));
  queued_.push_back(false);
  ++stats_.nodes;
  return nodes_.back().id;
}

void Checker::push(int n) {
  if (queued_[static_cast<std::size_t>(n)]) return;
  queued_[static_cast<std::size_t>(n)] = true;
  worklist_.push_back(n);
}

bool Checker::sat(const Formula& f) {
  if (f.is_false()) return false;
  if (f.is_true()) return true;
  if (auto it = sat_cache_.find(f); it != sat_cache_.end()) return it->second;
  const bool r = logic::is_sat(f, opts_.limits);
  sat_cache_.emplace(f, r);
  return r;
}

bool Checker::entails(const Formula& a, const Formula& b) {
  if (b.is_true() || a.is_false() || a == b) return true;
  auto key = std::make_pair(a, b);
  if (auto it = entail_cache_.find(key); it != entail_cache_.end()) return it->second;
  const bool r = logic::entails(a, b, opts_.limits);
  entail_cache_.emplace(std::move(key), r);
  return r;
}

Formula Checker::apost(const Formula& phi, const Operation& op, const Precision& prec) {
  PostKey key{phi, op, prec};
  if (auto it = post_cache_.find(key); it != post_cache_.end()) return it->second;
  logic::AbstractionOptions ao;
  ao.max_predicates = opts_.max_predicates;
  ao.limits = opts_.limits;
  Formula r = logic::abstract_post(phi, op, prec, ao);
  post_cache_.emplace(std::move(key), r);
  return r;
}

std::size_t Checker::bucket_key(const ArfNode& n) const {
  std::size_t h = n.sched.hash();
  for (Loc l : n.locs) h = mix(h, static_cast<std::size_t>(l));
  return h;
}

void Checker::register_expanded(int n) {
  expanded_index_[bucket_key(nodes_[static_cast<std::size_t>(n)])].push_back(n);
}

bool Checker::is_error(int n) const {
  const auto& nd = node(n);
  for (std::size_t t = 0; t < nd.locs.size(); ++t)
    if (sys_.cfgs[t].is_error(nd.locs[t])) return true;
  return false;
}

int Checker::initial_node() {
  ArfNode r;
  r.locs.reserve(sys_.num_threads());
  for (const auto& c : sys_.cfgs) r.locs.push_back(c.entry);
  r.regions.assign(sys_.num_threads(), Formula::top());
  r.global = Formula::top();
  r.sched = sched::initial_state(sys_.topo);
  return add_node(std::move(r));
}

// E1: the running thread takes one CFG edge (or terminates if parked at its exit).
std::vector<int> Checker::expand_e1(int n) {
  const ArfNode cur = nodes_[static_cast<std::size_t>(n)];
  const int i = cur.sched.running();
  const auto ti = static_cast<std::size_t>(i);
  const auto& cfg = sys_.cfgs[ti];
  const Loc here = cur.locs[ti];
  std::vector<int> out;
  const Formula phi_all = cur.conjunction();

  if (cfg.outgoing(here).empty()) {
    ArfNode c = cur;
    c.id = -1;
    c.children.clear();
    c.expanded = false;
    c.covered_by = -1;
    c.withheld.clear();
    c.parent = n;
    c.link = ArfNode::Link::Edge;
    c.thread = i;
    c.edge = -1;
    c.label = logic::skip();
    c.sched = sched::on_thread_exit(cur.sched, i);
    out.push_back(add_node(std::move(c)));
    return out;
  }

  auto global_pred = [&](VarId v) { return sys_.is_global(v); };
  for (int ei : cfg.outgoing(here)) {
    check_budget();
    const auto& e = cfg.edges[static_cast<std::size_t>(ei)];
    Operation op = e.op;
    sched::SchedulerState s2 = cur.sched;
    if (const auto* pc = std::get_if<PrimCall>(&e.op)) {
      auto r = sched::sexec(cur.sched, *pc, i, sys_.topo);
      s2 = std::move(r.state);
      if (pc->target) op = Assign{*pc->target, LinearTerm(logic::Rational(r.value))};
      else op = logic::skip();
    }
    ArfNode c;
    c.locs = cur.locs;
    c.locs[ti] = e.dst;
    c.regions.resize(cur.regions.size());
    c.regions[ti] = apost(phi_all, op, ledger_.at(i, e.dst));
    const auto hv = logic::havoc_of(op, global_pred);
    for (std::size_t j = 0; j < cur.regions.size(); ++j) {
      if (j == ti) continue;
      if (!hv) {
        c.regions[j] = cur.regions[j];
      } else {
        c.regions[j] = apost(Formula::conj(cur.regions[j], cur.global), *hv,
                             ledger_.at(static_cast<int>(j), cur.locs[j]));
      }
    }
    c.global = apost(phi_all, op, ledger_.global);
    if (e.dst == cfg.exit && s2.status[ti].kind == Status::Running) s2 = sched::on_thread_exit(s2, i);
    c.sched = std::move(s2);
    c.sleep = cur.sleep;
    c.parent = n;
    c.link = ArfNode::Link::Edge;
    c.thread = i;
    c.edge = ei;
    c.label = op;
    c.unsat = !sat(c.conjunction());
    out.push_back(add_node(std::move(c)));
  }
  return out;
}

std::vector<int> Checker::make_connector_children(int n, const std::vector<sched::SchedChoice>& choices,
                                                  const std::vector<std::size_t>& selected,
                                                  const std::vector<por::BlockSet>& sleeps) {
  std::vector<int> out;
  for (std::size_t k = 0; k < selected.size(); ++k) {
    const auto& ch = choices[selected[k]];
    const ArfNode& cur = nodes_[static_cast<std::size_t>(n)];
    ArfNode c;
    c.locs = cur.locs;
    c.regions = cur.regions;
    c.global = cur.global;
    c.sched = ch.state;
    c.sleep = k < sleeps.size() ? sleeps[k] : por::BlockSet{};
    c.parent = n;
    c.link = ArfNode::Link::Connector;
    c.thread = ch.thread;
    c.end_of_instant = ch.end_of_instant;
    out.push_back(add_node(std::move(c)));
  }
  return out;
}

// E2: every scheduler choice becomes the root of a new tree.
std::vector<int> Checker::expand_e2(int n) {
  const auto choices = sched::sched(nodes_[static_cast<std::size_t>(n)].sched);
  if (choices.empty()) {
    for (const auto& st : nodes_[static_cast<std::size_t>(n)].sched.status)
      if (st.kind != Status::Terminated) {
        ++stats_.deadlocks;
        break;
      }
  }
  std::vector<std::size_t> all(choices.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return make_connector_children(n, choices, all, {});
}

std::vector<int> Checker::expand_nonrunning_por(int n) {
  const ArfNode& cur = nodes_[static_cast<std::size_t>(n)];
  const auto choices = sched::sched(cur.sched);
  if (choices.empty() || choices.front().end_of_instant || opts_.mode == por::Mode::None) return expand_e2(n);

  std::vector<std::size_t> idx(choices.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  if (opts_.mode == por::Mode::Persistent || opts_.mode == por::Mode::Both) {
    auto pc = por::persistent(cur.sched, cur.locs, choices, dep_);
    idx = pc.chosen;
    ++stats_.persistent_sizes[idx.size()];
    if (idx.size() < choices.size()) ++stats_.persistent_reductions;
  }
  std::vector<por::BlockSet> sleeps;
  if (opts_.mode == por::Mode::Sleep || opts_.mode == por::Mode::Both) {
    std::vector<por::BlockId> cands;
    for (std::size_t k : idx) {
      const int t = choices[k].thread;
      cands.push_back({t, cur.locs[static_cast<std::size_t>(t)]});
    }
    auto sr = por::sleep(cur.sleep, cands, dep_);
    stats_.sleep_hits += cands.size() - sr.reduced.size();
    std::vector<std::size_t> kept;
    for (std::size_t r : sr.reduced) kept.push_back(idx[r]);
    idx = std::move(kept);
    sleeps = std::move(sr.next_sleep);
  }
  std::vector<int> withheld;
  for (std::size_t k = 0; k < choices.size(); ++k)
    if (std::find(idx.begin(), idx.end(), k) == idx.end()) withheld.push_back(choices[k].thread);
  nodes_[static_cast<std::size_t>(n)].withheld = std::move(withheld);
  return make_connector_children(n, choices, idx, sleeps);
}

bool Checker::covers(int a, int b) {
  const ArfNode& x = node(a);
  const ArfNode& y = node(b);
  if (x.removed || x.locs != y.locs || !(x.sched == y.sched)) return false;
  if (!entails(y.global, x.global)) return false;
  for (std::size_t t = 0; t < x.regions.size(); ++t)
    if (!entails(y.regions[t], x.regions[t])) return false;
  return true;
}

int Checker::find_coverer(int n) {
  auto it = expanded_index_.find(bucket_key(node(n)));
  if (it == expanded_index_.end()) return -1;
  for (int c : it->second) {
    if (c == n) continue;
    const ArfNode& cn = node(c);
    if (cn.removed || cn.covered_by >= 0 || !cn.expanded) continue;
    if (covers(c, n)) return c;
  }
  return -1;
}

void Checker::remove_subtree(int n) {
  std::vector<int> stack{n};
  while (!stack.empty()) {
    const int k = stack.back();
    stack.pop_back();
    ArfNode& nd = nodes_[static_cast<std::size_t>(k)];
    if (nd.removed) continue;
    nd.removed = true;
    for (int c : nd.children) stack.push_back(c);
    if (nd.covered_by >= 0) {
      auto& v = covers_of_[nd.covered_by];
      v.erase(std::remove(v.begin(), v.end(), k), v.end());
    }
    // nodes this one covered become uncovered and go back to the worklist
    if (auto it = covers_of_.find(k); it != covers_of_.end()) {
      for (int u : it->second) {
        ArfNode& un = nodes_[static_cast<std::size_t>(u)];
        if (un.removed || un.covered_by != k) continue;
        un.covered_by = -1;
        queued_[static_cast<std::size_t>(u)] = false;
        push(u);
      }
      covers_of_.erase(it);
    }
  }
}

Counterexample Checker::counterexample_to(int n) const {
  Counterexample cex;
  for (int k = n; k >= 0; k = node(k).parent) cex.path.push_back(k);
  std::reverse(cex.path.begin(), cex.path.end());
  for (int k : cex.path) {
    const ArfNode& nd = node(k);
    if (nd.link == ArfNode::Link::Connector) {
      cex.steps.push_back({concrete::Step::Kind::Scheduler, nd.thread, -1, std::nullopt, nd.end_of_instant});
    } else if (nd.link == ArfNode::Link::Edge) {
      if (nd.edge < 0) {
        cex.steps.push_back({concrete::Step::Kind::Exit, nd.thread, -1, std::nullopt, false});
        continue;
      }
      cex.steps.push_back({concrete::Step::Kind::Thread, nd.thread, nd.edge, std::nullopt, false});
      Operation op = nd.label;
      if (const auto* pc = std::get_if<PrimCall>(&op))
        op = pc->target ? Operation{Assign{*pc->target, LinearTerm(logic::Rational(0))}} : logic::skip();
      cex.ops.push_back(std::move(op));
      cex.op_nodes.push_back(k);
    }
  }
  return cex;
}

Checker::CexStatus Checker::check_counterexample(const Counterexample& cex,
                                                 std::optional<concrete::Trace>& trace) {
  const auto pf = logic::path_formula(cex.ops);
  const auto res = logic::check_sat(pf.formula(), opts_.limits);
  if (!res.sat) return CexStatus::Spurious;

  // havoc values from the model, with a value-set search as fallback
  std::vector<std::size_t> havoc_steps;
  std::vector<long> model_values;
  std::size_t op_k = 0;
  for (std::size_t s = 0; s < cex.steps.size(); ++s) {
    const auto& st = cex.steps[s];
    if (st.kind != concrete::Step::Kind::Thread) continue;
    const auto& e = sys_.cfgs[static_cast<std::size_t>(st.thread)].edges[static_cast<std::size_t>(st.edge)];
    if (const auto* a = std::get_if<Assign>(&e.op); a && !a->value) {
      havoc_steps.push_back(s);
      long v = 0;
      const auto& ia = pf.index_after[op_k];
      if (auto it = ia.find(a->target); it != ia.end()) {
        auto mv = res.model.find(logic::ssa_of(a->target, it->second));
        if (mv != res.model.end()) {
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), mv->second.get_num_mpz_t(), mv->second.get_den_mpz_t());
          v = q.get_si();
        }
      }
      model_values.push_back(v);
    }
    ++op_k;
  }
  auto attempt = [&](const std::vector<long>& vals) -> bool {
    auto steps = cex.steps;
    for (std::size_t k = 0; k < havoc_steps.size(); ++k) steps[havoc_steps[k]].havoc = vals[k];
    auto t = concrete::replay(sys_, steps);
    if (t && concrete::is_error(sys_, t->configs.back())) {
      trace = std::move(t);
      return true;
    }
    return false;
  };
  if (attempt(model_values)) return CexStatus::Feasible;
  std::vector<long> vals(havoc_steps.size());
  std::size_t budget = 100000;
  std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
    if (k == vals.size()) return budget-- > 0 && attempt(vals);
    for (long v : opts_.replay_values) {
      if (budget == 0) return false;
      vals[k] = v;
      if (search(k + 1)) return true;
    }
    return false;
  };
  if (!havoc_steps.empty() && search(0)) return CexStatus::Feasible;
  return CexStatus::Unconfirmed;
}

bool Checker::refine(const Counterexample& cex) {
  const auto pf = logic::path_formula(cex.ops);
  const auto itps = logic::interpolate_groups(pf.groups);
  ++stats_.refinements;
  const std::size_t before = ledger_.total();

  auto unssa = [](const Formula& f) { return f.rename([](VarId v) { return logic::strip_ssa(v); }); };
  int pivot = -1;
  for (std::size_t k = 0; k + 1 < cex.ops.size(); ++k) {
    const Formula psi = unssa(itps[k]);
    const int at = cex.op_nodes[k];
    const ArfNode& nd = node(at);
    const int i = nd.thread;
    const Loc l2 = nd.locs[static_cast<std::size_t>(i)];
    std::vector<Atom> atoms;
    psi.collect_atoms(atoms);
    for (const Atom& p : atoms)
      if (!p.constant_value()) place_predicate(ledger_, sys_, i, l2, p, opts_.thread_placement);
    if (pivot < 0 && !entails(nd.conjunction(), psi)) pivot = at;
  }
  // The error node itself: its region must become false.
  if (pivot < 0) pivot = cex.op_nodes.empty() ? cex.path.back() : cex.op_nodes.back();
  stats_.predicates = ledger_.total();

  std::size_t sig = 0;
  for (const auto& s : cex.steps) sig = mix(mix(sig, static_cast<std::size_t>(s.thread)), static_cast<std::size_t>(s.edge + 7));
  sig = mix(sig, static_cast<std::size_t>(pivot));
  if (auto it = refined_paths_.find(sig); it != refined_paths_.end() && it->second == ledger_.total() &&
                                          ledger_.total() == before)
    return false;
  refined_paths_[sig] = ledger_.total();

  const int parent = node(pivot).parent;
  ArfNode& pn = nodes_[static_cast<std::size_t>(parent)];
  const auto kids = pn.children;
  for (int c : kids) remove_subtree(c);
  pn.children.clear();
  pn.expanded = false;
  pn.withheld.clear();
  auto& bucket = expanded_index_[bucket_key(pn)];
  bucket.erase(std::remove(bucket.begin(), bucket.end(), parent), bucket.end());
  // nodes covered by the parent may now be covered only by a stale region
  if (auto it = covers_of_.find(parent); it != covers_of_.end()) {
    for (int u : it->second) {
      ArfNode& un = nodes_[static_cast<std::size_t>(u)];
      if (un.removed || un.covered_by != parent) continue;
      un.covered_by = -1;
      queued_[static_cast<std::size_t>(u)] = false;
      push(u);
    }
    covers_of_.erase(it);
  }
  queued_[static_cast<std::size_t>(parent)] = false;
  push(parent);
  return true;
}

Result Checker::run() {
  Result res;
  start_ = std::chrono::steady_clock::now();
  auto finish = [&](Verdict v, std::string reason) {
    res.verdict = v;
    res.reason = std::move(reason);
    stats_.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    stats_.final_nodes = 0;
    stats_.covered = 0;
    for (const auto& nd : nodes_)
      if (!nd.removed) {
        ++stats_.final_nodes;
        if (nd.covered_by >= 0) ++stats_.covered;
      }
    stats_.predicates = ledger_.total();
    res.stats = stats_;
    return res;
  };

  try {
    if (nodes_.empty()) push(initial_node());
    while (!worklist_.empty()) {
      check_budget();
      const int n = worklist_.back();
      worklist_.pop_back();
      queued_[static_cast<std::size_t>(n)] = false;
      {
        const ArfNode& nd = node(n);
        if (nd.removed || nd.expanded || nd.covered_by >= 0 || nd.unsat) continue;
      }
      if (is_error(n)) {
        auto cex = counterexample_to(n);
        std::optional<concrete::Trace> trace;
        const auto st = check_counterexample(cex, trace);
        if (st == CexStatus::Feasible) {
          res.trace = std::move(trace);
          res.counterexample = std::move(cex);
          return finish(Verdict::Unsafe, "feasible counterexample");
        }
        if (st == CexStatus::Unconfirmed) {
          res.counterexample = std::move(cex);
          return finish(Verdict::Unknown, "counterexample could not be replayed");
        }
        if (stats_.refinements >= opts_.max_refinements) return finish(Verdict::Unknown, "refinement limit");
        if (!refine(cex)) return finish(Verdict::Unknown, "refinement made no progress");
        continue;
      }

      std::vector<int> kids;
      if (node(n).running()) {
        if (int c = find_coverer(n); c >= 0) {
          nodes_[static_cast<std::size_t>(n)].covered_by = c;
          covers_of_[c].push_back(n);
          continue;
        }
        kids = expand_e1(n);
      } else if (opts_.mode == por::Mode::None) {
        if (int c = find_coverer(n); c >= 0) {
          nodes_[static_cast<std::size_t>(n)].covered_by = c;
          covers_of_[c].push_back(n);
          continue;
        }
        kids = expand_e2(n);
      } else {
        // cycle closed by a non-running ancestor: emit what the previous
        // scheduling point withheld before accepting the coverage
        std::vector<int> anc;
        for (int k = node(n).parent; k >= 0; k = node(k).parent)
          if (!node(k).running()) anc.push_back(k);
        int cov = -1;
        for (int a : anc)
          if (covers(a, n)) {
            cov = a;
            break;
          }
        if (cov >= 0) {
          const int prev = anc.front();
          ArfNode& pn = nodes_[static_cast<std::size_t>(prev)];
          if (!pn.withheld.empty()) {
            const auto choices = sched::sched(pn.sched);
            std::vector<std::size_t> sel;
            for (std::size_t k = 0; k < choices.size(); ++k)
              if (std::find(pn.withheld.begin(), pn.withheld.end(), choices[k].thread) != pn.withheld.end())
                sel.push_back(k);
            pn.withheld.clear();
            ++stats_.cycle_reexpansions;
            auto extra = make_connector_children(prev, choices, sel, {});
            for (auto it = extra.rbegin(); it != extra.rend(); ++it) push(*it);
          }
          nodes_[static_cast<std::size_t>(n)].covered_by = cov;
          covers_of_[cov].push_back(n);
          continue;
        }
        if (int c = find_coverer(n); c >= 0) {
          nodes_[static_cast<std::size_t>(n)].covered_by = c;
          covers_of_[c].push_back(n);
          continue;
        }
        kids = expand_nonrunning_por(n);
      }
      nodes_[static_cast<std::size_t>(n)].expanded = true;
      register_expanded(n);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it)
        if (!node(*it).unsat) push(*it);
    }
  } catch (const Timeout&) {
    return finish(Verdict::Unknown, "timeout");
  } catch (const logic::CapacityError& e) {
    return finish(Verdict::Unknown, std::string("capacity: ") + e.what());
  }
  return finish(Verdict::Safe, "no reachable error location");
}

std::string Checker::to_dot() const {
  std::ostringstream os;
  os << "digraph arf {\n  node [shape=box, fontname=monospace];\n";
  auto esc = [](std::string s) {
    std::string r;
    for (char c : s) {
      if (c == '"' || c == '\\') r += '\\';
      r += c;
    }
    return r;
  };
  for (const auto& nd : nodes_) {
    if (nd.removed) continue;
    os << "  n" << nd.id << " [label=\"" << nd.id << ": (";
    for (std::size_t t = 0; t < nd.locs.size(); ++t) os << (t ? "," : "") << concrete::location_name(nd.locs[t]);
    os << ")\\n" << esc(nd.sched.to_string(sys_.topo)) << "\\n" << esc(nd.conjunction().to_string()) << "\"";
    if (nd.covered_by >= 0) os << ", style=dashed";
    if (is_error(nd.id)) os << ", color=red";
    os << "];\n";
  }
  for (const auto& nd : nodes_) {
    if (nd.removed || nd.parent < 0) continue;
    os << "  n" << nd.parent << " -> n" << nd.id;
    if (nd.link == ArfNode::Link::Connector)
      os << " [style=dashed, label=\"run " << esc(sys_.topo.threads[static_cast<std::size_t>(nd.thread)]) << "\"]";
    else
      os << " [label=\"" << esc(logic::to_string(nd.label)) << "\"]";
    os << ";\n";
    if (nd.covered_by >= 0) os << "  n" << nd.id << " -> n" << nd.covered_by << " [style=dotted, constraint=false];\n";
  }
  os << "}\n";
  return os.str();
}

Result run_esst(const System& sys, const Options& opts) {
  Checker c(sys, opts);
  return c.run();
}

}  // namespace esst::engine
