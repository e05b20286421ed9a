#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "esst/concrete/interpreter.hpp"
#include "esst/logic/post.hpp"
#include "esst/por/por.hpp"

namespace esst::engine {

using concrete::System;
using frontend::Loc;
using logic::Formula;
using logic::Operation;
using logic::Precision;

enum class Verdict { Safe, Unsafe, Unknown };
const char* verdict_name(Verdict v);

struct Options {
  por::Mode mode = por::Mode::Both;
  std::size_t max_predicates = 16;
  double timeout_seconds = 60.0;
  std::size_t max_refinements = 2000;
  std::size_t max_nodes = 5'000'000;
  bool thread_placement = false;  // put refinement predicates into λ(T) instead of λ(l)
  std::vector<long> replay_values{-1, 0, 1, 2};
  logic::SolverLimits limits;
};

struct Stats {
  std::size_t nodes = 0;        // ARF nodes created over the whole run
  std::size_t final_nodes = 0;  // nodes in the final ARF
  std::size_t covered = 0;
  std::size_t refinements = 0;
  std::size_t predicates = 0;
  std::size_t persistent_reductions = 0;
  std::size_t sleep_hits = 0;
  std::size_t cycle_reexpansions = 0;
  std::size_t deadlocks = 0;
  std::map<std::size_t, std::size_t> persistent_sizes;
  double wall_ms = 0;
};

/// λ(l) per (thread, location), λ(T) per thread, and the global π.
struct PrecisionLedger {
  std::map<std::pair<int, Loc>, Precision> location;
  std::vector<Precision> thread;
  Precision global;

  Precision at(int t, Loc l) const;
  bool add_location(int t, Loc l, const logic::Atom& p);
  /// Adds p to λ(T) and to λ(l) for every location of T, keeping λ(T) ⊆ λ(l).
  bool add_thread(int t, int num_locations, const logic::Atom& p);
  bool add_global(const logic::Atom& p) { return global.insert(p); }
  std::size_t total() const;
  bool invariant_holds(const std::vector<frontend::Cfg>& cfgs) const;
};

/// Predicates over the running thread's locals only go to λ(l) (or λ(T) at
/// thread level); anything else goes to π, and also to λ(l) when it mentions
/// no other thread's locals.
void place_predicate(PrecisionLedger& ledger, const System& sys, int thread, Loc l, const logic::Atom& p,
                     bool thread_level);

struct ArfNode {
  enum class Link { Root, Edge, Connector };

  int id = -1;
  std::vector<Loc> locs;
  std::vector<Formula> regions;  // one per thread
  Formula global;
  sched::SchedulerState sched;
  por::BlockSet sleep;

  int parent = -1;
  Link link = Link::Root;
  int thread = -1;  // running thread of the edge, or the thread a connector schedules
  int edge = -1;    // CFG edge index; -1 for the silent exit step
  Operation label = logic::skip();
  bool end_of_instant = false;

  std::vector<int> children;
  bool unsat = false;
  bool expanded = false;
  bool removed = false;
  int covered_by = -1;
  std::vector<int> withheld;  // scheduler choices (threads) not expanded under POR

  Formula conjunction() const;
  bool running() const { return sched.running() >= 0; }
};

struct Counterexample {
  std::vector<int> path;            // node ids from the root to the error node
  std::vector<Operation> ops;       // suppressed operation sequence
  std::vector<int> op_nodes;        // node reached by each op
  std::vector<concrete::Step> steps;
};

struct Result {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  Stats stats;
  std::optional<concrete::Trace> trace;
  std::optional<Counterexample> counterexample;
};

class Checker {
 public:
  Checker(const System& sys, Options opts = {});

  Result run();

  // Pieces of the algorithm, exposed for tests.
  int initial_node();
  std::vector<int> expand_e1(int n);
  std::vector<int> expand_e2(int n);
  std::vector<int> expand_nonrunning_por(int n);
  bool is_error(int n) const;
  int find_coverer(int n);
  bool covers(int a, int b);
  Counterexample counterexample_to(int n) const;
  enum class CexStatus { Feasible, Spurious, Unconfirmed };
  CexStatus check_counterexample(const Counterexample& cex, std::optional<concrete::Trace>& trace);
  /// Returns false on divergence.
  bool refine(const Counterexample& cex);

  const ArfNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t node_count() const { return nodes_.size(); }
  PrecisionLedger& ledger() { return ledger_; }
  const Stats& stats() const { return stats_; }
  const System& system() const { return sys_; }
  std::string to_dot() const;

  Formula apost(const Formula& phi, const Operation& op, const Precision& prec);

 private:
  int add_node(ArfNode n);
  void push(int n);
  void remove_subtree(int n);
  bool sat(const Formula& f);
  bool entails(const Formula& a, const Formula& b);
  std::size_t bucket_key(const ArfNode& n) const;
  void register_expanded(int n);
  void check_budget();
  std::vector<int> make_connector_children(int n, const std::vector<sched::SchedChoice>& choices,
                                           const std::vector<std::size_t>& selected,
                                           const std::vector<por::BlockSet>& sleeps);

  struct PostKey {
    Formula phi;
    Operation op;
    Precision prec;
    bool operator==(const PostKey& o) const { return phi == o.phi && op == o.op && prec == o.prec; }
  };
  struct PostKeyHash {
    std::size_t operator()(const PostKey& k) const {
      return k.phi.hash() ^ (logic::hash_value(k.op) * 31) ^ (k.prec.hash() * 131);
    }
  };
  struct PairHash {
    std::size_t operator()(const std::pair<Formula, Formula>& p) const { return p.first.hash() * 17 ^ p.second.hash(); }
  };

  const System& sys_;
  Options opts_;
  por::DependenceRelation dep_;
  std::vector<ArfNode> nodes_;
  std::vector<int> worklist_;
  std::vector<bool> queued_;
  PrecisionLedger ledger_;
  Stats stats_;
  std::unordered_map<std::size_t, std::vector<int>> expanded_index_;
  std::unordered_map<int, std::vector<int>> covers_of_;
  std::unordered_map<PostKey, Formula, PostKeyHash> post_cache_;
  std::unordered_map<Formula, bool, logic::FormulaHash> sat_cache_;
  std::unordered_map<std::pair<Formula, Formula>, bool, PairHash> entail_cache_;
  std::map<std::size_t, std::size_t> refined_paths_;
  std::chrono::steady_clock::time_point start_;
};

Result run_esst(const System& sys, const Options& opts = {});

}  // namespace esst::engine
