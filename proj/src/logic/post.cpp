#include "esst/logic/post.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

namespace esst::logic {

Precision::Precision(std::vector<Atom> preds) : preds_(std::move(preds)) {
  std::sort(preds_.begin(), preds_.end());
  preds_.erase(std::unique(preds_.begin(), preds_.end()), preds_.end());
}

bool Precision::insert(const Atom& p) {
  auto it = std::lower_bound(preds_.begin(), preds_.end(), p);
  if (it != preds_.end() && *it == p) return false;
  preds_.insert(it, p);
  return true;
}

bool Precision::contains(const Atom& p) const { return std::binary_search(preds_.begin(), preds_.end(), p); }

Precision Precision::united(const Precision& other) const {
  std::vector<Atom> all = preds_;
  all.insert(all.end(), other.preds_.begin(), other.preds_.end());
  return Precision(std::move(all));
}

std::size_t Precision::hash() const {
  std::size_t h = 0xC3;
  for (const auto& p : preds_) h ^= p.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

Formula strongest_post(const Formula& phi, const Operation& op, FreshNames& fresh) {
  if (const auto* c = std::get_if<Assume>(&op)) return Formula::conj(phi, c->cond);
  if (const auto* a = std::get_if<Assign>(&op)) {
    if (phi.is_false()) return phi;
    const VarId x = a->target;
    const bool mentions = phi.vars().count(x) > 0;
    const bool rhs_mentions = a->value && a->value->coefficient(x) != 0;
    VarId old = x;
    if (mentions || rhs_mentions) {
      const auto used = phi.vars();
      do old = fresh.next(symbol_info(x).name);
      while (used.count(old));
    }
    const auto rn = [&](VarId v) { return v == x ? old : v; };
    Formula renamed = mentions ? phi.rename(rn) : phi;
    if (!a->value) return renamed;
    const LinearTerm rhs = rhs_mentions ? a->value->rename(rn) : *a->value;
    return Formula::conj(renamed, Formula::atom(LinearTerm::variable(x) - rhs, Rel::Eq));
  }
  throw std::invalid_argument("strongest_post: primitive call must be rewritten first");
}

Formula strongest_post(const Formula& phi, const Operation& op) {
  FreshNames fresh;
  return strongest_post(phi, op, fresh);
}

std::optional<Operation> havoc_of(const Operation& op, const std::function<bool(VarId)>& is_global) {
  for (VarId v : vars_written(op))
    if (is_global(v)) return Assign{v, std::nullopt};
  return std::nullopt;
}

namespace {

constexpr std::size_t kDnfBudget = 4096;

// A literal of the enumeration: predicate index with polarity.
using Cube = std::vector<std::int8_t>;  // +1 / -1 / 0 (absent), per relevant predicate

struct CubeHash {
  std::size_t operator()(const Cube& c) const {
    std::size_t h = 0;
    for (auto v : c) h = h * 31 + static_cast<std::size_t>(v + 1);
    return h;
  }
};

std::vector<std::size_t> relevant_predicates(const Formula& f, const Precision& prec) {
  std::set<VarId> reach = f.vars();
  std::vector<std::vector<VarId>> pv;
  for (const auto& p : prec) pv.push_back(p.vars());
  std::vector<bool> in(prec.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      if (in[i]) continue;
      if (std::any_of(pv[i].begin(), pv[i].end(), [&](VarId v) { return reach.count(v) > 0; })) {
        in[i] = true;
        changed = true;
        reach.insert(pv[i].begin(), pv[i].end());
      }
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < in.size(); ++i)
    if (in[i]) out.push_back(i);
  return out;
}

class Enumerator {
 public:
  Enumerator(std::vector<Atom> preds, const AbstractionOptions& opts) : preds_(std::move(preds)), opts_(opts) {}

  std::vector<Cube> run(std::vector<std::vector<Atom>> cubes) {
    std::vector<Live> live;
    for (auto& c : cubes) {
      auto r = check_conjunction(c);
      if (r.sat) live.push_back({std::move(c), std::move(r.model)});
    }
    Cube cur(preds_.size(), 0);
    if (!live.empty()) dfs(0, std::move(live), cur);
    return std::move(result_);
  }

  // Same enumeration without a DNF of the input, for inputs whose DNF is large.
  std::vector<Cube> run_lazy(const Formula& f) {
    Cube cur(preds_.size(), 0);
    std::vector<Formula> lits{f};
    dfs_lazy(0, lits, cur);
    return std::move(result_);
  }

 private:
  // A satisfiable cube with a witness; a literal the witness already
  // satisfies needs no solver call.
  struct Live {
    std::vector<Atom> atoms;
    Model model;
  };

  static bool extend(const Live& c, const Atom& lit, std::vector<Live>& out) {
    const auto value = [&](VarId v) -> Rational {
      auto it = c.model.find(v);
      return it == c.model.end() ? Rational(0) : it->second;
    };
    auto atoms = c.atoms;
    atoms.push_back(lit);
    if (lit.holds(value)) {
      Model m = c.model;
      for (VarId v : lit.vars()) m.emplace(v, Rational(0));
      out.push_back({std::move(atoms), std::move(m)});
      return true;
    }
    auto r = check_conjunction(atoms);
    if (!r.sat) return false;
    out.push_back({std::move(atoms), std::move(r.model)});
    return true;
  }

  void dfs(std::size_t i, std::vector<Live> live, Cube& cur) {
    if (i == preds_.size()) {
      result_.push_back(cur);
      return;
    }
    const Atom& p = preds_[i];
    // Positive literal.
    {
      std::vector<Live> next;
      for (const auto& c : live) extend(c, p, next);
      if (!next.empty()) {
        cur[i] = 1;
        dfs(i + 1, std::move(next), cur);
      }
    }
    // Negative literal; the negation of an equality splits in two.
    {
      std::vector<Atom> sides;
      if (p.rel() == Rel::Eq) {
        sides.emplace_back(p.term(), Rel::Lt);
        sides.emplace_back(-p.term(), Rel::Lt);
      } else {
        sides.emplace_back(-p.term(), p.rel() == Rel::Lt ? Rel::Le : Rel::Lt);
      }
      std::vector<Live> next;
      for (const auto& c : live)
        for (const auto& s : sides) extend(c, s, next);
      if (!next.empty()) {
        cur[i] = -1;
        dfs(i + 1, std::move(next), cur);
      }
    }
    cur[i] = 0;
  }

  void dfs_lazy(std::size_t i, std::vector<Formula>& lits, Cube& cur) {
    if (i == preds_.size()) {
      result_.push_back(cur);
      return;
    }
    for (std::int8_t sign : {std::int8_t{1}, std::int8_t{-1}}) {
      lits.push_back(sign > 0 ? Formula::atom(preds_[i]) : negate_atom(preds_[i]));
      if (is_sat(Formula::conj(lits), opts_.limits)) {
        cur[i] = sign;
        dfs_lazy(i + 1, lits, cur);
      }
      lits.pop_back();
    }
    cur[i] = 0;
  }

  std::vector<Atom> preds_;
  const AbstractionOptions& opts_;
  std::vector<Cube> result_;
};

// (c ∧ p) ∨ (c ∧ ¬p) = c, applied until nothing merges.
std::vector<Cube> merge_cubes(std::vector<Cube> cubes) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::unordered_set<Cube, CubeHash> set(cubes.begin(), cubes.end());
    std::vector<Cube> out;
    std::unordered_set<Cube, CubeHash> used;
    for (const auto& c : cubes) {
      if (used.count(c)) continue;
      bool merged = false;
      for (std::size_t i = 0; i < c.size() && !merged; ++i) {
        if (c[i] == 0) continue;
        Cube partner = c;
        partner[i] = static_cast<std::int8_t>(-c[i]);
        if (set.count(partner) && !used.count(partner)) {
          Cube m = c;
          m[i] = 0;
          used.insert(c);
          used.insert(partner);
          out.push_back(std::move(m));
          merged = true;
          changed = true;
        }
      }
      if (!merged) {
        used.insert(c);
        out.push_back(c);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    cubes = std::move(out);
  }
  return cubes;
}

}  // namespace

Formula abstract_formula(const Formula& f, const Precision& prec, const AbstractionOptions& opts) {
  if (f.is_false()) return f;
  std::optional<std::vector<std::vector<Atom>>> sat_cubes;
  try {
    sat_cubes = feasible_cubes(f, kDnfBudget);
    if (sat_cubes->empty()) return Formula::bottom();
  } catch (const CapacityError&) {
    if (!is_sat(f, opts.limits)) return Formula::bottom();
  }
  const auto rel = relevant_predicates(f, prec);
  if (rel.empty()) return Formula::top();
  if (rel.size() > opts.max_predicates)
    throw CapacityError("abstraction over " + std::to_string(rel.size()) + " predicates exceeds cap");
  std::vector<Atom> preds;
  for (auto i : rel) preds.push_back(prec.predicates()[i]);
  Enumerator en(preds, opts);
  auto cubes = merge_cubes(sat_cubes ? en.run(std::move(*sat_cubes)) : en.run_lazy(f));
  std::vector<Formula> disj;
  for (const auto& c : cubes) {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] > 0) lits.push_back(Formula::atom(preds[i]));
      if (c[i] < 0) lits.push_back(negate_atom(preds[i]));
    }
    disj.push_back(Formula::conj(std::move(lits)));
  }
  return Formula::disj(std::move(disj));
}

Formula abstract_post(const Formula& phi, const Operation& op, const Precision& prec,
                      const AbstractionOptions& opts) {
  FreshNames fresh("sp.");
  return abstract_formula(strongest_post(phi, op, fresh), prec, opts);
}

}  // namespace esst::logic
