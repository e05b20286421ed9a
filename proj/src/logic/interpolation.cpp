#include "esst/logic/interpolation.hpp"

#include "esst/logic/simplex.hpp"

namespace esst::logic {

VarId ssa_of(VarId v, int index) { return ssa_var(symbol_info(v).name, index); }

Formula PathFormula::formula() const {
  std::vector<Formula> parts;
  for (const auto& g : groups)
    for (const auto& a : g) parts.push_back(Formula::atom(a));
  return Formula::conj(std::move(parts));
}

std::vector<Atom> PathFormula::atoms() const {
  std::vector<Atom> out;
  for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

namespace {

void flatten_conj(const Formula& f, std::vector<Atom>& out) {
  switch (f.kind()) {
    case Formula::Kind::True: return;
    case Formula::Kind::False: out.push_back(Atom(LinearTerm(Rational(0)), Rel::Lt)); return;
    case Formula::Kind::Atom: out.push_back(f.as_atom()); return;
    case Formula::Kind::And:
      for (const auto& c : f.children()) flatten_conj(c, out);
      return;
    case Formula::Kind::Or:
      throw std::invalid_argument("path formula needs conjunctive assumptions: " + f.to_string());
  }
}

}  // namespace

PathFormula path_formula(std::span<const Operation> ops) {
  PathFormula pf;
  std::map<VarId, int> idx;
  auto current = [&](VarId v) {
    auto it = idx.find(v);
    return ssa_of(v, it == idx.end() ? 0 : it->second);
  };
  auto assign = [&](VarId target, const std::optional<LinearTerm>& value, std::vector<Atom>& out) {
    std::optional<LinearTerm> rhs;
    if (value) rhs = value->rename(current);
    const int next = (idx.count(target) ? idx[target] : 0) + 1;
    idx[target] = next;
    // x := * leaves the new copy unconstrained.
    if (rhs) out.push_back(Atom(LinearTerm::variable(ssa_of(target, next)) - *rhs, Rel::Eq));
  };
  for (const auto& op : ops) {
    std::vector<Atom> group;
    if (const auto* a = std::get_if<Assign>(&op)) {
      assign(a->target, a->value, group);
    } else if (const auto* c = std::get_if<Assume>(&op)) {
      std::vector<Atom> raw;
      flatten_conj(c->cond, raw);
      for (const auto& at : raw) group.push_back(at.rename(current));
    } else {
      const auto& p = std::get<PrimCall>(op);
      if (p.target) assign(*p.target, LinearTerm(Rational(0)), group);
    }
    pf.groups.push_back(std::move(group));
    pf.index_after.push_back(idx);
  }
  return pf;
}

namespace {

struct Combination {
  LinearTerm sum;
  bool strict = false;
  bool all_eq = true;
  bool any = false;
};

Formula to_interpolant(const Combination& c) {
  if (!c.any) return Formula::top();
  if (c.all_eq) return Formula::atom(c.sum, Rel::Eq);
  return Formula::atom(c.sum, c.strict ? Rel::Lt : Rel::Le);
}

}  // namespace

std::vector<Formula> interpolate_groups(const std::vector<std::vector<Atom>>& groups) {
  std::vector<Atom> all;
  std::vector<std::size_t> group_of;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (const auto& a : groups[g]) {
      all.push_back(a);
      group_of.push_back(g);
    }
  const auto r = solve_conjunction(all);
  if (r.sat) throw SatisfiablePathError("path formula is satisfiable");
  std::vector<Combination> per_group(groups.size());
  for (const auto& [idx, mu] : r.certificate.multipliers) {
    auto& c = per_group[group_of[idx]];
    c.sum += all[idx].term() * mu;
    c.any = true;
    if (all[idx].rel() != Rel::Eq) c.all_eq = false;
    if (all[idx].rel() == Rel::Lt && mu > 0) c.strict = true;
  }
  std::vector<Formula> out;
  Combination prefix;
  for (std::size_t k = 0; k + 1 < groups.size(); ++k) {
    const auto& c = per_group[k];
    if (c.any) {
      prefix.sum += c.sum;
      prefix.any = true;
      prefix.all_eq = prefix.all_eq && c.all_eq;
      prefix.strict = prefix.strict || c.strict;
    }
    out.push_back(to_interpolant(prefix));
  }
  return out;
}

std::vector<Formula> interpolate_sequence(std::span<const Operation> ops) {
  return interpolate_groups(path_formula(ops).groups);
}

Formula interpolate(std::span<const Atom> a, std::span<const Atom> b) {
  std::vector<std::vector<Atom>> groups{{a.begin(), a.end()}, {b.begin(), b.end()}};
  return interpolate_groups(groups).front();
}

}  // namespace esst::logic
