#include "esst/logic/solver.hpp"

#include <algorithm>
#include <atomic>

namespace esst::logic {

namespace {

std::atomic<std::size_t> g_queries{0};

class Search {
 public:
  Search(const SolverLimits& limits, bool exact) : limits_(limits), exact_(exact) {}

  bool run(std::vector<Atom> atoms, std::vector<Formula> pending, std::size_t checked, Model* out) {
    while (!pending.empty()) {
      Formula f = std::move(pending.back());
      pending.pop_back();
      switch (f.kind()) {
        case Formula::Kind::True: break;
        case Formula::Kind::False: return false;
        case Formula::Kind::Atom: atoms.push_back(f.as_atom()); break;
        case Formula::Kind::And:
          for (const auto& c : f.children()) pending.push_back(c);
          break;
        case Formula::Kind::Or: {
          const auto& kids = f.children();
          const bool already = std::any_of(kids.begin(), kids.end(), [&](const Formula& k) {
            return k.kind() == Formula::Kind::Atom &&
                   std::find(atoms.begin(), atoms.end(), k.as_atom()) != atoms.end();
          });
          if (already) break;
          if (atoms.size() > checked) {
            if (!decide(atoms).sat) return false;
            checked = atoms.size();
          }
          for (const auto& k : kids) {
            if (++branches_ > limits_.max_branches)
              throw CapacityError("solver branch limit exceeded");
            auto next = pending;
            next.push_back(k);
            if (run(atoms, std::move(next), checked, out)) return true;
          }
          return false;
        }
      }
    }
    auto r = decide(atoms);
    if (r.sat && out) *out = std::move(r.model);
    return r.sat;
  }

 private:
  ConjunctionResult decide(const std::vector<Atom>& atoms) const {
    return exact_ ? solve_conjunction(atoms) : check_conjunction(atoms);
  }

  const SolverLimits& limits_;
  bool exact_;
  std::size_t branches_ = 0;
};

void collect(std::vector<Atom> atoms, std::vector<Formula> pending, std::size_t checked,
             std::vector<std::vector<Atom>>& out, std::size_t max_cubes) {
  while (!pending.empty()) {
    Formula f = std::move(pending.back());
    pending.pop_back();
    switch (f.kind()) {
      case Formula::Kind::True: break;
      case Formula::Kind::False: return;
      case Formula::Kind::Atom: atoms.push_back(f.as_atom()); break;
      case Formula::Kind::And:
        for (const auto& c : f.children()) pending.push_back(c);
        break;
      case Formula::Kind::Or: {
        if (atoms.size() > checked) {
          if (!check_conjunction(atoms).sat) return;
          checked = atoms.size();
        }
        for (const auto& k : f.children()) {
          auto next = pending;
          next.push_back(k);
          collect(atoms, std::move(next), checked, out, max_cubes);
        }
        return;
      }
    }
  }
  if (!check_conjunction(atoms).sat) return;
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  out.push_back(std::move(atoms));
  if (out.size() > max_cubes) throw CapacityError("DNF cube limit exceeded");
}

}  // namespace

std::vector<std::vector<Atom>> feasible_cubes(const Formula& f, std::size_t max_cubes) {
  ++g_queries;
  std::vector<std::vector<Atom>> out;
  collect({}, {f}, 0, out, max_cubes);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

SatResult run_search(const Formula& f, const SolverLimits& limits, bool exact) {
  ++g_queries;
  SatResult result;
  if (f.is_true()) {
    result.sat = true;
    return result;
  }
  if (f.is_false()) return result;
  Search s(limits, exact);
  result.sat = s.run({}, {f}, 0, &result.model);
  return result;
}

}  // namespace

SatResult check_sat(const Formula& f, const SolverLimits& limits) { return run_search(f, limits, true); }

bool is_sat(const Formula& f, const SolverLimits& limits) { return run_search(f, limits, false).sat; }

bool entails(const Formula& phi, const Formula& psi, const SolverLimits& limits) {
  if (psi.is_true() || phi.is_false() || phi == psi) return true;
  return !is_sat(Formula::conj(phi, psi.negate()), limits);
}

bool equivalent(const Formula& a, const Formula& b, const SolverLimits& limits) {
  return entails(a, b, limits) && entails(b, a, limits);
}

std::vector<std::vector<Atom>> to_dnf(const Formula& f, std::size_t max_cubes) {
  using Cubes = std::vector<std::vector<Atom>>;
  switch (f.kind()) {
    case Formula::Kind::True: return {{}};
    case Formula::Kind::False: return {};
    case Formula::Kind::Atom: return {{f.as_atom()}};
    case Formula::Kind::Or: {
      Cubes out;
      for (const auto& c : f.children()) {
        auto sub = to_dnf(c, max_cubes);
        out.insert(out.end(), sub.begin(), sub.end());
        if (out.size() > max_cubes) throw CapacityError("DNF cube limit exceeded");
      }
      return out;
    }
    case Formula::Kind::And: {
      Cubes acc{{}};
      for (const auto& c : f.children()) {
        auto sub = to_dnf(c, max_cubes);
        Cubes next;
        for (const auto& a : acc)
          for (const auto& b : sub) {
            auto cube = a;
            cube.insert(cube.end(), b.begin(), b.end());
            next.push_back(std::move(cube));
            if (next.size() > max_cubes) throw CapacityError("DNF cube limit exceeded");
          }
        acc = std::move(next);
      }
      return acc;
    }
  }
  return {};
}

std::size_t solver_query_count() { return g_queries.load(); }

}  // namespace esst::logic
