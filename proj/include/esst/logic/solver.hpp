#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "esst/logic/formula.hpp"
#include "esst/logic/simplex.hpp"

namespace esst::logic {

/// Raised when a query exceeds a configured resource bound. Callers turn it
/// into an UNKNOWN verdict; it never stands for SAT or UNSAT.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolverLimits {
  std::size_t max_branches = 1u << 18;  // disjunct choices explored per query
};

struct SatResult {
  bool sat = false;
  Model model;
};

/// Lazily expands the Boolean structure into conjunctive branches, pruning a
/// branch as soon as its atoms are already infeasible.
/// check_sat decides the rational relaxation exactly as solve_conjunction
/// does (its answers agree with interpolation); is_sat and entails use the
/// equality-eliminating check_conjunction.
SatResult check_sat(const Formula& f, const SolverLimits& limits = {});
bool is_sat(const Formula& f, const SolverLimits& limits = {});
bool entails(const Formula& phi, const Formula& psi, const SolverLimits& limits = {});
bool equivalent(const Formula& a, const Formula& b, const SolverLimits& limits = {});

/// Explicit DNF; throws CapacityError beyond max_cubes.
std::vector<std::vector<Atom>> to_dnf(const Formula& f, std::size_t max_cubes = 4096);

/// Satisfiable cubes of the DNF, found by a search that drops a branch as soon
/// as its atoms are infeasible; throws CapacityError beyond max_cubes.
std::vector<std::vector<Atom>> feasible_cubes(const Formula& f, std::size_t max_cubes = 4096);

std::size_t solver_query_count();

}  // namespace esst::logic
