#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "esst/logic/operation.hpp"

namespace esst::logic {

/// SSA encoding of an operation sequence. groups[i] holds the conjuncts
/// contributed by ops[i]; index_after[i] maps each program variable touched so
/// far to its SSA index after ops[i].
struct PathFormula {
  std::vector<std::vector<Atom>> groups;
  std::vector<std::map<VarId, int>> index_after;

  Formula formula() const;
  std::vector<Atom> atoms() const;
};

/// Assume conditions must be conjunctions of atoms. A PrimCall with a target
/// is encoded as target := 0 (primitives return 0).
PathFormula path_formula(std::span<const Operation> ops);

/// Program variable copy at SSA index i (index 0 is the initial value).
VarId ssa_of(VarId program_var, int index);

class SatisfiablePathError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Craig interpolant of A and B (both conjunctions, A ∧ B unsatisfiable)
/// obtained from the Farkas combination of A's atoms.
Formula interpolate(std::span<const Atom> a, std::span<const Atom> b);

/// One interpolant per cut k = 1..n-1, all from a single refutation, over SSA
/// variables. Throws SatisfiablePathError if the path is feasible.
std::vector<Formula> interpolate_sequence(std::span<const Operation> ops);
std::vector<Formula> interpolate_groups(const std::vector<std::vector<Atom>>& groups);

}  // namespace esst::logic
