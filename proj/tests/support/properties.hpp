#pragma once

#include <cstdint>
#include <string>

// Seeded randomized property checks shared by the unit tests and the
// acceptance runner.
namespace props {

struct Outcome {
  bool passed = true;
  int checked = 0;
  std::string detail;  // first failure, or a summary
};

// Random unsat conjunctive (A, B) pairs over at most six variables with
// coefficients in [-3, 3]; every interpolant must be implied by A,
// inconsistent with B, and mention only shared variables.
Outcome interpolation(std::uint32_t seed, int pairs);

// Random (state, op) pairs over variables in {-2..2}: every concrete
// successor of a state satisfying phi satisfies SP(phi, op).
Outcome sp_soundness(std::uint32_t seed, int pairs);

// p <=> g1 < g2, q <=> g1 = g2, a = g1 := g1 - 1, b = g2 := g2 - 1 from p:
// the two abstract orders disagree while the concrete ones commute.
Outcome noncommuting_pair();

// Random scheduler states with random block summaries: the persistent set is
// empty iff there are no choices, closed under dependence among enabled
// blocks, and the sleep-reduced set avoids the sleep set.
Outcome por(std::uint32_t seed, int states);

}  // namespace props
