#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "esst/logic/linear.hpp"

namespace esst::logic {

using Model = std::map<VarId, Rational>;

/// Nonnegative (for < and <=) or arbitrary (for =) multipliers over the input
/// atoms whose weighted sum of terms is a constant K with K > 0, or K = 0 and
/// some strict atom with positive weight. Indices refer to the atom span passed
/// to solve_conjunction.
struct FarkasCertificate {
  std::vector<std::pair<std::size_t, Rational>> multipliers;
};

struct ConjunctionResult {
  bool sat = false;
  Model model;                    // when sat
  FarkasCertificate certificate;  // when unsat
};

/// Decide a conjunction of atoms over the rationals with a bounded-variable
/// simplex (Bland's rule; strict bounds via an infinitesimal).
ConjunctionResult solve_conjunction(std::span<const Atom> atoms);

/// Same decision without a certificate. Equalities with a unit coefficient are
/// solved and substituted first (the substituted atoms are re-tightened, so
/// this can refute conjunctions whose rational relaxation is feasible).
ConjunctionResult check_conjunction(std::span<const Atom> atoms);

/// Checks that the certificate really refutes the atoms. Used in tests and
/// debug assertions; independent of the simplex internals.
bool verify_certificate(std::span<const Atom> atoms, const FarkasCertificate& cert);

}  // namespace esst::logic
