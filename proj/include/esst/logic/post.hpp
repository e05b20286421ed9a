#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "esst/logic/operation.hpp"
#include "esst/logic/solver.hpp"

namespace esst::logic {

/// Sorted, duplicate-free set of predicates over program variables.
class Precision {
 public:
  Precision() = default;
  explicit Precision(std::vector<Atom> preds);

  bool insert(const Atom& p);  // true if new
  bool contains(const Atom& p) const;
  std::size_t size() const { return preds_.size(); }
  bool empty() const { return preds_.empty(); }
  const std::vector<Atom>& predicates() const { return preds_; }
  auto begin() const { return preds_.begin(); }
  auto end() const { return preds_.end(); }

  Precision united(const Precision& other) const;
  bool operator==(const Precision& o) const { return preds_ == o.preds_; }
  std::size_t hash() const;

 private:
  std::vector<Atom> preds_;
};

/// SP(phi, op). Assignments rename the overwritten variable to a fresh symbol;
/// x := * leaves x unconstrained. PrimCall is rejected (callers rewrite it to
/// an assignment first).
Formula strongest_post(const Formula& phi, const Operation& op, FreshNames& fresh);
Formula strongest_post(const Formula& phi, const Operation& op);

/// Assigns * to every written variable for which is_global holds; empty when
/// nothing global is written.
std::optional<Operation> havoc_of(const Operation& op, const std::function<bool(VarId)>& is_global);

struct AbstractionOptions {
  std::size_t max_predicates = 16;
  SolverLimits limits;
};

/// Strongest Boolean combination of predicates in prec implied by SP(phi, op),
/// by minterm enumeration. Predicates that share no variable (even
/// transitively) with SP are skipped: their minterms add up to true.
Formula abstract_post(const Formula& phi, const Operation& op, const Precision& prec,
                      const AbstractionOptions& opts = {});

/// Abstraction of an arbitrary formula (no operation applied).
Formula abstract_formula(const Formula& f, const Precision& prec, const AbstractionOptions& opts = {});

}  // namespace esst::logic
