#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "esst/logic/linear.hpp"

namespace esst::logic {

/// Quantifier-free linear arithmetic formula in negation normal form.
/// Negation is applied eagerly (atoms are closed under negation up to a
/// disjunction for equalities), so only true/false/atom/and/or nodes exist.
/// Values are immutable and cheap to copy.
class Formula {
 public:
  enum class Kind : std::uint8_t { True, False, Atom, And, Or };

  Formula();  // true
  static Formula top();
  static Formula bottom();
  static Formula atom(const Atom& a);
  static Formula atom(LinearTerm term, Rel rel) { return atom(Atom(std::move(term), rel)); }
  static Formula conj(std::vector<Formula> parts);
  static Formula disj(std::vector<Formula> parts);
  static Formula conj(const Formula& a, const Formula& b) { return conj(std::vector<Formula>{a, b}); }
  static Formula disj(const Formula& a, const Formula& b) { return disj(std::vector<Formula>{a, b}); }

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  const Atom& as_atom() const;
  const std::vector<Formula>& children() const;

  Formula negate() const;
  Formula rename(const std::function<VarId(VarId)>& f) const;
  Formula substitute(VarId v, const LinearTerm& t) const;
  std::set<VarId> vars() const;
  void collect_atoms(std::vector<Atom>& out) const;

  template <typename Lookup>
  bool holds(Lookup&& value_of) const {
    switch (kind()) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Atom: return as_atom().holds(value_of);
      case Kind::And:
        for (const auto& c : children())
          if (!c.holds(value_of)) return false;
        return true;
      case Kind::Or:
        for (const auto& c : children())
          if (c.holds(value_of)) return true;
        return false;
    }
    return false;
  }

  std::size_t hash() const;
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  std::string to_string() const;

  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

Formula negate_atom(const Atom& a);

/// SMT-LIB style rendering (one s-expression) for external cross-checking.
std::string to_smtlib(const Formula& f);

}  // namespace esst::logic
