#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "esst/logic/symbol.hpp"

namespace esst::logic {

/// sum(coeff_i * var_i) + constant, kept sorted by variable id with no zero
/// coefficients.
class LinearTerm {
 public:
  using Entry = std::pair<VarId, Rational>;

  LinearTerm() = default;
  explicit LinearTerm(Rational constant) : constant_(std::move(constant)) {}
  static LinearTerm variable(VarId v, Rational coeff = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  const Rational& constant() const { return constant_; }
  bool is_constant() const { return entries_.empty(); }
  Rational coefficient(VarId v) const;
  std::vector<VarId> vars() const;

  LinearTerm& operator+=(const LinearTerm& other);
  LinearTerm& operator-=(const LinearTerm& other);
  LinearTerm& operator*=(const Rational& k);
  friend LinearTerm operator+(LinearTerm a, const LinearTerm& b) { return a += b; }
  friend LinearTerm operator-(LinearTerm a, const LinearTerm& b) { return a -= b; }
  friend LinearTerm operator*(LinearTerm a, const Rational& k) { return a *= k; }
  LinearTerm operator-() const;

  void add_term(VarId v, const Rational& coeff);
  void add_constant(const Rational& c) { constant_ += c; }

  /// Replace v by t.
  LinearTerm substitute(VarId v, const LinearTerm& t) const;
  LinearTerm rename(const std::function<VarId(VarId)>& f) const;

  template <typename Lookup>
  Rational evaluate(Lookup&& value_of) const {
    Rational acc = constant_;
    for (const auto& [v, c] : entries_) acc += c * value_of(v);
    return acc;
  }

  bool operator==(const LinearTerm& other) const;
  std::size_t hash() const;
  std::string to_string() const;

 private:
  std::vector<Entry> entries_;
  Rational constant_ = 0;
};

enum class Rel : std::uint8_t { Lt, Le, Eq };

/// term REL 0, normalized to integer coefficients with gcd 1. Equalities have
/// a positive leading coefficient, so syntactically equal predicates compare
/// equal.
class Atom {
 public:
  Atom(LinearTerm term, Rel rel);

  const LinearTerm& term() const { return term_; }
  Rel rel() const { return rel_; }

  /// For atoms without variables: their truth value.
  std::optional<bool> constant_value() const;
  std::vector<VarId> vars() const { return term_.vars(); }

  Atom rename(const std::function<VarId(VarId)>& f) const;
  Atom substitute(VarId v, const LinearTerm& t) const;

  template <typename Lookup>
  bool holds(Lookup&& value_of) const {
    const Rational v = term_.evaluate(value_of);
    switch (rel_) {
      case Rel::Lt: return v < 0;
      case Rel::Le: return v <= 0;
      case Rel::Eq: return v == 0;
    }
    return false;
  }

  bool operator==(const Atom& other) const { return rel_ == other.rel_ && term_ == other.term_; }
  bool operator<(const Atom& other) const;
  std::size_t hash() const;
  std::string to_string() const;

 private:
  LinearTerm term_;
  Rel rel_;
};

struct AtomHash {
  std::size_t operator()(const Atom& a) const { return a.hash(); }
};

}  // namespace esst::logic
