#include "esst/logic/linear.hpp"

#include <algorithm>
#include <sstream>

namespace esst::logic {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& r) {
  // Small values dominate; hashing through the string form is too slow.
  std::size_t h = 0;
  const mpz_srcptr num = r.get_num_mpz_t();
  const mpz_srcptr den = r.get_den_mpz_t();
  h = mix(h, mpz_get_ui(num));
  h = mix(h, static_cast<std::size_t>(mpz_sgn(num) + 2));
  h = mix(h, mpz_get_ui(den));
  return h;
}

}  // namespace

LinearTerm LinearTerm::variable(VarId v, Rational coeff) {
  LinearTerm t;
  t.add_term(v, coeff);
  return t;
}

Rational LinearTerm::coefficient(VarId v) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, VarId id) { return e.first < id; });
  if (it != entries_.end() && it->first == v) return it->second;
  return 0;
}

std::vector<VarId> LinearTerm::vars() const {
  std::vector<VarId> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

void LinearTerm::add_term(VarId v, const Rational& coeff) {
  if (coeff == 0) return;
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, VarId id) { return e.first < id; });
  if (it != entries_.end() && it->first == v) {
    it->second += coeff;
    if (it->second == 0) entries_.erase(it);
  } else {
    entries_.insert(it, Entry{v, coeff});
  }
}

LinearTerm& LinearTerm::operator+=(const LinearTerm& other) {
  for (const auto& [v, c] : other.entries_) add_term(v, c);
  constant_ += other.constant_;
  return *this;
}

LinearTerm& LinearTerm::operator-=(const LinearTerm& other) {
  for (const auto& [v, c] : other.entries_) add_term(v, -c);
  constant_ -= other.constant_;
  return *this;
}

LinearTerm& LinearTerm::operator*=(const Rational& k) {
  if (k == 0) {
    entries_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& e : entries_) e.second *= k;
  constant_ *= k;
  return *this;
}

LinearTerm LinearTerm::operator-() const {
  LinearTerm t = *this;
  t *= Rational(-1);
  return t;
}

LinearTerm LinearTerm::substitute(VarId v, const LinearTerm& t) const {
  const Rational c = coefficient(v);
  if (c == 0) return *this;
  LinearTerm out = *this;
  out.add_term(v, -c);
  out += t * c;
  return out;
}

LinearTerm LinearTerm::rename(const std::function<VarId(VarId)>& f) const {
  LinearTerm out(constant_);
  for (const auto& [v, c] : entries_) out.add_term(f(v), c);
  return out;
}

bool LinearTerm::operator==(const LinearTerm& other) const {
  return constant_ == other.constant_ && entries_ == other.entries_;
}

std::size_t LinearTerm::hash() const {
  std::size_t h = hash_rational(constant_);
  for (const auto& [v, c] : entries_) {
    h = mix(h, v);
    h = mix(h, hash_rational(c));
  }
  return h;
}

std::string LinearTerm::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : entries_) {
    if (first) {
      if (c == -1) os << "-";
      else if (c != 1) os << c.get_str() << "*";
    } else {
      if (c < 0) os << " - "; else os << " + ";
      const Rational a = abs(c);
      if (a != 1) os << a.get_str() << "*";
    }
    os << symbol_name(v);
    first = false;
  }
  if (first) {
    os << constant_.get_str();
  } else if (constant_ != 0) {
    os << (constant_ < 0 ? " - " : " + ") << Rational(abs(constant_)).get_str();
  }
  return os.str();
}

Atom::Atom(LinearTerm term, Rel rel) : term_(std::move(term)), rel_(rel) {
  if (term_.is_constant()) {
    // Canonical constant atoms: 0 < 0 (false) or 0 <= 0 (true) keeps truth value.
    const bool value = constant_value().value();
    term_ = LinearTerm(Rational(0));
    rel_ = value ? Rel::Le : Rel::Lt;
    return;
  }
  // Scale to integer coefficients.
  mpz_class lcm = 1;
  for (const auto& [v, c] : term_.entries()) lcm = ::lcm(lcm, mpz_class(c.get_den()));
  lcm = ::lcm(lcm, mpz_class(term_.constant().get_den()));
  term_ *= Rational(lcm);
  // All symbols range over the integers, so each atom is tightened on its own:
  // t < 0 becomes t + 1 <= 0, and the constant is rounded after dividing by
  // the gcd of the coefficients.
  if (rel_ == Rel::Lt) {
    term_.add_constant(1);
    rel_ = Rel::Le;
  }
  mpz_class g = 0;
  for (const auto& [v, c] : term_.entries()) g = ::gcd(g, mpz_class(c.get_num()));
  const mpz_class c = term_.constant().get_num();
  if (rel_ == Rel::Eq) {
    if (c % g != 0) {
      term_ = LinearTerm(Rational(0));
      rel_ = Rel::Lt;
      return;
    }
    if (g > 1) term_ *= Rational(mpz_class(1), g);
    if (term_.entries().front().second < 0) term_ *= Rational(-1);
  } else if (g > 1) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    LinearTerm scaled;
    for (const auto& [v, k] : term_.entries()) scaled.add_term(v, k / g);
    scaled.add_constant(Rational(q));
    term_ = std::move(scaled);
  }
}

std::optional<bool> Atom::constant_value() const {
  if (!term_.is_constant()) return std::nullopt;
  const Rational& c = term_.constant();
  switch (rel_) {
    case Rel::Lt: return c < 0;
    case Rel::Le: return c <= 0;
    case Rel::Eq: return c == 0;
  }
  return std::nullopt;
}

Atom Atom::rename(const std::function<VarId(VarId)>& f) const { return Atom(term_.rename(f), rel_); }

Atom Atom::substitute(VarId v, const LinearTerm& t) const { return Atom(term_.substitute(v, t), rel_); }

bool Atom::operator<(const Atom& other) const {
  if (rel_ != other.rel_) return rel_ < other.rel_;
  const auto& a = term_.entries();
  const auto& b = other.term_.entries();
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first;
    if (a[i].second != b[i].second) return a[i].second < b[i].second;
  }
  return term_.constant() < other.term_.constant();
}

std::size_t Atom::hash() const { return mix(term_.hash(), static_cast<std::size_t>(rel_)); }

std::string Atom::to_string() const {
  // Print as "lhs op rhs" with the constant moved to the right.
  if (term_.is_constant()) return constant_value().value() ? "true" : "false";
  LinearTerm lhs = term_;
  const Rational rhs = -lhs.constant();
  lhs.add_constant(-lhs.constant());
  const char* op = rel_ == Rel::Lt ? " < " : rel_ == Rel::Le ? " <= " : " = ";
  return lhs.to_string() + op + rhs.get_str();
}

}  // namespace esst::logic
