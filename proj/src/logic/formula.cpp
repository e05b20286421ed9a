#include "esst/logic/formula.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace esst::logic {

struct Formula::Node {
  Kind kind;
  std::optional<Atom> atom;
  std::vector<Formula> children;
  std::size_t hash;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const auto node = std::make_shared<const Node>(Node{Kind::True, std::nullopt, {}, 0x51});
  return Formula(node);
}

Formula Formula::bottom() {
  static const auto node = std::make_shared<const Node>(Node{Kind::False, std::nullopt, {}, 0x7a});
  return Formula(node);
}

Formula Formula::atom(const Atom& a) {
  if (auto v = a.constant_value()) return *v ? top() : bottom();
  return Formula(std::make_shared<const Node>(Node{Kind::Atom, a, {}, mix(0x33, a.hash())}));
}

Formula Formula::conj(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    switch (p.kind()) {
      case Kind::True: break;
      case Kind::False: return bottom();
      case Kind::And:
        for (const auto& c : p.children()) flat.push_back(c);
        break;
      default: flat.push_back(std::move(p));
    }
  }
  // Drop syntactic duplicates, keep first-occurrence order.
  std::vector<Formula> uniq;
  for (auto& f : flat)
    if (std::find(uniq.begin(), uniq.end(), f) == uniq.end()) uniq.push_back(std::move(f));
  if (uniq.empty()) return top();
  if (uniq.size() == 1) return uniq.front();
  std::size_t h = 0xA1;
  for (const auto& c : uniq) h = mix(h, c.hash());
  return Formula(std::make_shared<const Node>(Node{Kind::And, std::nullopt, std::move(uniq), h}));
}

Formula Formula::disj(std::vector<Formula> parts) {
  std::vector<Formula> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    switch (p.kind()) {
      case Kind::False: break;
      case Kind::True: return top();
      case Kind::Or:
        for (const auto& c : p.children()) flat.push_back(c);
        break;
      default: flat.push_back(std::move(p));
    }
  }
  std::vector<Formula> uniq;
  for (auto& f : flat)
    if (std::find(uniq.begin(), uniq.end(), f) == uniq.end()) uniq.push_back(std::move(f));
  if (uniq.empty()) return bottom();
  if (uniq.size() == 1) return uniq.front();
  std::size_t h = 0xB7;
  for (const auto& c : uniq) h = mix(h, c.hash());
  return Formula(std::make_shared<const Node>(Node{Kind::Or, std::nullopt, std::move(uniq), h}));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Atom& Formula::as_atom() const {
  if (!node_->atom) throw std::logic_error("formula is not an atom");
  return *node_->atom;
}

const std::vector<Formula>& Formula::children() const { return node_->children; }

Formula negate_atom(const Atom& a) {
  const LinearTerm& t = a.term();
  switch (a.rel()) {
    case Rel::Lt: return Formula::atom(-t, Rel::Le);
    case Rel::Le: return Formula::atom(-t, Rel::Lt);
    case Rel::Eq: return Formula::disj(Formula::atom(t, Rel::Lt), Formula::atom(-t, Rel::Lt));
  }
  return Formula::top();
}

Formula Formula::negate() const {
  switch (kind()) {
    case Kind::True: return bottom();
    case Kind::False: return top();
    case Kind::Atom: return negate_atom(as_atom());
    case Kind::And: {
      std::vector<Formula> parts;
      for (const auto& c : children()) parts.push_back(c.negate());
      return disj(std::move(parts));
    }
    case Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& c : children()) parts.push_back(c.negate());
      return conj(std::move(parts));
    }
  }
  return *this;
}

Formula Formula::rename(const std::function<VarId(VarId)>& f) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False: return *this;
    case Kind::Atom: return atom(as_atom().rename(f));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& c : children()) parts.push_back(c.rename(f));
      return kind() == Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }
  }
  return *this;
}

Formula Formula::substitute(VarId v, const LinearTerm& t) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False: return *this;
    case Kind::Atom: return atom(as_atom().substitute(v, t));
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> parts;
      for (const auto& c : children()) parts.push_back(c.substitute(v, t));
      return kind() == Kind::And ? conj(std::move(parts)) : disj(std::move(parts));
    }
  }
  return *this;
}

std::set<VarId> Formula::vars() const {
  std::set<VarId> out;
  std::vector<Atom> atoms;
  collect_atoms(atoms);
  for (const auto& a : atoms)
    for (VarId v : a.vars()) out.insert(v);
  return out;
}

void Formula::collect_atoms(std::vector<Atom>& out) const {
  if (kind() == Kind::Atom) {
    out.push_back(as_atom());
    return;
  }
  for (const auto& c : children()) c.collect_atoms(out);
}

std::size_t Formula::hash() const { return node_->hash; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash || node_->kind != other.node_->kind) return false;
  if (node_->kind == Kind::Atom) return *node_->atom == *other.node_->atom;
  return node_->children == other.node_->children;
}

std::string Formula::to_string() const {
  switch (kind()) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Atom: return as_atom().to_string();
    case Kind::And:
    case Kind::Or: {
      std::string sep = kind() == Kind::And ? " && " : " || ";
      std::string out = "(";
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) out += sep;
        out += children()[i].to_string();
      }
      return out + ")";
    }
  }
  return "?";
}

namespace {

std::string smt_rational(const Rational& r) {
  std::string s;
  const Rational a = abs(r);
  if (a.get_den() == 1) s = a.get_num().get_str();
  else s = "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
  return r < 0 ? "(- " + s + ")" : s;
}

std::string smt_term(const LinearTerm& t) {
  std::vector<std::string> parts;
  for (const auto& [v, c] : t.entries()) {
    const std::string name = "|" + symbol_name(v) + "|";
    parts.push_back(c == 1 ? name : "(* " + smt_rational(c) + " " + name + ")");
  }
  if (t.constant() != 0 || parts.empty()) parts.push_back(smt_rational(t.constant()));
  if (parts.size() == 1) return parts.front();
  std::string out = "(+";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

}  // namespace

std::string to_smtlib(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Atom: {
      const auto& a = f.as_atom();
      const char* op = a.rel() == Rel::Lt ? "<" : a.rel() == Rel::Le ? "<=" : "=";
      return std::string("(") + op + " " + smt_term(a.term()) + " 0)";
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string out = f.kind() == Formula::Kind::And ? "(and" : "(or";
      for (const auto& c : f.children()) out += " " + to_smtlib(c);
      return out + ")";
    }
  }
  return "true";
}

}  // namespace esst::logic
