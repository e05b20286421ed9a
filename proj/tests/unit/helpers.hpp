#pragma once

#include "esst/logic/formula.hpp"
#include "esst/logic/operation.hpp"

namespace th {

using namespace esst::logic;

inline LinearTerm V(const char* n) { return LinearTerm::variable(program_var(n)); }
inline LinearTerm S(const char* n, int i) { return LinearTerm::variable(ssa_var(n, i)); }
inline LinearTerm C(long c) { return LinearTerm(Rational(c)); }

inline Formula lt(const LinearTerm& a, const LinearTerm& b) { return Formula::atom(a - b, Rel::Lt); }
inline Formula le(const LinearTerm& a, const LinearTerm& b) { return Formula::atom(a - b, Rel::Le); }
inline Formula eq(const LinearTerm& a, const LinearTerm& b) { return Formula::atom(a - b, Rel::Eq); }
inline Formula gt(const LinearTerm& a, const LinearTerm& b) { return lt(b, a); }
inline Formula ge(const LinearTerm& a, const LinearTerm& b) { return le(b, a); }

inline Operation assign(const char* x, const LinearTerm& e) { return Assign{program_var(x), e}; }
inline Operation havoc(const char* x) { return Assign{program_var(x), std::nullopt}; }
inline Operation assume(const Formula& f) { return Assume{f}; }

inline Atom atom_of(const Formula& f) { return f.as_atom(); }

}  // namespace th
