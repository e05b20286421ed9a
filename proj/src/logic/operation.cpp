#include "esst/logic/operation.hpp"

namespace esst::logic {

Operation skip() { return Assume{Formula::top()}; }

std::set<VarId> vars_read(const Operation& op) {
  std::set<VarId> out;
  if (const auto* a = std::get_if<Assign>(&op)) {
    if (a->value)
      for (VarId v : a->value->vars()) out.insert(v);
  } else if (const auto* c = std::get_if<Assume>(&op)) {
    out = c->cond.vars();
  }
  return out;
}

std::set<VarId> vars_written(const Operation& op) {
  if (const auto* a = std::get_if<Assign>(&op)) return {a->target};
  if (const auto* p = std::get_if<PrimCall>(&op); p && p->target) return {*p->target};
  return {};
}

std::string to_string(const Operation& op) {
  if (const auto* a = std::get_if<Assign>(&op))
    return symbol_name(a->target) + " := " + (a->value ? a->value->to_string() : std::string("*"));
  if (const auto* c = std::get_if<Assume>(&op)) return "[" + c->cond.to_string() + "]";
  const auto& p = std::get<PrimCall>(op);
  std::string s;
  if (p.target) s = symbol_name(*p.target) + " := ";
  return s + p.name + "(" + p.arg + ")";
}

std::size_t hash_value(const Operation& op) {
  std::size_t h = op.index() * 0x9e3779b97f4a7c15ULL;
  if (const auto* a = std::get_if<Assign>(&op)) {
    h ^= std::hash<VarId>{}(a->target) + 0x1234 + (h << 6);
    if (a->value) h ^= a->value->hash() + (h << 6) + (h >> 2);
  } else if (const auto* c = std::get_if<Assume>(&op)) {
    h ^= c->cond.hash() + (h << 6);
  } else {
    const auto& p = std::get<PrimCall>(op);
    h ^= std::hash<std::string>{}(p.name + "(" + p.arg) + (h << 6);
    if (p.target) h ^= *p.target + (h >> 2);
  }
  return h;
}

}  // namespace esst::logic
