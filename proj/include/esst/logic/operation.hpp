#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>

#include "esst/logic/formula.hpp"

namespace esst::logic {

/// target := value, or target := * when value is empty.
struct Assign {
  VarId target;
  std::optional<LinearTerm> value;
  bool operator==(const Assign& o) const { return target == o.target && value == o.value; }
};

struct Assume {
  Formula cond;
  bool operator==(const Assume& o) const { return cond == o.cond; }
};

/// [target :=] name(arg). Arguments are literal event/thread names.
struct PrimCall {
  std::optional<VarId> target;
  std::string name;
  std::string arg;
  bool operator==(const PrimCall& o) const {
    return target == o.target && name == o.name && arg == o.arg;
  }
};

using Operation = std::variant<Assign, Assume, PrimCall>;

inline bool is_assign(const Operation& op) { return std::holds_alternative<Assign>(op); }
inline bool is_assume(const Operation& op) { return std::holds_alternative<Assume>(op); }
inline bool is_prim(const Operation& op) { return std::holds_alternative<PrimCall>(op); }

Operation skip();  // [true]

std::set<VarId> vars_read(const Operation& op);
std::set<VarId> vars_written(const Operation& op);
std::string to_string(const Operation& op);
std::size_t hash_value(const Operation& op);

}  // namespace esst::logic
