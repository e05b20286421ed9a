#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace esst::logic {

using Rational = mpq_class;

/// Interned variable symbol. Program variables carry no index; SSA copies and
/// fresh symbols produced by strongest-post and havoc carry one.
using VarId = std::uint32_t;

enum class SymbolKind : std::uint8_t { Program, Ssa, Fresh };

struct SymbolInfo {
  std::string name;
  SymbolKind kind;
  int index;
};

VarId program_var(std::string_view name);
VarId ssa_var(std::string_view base, int index);
VarId fresh_var(std::string_view base, int index);

const SymbolInfo& symbol_info(VarId id);
std::string symbol_name(VarId id);

/// Program variable underlying an SSA copy; program variables map to themselves.
/// Fresh symbols have no base and are returned unchanged.
VarId strip_ssa(VarId id);

inline bool is_program_var(VarId id) { return symbol_info(id).kind == SymbolKind::Program; }

/// Deterministic source of fresh symbols. Each abstract-post call uses its own
/// instance so that identical queries produce identical formulas.
class FreshNames {
 public:
  explicit FreshNames(std::string prefix = "") : prefix_(std::move(prefix)) {}
  VarId next(std::string_view hint);

 private:
  std::string prefix_;
  int counter_ = 0;
};

std::string to_string(const Rational& r);

}  // namespace esst::logic
