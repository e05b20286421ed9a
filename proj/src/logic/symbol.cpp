#include "esst/logic/symbol.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

namespace esst::logic {

namespace {

class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  VarId intern(std::string_view name, SymbolKind kind, int index) {
    std::string key = std::string(name);
    key += '\x1f';
    key += static_cast<char>('0' + static_cast<int>(kind));
    key += std::to_string(index);
    std::lock_guard lock(mu_);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<VarId>(infos_.size());
    infos_.push_back(SymbolInfo{std::string(name), kind, index});
    ids_.emplace(std::move(key), id);
    return id;
  }

  const SymbolInfo& info(VarId id) {
    std::lock_guard lock(mu_);
    return infos_.at(id);
  }

 private:
  std::mutex mu_;
  std::deque<SymbolInfo> infos_;
  std::unordered_map<std::string, VarId> ids_;
};

}  // namespace

VarId program_var(std::string_view name) {
  return SymbolTable::instance().intern(name, SymbolKind::Program, -1);
}

VarId ssa_var(std::string_view base, int index) {
  return SymbolTable::instance().intern(base, SymbolKind::Ssa, index);
}

VarId fresh_var(std::string_view base, int index) {
  return SymbolTable::instance().intern(base, SymbolKind::Fresh, index);
}

const SymbolInfo& symbol_info(VarId id) { return SymbolTable::instance().info(id); }

std::string symbol_name(VarId id) {
  const auto& info = symbol_info(id);
  switch (info.kind) {
    case SymbolKind::Program:
      return info.name;
    case SymbolKind::Ssa:
      return info.name + "@" + std::to_string(info.index);
    case SymbolKind::Fresh:
      return info.name + "!" + std::to_string(info.index);
  }
  return info.name;
}

VarId strip_ssa(VarId id) {
  const auto& info = symbol_info(id);
  if (info.kind == SymbolKind::Ssa) return program_var(info.name);
  return id;
}

VarId FreshNames::next(std::string_view hint) {
  std::string base = prefix_;
  base += hint;
  return fresh_var(base, counter_++);
}

std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace esst::logic
