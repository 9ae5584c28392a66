#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace elunif {

/// Process-wide string interning. Reads take a shared lock, inserts an
/// exclusive one. Returned references stay valid for the program lifetime
/// (std::deque never relocates existing elements on push_back).
class SymbolTable {
 public:
  static SymbolTable& instance() {
    static SymbolTable table;
    return table;
  }

  std::uint32_t intern(std::string_view text) {
    {
      std::shared_lock lock(mutex_);
      auto it = ids_.find(std::string(text));
      if (it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = ids_.try_emplace(std::string(text), 0);
    if (inserted) {
      it->second = static_cast<std::uint32_t>(names_.size());
      names_.emplace_back(text);
    }
    return it->second;
  }

  const std::string& text(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return names_.at(id);
  }

 private:
  SymbolTable() = default;

  mutable std::shared_mutex mutex_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

struct RoleName {
  std::uint32_t id = 0;

  static RoleName of(std::string_view text) {
    return RoleName{SymbolTable::instance().intern(text)};
  }
  const std::string& text() const { return SymbolTable::instance().text(id); }

  friend auto operator<=>(const RoleName&, const RoleName&) = default;
};

enum class NameKind : std::uint8_t { Constant, Variable };

/// A concept name together with its role in a problem. The same interned
/// string may exist both as a constant and as a variable; those are
/// different names.
struct ConceptName {
  std::uint32_t id = 0;
  NameKind kind = NameKind::Constant;

  static ConceptName constant(std::string_view text) {
    return ConceptName{SymbolTable::instance().intern(text), NameKind::Constant};
  }
  static ConceptName variable(std::string_view text) {
    return ConceptName{SymbolTable::instance().intern(text), NameKind::Variable};
  }

  bool is_variable() const { return kind == NameKind::Variable; }
  bool is_constant() const { return kind == NameKind::Constant; }
  const std::string& text() const { return SymbolTable::instance().text(id); }

  ConceptName as_variable() const { return {id, NameKind::Variable}; }
  ConceptName as_constant() const { return {id, NameKind::Constant}; }

  friend auto operator<=>(const ConceptName&, const ConceptName&) = default;
};

/// Prefix reserved for generated names (flattening, chain construction).
inline constexpr std::string_view kReservedPrefix = "_v";

inline bool is_reserved_name(std::string_view text) {
  return text.substr(0, kReservedPrefix.size()) == kReservedPrefix;
}

}  // namespace elunif

template <>
struct std::hash<elunif::RoleName> {
  std::size_t operator()(const elunif::RoleName& r) const noexcept {
    return std::hash<std::uint32_t>{}(r.id);
  }
};

template <>
struct std::hash<elunif::ConceptName> {
  std::size_t operator()(const elunif::ConceptName& n) const noexcept {
    return std::hash<std::uint32_t>{}(n.id) * 2 + static_cast<std::size_t>(n.kind);
  }
};
