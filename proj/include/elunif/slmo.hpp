#pragma once

// Terms over the signature of semilattices with monotone operators
// {∧, 1, f_1, ..., f_n} and their translation to and from EL: constants and
// variables map to concept names, 1 to ⊤, ∧ to ⊓ and f_i to ∃r_i. The word
// problem is decided through EL equivalence.

#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "elunif/error.hpp"
#include "elunif/subsumption.hpp"
#include "elunif/syntax.hpp"
#include "elunif/term.hpp"

namespace elunif {

class SLTerm {
 public:
  enum class Kind { One, Var, FreeConst, Meet, Mono };

  SLTerm() = default;

  static SLTerm one() { return SLTerm(); }
  static SLTerm var(std::string name) { return leaf(Kind::Var, std::move(name)); }
  static SLTerm constant(std::string name) { return leaf(Kind::FreeConst, std::move(name)); }

  static SLTerm meet(SLTerm a, SLTerm b) {
    SLTerm t;
    t.kind_ = Kind::Meet;
    t.args_ = std::make_shared<std::vector<SLTerm>>(std::vector<SLTerm>{std::move(a), std::move(b)});
    return t;
  }

  static SLTerm mono(unsigned op, SLTerm a) {
    if (op == 0) throw Error("operator indices start at 1");
    SLTerm t;
    t.kind_ = Kind::Mono;
    t.op_ = op;
    t.args_ = std::make_shared<std::vector<SLTerm>>(std::vector<SLTerm>{std::move(a)});
    return t;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  unsigned op() const { return op_; }
  const SLTerm& left() const { return (*args_)[0]; }
  const SLTerm& right() const { return (*args_)[1]; }
  const SLTerm& arg() const { return (*args_)[0]; }

  friend bool operator==(const SLTerm& a, const SLTerm& b) {
    if (a.kind_ != b.kind_ || a.name_ != b.name_ || a.op_ != b.op_) return false;
    if (!a.args_ || !b.args_) return a.args_ == b.args_;
    return *a.args_ == *b.args_;
  }

 private:
  static SLTerm leaf(Kind k, std::string name) {
    SLTerm t;
    t.kind_ = k;
    t.name_ = std::move(name);
    return t;
  }

  Kind kind_ = Kind::One;
  std::string name_;
  unsigned op_ = 0;
  std::shared_ptr<const std::vector<SLTerm>> args_;
};

using RoleIndex = std::map<RoleName, unsigned>;
using IndexRole = std::map<unsigned, RoleName>;

/// Roles numbered 1..n by name.
inline RoleIndex index_roles(const std::set<RoleName>& roles) {
  std::vector<RoleName> sorted(roles.begin(), roles.end());
  std::sort(sorted.begin(), sorted.end(), [](RoleName a, RoleName b) { return a.text() < b.text(); });
  RoleIndex out;
  for (std::size_t i = 0; i < sorted.size(); ++i) out.emplace(sorted[i], static_cast<unsigned>(i + 1));
  return out;
}

inline IndexRole invert(const RoleIndex& index) {
  IndexRole out;
  for (const auto& [r, i] : index) out.emplace(i, r);
  return out;
}

/// Conjunctions become left-nested meets in conjunct order.
inline SLTerm to_slmo(const Term& c, const RoleIndex& roles) {
  switch (c.kind()) {
    case TermKind::Top:
      return SLTerm::one();
    case TermKind::Name:
      return c.is_variable() ? SLTerm::var(c.concept_name().text()) : SLTerm::constant(c.concept_name().text());
    case TermKind::Exists: {
      auto it = roles.find(c.role());
      if (it == roles.end()) throw Error("role '" + c.role().text() + "' has no operator index");
      return SLTerm::mono(it->second, to_slmo(c.filler(), roles));
    }
    case TermKind::Conj: {
      const auto parts = c.conjuncts();
      SLTerm out = to_slmo(parts[0], roles);
      for (std::size_t i = 1; i < parts.size(); ++i) out = SLTerm::meet(std::move(out), to_slmo(parts[i], roles));
      return out;
    }
  }
  return SLTerm::one();
}

inline Term from_slmo(const SLTerm& t, const IndexRole& roles) {
  switch (t.kind()) {
    case SLTerm::Kind::One:
      return Term::top();
    case SLTerm::Kind::Var:
      return Term::name(ConceptName::variable(t.name()));
    case SLTerm::Kind::FreeConst:
      return Term::name(ConceptName::constant(t.name()));
    case SLTerm::Kind::Meet:
      return Term::conj({from_slmo(t.left(), roles), from_slmo(t.right(), roles)});
    case SLTerm::Kind::Mono: {
      auto it = roles.find(t.op());
      if (it == roles.end()) throw Error("operator f" + std::to_string(t.op()) + " has no role");
      return Term::exists(it->second, from_slmo(t.arg(), roles));
    }
  }
  return Term::top();
}

/// Role "r<i>" for every operator index of t, for terms that come without a
/// role table.
inline IndexRole default_roles(const SLTerm& t, IndexRole out = {}) {
  switch (t.kind()) {
    case SLTerm::Kind::Meet:
      out = default_roles(t.left(), std::move(out));
      return default_roles(t.right(), std::move(out));
    case SLTerm::Kind::Mono:
      out.try_emplace(t.op(), RoleName::of("r" + std::to_string(t.op())));
      return default_roles(t.arg(), std::move(out));
    default:
      return out;
  }
}

/// s =_SLmO t, decided as EL equivalence of the translations.
inline bool slmo_word_problem(const SLTerm& s, const SLTerm& t) {
  const IndexRole roles = default_roles(t, default_roles(s));
  return equivalent(from_slmo(s, roles), from_slmo(t, roles));
}

// ---------------------------------------------------------------------------
// Text syntax: 1 | name | ?name | (meet s t) | (f i s)

inline SLTerm read_slmo(const SExpr& e) {
  if (e.is_atom) {
    if (e.atom == "1") return SLTerm::one();
    if (!e.atom.empty() && e.atom[0] == '?') {
      SExpr bare = e;
      bare.atom = e.atom.substr(1);
      return SLTerm::var(read_name(bare, "variable name"));
    }
    return SLTerm::constant(read_name(e, "constant name"));
  }
  if (e.items.empty() || !e.items[0].is_atom) throw error_at(e, "expected 'meet' or 'f'");
  const std::string& head = e.items[0].atom;
  if (head == "meet") {
    if (e.items.size() != 3) throw error_at(e, "'meet' takes two terms");
    return SLTerm::meet(read_slmo(e.items[1]), read_slmo(e.items[2]));
  }
  if (head == "f") {
    if (e.items.size() != 3 || !e.items[1].is_atom) throw error_at(e, "'f' takes an index and a term");
    const std::string& idx = e.items[1].atom;
    unsigned op = 0;
    for (char c : idx) {
      if (c < '0' || c > '9' || op > 100000) throw error_at(e.items[1], "invalid operator index '" + idx + "'");
      op = op * 10 + static_cast<unsigned>(c - '0');
    }
    if (idx.empty() || op == 0) throw error_at(e.items[1], "operator indices start at 1");
    return SLTerm::mono(op, read_slmo(e.items[2]));
  }
  throw error_at(e.items[0], "unknown operator '" + head + "'");
}

inline SLTerm parse_slmo(std::string_view text) {
  const auto all = read_sexprs(text);
  if (all.size() != 1) throw ParseError("expected exactly one term", 1, 1);
  return read_slmo(all[0]);
}

inline void write_slmo(std::ostream& os, const SLTerm& t) {
  switch (t.kind()) {
    case SLTerm::Kind::One:
      os << '1';
      break;
    case SLTerm::Kind::Var:
      os << '?' << t.name();
      break;
    case SLTerm::Kind::FreeConst:
      os << t.name();
      break;
    case SLTerm::Kind::Meet:
      os << "(meet ";
      write_slmo(os, t.left());
      os << ' ';
      write_slmo(os, t.right());
      os << ')';
      break;
    case SLTerm::Kind::Mono:
      os << "(f " << t.op() << ' ';
      write_slmo(os, t.arg());
      os << ')';
      break;
  }
}

inline std::string to_string(const SLTerm& t) {
  std::ostringstream os;
  write_slmo(os, t);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const SLTerm& t) {
  write_slmo(os, t);
  return os;
}

}  // namespace elunif
