#pragma once

// EL concept terms built from top, concept names, conjunction and existential
// restriction. Terms are immutable, shared, and always kept in AC-normal form:
// conjunctions are flat, contain no top, and list their conjuncts sorted by
// the total term order. Duplicate conjuncts are kept; removing them is the
// job of reduce() in subsumption.hpp.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "elunif/symbols.hpp"

namespace elunif {

enum class TermKind : std::uint8_t { Top = 0, Name = 1, Exists = 2, Conj = 3 };

class Term;

namespace detail {

struct TermNode;

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b
             ? std::numeric_limits<std::uint64_t>::max()
             : a + b;
}

inline std::size_t mix_hash(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace detail

class Term {
 public:
  /// The top concept.
  Term();

  static Term top() { return Term(); }
  static Term name(ConceptName n);
  static Term exists(RoleName r, Term filler);
  /// Builds the AC-normal conjunction of the given terms (empty -> top,
  /// singleton -> the term itself).
  static Term conj(std::vector<Term> parts);

  TermKind kind() const;
  bool is_top() const { return kind() == TermKind::Top; }
  bool is_name() const { return kind() == TermKind::Name; }
  bool is_exists() const { return kind() == TermKind::Exists; }
  bool is_conj() const { return kind() == TermKind::Conj; }
  bool is_atom() const { return is_name() || is_exists(); }
  bool is_variable() const;
  bool is_constant() const;

  ConceptName concept_name() const;
  RoleName role() const;
  const Term& filler() const;
  std::span<const Term> conjuncts() const;

  std::size_t hash() const;
  /// Number of nodes (saturates instead of overflowing).
  std::uint64_t size() const;
  std::uint32_t role_depth() const;

  const detail::TermNode* node() const { return node_.get(); }

  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
  friend bool operator==(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const detail::TermNode> node) : node_(std::move(node)) {}

  std::shared_ptr<const detail::TermNode> node_;
};

namespace detail {

struct TermNode {
  TermKind kind = TermKind::Top;
  ConceptName name{};
  RoleName role{};
  std::vector<Term> children;
  std::size_t hash = 0;
  std::uint64_t size = 1;
  std::uint32_t depth = 0;
};

inline const std::shared_ptr<const TermNode>& top_node() {
  static const std::shared_ptr<const TermNode> node = [] {
    auto n = std::make_shared<TermNode>();
    n->hash = 0x51ed270b;
    return n;
  }();
  return node;
}

inline std::strong_ordering compare_nodes(const TermNode* a, const TermNode* b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a->kind <=> b->kind; c != 0) return c;
  switch (a->kind) {
    case TermKind::Top:
      return std::strong_ordering::equal;
    case TermKind::Name:
      return a->name <=> b->name;
    case TermKind::Exists:
      if (auto c = a->role <=> b->role; c != 0) return c;
      return compare_nodes(a->children[0].node(), b->children[0].node());
    case TermKind::Conj: {
      const std::size_t n = std::min(a->children.size(), b->children.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (auto c = compare_nodes(a->children[i].node(), b->children[i].node()); c != 0) {
          return c;
        }
      }
      return a->children.size() <=> b->children.size();
    }
  }
  return std::strong_ordering::equal;
}

}  // namespace detail

inline Term::Term() : node_(detail::top_node()) {}

inline Term Term::name(ConceptName n) {
  auto node = std::make_shared<detail::TermNode>();
  node->kind = TermKind::Name;
  node->name = n;
  node->hash = detail::mix_hash(std::hash<ConceptName>{}(n), 0x1);
  return Term(std::move(node));
}

inline Term Term::exists(RoleName r, Term filler) {
  auto node = std::make_shared<detail::TermNode>();
  node->kind = TermKind::Exists;
  node->role = r;
  node->hash = detail::mix_hash(detail::mix_hash(0x2, r.id), filler.hash());
  node->size = detail::saturating_add(filler.size(), 1);
  node->depth = filler.role_depth() + 1;
  node->children.push_back(std::move(filler));
  return Term(std::move(node));
}

inline Term Term::conj(std::vector<Term> parts) {
  std::vector<Term> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    if (p.is_top()) continue;
    if (p.is_conj()) {
      for (const auto& c : p.conjuncts()) flat.push_back(c);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return Term();
  if (flat.size() == 1) return std::move(flat.front());
  std::sort(flat.begin(), flat.end());
  auto node = std::make_shared<detail::TermNode>();
  node->kind = TermKind::Conj;
  std::size_t h = 0x3;
  std::uint64_t size = 1;
  std::uint32_t depth = 0;
  for (const auto& c : flat) {
    h = detail::mix_hash(h, c.hash());
    size = detail::saturating_add(size, c.size());
    depth = std::max(depth, c.role_depth());
  }
  node->hash = h;
  node->size = size;
  node->depth = depth;
  node->children = std::move(flat);
  return Term(std::move(node));
}

inline TermKind Term::kind() const { return node_->kind; }
inline bool Term::is_variable() const { return is_name() && node_->name.is_variable(); }
inline bool Term::is_constant() const { return is_name() && node_->name.is_constant(); }
inline ConceptName Term::concept_name() const { return node_->name; }
inline RoleName Term::role() const { return node_->role; }
inline const Term& Term::filler() const { return node_->children.front(); }
inline std::span<const Term> Term::conjuncts() const { return node_->children; }
inline std::size_t Term::hash() const { return node_->hash; }
inline std::uint64_t Term::size() const { return node_->size; }
inline std::uint32_t Term::role_depth() const { return node_->depth; }

inline std::strong_ordering operator<=>(const Term& a, const Term& b) {
  return detail::compare_nodes(a.node(), b.node());
}

inline bool operator==(const Term& a, const Term& b) {
  if (a.node() == b.node()) return true;
  if (a.hash() != b.hash()) return false;
  return detail::compare_nodes(a.node(), b.node()) == 0;
}

/// Conjunction of two terms.
inline Term conjoin(Term a, Term b) { return Term::conj({std::move(a), std::move(b)}); }

/// An arbitrary, not yet normalized term tree, e.g. as produced by a parser.
struct RawTerm {
  enum class Kind { Top, Name, Exists, And };

  Kind kind = Kind::Top;
  ConceptName name{};
  RoleName role{};
  std::vector<RawTerm> args;

  static RawTerm top() { return {}; }
  static RawTerm named(ConceptName n) { return {Kind::Name, n, {}, {}}; }
  static RawTerm exists(RoleName r, RawTerm c) { return {Kind::Exists, {}, r, {std::move(c)}}; }
  static RawTerm conj(std::vector<RawTerm> parts) { return {Kind::And, {}, {}, std::move(parts)}; }
};

inline Term ac_normalize(const RawTerm& raw) {
  switch (raw.kind) {
    case RawTerm::Kind::Top:
      return Term::top();
    case RawTerm::Kind::Name:
      return Term::name(raw.name);
    case RawTerm::Kind::Exists:
      return Term::exists(raw.role, ac_normalize(raw.args.at(0)));
    case RawTerm::Kind::And: {
      std::vector<Term> parts;
      parts.reserve(raw.args.size());
      for (const auto& a : raw.args) parts.push_back(ac_normalize(a));
      return Term::conj(std::move(parts));
    }
  }
  return Term::top();
}

/// Terms are normal by construction, so normalizing again rebuilds the same tree.
inline Term ac_normalize(const Term& t) {
  switch (t.kind()) {
    case TermKind::Top:
    case TermKind::Name:
      return t;
    case TermKind::Exists:
      return Term::exists(t.role(), ac_normalize(t.filler()));
    case TermKind::Conj: {
      std::vector<Term> parts;
      for (const auto& c : t.conjuncts()) parts.push_back(ac_normalize(c));
      return Term::conj(std::move(parts));
    }
  }
  return t;
}

inline bool ac_equal(const Term& s, const Term& t) { return s == t; }

inline std::vector<Term> top_level_atoms(const Term& t) {
  if (t.is_top()) return {};
  if (t.is_conj()) return {t.conjuncts().begin(), t.conjuncts().end()};
  return {t};
}

namespace detail {
inline void collect_atoms(const Term& t, std::set<Term>& out) {
  switch (t.kind()) {
    case TermKind::Top:
      return;
    case TermKind::Name:
      out.insert(t);
      return;
    case TermKind::Exists:
      out.insert(t);
      collect_atoms(t.filler(), out);
      return;
    case TermKind::Conj:
      for (const auto& c : t.conjuncts()) collect_atoms(c, out);
      return;
  }
}
}  // namespace detail

/// All atoms occurring in t (At(t)): names and existential restrictions,
/// including those nested under existentials.
inline std::set<Term> atoms(const Term& t) {
  std::set<Term> out;
  detail::collect_atoms(t, out);
  return out;
}

inline std::uint32_t role_depth(const Term& t) { return t.role_depth(); }

inline bool is_flat_atom(const Term& a) {
  if (a.is_name()) return true;
  if (a.is_exists()) return a.filler().is_top() || a.filler().is_name();
  return false;
}

inline bool is_flat_term(const Term& t) {
  for (const auto& a : top_level_atoms(t)) {
    if (!is_flat_atom(a)) return false;
  }
  return true;
}

namespace detail {
inline void collect_names(const Term& t, std::set<ConceptName>& names, std::set<RoleName>* roles) {
  switch (t.kind()) {
    case TermKind::Top:
      return;
    case TermKind::Name:
      names.insert(t.concept_name());
      return;
    case TermKind::Exists:
      if (roles) roles->insert(t.role());
      collect_names(t.filler(), names, roles);
      return;
    case TermKind::Conj:
      for (const auto& c : t.conjuncts()) collect_names(c, names, roles);
      return;
  }
}
}  // namespace detail

inline std::set<ConceptName> concept_names(const Term& t) {
  std::set<ConceptName> out;
  detail::collect_names(t, out, nullptr);
  return out;
}

inline std::set<RoleName> role_names(const Term& t) {
  std::set<ConceptName> names;
  std::set<RoleName> roles;
  detail::collect_names(t, names, &roles);
  return roles;
}

inline std::set<ConceptName> variables_of(const Term& t) {
  std::set<ConceptName> out;
  for (const auto& n : concept_names(t)) {
    if (n.is_variable()) out.insert(n);
  }
  return out;
}

inline bool is_ground(const Term& t) { return variables_of(t).empty(); }

inline bool contains_name(const Term& t, ConceptName n) {
  switch (t.kind()) {
    case TermKind::Top:
      return false;
    case TermKind::Name:
      return t.concept_name() == n;
    case TermKind::Exists:
      return contains_name(t.filler(), n);
    case TermKind::Conj:
      for (const auto& c : t.conjuncts()) {
        if (contains_name(c, n)) return true;
      }
      return false;
  }
  return false;
}

/// Replaces every concept name n by f(n), re-normalizing on the way up.
/// Shared subterms are rebuilt once per occurrence, so only use this on
/// terms that are trees in practice.
inline Term replace_names(const Term& t, const std::function<Term(ConceptName)>& f) {
  switch (t.kind()) {
    case TermKind::Top:
      return t;
    case TermKind::Name:
      return f(t.concept_name());
    case TermKind::Exists:
      return Term::exists(t.role(), replace_names(t.filler(), f));
    case TermKind::Conj: {
      std::vector<Term> parts;
      parts.reserve(t.conjuncts().size());
      for (const auto& c : t.conjuncts()) parts.push_back(replace_names(c, f));
      return Term::conj(std::move(parts));
    }
  }
  return t;
}

inline void write_term(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case TermKind::Top:
      os << "top";
      return;
    case TermKind::Name:
      os << t.concept_name().text();
      return;
    case TermKind::Exists:
      os << "(some " << t.role().text() << ' ';
      write_term(os, t.filler());
      os << ')';
      return;
    case TermKind::Conj:
      os << "(and";
      for (const auto& c : t.conjuncts()) {
        os << ' ';
        write_term(os, c);
      }
      os << ')';
      return;
  }
}

inline std::string to_string(const Term& t) {
  std::ostringstream os;
  write_term(os, t);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Term& t) {
  write_term(os, t);
  return os;
}

}  // namespace elunif

template <>
struct std::hash<elunif::Term> {
  std::size_t operator()(const elunif::Term& t) const noexcept { return t.hash(); }
};
