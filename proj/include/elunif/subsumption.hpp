#pragma once

// Structural subsumption for EL without a TBox. C is subsumed by D iff every
// top-level concept name of D is a top-level name of C and every top-level
// existential ∃s.D' of D is matched by some top-level ∃s.C' of C with C'
// subsumed by D'. Concept variables are treated like constants here.

#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "elunif/term.hpp"

namespace elunif {

namespace detail {

inline std::span<const Term> top_level_view(const Term& t) {
  if (t.is_top()) return {};
  if (t.is_conj()) return t.conjuncts();
  return {&t, 1};
}

template <class Recurse>
bool subsumes_structurally(const Term& c, const Term& d, Recurse&& recurse) {
  if (d.is_top()) return true;
  if (c == d) return true;
  const auto cs = top_level_view(c);
  for (const Term& b : top_level_view(d)) {
    bool found = false;
    if (b.is_name()) {
      for (const Term& a : cs) {
        if (a.is_name() && a.concept_name() == b.concept_name()) {
          found = true;
          break;
        }
      }
    } else {
      for (const Term& a : cs) {
        if (a.is_exists() && a.role() == b.role() && recurse(a.filler(), b.filler())) {
          found = true;
          break;
        }
      }
    }
    if (!found) return false;
  }
  return true;
}

inline bool subsumes_plain(const Term& c, const Term& d) {
  return subsumes_structurally(c, d, [](const Term& x, const Term& y) { return subsumes_plain(x, y); });
}

}  // namespace detail

/// c ⊑ d
inline bool subsumes(const Term& c, const Term& d) { return detail::subsumes_plain(c, d); }

inline bool equivalent(const Term& c, const Term& d) { return subsumes(c, d) && subsumes(d, c); }

/// c ⊏ d: c is subsumed by d but not equivalent to it.
inline bool strictly_subsumes(const Term& c, const Term& d) {
  return subsumes(c, d) && !subsumes(d, c);
}

/// Memoizing subsumption checker keyed on node identity. Not thread-safe;
/// use one instance per thread.
class SubsumptionCache {
 public:
  bool subsumes(const Term& c, const Term& d) {
    Key key{c, d};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool result = detail::subsumes_structurally(
        c, d, [this](const Term& x, const Term& y) { return this->subsumes(x, y); });
    memo_.emplace(std::move(key), result);
    return result;
  }

  bool equivalent(const Term& c, const Term& d) { return subsumes(c, d) && subsumes(d, c); }

  std::size_t size() const { return memo_.size(); }
  void clear() { memo_.clear(); }

 private:
  struct Key {
    Term c;
    Term d;
    bool operator==(const Key& o) const { return c.node() == o.c.node() && d.node() == o.d.node(); }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<const void*>{}(k.c.node()) * 31 + std::hash<const void*>{}(k.d.node());
    }
  };

  std::unordered_map<Key, bool, KeyHash> memo_;
};

/// Applies C ⊓ ⊤ → C, A ⊓ A → A and ∃r.C ⊓ ∃r.D → ∃r.C (C ⊑ D) innermost
/// first until no rule applies. Among equivalent existentials the smaller one
/// in term order is kept.
inline Term reduce(const Term& t) {
  switch (t.kind()) {
    case TermKind::Top:
    case TermKind::Name:
      return t;
    case TermKind::Exists:
      return Term::exists(t.role(), reduce(t.filler()));
    case TermKind::Conj:
      break;
  }
  std::vector<Term> parts;
  parts.reserve(t.conjuncts().size());
  for (const auto& c : t.conjuncts()) parts.push_back(reduce(c));
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());

  std::vector<Term> kept;
  kept.reserve(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Term& a = parts[i];
    bool redundant = false;
    if (a.is_exists()) {
      for (std::size_t j = 0; j < parts.size() && !redundant; ++j) {
        const Term& b = parts[j];
        if (j == i || !b.is_exists() || b.role() != a.role()) continue;
        if (subsumes(b.filler(), a.filler())) {
          redundant = !subsumes(a.filler(), b.filler()) || j < i;
        }
      }
    }
    if (!redundant) kept.push_back(a);
  }
  return Term::conj(std::move(kept));
}

/// True iff none of the reduction rules applies anywhere in t.
inline bool is_reduced(const Term& t) {
  switch (t.kind()) {
    case TermKind::Top:
    case TermKind::Name:
      return true;
    case TermKind::Exists:
      return is_reduced(t.filler());
    case TermKind::Conj:
      break;
  }
  const auto cs = t.conjuncts();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!is_reduced(cs[i])) return false;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (i == j) continue;
      if (subsumes(cs[i], cs[j])) return false;
    }
  }
  return true;
}

inline bool equivalent_via_reduction(const Term& c, const Term& d) {
  return ac_equal(reduce(c), reduce(d));
}

}  // namespace elunif
