#pragma once

// Acyclic TBoxes: definitions A ≐ C, dependency analysis, expansion and
// subsumption modulo the TBox without expanding.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "elunif/error.hpp"
#include "elunif/term.hpp"

namespace elunif {

struct ConceptDefinition {
  ConceptName lhs;
  Term rhs;
};

class TBox {
 public:
  TBox() = default;

  /// Throws Error if a name is defined twice. Cyclic TBoxes are accepted
  /// here so that is_acyclic() can report on them; every operation that
  /// needs acyclicity checks it.
  explicit TBox(std::vector<ConceptDefinition> defs) : defs_(std::move(defs)) {
    for (std::size_t i = 0; i < defs_.size(); ++i) {
      if (!index_.emplace(defs_[i].lhs, i).second) {
        throw Error("concept '" + defs_[i].lhs.text() + "' is defined more than once");
      }
    }
    acyclic_ = compute_acyclic();
  }

  const std::vector<ConceptDefinition>& definitions() const { return defs_; }
  bool empty() const { return defs_.empty(); }
  std::size_t size() const { return defs_.size(); }

  bool is_defined(ConceptName n) const { return index_.count(n) != 0; }

  const Term* definition_of(ConceptName n) const {
    auto it = index_.find(n);
    return it == index_.end() ? nullptr : &defs_[it->second].rhs;
  }

  bool is_acyclic() const { return acyclic_; }

  void require_acyclic() const {
    if (!acyclic_) throw CyclicTBoxError("TBox contains a terminological cycle");
  }

  /// Sum of definition sizes; the measure polynomial bounds refer to.
  std::uint64_t total_size() const {
    std::uint64_t n = 0;
    for (const auto& d : defs_) n = detail::saturating_add(n, d.rhs.size() + 1);
    return n;
  }

 private:
  bool compute_acyclic() const {
    enum class Mark { White, Grey, Black };
    std::unordered_map<ConceptName, Mark> mark;
    std::function<bool(ConceptName)> visit = [&](ConceptName a) {
      auto& m = mark[a];
      if (m == Mark::Grey) return false;
      if (m == Mark::Black) return true;
      m = Mark::Grey;
      for (const auto& b : concept_names(*definition_of(a))) {
        if (is_defined(b) && !visit(b)) return false;
      }
      mark[a] = Mark::Black;
      return true;
    };
    for (const auto& d : defs_) {
      if (!visit(d.lhs)) return false;
    }
    return true;
  }

  std::vector<ConceptDefinition> defs_;
  std::unordered_map<ConceptName, std::size_t> index_;
  bool acyclic_ = true;
};

/// Transitive closure of "A directly depends on B" (B occurs in the
/// definition of A). Sources are defined concepts; targets are all concept
/// names reached, defined or primitive.
inline std::map<ConceptName, std::set<ConceptName>> depends_on(const TBox& t) {
  std::map<ConceptName, std::set<ConceptName>> direct;
  for (const auto& d : t.definitions()) direct[d.lhs] = concept_names(d.rhs);
  std::map<ConceptName, std::set<ConceptName>> closure;
  for (const auto& d : t.definitions()) {
    std::set<ConceptName>& reach = closure[d.lhs];
    std::vector<ConceptName> stack(direct[d.lhs].begin(), direct[d.lhs].end());
    while (!stack.empty()) {
      ConceptName n = stack.back();
      stack.pop_back();
      if (!reach.insert(n).second) continue;
      if (auto it = direct.find(n); it != direct.end()) {
        stack.insert(stack.end(), it->second.begin(), it->second.end());
      }
    }
  }
  return closure;
}

inline bool is_acyclic(const TBox& t) { return t.is_acyclic(); }

/// Materializes C^T. Expansions of defined names are memoized and shared,
/// but the result can still be exponentially larger than the input; a
/// SizeLimitError is thrown once any intermediate result exceeds max_size.
inline Term expand(const Term& c, const TBox& t,
                   std::uint64_t max_size = std::numeric_limits<std::uint64_t>::max()) {
  t.require_acyclic();
  if (t.empty()) return c;
  std::unordered_map<ConceptName, Term> memo;
  std::function<Term(ConceptName)> lookup;
  auto guard = [max_size](Term r) {
    if (r.size() > max_size) throw SizeLimitError("expansion exceeds size limit");
    return r;
  };
  lookup = [&](ConceptName n) -> Term {
    const Term* rhs = t.definition_of(n);
    if (!rhs) return Term::name(n);
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    Term e = guard(replace_names(*rhs, lookup));
    memo.emplace(n, e);
    return e;
  };
  return guard(replace_names(c, lookup));
}

/// Decides subsumption modulo an acyclic TBox in polynomial time. Every node
/// of the query terms and the definitions is unfolded one level at a time
/// (defined names replaced by the top-level structure of their definition)
/// and node pairs are memoized, so the exponential expansion is never built.
/// One instance may answer many queries; it is not thread-safe.
class TBoxReasoner {
 public:
  explicit TBoxReasoner(TBox tbox) : tbox_(std::move(tbox)) { tbox_.require_acyclic(); }

  const TBox& tbox() const { return tbox_; }

  bool subsumes(const Term& c, const Term& d) {
    roots_.push_back(c);
    roots_.push_back(d);
    return subsumes_nodes(canonical(c.node()), canonical(d.node()));
  }

  bool equivalent(const Term& c, const Term& d) { return subsumes(c, d) && subsumes(d, c); }

  /// Largest one-level unfolding built so far (names plus existentials). It
  /// is bounded by the size of the TBox plus the query terms.
  std::size_t max_unfolding() const { return max_unfolding_; }
  std::size_t pair_checks() const { return memo_.size(); }

 private:
  using Node = detail::TermNode;

  struct Unfolding {
    std::vector<ConceptName> names;  // sorted, unique, primitive only
    std::vector<const Node*> exists; // unique existential nodes
  };

  struct PairHash {
    std::size_t operator()(const std::pair<const Node*, const Node*>& p) const noexcept {
      return std::hash<const void*>{}(p.first) * 1000003u ^ std::hash<const void*>{}(p.second);
    }
  };

  const Node* canonical(const Node* n) const {
    while (n->kind == TermKind::Name) {
      const Term* rhs = tbox_.definition_of(n->name);
      if (!rhs) break;
      n = rhs->node();
    }
    return n;
  }

  const Unfolding& unfold(const Node* n) {
    if (auto it = unfoldings_.find(n); it != unfoldings_.end()) return it->second;
    Unfolding u;
    switch (n->kind) {
      case TermKind::Top:
        break;
      case TermKind::Name:
        u.names.push_back(n->name);
        break;
      case TermKind::Exists:
        u.exists.push_back(n);
        break;
      case TermKind::Conj: {
        std::set<ConceptName> names;
        std::set<const Node*> seen;
        for (const Term& child : n->children) {
          const Unfolding& cu = unfold(canonical(child.node()));
          names.insert(cu.names.begin(), cu.names.end());
          for (const Node* e : cu.exists) {
            if (seen.insert(e).second) u.exists.push_back(e);
          }
        }
        u.names.assign(names.begin(), names.end());
        break;
      }
    }
    max_unfolding_ = std::max(max_unfolding_, u.names.size() + u.exists.size());
    return unfoldings_.emplace(n, std::move(u)).first->second;
  }

  bool subsumes_nodes(const Node* c, const Node* d) {
    if (c == d || d->kind == TermKind::Top) return true;
    const auto key = std::make_pair(c, d);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Unfolding& uc = unfold(c);
    const Unfolding& ud = unfold(d);
    bool result = std::includes(uc.names.begin(), uc.names.end(), ud.names.begin(), ud.names.end());
    for (std::size_t j = 0; result && j < ud.exists.size(); ++j) {
      const Node* e = ud.exists[j];
      bool matched = false;
      for (std::size_t i = 0; !matched && i < uc.exists.size(); ++i) {
        const Node* f = uc.exists[i];
        matched = f->role == e->role &&
                  subsumes_nodes(canonical(f->children[0].node()), canonical(e->children[0].node()));
      }
      result = matched;
    }
    memo_.emplace(key, result);
    return result;
  }

  TBox tbox_;
  std::vector<Term> roots_;
  std::unordered_map<const Node*, Unfolding> unfoldings_;
  std::unordered_map<std::pair<const Node*, const Node*>, bool, PairHash> memo_;
  std::size_t max_unfolding_ = 0;
};

inline bool subsumes_wrt_tbox(const TBox& t, const Term& c, const Term& d) {
  return TBoxReasoner(t).subsumes(c, d);
}

inline bool equivalent_wrt_tbox(const TBox& t, const Term& c, const Term& d) {
  TBoxReasoner r(t);
  return r.equivalent(c, d);
}

}  // namespace elunif
