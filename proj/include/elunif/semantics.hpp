#pragma once

// Finite interpretations and the extension of ground concept terms. Used to
// refute subsumptions and to check TBox models.

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "elunif/error.hpp"
#include "elunif/tbox.hpp"
#include "elunif/term.hpp"

namespace elunif {

using Extension = boost::dynamic_bitset<>;

struct Signature {
  std::set<ConceptName> concepts;
  std::set<RoleName> roles;

  void add(const Term& t) {
    for (const auto& n : concept_names(t)) concepts.insert(n);
    for (const auto& r : role_names(t)) roles.insert(r);
  }
};

class Interpretation {
 public:
  explicit Interpretation(std::size_t domain_size = 1) : size_(domain_size) {}

  std::size_t domain_size() const { return size_; }

  Extension empty() const { return Extension(size_); }
  Extension full() const { return Extension(size_).set(); }

  void set_concept(ConceptName a, Extension ext) {
    check(ext);
    concepts_[a] = std::move(ext);
  }

  void add_edge(RoleName r, std::size_t from, std::size_t to) {
    if (from >= size_ || to >= size_) throw Error("role edge outside the domain");
    auto& succ = roles_[r];
    if (succ.empty()) succ.assign(size_, Extension(size_));
    succ[from].set(to);
  }

  /// Missing names have the empty extension.
  Extension concept_ext(ConceptName a) const {
    auto it = concepts_.find(a);
    return it == concepts_.end() ? empty() : it->second;
  }

  bool has_edge(RoleName r, std::size_t from, std::size_t to) const {
    auto it = roles_.find(r);
    return it != roles_.end() && it->second[from].test(to);
  }

  /// Successor sets per element; empty vector when the role has no edges.
  const std::vector<Extension>* successors(RoleName r) const {
    auto it = roles_.find(r);
    return it == roles_.end() ? nullptr : &it->second;
  }

  const std::map<ConceptName, Extension>& concepts() const { return concepts_; }
  const std::map<RoleName, std::vector<Extension>>& roles() const { return roles_; }

  friend bool operator==(const Interpretation&, const Interpretation&) = default;

 private:
  void check(const Extension& ext) const {
    if (ext.size() != size_) throw Error("extension size does not match the domain");
  }

  std::size_t size_;
  std::map<ConceptName, Extension> concepts_;
  std::map<RoleName, std::vector<Extension>> roles_;
};

/// C^I for a ground term C. Throws NotGroundError if C contains a variable.
inline Extension evaluate(const Term& t, const Interpretation& i) {
  switch (t.kind()) {
    case TermKind::Top:
      return i.full();
    case TermKind::Name:
      if (t.is_variable()) throw NotGroundError("cannot evaluate variable '" + t.concept_name().text() + "'");
      return i.concept_ext(t.concept_name());
    case TermKind::Exists: {
      const Extension filler = evaluate(t.filler(), i);
      Extension out = i.empty();
      if (const auto* succ = i.successors(t.role())) {
        for (std::size_t x = 0; x < i.domain_size(); ++x) {
          if ((*succ)[x].intersects(filler)) out.set(x);
        }
      }
      return out;
    }
    case TermKind::Conj: {
      Extension out = i.full();
      for (const auto& c : t.conjuncts()) out &= evaluate(c, i);
      return out;
    }
  }
  return i.empty();
}

/// Whether A^I = C^I for every definition A ≐ C of t.
inline bool is_model(const Interpretation& i, const TBox& t) {
  for (const auto& d : t.definitions()) {
    if (i.concept_ext(d.lhs) != evaluate(d.rhs, i)) return false;
  }
  return true;
}

/// Overwrites the extensions of the defined concepts of an acyclic TBox so
/// that the interpretation becomes a model. Primitive names are kept.
inline Interpretation complete_model(Interpretation i, const TBox& t) {
  t.require_acyclic();
  std::map<ConceptName, bool> done;
  std::function<void(ConceptName)> visit = [&](ConceptName a) {
    if (done[a]) return;
    done[a] = true;
    const Term* rhs = t.definition_of(a);
    for (const auto& b : concept_names(*rhs)) {
      if (t.is_defined(b)) visit(b);
    }
    i.set_concept(a, evaluate(*rhs, i));
  };
  for (const auto& d : t.definitions()) visit(d.lhs);
  return i;
}

namespace detail {

/// Uniform draw from [0, bound) by rejection; unlike std distributions the
/// result sequence is the same on every standard library.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace detail

/// Reproducible random interpretation: mt19937_64 seeded with `seed`, domain
/// size uniform in [1, max_domain], each concept membership with probability
/// 1/2, each role edge with probability 1/3. Names are processed in
/// signature order, so the result depends only on the inputs.
inline Interpretation random_interpretation(const Signature& sig, std::size_t max_domain, std::uint64_t seed) {
  if (max_domain == 0) throw Error("max_domain must be at least 1");
  std::mt19937_64 rng(seed);
  const std::size_t n = 1 + static_cast<std::size_t>(detail::bounded_draw(rng, max_domain));
  Interpretation i(n);
  for (const auto& a : sig.concepts) {
    Extension ext(n);
    for (std::size_t x = 0; x < n; ++x) {
      if (detail::bounded_draw(rng, 2) == 0) ext.set(x);
    }
    i.set_concept(a, std::move(ext));
  }
  for (const auto& r : sig.roles) {
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (detail::bounded_draw(rng, 3) == 0) i.add_edge(r, x, y);
      }
    }
  }
  return i;
}

}  // namespace elunif
