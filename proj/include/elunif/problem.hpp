#pragma once

// Unification problems, substitutions (expanded or dag-shaped), unifier
// checking, flattening, assignments S_X and the ground order on unifiers.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "elunif/error.hpp"
#include "elunif/subsumption.hpp"
#include "elunif/tbox.hpp"
#include "elunif/term.hpp"

namespace elunif {

struct UnificationEquation {
  Term lhs;
  Term rhs;

  friend bool operator==(const UnificationEquation&, const UnificationEquation&) = default;
};

class UnificationProblem {
 public:
  UnificationProblem() = default;

  /// Names and roles are collected from the equations; `declared` adds names
  /// that do not occur in any equation (e.g. declared but unused variables).
  explicit UnificationProblem(std::vector<UnificationEquation> equations,
                              const std::set<ConceptName>& declared = {})
      : equations_(std::move(equations)) {
    for (const auto& n : declared) register_name(n);
    for (const auto& e : equations_) {
      for (const Term* side : {&e.lhs, &e.rhs}) {
        for (const auto& n : concept_names(*side)) register_name(n);
        for (const auto& r : role_names(*side)) roles_.insert(r);
      }
    }
  }

  const std::vector<UnificationEquation>& equations() const { return equations_; }
  const std::set<ConceptName>& variables() const { return variables_; }
  const std::set<ConceptName>& constants() const { return constants_; }
  const std::set<RoleName>& roles() const { return roles_; }

  bool is_flat() const {
    return std::all_of(equations_.begin(), equations_.end(), [](const UnificationEquation& e) {
      return is_flat_term(e.lhs) && is_flat_term(e.rhs);
    });
  }

  std::uint64_t size() const {
    std::uint64_t n = 0;
    for (const auto& e : equations_) n = detail::saturating_add(n, e.lhs.size() + e.rhs.size());
    return n;
  }

 private:
  void register_name(ConceptName n) {
    (n.is_variable() ? variables_ : constants_).insert(n);
  }

  std::vector<UnificationEquation> equations_;
  std::set<ConceptName> variables_;
  std::set<ConceptName> constants_;
  std::set<RoleName> roles_;
};

/// Problem-file syntax: the variables line, then one (unify C D) per line.
inline std::ostream& operator<<(std::ostream& os, const UnificationProblem& g) {
  if (!g.variables().empty()) {
    os << "(variables";
    for (const auto& x : g.variables()) os << ' ' << x.text();
    os << ")\n";
  }
  for (const auto& e : g.equations()) os << "(unify " << e.lhs << ' ' << e.rhs << ")\n";
  return os;
}

enum class SubstitutionForm { Expanded, Dag };

/// A mapping from variables to terms. In Expanded form, application replaces
/// each bound variable by its image once. In Dag form the bindings are read
/// as an acyclic TBox T_σ and images may refer to other bound variables;
/// application unfolds them.
class Substitution {
 public:
  Substitution() = default;

  explicit Substitution(std::map<ConceptName, Term> bindings,
                        SubstitutionForm form = SubstitutionForm::Expanded)
      : bindings_(std::move(bindings)), form_(form) {
    for (const auto& [x, _] : bindings_) {
      if (!x.is_variable()) throw Error("substitution binds constant '" + x.text() + "'");
    }
    if (form_ == SubstitutionForm::Dag && !as_tbox().is_acyclic()) {
      throw CyclicAssignmentError("dag substitution has a cyclic binding");
    }
  }

  SubstitutionForm form() const { return form_; }
  const std::map<ConceptName, Term>& bindings() const { return bindings_; }

  const Term* binding(ConceptName x) const {
    auto it = bindings_.find(x);
    return it == bindings_.end() ? nullptr : &it->second;
  }

  Term apply(const Term& t) const {
    if (bindings_.empty()) return t;
    if (form_ == SubstitutionForm::Expanded) {
      return replace_names(t, [this](ConceptName n) {
        const Term* b = binding(n);
        return b ? *b : Term::name(n);
      });
    }
    return expand(t, as_tbox());
  }

  Term image(ConceptName x) const { return apply(Term::name(x)); }

  /// The same substitution with every image materialized.
  Substitution expanded() const {
    if (form_ == SubstitutionForm::Expanded) return *this;
    std::map<ConceptName, Term> out;
    TBox t = as_tbox();
    for (const auto& [x, _] : bindings_) out.emplace(x, expand(Term::name(x), t));
    return Substitution(std::move(out), SubstitutionForm::Expanded);
  }

  /// T_σ: each binding X ↦ C read as the definition X ≐ C.
  TBox as_tbox() const {
    std::vector<ConceptDefinition> defs;
    defs.reserve(bindings_.size());
    for (const auto& [x, t] : bindings_) defs.push_back({x, t});
    return TBox(std::move(defs));
  }

  /// Keeps only the given variables. For Dag form the images of the kept
  /// variables are materialized first so no reference is left dangling.
  Substitution restricted(const std::set<ConceptName>& vars) const {
    Substitution base = expanded();
    std::map<ConceptName, Term> out;
    for (const auto& [x, t] : base.bindings_) {
      if (vars.count(x)) out.emplace(x, t);
    }
    return Substitution(std::move(out), SubstitutionForm::Expanded);
  }

 private:
  std::map<ConceptName, Term> bindings_;
  SubstitutionForm form_ = SubstitutionForm::Expanded;
};

inline Term apply(const Substitution& s, const Term& t) { return s.apply(t); }

/// Checks σ(C) ≡ σ(D) for every equation. Dag substitutions are checked as
/// C ≡ D modulo T_σ, which never materializes σ(C).
inline bool is_unifier(const Substitution& s, const UnificationProblem& g) {
  if (s.form() == SubstitutionForm::Dag) {
    TBoxReasoner reasoner(s.as_tbox());
    for (const auto& e : g.equations()) {
      if (!reasoner.equivalent(e.lhs, e.rhs)) return false;
    }
    return true;
  }
  for (const auto& e : g.equations()) {
    if (!equivalent(s.apply(e.lhs), s.apply(e.rhs))) return false;
  }
  return true;
}

enum class GroundOrder { Equal, Greater, Less, Incomparable };

inline const char* to_string(GroundOrder o) {
  switch (o) {
    case GroundOrder::Equal: return "equal";
    case GroundOrder::Greater: return "greater";
    case GroundOrder::Less: return "less";
    case GroundOrder::Incomparable: return "incomparable";
  }
  return "?";
}

/// Compares ground substitutions in the product order: s ≽ t iff s(X) ⊑ t(X)
/// for every X in vars. Greater means s ≻ t.
inline GroundOrder compare_ground(const Substitution& s, const Substitution& t,
                                  const std::set<ConceptName>& vars) {
  bool s_ge_t = true;
  bool t_ge_s = true;
  for (const auto& x : vars) {
    const Term a = s.image(x);
    const Term b = t.image(x);
    if (!is_ground(a) || !is_ground(b)) {
      throw NotGroundError("compare_ground needs ground images for '" + x.text() + "'");
    }
    s_ge_t = s_ge_t && subsumes(a, b);
    t_ge_s = t_ge_s && subsumes(b, a);
  }
  if (s_ge_t && t_ge_s) return GroundOrder::Equal;
  if (s_ge_t) return GroundOrder::Greater;
  if (t_ge_s) return GroundOrder::Less;
  return GroundOrder::Incomparable;
}

/// Per-variable equivalence of two substitutions on vars.
inline bool equivalent_on(const Substitution& s, const Substitution& t,
                          const std::set<ConceptName>& vars) {
  for (const auto& x : vars) {
    if (!equivalent(s.image(x), t.image(x))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Flattening

struct FlattenResult {
  UnificationProblem problem;
  /// Fresh variables in creation order, each with the subterm it names.
  std::vector<std::pair<ConceptName, Term>> fresh;
  /// The variables of the input problem.
  std::set<ConceptName> original_variables;
};

/// Makes every equation an equation between conjunctions of flat atoms. Each
/// existential ∃r.C whose filler is neither a name nor top is replaced by
/// ∃r.X_C for a fresh variable X_C (one per distinct C) and X_C ≡? C is added,
/// flattened in turn. Fresh names use the reserved "_v" prefix and skip any
/// name already present in the problem.
inline FlattenResult flatten(const UnificationProblem& g) {
  std::unordered_set<std::string> taken;
  for (const auto& n : g.variables()) taken.insert(n.text());
  for (const auto& n : g.constants()) taken.insert(n.text());

  std::vector<UnificationEquation> out;
  std::vector<std::pair<ConceptName, Term>> fresh;
  std::map<Term, ConceptName> named;
  unsigned counter = 0;

  std::function<Term(const Term&)> flat_side;
  std::function<ConceptName(const Term&)> name_for = [&](const Term& c) {
    if (auto it = named.find(c); it != named.end()) return it->second;
    std::string text;
    do {
      text = std::string(kReservedPrefix) + std::to_string(++counter);
    } while (taken.count(text));
    taken.insert(text);
    ConceptName x = ConceptName::variable(text);
    named.emplace(c, x);
    fresh.emplace_back(x, c);
    Term rhs = flat_side(c);
    out.push_back({Term::name(x), rhs});
    return x;
  };
  flat_side = [&](const Term& t) {
    std::vector<Term> parts;
    for (const auto& a : top_level_atoms(t)) {
      if (is_flat_atom(a)) {
        parts.push_back(a);
      } else {
        parts.push_back(Term::exists(a.role(), Term::name(name_for(a.filler()))));
      }
    }
    return Term::conj(std::move(parts));
  };

  std::vector<UnificationEquation> top;
  for (const auto& e : g.equations()) {
    Term l = flat_side(e.lhs);
    Term r = flat_side(e.rhs);
    top.push_back({l, r});
  }
  top.insert(top.end(), out.begin(), out.end());

  std::set<ConceptName> declared = g.variables();
  declared.insert(g.constants().begin(), g.constants().end());
  return {UnificationProblem(std::move(top), declared), std::move(fresh), g.variables()};
}

// ---------------------------------------------------------------------------
// Four-set view of flat equations

struct FlatEquation {
  std::set<ConceptName> lvar;
  std::set<Term> lato;
  std::set<ConceptName> rvar;
  std::set<Term> rato;

  bool solved() const { return lato == rato; }
};

inline FlatEquation four_sets(const UnificationEquation& e) {
  if (!is_flat_term(e.lhs) || !is_flat_term(e.rhs)) throw NotFlatError("equation is not flat");
  FlatEquation f;
  auto fill = [](const Term& side, std::set<ConceptName>& vars, std::set<Term>& atoms) {
    for (const auto& a : top_level_atoms(side)) {
      if (a.is_variable()) {
        vars.insert(a.concept_name());
      } else {
        atoms.insert(a);
      }
    }
  };
  fill(e.lhs, f.lvar, f.lato);
  fill(e.rhs, f.rvar, f.rato);
  return f;
}

inline UnificationEquation to_equation(const FlatEquation& f) {
  auto side = [](const std::set<ConceptName>& vars, const std::set<Term>& atoms) {
    std::vector<Term> parts(atoms.begin(), atoms.end());
    for (const auto& v : vars) parts.push_back(Term::name(v));
    return Term::conj(std::move(parts));
  };
  return {side(f.lvar, f.lato), side(f.rvar, f.rato)};
}

/// Non-variable atoms of the problem (At of every side, minus variables), in
/// term order.
inline std::vector<Term> non_variable_atoms(const UnificationProblem& g) {
  std::set<Term> all;
  for (const auto& e : g.equations()) {
    for (const Term* side : {&e.lhs, &e.rhs}) {
      for (const auto& a : atoms(*side)) {
        if (!a.is_variable()) all.insert(a);
      }
    }
  }
  return {all.begin(), all.end()};
}

// ---------------------------------------------------------------------------
// Assignments

/// Sets S_X of non-variable atoms, one per variable. X directly depends on Y
/// when Y occurs in an atom of S_X.
class Assignment {
 public:
  Assignment() = default;

  void assign(ConceptName x, std::set<Term> atoms) { sets_[x] = std::move(atoms); }
  void add(ConceptName x, const Term& atom) { sets_[x].insert(atom); }

  const std::set<Term>& of(ConceptName x) const {
    static const std::set<Term> empty;
    auto it = sets_.find(x);
    return it == sets_.end() ? empty : it->second;
  }

  const std::map<ConceptName, std::set<Term>>& sets() const { return sets_; }

  bool is_acyclic() const {
    enum class Mark { White, Grey, Black };
    std::map<ConceptName, Mark> mark;
    std::function<bool(ConceptName)> visit = [&](ConceptName x) {
      auto& m = mark[x];
      if (m == Mark::Grey) return false;
      if (m == Mark::Black) return true;
      m = Mark::Grey;
      for (const auto& a : of(x)) {
        for (const auto& y : variables_of(a)) {
          if (!visit(y)) return false;
        }
      }
      mark[x] = Mark::Black;
      return true;
    };
    for (const auto& [x, _] : sets_) {
      if (!visit(x)) return false;
    }
    return true;
  }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::map<ConceptName, std::set<Term>> sets_;
};

/// σ(X) := conjunction of S_X (⊤ when empty), kept in dag form.
inline Substitution substitution_of_assignment(const Assignment& a) {
  if (!a.is_acyclic()) throw CyclicAssignmentError("assignment is cyclic");
  std::map<ConceptName, Term> bindings;
  for (const auto& [x, atoms] : a.sets()) {
    bindings.emplace(x, Term::conj(std::vector<Term>(atoms.begin(), atoms.end())));
  }
  return Substitution(std::move(bindings), SubstitutionForm::Dag);
}

}  // namespace elunif
