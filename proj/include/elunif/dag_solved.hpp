#pragma once

// Bridges between acyclic TBoxes and unification problems: Γ(T), the most
// general unifier of a dag-solved problem, and the reduction of unification
// modulo a TBox to plain unification.

#include <map>
#include <set>
#include <vector>

#include "elunif/error.hpp"
#include "elunif/problem.hpp"
#include "elunif/tbox.hpp"

namespace elunif {

/// Whether g is {X1 ≡? C1, ..., Xn ≡? Cn} with distinct variables Xi and Xi
/// not occurring in Ci, ..., Cn.
inline bool is_dag_solved(const UnificationProblem& g) {
  const auto& eqs = g.equations();
  std::set<ConceptName> seen;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (!eqs[i].lhs.is_variable()) return false;
    const ConceptName x = eqs[i].lhs.concept_name();
    if (!seen.insert(x).second) return false;
    for (std::size_t j = i; j < eqs.size(); ++j) {
      if (contains_name(eqs[j].rhs, x)) return false;
    }
  }
  return true;
}

/// Γ(T): one equation A ≡? C per definition, with every defined concept
/// turned into a variable, ordered so that each left-hand side is absent from
/// its own and all later right-hand sides. Ties go to the smaller name.
inline UnificationProblem problem_of_tbox(const TBox& t) {
  t.require_acyclic();
  const auto& defs = t.definitions();
  auto to_var = [&t](ConceptName n) {
    return Term::name(t.is_defined(n) ? n.as_variable() : n);
  };

  // mentioned_by[A] = number of not yet placed definitions whose rhs mentions A
  std::map<ConceptName, std::size_t> mentioned_by;
  std::map<ConceptName, std::set<ConceptName>> mentions;
  for (const auto& d : defs) {
    mentioned_by.try_emplace(d.lhs, 0);
    for (const auto& n : concept_names(d.rhs)) {
      if (t.is_defined(n)) mentions[d.lhs].insert(n);
    }
  }
  for (const auto& [_, ns] : mentions) {
    for (const auto& n : ns) ++mentioned_by[n];
  }
  std::set<ConceptName> ready;
  for (const auto& [n, k] : mentioned_by) {
    if (k == 0) ready.insert(n);
  }

  std::vector<UnificationEquation> eqs;
  std::set<ConceptName> declared;
  while (!ready.empty()) {
    const ConceptName a = *ready.begin();
    ready.erase(ready.begin());
    eqs.push_back({Term::name(a.as_variable()), replace_names(*t.definition_of(a), to_var)});
    for (const auto& b : mentions[a]) {
      if (--mentioned_by[b] == 0) ready.insert(b);
    }
  }
  return UnificationProblem(std::move(eqs));
}

/// σ_Γ for g in dag-solved form, built back to front: σ(Xn) = Cn and
/// σ(Xi) = σ(Ci) using the images of the later variables.
inline Substitution sigma_of_dag_solved(const UnificationProblem& g) {
  if (!is_dag_solved(g)) throw Error("problem is not in dag-solved form");
  const auto& eqs = g.equations();
  std::map<ConceptName, Term> images;
  for (std::size_t i = eqs.size(); i-- > 0;) {
    Substitution later(images);
    images.emplace(eqs[i].lhs.concept_name(), later.apply(eqs[i].rhs));
  }
  return Substitution(std::move(images), SubstitutionForm::Expanded);
}

/// {Ci ≡? Di} ∪ Γ(T) with the defined concepts of T as variables. Solvable
/// iff g is solvable modulo T. Unifiers of the result, restricted to the
/// variables of g, are unifiers of g modulo T.
inline UnificationProblem reduce_problem_mod_tbox(const UnificationProblem& g, const TBox& t) {
  t.require_acyclic();
  if (t.empty()) return g;
  for (const auto& x : g.variables()) {
    if (t.is_defined(x.as_constant())) {
      throw Error("variable '" + x.text() + "' clashes with a defined concept");
    }
  }
  auto to_var = [&t](ConceptName n) {
    return Term::name(t.is_defined(n) ? n.as_variable() : n);
  };
  std::vector<UnificationEquation> eqs;
  for (const auto& e : g.equations()) {
    eqs.push_back({replace_names(e.lhs, to_var), replace_names(e.rhs, to_var)});
  }
  const UnificationProblem defs = problem_of_tbox(t);
  eqs.insert(eqs.end(), defs.equations().begin(), defs.equations().end());

  std::set<ConceptName> declared = g.variables();
  for (const auto& c : g.constants()) declared.insert(t.is_defined(c) ? c.as_variable() : c);
  return UnificationProblem(std::move(eqs), declared);
}

}  // namespace elunif
