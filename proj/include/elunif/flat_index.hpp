#pragma once

// Integer-indexed view of a flat problem, shared by both solvers. Variables
// and non-variable atoms are numbered in term order.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "elunif/error.hpp"
#include "elunif/problem.hpp"

namespace elunif {

struct AtomInfo {
  enum class Filler : std::uint8_t { None, Top, Variable, Constant };

  bool is_exists = false;
  RoleName role{};
  Filler filler = Filler::None;
  /// Variable index for Filler::Variable, atom index for Filler::Constant.
  int filler_index = -1;
};

struct IndexedEquation {
  std::vector<int> lvar;
  std::vector<int> lato;
  std::vector<int> rvar;
  std::vector<int> rato;
};

class IndexedProblem {
 public:
  explicit IndexedProblem(const UnificationProblem& g) : problem_(g) {
    if (!g.is_flat()) throw NotFlatError("solver input must be a flat problem");
    vars_.assign(g.variables().begin(), g.variables().end());
    atoms_ = non_variable_atoms(g);
    for (std::size_t i = 0; i < vars_.size(); ++i) var_index_.emplace(vars_[i], static_cast<int>(i));
    for (std::size_t i = 0; i < atoms_.size(); ++i) atom_index_.emplace(atoms_[i], static_cast<int>(i));
    for (const auto& a : atoms_) info_.push_back(describe(a));
    for (const auto& e : g.equations()) {
      const FlatEquation f = four_sets(e);
      IndexedEquation ie;
      for (const auto& v : f.lvar) ie.lvar.push_back(var_index(v));
      for (const auto& v : f.rvar) ie.rvar.push_back(var_index(v));
      for (const auto& a : f.lato) ie.lato.push_back(atom_index(a));
      for (const auto& a : f.rato) ie.rato.push_back(atom_index(a));
      equations_.push_back(std::move(ie));
    }
  }

  const UnificationProblem& problem() const { return problem_; }
  const std::vector<ConceptName>& variables() const { return vars_; }
  const std::vector<Term>& atoms() const { return atoms_; }
  const std::vector<AtomInfo>& info() const { return info_; }
  const std::vector<IndexedEquation>& equations() const { return equations_; }

  int var_index(ConceptName v) const { return var_index_.at(v); }
  int atom_index(const Term& a) const { return atom_index_.at(a); }

  /// Variable index referenced inside atom i, or -1.
  int atom_variable(int i) const {
    const AtomInfo& ai = info_[static_cast<std::size_t>(i)];
    return ai.filler == AtomInfo::Filler::Variable ? ai.filler_index : -1;
  }

 private:
  AtomInfo describe(const Term& a) const {
    AtomInfo ai;
    if (!a.is_exists()) return ai;
    ai.is_exists = true;
    ai.role = a.role();
    const Term& f = a.filler();
    if (f.is_top()) {
      ai.filler = AtomInfo::Filler::Top;
    } else if (f.is_variable()) {
      ai.filler = AtomInfo::Filler::Variable;
      ai.filler_index = var_index(f.concept_name());
    } else {
      ai.filler = AtomInfo::Filler::Constant;
      ai.filler_index = atom_index(f);
    }
    return ai;
  }

  UnificationProblem problem_;
  std::vector<ConceptName> vars_;
  std::vector<Term> atoms_;
  std::vector<AtomInfo> info_;
  std::vector<IndexedEquation> equations_;
  std::map<ConceptName, int> var_index_;
  std::map<Term, int> atom_index_;
};

enum class Verdict { Sat, Unsat, BudgetExceeded };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Sat: return "solvable";
    case Verdict::Unsat: return "unsolvable";
    case Verdict::BudgetExceeded: return "budget exceeded";
  }
  return "?";
}

}  // namespace elunif
