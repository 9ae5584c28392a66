#pragma once

// The instantiation preorder decided by matching, and a generator/verifier
// for strictly descending unifier chains of {X ⊓ ∃r.Y ≡? ∃r.Y}, the
// standard witness that EL unification has type zero.

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "elunif/error.hpp"
#include "elunif/problem.hpp"
#include "elunif/solver_goal.hpp"
#include "elunif/subsumption.hpp"

namespace elunif {

inline constexpr std::uint64_t kDefaultMatchBudget = 5'000'000;

namespace detail {

inline ConceptName frozen(ConceptName x) {
  return ConceptName::constant(std::string(kReservedPrefix) + "frozen_" + x.text());
}

}  // namespace detail

struct MatchResult {
  Verdict verdict = Verdict::Unsat;
  /// λ on the variables of s's images, with t's variables restored.
  std::optional<Substitution> matcher;
};

/// Decides s ≤• t on vars: is there λ with λ(s(X)) ≡ t(X) for every X? The
/// variables in t's images are held fixed, so this is a matching problem
/// {s(X) ≡? t(X)} solved by the goal-oriented solver. Flattening the frozen
/// side gives variables that Eager-Assignment fixes at once, which the
/// guess solver would have to enumerate.
inline MatchResult match_instance(const Substitution& s, const Substitution& t,
                                  const std::set<ConceptName>& vars,
                                  std::optional<std::uint64_t> budget = kDefaultMatchBudget) {
  std::map<ConceptName, ConceptName> thawed;
  auto freeze = [&](ConceptName n) {
    if (!n.is_variable()) return Term::name(n);
    const ConceptName c = detail::frozen(n);
    thawed.emplace(c, n);
    return Term::name(c);
  };
  std::vector<UnificationEquation> eqs;
  for (const auto& x : vars) eqs.push_back({s.image(x), replace_names(t.image(x), freeze)});
  const UnificationProblem g(std::move(eqs));
  const FlattenResult flat = flatten(g);
  GoalConfig cfg;
  cfg.max_nodes = budget;
  const GoalResult r = solve_goal(flat.problem, cfg);
  MatchResult out;
  out.verdict = r.verdict;
  if (r.unifier) {
    auto thaw = [&](ConceptName n) {
      auto it = thawed.find(n);
      return Term::name(it == thawed.end() ? n : it->second);
    };
    std::map<ConceptName, Term> lambda;
    const Substitution restricted = r.unifier->restricted(g.variables());
    for (const auto& [x, image] : restricted.bindings()) {
      lambda.emplace(x, replace_names(image, thaw));
    }
    out.matcher = Substitution(std::move(lambda));
  }
  return out;
}

/// s ≤• t on vars (t is an instance of s). Throws BudgetExceededError when
/// the matcher runs out of budget.
inline bool is_instance(const Substitution& s, const Substitution& t, const std::set<ConceptName>& vars,
                        std::optional<std::uint64_t> budget = kDefaultMatchBudget) {
  const MatchResult r = match_instance(s, t, vars, budget);
  if (r.verdict == Verdict::BudgetExceeded) throw BudgetExceededError("matching budget exceeded");
  return r.verdict == Verdict::Sat;
}

// ---------------------------------------------------------------------------
// Type-zero chains

struct UnifierChain {
  UnificationProblem problem;
  std::vector<Substitution> steps;
  /// fresh_vars[i] is the variable introduced by steps[i + 1].
  std::vector<ConceptName> fresh_vars;
};

/// {X ⊓ ∃r.Y ≡? ∃r.Y}.
inline UnificationProblem type_zero_problem() {
  const Term x = Term::name(ConceptName::variable("X"));
  const Term y = Term::name(ConceptName::variable("Y"));
  const Term ry = Term::exists(RoleName::of("r"), y);
  return UnificationProblem({{Term::conj({x, ry}), ry}});
}

/// σ_0 = {X ↦ ∃r.A, Y ↦ A}, then k refinements. If σ(X) reduces to
/// ∃r.C_1 ⊓ ... ⊓ ∃r.C_n and σ(Y) = D, the next step maps X to
/// ∃r.C_1 ⊓ ... ⊓ ∃r.C_n ⊓ ∃r.Z and Y to D ⊓ Z for a fresh Z.
inline UnifierChain type_zero_chain(unsigned k) {
  const ConceptName x = ConceptName::variable("X");
  const ConceptName y = ConceptName::variable("Y");
  const RoleName r = RoleName::of("r");
  const Term a = Term::name(ConceptName::constant("A"));

  UnifierChain chain{type_zero_problem(), {}, {}};
  chain.steps.emplace_back(std::map<ConceptName, Term>{{x, Term::exists(r, a)}, {y, a}});
  for (unsigned i = 1; i <= k; ++i) {
    const Substitution& prev = chain.steps.back();
    const ConceptName z = ConceptName::variable(std::string(kReservedPrefix) + "Z" + std::to_string(i));
    const Term zt = Term::name(z);
    std::vector<Term> parts = top_level_atoms(reduce(prev.image(x)));
    parts.push_back(Term::exists(r, zt));
    chain.steps.emplace_back(std::map<ConceptName, Term>{
        {x, Term::conj(std::move(parts))}, {y, Term::conj({prev.image(y), zt})}});
    chain.fresh_vars.push_back(z);
  }
  return chain;
}

enum class CheckOutcome { Pass, Fail, Inconclusive };

inline const char* to_string(CheckOutcome o) {
  switch (o) {
    case CheckOutcome::Pass: return "pass";
    case CheckOutcome::Fail: return "fail";
    case CheckOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct ChainCheck {
  std::string kind;  // unifier, instance, not_instance
  std::size_t step;
  CheckOutcome outcome;
  std::string detail;
};

struct ChainReport {
  std::vector<ChainCheck> checks;
  std::size_t steps = 0;

  CheckOutcome overall() const {
    CheckOutcome o = CheckOutcome::Pass;
    for (const auto& c : checks) {
      if (c.outcome == CheckOutcome::Fail) return CheckOutcome::Fail;
      if (c.outcome == CheckOutcome::Inconclusive) o = CheckOutcome::Inconclusive;
    }
    return o;
  }

  bool passed() const { return overall() == CheckOutcome::Pass; }
};

namespace detail {

/// λ(Z) = C_1 where Z is the fresh variable of `next` and ∃r.C_1 the first
/// existential of the reduced predecessor image of X.
inline bool witness_holds(const UnifierChain& c, std::size_t i, std::string& detail) {
  const Substitution& prev = c.steps[i - 1];
  const Substitution& next = c.steps[i];
  if (i - 1 >= c.fresh_vars.size()) return false;
  const ConceptName x = ConceptName::variable("X");
  const auto parts = top_level_atoms(reduce(prev.image(x)));
  if (parts.empty() || !parts.front().is_exists()) return false;
  const Term c1 = parts.front().filler();
  const Substitution lambda({{c.fresh_vars[i - 1], c1}});
  for (const auto& v : c.problem.variables()) {
    if (!equivalent(lambda.apply(next.image(v)), prev.image(v))) return false;
  }
  detail = "witness " + c.fresh_vars[i - 1].text() + " -> " + to_string(c1);
  return true;
}

}  // namespace detail

inline ChainReport verify_chain(const UnifierChain& c, std::optional<std::uint64_t> budget = kDefaultMatchBudget) {
  ChainReport report;
  report.steps = c.steps.size();
  const std::set<ConceptName>& vars = c.problem.variables();
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    const bool ok = is_unifier(c.steps[i], c.problem);
    report.checks.push_back({"unifier", i, ok ? CheckOutcome::Pass : CheckOutcome::Fail, ""});
  }
  for (std::size_t i = 1; i < c.steps.size(); ++i) {
    std::string detail;
    if (detail::witness_holds(c, i, detail)) {
      report.checks.push_back({"instance", i, CheckOutcome::Pass, detail});
    } else {
      const MatchResult m = match_instance(c.steps[i], c.steps[i - 1], vars, budget);
      const CheckOutcome o = m.verdict == Verdict::Sat    ? CheckOutcome::Pass
                             : m.verdict == Verdict::Unsat ? CheckOutcome::Fail
                                                           : CheckOutcome::Inconclusive;
      report.checks.push_back({"instance", i, o, std::string("matcher: ") + to_string(m.verdict)});
    }
    const MatchResult back = match_instance(c.steps[i - 1], c.steps[i], vars, budget);
    const CheckOutcome o = back.verdict == Verdict::Unsat ? CheckOutcome::Pass
                           : back.verdict == Verdict::Sat ? CheckOutcome::Fail
                                                          : CheckOutcome::Inconclusive;
    report.checks.push_back({"not_instance", i, o, std::string("matcher: ") + to_string(back.verdict)});
  }
  return report;
}

inline void write_chain(std::ostream& os, const UnifierChain& c) {
  for (std::size_t i = 0; i < c.steps.size(); ++i) {
    os << "step " << i << ":";
    for (const auto& [x, t] : c.steps[i].bindings()) os << ' ' << x.text() << " -> " << t << ';';
    os << '\n';
  }
}

inline void write_report(std::ostream& os, const ChainReport& r) {
  for (const auto& c : r.checks) {
    os << '[' << to_string(c.outcome) << "] ";
    if (c.kind == "unifier") {
      os << "step " << c.step << " is a unifier";
    } else if (c.kind == "instance") {
      os << "step " << c.step << " <=. step " << c.step - 1;
    } else {
      os << "step " << c.step - 1 << " not <=. step " << c.step;
    }
    if (!c.detail.empty()) os << " (" << c.detail << ')';
    os << '\n';
  }
  os << "result: " << to_string(r.overall()) << '\n';
}

/// One key=value pair per line.
inline void write_report_kv(std::ostream& os, const ChainReport& r) {
  os << "steps=" << r.steps << '\n';
  for (const auto& c : r.checks) os << "check." << c.kind << '.' << c.step << '=' << to_string(c.outcome) << '\n';
  os << "result=" << to_string(r.overall()) << '\n';
}

}  // namespace elunif
