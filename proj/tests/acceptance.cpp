// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "elunif/elunif.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace elunif;
using namespace elunif::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Term parse_term(const std::string& text, std::initializer_list<const char*> vars = {}) {
  std::set<std::string> v(vars.begin(), vars.end());
  return read_term(read_sexprs(text).at(0), v);
}

UnificationProblem parse(const std::string& text) { return parse_problem(text).problem(); }

/// Per-variable equivalence of σ's expanded images with the expected terms.
bool images_match(const Substitution& sigma, const std::map<std::string, std::string>& expected,
                  std::initializer_list<const char*> vars = {}) {
  for (const auto& [x, t] : expected) {
    if (!equivalent(sigma.image(ConceptName::variable(x)), parse_term(t, vars))) return false;
  }
  return true;
}

std::optional<Substitution> guess(const UnificationProblem& g) {
  return solve_guess(flatten(g).problem).unifier;
}

std::optional<Substitution> goal(const UnificationProblem& g) {
  return solve_goal(flatten(g).problem).unifier;
}

void fail(Outcome& o, const std::string& what) {
  if (o.pass) o.detail = what;
  o.pass = false;
}

Outcome criterion_1() {
  Outcome o;
  const auto g1 = parse("(variables X) (unify (and (some r X) (some r A)) (some r X))");
  const auto g2 = parse("(variables X) (unify (and X (some r A) (some r B)) X)");
  for (auto* solver : {&guess, &goal}) {
    const auto s1 = solver(g1);
    if (!s1 || !images_match(*s1, {{"X", "A"}})) fail(o, "Gamma1");
    const auto s2 = solver(g2);
    if (!s2 || !images_match(*s2, {{"X", "(and (some r A) (some r B))"}})) fail(o, "Gamma2");
  }
  const auto t1 = goal(parse("(variables X Y Z) (unify Y top) (unify Z (some r top)) (unify (and X Y) Z)"));
  if (!t1 || !images_match(*t1, {{"X", "(some r top)"}, {"Y", "top"}, {"Z", "(some r top)"}})) {
    fail(o, "eager trace");
  }
  const auto t2 = goal(parse("(variables X) (unify (and (some r X) (some r A)) (some r A))"));
  if (!t2 || !images_match(*t2, {{"X", "top"}})) fail(o, "decomposition trace");
  const auto t3 = goal(parse("(variables X) (unify (and A (some r top)) (and (some r top) X))"));
  if (!t3 || !images_match(*t3, {{"X", "A"}})) fail(o, "extension trace");
  if (o.pass) o.detail = "Gamma1, Gamma2 by both solvers; 3 goal-oriented traces";
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const std::map<std::string, std::string> expected{{"Man", "(and Human Male)"}, {"Sports_car", "(and Car Fast)"}};
  const ProblemFile plain = parse_problem(
      "(variables Man Sports_car)"
      "(unify (and Human Male (some loves Sports_car)) (and Man (some loves (and Car Fast))))");
  const ProblemFile with_tbox = parse_problem(
      "(variables Man Sports_car)"
      "(define Real_man (and Human Male (some loves Sports_car)))"
      "(define Stupid_man (and Man (some loves (and Car Fast))))"
      "(unify Real_man Stupid_man)");
  for (const ProblemFile* f : {&plain, &with_tbox}) {
    const UnificationProblem g = reduce_problem_mod_tbox(f->problem(), f->tbox());
    for (auto* solver : {&guess, &goal}) {
      const auto s = solver(g);
      if (!s || !images_match(*s, expected)) fail(o, f == &plain ? "plain form" : "TBox form");
      // The restriction to the user's variables unifies the original
      // problem modulo the TBox.
      if (s) {
        const Substitution r = s->restricted(f->problem().variables());
        std::vector<ConceptDefinition> defs;
        for (const auto& d : f->definitions) defs.push_back({d.lhs, r.apply(d.rhs)});
        const TBox applied(std::move(defs));
        for (const auto& e : f->equations) {
          if (!equivalent_wrt_tbox(applied, r.apply(e.lhs), r.apply(e.rhs))) fail(o, "modulo-TBox check");
        }
      }
    }
  }
  if (o.pass) o.detail = "plain and TBox forms, both solvers";
  return o;
}

struct CorpusStats {
  std::size_t problems = 0;
  std::size_t solvable = 0;
  std::size_t disagreements = 0;
  std::size_t non_unifiers = 0;
  std::uint64_t bound_violations = 0;
  std::size_t eager_over = 0;
  std::size_t max_eager = 0;
  std::size_t max_other = 0;
};

/// Shared by criteria 3 and 7.
const CorpusStats& corpus() {
  static const CorpusStats stats = [] {
    CorpusStats s;
    Rng rng(20240601);
    for (int i = 0; i < 50000; ++i) {
      const UnificationProblem g = random_flat_problem(rng);
      ++s.problems;
      const GuessResult a = solve_guess(g);
      const GoalResult b = solve_goal(g);
      if (a.verdict != b.verdict) ++s.disagreements;
      if (a.verdict == Verdict::Sat) ++s.solvable;
      for (const auto* u : {&a.unifier, &b.unifier}) {
        if (*u && !is_unifier(u->value().expanded(), g)) ++s.non_unifiers;
      }
      s.bound_violations += b.stats.bound_violations;
      if (b.stats.max_eager > g.variables().size()) ++s.eager_over;
      s.max_eager = std::max(s.max_eager, b.stats.max_eager);
      s.max_other = std::max(s.max_other, b.stats.max_other);
    }
    return s;
  }();
  return stats;
}

Outcome criterion_3() {
  const CorpusStats& s = corpus();
  Outcome o;
  o.pass = s.disagreements == 0 && s.non_unifiers == 0;
  o.detail = std::to_string(s.problems) + " problems, " + std::to_string(s.solvable) + " solvable, " +
             std::to_string(s.disagreements) + " disagreements, " + std::to_string(s.non_unifiers) +
             " non-unifiers";
  return o;
}

Outcome criterion_4() {
  Rng rng(7);
  TermShape shape;
  std::size_t mismatches = 0, refuted = 0, depth_violations = 0, positives = 0, equivalences = 0;
  const int pairs = 100000;
  for (int i = 0; i < pairs; ++i) {
    const Term c = random_term(rng, shape);
    const std::size_t mode = rng.below(3);
    const Term d = mode == 0 ? random_term(rng, shape)
                   : mode == 1 ? random_generalization(rng, c)
                               : random_equivalent_variant(rng, c);
    const bool eq = equivalent(c, d);
    equivalences += eq;
    if (eq != equivalent_via_reduction(c, d)) ++mismatches;
    if (!subsumes(c, d)) continue;
    ++positives;
    if (role_depth(d) > role_depth(c)) ++depth_violations;
    Signature sig;
    sig.add(c);
    sig.add(d);
    for (int k = 0; k < 20; ++k) {
      const Interpretation interp = random_interpretation(sig, 5, rng.next());
      if (!evaluate(c, interp).is_subset_of(evaluate(d, interp))) {
        ++refuted;
        break;
      }
    }
  }
  Outcome o;
  o.pass = mismatches == 0 && refuted == 0 && depth_violations == 0;
  o.detail = std::to_string(pairs) + " pairs (" + std::to_string(positives) + " subsumptions, " +
             std::to_string(equivalences) + " equivalences): " + std::to_string(mismatches) +
             " equivalence mismatches, " + std::to_string(refuted) + " model refutations, " +
             std::to_string(depth_violations) + " role-depth violations";
  return o;
}

/// Draws whose flattened expansion exceeds this are redrawn: proving such
/// problems unsolvable is an exhaustive search either way.
constexpr std::size_t kMaxExpandedVariables = 7;
constexpr std::size_t kMaxExpandedAtoms = 9;

Outcome criterion_5() {
  Rng rng(11);
  std::size_t mismatches = 0, solvable = 0, unsound = 0, redrawn = 0;
  const int problems = 5000;
  for (int i = 0; i < problems; ++i) {
    TBoxProblem tp;
    UnificationProblem oracle;
    while (true) {
      tp = random_tbox_problem(rng);
      std::vector<UnificationEquation> expanded;
      for (const auto& e : tp.problem.equations()) {
        expanded.push_back({naive_expand(e.lhs, tp.tbox), naive_expand(e.rhs, tp.tbox)});
      }
      oracle = UnificationProblem(std::move(expanded));
      const UnificationProblem flat = flatten(oracle).problem;
      if (flat.variables().size() <= kMaxExpandedVariables && non_variable_atoms(flat).size() <= kMaxExpandedAtoms) break;
      ++redrawn;
    }
    const UnificationProblem reduced = reduce_problem_mod_tbox(tp.problem, tp.tbox);
    const GoalResult a = solve_goal(flatten(reduced).problem);
    const GoalResult b = solve_goal(flatten(oracle).problem);
    if (a.verdict != b.verdict) ++mismatches;
    if (a.verdict == Verdict::Sat) {
      ++solvable;
      const Substitution r = a.unifier->restricted(oracle.variables());
      if (!is_unifier(r, oracle)) ++unsound;
    }
  }

  Rng qrng(13);
  std::size_t query_mismatches = 0, positives = 0;
  const int queries = 10000;
  for (int i = 0; i < queries; ++i) {
    TBoxShape ground;
    ground.max_variables = 0;
    const TBoxProblem tp = random_tbox_problem(qrng, ground);
    const auto& e = tp.problem.equations().front();
    const bool fast = subsumes_wrt_tbox(tp.tbox, e.lhs, e.rhs);
    const bool slow = subsumes(naive_expand(e.lhs, tp.tbox), naive_expand(e.rhs, tp.tbox));
    positives += fast;
    if (fast != slow) ++query_mismatches;
  }
  Outcome o;
  o.pass = mismatches == 0 && unsound == 0 && query_mismatches == 0;
  o.detail = std::to_string(problems) + " TBox problems (" + std::to_string(solvable) + " solvable, " +
             std::to_string(redrawn) + " oversize draws redrawn): " +
             std::to_string(mismatches) + " mismatches, " + std::to_string(unsound) + " unsound; " +
             std::to_string(queries) + " subsumption queries (" + std::to_string(positives) +
             " positive): " + std::to_string(query_mismatches) + " mismatches";
  return o;
}

Outcome criterion_6() {
  Outcome o;
  std::ostringstream detail;
  for (unsigned k = 1; k <= 4; ++k) {
    const ChainReport r = verify_chain(type_zero_chain(k));
    std::size_t refuted = 0;
    for (const auto& c : r.checks) {
      if (c.kind == "not_instance" && c.outcome == CheckOutcome::Pass) ++refuted;
    }
    if (!r.passed() || refuted != k) fail(o, "k=" + std::to_string(k) + " " + to_string(r.overall()));
    detail << (k > 1 ? ", " : "") << "k=" << k << ' ' << to_string(r.overall());
  }
  if (o.pass) o.detail = detail.str();
  return o;
}

Outcome criterion_7() {
  const CorpusStats& s = corpus();
  Outcome o;
  o.pass = s.bound_violations == 0 && s.eager_over == 0;
  o.detail = std::to_string(s.problems) + " problems: " + std::to_string(s.bound_violations) +
             " per-branch bound violations; max Eager-Assignment " + std::to_string(s.max_eager) +
             ", max Decomposition+Extension " + std::to_string(s.max_other);
  return o;
}

Outcome criterion_8() {
  Rng rng(17);
  std::size_t axiom_failures = 0;
  const int instances = 1000;
  for (int i = 0; i < instances; ++i) {
    const SLTerm x = random_slmo(rng, 3), y = random_slmo(rng, 3), z = random_slmo(rng, 3);
    const unsigned f = static_cast<unsigned>(1 + rng.below(2));
    using S = SLTerm;
    const bool ok = slmo_word_problem(S::meet(x, x), x) &&
                    slmo_word_problem(S::meet(x, y), S::meet(y, x)) &&
                    slmo_word_problem(S::meet(S::meet(x, y), z), S::meet(x, S::meet(y, z))) &&
                    slmo_word_problem(S::meet(x, S::one()), x) &&
                    slmo_word_problem(S::meet(S::mono(f, S::meet(x, y)), S::mono(f, y)), S::mono(f, S::meet(x, y)));
    if (!ok) ++axiom_failures;
  }
  std::size_t trip_failures = 0;
  const int trips = 10000;
  TermShape shape;
  shape.names.push_back(ConceptName::variable("X"));
  for (int i = 0; i < trips; ++i) {
    const Term c = random_term(rng, shape);
    const RoleIndex index = index_roles(role_names(c));
    if (from_slmo(to_slmo(c, index), invert(index)) != c) ++trip_failures;
    const SLTerm t = random_slmo(rng, 4);
    const IndexRole roles = default_roles(t);
    RoleIndex back;
    for (const auto& [k, r] : roles) back.emplace(r, k);
    if (sl_canonical(to_slmo(from_slmo(t, roles), back)) != sl_canonical(t)) ++trip_failures;
  }
  Outcome o;
  o.pass = axiom_failures == 0 && trip_failures == 0;
  o.detail = std::to_string(instances) + " instantiations x 5 axioms: " + std::to_string(axiom_failures) +
             " failures; " + std::to_string(trips) + " round trips each way: " + std::to_string(trip_failures) +
             " failures";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit_seconds;  // 0 = no stated limit
  };
  const std::vector<Criterion> criteria{
      {1, "worked examples", criterion_1, 1.0},
      {2, "Man/Sports_car scenario", criterion_2, 1.0},
      {3, "cross-solver agreement", criterion_3, 0.0},
      {4, "subsumption correctness", criterion_4, 0.0},
      {5, "TBox reduction soundness", criterion_5, 0.0},
      {6, "type-zero chains", criterion_6, 10.0},
      {7, "goal-oriented rule bounds", criterion_7, 0.0},
      {8, "SLmO bridge", criterion_8, 0.0},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail += " (over the time limit)";
    }
    all = all && o.pass;
    std::printf("criterion %d %s: %s -- %s [%.2fs]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
