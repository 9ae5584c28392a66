#include <gtest/gtest.h>

#include "elunif/elunif.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/parse.hpp"

using namespace elunif;
using namespace elunif::testing;

namespace {

TBox mother_tbox() {
  return parse_problem(
             "(define Mother (and Woman (some child Human)))"
             "(define Woman (and Human Female))")
      .tbox();
}

}  // namespace

TEST(TBox, RejectsDuplicateDefinitions) {
  EXPECT_THROW(TBox({{con("A"), term("B")}, {con("A"), term("C")}}), Error);
}

TEST(DependsOn, MotherDependsOnWoman) {
  const TBox t = mother_tbox();
  EXPECT_TRUE(is_acyclic(t));
  const auto dep = depends_on(t);
  EXPECT_TRUE(dep.at(con("Mother")).count(con("Woman")));
  EXPECT_TRUE(dep.at(con("Mother")).count(con("Human")));
  EXPECT_FALSE(dep.at(con("Woman")).count(con("Mother")));
}

TEST(DependsOn, CyclesAndEmpty) {
  EXPECT_FALSE(is_acyclic(TBox({{con("A"), term("(some r A)")}})));
  EXPECT_FALSE(is_acyclic(TBox({{con("A"), term("(and B C)")}, {con("B"), term("(some r A)")}})));
  EXPECT_TRUE(is_acyclic(TBox()));
  EXPECT_TRUE(depends_on(TBox()).empty());
}

TEST(Expand, Examples) {
  const TBox t = mother_tbox();
  EXPECT_EQ(expand(term("Mother"), t), term("(and Human Female (some child Human))"));
  const Term prim = term("(and A (some r B))");
  EXPECT_EQ(expand(prim, t), prim);
}

TEST(Expand, RejectsCycles) {
  EXPECT_THROW(expand(term("A"), TBox({{con("A"), term("(some r A)")}})), CyclicTBoxError);
}

TEST(Expand, SizeLimit) {
  std::vector<ConceptDefinition> defs;
  for (int i = 0; i < 20; ++i) {
    const std::string next = "A" + std::to_string(i + 1);
    defs.push_back({con(("A" + std::to_string(i)).c_str()),
                    Term::conj({Term::exists(RoleName::of("r"), Term::name(con(next.c_str()))),
                                Term::exists(RoleName::of("s"), Term::name(con(next.c_str())))})});
  }
  const TBox t(std::move(defs));
  EXPECT_THROW(expand(term("A0"), t, 10000), SizeLimitError);
}

TEST(Expand, MatchesNaiveExpansionOnNestedDefinitions) {
  Rng rng(4);
  for (int k = 0; k < 500; ++k) {
    const TBoxProblem tp = random_tbox_problem(rng);
    for (const auto& d : tp.tbox.definitions()) {
      const Term e = expand(Term::name(d.lhs), tp.tbox);
      EXPECT_EQ(e, naive_expand(Term::name(d.lhs), tp.tbox));
      EXPECT_EQ(expand(e, tp.tbox), e);
      for (const auto& n : concept_names(e)) {
        EXPECT_FALSE(tp.tbox.is_defined(n));
      }
    }
  }
}

TEST(ProblemOfTBox, MotherExample) {
  const UnificationProblem g = problem_of_tbox(mother_tbox());
  ASSERT_EQ(g.equations().size(), 2u);
  EXPECT_EQ(g.equations()[0].lhs, Term::name(var("Mother")));
  EXPECT_EQ(g.equations()[0].rhs, term("(and Woman (some child Human))", {"Woman"}));
  EXPECT_EQ(g.equations()[1].lhs, Term::name(var("Woman")));
  EXPECT_EQ(g.equations()[1].rhs, term("(and Human Female)"));
  EXPECT_TRUE(is_dag_solved(g));
}

TEST(ProblemOfTBox, SmallCases) {
  EXPECT_TRUE(problem_of_tbox(TBox()).equations().empty());
  EXPECT_EQ(problem_of_tbox(TBox({{con("A"), term("B")}})).equations().size(), 1u);
}

TEST(SigmaOfDagSolved, Examples) {
  const Substitution s = sigma_of_dag_solved(problem_of_tbox(mother_tbox()));
  EXPECT_EQ(s.image(var("Mother")), term("(and Human Female (some child Human))"));
  EXPECT_EQ(s.image(var("Woman")), term("(and Human Female)"));
  EXPECT_EQ(sigma_of_dag_solved(problem("(variables X) (unify X A)")).image(var("X")), term("A"));
  const Substitution chain = sigma_of_dag_solved(problem("(variables X1 X2) (unify X1 (some r X2)) (unify X2 A)"));
  EXPECT_EQ(chain.image(var("X1")), term("(some r A)"));
}

TEST(SigmaOfDagSolved, RejectsOtherProblems) {
  EXPECT_THROW(sigma_of_dag_solved(problem("(variables X) (unify X (some r X))")), Error);
  EXPECT_THROW(sigma_of_dag_solved(problem("(variables X) (unify A X)")), Error);
}

TEST(ReduceModTBox, ManSportsCar) {
  const ProblemFile f = parse_problem(
      "(variables Man Sports_car)"
      "(define Real_man (and Human Male (some loves Sports_car)))"
      "(define Stupid_man (and Man (some loves (and Car Fast))))"
      "(unify Real_man Stupid_man)");
  const UnificationProblem g = reduce_problem_mod_tbox(f.problem(), f.tbox());
  EXPECT_EQ(g.equations().size(), 3u);
  EXPECT_TRUE(g.variables().count(var("Real_man")));
  const GoalResult r = solve_goal(flatten(g).problem);
  ASSERT_EQ(r.verdict, Verdict::Sat);
  EXPECT_TRUE(equivalent(r.unifier->image(var("Man")), term("(and Human Male)")));
  EXPECT_TRUE(equivalent(r.unifier->image(var("Sports_car")), term("(and Car Fast)")));
}

TEST(ReduceModTBox, EmptyTBoxIsIdentity) {
  const UnificationProblem g = problem("(variables X) (unify X A)");
  EXPECT_EQ(reduce_problem_mod_tbox(g, TBox()).equations(), g.equations());
}

TEST(ReduceModTBox, RejectsCycles) {
  EXPECT_THROW(reduce_problem_mod_tbox(problem("(unify A B)"), TBox({{con("A"), term("(some r A)")}})),
               CyclicTBoxError);
}

TEST(ReduceModTBox, OutputIsLinear) {
  Rng rng(6);
  for (int k = 0; k < 300; ++k) {
    const TBoxProblem tp = random_tbox_problem(rng);
    const UnificationProblem g = reduce_problem_mod_tbox(tp.problem, tp.tbox);
    EXPECT_LE(g.size(), tp.problem.size() + tp.tbox.total_size());
  }
}

// Properties.

TEST(TBoxProperties, ExpansionIsTheDagUnifier) {
  Rng rng(10);
  TermShape shape;
  shape.names = constants({"A", "B", "D0", "D1", "D2"});
  shape.roles = roles({"r"});
  for (int k = 0; k < 300; ++k) {
    const TBoxProblem tp = random_tbox_problem(rng);
    const UnificationProblem gamma = problem_of_tbox(tp.tbox);
    EXPECT_TRUE(is_dag_solved(gamma));
    EXPECT_TRUE(naive_is_dag_solved(gamma));
    const Substitution sigma = sigma_of_dag_solved(gamma);
    EXPECT_TRUE(is_unifier(sigma, gamma));
    const Term c = random_term(rng, shape);
    auto as_var = [&](ConceptName n) { return Term::name(tp.tbox.is_defined(n) ? n.as_variable() : n); };
    // Names D_i the TBox does not define stay constants on both sides.
    EXPECT_EQ(expand(c, tp.tbox), sigma.apply(replace_names(c, as_var)));
  }
}

TEST(TBoxProperties, UnifierModuloTBoxIffUnifierOfExpansion) {
  // For σ over primitive names: σ unifies g modulo T iff it unifies the
  // expanded problem.
  Rng rng(14);
  TermShape images;
  images.names = constants({"A", "B"});
  images.roles = roles({"r"});
  images.max_depth = 2;
  int agreeing_positive = 0;
  for (int k = 0; k < 2000; ++k) {
    const TBoxProblem tp = random_tbox_problem(rng);
    std::map<ConceptName, Term> bindings;
    for (const auto& x : tp.problem.variables()) bindings.emplace(x, random_term(rng, images));
    const Substitution sigma(bindings);
    std::vector<ConceptDefinition> applied;
    for (const auto& d : tp.tbox.definitions()) applied.push_back({d.lhs, sigma.apply(d.rhs)});
    const TBox sigma_t(std::move(applied));
    bool modulo = true;
    for (const auto& e : tp.problem.equations()) {
      modulo = modulo && equivalent_wrt_tbox(sigma_t, sigma.apply(e.lhs), sigma.apply(e.rhs));
    }
    std::vector<UnificationEquation> expanded;
    for (const auto& e : tp.problem.equations()) {
      expanded.push_back({naive_expand(e.lhs, tp.tbox), naive_expand(e.rhs, tp.tbox)});
    }
    const bool plain = is_unifier(sigma, UnificationProblem(std::move(expanded)));
    EXPECT_EQ(modulo, plain);
    agreeing_positive += modulo && plain;
  }
  EXPECT_GT(agreeing_positive, 0);
}

TEST(TBoxProperties, ReductionPreservesSolvability) {
  Rng rng(15);
  for (int k = 0; k < 300; ++k) {
    const TBoxProblem tp = random_tbox_problem(rng);
    std::vector<UnificationEquation> expanded;
    for (const auto& e : tp.problem.equations()) {
      expanded.push_back({naive_expand(e.lhs, tp.tbox), naive_expand(e.rhs, tp.tbox)});
    }
    const UnificationProblem plain(std::move(expanded));
    const UnificationProblem flat_plain = flatten(plain).problem;
    if (flat_plain.variables().size() > 4 || non_variable_atoms(flat_plain).size() > 7) continue;
    GuessConfig cfg;
    cfg.max_assignments = 2'000'000;
    const GuessResult direct = solve_guess(flat_plain, cfg);
    const GoalResult reduced = solve_goal(flatten(reduce_problem_mod_tbox(tp.problem, tp.tbox)).problem);
    if (direct.verdict == Verdict::BudgetExceeded) continue;
    EXPECT_EQ(direct.verdict, reduced.verdict);
  }
}
