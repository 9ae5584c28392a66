#include <gtest/gtest.h>

#include "elunif/elunif.hpp"
#include "support/generators.hpp"
#include "support/parse.hpp"

using namespace elunif;
using namespace elunif::testing;

namespace {

Extension bits(std::size_t n, std::initializer_list<std::size_t> on) {
  Extension e(n);
  for (auto i : on) e.set(i);
  return e;
}

}  // namespace

TEST(Evaluate, TopIsTheDomain) {
  const Interpretation i(2);
  EXPECT_EQ(evaluate(Term::top(), i), bits(2, {0, 1}));
}

TEST(Evaluate, Existential) {
  Interpretation i(2);
  i.add_edge(RoleName::of("r"), 0, 1);
  i.set_concept(con("A"), bits(2, {1}));
  EXPECT_EQ(evaluate(term("(some r A)"), i), bits(2, {0}));
}

TEST(Evaluate, Conjunction) {
  Interpretation i(3);
  i.set_concept(con("A"), bits(3, {0, 1}));
  i.set_concept(con("B"), bits(3, {1}));
  EXPECT_EQ(evaluate(term("(and A B)"), i), bits(3, {1}));
}

TEST(Evaluate, MissingNamesAreEmpty) {
  const Interpretation i(2);
  EXPECT_TRUE(evaluate(term("Unknown"), i).none());
  EXPECT_TRUE(evaluate(term("(some r top)"), i).none());
}

TEST(Evaluate, RejectsVariables) {
  EXPECT_THROW(evaluate(term("X", {"X"}), Interpretation(1)), NotGroundError);
}

TEST(Interpretation, RejectsOutOfDomainData) {
  Interpretation i(2);
  EXPECT_THROW(i.add_edge(RoleName::of("r"), 0, 2), Error);
  EXPECT_THROW(i.set_concept(con("A"), Extension(3)), Error);
}

TEST(IsModel, Examples) {
  Interpretation i(2);
  i.add_edge(RoleName::of("r"), 0, 1);
  i.set_concept(con("B"), bits(2, {1}));
  EXPECT_TRUE(is_model(i, TBox()));
  const TBox t({{con("A"), term("(some r B)")}});
  Interpretation good = i;
  good.set_concept(con("A"), bits(2, {0}));
  EXPECT_TRUE(is_model(good, t));
  Interpretation bad = i;
  bad.set_concept(con("A"), bits(2, {}));
  EXPECT_FALSE(is_model(bad, t));
}

TEST(CompleteModel, SatisfiesTheTBox) {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    TBoxShape ground;
    ground.max_variables = 0;
    const TBoxProblem tp = random_tbox_problem(rng, ground);
    Signature sig;
    for (const auto& d : tp.tbox.definitions()) sig.add(d.rhs);
    const Interpretation i = complete_model(random_interpretation(sig, 4, rng.next()), tp.tbox);
    EXPECT_TRUE(is_model(i, tp.tbox));
  }
}

TEST(RandomInterpretation, Deterministic) {
  Signature sig;
  sig.add(term("(and A (some r B) (some s C))"));
  EXPECT_EQ(random_interpretation(sig, 5, 42), random_interpretation(sig, 5, 42));
}

TEST(RandomInterpretation, DomainSizeOne) {
  Signature sig;
  sig.add(term("(and A (some r B))"));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_EQ(random_interpretation(sig, 1, seed).domain_size(), 1u);
  }
}

TEST(RandomInterpretation, NoRolesMeansNoEdges) {
  Signature sig;
  sig.add(term("(and A B)"));
  EXPECT_TRUE(random_interpretation(sig, 4, 7).roles().empty());
}

TEST(RandomInterpretation, RejectsEmptyDomain) {
  EXPECT_THROW(random_interpretation(Signature{}, 0, 1), Error);
}

TEST(Evaluate, FollowsTheSemanticEquations) {
  Rng rng(8);
  TermShape shape;
  Signature sig;
  for (const auto& n : shape.names) sig.concepts.insert(n);
  for (const auto& r : shape.roles) sig.roles.insert(r);
  for (int k = 0; k < 300; ++k) {
    const Interpretation i = random_interpretation(sig, 5, rng.next());
    const Term c = random_term(rng, shape);
    const Term d = random_term(rng, shape);
    EXPECT_EQ(evaluate(Term::conj({c, d}), i), evaluate(c, i) & evaluate(d, i));
    const RoleName r = rng.pick(shape.roles);
    Extension expected(i.domain_size());
    const Extension inner = evaluate(c, i);
    for (std::size_t x = 0; x < i.domain_size(); ++x) {
      for (std::size_t y = 0; y < i.domain_size(); ++y) {
        if (i.has_edge(r, x, y) && inner.test(y)) expected.set(x);
      }
    }
    EXPECT_EQ(evaluate(Term::exists(r, c), i), expected);
  }
}

TEST(Evaluate, MonotoneUnderSubsumption) {
  Rng rng(12);
  TermShape shape;
  for (int k = 0; k < 500; ++k) {
    const Term c = random_term(rng, shape);
    const Term d = random_generalization(rng, c);
    ASSERT_TRUE(subsumes(c, d));
    Signature sig;
    sig.add(c);
    const Interpretation i = random_interpretation(sig, 4, rng.next());
    EXPECT_TRUE(evaluate(c, i).is_subset_of(evaluate(d, i)));
  }
}

TEST(Evaluate, RefutesSomeNonSubsumptions) {
  // Refutation only goes one way; a failed subsumption is usually visible in
  // some small model.
  Signature sig;
  sig.add(term("(and A B)"));
  bool refuted = false;
  for (std::uint64_t seed = 0; seed < 50 && !refuted; ++seed) {
    const Interpretation i = random_interpretation(sig, 3, seed);
    refuted = !evaluate(term("A"), i).is_subset_of(evaluate(term("B"), i));
  }
  EXPECT_TRUE(refuted);
}
