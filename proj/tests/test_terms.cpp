#include <gtest/gtest.h>

#include <thread>

#include "elunif/elunif.hpp"
#include "support/generators.hpp"
#include "support/parse.hpp"

using namespace elunif;
using namespace elunif::testing;

namespace {

const RoleName r = RoleName::of("r");
const RoleName s = RoleName::of("s");
const Term A = Term::name(con("A"));
const Term B = Term::name(con("B"));

}  // namespace

TEST(AcNormalize, SortsAndDropsTop) {
  RawTerm raw = RawTerm::conj({RawTerm::conj({RawTerm::named(con("B")), RawTerm::named(con("A"))}), RawTerm::top()});
  const Term t = ac_normalize(raw);
  ASSERT_TRUE(t.is_conj());
  ASSERT_EQ(t.conjuncts().size(), 2u);
  EXPECT_EQ(t.conjuncts()[0], A);
  EXPECT_EQ(t.conjuncts()[1], B);
}

TEST(AcNormalize, KeepsDuplicates) {
  const Term t = Term::conj({A, A});
  ASSERT_TRUE(t.is_conj());
  EXPECT_EQ(t.conjuncts().size(), 2u);
  EXPECT_NE(t, A);
}

TEST(AcNormalize, NormalizesUnderExists) {
  const Term t = ac_normalize(RawTerm::exists(r, RawTerm::conj({RawTerm::named(con("B")), RawTerm::named(con("A"))})));
  EXPECT_EQ(t, Term::exists(r, Term::conj({A, B})));
}

TEST(AcNormalize, EmptyConjunctionIsTop) {
  EXPECT_TRUE(Term::conj({}).is_top());
  EXPECT_TRUE(Term::conj({Term::top(), Term::top()}).is_top());
  EXPECT_EQ(Term::conj({A, Term::top()}), A);
}

TEST(AcNormalize, FlattensNestedConjunctions) {
  const Term t = Term::conj({Term::conj({A, B}), Term::conj({B, Term::exists(r, A)})});
  ASSERT_TRUE(t.is_conj());
  EXPECT_EQ(t.conjuncts().size(), 4u);
  for (const auto& c : t.conjuncts()) {
    EXPECT_FALSE(c.is_conj());
  }
}

TEST(AcEqual, Examples) {
  EXPECT_TRUE(ac_equal(term("(some r (and A B))"), term("(some r (and B A))")));
  EXPECT_FALSE(ac_equal(Term::conj({A, A}), A));
  EXPECT_TRUE(ac_equal(Term::top(), Term::top()));
}

TEST(Atoms, Examples) {
  EXPECT_TRUE(atoms(Term::top()).empty());
  const Term e = term("(some r (and A B))");
  EXPECT_EQ(atoms(e), (std::set<Term>{e, A, B}));
  const Term rt = Term::exists(r, Term::top());
  EXPECT_EQ(atoms(Term::conj({A, rt})), (std::set<Term>{A, rt}));
}

TEST(TopLevelAtoms, Examples) {
  EXPECT_EQ(top_level_atoms(term("(and A (some r B))")), (std::vector<Term>{A, term("(some r B)")}));
  EXPECT_TRUE(top_level_atoms(Term::top()).empty());
  const Term e = term("(some r (and A B))");
  EXPECT_EQ(top_level_atoms(e), std::vector<Term>{e});
}

TEST(RoleDepth, Examples) {
  EXPECT_EQ(role_depth(A), 0u);
  EXPECT_EQ(role_depth(term("(some r (some s A))")), 2u);
  EXPECT_EQ(role_depth(term("(and A (some r (and B (some r top))))")), 2u);
}

TEST(Flat, Examples) {
  EXPECT_TRUE(is_flat_atom(term("(some r X)", {"X"})));
  EXPECT_TRUE(is_flat_atom(term("(some r top)")));
  EXPECT_FALSE(is_flat_atom(term("(some r (and A B))")));
  EXPECT_TRUE(is_flat_term(Term::top()));
  EXPECT_TRUE(is_flat_term(term("(and A (some r B))")));
  EXPECT_FALSE(is_flat_term(term("(some r (some s A))")));
}

TEST(TermOrder, KindsComeInFixedOrder) {
  const Term top = Term::top();
  const Term name = A;
  const Term ex = Term::exists(r, top);
  const Term cj = Term::conj({A, B});
  EXPECT_LT(top, name);
  EXPECT_LT(name, ex);
  EXPECT_LT(ex, cj);
}

TEST(TermOrder, ConstantsAndVariablesAreDistinct) {
  const Term c = Term::name(con("Q"));
  const Term v = Term::name(var("Q"));
  EXPECT_NE(c, v);
  EXPECT_TRUE(v.is_variable());
  EXPECT_TRUE(c.is_constant());
}

TEST(ReplaceNames, RenormalizesResult) {
  const Term t = term("(and X (some r X))", {"X"});
  const Term u = replace_names(t, [](ConceptName n) { return n.is_variable() ? Term::top() : Term::name(n); });
  EXPECT_EQ(u, Term::exists(r, Term::top()));
}

TEST(Names, CollectsVariablesAndRoles) {
  const Term t = term("(and X A (some s (some r Y)))", {"X", "Y"});
  EXPECT_EQ(variables_of(t), (std::set<ConceptName>{var("X"), var("Y")}));
  EXPECT_EQ(role_names(t), (std::set<RoleName>{r, s}));
  EXPECT_FALSE(is_ground(t));
  EXPECT_TRUE(is_ground(A));
  EXPECT_TRUE(contains_name(t, var("Y")));
}

TEST(Printing, UsesSurfaceSyntax) {
  EXPECT_EQ(to_string(term("(and B (some r top) A)")), "(and A B (some r top))");
  EXPECT_EQ(to_string(Term::top()), "top");
}

// Properties over random terms.

class TermProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(TermProperties, Hold) {
  Rng rng(GetParam());
  TermShape shape;
  shape.names.push_back(var("X"));
  for (int i = 0; i < 300; ++i) {
    const Term t = random_term(rng, shape);
    const Term u = random_term(rng, shape);
    EXPECT_EQ(ac_normalize(t), t);
    EXPECT_EQ(ac_normalize(ac_normalize(t)), ac_normalize(t));
    EXPECT_EQ(role_depth(ac_normalize(t)), role_depth(t));
    const auto all = atoms(t);
    for (const auto& a : all) {
      EXPECT_FALSE(a.is_top());
      EXPECT_FALSE(a.is_conj());
    }
    for (const auto& a : top_level_atoms(t)) {
      EXPECT_TRUE(all.count(a));
    }
    if (ac_equal(t, u)) {
      EXPECT_TRUE(equivalent(t, u));
    }
    // Commuted construction gives the same term.
    EXPECT_EQ(Term::conj({t, u}), Term::conj({u, t}));
    EXPECT_EQ((t <=> u) == 0, t == u);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, TermProperties, ::testing::Values(1, 2, 3));

TEST(Interning, ConcurrentInternsAgree) {
  std::vector<std::thread> threads;
  std::vector<std::uint32_t> ids(8);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    threads.emplace_back([&ids, i] {
      for (int k = 0; k < 200; ++k) RoleName::of("role_" + std::to_string(k));
      ids[i] = ConceptName::constant("SharedName").id;
    });
  }
  for (auto& t : threads) t.join();
  for (auto id : ids) {
    EXPECT_EQ(id, ids[0]);
  }
  EXPECT_EQ(RoleName::of("role_7").text(), "role_7");
}
