#include <gtest/gtest.h>

#include "polylet/diagnostic.hpp"
#include "polylet/types.hpp"

using namespace polylet;

TEST(Unify, BindsVariables) {
  TypeVarSupply s;
  Type a = s.fresh();
  unify(ty::list(a), ty::list(ty::int_()));
  EXPECT_TRUE(types_equal(a, ty::int_()));
}

TEST(Unify, Mismatch) {
  EXPECT_THROW(unify(ty::int_(), ty::str()), Error);
  EXPECT_THROW(unify(ty::code(ty::int_()), ty::list(ty::int_())), Error);
}

TEST(Unify, OccursCheck) {
  TypeVarSupply s;
  Type a = s.fresh();
  EXPECT_THROW(unify(a, ty::list(a)), Error);
}

TEST(Instantiate, FreshCopies) {
  TypeVarSupply s;
  Type a = s.fresh();
  TypeScheme id{{resolve(a)->id}, ty::arrow(a, a)};
  Type i1 = instantiate(id, s);
  Type i2 = instantiate(id, s);
  unify(i1, ty::arrow(ty::int_(), ty::int_()));
  unify(i2, ty::arrow(ty::str(), ty::str()));
  EXPECT_TRUE(is_instance(ty::arrow(ty::unit(), ty::unit()), id));
  EXPECT_FALSE(is_instance(ty::arrow(ty::unit(), ty::int_()), id));
}

TEST(Variance, Constructors) {
  TypeVarSupply s;
  Type a = s.fresh();
  const int id = resolve(a)->id;
  EXPECT_EQ(variance_of(id, ty::list(a)), Variance::Covariant);
  EXPECT_EQ(variance_of(id, ty::code(ty::list(a))), Variance::Covariant);
  EXPECT_EQ(variance_of(id, ty::pair(a, ty::int_())), Variance::Covariant);
  EXPECT_EQ(variance_of(id, ty::arrow(a, ty::int_())), Variance::Contravariant);
  EXPECT_EQ(variance_of(id, ty::arrow(a, a)), Variance::Invariant);
  EXPECT_EQ(variance_of(id, ty::code(ty::arrow(a, a))), Variance::Invariant);
  EXPECT_EQ(variance_of(id, ty::ref(ty::list(a))), Variance::Invariant);
  EXPECT_EQ(variance_of(id, ty::scope(a)), Variance::Invariant);
  EXPECT_EQ(variance_of(id, ty::int_()), Variance::Unused);
  EXPECT_EQ(variance_of(id, ty::arrow(ty::arrow(a, ty::int_()), ty::int_())), Variance::Covariant);
}

TEST(Variance, Algebra) {
  EXPECT_EQ(compose(Variance::Contravariant, Variance::Contravariant), Variance::Covariant);
  EXPECT_EQ(compose(Variance::Invariant, Variance::Unused), Variance::Unused);
  EXPECT_EQ(join(Variance::Covariant, Variance::Contravariant), Variance::Invariant);
  EXPECT_EQ(join(Variance::Unused, Variance::Covariant), Variance::Covariant);
}

TEST(Pretty, Schemes) {
  TypeVarSupply s;
  Type a = s.fresh();
  Type b = s.fresh();
  TypeScheme k{{resolve(a)->id, resolve(b)->id}, ty::code(ty::arrow(a, ty::arrow(b, a)))};
  EXPECT_EQ(pretty(k), "('a -> 'b -> 'a) code");
  EXPECT_EQ(pretty(k, "cod"), "('a -> 'b -> 'a) cod");
  EXPECT_EQ(pretty(ty::code(ty::pair(ty::list(ty::int_()), ty::list(ty::str())))),
            "(int list * string list) code");
}
