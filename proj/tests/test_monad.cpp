#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "facto/monad.hpp"

using namespace facto;

namespace {

// The closure operator 0↦1, 1↦1, 2↦2 on the chain 0 < 1 < 2, as a monad.
Monad closure_monad(const FinCategory& C) {
  Monad M;
  M.T.source = &C;
  M.T.target = &C;
  M.T.obj_map = {1, 1, 2};
  M.T.mor_map.assign(C.mor_count(), -1);
  for (int f = 0; f < C.mor_count(); ++f) {
    int a = M.T.obj_map[C.dom(f)], b = M.T.obj_map[C.cod(f)];
    M.T.mor_map[f] = C.hom(a, b).at(0);  // posets: at most one choice
  }
  M.unit = {C.find_mor("le_0_1"), C.identity(1), C.identity(2)};
  M.mult = {C.identity(1), C.identity(1), C.identity(2)};
  return M;
}

}  // namespace

TEST_CASE("monad validation") {
  SUBCASE("identity monad") {
    FinCategory C = chain_poset(3);
    CHECK(validate_monad(identity_monad(C)).ok());
    CHECK(validate_comonad(identity_comonad(C)).ok());
  }
  SUBCASE("closure monad on the chain") {
    FinCategory C = chain_poset(3);
    Monad M = closure_monad(C);
    CHECK(validate_monad(M).ok());
    Monad bad = M;
    bad.unit[0] = C.identity(0);  // wrong endpoints
    CHECK_FALSE(validate_monad(bad).ok());
  }
  SUBCASE("bounded group-action monad") {
    auto inst = group_action_instance(cyclic_group(2), 2);
    CHECK(inst.skeleton_bound == 4);
    CHECK(validate_monad(inst.monad).ok());
  }
}

TEST_CASE("algebra enumeration") {
  SUBCASE("identity monad has one algebra per object") {
    FinCategory C = chain_poset(3);
    auto algs = enumerate_algebras(identity_monad(C));
    REQUIRE(algs.size() == 3);
    for (int a = 0; a < 3; ++a) {
      CHECK(algs[a].carrier == a);
      CHECK(algs[a].structure == C.identity(a));
    }
  }
  SUBCASE("closure monad algebras are the fixed points") {
    FinCategory C = chain_poset(3);
    auto algs = enumerate_algebras(closure_monad(C));
    REQUIRE(algs.size() == 2);
    CHECK(algs[0].carrier == 1);
    CHECK(algs[1].carrier == 2);
  }
  SUBCASE("Z/2 actions on carriers up to 2") {
    auto inst = group_action_instance(cyclic_group(2), 2);
    const auto& algs = inst.em->algebras;
    REQUIRE(algs.size() == 4);  // empty, singleton, trivial and swap on 2
    CHECK(algs[0].carrier == 0);
    CHECK(algs[1].carrier == 1);
    CHECK(algs[2].carrier == 2);
    CHECK(algs[3].carrier == 2);
    // the two actions on the 2-element set: trivial and swap
    const SetSkeleton& S = *inst.sets;
    CHECK(algs[2].structure == S.mor_of(4, 2, {0, 1, 0, 1}));
    CHECK(algs[3].structure == S.mor_of(4, 2, {0, 1, 1, 0}));
  }
}

TEST_CASE("algebra category") {
  SUBCASE("identity monad reproduces the base") {
    FinCategory C = chain_poset(3);
    auto em = em_category(identity_monad(C));
    CHECK(em->category.obj_count() == C.obj_count());
    CHECK(em->category.mor_count() == C.mor_count());
    CHECK(validate_category(em->category).ok());
    CHECK(validate_functor(em->forgetful()).ok());
    CHECK(validate_functor(em->free()).ok());
  }
  SUBCASE("category of Z/2-sets") {
    auto inst = group_action_instance(cyclic_group(2), 2);
    const FinCategory& D = inst.em->category;
    CHECK(D.obj_count() == 4);
    CHECK(D.mor_count() == 17);  // equivariant maps, counted by hand
    CHECK(validate_category(D).ok());
    // the swap action admits no map into the trivial one except constants
    int w = inst.em->find_algebra(2, inst.sets->mor_of(4, 2, {0, 1, 1, 0}));
    int t = inst.em->find_algebra(2, inst.sets->mor_of(4, 2, {0, 1, 0, 1}));
    REQUIRE(w >= 0);
    REQUIRE(t >= 0);
    CHECK(D.hom(w, t).size() == 2);
    CHECK(D.hom(t, w).size() == 0);
    CHECK(D.hom(w, w).size() == 2);  // id and swap are equivariant
    // free algebra on the 1-element set is Z/2 acting on itself
    int free1 = inst.em->free_obj[1];
    REQUIRE(free1 >= 0);
    CHECK(inst.em->algebras[free1].carrier == 2);
    CHECK(free1 == w);  // translation action = the swap
  }
  SUBCASE("free ⊣ forgetful") {
    auto inst = group_action_instance(cyclic_group(2), 2);
    AdjunctionBundle adj = free_forgetful_adjunction(*inst.em);
    CHECK(validate_adjunction(adj.adj).ok());
  }
}

TEST_CASE("induced classes and the factorization lift") {
  auto inst = group_action_instance(cyclic_group(2), 2);
  const FinCategory& C = inst.sets->cat();
  const FinCategory& D = inst.em->category;
  MorphismClass epi = epi_class(C), mono = mono_class(C);

  Dfs base{epi, iso_class(C), mono};
  Dfs ind = induced_classes(*inst.em, base);
  // equivariant surjections/bijections/injections
  for (int f = 0; f < D.mor_count(); ++f) {
    int bf = inst.em->mor_base[f];
    CHECK(ind.E.contains(f) == epi.contains(bf));
    CHECK(ind.M.contains(f) == mono.contains(bf));
  }

  // image factorization of the constant equivariant map swap -> trivial
  int w = inst.em->find_algebra(2, inst.sets->mor_of(4, 2, {0, 1, 1, 0}));
  int t = inst.em->find_algebra(2, inst.sets->mor_of(4, 2, {0, 1, 0, 1}));
  int f_em = inst.em->find_mor(w, t, inst.sets->mor_of(2, 2, {0, 0}));
  REQUIRE(f_em >= 0);
  auto lift = lift_factorization(*inst.em, f_em, epi, mono);
  CHECK(lift.e == inst.sets->mor_of(2, 1, {0, 0}));
  CHECK(lift.m == inst.sets->mor_of(1, 2, {0}));
  CHECK(lift.k == inst.sets->mor_of(2, 1, {0, 0}));  // unique Z/2-action on 1

  // identity monad: the lift is just the base factorization
  FinCategory P = chain_poset(2);
  auto em_id = em_category(identity_monad(P));
  MorphismClass isoP = iso_class(P), morP = all_morphisms(P);
  int le = P.find_mor("le_0_1");
  auto lift_id = lift_factorization(*em_id, le, isoP, morP);
  CHECK(lift_id.e == P.identity(0));
  CHECK(lift_id.m == le);
  CHECK(lift_id.k == P.identity(0));
}

TEST_CASE("right-induced dfs on algebras") {
  SUBCASE("identity monad") {
    FinCategory C = chain_poset(3);
    auto em = em_category(identity_monad(C));
    Dfs dfs{iso_class(C), iso_class(C), all_morphisms(C)};
    CHECK(check_right_induced_dfs(*em, dfs).ok());
  }
  SUBCASE("Z/2-sets with the image dfs") {
    auto inst = group_action_instance(cyclic_group(2), 2);
    const FinCategory& C = inst.sets->cat();
    Dfs dfs{epi_class(C), iso_class(C), mono_class(C)};
    CHECK(check_right_induced_dfs(*inst.em, dfs).ok());
  }
  SUBCASE("monad not preserving the middle class") {
    auto inst = group_action_instance(cyclic_group(2), 2);
    const FinCategory& C = inst.sets->cat();
    MorphismClass j = iso_class(C);
    j.insert(inst.sets->mor_of(1, 2, {0}));  // T sends this outside j
    Dfs dfs{epi_class(C), j, mono_class(C)};
    CHECK_THROWS_AS(check_right_induced_dfs(*inst.em, dfs), HypothesisFailed);
  }
}

TEST_CASE("left-induced dfs on coalgebras") {
  SUBCASE("identity comonad on a poset") {
    FinCategory C = chain_poset(3);
    auto co = coem_category(identity_comonad(C));
    CHECK(co->category.obj_count() == C.obj_count());
    CHECK(co->category.mor_count() == C.mor_count());
    Dfs dfs{iso_class(C), iso_class(C), all_morphisms(C)};
    CHECK(check_left_induced_dfs(*co, dfs).ok());
  }
  SUBCASE("identity comonad on small sets") {
    SetSkeleton S(2);
    const FinCategory& C = S.cat();
    auto co = coem_category(identity_comonad(C));
    Dfs dfs{epi_class(C), iso_class(C), mono_class(C)};
    CHECK(check_left_induced_dfs(*co, dfs).ok());
  }
}

TEST_CASE("lifted Quillen adjunction") {
  FinCategory C = chain_poset(2);
  auto emC = em_category(identity_monad(C));
  auto emD = em_category(identity_monad(C));
  Dfs dfs{iso_class(C), iso_class(C), all_morphisms(C)};

  Functor idC = identity_functor(C);
  NatTrans unit{&idC, &idC, {C.identity(0), C.identity(1)}};
  Adjunction base{idC, idC, unit, unit};

  const FinCategory& E = emC->category;
  Functor idE = identity_functor(E);
  NatTrans unitE{&idE, &idE, {E.identity(0), E.identity(1)}};
  Adjunction lifted{idE, idE, unitE, unitE};

  CHECK(check_lifted_quillen(*emC, *emD, base, lifted, dfs, dfs).ok());

  SUBCASE("broken commutation is rejected") {
    Functor notid = idE;
    std::swap(notid.obj_map[0], notid.obj_map[1]);
    Adjunction broken{notid, notid, unitE, unitE};
    CHECK_FALSE(check_lifted_quillen(*emC, *emD, base, broken, dfs, dfs).ok());
  }
}
