#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "facto/fincat.hpp"
#include "facto/setlike.hpp"

using namespace facto;

TEST_CASE("chain poset basics") {
  FinCategory C = chain_poset(3);
  CHECK(C.obj_count() == 3);
  CHECK(C.mor_count() == 6);  // 3 identities + le_0_1, le_0_2, le_1_2
  CHECK(validate_category(C).ok());

  int f01 = C.find_mor("le_0_1");
  int f12 = C.find_mor("le_1_2");
  int f02 = C.find_mor("le_0_2");
  CHECK(C.compose(f12, f01) == f02);
  CHECK(C.compose(f12, f02) == -1);  // not composable

  // In a poset every morphism is mono and epi; only identities are iso.
  for (int f = 0; f < C.mor_count(); ++f) {
    CHECK(is_mono(C, f));
    CHECK(is_epi(C, f));
    CHECK(is_iso(C, f) == C.is_identity(f));
  }
  CHECK(terminal_object(C) == 2);
  CHECK(initial_object(C) == 0);
}

TEST_CASE("validate_category flags broken structures") {
  SUBCASE("missing composite") {
    FinCategory C;
    int a = C.add_object("a"), b = C.add_object("b"), c = C.add_object("c");
    int f = C.add_morphism(a, b, "f");
    C.add_morphism(b, c, "g");
    // g∘f never set
    C.finalize();
    CHECK_FALSE(validate_category(C).ok());
    (void)f;
  }
  SUBCASE("broken identity law") {
    FinCategory C;
    int x = C.add_object("x");
    int s = C.add_morphism(x, x, "s");
    C.set_compose(s, s, s);
    C.set_compose(C.identity(x), s, C.identity(x));  // id∘s rebound wrongly
    C.set_compose(s, C.identity(x), s);
    C.finalize();
    CHECK_FALSE(validate_category(C).ok());
  }
}

TEST_CASE("skeletal finite sets") {
  SetSkeleton S(3);
  const FinCategory& C = S.cat();
  CHECK(C.obj_count() == 4);   // sizes 0..3
  CHECK(C.mor_count() == 60);  // sum of c^d
  CHECK(validate_category(C).ok());

  CHECK(C.hom(2, 3).size() == 9);
  CHECK(C.hom(3, 0).size() == 0);
  CHECK(C.hom(0, 0).size() == 1);

  // mono = injective, epi = surjective
  int inj = S.mor_of(2, 3, {0, 2});
  int noninj = S.mor_of(2, 3, {1, 1});
  int surj = S.mor_of(3, 2, {0, 1, 1});
  CHECK(is_mono(C, inj));
  CHECK_FALSE(is_mono(C, noninj));
  CHECK(is_epi(C, surj));
  CHECK_FALSE(is_epi(C, inj));
  CHECK(is_iso(C, S.mor_of(2, 2, {1, 0})));

  // composition matches table composition
  int swap2 = S.mor_of(2, 2, {1, 0});
  CHECK(C.compose(swap2, inj) == -1);  // not composable
  CHECK(C.compose(surj, inj) == S.mor_of(2, 2, {0, 1}));

  CHECK(terminal_object(C) == 1);
  CHECK(initial_object(C) == 0);
}

TEST_CASE("opposite preserves ids and is involutive") {
  SetSkeleton S(2);
  const FinCategory& C = S.cat();
  FinCategory op = opposite(C);
  CHECK(validate_category(op).ok());
  for (int f = 0; f < C.mor_count(); ++f) {
    CHECK(op.dom(f) == C.cod(f));
    CHECK(op.cod(f) == C.dom(f));
  }
  FinCategory opop = opposite(op);
  for (int f = 0; f < C.mor_count(); ++f)
    for (int g = 0; g < C.mor_count(); ++g)
      CHECK(opop.compose(g, f) == C.compose(g, f));
  // monos and epis trade places
  for (int f = 0; f < C.mor_count(); ++f) {
    CHECK(is_mono(C, f) == is_epi(op, f));
    CHECK(is_iso(C, f) == is_iso(op, f));
  }
}

TEST_CASE("functor validation") {
  FinCategory two = chain_poset(2), three = chain_poset(3);
  Functor F{&two, &three, {0, 1}, {}};
  F.mor_map.assign(two.mor_count(), -1);
  F.mor_map[two.identity(0)] = three.identity(0);
  F.mor_map[two.identity(1)] = three.identity(1);
  F.mor_map[two.find_mor("le_0_1")] = three.find_mor("le_0_1");
  CHECK(validate_functor(F).ok());

  SUBCASE("wrong composite is flagged") {
    Functor bad = F;
    bad.obj_map = {0, 2};
    bad.mor_map[two.find_mor("le_0_1")] = three.find_mor("le_1_2");
    // le_1_2 has domain 1, not F(0)=0
    CHECK_FALSE(validate_functor(bad).ok());
  }
  SUBCASE("partial functor checked on defined part only") {
    Functor part = F;
    part.partial = true;
    part.obj_map[1] = -1;
    part.mor_map[two.identity(1)] = -1;
    part.mor_map[two.find_mor("le_0_1")] = -1;
    CHECK(validate_functor(part).ok());
  }
}

TEST_CASE("natural transformation validation") {
  FinCategory A = walking_arrow();
  SetSkeleton S(2);
  const FinCategory& C = S.cat();
  // F, G : walking arrow -> FinSet, F constant at 1, G picks the arrow 1 -> 2.
  Functor F{&A, &C, {1, 1}, {}};
  F.mor_map.assign(A.mor_count(), C.identity(1));
  Functor G{&A, &C, {1, 2}, {}};
  G.mor_map.assign(A.mor_count(), -1);
  G.mor_map[A.identity(0)] = C.identity(1);
  G.mor_map[A.identity(1)] = C.identity(2);
  G.mor_map[A.find_mor("f")] = S.mor_of(1, 2, {0});
  REQUIRE(validate_functor(F).ok());
  REQUIRE(validate_functor(G).ok());

  NatTrans t{&F, &G, {C.identity(1), S.mor_of(1, 2, {0})}};
  CHECK(validate_nattrans(t).ok());
  NatTrans bad{&F, &G, {C.identity(1), S.mor_of(1, 2, {1})}};
  CHECK_FALSE(validate_nattrans(bad).ok());
}

TEST_CASE("adjunction validation") {
  // Inclusion of the bottom point into 0 < 1 with right adjoint constant 0.
  FinCategory pt = terminal_category(), two = chain_poset(2);
  Functor inc{&pt, &two, {0}, {two.identity(0)}};
  Functor con{&two, &pt, {0, 0}, {}};
  con.mor_map.assign(two.mor_count(), pt.identity(0));
  Functor gi = compose_functors(con, inc);
  Functor idp = identity_functor(pt);
  Functor ig = compose_functors(inc, con);
  Functor idt = identity_functor(two);
  NatTrans unit{&idp, &gi, {pt.identity(0)}};
  NatTrans counit{&ig, &idt, {two.identity(0), two.find_mor("le_0_1")}};
  Adjunction adj{inc, con, unit, counit};
  CHECK(validate_adjunction(adj).ok());
}

TEST_CASE("limits and colimits in finite sets") {
  SetSkeleton S(4);
  const FinCategory& C = S.cat();

  SUBCASE("binary product") {
    auto p = compute_product(C, 2, 2);
    REQUIRE(p.has_value());
    CHECK(p->apex == 4);
    // projections are jointly monic surjections 4 -> 2
    CHECK(is_epi(C, p->to_left));
    CHECK(is_epi(C, p->to_right));
  }
  SUBCASE("pullback") {
    int f = S.mor_of(2, 1, {0, 0});
    auto pb = compute_pullback(C, f, f);
    REQUIRE(pb.has_value());
    CHECK(pb->apex == 4);  // 2 x 2 over the point
  }
  SUBCASE("equalizer and coequalizer") {
    int id2 = C.identity(2);
    int swap2 = S.mor_of(2, 2, {1, 0});
    auto eq = compute_equalizer(C, id2, swap2);
    REQUIRE(eq.has_value());
    CHECK(C.dom(*eq) == 0);  // nothing is fixed by the swap
    auto coeq = compute_coequalizer(C, id2, swap2);
    REQUIRE(coeq.has_value());
    CHECK(C.cod(*coeq) == 1);
  }
  SUBCASE("coproduct via colimit of a discrete diagram") {
    FinCategory disc;
    disc.add_object("u");
    disc.add_object("v");
    disc.finalize();
    Functor D{&disc, &C, {1, 2}, {C.identity(1), C.identity(2)}};
    Diagram dia{&disc, D};
    auto co = compute_colimit(C, dia);
    REQUIRE(co.has_value());
    CHECK(co->apex == 3);
    CHECK(is_mono(C, co->legs[0]));
    CHECK(is_mono(C, co->legs[1]));
  }
  SUBCASE("limit over the walking arrow is the domain") {
    FinCategory A = walking_arrow();
    Functor D{&A, &C, {3, 2}, {}};
    D.mor_map.assign(A.mor_count(), -1);
    D.mor_map[A.identity(0)] = C.identity(3);
    D.mor_map[A.identity(1)] = C.identity(2);
    D.mor_map[A.find_mor("f")] = S.mor_of(3, 2, {0, 1, 0});
    Diagram dia{&A, D};
    auto lim = compute_limit(C, dia);
    REQUIRE(lim.has_value());
    CHECK(lim->apex == 3);
    CHECK(is_iso(C, lim->legs[0]));
  }
}

TEST_CASE("groups from multiplication tables") {
  GroupTable z3 = cyclic_group(3);
  CHECK(z3.validate().ok());
  CHECK(z3.unit() == 0);
  GroupTable bad = z3;
  bad.mult[1][1] = 1;  // 1*1 = 1 breaks cancellation
  CHECK_FALSE(bad.validate().ok());
}
