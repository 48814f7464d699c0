#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "facto/coalgebra.hpp"
#include "facto/setlike.hpp"

using namespace facto;

TEST_CASE("identity comonad reproduces the base window") {
  FinCategory B = terminal_category();
  WindowOptions opt;
  opt.max_card = 3;
  ToposWindow W = build_window(B, {}, opt);

  // the product comonad with terminal factor is the identity on the nose
  WindowComonad Cm = product_comonad(W, W.terminal_obj);
  CHECK(Cm.cm.G.on_obj(W.omega_obj) == W.omega_obj);
  CHECK(check_cartesian_comonad(Cm).ok());

  CoalgebraTopos T = build_coalgebra_topos(Cm);
  CHECK(T.report.ok());
  CHECK(T.co->category.obj_count() == W.cat.obj_count());
  CHECK(T.co->category.mor_count() == W.cat.mor_count());
  CHECK(T.m_carrier == W.omega_obj);  // equalizer is all of the classifier
  CHECK(T.slice.obj_count() == W.cat.obj_count());
  CHECK(T.slice.mor_count() == W.cat.mor_count());

  for (const LTTopology& k : enumerate_topologies(W.Om, W.meet)) {
    ExtensionResult R = extend_lt(Cm, T, k);
    CHECK(R.report.ok());
    CHECK(R.ktilde_comp == k.k);  // carrier is the classifier itself
    Dfs d = W.image_closure_dfs(k);
    CHECK(check_induced_topology_extension(Cm, T, d).ok());
  }
}

TEST_CASE("identity comonad over the walking-arrow window") {
  FinCategory B = walking_arrow();
  WindowOptions opt;
  opt.max_card = 3;
  ToposWindow W = build_window(B, {representable(B, B.find_obj("a"))}, opt);
  WindowComonad Cm = product_comonad(W, W.terminal_obj);
  CoalgebraTopos T = build_coalgebra_topos(Cm);
  CHECK(T.report.ok());
  CHECK(T.co->category.mor_count() == W.cat.mor_count());

  auto ks = enumerate_topologies(W.Om, W.meet);
  REQUIRE(ks.size() == 4);
  for (const LTTopology& k : ks) {
    ExtensionResult R = extend_lt(Cm, T, k);
    CHECK(R.report.ok());
    CHECK(R.ktilde_comp == k.k);
    CHECK(check_induced_topology_extension(Cm, T, W.image_closure_dfs(k))
              .ok());
  }
}

TEST_CASE("slice over a representable factor") {
  FinCategory B = walking_arrow();
  Presheaf ya = representable(B, B.find_obj("a"));
  WindowOptions opt;
  opt.max_card = 3;
  ToposWindow W = build_window(B, {ya}, opt);
  WindowComonad Cm = product_comonad(W, W.obj_of(ya));
  CHECK(check_cartesian_comonad(Cm).ok());

  CoalgebraTopos T = build_coalgebra_topos(Cm);
  CHECK(T.report.ok());  // slice equivalence sweep included
  // the slice over this representable is a copy of the one-object-base
  // window: three objects, eleven maps
  CHECK(T.co->category.obj_count() == 3);
  CHECK(T.co->category.mor_count() == 11);
  CHECK(T.slice.obj_count() == 3);
  CHECK(T.slice.mor_count() == 11);

  auto ks = enumerate_topologies(W.Om, W.meet);
  REQUIRE(ks.size() == 4);
  std::set<int> extensions;
  for (const LTTopology& k : ks) {
    ExtensionResult R = extend_lt(Cm, T, k);
    CHECK(R.report.ok());
    extensions.insert(R.ktilde);
    if (k == identity_topology(W.Om))
      CHECK(R.ktilde == T.co->category.identity(T.omega_obj));
    if (k == top_topology(W.Om))
      CHECK(R.ktilde != T.co->category.identity(T.omega_obj));
    CHECK(check_induced_topology_extension(Cm, T, W.image_closure_dfs(k))
              .ok());
  }
  // the slice topos only has two topologies: the four extensions collapse
  CHECK(extensions.size() == 2);
}

TEST_CASE("hypothesis gates") {
  FinCategory B = terminal_category();
  WindowOptions opt;
  opt.max_card = 3;
  ToposWindow W = build_window(B, {}, opt);

  SUBCASE("broken comonad data is rejected") {
    WindowComonad Cm = product_comonad(W, W.terminal_obj);
    Comonad bad = Cm.cm;
    bad.counit[W.omega_obj] =
        W.mor_of(W.omega_obj, W.omega_obj, top_topology(W.Om).k);
    WindowComonad raw = window_comonad(W, bad);
    CHECK_FALSE(check_cartesian_comonad(raw).ok());
    CHECK_THROWS_AS(build_coalgebra_topos(raw), NotCartesian);
  }

  SUBCASE("non-cartesian factorization system is rejected") {
    WindowComonad Cm = product_comonad(W, W.terminal_obj);
    CoalgebraTopos T = build_coalgebra_topos(Cm);
    Dfs trivial{iso_class(W.cat), iso_class(W.cat), all_morphisms(W.cat)};
    CHECK_THROWS_AS(check_induced_topology_extension(Cm, T, trivial),
                    HypothesisFailed);
  }
}
