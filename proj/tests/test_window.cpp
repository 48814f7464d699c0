#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "facto/presheaf.hpp"
#include "facto/setlike.hpp"

using namespace facto;

namespace {

// Independent order oracle: k1 <= k2 iff every k1-covering sieve also
// k2-covers, at every base object.
bool covers_included(const ToposWindow& W, const LTTopology& k1,
                     const LTTopology& k2) {
  for (int b = 0; b < W.base->obj_count(); ++b) {
    auto c1 = covering_sieves(W.Om, k1, b);
    auto c2 = covering_sieves(W.Om, k2, b);
    for (int s : c1)
      if (std::find(c2.begin(), c2.end(), s) == c2.end()) return false;
  }
  return true;
}

Adjunction identity_adjunction(const Functor& id, const FinCategory& C) {
  std::vector<int> comps(C.obj_count());
  for (int x = 0; x < C.obj_count(); ++x) comps[x] = C.identity(x);
  NatTrans u{&id, &id, comps};
  return Adjunction{id, id, u, u};
}

}  // namespace

TEST_CASE("window over the one-object base") {
  FinCategory B = terminal_category();
  WindowOptions opt;
  opt.max_card = 3;
  ToposWindow W = build_window(B, {}, opt);

  CHECK(validate_category(W.cat).ok());
  CHECK_FALSE(W.truncated);
  CHECK(W.cat.obj_count() == 3);  // 0, 1 and the classifier
  CHECK(W.cat.mor_count() == 11);
  REQUIRE(W.terminal_obj >= 0);
  REQUIRE(W.initial_obj >= 0);
  REQUIRE(W.omega_obj >= 0);
  CHECK(W.objects[W.omega_obj].card == std::vector<int>{2});
  CHECK(W.monos().contains(W.true_mor));

  MorphismClass epi = W.epis(), mono = W.monos();
  CHECK(verify_fs(W.cat, epi, mono).ok());

  MeetTable& mt = W.meet;
  auto ks = enumerate_topologies(W.Om, mt);
  REQUIRE(ks.size() == 2);
  for (const LTTopology& k : ks) {
    Dfs d = W.image_closure_dfs(k);
    CHECK(verify_dfs(W.cat, d).ok());
    CHECK(is_cartesian_dfs(W, d).ok());
    CHECK(topology_of_dfs(W, d) == k);
  }
}

TEST_CASE("window over the walking arrow") {
  FinCategory B = walking_arrow();
  Presheaf ya = representable(B, B.find_obj("a"));
  WindowOptions opt;
  opt.max_card = 3;
  ToposWindow W = build_window(B, {ya}, opt);

  CHECK(validate_category(W.cat).ok());
  CHECK_FALSE(W.truncated);
  CHECK(W.cat.obj_count() == 11);
  CHECK(W.cat.mor_count() == 297);
  CHECK(W.obj_of(ya) >= 0);

  SUBCASE("global elements of the classifier count its covering structure") {
    // three subobjects of the terminal presheaf, hence three points of Omega
    CHECK(W.cat.hom(W.terminal_obj, W.omega_obj).size() == 3);
  }

  SUBCASE("componentwise classes sit inside the categorical ones") {
    MorphismClass epi = W.epis(), mono = W.monos();
    MorphismClass cat_epi = epi_class(W.cat), cat_mono = mono_class(W.cat);
    for (int f = 0; f < W.cat.mor_count(); ++f) {
      if (epi.contains(f)) CHECK(cat_epi.contains(f));
      if (mono.contains(f)) CHECK(cat_mono.contains(f));
    }
    CHECK(verify_fs(W.cat, epi, mono).ok());
  }

  SUBCASE("image/closure systems verify and regenerate their topology") {
    auto ks = enumerate_topologies(W.Om, W.meet);
    REQUIRE(ks.size() == 4);
    for (const LTTopology& k : ks) {
      Dfs d = W.image_closure_dfs(k);
      CHECK(verify_dfs(W.cat, d).ok());
      CHECK(is_cartesian_dfs(W, d).ok());
      CHECK(topology_of_dfs(W, d) == k);
    }
  }

  SUBCASE("the epi-iso-mono system generates the discrete topology") {
    Dfs d{W.epis(), iso_class(W.cat), W.monos()};
    CHECK(topology_of_dfs(W, d) == identity_topology(W.Om));
  }

  SUBCASE("a system whose right part is not monic is rejected") {
    Dfs trivial{iso_class(W.cat), iso_class(W.cat), all_morphisms(W.cat)};
    CHECK_THROWS_AS(topology_of_dfs(W, trivial), HypothesisFailed);
  }

  SUBCASE("topology order agrees with covering-sieve inclusion") {
    auto ks = enumerate_topologies(W.Om, W.meet);
    LTTopology id = identity_topology(W.Om), top = top_topology(W.Om);
    int comparable = 0;
    for (const LTTopology& k1 : ks)
      for (const LTTopology& k2 : ks) {
        TopologyComparison c = compare_topologies(W, k1, k2);
        CHECK(c.le == covers_included(W, k1, k2));
        if (c.le) ++comparable;
        if (k1 == id) CHECK(c.le);
        if (k2 == top) CHECK(c.le);
      }
    // 4 reflexive pairs, the discrete below the other 3, the two middle
    // ones below the chaotic, and the two middle topologies incomparable
    CHECK(comparable == 9);
  }
}

TEST_CASE("constant/global-sections adjunction between windows") {
  FinCategory TB = terminal_category();
  Presheaf three;
  three.base = &TB;
  three.card = {3};
  three.res = {{0, 1, 2}};
  three.label = "three";
  WindowOptions opt;
  opt.max_card = 3;
  ToposWindow WS = build_window(TB, {three}, opt);
  CHECK(WS.cat.mor_count() == 60);  // the sets of size up to three

  FinCategory B = walking_arrow();
  Presheaf c3;
  c3.base = &B;
  c3.card = {3, 3};
  c3.res.assign(B.mor_count(), {0, 1, 2});
  c3.label = "const3";
  ToposWindow W =
      build_window(B, {representable(B, B.find_obj("a")), c3}, opt);
  CHECK_FALSE(W.truncated);

  auto adj = constant_sections_adjunction(WS, W);
  CHECK(validate_adjunction(adj->adj).ok());
  // the constant functor lands on the constant objects
  CHECK(adj->left.on_obj(WS.terminal_obj) == W.terminal_obj);
  CHECK(adj->right.on_obj(W.omega_obj) ==
        WS.obj_of(three));  // the classifier has three points

  LTTopology kS = identity_topology(WS.Om);
  auto kW = enumerate_topologies(W.Om, W.meet);
  REQUIRE(kW.size() == 4);

  SUBCASE("discrete topologies transfer") {
    auto r = check_topos_adjunction(WS, W, adj->adj,
                                    WS.image_closure_dfs(kS),
                                    W.image_closure_dfs(kW.front()));
    CHECK(r.ok());
    CHECK(r.geometric);
    CHECK(r.cof_preserved);
    CHECK(r.closure_preserved);
    CHECK(r.closure_continuous);
    CHECK(r.classifier_square);
  }

  SUBCASE("mismatched topologies fail all four conditions together") {
    auto r = check_topos_adjunction(WS, W, adj->adj,
                                    WS.image_closure_dfs(kS),
                                    W.image_closure_dfs(kW.back()));
    CHECK(r.ok());  // the verdicts agree with each other
    CHECK(r.geometric);
    CHECK_FALSE(r.cof_preserved);
    CHECK_FALSE(r.closure_preserved);
    CHECK_FALSE(r.closure_continuous);
    CHECK_FALSE(r.classifier_square);
  }
}

TEST_CASE("adjunction transfer on the identity adjunction") {
  FinCategory B = terminal_category();
  WindowOptions opt;
  opt.max_card = 3;
  ToposWindow W = build_window(B, {}, opt);
  Functor id = identity_functor(W.cat);
  Adjunction adj = identity_adjunction(id, W.cat);
  LTTopology kid = identity_topology(W.Om), ktop = top_topology(W.Om);

  SUBCASE("same topology on both sides: everything transfers") {
    for (const LTTopology& k : {kid, ktop}) {
      Dfs d = W.image_closure_dfs(k);
      ToposAdjunctionReport r = check_topos_adjunction(W, W, adj, d, d);
      CHECK(r.ok());
      CHECK(r.geometric);
      CHECK(r.cof_preserved);
      CHECK(r.closure_preserved);
      CHECK(r.closure_continuous);
      CHECK(r.classifier_square);
    }
  }

  SUBCASE("coarser target topology: all four conditions fail together") {
    Dfs d1 = W.image_closure_dfs(kid);
    Dfs d2 = W.image_closure_dfs(ktop);
    ToposAdjunctionReport r = check_topos_adjunction(W, W, adj, d1, d2);
    CHECK(r.ok());  // the four verdicts agree with each other
    CHECK_FALSE(r.cof_preserved);
    CHECK_FALSE(r.closure_preserved);
    CHECK_FALSE(r.closure_continuous);
    CHECK_FALSE(r.classifier_square);
  }
}
