#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "facto/presheaf.hpp"
#include "facto/setlike.hpp"

using namespace facto;

namespace {

// Every natural transformation P -> Q, found by brute force over all
// component tables. Independent of the engine's backtracking enumerator.
std::vector<std::vector<std::vector<int>>> brute_nattrans(const Presheaf& P,
                                                          const Presheaf& Q) {
  const FinCategory& B = *P.base;
  std::vector<int> pos_obj, pos_elt, radix;
  for (int b = 0; b < B.obj_count(); ++b)
    for (int x = 0; x < P.card[b]; ++x) {
      pos_obj.push_back(b);
      pos_elt.push_back(x);
      radix.push_back(Q.card[b]);
    }
  for (int r : radix)
    if (r == 0) return {};  // no map can hit an empty component
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<int> digits(radix.size(), 0);
  while (true) {
    std::vector<std::vector<int>> comp(B.obj_count());
    for (int b = 0; b < B.obj_count(); ++b) comp[b].assign(P.card[b], -1);
    for (size_t i = 0; i < digits.size(); ++i)
      comp[pos_obj[i]][pos_elt[i]] = digits[i];
    bool natural = true;
    for (int f = 0; f < B.mor_count() && natural; ++f) {
      int x = B.dom(f), y = B.cod(f);
      for (int v = 0; v < P.card[y]; ++v)
        if (comp[x][P.res[f][v]] != Q.res[f][comp[y][v]]) {
          natural = false;
          break;
        }
    }
    if (natural) out.push_back(comp);
    size_t i = 0;
    for (; i < digits.size(); ++i) {
      if (++digits[i] < radix[i]) break;
      digits[i] = 0;
    }
    if (i == digits.size()) break;
  }
  return out;
}

PshMor mor_to_terminal(const Presheaf& P, const Presheaf& one) {
  PshMor t{&P, &one, {}};
  t.comp.resize(P.card.size());
  for (size_t b = 0; b < P.card.size(); ++b) t.comp[b].assign(P.card[b], 0);
  return t;
}

}  // namespace

TEST_CASE("sieves and the subobject classifier") {
  SUBCASE("one-object base") {
    FinCategory B = terminal_category();
    OmegaPresheaf Om = omega(B);
    REQUIRE(Om.psh.card == std::vector<int>{2});  // empty and maximal sieve
    CHECK(validate_presheaf(Om.psh).ok());
    CHECK(Om.top(0) != Om.bot(0));
  }
  SUBCASE("walking arrow") {
    FinCategory B = walking_arrow();
    int a = B.find_obj("a"), b = B.find_obj("b");
    int f = B.find_mor("f");
    OmegaPresheaf Om = omega(B);
    REQUIRE(Om.psh.card[a] == 2);
    REQUIRE(Om.psh.card[b] == 3);
    CHECK(validate_presheaf(Om.psh).ok());

    // the sieve {f} on b: pulling back along f lands in the maximal sieve
    Sieve s = empty_sieve(B);
    s[f] = 1;
    REQUIRE(is_sieve(B, b, s));
    CHECK(sieve_member(s, f));
    CHECK(sieve_pullback(B, f, s) == max_sieve(B, a));
    CHECK(Om.index_of(b, s) >= 0);

    // the identity on b is not in {f}, so {f} is not maximal
    CHECK_FALSE(sieve_member(s, B.identity(b)));
    CHECK(Om.index_of(b, s) != Om.top(b));

    Presheaf one = terminal_presheaf(B);
    PshMor tr = true_arrow(one, Om);
    CHECK(validate_pshmor(tr).ok());
    CHECK(psh_mono(tr));
  }
}

TEST_CASE("characteristic maps classify subobjects") {
  FinCategory B = walking_arrow();
  OmegaPresheaf Om = omega(B);
  Presheaf one = terminal_presheaf(B);

  SUBCASE("subobject counts") {
    CHECK(all_subobjects(one).size() == 3);
    CHECK(all_subobjects(Om.psh).size() == 15);
    Presheaf ya = representable(B, B.find_obj("a"));
    CHECK(all_subobjects(ya).size() == 2);
  }

  SUBCASE("roundtrip over every subobject of the classifier") {
    for (const Subobject& S : all_subobjects(Om.psh)) {
      CHECK(validate_subobject(S).ok());
      auto chi = char_components(Om, S);
      PshMor m{&Om.psh, &Om.psh, chi};
      CHECK(validate_pshmor(m).ok());
      CHECK(subobject_of_char(Om, Om.psh, chi) == S);
    }
  }

  SUBCASE("characteristic map of the full subobject is constant true") {
    auto chi = char_components(Om, full_subobject(Om.psh));
    for (int b = 0; b < B.obj_count(); ++b)
      for (int x : chi[b]) CHECK(x == Om.top(b));
  }

  SUBCASE("characteristic map of the empty subobject is constant false") {
    auto chi = char_components(Om, empty_subobject(one));
    for (int b = 0; b < B.obj_count(); ++b)
      for (int x : chi[b]) CHECK(x == Om.bot(b));
  }

  SUBCASE("characteristic map of the true point is the identity") {
    PshMor tr = true_arrow(one, Om);
    auto chi = char_components(Om, subobject_from_mono(tr));
    for (int b = 0; b < B.obj_count(); ++b)
      for (int x = 0; x < Om.psh.card[b]; ++x) CHECK(chi[b][x] == x);
  }
}

TEST_CASE("internal meet is sieve intersection") {
  FinCategory B = walking_arrow();
  OmegaPresheaf Om = omega(B);
  MeetTable mt = internal_meet(Om);  // cross-checked at construction
  for (int b = 0; b < B.obj_count(); ++b) {
    int n = Om.psh.card[b];
    for (int u = 0; u < n; ++u) {
      CHECK(mt.wedge[b][Om.top(b)][u] == u);   // unit
      CHECK(mt.wedge[b][Om.bot(b)][u] == Om.bot(b));  // absorbing
      CHECK(mt.wedge[b][u][u] == u);           // idempotent
      for (int v = 0; v < n; ++v) {
        CHECK(mt.wedge[b][u][v] == mt.wedge[b][v][u]);
        for (int w = 0; w < n; ++w)
          CHECK(mt.wedge[b][mt.wedge[b][u][v]][w] ==
                mt.wedge[b][u][mt.wedge[b][v][w]]);
      }
    }
  }
}

TEST_CASE("topology enumeration matches the covering-sieve count") {
  SUBCASE("one-object base has exactly two topologies") {
    FinCategory B = terminal_category();
    OmegaPresheaf Om = omega(B);
    MeetTable mt = internal_meet(Om);
    auto ks = enumerate_topologies(Om, mt);
    REQUIRE(ks.size() == 2);
    CHECK(count_grothendieck_topologies(Om) == 2);
    CHECK(std::count(ks.begin(), ks.end(), identity_topology(Om)) == 1);
    CHECK(std::count(ks.begin(), ks.end(), top_topology(Om)) == 1);
  }
  SUBCASE("walking arrow has exactly four topologies") {
    FinCategory B = walking_arrow();
    OmegaPresheaf Om = omega(B);
    MeetTable mt = internal_meet(Om);
    auto ks = enumerate_topologies(Om, mt);
    REQUIRE(ks.size() == 4);
    CHECK(count_grothendieck_topologies(Om) == 4);
    for (const LTTopology& k : ks) CHECK(validate_topology(Om, mt, k).ok());
    CHECK(std::count(ks.begin(), ks.end(), identity_topology(Om)) == 1);
    CHECK(std::count(ks.begin(), ks.end(), top_topology(Om)) == 1);
  }
}

TEST_CASE("closure operators") {
  FinCategory B = walking_arrow();
  OmegaPresheaf Om = omega(B);
  MeetTable mt = internal_meet(Om);
  Presheaf one = terminal_presheaf(B);
  Presheaf ya = representable(B, B.find_obj("a"));
  auto ks = enumerate_topologies(Om, mt);
  REQUIRE(ks.size() == 4);

  SUBCASE("topology -> closure -> topology is the identity") {
    for (const LTTopology& k : ks) {
      auto close = [&](const Subobject& S) { return closure_of(Om, k, S); };
      CHECK(topology_of_closure(Om, close) == k);
    }
  }

  SUBCASE("closure axioms hold on sample ambients and maps") {
    std::vector<const Presheaf*> ambs{&Om.psh, &one, &ya};
    std::vector<PshMor> mors;
    mors.push_back(true_arrow(one, Om));
    mors.push_back(mor_to_terminal(Om.psh, one));
    mors.push_back(mor_to_terminal(ya, one));
    mors.push_back(psh_identity(Om.psh));
    for (const LTTopology& k : ks)
      CHECK(check_closure_axioms(Om, k, ambs, mors).ok());
  }

  SUBCASE("discrete topology: closure fixes everything") {
    LTTopology id = identity_topology(Om);
    for (const Subobject& S : all_subobjects(Om.psh)) {
      CHECK(closure_of(Om, id, S) == S);
      CHECK(is_closed(Om, id, S));
      CHECK(is_dense(Om, id, S) == (S == full_subobject(Om.psh)));
    }
  }

  SUBCASE("chaotic topology: every subobject is dense") {
    LTTopology top = top_topology(Om);
    for (const Subobject& S : all_subobjects(Om.psh)) {
      CHECK(closure_of(Om, top, S) == full_subobject(Om.psh));
      CHECK(is_dense(Om, top, S));
      CHECK(is_closed(Om, top, S) == (S == full_subobject(Om.psh)));
    }
  }

  SUBCASE("dense/closed factorization works for every topology") {
    for (const LTTopology& k : ks)
      for (const Subobject& S : all_subobjects(Om.psh)) {
        DenseClosedFactor dc = dense_closed_factor(Om, k, S);
        CHECK(dc.closure == closure_of(Om, k, S));
        CHECK(validate_presheaf(dc.middle).ok());
      }
  }
}

TEST_CASE("sheaves") {
  FinCategory B = walking_arrow();
  OmegaPresheaf Om = omega(B);
  MeetTable mt = internal_meet(Om);
  Presheaf one = terminal_presheaf(B);
  Presheaf ya = representable(B, B.find_obj("a"));
  auto ks = enumerate_topologies(Om, mt);

  SUBCASE("discrete topology: everything is a sheaf") {
    LTTopology id = identity_topology(Om);
    for (const Presheaf* P : {&one, &ya, &Om.psh}) {
      CHECK(is_sheaf(Om, id, *P));
      CHECK(is_separated(Om, id, *P));
    }
  }

  SUBCASE("chaotic topology: only singleton-valued presheaves are sheaves") {
    LTTopology top = top_topology(Om);
    CHECK(is_sheaf(Om, top, one));
    CHECK_FALSE(is_sheaf(Om, top, ya));     // empty component at b
    CHECK(is_separated(Om, top, ya));
    CHECK_FALSE(is_sheaf(Om, top, Om.psh));
  }

  SUBCASE("closed-sieve classifier is a sheaf for its own topology") {
    for (const LTTopology& k : ks) {
      Subobject fixed = full_subobject(Om.psh);
      for (int b = 0; b < B.obj_count(); ++b)
        for (int x = 0; x < Om.psh.card[b]; ++x)
          fixed.sel[b][x] = (k.k[b][x] == x);
      REQUIRE(validate_subobject(fixed).ok());
      CHECK(is_sheaf(Om, k, materialize(fixed)));
    }
  }
}

TEST_CASE("sheafification") {
  FinCategory B = walking_arrow();
  OmegaPresheaf Om = omega(B);
  MeetTable mt = internal_meet(Om);
  Presheaf one = terminal_presheaf(B);
  Presheaf ya = representable(B, B.find_obj("a"));
  auto ks = enumerate_topologies(Om, mt);

  for (const LTTopology& k : ks) {
    for (const Presheaf* P : {&one, &ya, &Om.psh}) {
      CAPTURE(P->label);
      SheafificationResult sh = sheafify(Om, k, *P);
      CHECK(validate_presheaf(sh.sheaf).ok());
      CHECK(is_sheaf(Om, k, sh.sheaf));
      PshMor unit{P, &sh.sheaf, sh.unit};
      CHECK(validate_pshmor(unit).ok());
      // the unit's image is dense in the sheafification
      CHECK(is_dense(Om, k, image_subobject(unit)));
      // already a sheaf: the unit is an isomorphism
      if (is_sheaf(Om, k, *P)) CHECK(psh_iso(unit));
      // idempotence
      SheafificationResult sh2 = sheafify(Om, k, sh.sheaf);
      PshMor unit2{&sh.sheaf, &sh2.sheaf, sh2.unit};
      CHECK(psh_iso(unit2));
    }
  }

  SUBCASE("chaotic topology collapses everything to a point") {
    LTTopology top = top_topology(Om);
    SheafificationResult sh = sheafify(Om, top, ya);
    CHECK(sh.sheaf.card == std::vector<int>(B.obj_count(), 1));
  }
}

TEST_CASE("exponentials") {
  FinCategory B = walking_arrow();
  OmegaPresheaf Om = omega(B);
  Presheaf one = terminal_presheaf(B);
  Presheaf ya = representable(B, B.find_obj("a"));

  SUBCASE("exponential with terminal exponent recovers the target") {
    ExponentialResult E = exponential(B, one, Om.psh);
    CHECK(E.exp.card == Om.psh.card);
    CHECK(validate_presheaf(E.exp).ok());
  }

  SUBCASE("terminal target gives the terminal exponential") {
    ExponentialResult E = exponential(B, Om.psh, one);
    CHECK(E.exp.card == std::vector<int>(B.obj_count(), 1));
  }

  SUBCASE("component sizes match a brute-force Yoneda count") {
    ExponentialResult E = exponential(B, ya, Om.psh);
    CHECK(validate_presheaf(E.exp).ok());
    for (int c = 0; c < B.obj_count(); ++c) {
      Presheaf yc = representable(B, c);
      Presheaf prod = product_presheaf(yc, ya);
      CHECK(E.exp.card[c] == (int)brute_nattrans(prod, Om.psh).size());
    }
  }

  SUBCASE("transpose satisfies the universal property uniquely") {
    ExponentialResult E = exponential(B, ya, Om.psh);
    Presheaf prod = product_presheaf(one, ya);
    auto candidates = brute_nattrans(prod, Om.psh);
    CHECK(candidates.size() == 2);  // maps 1 x y_a -> Omega
    auto points = brute_nattrans(one, E.exp);
    for (const auto& t : candidates) {
      auto g = exponential_transpose(E, one, ya, t);
      // ev o (g x 1) = t, and no other point of the exponential works
      int matches = 0;
      for (const auto& h : points) {
        bool agree = true;
        for (int b = 0; b < B.obj_count() && agree; ++b)
          for (int r = 0; r < one.card[b] && agree; ++r)
            for (int x = 0; x < ya.card[b]; ++x)
              if (E.ev[b][h[b][r] * ya.card[b] + x] != t[b][r * ya.card[b] + x]) {
                agree = false;
                break;
              }
        if (agree) {
          ++matches;
          CHECK(h == g);
        }
      }
      CHECK(matches == 1);
    }
  }
}
