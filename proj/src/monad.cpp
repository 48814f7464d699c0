#include "facto/monad.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace facto {

Monad identity_monad(const FinCategory& C) {
  Monad M;
  M.T = identity_functor(C);
  M.unit.resize(C.obj_count());
  M.mult.resize(C.obj_count());
  for (int a = 0; a < C.obj_count(); ++a) M.unit[a] = M.mult[a] = C.identity(a);
  return M;
}

Comonad identity_comonad(const FinCategory& C) {
  Comonad W;
  W.G = identity_functor(C);
  W.counit.resize(C.obj_count());
  W.comult.resize(C.obj_count());
  for (int a = 0; a < C.obj_count(); ++a)
    W.counit[a] = W.comult[a] = C.identity(a);
  return W;
}

ValidationReport validate_monad(const Monad& M) {
  ValidationReport rep = validate_functor(M.T);
  if (!rep.ok()) return rep;
  const FinCategory& C = M.cat();
  const Functor& T = M.T;
  if (static_cast<int>(M.unit.size()) != C.obj_count() ||
      static_cast<int>(M.mult.size()) != C.obj_count()) {
    rep.fail("unit/mult component lists have wrong arity");
    return rep;
  }

  auto t2_obj = [&](int a) {
    // TTa, or -1 when truncated
    if (!T.obj_defined(a)) return -1;
    int ta = T.on_obj(a);
    return T.obj_defined(ta) ? T.on_obj(ta) : -1;
  };

  for (int a = 0; a < C.obj_count(); ++a) {
    if (T.obj_defined(a)) {
      if (M.unit[a] < 0) {
        rep.fail(fmt("unit undefined at {}", C.obj_name(a)));
        continue;
      }
      if (C.dom(M.unit[a]) != a || C.cod(M.unit[a]) != T.on_obj(a))
        rep.fail(fmt("unit at {} has wrong endpoints", C.obj_name(a)));
    }
    int tta = t2_obj(a);
    if (tta >= 0) {
      if (M.mult[a] < 0) {
        rep.fail(fmt("mult undefined at {}", C.obj_name(a)));
        continue;
      }
      if (C.dom(M.mult[a]) != tta || C.cod(M.mult[a]) != T.on_obj(a))
        rep.fail(fmt("mult at {} has wrong endpoints", C.obj_name(a)));
    }
  }
  if (!rep.ok()) return rep;

  // naturality of the unit and multiplication
  for (int f = 0; f < C.mor_count(); ++f) {
    int a = C.dom(f), b = C.cod(f);
    if (T.mor_defined(f) && M.unit[a] >= 0 && M.unit[b] >= 0)
      if (C.compose(T.on_mor(f), M.unit[a]) != C.compose(M.unit[b], f))
        rep.fail(fmt("unit not natural at {}", C.mor_name(f)));
    if (T.mor_defined(f) && T.mor_defined(T.on_mor(f)) && M.mult[a] >= 0 &&
        M.mult[b] >= 0) {
      int ttf = T.on_mor(T.on_mor(f));
      if (C.compose(M.mult[b], ttf) != C.compose(T.on_mor(f), M.mult[a]))
        rep.fail(fmt("mult not natural at {}", C.mor_name(f)));
    }
  }

  for (int a = 0; a < C.obj_count(); ++a) {
    if (M.mult[a] < 0) continue;
    int ta = T.on_obj(a);
    // μ_a ∘ η_{Ta} = id_{Ta}
    if (M.unit[ta] >= 0 &&
        C.compose(M.mult[a], M.unit[ta]) != C.identity(ta))
      rep.fail(fmt("left unit law fails at {}", C.obj_name(a)));
    // μ_a ∘ T(η_a) = id_{Ta}
    if (M.unit[a] >= 0 && T.mor_defined(M.unit[a]) &&
        C.compose(M.mult[a], T.on_mor(M.unit[a])) != C.identity(ta))
      rep.fail(fmt("right unit law fails at {}", C.obj_name(a)));
    // μ_a ∘ T(μ_a) = μ_a ∘ μ_{Ta}
    if (T.mor_defined(M.mult[a]) && M.mult[ta] >= 0 &&
        C.compose(M.mult[a], T.on_mor(M.mult[a])) !=
            C.compose(M.mult[a], M.mult[ta]))
      rep.fail(fmt("associativity fails at {}", C.obj_name(a)));
  }
  return rep;
}

ValidationReport validate_comonad(const Comonad& W) {
  // A comonad on C is a monad on C^op with the same component ids.
  FinCategory op = opposite(W.cat());
  Monad M;
  M.T = W.G;
  M.T.source = &op;
  M.T.target = &op;
  M.unit = W.counit;
  M.mult = W.comult;
  return validate_monad(M);
}

std::vector<Algebra> enumerate_algebras(const Monad& M) {
  const FinCategory& C = M.cat();
  std::vector<Algebra> out;
  for (int a = 0; a < C.obj_count(); ++a) {
    if (!M.T.obj_defined(a) || M.unit[a] < 0) continue;
    int ta = M.T.on_obj(a);
    for (int h : C.hom(ta, a)) {
      if (C.compose(h, M.unit[a]) != C.identity(a)) continue;
      Algebra alg{a, h, true};
      if (M.T.mor_defined(h) && M.mult[a] >= 0) {
        if (C.compose(h, M.T.on_mor(h)) != C.compose(h, M.mult[a])) continue;
      } else {
        alg.fully_checked = false;
      }
      out.push_back(alg);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::unique_ptr<EMCategory> em_category(
    const Monad& M, std::optional<std::vector<Algebra>> algebras) {
  auto em = std::make_unique<EMCategory>();
  const FinCategory& C = M.cat();
  em->base = &C;
  em->monad = M;
  em->algebras = algebras ? std::move(*algebras) : enumerate_algebras(M);
  const auto& algs = em->algebras;
  int n = static_cast<int>(algs.size());

  FinCategory& D = em->category;
  for (const Algebra& alg : algs)
    D.add_object(
        fmt("({},{})", C.obj_name(alg.carrier), C.mor_name(alg.structure)));
  // identity morphisms correspond to the base identities
  em->mor_base.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    em->mor_base[D.identity(i)] = C.identity(algs[i].carrier);
    em->mor_lookup[{i, i, C.identity(algs[i].carrier)}] = D.identity(i);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int f : C.hom(algs[i].carrier, algs[j].carrier)) {
        if (i == j && C.is_identity(f)) continue;
        if (!M.T.mor_defined(f)) continue;
        if (C.compose(algs[j].structure, M.T.on_mor(f)) !=
            C.compose(f, algs[i].structure))
          continue;
        if (D.mor_count() >= max_mor_bound())
          throw BoundExceeded("algebra category exceeds the morphism cap");
        int id = D.add_morphism(i, j);
        D.set_mor_name(id, fmt("{}:{}->{}", C.mor_name(f), D.obj_name(i),
                               D.obj_name(j)));
        em->mor_base.push_back(f);
        em->mor_lookup[{i, j, f}] = id;
      }
  for (int u = 0; u < D.mor_count(); ++u)
    for (int v = 0; v < D.mor_count(); ++v) {
      if (D.cod(u) != D.dom(v)) continue;
      int base_comp = C.compose(em->mor_base[v], em->mor_base[u]);
      auto it = em->mor_lookup.find({D.dom(u), D.cod(v), base_comp});
      if (it == em->mor_lookup.end())
        throw UnknownId("algebra category is not closed under composition");
      D.set_compose(v, u, it->second);
    }
  D.finalize();

  em->free_obj.assign(C.obj_count(), -1);
  em->free_mor.assign(C.mor_count(), -1);
  for (int a = 0; a < C.obj_count(); ++a) {
    if (!M.T.obj_defined(a) || M.mult[a] < 0) continue;
    em->free_obj[a] = em->find_algebra(M.T.on_obj(a), M.mult[a]);
  }
  for (int f = 0; f < C.mor_count(); ++f) {
    if (!M.T.mor_defined(f)) continue;
    int i = em->free_obj[C.dom(f)], j = em->free_obj[C.cod(f)];
    if (i < 0 || j < 0) continue;
    em->free_mor[f] = em->find_mor(i, j, M.T.on_mor(f));
  }
  return em;
}

Functor EMCategory::forgetful() const {
  Functor V;
  V.source = &category;
  V.target = base;
  for (const Algebra& alg : algebras) V.obj_map.push_back(alg.carrier);
  V.mor_map = mor_base;
  return V;
}

Functor EMCategory::free() const {
  Functor F;
  F.source = base;
  F.target = &category;
  F.obj_map = free_obj;
  F.mor_map = free_mor;
  F.partial = true;
  return F;
}

int EMCategory::find_algebra(int carrier, int structure) const {
  for (int i = 0; i < static_cast<int>(algebras.size()); ++i)
    if (algebras[i].carrier == carrier && algebras[i].structure == structure)
      return i;
  return -1;
}

int EMCategory::find_mor(int src, int dst, int base_mor) const {
  auto it = mor_lookup.find({src, dst, base_mor});
  return it == mor_lookup.end() ? -1 : it->second;
}

namespace {

MorphismClass preimage_class_impl(const FinCategory& total,
                                  const std::vector<int>& to_base,
                                  const MorphismClass& c) {
  MorphismClass out(total, c.label() + "^V");
  for (int f = 0; f < total.mor_count(); ++f)
    if (c.contains(to_base[f])) out.insert(f);
  return out;
}

}  // namespace

MorphismClass preimage_class(const EMCategory& em, const MorphismClass& c) {
  return preimage_class_impl(em.category, em.mor_base, c);
}

Dfs induced_classes(const EMCategory& em, const Dfs& base) {
  return {preimage_class(em, base.E), preimage_class(em, base.J),
          preimage_class(em, base.M)};
}

AdjunctionBundle free_forgetful_adjunction(const EMCategory& em) {
  AdjunctionBundle b;
  const FinCategory& C = *em.base;
  b.F = std::make_unique<Functor>(em.free());
  b.G = std::make_unique<Functor>(em.forgetful());
  b.GF = std::make_unique<Functor>(compose_functors(*b.G, *b.F));
  b.FG = std::make_unique<Functor>(compose_functors(*b.F, *b.G));
  b.idC = std::make_unique<Functor>(identity_functor(C));
  b.idD = std::make_unique<Functor>(identity_functor(em.category));

  NatTrans unit{b.idC.get(), b.GF.get(), {}};
  unit.component.assign(C.obj_count(), -1);
  for (int a = 0; a < C.obj_count(); ++a)
    if (em.free_obj[a] >= 0) unit.component[a] = em.monad.unit[a];

  NatTrans counit{b.FG.get(), b.idD.get(), {}};
  counit.component.assign(em.category.obj_count(), -1);
  for (int i = 0; i < em.category.obj_count(); ++i) {
    const Algebra& alg = em.algebras[i];
    int fa = em.free_obj[alg.carrier];
    if (fa >= 0) counit.component[i] = em.find_mor(fa, i, alg.structure);
  }
  b.adj = Adjunction{*b.F, *b.G, unit, counit};
  return b;
}

LiftedFactorization lift_factorization(const EMCategory& em, int f_em, const MorphismClass& L,
                         const MorphismClass& R) {
  const FinCategory& C = *em.base;
  const Functor T = em.monad.T;
  // The orthogonality hypotheses depend only on (em, L, R); cache them so
  // lifting a whole category of morphisms pays for the sweep once.
  static std::set<std::tuple<std::vector<int>, std::vector<int>,
                             std::vector<int>>>
      checked;
  if (!checked.count({T.mor_map, L.members(), R.members()})) {
    for (int l : L.members())
      for (int r : R.members()) {
        if (!is_orthogonal(C, l, r))
          throw HypothesisFailed(
              fmt("L and R are not orthogonal at ({},{})", C.mor_name(l),
                  C.mor_name(r)));
        if (T.mor_defined(l) && !is_orthogonal(C, T.on_mor(l), r))
          throw HypothesisFailed(fmt("T(L) ⊥ R fails at ({},{})",
                                     C.mor_name(l), C.mor_name(r)));
        if (T.mor_defined(l) && T.mor_defined(T.on_mor(l)) &&
            !is_orthogonal(C, T.on_mor(T.on_mor(l)), r))
          throw HypothesisFailed(fmt("T²(L) ⊥ R fails at ({},{})",
                                     C.mor_name(l), C.mor_name(r)));
      }
    checked.insert({T.mor_map, L.members(), R.members()});
  }

  const Algebra& src = em.algebras[em.category.dom(f_em)];
  const Algebra& dst = em.algebras[em.category.cod(f_em)];
  int f = em.mor_base[f_em];
  auto [e, m] = factorize_fs(C, f, L, R);
  if (!T.mor_defined(e) || !T.mor_defined(m))
    throw HypothesisFailed("T is truncated on the chosen factorization");
  int u = C.compose(e, src.structure);
  int v = C.compose(dst.structure, T.on_mor(m));
  auto lifted = lift_fillers(C, T.on_mor(e), m, u, v);
  if (lifted.fillers.size() != 1)
    throw HypothesisFailed(
        fmt("structure square has {} fillers", lifted.fillers.size()));
  int k = lifted.fillers[0];

  int mid = C.cod(e);
  if (C.compose(k, em.monad.unit[mid]) != C.identity(mid))
    throw HypothesisFailed("lifted structure violates the unit law");
  if (T.mor_defined(k) && em.monad.mult[mid] >= 0 &&
      C.compose(k, T.on_mor(k)) != C.compose(k, em.monad.mult[mid]))
    throw HypothesisFailed("lifted structure violates associativity");

  // cross-check against the generic factorization inside the algebra category
  int mid_i = em.find_algebra(mid, k);
  if (mid_i < 0) throw UnknownId("lifted algebra is not in the category");
  int e_em = em.find_mor(em.category.dom(f_em), mid_i, e);
  int m_em = em.find_mor(mid_i, em.category.cod(f_em), m);
  if (e_em < 0 || m_em < 0)
    throw UnknownId("lifted factors are not algebra morphisms");
  auto generic = factorize_fs(em.category, f_em, preimage_class(em, L),
                              preimage_class(em, R));
  if (!fs_factorizations_equivalent(em.category, {e_em, m_em},
                                    {generic.left, generic.right}))
    throw HypothesisFailed(
        "lift disagrees with the generic factorization search");
  return {e, m, k};
}

ValidationReport check_right_induced_dfs(const EMCategory& em, const Dfs& dfs) {
  const FinCategory& C = *em.base;
  const Functor& T = em.monad.T;
  for (int e : dfs.E.members())
    if (T.mor_defined(e) && !dfs.E.contains(T.on_mor(e)))
      throw HypothesisFailed(
          fmt("T does not preserve trivial cofibrations at {}", C.mor_name(e)));
  for (int j : dfs.J.members())
    if (T.mor_defined(j) && !dfs.J.contains(T.on_mor(j)))
      throw HypothesisFailed(
          fmt("T does not preserve bifibrant morphisms at {}", C.mor_name(j)));

  ValidationReport rep;
  Dfs ind = induced_classes(em, dfs);
  ValidationReport axioms = verify_dfs(em.category, ind);
  for (auto& v : axioms.violations) rep.fail("induced dfs: " + v);

  // preimage commutes with composition of the lifted classes
  MorphismClass je = class_compose(C, dfs.J, dfs.E);
  if (!(preimage_class(em, je) ==
        class_compose(em.category, ind.J, ind.E)))
    rep.fail("(J·E) preimage differs from J^T·E^T");

  // locality transfers along the forgetful functor, both directions
  auto check_locals = [&](const MorphismClass& S_base, const char* tag) {
    MorphismClass S_em = preimage_class(em, S_base);
    for (int i = 0; i < em.category.obj_count(); ++i) {
      bool up = is_local(em.category, i, S_em);
      bool down = is_local(C, em.algebras[i].carrier, S_base);
      if (up != down)
        rep.fail(fmt("{}-locality mismatch at {}: algebra={} carrier={}", tag,
                     em.category.obj_name(i), up, down));
    }
  };
  check_locals(dfs.J, "J");
  check_locals(je, "J·E");

  AdjunctionBundle adj = free_forgetful_adjunction(em);
  ValidationReport quillen = check_quillen_adjunction(adj.adj, dfs, ind);
  for (auto& v : quillen.violations) rep.fail("free ⊣ forgetful: " + v);
  return rep;
}

std::unique_ptr<CoEMCategory> coem_category(const Comonad& W) {
  auto co = std::make_unique<CoEMCategory>();
  co->base = &W.cat();
  co->comonad = W;
  co->base_op = std::make_unique<FinCategory>(opposite(W.cat()));
  Monad M;
  M.T = W.G;
  M.T.source = co->base_op.get();
  M.T.target = co->base_op.get();
  M.unit = W.counit;
  M.mult = W.comult;
  co->dual = em_category(M);
  co->category = opposite(co->dual->category);
  co->coalgebras = co->dual->algebras;
  co->mor_base = co->dual->mor_base;
  return co;
}

Functor CoEMCategory::forgetful() const {
  Functor V;
  V.source = &category;
  V.target = base;
  for (const Algebra& alg : coalgebras) V.obj_map.push_back(alg.carrier);
  V.mor_map = mor_base;
  return V;
}

int CoEMCategory::find_coalgebra(int carrier, int structure) const {
  return dual->find_algebra(carrier, structure);
}

namespace {

// Does G send the canonical limit of (f,g)-style data to a limit? Compared
// via an explicit comparison iso.
void check_equalizer_preservation(ValidationReport& rep, const FinCategory& C,
                                  const Functor& G) {
  for (int a = 0; a < C.obj_count(); ++a)
    for (int b = 0; b < C.obj_count(); ++b) {
      const auto& par = C.hom(a, b);
      for (size_t x = 0; x < par.size(); ++x)
        for (size_t y = x + 1; y < par.size(); ++y) {
          int f = par[x], g = par[y];
          if (!G.mor_defined(f) || !G.mor_defined(g)) continue;
          auto eq = compute_equalizer(C, f, g);
          if (!eq || !G.mor_defined(*eq)) continue;
          auto geq = compute_equalizer(C, G.on_mor(f), G.on_mor(g));
          if (!geq) {
            rep.fail(fmt("G destroys the equalizer of ({},{})", C.mor_name(f),
                         C.mor_name(g)));
            continue;
          }
          int ge = G.on_mor(*eq);
          bool iso_found = false;
          for (int w : C.hom(C.dom(ge), C.dom(*geq)))
            if (is_iso(C, w) && C.compose(*geq, w) == ge) iso_found = true;
          if (!iso_found)
            rep.fail(fmt("G({}) is not an equalizer of (G{},G{})",
                         C.mor_name(*eq), C.mor_name(f), C.mor_name(g)));
        }
    }
}

void check_pullback_preservation(ValidationReport& rep, const FinCategory& C,
                                 const Functor& G) {
  for (int z = 0; z < C.obj_count(); ++z) {
    const auto& in = C.into(z);
    for (int f : in)
      for (int g : in) {
        if (C.is_identity(f) || C.is_identity(g)) continue;
        if (!G.mor_defined(f) || !G.mor_defined(g)) continue;
        auto pb = compute_pullback(C, f, g);
        if (!pb || !G.mor_defined(pb->to_left) || !G.mor_defined(pb->to_right))
          continue;
        auto gpb = compute_pullback(C, G.on_mor(f), G.on_mor(g));
        if (!gpb) {
          rep.fail(fmt("G destroys the pullback of ({},{})", C.mor_name(f),
                       C.mor_name(g)));
          continue;
        }
        int gl = G.on_mor(pb->to_left), gr = G.on_mor(pb->to_right);
        bool iso_found = false;
        for (int w : C.hom(C.dom(gl), gpb->apex))
          if (is_iso(C, w) && C.compose(gpb->to_left, w) == gl &&
              C.compose(gpb->to_right, w) == gr)
            iso_found = true;
        if (!iso_found)
          rep.fail(fmt("G image of the pullback of ({},{}) is not a pullback",
                       C.mor_name(f), C.mor_name(g)));
      }
  }
}

}  // namespace

ValidationReport check_left_induced_dfs(const CoEMCategory& co, const Dfs& dfs) {
  const FinCategory& C = *co.base;
  const Functor& G = co.comonad.G;
  for (int m : dfs.M.members())
    if (G.mor_defined(m) && !dfs.M.contains(G.on_mor(m)))
      throw HypothesisFailed(
          fmt("G does not preserve trivial fibrations at {}", C.mor_name(m)));
  for (int j : dfs.J.members())
    if (G.mor_defined(j) && !dfs.J.contains(G.on_mor(j)))
      throw HypothesisFailed(
          fmt("G does not preserve bifibrant morphisms at {}", C.mor_name(j)));

  ValidationReport rep;
  // connected-limit preservation on the materialized domain
  check_equalizer_preservation(rep, C, G);
  check_pullback_preservation(rep, C, G);
  if (!rep.ok())
    throw HypothesisFailed("G fails finite-limit preservation: " +
                           rep.violations.front());

  Dfs ind{preimage_class_impl(co.category, co.mor_base, dfs.E),
          preimage_class_impl(co.category, co.mor_base, dfs.J),
          preimage_class_impl(co.category, co.mor_base, dfs.M)};
  ValidationReport axioms = verify_dfs(co.category, ind);
  for (auto& v : axioms.violations) rep.fail("induced dfs: " + v);

  MorphismClass je = class_compose(C, dfs.J, dfs.E);
  MorphismClass je_co = preimage_class_impl(co.category, co.mor_base, je);
  if (!(je_co == class_compose(co.category, ind.J, ind.E)))
    rep.fail("(J·E) preimage differs from J_G·E_G");

  // (ii) the forgetful functor reflects J·E-local objects
  for (int i = 0; i < co.category.obj_count(); ++i)
    if (is_local(C, co.coalgebras[i].carrier, je) &&
        !is_local(co.category, i, je_co))
      rep.fail(fmt("locality not reflected at {}", co.category.obj_name(i)));

  // (iii) when G preserves J·E-local objects, local coalgebras have local
  // carriers
  bool g_preserves_locals = true;
  for (int a = 0; a < C.obj_count(); ++a)
    if (G.obj_defined(a) && is_local(C, a, je) &&
        !is_local(C, G.on_obj(a), je))
      g_preserves_locals = false;
  if (g_preserves_locals)
    for (int i = 0; i < co.category.obj_count(); ++i)
      if (is_local(co.category, i, je_co) &&
          !is_local(C, co.coalgebras[i].carrier, je))
        rep.fail(fmt("local coalgebra {} has non-local carrier",
                     co.category.obj_name(i)));
  return rep;
}

ValidationReport check_lifted_quillen(const EMCategory& emC, const EMCategory& emD,
                            const Adjunction& base_adj,
                            const Adjunction& lifted_adj, const Dfs& dfsC,
                            const Dfs& dfsD) {
  ValidationReport rep;
  // R ∘ V_D = V_C ∘ Q on the nose
  Functor vc = emC.forgetful(), vd = emD.forgetful();
  const Functor& R = base_adj.right;
  const Functor& Q = lifted_adj.right;
  for (int i = 0; i < emD.category.obj_count(); ++i)
    if (R.on_obj(vd.on_obj(i)) != vc.on_obj(Q.on_obj(i)))
      rep.fail(fmt("R∘V ≠ V∘Q at object {}", emD.category.obj_name(i)));
  for (int f = 0; f < emD.category.mor_count(); ++f)
    if (R.on_mor(vd.on_mor(f)) != vc.on_mor(Q.on_mor(f)))
      rep.fail(fmt("R∘V ≠ V∘Q at morphism {}", emD.category.mor_name(f)));
  if (!rep.ok()) return rep;

  ValidationReport base_q = check_quillen_adjunction(base_adj, dfsC, dfsD);
  for (auto& v : base_q.violations) rep.fail("base adjunction: " + v);
  ValidationReport lift_q = check_quillen_adjunction(
      lifted_adj, induced_classes(emC, dfsC), induced_classes(emD, dfsD));
  for (auto& v : lift_q.violations) rep.fail("lifted adjunction: " + v);
  return rep;
}

namespace {

// Number of morphisms of the size-<=k set skeleton (sum of c^d), saturating.
long long skeleton_mor_count(int k) {
  long long total = 0;
  for (int d = 0; d <= k; ++d)
    for (int c = 0; c <= k; ++c) {
      long long p = 1;
      for (int i = 0; i < d; ++i) {
        p *= c;
        if (p > (1LL << 40)) return 1LL << 40;
      }
      total += p;
      if (total > (1LL << 40)) return 1LL << 40;
    }
  return total;
}

}  // namespace

GroupActionInstance group_action_instance(const GroupTable& g, int N) {
  GroupActionInstance inst;
  inst.group = g;
  inst.carrier_bound = N;
  int n = g.order();
  if (skeleton_mor_count(N) > max_mor_bound())
    throw BoundExceeded(fmt("carrier bound {} exceeds the morphism cap", N));
  int K = N;
  while (K < n * N && skeleton_mor_count(K + 1) <= max_mor_bound()) ++K;
  inst.skeleton_bound = K;
  inst.sets = std::make_unique<SetSkeleton>(K);
  const SetSkeleton& S = *inst.sets;
  const FinCategory& C = S.cat();

  Monad M;
  M.T.source = &C;
  M.T.target = &C;
  M.T.partial = true;
  M.T.obj_map.assign(C.obj_count(), -1);
  M.T.mor_map.assign(C.mor_count(), -1);
  M.unit.assign(C.obj_count(), -1);
  M.mult.assign(C.obj_count(), -1);
  int e = g.unit();
  for (int a = 0; a <= K; ++a) {
    if (n * a > K) continue;
    M.T.obj_map[a] = n * a;
    std::vector<int> eta(a);
    for (int x = 0; x < a; ++x) eta[x] = e * a + x;
    M.unit[a] = S.mor_of(a, n * a, eta);
    if (n * n * a <= K) {
      std::vector<int> mu(n * n * a);
      for (int g1 = 0; g1 < n; ++g1)
        for (int g2 = 0; g2 < n; ++g2)
          for (int x = 0; x < a; ++x)
            mu[g1 * (n * a) + g2 * a + x] = g.mult[g1][g2] * a + x;
      M.mult[a] = S.mor_of(n * n * a, n * a, mu);
    }
  }
  for (int f = 0; f < C.mor_count(); ++f) {
    int a = C.dom(f), b = C.cod(f);
    if (n * a > K || n * b > K) continue;
    std::vector<int> fn = S.fn_of(f);
    std::vector<int> tf(n * a);
    for (int i = 0; i < n; ++i)
      for (int x = 0; x < a; ++x) tf[i * a + x] = i * b + fn[x];
    M.T.mor_map[f] = S.mor_of(n * a, n * b, tf);
  }
  inst.monad = M;

  // keep only genuine actions: the associativity square may be truncated,
  // but the action law is decidable elementwise from the group table
  std::vector<Algebra> algs;
  for (Algebra alg : enumerate_algebras(M)) {
    if (!alg.fully_checked) {
      int a = alg.carrier;
      std::vector<int> h = S.fn_of(alg.structure);
      bool action = true;
      for (int g1 = 0; g1 < n && action; ++g1)
        for (int g2 = 0; g2 < n && action; ++g2)
          for (int x = 0; x < a && action; ++x)
            if (h[g1 * a + h[g2 * a + x]] != h[g.mult[g1][g2] * a + x])
              action = false;
      if (!action) continue;
      alg.fully_checked = true;
    }
    algs.push_back(alg);
  }
  inst.em = em_category(M, std::move(algs));
  return inst;
}

}  // namespace facto
