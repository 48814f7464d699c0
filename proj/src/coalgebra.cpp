#include <algorithm>
#include <map>

#include "facto/coalgebra.hpp"

namespace facto {

namespace {

// Shared context for classifier-level computations in a coalgebra topos.
struct CoCtx {
  const ToposWindow& W;
  const CoalgebraTopos& T;
  Subobject true_img;  // image of the classifier point on the carrier

  CoCtx(const WindowComonad& Cm, const CoalgebraTopos& T_)
      : W(*Cm.window), T(T_),
        true_img(image_subobject(
            W.mor_data[T_.co->mor_base[T_.true_mor]])) {}

  const FinCategory& cocat() const { return T.co->category; }
  int carrier(int co_obj) const { return T.co->coalgebras[co_obj].carrier; }
  int base(int co_mor) const { return T.co->mor_base[co_mor]; }

  // Pullback of the classifier point along the underlying map of h.
  Subobject point_preimage(int h_co) const {
    const auto& comp = W.mor_data[base(h_co)].comp;
    int X = W.cat.dom(base(h_co));
    Subobject out = empty_subobject(W.objects[X]);
    for (size_t b = 0; b < out.sel.size(); ++b)
      for (size_t x = 0; x < out.sel[b].size(); ++x)
        out.sel[b][x] = true_img.sel[b][comp[b][x]];
    return out;
  }

  // The unique coalgebra morphism cod -> classifier pulling the point back
  // to exactly S. The classifier property guarantees existence/uniqueness.
  int char_of(int co_obj, const Subobject& S) const {
    int found = -1;
    for (int h : cocat().hom(co_obj, T.omega_obj)) {
      if (point_preimage(h) == S) {
        if (found >= 0)
          throw NoUniqueArrow(
              "two classifying maps for one coalgebra subobject");
        found = h;
      }
    }
    if (found < 0)
      throw NoUniqueArrow("coalgebra subobject has no classifying map");
    return found;
  }

  // Closure of S inside the given coalgebra, for the extended topology.
  Subobject closure(int co_obj, const Subobject& S, int ktilde) const {
    int chi = char_of(co_obj, S);
    return point_preimage(cocat().compose(ktilde, chi));
  }
};

MorphismClass co_preimage(const CoEMCategory& co, const MorphismClass& c,
                          const std::string& label) {
  MorphismClass out(co.category, label);
  for (int f = 0; f < co.category.mor_count(); ++f)
    if (c.contains(co.mor_base[f])) out.insert(f);
  return out;
}

}  // namespace

WindowComonad product_comonad(const ToposWindow& W, int factor_obj) {
  const Presheaf& B = W.objects.at(factor_obj);
  WindowComonad out;
  out.window = &W;
  out.factor_obj = factor_obj;

  Comonad& cm = out.cm;
  cm.G.source = &W.cat;
  cm.G.target = &W.cat;
  cm.G.obj_map.resize(W.cat.obj_count());
  for (int i = 0; i < W.cat.obj_count(); ++i) {
    cm.G.obj_map[i] = W.obj_of(product_presheaf(B, W.objects[i]));
    if (cm.G.obj_map[i] < 0)
      throw BoundExceeded(
          fmt("window lacks the product of the factor with object {}",
              W.cat.obj_name(i)));
  }
  int n_base = static_cast<int>(B.card.size());
  cm.G.mor_map.resize(W.cat.mor_count());
  for (int f = 0; f < W.cat.mor_count(); ++f) {
    const Presheaf& X = W.objects[W.cat.dom(f)];
    const Presheaf& Y = W.objects[W.cat.cod(f)];
    std::vector<std::vector<int>> comp(n_base);
    for (int b = 0; b < n_base; ++b)
      for (int u = 0; u < B.card[b]; ++u)
        for (int x = 0; x < X.card[b]; ++x)
          comp[b].push_back(u * Y.card[b] + W.mor_data[f].comp[b][x]);
    cm.G.mor_map[f] =
        W.mor_of(cm.G.obj_map[W.cat.dom(f)], cm.G.obj_map[W.cat.cod(f)], comp);
    if (cm.G.mor_map[f] < 0)
      throw InternalDisagreement("product transformation not in the window");
  }

  cm.counit.resize(W.cat.obj_count());
  cm.comult.resize(W.cat.obj_count());
  for (int i = 0; i < W.cat.obj_count(); ++i) {
    const Presheaf& X = W.objects[i];
    int gi = cm.G.obj_map[i];
    int gcard_total = 0;
    std::vector<std::vector<int>> eps(n_base), delta(n_base);
    for (int b = 0; b < n_base; ++b) {
      int gcard = B.card[b] * X.card[b];
      for (int u = 0; u < B.card[b]; ++u)
        for (int x = 0; x < X.card[b]; ++x) {
          eps[b].push_back(x);
          delta[b].push_back(u * gcard + (u * X.card[b] + x));
        }
      gcard_total += gcard;
    }
    (void)gcard_total;
    cm.counit[i] = W.mor_of(gi, i, eps);
    cm.comult[i] = W.mor_of(gi, cm.G.obj_map[gi], delta);
    if (cm.counit[i] < 0 || cm.comult[i] < 0)
      throw InternalDisagreement("comonad structure map not in the window");
  }

  ValidationReport laws = validate_comonad(cm);
  if (!laws.ok())
    throw InternalDisagreement("product comonad violates the laws: " +
                               laws.violations.front());
  return out;
}

WindowComonad window_comonad(const ToposWindow& W, Comonad cm) {
  WindowComonad out;
  out.window = &W;
  out.cm = std::move(cm);
  out.factor_obj = -1;
  return out;
}

ValidationReport check_cartesian_comonad(const WindowComonad& Cm) {
  ValidationReport rep = validate_comonad(Cm.cm);
  const Functor& G = Cm.cm.G;
  for (int i = 0; i < Cm.window->cat.obj_count(); ++i)
    if (!G.obj_defined(i)) rep.fail("endofunctor is partial on the window");
  if (!rep.ok()) return rep;
  if (!functor_preserves_pullbacks(*Cm.window, *Cm.window, G))
    rep.fail("endofunctor does not preserve window pullbacks");
  if (!functor_preserves_equalizers(*Cm.window, *Cm.window, G))
    rep.fail("endofunctor does not preserve window equalizers");
  return rep;
}

CoalgebraTopos build_coalgebra_topos(const WindowComonad& Cm) {
  ValidationReport cart = check_cartesian_comonad(Cm);
  if (!cart.ok()) throw NotCartesian(cart.violations.front());

  const ToposWindow& W = *Cm.window;
  const Functor& G = Cm.cm.G;
  CoalgebraTopos T;
  T.co = coem_category(Cm.cm);

  // tau classifies the image of the classifier point under G.
  int g_omega = G.on_obj(W.omega_obj);
  int g_true = G.on_mor(W.true_mor);
  if (!psh_mono(W.mor_data[g_true]))
    throw InternalDisagreement(
        "cartesian endofunctor failed to preserve a monomorphism");
  int tau = W.mor_of(
      g_omega, W.omega_obj,
      char_components(W.Om, subobject_from_mono(W.mor_data[g_true])));
  if (tau < 0)
    throw BoundExceeded("classifier comparison map missing from the window");

  // Classifier carrier: equalizer of the identity and G(tau)∘delta.
  int rhs = W.cat.compose(G.on_mor(tau), Cm.cm.comult[W.omega_obj]);
  const Presheaf& GOm = W.objects[g_omega];
  Subobject eq = empty_subobject(GOm);
  for (size_t b = 0; b < eq.sel.size(); ++b)
    for (size_t x = 0; x < eq.sel[b].size(); ++x)
      eq.sel[b][x] = W.mor_data[rhs].comp[b][x] == static_cast<int>(x);
  ValidationReport sub = validate_subobject(eq);
  if (!sub.ok())
    throw InternalDisagreement("equalizer subset is not a subobject: " +
                               sub.violations.front());
  T.m_carrier = W.obj_of(materialize(eq));
  if (T.m_carrier < 0)
    throw BoundExceeded("classifier carrier missing from the window");
  T.m_mor = W.mor_of(T.m_carrier, g_omega, inclusion_components(eq));
  if (T.m_mor < 0)
    throw InternalDisagreement("equalizer inclusion not in the window");

  // Universality sweep: every equalizing map factors uniquely.
  for (int h = 0; h < W.cat.mor_count(); ++h) {
    if (W.cat.cod(h) != g_omega) continue;
    if (W.cat.compose(rhs, h) != h) continue;
    int count = 0;
    for (int u : W.cat.hom(W.cat.dom(h), T.m_carrier))
      if (W.cat.compose(T.m_mor, u) == h) ++count;
    if (count != 1)
      T.report.fail(fmt("equalizing map {} has {} factorizations", h, count));
  }

  // Coalgebra structure on the carrier: G(m)∘s = delta∘m.
  int gm = G.on_mor(T.m_mor);
  if (!psh_mono(W.mor_data[gm]))
    throw InternalDisagreement(
        "cartesian endofunctor failed to preserve a monomorphism");
  int dm = W.cat.compose(Cm.cm.comult[W.omega_obj], T.m_mor);
  const Presheaf& E = W.objects[T.m_carrier];
  std::vector<std::vector<int>> s_comp(E.card.size());
  for (size_t b = 0; b < E.card.size(); ++b)
    for (int e = 0; e < E.card[b]; ++e) {
      int target = W.mor_data[dm].comp[b][e];
      const auto& col = W.mor_data[gm].comp[b];
      auto it = std::find(col.begin(), col.end(), target);
      if (it == col.end())
        throw InternalDisagreement(
            "classifier structure does not restrict along the equalizer");
      s_comp[b].push_back(static_cast<int>(it - col.begin()));
    }
  int s_mor = W.mor_of(T.m_carrier, G.on_obj(T.m_carrier), s_comp);
  if (s_mor < 0)
    throw InternalDisagreement("classifier structure map not in the window");
  T.omega_obj = T.co->find_coalgebra(T.m_carrier, s_mor);
  if (T.omega_obj < 0)
    throw InternalDisagreement("classifier carrier is not a coalgebra");

  // Terminal coalgebra: cofree on the terminal window object.
  T.terminal_obj = T.co->find_coalgebra(G.on_obj(W.terminal_obj),
                                        Cm.cm.comult[W.terminal_obj]);
  if (T.terminal_obj < 0)
    throw InternalDisagreement("cofree coalgebra on the point is missing");
  for (int i = 0; i < T.co->category.obj_count(); ++i)
    if (T.co->category.hom(i, T.terminal_obj).size() != 1)
      T.report.fail(
          fmt("coalgebra {} has no unique map to the cofree point", i));

  // Classifier point: the unique factorization of G(true).
  T.true_mor = -1;
  for (int u : T.co->category.hom(T.terminal_obj, T.omega_obj))
    if (W.cat.compose(T.m_mor, T.co->mor_base[u]) == g_true) {
      if (T.true_mor >= 0)
        throw NoUniqueArrow("two classifier points in the coalgebra topos");
      T.true_mor = u;
    }
  if (T.true_mor < 0)
    throw NoUniqueArrow("classifier point missing in the coalgebra topos");
  if (!psh_mono(W.mor_data[T.co->mor_base[T.true_mor]]))
    T.report.fail("classifier point is not monic");

  // Product comonads: cross-check against the slice over the factor.
  if (Cm.factor_obj >= 0) {
    for (int p = 0; p < W.cat.mor_count(); ++p)
      if (W.cat.cod(p) == Cm.factor_obj) T.slice_obj.push_back(p);
    std::map<int, int> oidx;
    for (size_t i = 0; i < T.slice_obj.size(); ++i)
      oidx[T.slice_obj[i]] = static_cast<int>(i);

    int n = static_cast<int>(T.slice_obj.size());
    std::vector<int> dom, cod, ident(n, -1), hmor;
    std::map<std::tuple<int, int, int>, int> midx;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int p = T.slice_obj[i], q = T.slice_obj[j];
        for (int h : W.cat.hom(W.cat.dom(p), W.cat.dom(q)))
          if (W.cat.compose(q, h) == p) {
            int id = static_cast<int>(dom.size());
            dom.push_back(i);
            cod.push_back(j);
            hmor.push_back(h);
            midx[{i, j, h}] = id;
          }
      }
    int m = static_cast<int>(dom.size());
    for (int i = 0; i < n; ++i)
      ident[i] = midx.at({i, i, W.cat.identity(W.cat.dom(T.slice_obj[i]))});
    std::vector<int> table(static_cast<size_t>(m) * m, -1);
    for (int g = 0; g < m; ++g)
      for (int f = 0; f < m; ++f) {
        if (cod[f] != dom[g]) continue;
        table[static_cast<size_t>(g) * m + f] =
            midx.at({dom[f], cod[g], W.cat.compose(hmor[g], hmor[f])});
      }
    std::vector<std::string> onames(n), mnames(m);
    for (int i = 0; i < n; ++i) onames[i] = fmt("p{}", T.slice_obj[i]);
    for (int f = 0; f < m; ++f) mnames[f] = fmt("h{}", f);
    T.slice = FinCategory::from_raw(std::move(dom), std::move(cod),
                                    std::move(ident), std::move(table),
                                    std::move(onames), std::move(mnames));

    // Equivalence with the coalgebras: p |-> (dom p, <p, id>).
    const Presheaf& B = W.objects[Cm.factor_obj];
    std::vector<int> to_co(n, -1);
    for (int i = 0; i < n; ++i) {
      int p = T.slice_obj[i];
      const Presheaf& X = W.objects[W.cat.dom(p)];
      std::vector<std::vector<int>> comp(B.card.size());
      for (size_t b = 0; b < B.card.size(); ++b)
        for (int x = 0; x < X.card[b]; ++x)
          comp[b].push_back(W.mor_data[p].comp[b][x] * X.card[b] + x);
      int s = W.mor_of(W.cat.dom(p), G.on_obj(W.cat.dom(p)), comp);
      to_co[i] = s < 0 ? -1 : T.co->find_coalgebra(W.cat.dom(p), s);
      if (to_co[i] < 0)
        T.report.fail(fmt("slice: object p{} has no matching coalgebra",
                          T.slice_obj[i]));
    }
    // Full and faithful: underlying-morphism sets agree per hom set.
    for (int i = 0; i < n && T.report.ok(); ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<int> sl, cg;
        for (int f = 0; f < T.slice.mor_count(); ++f)
          if (T.slice.dom(f) == i && T.slice.cod(f) == j)
            sl.push_back(hmor[f]);
        for (int f : T.co->category.hom(to_co[i], to_co[j]))
          cg.push_back(T.co->mor_base[f]);
        std::sort(sl.begin(), sl.end());
        std::sort(cg.begin(), cg.end());
        if (sl != cg)
          T.report.fail(
              fmt("slice: hom set p{} -> p{} does not match the coalgebras",
                  T.slice_obj[i], T.slice_obj[j]));
      }
    // Essentially surjective.
    for (int c = 0; c < T.co->category.obj_count(); ++c) {
      bool hit = false;
      for (int i = 0; i < n && !hit; ++i) {
        if (to_co[i] < 0) continue;
        for (int u : T.co->category.hom(to_co[i], c))
          if (is_iso(T.co->category, u)) {
            hit = true;
            break;
          }
      }
      if (!hit)
        T.report.fail(
            fmt("slice: coalgebra {} is not reached up to isomorphism", c));
    }
  }
  return T;
}

ExtensionResult extend_lt(const WindowComonad& Cm, const CoalgebraTopos& T,
                          const LTTopology& k) {
  const ToposWindow& W = *Cm.window;
  const Functor& G = Cm.cm.G;
  ValidationReport cart = check_cartesian_comonad(Cm);
  if (!cart.ok())
    throw HypothesisFailed("comonad is not cartesian: " +
                           cart.violations.front());
  ContinuityReport cont = continuity_conditions(W, W, G, k, k);
  if (!cont.continuous())
    throw HypothesisFailed(fmt(
        "endofunctor is not continuous for the topology "
        "(cofibrations={} closure={} continuity={} classifier={})",
        cont.cof_preserved, cont.closure_preserved, cont.closure_continuous,
        cont.classifier_square));

  ExtensionResult R;
  const Presheaf& E = W.objects[T.m_carrier];
  const auto& m = W.mor_data[T.m_mor].comp;
  int km = W.mor_of(W.omega_obj, W.omega_obj, k.k);
  const auto& gk = W.mor_data[G.on_mor(km)].comp;

  // The unique endomap of the carrier with m∘ktilde = G(k)∘m.
  R.ktilde_comp.resize(E.card.size());
  for (size_t b = 0; b < E.card.size(); ++b)
    for (int e = 0; e < E.card[b]; ++e) {
      int target = gk[b][m[b][e]];
      auto it = std::find(m[b].begin(), m[b].end(), target);
      if (it == m[b].end())
        throw NoUniqueArrow(
            "extended endomap does not restrict to the classifier carrier");
      R.ktilde_comp[b].push_back(static_cast<int>(it - m[b].begin()));
    }
  int kt_w = W.mor_of(T.m_carrier, T.m_carrier, R.ktilde_comp);
  if (kt_w < 0)
    throw InternalDisagreement("extended endomap is not natural");
  R.ktilde = -1;
  for (int f : T.co->category.hom(T.omega_obj, T.omega_obj))
    if (T.co->mor_base[f] == kt_w) {
      if (R.ktilde >= 0)
        throw NoUniqueArrow("extended endomap lifts twice");
      R.ktilde = f;
    }
  if (R.ktilde < 0)
    throw NoUniqueArrow("extended endomap is not a coalgebra morphism");

  const FinCategory& D = T.co->category;
  if (D.compose(R.ktilde, T.true_mor) != T.true_mor)
    R.report.fail("extended topology does not fix the classifier point");
  if (D.compose(R.ktilde, R.ktilde) != R.ktilde)
    R.report.fail("extended topology is not idempotent");

  // Meet compatibility on the fiberwise product of the classifier with
  // itself, computed on raw element tables (the product object need not be
  // a window object). Product comonads only: elements of G(Omega) decode
  // as (factor element, sieve).
  if (Cm.factor_obj >= 0) {
    int n_base = static_cast<int>(E.card.size());
    const auto& s_comp =
        W.mor_data[T.co->coalgebras[T.omega_obj].structure].comp;
    std::vector<std::vector<std::pair<int, int>>> pairs(n_base);
    std::vector<std::map<std::pair<int, int>, int>> pidx(n_base);
    auto dec_u = [&](int b, int e) { return m[b][e] / W.Om.psh.card[b]; };
    auto dec_s = [&](int b, int e) { return m[b][e] % W.Om.psh.card[b]; };
    for (int b = 0; b < n_base; ++b)
      for (int e1 = 0; e1 < E.card[b]; ++e1)
        for (int e2 = 0; e2 < E.card[b]; ++e2)
          if (dec_u(b, e1) == dec_u(b, e2)) {
            pidx[b][{e1, e2}] = static_cast<int>(pairs[b].size());
            pairs[b].push_back({e1, e2});
          }
    std::vector<std::vector<int>> wedge(n_base);
    for (int b = 0; b < n_base; ++b)
      for (auto [e1, e2] : pairs[b]) {
        int enc = dec_u(b, e1) * W.Om.psh.card[b] +
                  W.meet.wedge[b][dec_s(b, e1)][dec_s(b, e2)];
        auto it = std::find(m[b].begin(), m[b].end(), enc);
        if (it == m[b].end())
          throw NoUniqueArrow(
              "internal meet does not restrict to the classifier carrier");
        wedge[b].push_back(static_cast<int>(it - m[b].begin()));
      }
    for (int b = 0; b < n_base; ++b)
      for (size_t q = 0; q < pairs[b].size(); ++q) {
        auto [e1, e2] = pairs[b][q];
        // the meet is a coalgebra morphism from the fiberwise product
        int u = dec_u(b, e1);
        int lhs_struct = u * E.card[b] + wedge[b][q];
        if (s_comp[b][wedge[b][q]] != lhs_struct)
          R.report.fail(fmt(
              "meet is not a coalgebra morphism at object {} pair {}", b, q));
        // compatibility of the extension with the meet
        int kk = wedge[b][pidx[b].at({R.ktilde_comp[b][e1],
                                      R.ktilde_comp[b][e2]})];
        if (R.ktilde_comp[b][wedge[b][q]] != kk)
          R.report.fail(fmt(
              "extension does not preserve the meet at object {} pair {}", b,
              q));
      }
  }

  // The forgetful functor preserves and reflects dense and closed
  // monomorphisms, swept over every coalgebra morphism with monic
  // underlying map.
  CoCtx ctx(Cm, T);
  for (int f = 0; f < D.mor_count(); ++f) {
    const PshMor& bf = W.mor_data[ctx.base(f)];
    if (!psh_mono(bf)) continue;
    Subobject S = subobject_from_mono(bf);
    Subobject cls = ctx.closure(D.cod(f), S, R.ktilde);
    bool dense_co = cls == full_subobject(*S.of);
    bool closed_co = cls == S;
    if (dense_co != is_dense(W.Om, k, S))
      R.report.fail(
          fmt("density transfer fails at coalgebra morphism {}", f));
    if (closed_co != is_closed(W.Om, k, S))
      R.report.fail(
          fmt("closedness transfer fails at coalgebra morphism {}", f));
  }
  return R;
}

ValidationReport check_induced_topology_extension(const WindowComonad& Cm,
                                                  const CoalgebraTopos& T,
                                                  const Dfs& dfs) {
  const ToposWindow& W = *Cm.window;
  const Functor& G = Cm.cm.G;
  LTTopology k = topology_of_dfs(W, dfs);  // gates: dfs cartesian

  ValidationReport cart = check_cartesian_comonad(Cm);
  if (!cart.ok())
    throw HypothesisFailed("comonad is not cartesian: " +
                           cart.violations.front());
  for (int f : dfs.M.members())
    if (!dfs.M.contains(G.on_mor(f)))
      throw HypothesisFailed(
          "endofunctor does not preserve the right class");
  for (int f : dfs.J.members())
    if (!dfs.J.contains(G.on_mor(f)))
      throw HypothesisFailed(
          "endofunctor does not preserve the middle class");

  ExtensionResult ext = extend_lt(Cm, T, k);  // gates: continuity
  ValidationReport rep;
  rep.merge(ext.report);

  const FinCategory& D = T.co->category;
  Dfs ind{co_preimage(*T.co, dfs.E, "E_co"),
          co_preimage(*T.co, dfs.J, "J_co"),
          co_preimage(*T.co, dfs.M, "M_co")};
  DfsFactorization fac = factorize_dfs(D, T.true_mor, ind);
  const PshMor& bm = W.mor_data[T.co->mor_base[fac.m]];
  if (!psh_mono(bm)) {
    rep.fail("right part of the induced factorization is not monic");
    return rep;
  }

  CoCtx ctx(Cm, T);
  int k_ind = ctx.char_of(T.omega_obj, subobject_from_mono(bm));
  if (k_ind != ext.ktilde)
    rep.fail(fmt(
        "induced topology ({}) differs from the extended topology ({})",
        k_ind, ext.ktilde));

  // Classwise preimage identity behind the identification.
  MorphismClass base_cof =
      class_compose(W.cat, W.dense_monos(k), W.epis());
  MorphismClass lhs = co_preimage(*T.co, base_cof, "U^-1(dns.epi)");
  MorphismClass dns(D, "dns_co");
  for (int f = 0; f < D.mor_count(); ++f) {
    const PshMor& bf = W.mor_data[ctx.base(f)];
    if (!psh_mono(bf)) continue;
    Subobject S = subobject_from_mono(bf);
    if (ctx.closure(D.cod(f), S, ext.ktilde) == full_subobject(*S.of))
      dns.insert(f);
  }
  MorphismClass epi_co = co_preimage(*T.co, W.epis(), "epi_co");
  MorphismClass rhs = class_compose(D, dns, epi_co);
  for (int f = 0; f < D.mor_count(); ++f) {
    if (lhs.contains(f) && !rhs.contains(f))
      rep.fail(fmt("morphism {} is in the preimage class only", f));
    if (rhs.contains(f) && !lhs.contains(f))
      rep.fail(fmt("morphism {} is in the lifted class only", f));
  }
  return rep;
}

}  // namespace facto
