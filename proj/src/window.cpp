#include <algorithm>

#include "facto/presheaf.hpp"

namespace facto {

namespace {

bool advance_digits(std::vector<int>& digits, const std::vector<int>& radix) {
  for (size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

// Every natural transformation P -> Q, in lexicographic component order.
std::vector<std::vector<std::vector<int>>> all_nattrans(const FinCategory& B,
                                                        const Presheaf& P,
                                                        const Presheaf& Q) {
  int n_obj = B.obj_count();
  for (int b = 0; b < n_obj; ++b) {
    long long per = 1;
    for (int e = 0; e < P.card[b]; ++e) {
      per *= std::max(Q.card[b], 1);
      if (per > 1'000'000)
        throw BoundExceeded("transformation space too large");
    }
    if (P.card[b] > 0 && Q.card[b] == 0) return {};  // no map at this object
  }

  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> cur(n_obj);
  std::function<void(int)> rec = [&](int b) {
    if (b == n_obj) {
      out.push_back(cur);
      return;
    }
    std::vector<int> digits(P.card[b], 0);
    std::vector<int> radix(P.card[b], Q.card[b]);
    bool first = true;
    while (first || (P.card[b] > 0 && advance_digits(digits, radix))) {
      first = false;
      cur[b] = digits;
      bool natural = true;
      for (int f = 0; f < B.mor_count() && natural; ++f) {
        int x = B.dom(f), y = B.cod(f);
        if (x > b || y > b) continue;
        for (int e = 0; e < P.card[y] && natural; ++e)
          if (cur[x][P.res[f][e]] != Q.res[f][cur[y][e]]) natural = false;
      }
      if (natural) rec(b + 1);
      if (P.card[b] == 0) break;
    }
  };
  rec(0);
  return out;
}

}  // namespace

// -- window construction ------------------------------------------------------

int ToposWindow::obj_of(const Presheaf& P) const {
  auto it = obj_lookup.find({P.card, P.res});
  return it == obj_lookup.end() ? -1 : it->second;
}

int ToposWindow::mor_of(int src, int dst,
                        const std::vector<std::vector<int>>& comp) const {
  auto it = mor_lookup.find({src, dst, comp});
  return it == mor_lookup.end() ? -1 : it->second;
}

MorphismClass ToposWindow::epis() const {
  MorphismClass c(cat, "epi");
  for (int f = 0; f < cat.mor_count(); ++f)
    if (psh_epi(mor_data[f])) c.insert(f);
  return c;
}

MorphismClass ToposWindow::monos() const {
  MorphismClass c(cat, "mono");
  for (int f = 0; f < cat.mor_count(); ++f)
    if (psh_mono(mor_data[f])) c.insert(f);
  return c;
}

MorphismClass ToposWindow::dense_monos(const LTTopology& k) const {
  MorphismClass c(cat, "dense-mono");
  for (int f = 0; f < cat.mor_count(); ++f)
    if (psh_mono(mor_data[f]) &&
        is_dense(Om, k, subobject_from_mono(mor_data[f])))
      c.insert(f);
  return c;
}

MorphismClass ToposWindow::closed_monos(const LTTopology& k) const {
  MorphismClass c(cat, "closed-mono");
  for (int f = 0; f < cat.mor_count(); ++f)
    if (psh_mono(mor_data[f]) &&
        is_closed(Om, k, subobject_from_mono(mor_data[f])))
      c.insert(f);
  return c;
}

Dfs ToposWindow::image_closure_dfs(const LTTopology& k) const {
  return Dfs{epis(), dense_monos(k), closed_monos(k)};
}

ToposWindow build_window(const FinCategory& B,
                         const std::vector<Presheaf>& seeds,
                         WindowOptions opt) {
  ToposWindow W;
  W.base = &B;
  W.Om = omega(B);
  W.meet = internal_meet(W.Om);

  auto add = [&](Presheaf P) -> int {
    int known = W.obj_of(P);
    if (known >= 0) return known;
    if (static_cast<int>(W.objects.size()) >= opt.max_objects) {
      W.truncated = true;
      return -1;
    }
    int id = static_cast<int>(W.objects.size());
    W.obj_lookup.emplace(std::make_pair(P.card, P.res), id);
    W.objects.push_back(std::move(P));
    return id;
  };

  add(initial_presheaf(B));
  add(terminal_presheaf(B));
  add(W.Om.psh);
  for (const Presheaf& s : seeds) {
    ValidationReport rep = validate_presheaf(s);
    if (!rep.ok())
      throw std::invalid_argument("window seed is not a presheaf: " +
                                  rep.violations.front());
    add(s);
  }

  // Close under canonical subobjects and bounded pointwise products.
  for (size_t i = 0; i < W.objects.size(); ++i) {
    if (opt.with_subobjects) {
      // Copy: `objects` may grow (deque keeps references valid, but the
      // subobject list must be computed against a stable object).
      for (const Subobject& S : all_subobjects(W.objects[i]))
        add(materialize(S));
    }
    if (opt.with_products) {
      for (size_t j = 0; j <= i; ++j) {
        Presheaf prod = product_presheaf(W.objects[i], W.objects[j]);
        if (*std::max_element(prod.card.begin(), prod.card.end()) <=
            opt.max_card)
          add(std::move(prod));
      }
    }
  }

  int n = static_cast<int>(W.objects.size());
  std::vector<int> dom, cod, ident(n, -1);
  long long total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto ts = all_nattrans(B, W.objects[i], W.objects[j]);
      for (auto& comp : ts) {
        int id = static_cast<int>(dom.size());
        if (id >= max_mor_bound())
          throw BoundExceeded("window exceeds the morphism cap");
        dom.push_back(i);
        cod.push_back(j);
        W.mor_lookup.emplace(std::make_tuple(i, j, comp), id);
        W.mor_data.push_back(PshMor{&W.objects[i], &W.objects[j], comp});
      }
      total += static_cast<long long>(ts.size());
    }
  (void)total;

  int m = static_cast<int>(dom.size());
  for (int i = 0; i < n; ++i) {
    ident[i] = W.mor_of(i, i, psh_identity(W.objects[i]).comp);
    if (ident[i] < 0)
      throw InternalDisagreement("identity transformation not enumerated");
  }
  std::vector<int> table(static_cast<size_t>(m) * m, -1);
  for (int g = 0; g < m; ++g)
    for (int f = 0; f < m; ++f) {
      if (cod[f] != dom[g]) continue;
      auto comp = psh_compose(W.mor_data[g], W.mor_data[f]);
      int gf = W.mor_of(dom[f], cod[g], comp);
      if (gf < 0)
        throw InternalDisagreement("composite transformation not enumerated");
      table[static_cast<size_t>(g) * m + f] = gf;
    }

  std::vector<std::string> obj_names(n), mor_names(m);
  for (int i = 0; i < n; ++i)
    obj_names[i] = W.objects[i].label.empty() ? fmt("P{}", i)
                                              : fmt("{}#{}", W.objects[i].label, i);
  for (int f = 0; f < m; ++f) mor_names[f] = fmt("t{}", f);
  W.cat = FinCategory::from_raw(std::move(dom), std::move(cod),
                                std::move(ident), std::move(table),
                                std::move(obj_names), std::move(mor_names));

  W.initial_obj = W.obj_of(initial_presheaf(B));
  W.terminal_obj = W.obj_of(terminal_presheaf(B));
  W.omega_obj = W.obj_of(W.Om.psh);
  W.true_mor = W.mor_of(
      W.terminal_obj, W.omega_obj,
      true_arrow(W.objects[W.terminal_obj], W.Om).comp);
  return W;
}

// -- cartesian dfs ------------------------------------------------------------

namespace {

struct WindowPullback {
  int apex, to_left, to_right;  // legs to dom f / dom g
};

// Pullback of the cospan f : X -> Z <- Y : g, constructed directly as the
// pair subobject of the pointwise product. Absent when the window lacks
// the pair object.
std::optional<WindowPullback> window_pullback(const ToposWindow& W, int f,
                                              int g) {
  int X = W.cat.dom(f), Y = W.cat.dom(g);
  const Presheaf& PX = W.objects[X];
  const Presheaf& PY = W.objects[Y];
  const auto& cf = W.mor_data[f].comp;
  const auto& cg = W.mor_data[g].comp;

  Presheaf prod = product_presheaf(PX, PY);
  Subobject S = empty_subobject(prod);
  for (size_t b = 0; b < S.sel.size(); ++b)
    for (int u = 0; u < PX.card[b]; ++u)
      for (int v = 0; v < PY.card[b]; ++v)
        if (cf[b][u] == cg[b][v]) S.sel[b][u * PY.card[b] + v] = 1;

  Presheaf mat = materialize(S);
  int apex = W.obj_of(mat);
  if (apex < 0) return std::nullopt;

  std::vector<std::vector<int>> left(S.sel.size()), right(S.sel.size());
  for (size_t b = 0; b < S.sel.size(); ++b)
    for (int u = 0; u < PX.card[b]; ++u)
      for (int v = 0; v < PY.card[b]; ++v)
        if (S.sel[b][u * PY.card[b] + v]) {
          left[b].push_back(u);
          right[b].push_back(v);
        }
  int lm = W.mor_of(apex, X, left), rm = W.mor_of(apex, Y, right);
  if (lm < 0 || rm < 0) return std::nullopt;
  return WindowPullback{apex, lm, rm};
}

// Membership of the pulled-back morphism, up to precomposition with an
// apex isomorphism (pullbacks are defined only up to iso).
bool member_up_to_iso(const ToposWindow& W, const MorphismClass& C, int f) {
  if (C.contains(f)) return true;
  for (int phi : W.cat.into(W.cat.dom(f)))
    if (is_iso(W.cat, phi) && C.contains(W.cat.compose(f, phi))) return true;
  return false;
}

void check_stability(const ToposWindow& W, const MorphismClass& C,
                     const std::string& name, ValidationReport& rep) {
  for (int f : C.members())
    for (int g = 0; g < W.cat.mor_count(); ++g) {
      if (W.cat.cod(g) != W.cat.cod(f)) continue;
      auto pb = window_pullback(W, f, g);
      if (!pb) continue;
      if (!member_up_to_iso(W, C, pb->to_right))
        rep.fail(fmt("class {} not stable: pullback of {} along {} gives {}",
                     name, f, g, pb->to_right));
    }
}

}  // namespace

ValidationReport is_cartesian_dfs(const ToposWindow& W, const Dfs& dfs) {
  ValidationReport rep;
  MorphismClass cof = class_compose(W.cat, dfs.J, dfs.E);
  cof.set_label("JE");
  ValidationReport direct;
  check_stability(W, dfs.E, "E", direct);
  check_stability(W, cof, "J.E", direct);
  MorphismClass fib = class_compose(W.cat, dfs.M, dfs.J);
  MorphismClass mono = W.monos();
  for (int f : fib.members())
    if (!mono.contains(f))
      direct.fail(fmt("fibration {} is not a monomorphism", f));

  // Equivalent characterization: right and middle parts are monic and all
  // three classes are pullback-stable.
  ValidationReport alt;
  for (int f : dfs.M.members())
    if (!mono.contains(f)) alt.fail(fmt("morphism {} in M is not mono", f));
  for (int f : dfs.J.members())
    if (!mono.contains(f)) alt.fail(fmt("morphism {} in J is not mono", f));
  check_stability(W, dfs.E, "E", alt);
  check_stability(W, dfs.J, "J", alt);
  check_stability(W, dfs.M, "M", alt);

  rep.merge(direct);
  if (direct.ok() != alt.ok()) {
    rep.fail(fmt(
        "characterizations disagree: pullback/mono form says {}, "
        "classwise form says {}",
        direct.ok() ? "cartesian" : "not cartesian",
        alt.ok() ? "cartesian" : "not cartesian"));
    for (const auto& v : alt.violations) rep.fail("  (classwise) " + v);
  }
  return rep;
}

LTTopology topology_of_dfs(const ToposWindow& W, const Dfs& dfs) {
  ValidationReport gate = is_cartesian_dfs(W, dfs);
  if (!gate.ok())
    throw HypothesisFailed("dfs is not cartesian on the window: " +
                           gate.violations.front());

  DfsFactorization fac = factorize_dfs(W.cat, W.true_mor, dfs);
  const PshMor& m = W.mor_data[fac.m];
  LTTopology k{char_components(W.Om, subobject_from_mono(m))};

  ValidationReport laws = validate_topology(W.Om, W.meet, k);
  if (!laws.ok())
    throw InternalDisagreement(
        "generated endomap violates the topology laws: " +
        laws.violations.front());
  if (!check_bousfield(W.cat, W.image_closure_dfs(k), dfs))
    throw InternalDisagreement(
        "input dfs is not a localization of its generated image/closure dfs");
  return k;
}

// -- topology comparison ------------------------------------------------------

TopologyComparison compare_topologies(const ToposWindow& W,
                                      const LTTopology& k1,
                                      const LTTopology& k2) {
  TopologyComparison out;
  const FinCategory& B = *W.base;

  out.by_meet = true;
  for (int b = 0; b < B.obj_count(); ++b)
    for (int e = 0; e < W.Om.psh.card[b]; ++e)
      if (k1.k[b][e] != W.meet.wedge[b][k1.k[b][e]][k2.k[b][e]])
        out.by_meet = false;

  out.by_sheaves = true;
  for (const Presheaf& P : W.objects)
    if (is_sheaf(W.Om, k2, P) && !is_sheaf(W.Om, k1, P))
      out.by_sheaves = false;

  out.by_closure = true;
  for (const Presheaf& P : W.objects)
    for (const Subobject& S : all_subobjects(P))
      if (!sub_leq(closure_of(W.Om, k1, S), closure_of(W.Om, k2, S)))
        out.by_closure = false;

  out.by_dense = W.dense_monos(k1).subset_of(W.dense_monos(k2));

  MorphismClass cof1 =
      class_compose(W.cat, W.dense_monos(k1), W.epis());
  MorphismClass cof2 =
      class_compose(W.cat, W.dense_monos(k2), W.epis());
  out.by_cof = cof1.subset_of(cof2);

  if (out.by_meet != out.by_sheaves || out.by_meet != out.by_closure ||
      out.by_meet != out.by_dense || out.by_meet != out.by_cof)
    throw InternalDisagreement(
        fmt("ordering characterizations disagree: meet={} sheaves={} "
            "closure={} dense={} cof={}",
            out.by_meet, out.by_sheaves, out.by_closure, out.by_dense,
            out.by_cof));
  out.le = out.by_meet;
  return out;
}

// -- adjunction transfer ------------------------------------------------------

bool functor_preserves_terminal(const ToposWindow& W1, const ToposWindow& W2,
                                const Functor& F) {
  int t2 = F.on_obj(W1.terminal_obj);
  for (int x = 0; x < W2.cat.obj_count(); ++x)
    if (W2.cat.hom(x, t2).size() != 1) return false;
  return true;
}

bool functor_preserves_products(const ToposWindow& W1, const ToposWindow& W2,
                                const Functor& F) {
  int n = W1.cat.obj_count();
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Presheaf prod = product_presheaf(W1.objects[a], W1.objects[b]);
      int pobj = W1.obj_of(prod);
      if (pobj < 0) continue;
      std::vector<std::vector<int>> l(prod.card.size()), r(prod.card.size());
      for (size_t i = 0; i < prod.card.size(); ++i)
        for (int u = 0; u < W1.objects[a].card[i]; ++u)
          for (int v = 0; v < W1.objects[b].card[i]; ++v) {
            l[i].push_back(u);
            r[i].push_back(v);
          }
      int la = W1.mor_of(pobj, a, l), lb = W1.mor_of(pobj, b, r);

      Presheaf prod2 = product_presheaf(W2.objects[F.on_obj(a)],
                                        W2.objects[F.on_obj(b)]);
      int p2 = W2.obj_of(prod2);
      if (p2 < 0) continue;
      std::vector<std::vector<int>> l2(prod2.card.size()),
          r2(prod2.card.size());
      for (size_t i = 0; i < prod2.card.size(); ++i)
        for (int u = 0; u < W2.objects[F.on_obj(a)].card[i]; ++u)
          for (int v = 0; v < W2.objects[F.on_obj(b)].card[i]; ++v) {
            l2[i].push_back(u);
            r2[i].push_back(v);
          }
      int la2 = W2.mor_of(p2, F.on_obj(a), l2),
          lb2 = W2.mor_of(p2, F.on_obj(b), r2);

      bool found = false;
      for (int u : W2.cat.hom(F.on_obj(pobj), p2))
        if (W2.cat.compose(la2, u) == F.on_mor(la) &&
            W2.cat.compose(lb2, u) == F.on_mor(lb) && is_iso(W2.cat, u)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

bool functor_preserves_equalizers(const ToposWindow& W1, const ToposWindow& W2,
                                  const Functor& F) {
  int m = W1.cat.mor_count();
  for (int f = 0; f < m; ++f)
    for (int g = f + 1; g < m; ++g) {
      if (W1.cat.dom(f) != W1.cat.dom(g) || W1.cat.cod(f) != W1.cat.cod(g))
        continue;
      int X = W1.cat.dom(f);
      Subobject E1 = empty_subobject(W1.objects[X]);
      for (size_t b = 0; b < E1.sel.size(); ++b)
        for (size_t e = 0; e < E1.sel[b].size(); ++e)
          E1.sel[b][e] =
              W1.mor_data[f].comp[b][e] == W1.mor_data[g].comp[b][e];
      int eobj = W1.obj_of(materialize(E1));
      if (eobj < 0) continue;
      int e1 = W1.mor_of(eobj, X, inclusion_components(E1));

      int FX = F.on_obj(X);
      Subobject E2 = empty_subobject(W2.objects[FX]);
      for (size_t b = 0; b < E2.sel.size(); ++b)
        for (size_t e = 0; e < E2.sel[b].size(); ++e)
          E2.sel[b][e] = W2.mor_data[F.on_mor(f)].comp[b][e] ==
                         W2.mor_data[F.on_mor(g)].comp[b][e];
      int e2obj = W2.obj_of(materialize(E2));
      if (e2obj < 0) continue;
      int e2 = W2.mor_of(e2obj, FX, inclusion_components(E2));

      bool found = false;
      for (int u : W2.cat.hom(F.on_obj(eobj), e2obj))
        if (W2.cat.compose(e2, u) == F.on_mor(e1) && is_iso(W2.cat, u)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

bool functor_preserves_pullbacks(const ToposWindow& W1, const ToposWindow& W2,
                                 const Functor& F) {
  int m = W1.cat.mor_count();
  for (int f = 0; f < m; ++f)
    for (int g = 0; g < m; ++g) {
      if (W1.cat.cod(f) != W1.cat.cod(g)) continue;
      auto pb1 = window_pullback(W1, f, g);
      if (!pb1) continue;
      auto pb2 = window_pullback(W2, F.on_mor(f), F.on_mor(g));
      if (!pb2) continue;
      bool found = false;
      for (int u : W2.cat.hom(F.on_obj(pb1->apex), pb2->apex))
        if (W2.cat.compose(pb2->to_left, u) == F.on_mor(pb1->to_left) &&
            W2.cat.compose(pb2->to_right, u) == F.on_mor(pb1->to_right) &&
            is_iso(W2.cat, u)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

ContinuityReport continuity_conditions(const ToposWindow& Wsrc,
                                       const ToposWindow& Wdst,
                                       const Functor& G,
                                       const LTTopology& ksrc,
                                       const LTTopology& kdst) {
  ContinuityReport out;

  MorphismClass cof_src =
      class_compose(Wsrc.cat, Wsrc.dense_monos(ksrc), Wsrc.epis());
  MorphismClass cof_dst =
      class_compose(Wdst.cat, Wdst.dense_monos(kdst), Wdst.epis());
  out.cof_preserved = true;
  for (int f : cof_src.members())
    if (!cof_dst.contains(G.on_mor(f))) out.cof_preserved = false;

  out.closure_preserved = true;
  out.closure_continuous = true;
  for (int f = 0; f < Wsrc.cat.mor_count(); ++f) {
    int Bo = Wsrc.cat.cod(f);
    Subobject cls_src =
        closure_of(Wsrc.Om, ksrc, image_subobject(Wsrc.mor_data[f]));
    int cm = Wsrc.mor_of(Wsrc.obj_of(materialize(cls_src)), Bo,
                         inclusion_components(cls_src));
    if (cm < 0) continue;  // window truncated below this subobject
    Subobject g_of_cls = image_subobject(Wdst.mor_data[G.on_mor(cm)]);
    Subobject cls_of_g = closure_of(
        Wdst.Om, kdst, image_subobject(Wdst.mor_data[G.on_mor(f)]));
    if (!(g_of_cls == cls_of_g)) out.closure_preserved = false;
    if (!sub_leq(g_of_cls, cls_of_g)) out.closure_continuous = false;
  }

  int g_true = G.on_mor(Wsrc.true_mor);
  const PshMor& gt = Wdst.mor_data[g_true];
  if (!psh_mono(gt))
    throw NotMono("image of the classifier point is not injective");
  int g_omega = G.on_obj(Wsrc.omega_obj);
  int tau = Wdst.mor_of(g_omega, Wdst.omega_obj,
                        char_components(Wdst.Om, subobject_from_mono(gt)));
  int km_src = Wsrc.mor_of(Wsrc.omega_obj, Wsrc.omega_obj, ksrc.k);
  int km_dst = Wdst.mor_of(Wdst.omega_obj, Wdst.omega_obj, kdst.k);
  int lhs = Wdst.cat.compose(km_dst, tau);
  int rhs = Wdst.cat.compose(tau, G.on_mor(km_src));
  out.classifier_square = lhs >= 0 && lhs == rhs;

  if (out.cof_preserved != out.closure_preserved ||
      out.cof_preserved != out.closure_continuous ||
      out.cof_preserved != out.classifier_square)
    out.report.fail(
        fmt("continuity conditions disagree: cofibrations={} "
            "closure-preserving={} closure-continuous={} classifier={}",
            out.cof_preserved, out.closure_preserved, out.closure_continuous,
            out.classifier_square));
  return out;
}

std::unique_ptr<WindowAdjunction> constant_sections_adjunction(
    const ToposWindow& WS, const ToposWindow& W) {
  if (WS.base->obj_count() != 1)
    throw std::invalid_argument(
        "the set-side window must live over the one-object base");
  const FinCategory& B = *W.base;

  // Points of every presheaf-window object, in enumeration order.
  std::vector<std::vector<std::vector<std::vector<int>>>> points(
      W.cat.obj_count());
  for (int i = 0; i < W.cat.obj_count(); ++i)
    points[i] = all_nattrans(B, W.objects[W.terminal_obj], W.objects[i]);

  auto set_obj = [&](int n) {
    Presheaf S;
    S.base = WS.base;
    S.card = {n};
    S.res.resize(WS.base->mor_count());
    for (int x = 0; x < n; ++x) S.res[WS.base->identity(0)].push_back(x);
    int id = WS.obj_of(S);
    if (id < 0)
      throw BoundExceeded(
          fmt("set window lacks the {}-element object", n));
    return id;
  };
  auto const_obj = [&](int n) {
    Presheaf P;
    P.base = &B;
    P.card.assign(B.obj_count(), n);
    P.res.resize(B.mor_count());
    for (int f = 0; f < B.mor_count(); ++f)
      for (int x = 0; x < n; ++x) P.res[f].push_back(x);
    int id = W.obj_of(P);
    if (id < 0)
      throw BoundExceeded(
          fmt("presheaf window lacks the {}-element constant object", n));
    return id;
  };

  auto out = std::make_unique<WindowAdjunction>();
  Functor& L = out->left;  // constant presheaf
  L.source = &WS.cat;
  L.target = &W.cat;
  for (int i = 0; i < WS.cat.obj_count(); ++i)
    L.obj_map.push_back(const_obj(WS.objects[i].card[0]));
  for (int g = 0; g < WS.cat.mor_count(); ++g) {
    std::vector<std::vector<int>> comp(B.obj_count(),
                                       WS.mor_data[g].comp[0]);
    L.mor_map.push_back(
        W.mor_of(L.obj_map[WS.cat.dom(g)], L.obj_map[WS.cat.cod(g)], comp));
    if (L.mor_map.back() < 0)
      throw InternalDisagreement("constant transformation not enumerated");
  }

  Functor& R = out->right;  // global sections
  R.source = &W.cat;
  R.target = &WS.cat;
  for (int i = 0; i < W.cat.obj_count(); ++i)
    R.obj_map.push_back(set_obj(static_cast<int>(points[i].size())));
  for (int f = 0; f < W.cat.mor_count(); ++f) {
    int X = W.cat.dom(f), Y = W.cat.cod(f);
    std::vector<int> table;
    for (const auto& p : points[X]) {
      std::vector<std::vector<int>> q(B.obj_count());
      for (int b = 0; b < B.obj_count(); ++b)
        q[b] = {W.mor_data[f].comp[b][p[b][0]]};
      auto it = std::find(points[Y].begin(), points[Y].end(), q);
      if (it == points[Y].end())
        throw InternalDisagreement("image of a point is not a point");
      table.push_back(static_cast<int>(it - points[Y].begin()));
    }
    R.mor_map.push_back(
        WS.mor_of(R.obj_map[X], R.obj_map[Y], {table}));
    if (R.mor_map.back() < 0)
      throw InternalDisagreement("section map not enumerated");
  }

  out->rl = compose_functors(R, L);
  out->lr = compose_functors(L, R);
  out->id_src = identity_functor(WS.cat);
  out->id_dst = identity_functor(W.cat);

  out->unit.source = &out->id_src;
  out->unit.target = &out->rl;
  for (int i = 0; i < WS.cat.obj_count(); ++i) {
    int n = WS.objects[i].card[0];
    int ci = L.obj_map[i];
    std::vector<int> table;
    for (int s = 0; s < n; ++s) {
      std::vector<std::vector<int>> p(B.obj_count(),
                                      std::vector<int>{s});
      auto it = std::find(points[ci].begin(), points[ci].end(), p);
      if (it == points[ci].end())
        throw InternalDisagreement("constant point not enumerated");
      table.push_back(static_cast<int>(it - points[ci].begin()));
    }
    out->unit.component.push_back(
        WS.mor_of(i, out->rl.on_obj(i), {table}));
    if (out->unit.component.back() < 0)
      throw InternalDisagreement("unit component not enumerated");
  }

  out->counit.source = &out->lr;
  out->counit.target = &out->id_dst;
  for (int i = 0; i < W.cat.obj_count(); ++i) {
    std::vector<std::vector<int>> comp(B.obj_count());
    for (int b = 0; b < B.obj_count(); ++b)
      for (const auto& p : points[i]) comp[b].push_back(p[b][0]);
    out->counit.component.push_back(
        W.mor_of(out->lr.on_obj(i), i, comp));
    if (out->counit.component.back() < 0)
      throw InternalDisagreement("counit component not enumerated");
  }

  out->adj = Adjunction{out->left, out->right, out->unit, out->counit};
  ValidationReport rep = validate_adjunction(out->adj);
  if (!rep.ok())
    throw InternalDisagreement(
        "constant/sections adjunction fails validation: " +
        rep.violations.front());
  return out;
}

ToposAdjunctionReport check_topos_adjunction(const ToposWindow& W1,
                                             const ToposWindow& W2,
                                             const Adjunction& adj,
                                             const Dfs& dfs1,
                                             const Dfs& dfs2) {
  ToposAdjunctionReport out;
  if (!validate_adjunction(adj).ok())
    throw HypothesisFailed("adjunction data is invalid");
  ValidationReport c1 = is_cartesian_dfs(W1, dfs1);
  if (!c1.ok())
    throw HypothesisFailed("source dfs is not cartesian: " +
                           c1.violations.front());
  ValidationReport c2 = is_cartesian_dfs(W2, dfs2);
  if (!c2.ok())
    throw HypothesisFailed("target dfs is not cartesian: " +
                           c2.violations.front());
  ValidationReport q = check_quillen_adjunction(adj, dfs1, dfs2);
  if (!q.ok())
    throw HypothesisFailed("adjunction is not Quillen: " +
                           q.violations.front());

  out.k1 = topology_of_dfs(W1, dfs1);
  out.k2 = topology_of_dfs(W2, dfs2);
  const Functor& F = adj.left;
  const Functor& G = adj.right;

  out.geometric = functor_preserves_terminal(W1, W2, F) &&
                  functor_preserves_products(W1, W2, F) &&
                  functor_preserves_equalizers(W1, W2, F);
  if (out.geometric) {
    for (int o = 0; o < W2.cat.obj_count(); ++o) {
      const Presheaf& P2 = W2.objects[o];
      const Presheaf& P1 = W1.objects[G.on_obj(o)];
      if (is_sheaf(W2.Om, out.k2, P2) && !is_sheaf(W1.Om, out.k1, P1))
        out.report.fail(
            fmt("image of sheaf object {} is not a sheaf", o));
      if (is_separated(W2.Om, out.k2, P2) &&
          !is_separated(W1.Om, out.k1, P1))
        out.report.fail(
            fmt("image of separated object {} is not separated", o));
    }
  }

  // Four renditions of continuity, evaluated independently.
  ContinuityReport cont = continuity_conditions(W2, W1, G, out.k2, out.k1);
  out.cof_preserved = cont.cof_preserved;
  out.closure_preserved = cont.closure_preserved;
  out.closure_continuous = cont.closure_continuous;
  out.classifier_square = cont.classifier_square;
  out.report.merge(cont.report);
  return out;
}

}  // namespace facto
