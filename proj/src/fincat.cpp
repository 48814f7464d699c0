#include "facto/fincat.hpp"

#include <algorithm>
#include <cstdlib>

namespace facto {

int max_mor_bound() {
  static int bound = [] {
    if (const char* env = std::getenv("FACTO_MAX_MOR")) {
      int v = std::atoi(env);
      if (v > 0) return v;
    }
    return 20000;
  }();
  return bound;
}

int FinCategory::add_object(std::string name) {
  int a = obj_count();
  if (name.empty()) name = "o" + std::to_string(a);
  obj_name_.push_back(std::move(name));
  // identity morphism
  dom_.push_back(a);
  cod_.push_back(a);
  mor_name_.push_back("id_" + obj_name_.back());
  identity_.push_back(mor_count() - 1);
  finalized_ = false;
  return a;
}

int FinCategory::add_morphism(int d, int c, std::string name) {
  if (d < 0 || d >= obj_count() || c < 0 || c >= obj_count())
    throw UnknownId("add_morphism: unknown object id");
  if (mor_count() >= max_mor_bound())
    throw BoundExceeded(fmt("morphism bound {} exceeded", max_mor_bound()));
  dom_.push_back(d);
  cod_.push_back(c);
  if (name.empty()) name = "m" + std::to_string(mor_count() - 1);
  mor_name_.push_back(std::move(name));
  finalized_ = false;
  return mor_count() - 1;
}

void FinCategory::set_compose(int g, int f, int gf) {
  int m = mor_count();
  if (g < 0 || g >= m || f < 0 || f >= m || gf < 0 || gf >= m)
    throw UnknownId("set_compose: unknown morphism id");
  if (table_.size() != static_cast<size_t>(m) * m) {
    // Rebuild preserving earlier entries.
    std::vector<int> fresh(static_cast<size_t>(m) * m, -1);
    if (!table_.empty()) {
      size_t old = pending_table_dim_;
      for (size_t gg = 0; gg < old; ++gg)
        for (size_t ff = 0; ff < old; ++ff)
          fresh[gg * m + ff] = table_[gg * old + ff];
    }
    table_ = std::move(fresh);
    pending_table_dim_ = static_cast<size_t>(m);
  }
  table_[static_cast<size_t>(g) * m + f] = gf;
  finalized_ = false;
}

void FinCategory::finalize() {
  size_t m = static_cast<size_t>(mor_count());
  if (static_cast<long long>(m) > max_mor_bound())
    throw BoundExceeded(fmt("morphism bound {} exceeded", max_mor_bound()));
  if (table_.size() != m * m) {
    std::vector<int> fresh(m * m, -1);
    size_t old = pending_table_dim_;
    for (size_t g = 0; g < old; ++g)
      for (size_t f = 0; f < old; ++f)
        fresh[g * m + f] = table_[g * old + f];
    table_ = std::move(fresh);
    pending_table_dim_ = m;
  }
  // Identity composites default to the obvious values unless explicitly set.
  for (int f = 0; f < mor_count(); ++f) {
    int il = identity_[cod_[f]], ir = identity_[dom_[f]];
    if (table_[static_cast<size_t>(il) * m + f] < 0)
      table_[static_cast<size_t>(il) * m + f] = f;
    if (table_[static_cast<size_t>(f) * m + ir] < 0)
      table_[static_cast<size_t>(f) * m + ir] = f;
  }
  size_t n = static_cast<size_t>(obj_count());
  hom_.assign(n * n, {});
  out_.assign(n, {});
  in_.assign(n, {});
  for (int f = 0; f < mor_count(); ++f) {
    hom_[static_cast<size_t>(dom_[f]) * n + cod_[f]].push_back(f);
    out_[dom_[f]].push_back(f);
    in_[cod_[f]].push_back(f);
  }
  finalized_ = true;
}

int FinCategory::find_obj(const std::string& name) const {
  for (int a = 0; a < obj_count(); ++a)
    if (obj_name_[a] == name) return a;
  return -1;
}

int FinCategory::find_mor(const std::string& name) const {
  for (int f = 0; f < mor_count(); ++f)
    if (mor_name_[f] == name) return f;
  return -1;
}

ValidationReport validate_category(const FinCategory& C) {
  ValidationReport rep;
  int m = C.mor_count();
  for (int f = 0; f < m; ++f) {
    for (int g = 0; g < m; ++g) {
      int gf = C.compose(g, f);
      if (C.composable(g, f)) {
        if (gf < 0) {
          rep.fail(fmt("missing composite {}∘{}", C.mor_name(g),
                               C.mor_name(f)));
        } else if (C.dom(gf) != C.dom(f) || C.cod(gf) != C.cod(g)) {
          rep.fail(fmt("composite {}∘{} has wrong endpoints",
                               C.mor_name(g), C.mor_name(f)));
        }
      } else if (gf >= 0) {
        rep.fail(fmt("non-composable pair {}∘{} has an entry",
                             C.mor_name(g), C.mor_name(f)));
      }
    }
  }
  for (int f = 0; f < m; ++f) {
    int il = C.identity(C.cod(f)), ir = C.identity(C.dom(f));
    if (C.compose(il, f) != f)
      rep.fail(fmt("identity law at {} (left)", C.mor_name(f)));
    if (C.compose(f, ir) != f)
      rep.fail(fmt("identity law at {} (right)", C.mor_name(f)));
  }
  // Associativity over all composable triples.
  for (int f = 0; f < m; ++f)
    for (int g : C.out_of(C.cod(f)))
      for (int h : C.out_of(C.cod(g))) {
        int gf = C.compose(g, f), hg = C.compose(h, g);
        if (gf < 0 || hg < 0) continue;
        int l = C.compose(h, gf), r = C.compose(hg, f);
        if (l != r)
          rep.fail(fmt("associativity fails at ({},{},{})",
                               C.mor_name(h), C.mor_name(g), C.mor_name(f)));
      }
  return rep;
}

bool is_mono(const FinCategory& C, int f) {
  if (f < 0 || f >= C.mor_count()) throw UnknownId("is_mono: unknown morphism");
  int a = C.dom(f);
  for (int x = 0; x < C.obj_count(); ++x) {
    const auto& par = C.hom(x, a);
    for (size_t i = 0; i < par.size(); ++i)
      for (size_t j = i + 1; j < par.size(); ++j)
        if (C.compose(f, par[i]) == C.compose(f, par[j])) return false;
  }
  return true;
}

bool is_epi(const FinCategory& C, int f) {
  if (f < 0 || f >= C.mor_count()) throw UnknownId("is_epi: unknown morphism");
  int b = C.cod(f);
  for (int x = 0; x < C.obj_count(); ++x) {
    const auto& par = C.hom(b, x);
    for (size_t i = 0; i < par.size(); ++i)
      for (size_t j = i + 1; j < par.size(); ++j)
        if (C.compose(par[i], f) == C.compose(par[j], f)) return false;
  }
  return true;
}

std::optional<int> inverse_of(const FinCategory& C, int f) {
  if (f < 0 || f >= C.mor_count())
    throw UnknownId("inverse_of: unknown morphism");
  int ida = C.identity(C.dom(f)), idb = C.identity(C.cod(f));
  for (int g : C.hom(C.cod(f), C.dom(f)))
    if (C.compose(g, f) == ida && C.compose(f, g) == idb) return g;
  return std::nullopt;
}

bool is_iso(const FinCategory& C, int f) { return inverse_of(C, f).has_value(); }

FinCategory FinCategory::from_raw(std::vector<int> dom, std::vector<int> cod,
                                  std::vector<int> identity,
                                  std::vector<int> table,
                                  std::vector<std::string> obj_names,
                                  std::vector<std::string> mor_names) {
  FinCategory c;
  size_t m = dom.size();
  if (cod.size() != m || table.size() != m * m)
    throw std::invalid_argument("from_raw: inconsistent table sizes");
  c.dom_ = std::move(dom);
  c.cod_ = std::move(cod);
  c.identity_ = std::move(identity);
  c.table_ = std::move(table);
  c.pending_table_dim_ = m;
  if (obj_names.empty())
    for (size_t a = 0; a < c.identity_.size(); ++a)
      obj_names.push_back("o" + std::to_string(a));
  if (mor_names.empty())
    for (size_t f = 0; f < m; ++f) mor_names.push_back("m" + std::to_string(f));
  c.obj_name_ = std::move(obj_names);
  c.mor_name_ = std::move(mor_names);
  c.finalize();
  return c;
}

FinCategory opposite(const FinCategory& C) {
  size_t m = static_cast<size_t>(C.mor_count());
  std::vector<int> dom(m), cod(m), table(m * m, -1), identity(C.obj_count());
  std::vector<std::string> on, mn;
  for (size_t f = 0; f < m; ++f) {
    dom[f] = C.cod(static_cast<int>(f));
    cod[f] = C.dom(static_cast<int>(f));
    mn.push_back(C.mor_name(static_cast<int>(f)));
  }
  for (int a = 0; a < C.obj_count(); ++a) {
    identity[a] = C.identity(a);
    on.push_back(C.obj_name(a));
  }
  for (size_t g = 0; g < m; ++g)
    for (size_t f = 0; f < m; ++f)
      table[f * m + g] = C.compose(static_cast<int>(g), static_cast<int>(f));
  return FinCategory::from_raw(std::move(dom), std::move(cod),
                               std::move(identity), std::move(table),
                               std::move(on), std::move(mn));
}

// -- functors ----------------------------------------------------------------

Functor identity_functor(const FinCategory& C) {
  Functor F;
  F.source = &C;
  F.target = &C;
  F.obj_map.resize(C.obj_count());
  F.mor_map.resize(C.mor_count());
  for (int a = 0; a < C.obj_count(); ++a) F.obj_map[a] = a;
  for (int f = 0; f < C.mor_count(); ++f) F.mor_map[f] = f;
  return F;
}

Functor compose_functors(const Functor& G, const Functor& F) {
  Functor H;
  H.source = F.source;
  H.target = G.target;
  H.partial = F.partial || G.partial;
  H.obj_map.resize(F.obj_map.size());
  H.mor_map.resize(F.mor_map.size());
  for (size_t a = 0; a < F.obj_map.size(); ++a) {
    int fa = F.obj_map[a];
    H.obj_map[a] = fa < 0 ? -1 : G.obj_map[fa];
  }
  for (size_t f = 0; f < F.mor_map.size(); ++f) {
    int ff = F.mor_map[f];
    H.mor_map[f] = ff < 0 ? -1 : G.mor_map[ff];
  }
  return H;
}

ValidationReport validate_functor(const Functor& F) {
  ValidationReport rep;
  const FinCategory& C = *F.source;
  const FinCategory& D = *F.target;
  if (static_cast<int>(F.obj_map.size()) != C.obj_count() ||
      static_cast<int>(F.mor_map.size()) != C.mor_count()) {
    rep.fail("functor maps have wrong arity");
    return rep;
  }
  for (int f = 0; f < C.mor_count(); ++f) {
    if (!F.mor_defined(f)) {
      if (!F.partial) rep.fail(fmt("undefined at {}", C.mor_name(f)));
      continue;
    }
    if (!F.obj_defined(C.dom(f)) || !F.obj_defined(C.cod(f))) {
      rep.fail(fmt("morphism {} defined but an endpoint is not",
                           C.mor_name(f)));
      continue;
    }
    int ff = F.on_mor(f);
    if (D.dom(ff) != F.on_obj(C.dom(f)) || D.cod(ff) != F.on_obj(C.cod(f)))
      rep.fail(fmt("dom/cod not preserved at {}", C.mor_name(f)));
  }
  for (int a = 0; a < C.obj_count(); ++a) {
    if (!F.obj_defined(a)) {
      if (!F.partial) rep.fail(fmt("undefined at object {}", C.obj_name(a)));
      continue;
    }
    if (F.mor_defined(C.identity(a)) &&
        F.on_mor(C.identity(a)) != D.identity(F.on_obj(a)))
      rep.fail(fmt("identity not preserved at {}", C.obj_name(a)));
  }
  for (int f = 0; f < C.mor_count(); ++f)
    for (int g : C.out_of(C.cod(f))) {
      int gf = C.compose(g, f);
      if (gf < 0) continue;
      if (!F.mor_defined(f) || !F.mor_defined(g)) continue;
      if (!F.mor_defined(gf)) {
        rep.fail(fmt("composite {}∘{} defined pointwise but not as a whole",
                             C.mor_name(g), C.mor_name(f)));
        continue;
      }
      if (D.compose(F.on_mor(g), F.on_mor(f)) != F.on_mor(gf))
        rep.fail(fmt("composition not preserved at {}∘{}",
                             C.mor_name(g), C.mor_name(f)));
    }
  return rep;
}

ValidationReport validate_nattrans(const NatTrans& t) {
  ValidationReport rep;
  const Functor& F = *t.source;
  const Functor& G = *t.target;
  const FinCategory& C = *F.source;
  const FinCategory& D = *F.target;
  if (static_cast<int>(t.component.size()) != C.obj_count()) {
    rep.fail("component list has wrong arity");
    return rep;
  }
  for (int a = 0; a < C.obj_count(); ++a) {
    if (!t.defined_at(a)) continue;
    if (!F.obj_defined(a) || !G.obj_defined(a)) {
      rep.fail(fmt("component at {} but functor undefined there",
                           C.obj_name(a)));
      continue;
    }
    int c = t.at(a);
    if (D.dom(c) != F.on_obj(a) || D.cod(c) != G.on_obj(a))
      rep.fail(fmt("component at {} has wrong endpoints", C.obj_name(a)));
  }
  for (int f = 0; f < C.mor_count(); ++f) {
    int a = C.dom(f), b = C.cod(f);
    if (!t.defined_at(a) || !t.defined_at(b)) continue;
    if (!F.mor_defined(f) || !G.mor_defined(f)) continue;
    if (D.compose(t.at(b), F.on_mor(f)) != D.compose(G.on_mor(f), t.at(a)))
      rep.fail(fmt("naturality fails at {}", C.mor_name(f)));
  }
  return rep;
}

ValidationReport validate_adjunction(const Adjunction& adj) {
  ValidationReport rep;
  rep.merge(validate_functor(adj.left));
  rep.merge(validate_functor(adj.right));
  rep.merge(validate_nattrans(adj.unit));
  rep.merge(validate_nattrans(adj.counit));
  if (!rep.ok()) return rep;
  const FinCategory& C = *adj.left.source;
  const FinCategory& D = *adj.left.target;
  // Triangle identities: (εF)(Fη) = 1_F  and  (Gε)(ηG) = 1_G.
  for (int a = 0; a < C.obj_count(); ++a) {
    if (!adj.left.obj_defined(a) || !adj.unit.defined_at(a)) continue;
    int fa = adj.left.on_obj(a);
    if (!adj.counit.defined_at(fa) || !adj.left.mor_defined(adj.unit.at(a)))
      continue;
    int comp = D.compose(adj.counit.at(fa), adj.left.on_mor(adj.unit.at(a)));
    if (comp != D.identity(fa))
      rep.fail(fmt("left triangle identity fails at {}", C.obj_name(a)));
  }
  for (int x = 0; x < D.obj_count(); ++x) {
    if (!adj.right.obj_defined(x) || !adj.counit.defined_at(x)) continue;
    int gx = adj.right.on_obj(x);
    if (!adj.unit.defined_at(gx) || !adj.right.mor_defined(adj.counit.at(x)))
      continue;
    int comp = C.compose(adj.right.on_mor(adj.counit.at(x)), adj.unit.at(gx));
    if (comp != C.identity(gx))
      rep.fail(fmt("right triangle identity fails at {}", D.obj_name(x)));
  }
  return rep;
}

// -- (co)limits --------------------------------------------------------------

bool is_cone(const FinCategory& C, const Diagram& D, const Cone& c) {
  const FinCategory& S = *D.shape;
  for (int i = 0; i < S.obj_count(); ++i) {
    int leg = c.legs[i];
    if (C.dom(leg) != c.apex || C.cod(leg) != D.functor.on_obj(i)) return false;
  }
  for (int u = 0; u < S.mor_count(); ++u) {
    int i = S.dom(u), j = S.cod(u);
    if (C.compose(D.functor.on_mor(u), c.legs[i]) != c.legs[j]) return false;
  }
  return true;
}

bool is_cocone(const FinCategory& C, const Diagram& D, const Cone& c) {
  const FinCategory& S = *D.shape;
  for (int i = 0; i < S.obj_count(); ++i) {
    int leg = c.legs[i];
    if (C.cod(leg) != c.apex || C.dom(leg) != D.functor.on_obj(i)) return false;
  }
  for (int u = 0; u < S.mor_count(); ++u) {
    int i = S.dom(u), j = S.cod(u);
    if (C.compose(c.legs[j], D.functor.on_mor(u)) != c.legs[i]) return false;
  }
  return true;
}

namespace {

std::vector<Cone> enumerate_cones(const FinCategory& C, const Diagram& D) {
  const FinCategory& S = *D.shape;
  std::vector<Cone> cones;
  int n = S.obj_count();
  for (int apex = 0; apex < C.obj_count(); ++apex) {
    // Cartesian product of hom-sets, pruned by the cone condition at the end.
    std::vector<int> legs(n, -1);
    auto rec = [&](auto&& self, int i) -> void {
      if (i == n) {
        Cone c{apex, legs};
        if (is_cone(C, D, c)) cones.push_back(std::move(c));
        return;
      }
      for (int leg : C.hom(apex, D.functor.on_obj(i))) {
        legs[i] = leg;
        self(self, i + 1);
      }
      legs[i] = -1;
    };
    rec(rec, 0);
  }
  return cones;
}

bool is_limiting(const FinCategory& C, const std::vector<Cone>& cones,
                 const Cone& cand) {
  for (const Cone& other : cones) {
    int count = 0;
    for (int med : C.hom(other.apex, cand.apex)) {
      bool ok = true;
      for (size_t i = 0; i < cand.legs.size() && ok; ++i)
        if (C.compose(cand.legs[i], med) != other.legs[i]) ok = false;
      if (ok && ++count > 1) break;
    }
    if (count != 1) return false;
  }
  return true;
}

}  // namespace

std::vector<Cone> all_limit_cones(const FinCategory& C, const Diagram& D) {
  std::vector<Cone> cones = enumerate_cones(C, D);
  std::sort(cones.begin(), cones.end());
  std::vector<Cone> out;
  for (const Cone& c : cones)
    if (is_limiting(C, cones, c)) out.push_back(c);
  return out;
}

std::optional<Cone> compute_limit(const FinCategory& C, const Diagram& D) {
  std::vector<Cone> cones = enumerate_cones(C, D);
  std::sort(cones.begin(), cones.end());
  for (const Cone& c : cones)
    if (is_limiting(C, cones, c)) return c;
  return std::nullopt;
}

std::optional<Cone> compute_colimit(const FinCategory& C, const Diagram& D) {
  // A colimit in C is a limit in C^op. Morphism ids are preserved by
  // opposite(), so legs translate back unchanged.
  FinCategory Cop = opposite(C);
  FinCategory Sop = opposite(*D.shape);
  Diagram Dop;
  Dop.shape = &Sop;
  Dop.functor = D.functor;
  Dop.functor.source = &Sop;
  Dop.functor.target = &Cop;
  auto lim = compute_limit(Cop, Dop);
  if (!lim) return std::nullopt;
  return lim;
}

std::optional<int> terminal_object(const FinCategory& C) {
  for (int t = 0; t < C.obj_count(); ++t) {
    bool ok = true;
    for (int a = 0; a < C.obj_count() && ok; ++a)
      if (C.hom(a, t).size() != 1) ok = false;
    if (ok) return t;
  }
  return std::nullopt;
}

std::optional<int> initial_object(const FinCategory& C) {
  for (int t = 0; t < C.obj_count(); ++t) {
    bool ok = true;
    for (int a = 0; a < C.obj_count() && ok; ++a)
      if (C.hom(t, a).size() != 1) ok = false;
    if (ok) return t;
  }
  return std::nullopt;
}

namespace {

FinCategory cospan_shape() {
  FinCategory S;
  int x = S.add_object("x"), y = S.add_object("y"), z = S.add_object("z");
  S.add_morphism(x, z, "l");
  S.add_morphism(y, z, "r");
  S.finalize();
  return S;
}

}  // namespace

std::optional<PullbackResult> compute_pullback(const FinCategory& C, int f,
                                               int g) {
  if (C.cod(f) != C.cod(g)) return std::nullopt;
  FinCategory S = cospan_shape();
  Diagram D;
  D.shape = &S;
  D.functor.source = &S;
  D.functor.target = &C;
  D.functor.obj_map = {C.dom(f), C.dom(g), C.cod(f)};
  D.functor.mor_map.assign(S.mor_count(), -1);
  D.functor.mor_map[S.identity(0)] = C.identity(C.dom(f));
  D.functor.mor_map[S.identity(1)] = C.identity(C.dom(g));
  D.functor.mor_map[S.identity(2)] = C.identity(C.cod(f));
  D.functor.mor_map[S.find_mor("l")] = f;
  D.functor.mor_map[S.find_mor("r")] = g;
  auto lim = compute_limit(C, D);
  if (!lim) return std::nullopt;
  return PullbackResult{lim->apex, lim->legs[0], lim->legs[1]};
}

std::optional<PullbackResult> compute_product(const FinCategory& C, int a,
                                              int b) {
  FinCategory S;
  S.add_object("x");
  S.add_object("y");
  S.finalize();
  Diagram D;
  D.shape = &S;
  D.functor.source = &S;
  D.functor.target = &C;
  D.functor.obj_map = {a, b};
  D.functor.mor_map = {C.identity(a), C.identity(b)};
  auto lim = compute_limit(C, D);
  if (!lim) return std::nullopt;
  return PullbackResult{lim->apex, lim->legs[0], lim->legs[1]};
}

std::optional<int> compute_equalizer(const FinCategory& C, int f, int g) {
  if (C.dom(f) != C.dom(g) || C.cod(f) != C.cod(g)) return std::nullopt;
  FinCategory S;
  int x = S.add_object("x"), y = S.add_object("y");
  S.add_morphism(x, y, "f");
  S.add_morphism(x, y, "g");
  S.finalize();
  Diagram D;
  D.shape = &S;
  D.functor.source = &S;
  D.functor.target = &C;
  D.functor.obj_map = {C.dom(f), C.cod(f)};
  D.functor.mor_map.assign(S.mor_count(), -1);
  D.functor.mor_map[S.identity(0)] = C.identity(C.dom(f));
  D.functor.mor_map[S.identity(1)] = C.identity(C.cod(f));
  D.functor.mor_map[S.find_mor("f")] = f;
  D.functor.mor_map[S.find_mor("g")] = g;
  auto lim = compute_limit(C, D);
  if (!lim) return std::nullopt;
  return lim->legs[0];
}

std::optional<int> compute_coequalizer(const FinCategory& C, int f, int g) {
  if (C.dom(f) != C.dom(g) || C.cod(f) != C.cod(g)) return std::nullopt;
  FinCategory S;
  int x = S.add_object("x"), y = S.add_object("y");
  S.add_morphism(x, y, "f");
  S.add_morphism(x, y, "g");
  S.finalize();
  Diagram D;
  D.shape = &S;
  D.functor.source = &S;
  D.functor.target = &C;
  D.functor.obj_map = {C.dom(f), C.cod(f)};
  D.functor.mor_map.assign(S.mor_count(), -1);
  D.functor.mor_map[S.identity(0)] = C.identity(C.dom(f));
  D.functor.mor_map[S.identity(1)] = C.identity(C.cod(f));
  D.functor.mor_map[S.find_mor("f")] = f;
  D.functor.mor_map[S.find_mor("g")] = g;
  auto colim = compute_colimit(C, D);
  if (!colim) return std::nullopt;
  return colim->legs[1];
}

}  // namespace facto
