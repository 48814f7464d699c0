#include <chrono>
#include <functional>

#include "facto/speclang.hpp"

// Command driver: every engine check exposed over a loaded document, with
// deterministic machine reports and replayable structured witnesses.

namespace facto::spec {

namespace {

constexpr int kWitnessCap = 5;  // per witness kind, lowest ids first

using Clock = std::chrono::steady_clock;

Report guarded(const std::string& command,
               const std::function<void(Report&)>& body) {
  Report r;
  r.command = command;
  auto t0 = Clock::now();
  try {
    body(r);
  } catch (const HypothesisFailed& e) {
    r.verdict = "hypothesis-failed";
    r.details.push_back(e.what());
  } catch (const NotCartesian& e) {
    r.verdict = "hypothesis-failed";
    r.details.push_back(e.what());
  } catch (const BoundExceeded& e) {
    r.verdict = "not-applicable";
    r.details.push_back(e.what());
  }
  r.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    Clock::now() - t0)
                    .count();
  return r;
}

void apply(Report& r, const ValidationReport& v) {
  if (!v.ok()) r.verdict = "fail";
  for (const auto& s : v.violations) r.details.push_back(s);
}

// -- resolution helpers (UsageError on bad names) -----------------------------

const SpecDocument::ClassEntry& need_class(const SpecDocument& doc,
                                           const std::string& name) {
  int i = doc.class_index(name);
  if (i < 0) throw UsageError(fmt("unknown class '{}'", name));
  return doc.classes[i];
}

const SpecDocument::DfsEntry& need_dfs(const SpecDocument& doc,
                                       const std::string& name) {
  int i = doc.dfs_index(name);
  if (i < 0) throw UsageError(fmt("unknown dfs '{}'", name));
  return doc.dfss[i];
}

const SpecDocument::QfsEntry& need_qfs(const SpecDocument& doc,
                                       const std::string& name) {
  int i = doc.qfs_index(name);
  if (i < 0) throw UsageError(fmt("unknown qfs '{}'", name));
  return doc.qfss[i];
}

const SpecDocument::MonadEntry& need_monad(const SpecDocument& doc,
                                           const std::string& name) {
  int i = doc.monad_index(name);
  if (i < 0) throw UsageError(fmt("unknown monad '{}'", name));
  return doc.monads[i];
}

const SpecDocument::ComonadEntry& need_comonad(const SpecDocument& doc,
                                               const std::string& name) {
  int i = doc.comonad_index(name);
  if (i < 0) throw UsageError(fmt("unknown comonad '{}'", name));
  return doc.comonads[i];
}

const SpecDocument::WindowEntry& need_window_entry(const SpecDocument& doc,
                                                   const std::string& name) {
  for (const auto& w : doc.windows)
    if (w.name == name) return w;
  throw UsageError(fmt("unknown window '{}'", name));
}

const SpecDocument::WindowComonadEntry& need_wcomonad(
    const SpecDocument& doc, const std::string& name) {
  int i = doc.wcomonad_index(name);
  if (i < 0) throw UsageError(fmt("unknown comonad-product '{}'", name));
  return doc.wcomonads[i];
}

const FinCategory& need_catlike(const SpecDocument& doc,
                                const std::string& name,
                                std::string* desc = nullptr) {
  const FinCategory* c = doc.find_catlike(name, desc);
  if (!c) throw UsageError(fmt("unknown category '{}'", name));
  return *c;
}

int need_mor(const SpecDocument& doc, const FinCategory& C,
             const std::string& token) {
  int f = doc.resolve_mor(C, token);
  if (f < 0) throw UsageError(fmt("unknown morphism '{}'", token));
  return f;
}

std::string window_desc(const SpecDocument& doc, const std::string& catref) {
  std::string d;
  need_catlike(doc, catref, &d);
  return d;
}

LTTopology need_topology(const ToposWindow& W, int i,
                         std::vector<LTTopology>* all = nullptr) {
  auto ks = enumerate_topologies(W.Om, W.meet);
  if (i < 0 || i >= static_cast<int>(ks.size()))
    throw UsageError(
        fmt("topology index {} out of range (the window has {})", i,
            ks.size()));
  if (all) *all = ks;
  return ks[i];
}

// -- structured witnesses -----------------------------------------------------

void square_witnesses(json& out, const FinCategory& C,
                      const std::string& catref, const MorphismClass& L,
                      const MorphismClass& R, bool expect_unique) {
  int emitted = 0;
  for (int f : L.members()) {
    for (int g : R.members()) {
      for (int u : C.hom(C.dom(f), C.dom(g))) {
        for (int v : C.hom(C.cod(f), C.cod(g))) {
          if (C.compose(g, u) != C.compose(v, f)) continue;
          LiftReport lr = lift_fillers(C, f, g, u, v);
          int n = static_cast<int>(lr.fillers.size());
          bool bad = expect_unique ? n != 1 : n == 0;
          if (!bad) continue;
          out.push_back({{"type", "square"},
                         {"cat", catref},
                         {"f", C.mor_name(f)},
                         {"g", C.mor_name(g)},
                         {"u", C.mor_name(u)},
                         {"v", C.mor_name(v)},
                         {"expect", expect_unique ? "unique" : "exists"},
                         {"fillers", n}});
          if (++emitted >= kWitnessCap) return;
        }
      }
    }
  }
}

void fs_unfactorable_witnesses(json& out, const FinCategory& C,
                               const std::string& catref,
                               const std::string& Lname,
                               const std::string& Rname,
                               const MorphismClass& L,
                               const MorphismClass& R) {
  int emitted = 0;
  for (int f = 0; f < C.mor_count() && emitted < kWitnessCap; ++f)
    if (all_fs_factorizations(C, f, L, R).empty()) {
      out.push_back({{"type", "fs-unfactorable"},
                     {"cat", catref},
                     {"L", Lname},
                     {"R", Rname},
                     {"mor", C.mor_name(f)}});
      ++emitted;
    }
}

void dfs_witnesses(json& out, const FinCategory& C, const std::string& catref,
                   const std::string& dfsname, const Dfs& d) {
  int unf = 0, lad = 0;
  for (int f = 0; f < C.mor_count(); ++f) {
    auto facs = all_dfs_factorizations(C, f, d);
    if (facs.empty() && unf < kWitnessCap) {
      out.push_back({{"type", "dfs-unfactorable"},
                     {"dfs", dfsname},
                     {"mor", C.mor_name(f)}});
      ++unf;
    }
    for (size_t i = 1; i < facs.size() && lad < kWitnessCap; ++i)
      if (!dfs_factorizations_equivalent(C, facs[0], facs[i])) {
        out.push_back(
            {{"type", "dfs-ladder"},
             {"dfs", dfsname},
             {"mor", C.mor_name(f)},
             {"a",
              {C.mor_name(facs[0].e), C.mor_name(facs[0].j),
               C.mor_name(facs[0].m)}},
             {"b",
              {C.mor_name(facs[i].e), C.mor_name(facs[i].j),
               C.mor_name(facs[i].m)}}});
        ++lad;
      }
  }
  square_witnesses(out, C, catref, d.E, class_compose(C, d.M, d.J), true);
  square_witnesses(out, C, catref, class_compose(C, d.J, d.E), d.M, true);
}

/// Composable triples with exactly two of {f, g, g∘f} in W.
void two_out_of_three_witnesses(json& out, const FinCategory& C,
                                const json& subject, const MorphismClass& W) {
  int emitted = 0;
  for (int f = 0; f < C.mor_count() && emitted < kWitnessCap; ++f)
    for (int g = 0; g < C.mor_count() && emitted < kWitnessCap; ++g) {
      if (!C.composable(g, f)) continue;
      int gf = C.compose(g, f);
      if (gf < 0) continue;
      int in_w = (W.contains(f) ? 1 : 0) + (W.contains(g) ? 1 : 0) +
                 (W.contains(gf) ? 1 : 0);
      if (in_w != 2) continue;
      json w = subject;
      w["type"] = "two-out-of-three";
      w["f"] = C.mor_name(f);
      w["g"] = C.mor_name(g);
      w["gf"] = C.mor_name(gf);
      out.push_back(std::move(w));
      ++emitted;
    }
}

}  // namespace

// -- report plumbing ----------------------------------------------------------

int Report::exit_code() const {
  if (verdict == "pass") return 0;
  if (verdict == "fail") return 1;
  return 2;
}

json Report::to_json(bool stable_timing) const {
  json j;
  j["command"] = command;
  j["verdict"] = verdict;
  j["witnesses"] = witnesses;
  j["details"] = details;
  j["result"] = result.is_null() ? json::object() : result;
  j["window"] = window;
  j["timing_ms"] = stable_timing ? 0 : timing_ms;
  return j;
}

std::string Report::human() const {
  std::ostringstream out;
  out << command << ": " << verdict << "\n";
  if (!window.empty()) out << "  window: " << window << "\n";
  if (!result.is_null() && !result.empty())
    out << "  result: " << result.dump() << "\n";
  for (const auto& d : details) out << "  " << d << "\n";
  if (!witnesses.empty())
    out << "  witnesses: " << witnesses.dump() << "\n";
  return out.str();
}

int batch_exit_code(const std::vector<Report>& reports) {
  int worst = 0;
  for (const auto& r : reports) worst = std::max(worst, r.exit_code());
  return worst;
}

// -- commands -----------------------------------------------------------------

Report cmd_validate(const SpecDocument& doc) {
  return guarded("validate", [&](Report& r) {
    apply(r, doc.load_report);
    r.result = {{"categories", doc.categories.size()},
                {"functors", doc.functors.size()},
                {"nattranses", doc.nattranses.size()},
                {"adjunctions", doc.adjunctions.size()},
                {"monads", doc.monads.size()},
                {"comonads", doc.comonads.size()},
                {"classes", doc.classes.size()},
                {"dfss", doc.dfss.size()},
                {"qfss", doc.qfss.size()},
                {"presheaves", doc.presheaves.size()},
                {"groups", doc.groups.size()},
                {"windows", doc.windows.size()},
                {"comonad_products", doc.wcomonads.size()}};
  });
}

namespace {

std::pair<const SpecDocument::ClassEntry*, const SpecDocument::ClassEntry*>
need_class_pair(const SpecDocument& doc, const std::string& L,
                const std::string& R) {
  const auto& l = need_class(doc, L);
  const auto& rr = need_class(doc, R);
  if (l.cat != rr.cat)
    throw UsageError(
        fmt("classes '{}' and '{}' live in different categories", L, R));
  return {&l, &rr};
}

}  // namespace

Report cmd_factorize_fs(const SpecDocument& doc, const std::string& L,
                        const std::string& R, const std::string& mor) {
  return guarded(fmt("factorize --fs {} {} {}", L, R, mor), [&](Report& r) {
    auto [l, rr] = need_class_pair(doc, L, R);
    const FinCategory& C = l->cls.cat();
    r.window = window_desc(doc, l->cat);
    int f = need_mor(doc, C, mor);
    try {
      FsFactorization fac = factorize_fs(C, f, l->cls, rr->cls);
      r.result = {{"left", C.mor_name(fac.left)},
                  {"right", C.mor_name(fac.right)}};
    } catch (const NoFactorization&) {
      r.verdict = "fail";
      r.witnesses.push_back({{"type", "fs-unfactorable"},
                             {"cat", l->cat},
                             {"L", L},
                             {"R", R},
                             {"mor", C.mor_name(f)}});
    }
  });
}

Report cmd_factorize_dfs(const SpecDocument& doc, const std::string& dfs,
                         const std::string& mor) {
  return guarded(fmt("factorize --dfs {} {}", dfs, mor), [&](Report& r) {
    const auto& d = need_dfs(doc, dfs);
    const FinCategory& C = d.d.E.cat();
    r.window = window_desc(doc, d.cat);
    int f = need_mor(doc, C, mor);
    try {
      DfsFactorization fac = factorize_dfs(C, f, d.d);
      r.result = {{"e", C.mor_name(fac.e)},
                  {"j", C.mor_name(fac.j)},
                  {"m", C.mor_name(fac.m)}};
    } catch (const NoFactorization&) {
      r.verdict = "fail";
      r.witnesses.push_back({{"type", "dfs-unfactorable"},
                             {"dfs", dfs},
                             {"mor", C.mor_name(f)}});
    }
  });
}

Report cmd_verify_wfs(const SpecDocument& doc, const std::string& L,
                      const std::string& R) {
  return guarded(fmt("verify --wfs {} {}", L, R), [&](Report& r) {
    auto [l, rr] = need_class_pair(doc, L, R);
    const FinCategory& C = l->cls.cat();
    r.window = window_desc(doc, l->cat);
    apply(r, verify_wfs(C, l->cls, rr->cls));
    if (r.verdict == "fail") {
      fs_unfactorable_witnesses(r.witnesses, C, l->cat, L, R, l->cls, rr->cls);
      square_witnesses(r.witnesses, C, l->cat, l->cls, rr->cls, false);
    }
  });
}

Report cmd_verify_fs(const SpecDocument& doc, const std::string& L,
                     const std::string& R) {
  return guarded(fmt("verify --fs {} {}", L, R), [&](Report& r) {
    auto [l, rr] = need_class_pair(doc, L, R);
    const FinCategory& C = l->cls.cat();
    r.window = window_desc(doc, l->cat);
    apply(r, verify_fs(C, l->cls, rr->cls));
    if (r.verdict == "fail") {
      fs_unfactorable_witnesses(r.witnesses, C, l->cat, L, R, l->cls, rr->cls);
      square_witnesses(r.witnesses, C, l->cat, l->cls, rr->cls, true);
    }
  });
}

Report cmd_verify_dfs(const SpecDocument& doc, const std::string& dfs) {
  return guarded(fmt("verify --dfs {}", dfs), [&](Report& r) {
    const auto& d = need_dfs(doc, dfs);
    r.window = window_desc(doc, d.cat);
    apply(r, verify_dfs(d.d.E.cat(), d.d));
    if (r.verdict == "fail")
      dfs_witnesses(r.witnesses, d.d.E.cat(), d.cat, dfs, d.d);
  });
}

Report cmd_verify_qfs(const SpecDocument& doc, const std::string& qfs) {
  return guarded(fmt("verify --qfs {}", qfs), [&](Report& r) {
    const auto& q = need_qfs(doc, qfs);
    const FinCategory& C = q.q.Cof.cat();
    r.window = window_desc(doc, q.cat);
    apply(r, verify_qfs(C, q.q));
    if (r.verdict == "fail")
      two_out_of_three_witnesses(r.witnesses, C, {{"qfs", qfs}}, q.q.W);
  });
}

Report cmd_perp(const SpecDocument& doc, const std::string& cls, bool right) {
  return guarded(fmt("perp {} --{}", cls, right ? "right" : "left"),
                 [&](Report& r) {
                   const auto& c = need_class(doc, cls);
                   const FinCategory& C = c.cls.cat();
                   r.window = window_desc(doc, c.cat);
                   MorphismClass p = right ? perp_right(C, c.cls)
                                           : perp_left(C, c.cls);
                   json members = json::array();
                   for (int f : p.members()) members.push_back(C.mor_name(f));
                   r.result = {{"members", members}};
                 });
}

Report cmd_local(const SpecDocument& doc, const std::string& cls) {
  return guarded(fmt("local {}", cls), [&](Report& r) {
    const auto& c = need_class(doc, cls);
    const FinCategory& C = c.cls.cat();
    r.window = window_desc(doc, c.cat);
    json objs = json::array();
    for (int x : local_objects(C, c.cls)) objs.push_back(C.obj_name(x));
    r.result = {{"local_objects", objs}};
  });
}

Report cmd_localization(const SpecDocument& doc, const std::string& dfs) {
  return guarded(fmt("localization {}", dfs), [&](Report& r) {
    const auto& d = need_dfs(doc, dfs);
    r.window = window_desc(doc, d.cat);
    apply(r, check_localization_properties(d.d.E.cat(), d.d));
  });
}

Report cmd_diagonal(const SpecDocument& doc, const std::string& dfs,
                    const std::string& obj) {
  return guarded(fmt("diagonal {} {}", dfs, obj), [&](Report& r) {
    const auto& d = need_dfs(doc, dfs);
    const FinCategory& C = d.d.E.cat();
    r.window = window_desc(doc, d.cat);
    int A = C.find_obj(obj);
    if (A < 0) throw UsageError(fmt("unknown object '{}'", obj));
    DiagonalReport dr = check_diagonal(C, d.d, A);
    r.result = {{"applicable", dr.applicable},
                {"local", dr.local},
                {"separating", dr.separating},
                {"trivial_fibration", dr.trivial_fibration}};
    if (!dr.applicable)
      r.verdict = "not-applicable";
    else
      apply(r, dr.implications);
  });
}

Report cmd_quillen(const SpecDocument& doc, const std::string& adj,
                   const std::string& dfs_src, const std::string& dfs_dst) {
  return guarded(fmt("quillen {} {} {}", adj, dfs_src, dfs_dst),
                 [&](Report& r) {
                   int a = doc.adjunction_index(adj);
                   if (a < 0)
                     throw UsageError(fmt("unknown adjunction '{}'", adj));
                   const auto& ds = need_dfs(doc, dfs_src);
                   const auto& dd = need_dfs(doc, dfs_dst);
                   apply(r, check_quillen_adjunction(doc.adjunctions[a], ds.d,
                                                     dd.d));
                 });
}

Report cmd_bousfield(const SpecDocument& doc, const std::string& dfs1,
                     const std::string& dfs2) {
  return guarded(fmt("bousfield {} {}", dfs1, dfs2), [&](Report& r) {
    const auto& d1 = need_dfs(doc, dfs1);
    const auto& d2 = need_dfs(doc, dfs2);
    if (d1.cat != d2.cat)
      throw UsageError("bousfield: systems live in different categories");
    r.window = window_desc(doc, d1.cat);
    bool loc = check_bousfield(d1.d.E.cat(), d1.d, d2.d);
    r.result = {{"localization", loc}};
    if (!loc) r.verdict = "fail";
  });
}

Report cmd_bijection(const SpecDocument& doc, const std::string& system) {
  return guarded(fmt("bijection {}", system), [&](Report& r) {
    if (int i = doc.dfs_index(system); i >= 0) {
      const auto& d = doc.dfss[i];
      const FinCategory& C = d.d.E.cat();
      r.window = window_desc(doc, d.cat);
      if (auto h = qfs_hypotheses(C, d.d)) {
        r.verdict = "hypothesis-failed";
        r.details.push_back(*h);
        two_out_of_three_witnesses(r.witnesses, C, {{"dfs", system}},
                                   class_compose(C, d.d.M, d.d.E));
        return;
      }
      apply(r, dfs_qfs_roundtrip(C, d.d));
      return;
    }
    const auto& q = need_qfs(doc, system);
    const FinCategory& C = q.q.Cof.cat();
    r.window = window_desc(doc, q.cat);
    Dfs d = qfs_to_dfs(C, q.q);
    Qfs q2 = dfs_to_qfs(C, d);  // HypothesisFailed surfaces via guarded
    ValidationReport v;
    if (!(q2.Cof == q.q.Cof)) v.fail("cofibration class changed on roundtrip");
    if (!(q2.W == q.q.W)) v.fail("weak-equivalence class changed on roundtrip");
    if (!(q2.Fib == q.q.Fib)) v.fail("fibration class changed on roundtrip");
    v.merge(dfs_qfs_roundtrip(C, d));
    apply(r, v);
  });
}

Report cmd_em_build(const SpecDocument& doc, const std::string& monad) {
  return guarded(fmt("em {} --build", monad), [&](Report& r) {
    const auto& m = need_monad(doc, monad);
    auto em = em_category(m.m);
    r.window = fmt("Eilenberg-Moore category of {} ({} algebras, {} "
                   "morphisms)",
                   monad, em->category.obj_count(), em->category.mor_count());
    r.result = {{"algebras", em->category.obj_count()},
                {"morphisms", em->category.mor_count()}};
  });
}

Report cmd_em_induced(const SpecDocument& doc, const std::string& monad,
                      const std::string& dfs) {
  return guarded(fmt("em {} --induced {}", monad, dfs), [&](Report& r) {
    const auto& m = need_monad(doc, monad);
    const auto& d = need_dfs(doc, dfs);
    auto em = em_category(m.m);
    r.window = fmt("Eilenberg-Moore category of {} ({} algebras, {} "
                   "morphisms)",
                   monad, em->category.obj_count(), em->category.mor_count());
    apply(r, check_right_induced_dfs(*em, d.d));
  });
}

Report cmd_em_lift(const SpecDocument& doc, const std::string& monad,
                   const std::string& L, const std::string& R,
                   const std::string& mor) {
  return guarded(fmt("em {} --lift {} {} {}", monad, L, R, mor),
                 [&](Report& r) {
    const auto& m = need_monad(doc, monad);
    auto [l, rr] = need_class_pair(doc, L, R);
    auto em = em_category(m.m);
    const FinCategory& C = *em->base;
    r.window = fmt("Eilenberg-Moore category of {} ({} algebras, {} "
                   "morphisms)",
                   monad, em->category.obj_count(), em->category.mor_count());
    // the algebra morphism: numeric EM id, or a base-morphism name with a
    // unique structure-compatible lift
    int f_em = -1;
    int base_mor = C.find_mor(mor);
    if (base_mor >= 0) {
      for (int f = 0; f < em->category.mor_count(); ++f)
        if (em->mor_base[f] == base_mor) {
          if (f_em >= 0)
            throw UsageError(
                fmt("base morphism '{}' underlies several algebra morphisms; "
                    "use a numeric id",
                    mor));
          f_em = f;
        }
    } else {
      f_em = doc.resolve_mor(em->category, mor);
    }
    if (f_em < 0) throw UsageError(fmt("unknown algebra morphism '{}'", mor));
    LiftedFactorization lf = lift_factorization(*em, f_em, l->cls, rr->cls);
    r.result = {{"e", C.mor_name(lf.e)},
                {"m", C.mor_name(lf.m)},
                {"structure", C.mor_name(lf.k)}};
  });
}

namespace {

/// Keeps an identity adjunction's functors alive for the duration of a call.
struct OwnedIdentityAdjunction {
  std::unique_ptr<Functor> id;
  NatTrans u;
  Adjunction adj;
};

OwnedIdentityAdjunction identity_adjunction_on(const FinCategory& C) {
  OwnedIdentityAdjunction o;
  o.id = std::make_unique<Functor>(identity_functor(C));
  std::vector<int> comps(C.obj_count());
  for (int a = 0; a < C.obj_count(); ++a) comps[a] = C.identity(a);
  o.u = NatTrans{o.id.get(), o.id.get(), comps};
  o.adj = Adjunction{*o.id, *o.id, o.u, o.u};
  return o;
}

}  // namespace

Report cmd_em_lifted_quillen(const SpecDocument& doc, const std::string& monad,
                             const std::string& dfs) {
  return guarded(fmt("em {} --lifted-quillen {}", monad, dfs), [&](Report& r) {
    const auto& m = need_monad(doc, monad);
    const auto& d = need_dfs(doc, dfs);
    auto em = em_category(m.m);
    r.window = fmt("Eilenberg-Moore category of {} ({} algebras, {} "
                   "morphisms)",
                   monad, em->category.obj_count(), em->category.mor_count());
    OwnedIdentityAdjunction base = identity_adjunction_on(*em->base);
    OwnedIdentityAdjunction lifted = identity_adjunction_on(em->category);
    apply(r, check_lifted_quillen(*em, *em, base.adj, lifted.adj, d.d, d.d));
  });
}

Report cmd_gset(const SpecDocument& doc, const std::string& group, int bound) {
  return guarded(fmt("gset {} {}", group, bound), [&](Report& r) {
    int i = doc.group_index(group);
    if (i < 0) throw UsageError(fmt("unknown group '{}'", group));
    GroupActionInstance inst = group_action_instance(doc.groups[i].g, bound);
    r.window = fmt("set skeleton up to size {}", inst.skeleton_bound);
    apply(r, validate_monad(inst.monad));
    r.result = {{"group_order", inst.group.order()},
                {"carrier_bound", inst.carrier_bound},
                {"skeleton_bound", inst.skeleton_bound},
                {"algebras", inst.em->category.obj_count()},
                {"morphisms", inst.em->category.mor_count()}};
  });
}

Report cmd_coem_build(const SpecDocument& doc, const std::string& comonad) {
  return guarded(fmt("coem {} --build", comonad), [&](Report& r) {
    const auto& c = need_comonad(doc, comonad);
    auto co = coem_category(c.c);
    r.window = fmt("coalgebra category of {} ({} coalgebras, {} morphisms)",
                   comonad, co->category.obj_count(),
                   co->category.mor_count());
    r.result = {{"coalgebras", co->category.obj_count()},
                {"morphisms", co->category.mor_count()}};
  });
}

Report cmd_coem_induced(const SpecDocument& doc, const std::string& comonad,
                        const std::string& dfs) {
  return guarded(fmt("coem {} --induced {}", comonad, dfs), [&](Report& r) {
    const auto& c = need_comonad(doc, comonad);
    const auto& d = need_dfs(doc, dfs);
    auto co = coem_category(c.c);
    r.window = fmt("coalgebra category of {} ({} coalgebras, {} morphisms)",
                   comonad, co->category.obj_count(),
                   co->category.mor_count());
    apply(r, check_left_induced_dfs(*co, d.d));
  });
}

Report cmd_lt_enumerate(const SpecDocument& doc, const std::string& window) {
  return guarded(fmt("lt {} --enumerate", window), [&](Report& r) {
    const auto& w = need_window_entry(doc, window);
    r.window = window_desc(doc, window);
    auto ks = enumerate_topologies(w.w.Om, w.w.meet);
    int oracle = count_grothendieck_topologies(w.w.Om);
    r.result = {{"topologies", ks.size()}, {"grothendieck_oracle", oracle}};
    if (static_cast<int>(ks.size()) != oracle) {
      r.verdict = "fail";
      r.details.push_back(
          fmt("enumerated {} internal topologies but the covering-sieve "
              "oracle counts {}",
              ks.size(), oracle));
    }
  });
}

Report cmd_lt_compare(const SpecDocument& doc, const std::string& window,
                      int i, int j) {
  return guarded(fmt("lt {} --compare {} {}", window, i, j), [&](Report& r) {
    const auto& w = need_window_entry(doc, window);
    r.window = window_desc(doc, window);
    std::vector<LTTopology> ks;
    LTTopology k1 = need_topology(w.w, i, &ks);
    LTTopology k2 = need_topology(w.w, j);
    TopologyComparison c = compare_topologies(w.w, k1, k2);
    r.result = {{"le", c.le},
                {"by_meet", c.by_meet},
                {"by_sheaves", c.by_sheaves},
                {"by_closure", c.by_closure},
                {"by_dense", c.by_dense},
                {"by_cof", c.by_cof}};
  });
}

Report cmd_lt_roundtrip(const SpecDocument& doc, const std::string& window,
                        int i) {
  return guarded(fmt("lt {} --from-dfs {}", window, i), [&](Report& r) {
    const auto& w = need_window_entry(doc, window);
    r.window = window_desc(doc, window);
    LTTopology k = need_topology(w.w, i);
    Dfs d = w.w.image_closure_dfs(k);
    ValidationReport v = verify_dfs(w.w.cat, d);
    v.merge(is_cartesian_dfs(w.w, d));
    if (v.ok() && !(topology_of_dfs(w.w, d) == k))
      v.fail(fmt("topology {} is not regenerated by its image/closure "
                 "system",
                 i));
    apply(r, v);
    r.result = {{"E", d.E.size()}, {"J", d.J.size()}, {"M", d.M.size()}};
  });
}

Report cmd_sheaf_check(const SpecDocument& doc, const std::string& window,
                       int topology, const std::string& presheaf) {
  return guarded(fmt("sheaf {} --topology {} --check {}", window, topology,
                     presheaf),
                 [&](Report& r) {
    const auto& w = need_window_entry(doc, window);
    r.window = window_desc(doc, window);
    int i = doc.presheaf_index(presheaf);
    if (i < 0) throw UsageError(fmt("unknown presheaf '{}'", presheaf));
    const Presheaf& P = doc.presheaves[i].p;
    if (P.base != w.w.base)
      throw UsageError(
          fmt("presheaf '{}' lives over a different base", presheaf));
    LTTopology k = need_topology(w.w, topology);
    bool sh = is_sheaf(w.w.Om, k, P);
    r.result = {{"sheaf", sh}, {"separated", is_separated(w.w.Om, k, P)}};
    if (!sh) r.verdict = "fail";
  });
}

Report cmd_sheafify(const SpecDocument& doc, const std::string& window,
                    int topology, const std::string& presheaf) {
  return guarded(fmt("sheaf {} --topology {} --sheafify {}", window, topology,
                     presheaf),
                 [&](Report& r) {
    const auto& w = need_window_entry(doc, window);
    r.window = window_desc(doc, window);
    int i = doc.presheaf_index(presheaf);
    if (i < 0) throw UsageError(fmt("unknown presheaf '{}'", presheaf));
    const Presheaf& P = doc.presheaves[i].p;
    if (P.base != w.w.base)
      throw UsageError(
          fmt("presheaf '{}' lives over a different base", presheaf));
    LTTopology k = need_topology(w.w, topology);
    SheafificationResult s = sheafify(w.w.Om, k, P);
    ValidationReport v;
    if (!is_sheaf(w.w.Om, k, s.sheaf))
      v.fail("sheafification output fails the matching-family criterion");
    PshMor unit{&P, &s.sheaf, s.unit};
    v.merge(validate_pshmor(unit));
    if (!is_dense(w.w.Om, k, image_subobject(unit)))
      v.fail("the unit's image is not dense");
    apply(r, v);
    r.result = {{"cards", s.sheaf.card}};
  });
}

Report cmd_cartesian_dfs(const SpecDocument& doc, const std::string& window,
                         const std::string& dfs) {
  return guarded(fmt("cartesian {} --dfs {}", window, dfs), [&](Report& r) {
    const auto& w = need_window_entry(doc, window);
    r.window = window_desc(doc, window);
    const auto& d = need_dfs(doc, dfs);
    if (d.cat != window)
      throw UsageError(fmt("dfs '{}' does not live in window '{}'", dfs,
                           window));
    apply(r, is_cartesian_dfs(w.w, d.d));
  });
}

Report cmd_cartesian_topology(const SpecDocument& doc,
                              const std::string& window, int topology) {
  return guarded(fmt("cartesian {} --topology {}", window, topology),
                 [&](Report& r) {
    const auto& w = need_window_entry(doc, window);
    r.window = window_desc(doc, window);
    LTTopology k = need_topology(w.w, topology);
    apply(r, is_cartesian_dfs(w.w, w.w.image_closure_dfs(k)));
  });
}

Report cmd_topos_adjunction(const SpecDocument& doc, const std::string& wsrc,
                            const std::string& wdst, int ksrc, int kdst) {
  return guarded(
      fmt("topos-adjunction {} {} --ksrc {} --kdst {}", wsrc, wdst, ksrc,
          kdst),
      [&](Report& r) {
        const auto& ws = need_window_entry(doc, wsrc);
        const auto& wd = need_window_entry(doc, wdst);
        r.window =
            fmt("{}; {}", window_desc(doc, wsrc), window_desc(doc, wdst));
        LTTopology k1 = need_topology(ws.w, ksrc);
        LTTopology k2 = need_topology(wd.w, kdst);
        auto adj = constant_sections_adjunction(ws.w, wd.w);
        ToposAdjunctionReport t = check_topos_adjunction(
            ws.w, wd.w, adj->adj, ws.w.image_closure_dfs(k1),
            wd.w.image_closure_dfs(k2));
        r.result = {{"geometric", t.geometric},
                    {"cof_preserved", t.cof_preserved},
                    {"closure_preserved", t.closure_preserved},
                    {"closure_continuous", t.closure_continuous},
                    {"classifier_square", t.classifier_square}};
        apply(r, t.report);
      });
}

Report cmd_coalg_build(const SpecDocument& doc, const std::string& cm) {
  return guarded(fmt("coalg {} --build", cm), [&](Report& r) {
    const auto& c = need_wcomonad(doc, cm);
    CoalgebraTopos T = build_coalgebra_topos(c.cm);
    r.window = fmt("coalgebras of {} over window {} ({} objects, {} "
                   "morphisms)",
                   cm, c.window, T.co->category.obj_count(),
                   T.co->category.mor_count());
    r.result = {{"coalgebras", T.co->category.obj_count()},
                {"morphisms", T.co->category.mor_count()},
                {"slice_objects", T.slice.obj_count()},
                {"slice_morphisms", T.slice.mor_count()}};
    apply(r, T.report);
  });
}

Report cmd_coalg_extend(const SpecDocument& doc, const std::string& cm,
                        int topology) {
  return guarded(fmt("coalg {} --extend {}", cm, topology), [&](Report& r) {
    const auto& c = need_wcomonad(doc, cm);
    LTTopology k = need_topology(*c.cm.window, topology);
    CoalgebraTopos T = build_coalgebra_topos(c.cm);
    r.window = fmt("coalgebras of {} over window {} ({} objects, {} "
                   "morphisms)",
                   cm, c.window, T.co->category.obj_count(),
                   T.co->category.mor_count());
    ExtensionResult e = extend_lt(c.cm, T, k);
    r.result = {{"ktilde", e.ktilde_comp}};
    apply(r, e.report);
  });
}

Report cmd_coalg_identify(const SpecDocument& doc, const std::string& cm,
                          int topology) {
  return guarded(fmt("coalg {} --identify {}", cm, topology), [&](Report& r) {
    const auto& c = need_wcomonad(doc, cm);
    LTTopology k = need_topology(*c.cm.window, topology);
    CoalgebraTopos T = build_coalgebra_topos(c.cm);
    r.window = fmt("coalgebras of {} over window {} ({} objects, {} "
                   "morphisms)",
                   cm, c.window, T.co->category.obj_count(),
                   T.co->category.mor_count());
    apply(r, check_induced_topology_extension(
                 c.cm, T, c.cm.window->image_closure_dfs(k)));
  });
}

// -- corpus battery -----------------------------------------------------------

std::vector<Report> run_corpus(const SpecDocument& doc) {
  std::vector<Report> out;
  out.push_back(cmd_validate(doc));
  for (const auto& d : doc.dfss) {
    out.push_back(cmd_verify_dfs(doc, d.name));
    out.push_back(cmd_bijection(doc, d.name));
  }
  for (const auto& q : doc.qfss) {
    out.push_back(cmd_verify_qfs(doc, q.name));
    out.push_back(cmd_bijection(doc, q.name));
  }
  for (const auto& m : doc.monads) out.push_back(cmd_em_build(doc, m.name));
  for (const auto& w : doc.windows) {
    out.push_back(cmd_lt_enumerate(doc, w.name));
    int n = static_cast<int>(enumerate_topologies(w.w.Om, w.w.meet).size());
    for (int i = 0; i < n; ++i)
      out.push_back(cmd_lt_roundtrip(doc, w.name, i));
  }
  for (const auto& c : doc.wcomonads) {
    out.push_back(cmd_coalg_build(doc, c.name));
    int n = static_cast<int>(
        enumerate_topologies(c.cm.window->Om, c.cm.window->meet).size());
    for (int i = 0; i < n; ++i) {
      out.push_back(cmd_coalg_extend(doc, c.name, i));
      out.push_back(cmd_coalg_identify(doc, c.name, i));
    }
  }
  return out;
}

// -- replay -------------------------------------------------------------------

namespace {

bool replay_one(const SpecDocument& doc, const json& w, std::string* why) {
  const std::string type = w.value("type", "");
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (type == "square") {
    const FinCategory& C = need_catlike(doc, w.at("cat").get<std::string>());
    int f = need_mor(doc, C, w.at("f").get<std::string>());
    int g = need_mor(doc, C, w.at("g").get<std::string>());
    int u = need_mor(doc, C, w.at("u").get<std::string>());
    int v = need_mor(doc, C, w.at("v").get<std::string>());
    LiftReport lr = lift_fillers(C, f, g, u, v);
    int n = static_cast<int>(lr.fillers.size());
    if (n != w.at("fillers").get<int>())
      return fail("filler count changed on replay");
    bool unique = w.at("expect").get<std::string>() == "unique";
    return (unique ? n != 1 : n == 0) ||
           fail("the square no longer violates the lifting expectation");
  }
  if (type == "fs-unfactorable") {
    const auto& l = need_class(doc, w.at("L").get<std::string>());
    const auto& rr = need_class(doc, w.at("R").get<std::string>());
    const FinCategory& C = l.cls.cat();
    int f = need_mor(doc, C, w.at("mor").get<std::string>());
    return all_fs_factorizations(C, f, l.cls, rr.cls).empty() ||
           fail("the morphism factors after all");
  }
  if (type == "dfs-unfactorable") {
    const auto& d = need_dfs(doc, w.at("dfs").get<std::string>());
    const FinCategory& C = d.d.E.cat();
    int f = need_mor(doc, C, w.at("mor").get<std::string>());
    return all_dfs_factorizations(C, f, d.d).empty() ||
           fail("the morphism factors after all");
  }
  if (type == "dfs-ladder") {
    const auto& d = need_dfs(doc, w.at("dfs").get<std::string>());
    const FinCategory& C = d.d.E.cat();
    auto fac = [&](const json& j) {
      return DfsFactorization{need_mor(doc, C, j.at(0).get<std::string>()),
                              need_mor(doc, C, j.at(1).get<std::string>()),
                              need_mor(doc, C, j.at(2).get<std::string>())};
    };
    return !dfs_factorizations_equivalent(C, fac(w.at("a")), fac(w.at("b"))) ||
           fail("the two factorizations are equivalent after all");
  }
  if (type == "two-out-of-three") {
    MorphismClass W;
    const FinCategory* C = nullptr;
    if (w.contains("dfs")) {
      const auto& d = need_dfs(doc, w.at("dfs").get<std::string>());
      C = &d.d.E.cat();
      W = class_compose(*C, d.d.M, d.d.E);
    } else {
      const auto& q = need_qfs(doc, w.at("qfs").get<std::string>());
      C = &q.q.Cof.cat();
      W = q.q.W;
    }
    int f = need_mor(doc, *C, w.at("f").get<std::string>());
    int g = need_mor(doc, *C, w.at("g").get<std::string>());
    int gf = need_mor(doc, *C, w.at("gf").get<std::string>());
    if (!C->composable(g, f) || C->compose(g, f) != gf)
      return fail("the witness triple is not a composition triple");
    int in_w = (W.contains(f) ? 1 : 0) + (W.contains(g) ? 1 : 0) +
               (W.contains(gf) ? 1 : 0);
    return in_w == 2 || fail("the triple no longer violates two-out-of-three");
  }
  return fail(fmt("unknown witness type '{}'", type));
}

void collect_witnesses(const json& node, std::vector<json>& out) {
  if (node.is_array()) {
    for (const auto& e : node) collect_witnesses(e, out);
  } else if (node.is_object()) {
    if (node.contains("witnesses") && node.at("witnesses").is_array())
      for (const auto& w : node.at("witnesses")) out.push_back(w);
    for (const auto& [k, v] : node.items())
      if (k == "reports") collect_witnesses(v, out);
  }
}

}  // namespace

Report cmd_replay(const SpecDocument& doc, const json& report_json) {
  return guarded("replay", [&](Report& r) {
    std::vector<json> witnesses;
    collect_witnesses(report_json, witnesses);
    int reproduced = 0;
    for (const auto& w : witnesses) {
      std::string why;
      if (replay_one(doc, w, &why)) {
        ++reproduced;
      } else {
        r.verdict = "fail";
        r.details.push_back(fmt("witness {} failed to replay: {}", w.dump(),
                                why));
      }
    }
    r.result = {{"witnesses", witnesses.size()}, {"reproduced", reproduced}};
  });
}

}  // namespace facto::spec
