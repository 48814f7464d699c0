#include "facto/ortho.hpp"

#include <algorithm>
#include <unordered_map>

namespace facto {

MorphismClass::MorphismClass(const FinCategory& C, std::string label)
    : cat_(&C), member_(C.mor_count(), 0), label_(std::move(label)) {}

int MorphismClass::size() const {
  return static_cast<int>(std::count(member_.begin(), member_.end(), 1));
}

std::vector<int> MorphismClass::members() const {
  std::vector<int> out;
  for (size_t f = 0; f < member_.size(); ++f)
    if (member_[f]) out.push_back(static_cast<int>(f));
  return out;
}

bool MorphismClass::subset_of(const MorphismClass& o) const {
  for (size_t f = 0; f < member_.size(); ++f)
    if (member_[f] && !o.member_[f]) return false;
  return true;
}

MorphismClass MorphismClass::intersect(const MorphismClass& o) const {
  MorphismClass out(*cat_, label_ + "∩" + o.label_);
  for (size_t f = 0; f < member_.size(); ++f)
    if (member_[f] && o.member_[f]) out.insert(static_cast<int>(f));
  return out;
}

MorphismClass MorphismClass::unite(const MorphismClass& o) const {
  MorphismClass out(*cat_, label_ + "∪" + o.label_);
  for (size_t f = 0; f < member_.size(); ++f)
    if (member_[f] || o.member_[f]) out.insert(static_cast<int>(f));
  return out;
}

MorphismClass all_morphisms(const FinCategory& C) {
  MorphismClass c(C, "Mor");
  for (int f = 0; f < C.mor_count(); ++f) c.insert(f);
  return c;
}

MorphismClass no_morphisms(const FinCategory& C) {
  return MorphismClass(C, "Empty");
}

MorphismClass iso_class(const FinCategory& C) {
  MorphismClass c(C, "Iso");
  for (int f = 0; f < C.mor_count(); ++f)
    if (is_iso(C, f)) c.insert(f);
  return c;
}

MorphismClass mono_class(const FinCategory& C) {
  MorphismClass c(C, "Mono");
  for (int f = 0; f < C.mor_count(); ++f)
    if (is_mono(C, f)) c.insert(f);
  return c;
}

MorphismClass epi_class(const FinCategory& C) {
  MorphismClass c(C, "Epi");
  for (int f = 0; f < C.mor_count(); ++f)
    if (is_epi(C, f)) c.insert(f);
  return c;
}

MorphismClass extremal_epi_class(const FinCategory& C) {
  MorphismClass epis = epi_class(C);
  MorphismClass monos = mono_class(C);
  MorphismClass c(C, "ExEpi");
  for (int e : epis.members()) {
    bool extremal = true;
    // e = m ∘ x with m mono forces m iso.
    for (int m = 0; m < C.mor_count() && extremal; ++m) {
      if (!monos.contains(m) || C.cod(m) != C.cod(e)) continue;
      for (int x : C.hom(C.dom(e), C.dom(m)))
        if (C.compose(m, x) == e && !is_iso(C, m)) {
          extremal = false;
          break;
        }
    }
    if (extremal) c.insert(e);
  }
  return c;
}

MorphismClass extremal_mono_class(const FinCategory& C) {
  FinCategory op = opposite(C);
  MorphismClass from_op = extremal_epi_class(op);
  MorphismClass c(C, "ExMono");
  for (int f = 0; f < C.mor_count(); ++f)
    if (from_op.contains(f)) c.insert(f);
  return c;
}

MorphismClass strong_epi_class(const FinCategory& C) {
  MorphismClass epis = epi_class(C);
  MorphismClass monos = mono_class(C);
  MorphismClass c(C, "StrEpi");
  for (int e : epis.members()) {
    bool strong = true;
    for (int m : monos.members())
      if (!is_orthogonal(C, e, m)) {
        strong = false;
        break;
      }
    if (strong) c.insert(e);
  }
  return c;
}

MorphismClass strong_mono_class(const FinCategory& C) {
  FinCategory op = opposite(C);
  MorphismClass from_op = strong_epi_class(op);
  MorphismClass c(C, "StrMono");
  for (int f = 0; f < C.mor_count(); ++f)
    if (from_op.contains(f)) c.insert(f);
  return c;
}

MorphismClass regular_epi_class(const FinCategory& C) {
  MorphismClass c(C, "RegEpi");
  for (int e = 0; e < C.mor_count(); ++e) {
    bool regular = false;
    for (int a = 0; a < C.obj_count() && !regular; ++a) {
      const auto& par = C.hom(a, C.dom(e));
      for (size_t i = 0; i < par.size() && !regular; ++i)
        for (size_t j = i; j < par.size() && !regular; ++j) {
          auto q = compute_coequalizer(C, par[i], par[j]);
          if (!q) continue;
          // e is a coequalizer of (par[i],par[j]) iff it is isomorphic to q
          // under the canonical comparison.
          if (C.compose(e, par[i]) != C.compose(e, par[j])) continue;
          // mediating iso q -> e
          for (int h : C.hom(C.cod(*q), C.cod(e)))
            if (C.compose(h, *q) == e && is_iso(C, h)) {
              regular = true;
              break;
            }
        }
    }
    if (regular) c.insert(e);
  }
  return c;
}

MorphismClass regular_mono_class(const FinCategory& C) {
  FinCategory op = opposite(C);
  MorphismClass from_op = regular_epi_class(op);
  MorphismClass c(C, "RegMono");
  for (int f = 0; f < C.mor_count(); ++f)
    if (from_op.contains(f)) c.insert(f);
  return c;
}

MorphismClass bim_class(const FinCategory& C) {
  MorphismClass c = mono_class(C).intersect(epi_class(C));
  c.set_label("Bim");
  return c;
}

// -- lifting -----------------------------------------------------------------

LiftReport lift_fillers(const FinCategory& C, int f, int g, int u, int v) {
  if (C.compose(v, f) != C.compose(g, u))
    throw NonCommutingSquare(
        fmt("square ({},{},{},{}) does not commute", C.mor_name(f),
                    C.mor_name(g), C.mor_name(u), C.mor_name(v)));
  LiftReport rep{f, g, u, v, {}};
  for (int h : C.hom(C.cod(f), C.dom(g)))
    if (C.compose(h, f) == u && C.compose(g, h) == v) rep.fillers.push_back(h);
  return rep;
}

namespace {

enum class LiftMode { kExists, kUnique };

// Decides the lifting property by counting. Every h : cod f -> dom g yields
// the commuting square (h∘f, g∘h); a square (u, v) has a filler iff it is in
// the image of that assignment. So f has the lifting property against g iff
// the assignment is onto the set of commuting squares (and is a bijection in
// the unique case). Squares are counted by bucketing both sides of the
// commutativity equation over their common diagonal composite, which keeps
// the cost linear in the hom sets instead of cubic.
bool lifts(const FinCategory& C, int f, int g, LiftMode mode) {
  long long m = C.mor_count();
  // Commuting squares (u, v) grouped by the diagonal t = g∘u = v∘f.
  std::unordered_map<int, std::pair<long long, long long>> diag;
  for (int u : C.hom(C.dom(f), C.dom(g))) diag[C.compose(g, u)].first++;
  for (int v : C.hom(C.cod(f), C.cod(g))) diag[C.compose(v, f)].second++;
  long long squares = 0;
  for (const auto& [t, n] : diag) squares += n.first * n.second;

  std::vector<long long> image;
  image.reserve(C.hom(C.cod(f), C.dom(g)).size());
  for (int h : C.hom(C.cod(f), C.dom(g)))
    image.push_back(static_cast<long long>(C.compose(h, f)) * m +
                    C.compose(g, h));
  std::sort(image.begin(), image.end());
  if (mode == LiftMode::kUnique) {
    bool injective =
        std::adjacent_find(image.begin(), image.end()) == image.end();
    return injective && squares == static_cast<long long>(image.size());
  }
  long long distinct =
      std::unique(image.begin(), image.end()) - image.begin();
  return distinct == squares;
}

}  // namespace

bool has_llp(const FinCategory& C, int f, int g) {
  return lifts(C, f, g, LiftMode::kExists);
}

bool is_orthogonal(const FinCategory& C, int f, int g) {
  return lifts(C, f, g, LiftMode::kUnique);
}

namespace {

template <typename Pred>
MorphismClass complement_class(const FinCategory& C, const MorphismClass& M,
                               std::string label, Pred pred) {
  MorphismClass out(C, std::move(label));
  std::vector<int> ms = M.members();
  for (int f = 0; f < C.mor_count(); ++f) {
    bool ok = true;
    for (int g : ms)
      if (!pred(g, f)) {
        ok = false;
        break;
      }
    if (ok) out.insert(f);
  }
  return out;
}

}  // namespace

MorphismClass perp_right(const FinCategory& C, const MorphismClass& M) {
  return complement_class(C, M, M.label() + "^⊥",
                          [&](int g, int f) { return is_orthogonal(C, g, f); });
}

MorphismClass perp_left(const FinCategory& C, const MorphismClass& M) {
  return complement_class(C, M, "⊥" + M.label(),
                          [&](int g, int f) { return is_orthogonal(C, f, g); });
}

MorphismClass box_right(const FinCategory& C, const MorphismClass& M) {
  return complement_class(C, M, M.label() + "^⊞",
                          [&](int g, int f) { return has_llp(C, g, f); });
}

MorphismClass box_left(const FinCategory& C, const MorphismClass& M) {
  return complement_class(C, M, "⊞" + M.label(),
                          [&](int g, int f) { return has_llp(C, f, g); });
}

MorphismClass class_compose(const FinCategory& C, const MorphismClass& R,
                            const MorphismClass& L) {
  MorphismClass out(C, R.label() + "·" + L.label());
  for (int e : L.members())
    for (int m : C.out_of(C.cod(e)))
      if (R.contains(m)) out.insert(C.compose(m, e));
  return out;
}

// -- factorization systems ---------------------------------------------------

namespace {

bool has_fs_factorization(const FinCategory& C, int f, const MorphismClass& L,
                          const MorphismClass& R) {
  for (int e : C.out_of(C.dom(f))) {
    if (!L.contains(e)) continue;
    for (int m : C.hom(C.cod(e), C.cod(f)))
      if (R.contains(m) && C.compose(m, e) == f) return true;
  }
  return false;
}

void check_class_equal(ValidationReport& rep, const FinCategory& C,
                       const MorphismClass& got, const MorphismClass& want,
                       const std::string& what) {
  for (int f = 0; f < C.mor_count(); ++f) {
    bool a = got.contains(f), b = want.contains(f);
    if (a != b)
      rep.fail(fmt("{}: morphism {} {}", what, C.mor_name(f),
                           a ? "present but should not be" : "missing"));
  }
}

}  // namespace

ValidationReport verify_wfs(const FinCategory& C, const MorphismClass& L,
                            const MorphismClass& R) {
  ValidationReport rep;
  for (int f = 0; f < C.mor_count(); ++f)
    if (!has_fs_factorization(C, f, L, R))
      rep.fail(fmt("no (L,R)-factorization of {}", C.mor_name(f)));
  check_class_equal(rep, C, L, box_left(C, R), "L = ⊞R");
  check_class_equal(rep, C, R, box_right(C, L), "R = L⊞");
  return rep;
}

ValidationReport verify_fs(const FinCategory& C, const MorphismClass& L,
                           const MorphismClass& R) {
  ValidationReport rep;
  for (int f = 0; f < C.mor_count(); ++f)
    if (!has_fs_factorization(C, f, L, R))
      rep.fail(fmt("no (L,R)-factorization of {}", C.mor_name(f)));
  check_class_equal(rep, C, L, perp_left(C, R), "L = ⊥R");
  check_class_equal(rep, C, R, perp_right(C, L), "R = L⊥");
  return rep;
}

ValidationReport verify_dfs(const FinCategory& C, const Dfs& dfs) {
  ValidationReport rep;
  const MorphismClass &E = dfs.E, &J = dfs.J, &M = dfs.M;
  MorphismClass iso = iso_class(C);

  // (i) Iso·E ⊆ E, Iso·J·Iso ⊆ J, M·Iso ⊆ M. The asymmetry (no E·Iso,
  // no Iso·M) is deliberate.
  for (int e : E.members())
    for (int i : C.out_of(C.cod(e)))
      if (iso.contains(i) && !E.contains(C.compose(i, e)))
        rep.fail(fmt("Iso·E ⊄ E at {}∘{}", C.mor_name(i), C.mor_name(e)));
  for (int j : J.members())
    for (int i : C.out_of(C.cod(j))) {
      if (!iso.contains(i)) continue;
      for (int i2 : C.into(C.dom(j))) {
        if (!iso.contains(i2)) continue;
        int comp = C.compose(C.compose(i, j), i2);
        if (!J.contains(comp))
          rep.fail(fmt("Iso·J·Iso ⊄ J at {}", C.mor_name(comp)));
      }
    }
  for (int m : M.members())
    for (int i : C.into(C.dom(m)))
      if (iso.contains(i) && !M.contains(C.compose(m, i)))
        rep.fail(fmt("M·Iso ⊄ M at {}∘{}", C.mor_name(m), C.mor_name(i)));

  // (ii) Mor C = M·J·E.
  for (int f = 0; f < C.mor_count(); ++f) {
    bool found = false;
    for (int e : C.out_of(C.dom(f))) {
      if (!E.contains(e)) continue;
      for (int j : C.out_of(C.cod(e))) {
        if (!J.contains(j)) continue;
        for (int m : C.hom(C.cod(j), C.cod(f)))
          if (M.contains(m) && C.compose(m, C.compose(j, e)) == f) {
            found = true;
            break;
          }
        if (found) break;
      }
      if (found) break;
    }
    if (!found)
      rep.fail(fmt("no (E,J,M)-factorization of {}", C.mor_name(f)));
  }

  // (iii) unique (s,t) for every commuting ladder e -> j vs j' -> m.
  for (int e : E.members())
    for (int j : C.out_of(C.cod(e))) {
      if (!J.contains(j)) continue;
      int je = C.compose(j, e);
      for (int jp : J.members())
        for (int m : C.out_of(C.cod(jp))) {
          if (!M.contains(m)) continue;
          for (int u : C.hom(C.dom(e), C.dom(jp))) {
            int bottom = C.compose(C.compose(m, jp), u);
            for (int v : C.hom(C.cod(j), C.cod(m))) {
              if (C.compose(v, je) != bottom) continue;
              int count = 0;
              for (int s : C.hom(C.cod(e), C.dom(jp))) {
                if (C.compose(s, e) != u) continue;
                int jps = C.compose(jp, s);
                for (int t : C.hom(C.cod(j), C.cod(jp)))
                  if (C.compose(t, j) == jps && C.compose(m, t) == v) ++count;
              }
              if (count != 1)
                rep.fail(fmt(
                    "ladder (e={},j={},j'={},m={},u={},v={}) has {} fillers",
                    C.mor_name(e), C.mor_name(j), C.mor_name(jp),
                    C.mor_name(m), C.mor_name(u), C.mor_name(v), count));
            }
          }
        }
    }

  // Derived identities.
  MorphismClass mj = class_compose(C, M, J);
  MorphismClass je = class_compose(C, J, E);
  check_class_equal(rep, C, E, perp_left(C, mj), "E = ⊥(M·J)");
  check_class_equal(rep, C, J, perp_left(C, M).intersect(perp_right(C, E)),
                    "J = ⊥M ∩ E⊥");
  check_class_equal(rep, C, M, perp_right(C, je), "M = (J·E)⊥");
  return rep;
}

ValidationReport verify_qfs(const FinCategory& C, const Qfs& qfs) {
  ValidationReport rep;
  ValidationReport a = verify_fs(C, qfs.W.intersect(qfs.Cof), qfs.Fib);
  for (auto& v : a.violations) rep.fail("(W∩Cof, Fib): " + v);
  ValidationReport b = verify_fs(C, qfs.Cof, qfs.W.intersect(qfs.Fib));
  for (auto& v : b.violations) rep.fail("(Cof, W∩Fib): " + v);
  // 2-out-of-3 over all composable pairs.
  for (int f = 0; f < C.mor_count(); ++f)
    for (int g : C.out_of(C.cod(f))) {
      int gf = C.compose(g, f);
      bool wf = qfs.W.contains(f), wg = qfs.W.contains(g),
           wgf = qfs.W.contains(gf);
      int in = wf + wg + wgf;
      if (in == 2)
        rep.fail(fmt("2-out-of-3 fails at g={}, f={}, gf={}",
                             C.mor_name(g), C.mor_name(f), C.mor_name(gf)));
    }
  return rep;
}

FsFactorization factorize_fs(const FinCategory& C, int f,
                             const MorphismClass& L, const MorphismClass& R) {
  for (int e : C.out_of(C.dom(f))) {
    if (!L.contains(e)) continue;
    for (int m : C.hom(C.cod(e), C.cod(f)))
      if (R.contains(m) && C.compose(m, e) == f) return {e, m};
  }
  throw NoFactorization(
      fmt("{} has no (L,R)-factorization", C.mor_name(f)));
}

std::vector<FsFactorization> all_fs_factorizations(const FinCategory& C, int f,
                                                   const MorphismClass& L,
                                                   const MorphismClass& R) {
  std::vector<FsFactorization> out;
  for (int e : C.out_of(C.dom(f))) {
    if (!L.contains(e)) continue;
    for (int m : C.hom(C.cod(e), C.cod(f)))
      if (R.contains(m) && C.compose(m, e) == f) out.push_back({e, m});
  }
  return out;
}

DfsFactorization factorize_dfs(const FinCategory& C, int f, const Dfs& dfs) {
  for (int e : C.out_of(C.dom(f))) {
    if (!dfs.E.contains(e)) continue;
    for (int j : C.out_of(C.cod(e))) {
      if (!dfs.J.contains(j)) continue;
      for (int m : C.hom(C.cod(j), C.cod(f)))
        if (dfs.M.contains(m) && C.compose(m, C.compose(j, e)) == f)
          return {e, j, m};
    }
  }
  throw NoFactorization(
      fmt("{} has no (E,J,M)-factorization", C.mor_name(f)));
}

std::vector<DfsFactorization> all_dfs_factorizations(const FinCategory& C,
                                                     int f, const Dfs& dfs) {
  std::vector<DfsFactorization> out;
  for (int e : C.out_of(C.dom(f))) {
    if (!dfs.E.contains(e)) continue;
    for (int j : C.out_of(C.cod(e))) {
      if (!dfs.J.contains(j)) continue;
      for (int m : C.hom(C.cod(j), C.cod(f)))
        if (dfs.M.contains(m) && C.compose(m, C.compose(j, e)) == f)
          out.push_back({e, j, m});
    }
  }
  return out;
}

bool fs_factorizations_equivalent(const FinCategory& C,
                                  const FsFactorization& a,
                                  const FsFactorization& b) {
  int count = 0;
  for (int h : C.hom(C.cod(a.left), C.cod(b.left)))
    if (is_iso(C, h) && C.compose(h, a.left) == b.left &&
        C.compose(b.right, h) == a.right)
      ++count;
  return count == 1;
}

bool dfs_factorizations_equivalent(const FinCategory& C,
                                   const DfsFactorization& a,
                                   const DfsFactorization& b) {
  int count = 0;
  for (int s : C.hom(C.cod(a.e), C.cod(b.e))) {
    if (!is_iso(C, s) || C.compose(s, a.e) != b.e) continue;
    for (int t : C.hom(C.cod(a.j), C.cod(b.j))) {
      if (!is_iso(C, t)) continue;
      if (C.compose(t, a.j) == C.compose(b.j, s) &&
          C.compose(b.m, t) == a.m)
        ++count;
    }
  }
  return count == 1;
}

// -- dfs <-> qfs -------------------------------------------------------------

std::optional<std::string> qfs_hypotheses(const FinCategory& C,
                                           const Dfs& dfs) {
  MorphismClass em = class_compose(C, dfs.E, dfs.M);
  MorphismClass me = class_compose(C, dfs.M, dfs.E);
  for (int f : em.members())
    if (!me.contains(f))
      return fmt("(i) E·M ⊆ M·E fails at {}", C.mor_name(f));
  for (int j : dfs.J.members()) {
    if (is_iso(C, j)) continue;
    for (int e : C.out_of(C.cod(j)))
      if (dfs.E.contains(e) && dfs.E.contains(C.compose(e, j)))
        return fmt("(ii) fails: {}∘{} ∈ E but {} not iso",
                           C.mor_name(e), C.mor_name(j), C.mor_name(j));
    for (int m : C.into(C.dom(j)))
      if (dfs.M.contains(m) && dfs.M.contains(C.compose(j, m)))
        return fmt("(ii) fails: {}∘{} ∈ M but {} not iso",
                           C.mor_name(j), C.mor_name(m), C.mor_name(j));
  }
  return std::nullopt;
}

Qfs dfs_to_qfs(const FinCategory& C, const Dfs& dfs) {
  if (auto why = qfs_hypotheses(C, dfs)) throw HypothesisFailed(*why);
  Qfs q;
  q.Cof = class_compose(C, dfs.J, dfs.E);
  q.Cof.set_label("Cof");
  q.W = class_compose(C, dfs.M, dfs.E);
  q.W.set_label("W");
  q.Fib = class_compose(C, dfs.M, dfs.J);
  q.Fib.set_label("Fib");
  return q;
}

Dfs qfs_to_dfs(const FinCategory& C, const Qfs& qfs) {
  (void)C;
  Dfs d;
  d.E = qfs.Cof.intersect(qfs.W);
  d.E.set_label("E");
  d.J = qfs.Cof.intersect(qfs.Fib);
  d.J.set_label("J");
  d.M = qfs.Fib.intersect(qfs.W);
  d.M.set_label("M");
  return d;
}

ValidationReport dfs_qfs_roundtrip(const FinCategory& C, const Dfs& dfs) {
  ValidationReport rep;
  Qfs q = dfs_to_qfs(C, dfs);
  Dfs back = qfs_to_dfs(C, q);
  check_class_equal(rep, C, back.E, dfs.E, "roundtrip E");
  check_class_equal(rep, C, back.J, dfs.J, "roundtrip J");
  check_class_equal(rep, C, back.M, dfs.M, "roundtrip M");
  // And the qfs side: qfs -> dfs -> qfs.
  Qfs q2 = dfs_to_qfs(C, back);
  check_class_equal(rep, C, q2.Cof, q.Cof, "roundtrip Cof");
  check_class_equal(rep, C, q2.W, q.W, "roundtrip W");
  check_class_equal(rep, C, q2.Fib, q.Fib, "roundtrip Fib");
  return rep;
}

// -- locality ----------------------------------------------------------------

namespace {

bool local_impl(const FinCategory& C, int X, const MorphismClass& L,
                bool unique) {
  for (int m : L.members()) {
    int a = C.dom(m), b = C.cod(m);
    for (int f : C.hom(a, X)) {
      int count = 0;
      for (int g : C.hom(b, X))
        if (C.compose(g, m) == f) ++count;
      if (unique ? count != 1 : count > 1) return false;
    }
  }
  return true;
}

}  // namespace

bool is_local(const FinCategory& C, int X, const MorphismClass& L) {
  return local_impl(C, X, L, true);
}

bool is_separating(const FinCategory& C, int X, const MorphismClass& L) {
  return local_impl(C, X, L, false);
}

std::vector<int> local_objects(const FinCategory& C, const MorphismClass& L) {
  std::vector<int> out;
  for (int X = 0; X < C.obj_count(); ++X)
    if (is_local(C, X, L)) out.push_back(X);
  return out;
}

// -- localization checks -----------------------------------------------------

ValidationReport check_localization_properties(const FinCategory& C, const Dfs& dfs) {
  ValidationReport rep;
  MorphismClass je = class_compose(C, dfs.J, dfs.E);
  MorphismClass mj = class_compose(C, dfs.M, dfs.J);
  MorphismClass perp = perp_right(C, je);

  // (i) For morphisms with J·E-local codomain: right orthogonal to J·E
  // iff the domain is J·E-local.
  std::vector<char> loc(C.obj_count());
  for (int X = 0; X < C.obj_count(); ++X) loc[X] = is_local(C, X, je);
  for (int f = 0; f < C.mor_count(); ++f) {
    if (!loc[C.cod(f)]) continue;
    bool rhs = loc[C.dom(f)];
    bool lhs = perp.contains(f);
    if (lhs != rhs)
      rep.fail(fmt("(i) fails at {}: orthogonal={} domain-local={}",
                           C.mor_name(f), lhs, rhs));
  }

  // (ii) C_{R·L} = C_L ∩ C_R for (L,R) = (E,J) and (J,M); Iso ⊆ each class
  // holds for any valid dfs.
  auto check_ii = [&](const MorphismClass& L, const MorphismClass& R,
                      const char* tag) {
    MorphismClass rl = class_compose(C, R, L);
    for (int X = 0; X < C.obj_count(); ++X) {
      bool lhs = is_local(C, X, rl);
      bool rhs = is_local(C, X, L) && is_local(C, X, R);
      if (lhs != rhs)
        rep.fail(fmt("(ii) {} fails at object {}", tag, C.obj_name(X)));
    }
  };
  check_ii(dfs.E, dfs.J, "(J·E)");
  check_ii(dfs.J, dfs.M, "(M·J)");

  // (iii) fibrations between J-local objects are trivial fibrations.
  std::vector<char> jloc(C.obj_count());
  for (int X = 0; X < C.obj_count(); ++X) jloc[X] = is_local(C, X, dfs.J);
  for (int f = 0; f < C.mor_count(); ++f) {
    if (!jloc[C.dom(f)] || !jloc[C.cod(f)]) continue;
    if (mj.contains(f) != dfs.M.contains(f))
      rep.fail(fmt("(iii) fails at {}", C.mor_name(f)));
  }

  // (iv) reflectivity of J·E-local objects via factorization of X -> 1.
  auto terminal = terminal_object(C);
  if (!terminal) {
    rep.fail("(iv) not-applicable: no terminal object");
    return rep;
  }
  for (int X = 0; X < C.obj_count(); ++X) {
    int bang = C.hom(X, *terminal)[0];
    DfsFactorization fac;
    try {
      fac = factorize_dfs(C, bang, dfs);
    } catch (const NoFactorization&) {
      rep.fail(fmt("(iv) no factorization of {} -> 1", C.obj_name(X)));
      continue;
    }
    int unit = C.compose(fac.j, fac.e);
    int B = C.cod(fac.j);
    if (!loc[B])
      rep.fail(fmt("(iv) reflection target of {} not local",
                           C.obj_name(X)));
    for (int A = 0; A < C.obj_count(); ++A) {
      if (!loc[A]) continue;
      for (int f : C.hom(X, A)) {
        int count = 0;
        for (int g : C.hom(B, A))
          if (C.compose(g, unit) == f) ++count;
        if (count != 1)
          rep.fail(fmt(
              "(iv) universal property fails for {} -> {} ({} mediators)",
              C.obj_name(X), C.obj_name(A), count));
      }
    }
  }
  return rep;
}

DiagonalReport check_diagonal(const FinCategory& C, const Dfs& dfs, int A) {
  DiagonalReport out;
  auto prod = compute_product(C, A, A);
  if (!prod) return out;
  int diag = -1;
  int ida = C.identity(A);
  for (int h : C.hom(A, prod->apex))
    if (C.compose(prod->to_left, h) == ida &&
        C.compose(prod->to_right, h) == ida) {
      diag = h;
      break;
    }
  if (diag < 0) return out;
  out.applicable = true;
  MorphismClass je = class_compose(C, dfs.J, dfs.E);
  out.local = is_local(C, A, je);
  out.separating = is_separating(C, A, je);
  out.trivial_fibration = dfs.M.contains(diag);
  if (out.local && !out.trivial_fibration)
    out.implications.fail("local object with non-trivial-fibration diagonal");
  if (out.trivial_fibration && !out.separating)
    out.implications.fail("closed diagonal but object not separating");
  return out;
}

// -- Quillen -----------------------------------------------------------------

namespace {

bool image_contained(const Functor& F, const MorphismClass& src,
                     const MorphismClass& dst) {
  for (int f : src.members()) {
    if (!F.mor_defined(f)) continue;  // truncated domain
    if (!dst.contains(F.on_mor(f))) return false;
  }
  return true;
}

}  // namespace

bool is_left_quillen(const Functor& F, const Dfs& dfs_src, const Dfs& dfs_dst) {
  const FinCategory& C = *F.source;
  const FinCategory& D = *F.target;
  MorphismClass cof_src = class_compose(C, dfs_src.J, dfs_src.E);
  MorphismClass cof_dst = class_compose(D, dfs_dst.J, dfs_dst.E);
  return image_contained(F, cof_src, cof_dst) &&
         image_contained(F, dfs_src.E, dfs_dst.E);
}

bool is_right_quillen(const Functor& G, const Dfs& dfs_dst,
                      const Dfs& dfs_src) {
  const FinCategory& D = *G.source;
  const FinCategory& C = *G.target;
  MorphismClass fib_dst = class_compose(D, dfs_dst.M, dfs_dst.J);
  MorphismClass fib_src = class_compose(C, dfs_src.M, dfs_src.J);
  return image_contained(G, fib_dst, fib_src) &&
         image_contained(G, dfs_dst.M, dfs_src.M);
}

ValidationReport check_quillen_adjunction(const Adjunction& adj,
                                          const Dfs& dfs_src,
                                          const Dfs& dfs_dst) {
  ValidationReport rep = validate_adjunction(adj);
  if (!rep.ok()) return rep;
  bool left = is_left_quillen(adj.left, dfs_src, dfs_dst);
  bool right = is_right_quillen(adj.right, dfs_dst, dfs_src);
  if (!left) rep.fail("left adjoint is not a left Quillen functor");
  if (left != right)
    rep.fail("left/right Quillen characterizations disagree on this instance");
  return rep;
}

bool check_bousfield(const FinCategory& C, const Dfs& dfs1, const Dfs& dfs2) {
  MorphismClass cof1 = class_compose(C, dfs1.J, dfs1.E);
  MorphismClass cof2 = class_compose(C, dfs2.J, dfs2.E);
  if (!(cof1 == cof2)) return false;
  MorphismClass w1 = class_compose(C, dfs1.M, dfs1.E);
  MorphismClass w2 = class_compose(C, dfs2.M, dfs2.E);
  return w1.subset_of(w2);
}

}  // namespace facto
