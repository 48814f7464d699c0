#include "facto/presheaf.hpp"

#include <algorithm>
#include <numeric>

namespace facto {

namespace {

// Odometer over functions domain_size -> values per position. `radix[i]` is
// the number of admissible values at position i. Returns false when done.
bool advance(std::vector<int>& digits, const std::vector<int>& radix) {
  for (size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

long long checked_product(const std::vector<int>& radix, long long cap) {
  long long n = 1;
  for (int r : radix) {
    n *= std::max(r, 1);
    if (n > cap) return cap + 1;
  }
  return n;
}

}  // namespace

// -- presheaves ---------------------------------------------------------------

ValidationReport validate_presheaf(const Presheaf& P) {
  ValidationReport rep;
  const FinCategory& B = *P.base;
  if (static_cast<int>(P.card.size()) != B.obj_count() ||
      static_cast<int>(P.res.size()) != B.mor_count()) {
    rep.fail("presheaf tables do not match the base category");
    return rep;
  }
  for (int f = 0; f < B.mor_count(); ++f) {
    int x = B.dom(f), y = B.cod(f);
    if (static_cast<int>(P.res[f].size()) != P.card[y]) {
      rep.fail(fmt("restriction along morphism {} has wrong arity", f));
      return rep;
    }
    for (int e : P.res[f])
      if (e < 0 || e >= P.card[x]) {
        rep.fail(fmt("restriction along morphism {} leaves the value set", f));
        return rep;
      }
  }
  for (int a = 0; a < B.obj_count(); ++a)
    for (int e = 0; e < P.card[a]; ++e)
      if (P.res[B.identity(a)][e] != e)
        rep.fail(fmt("restriction along id_{} moves element {}", a, e));
  for (int f = 0; f < B.mor_count(); ++f)
    for (int g = 0; g < B.mor_count(); ++g) {
      if (!B.composable(g, f)) continue;
      int gf = B.compose(g, f);
      for (int e = 0; e < P.card[B.cod(g)]; ++e)
        if (P.res[gf][e] != P.res[f][P.res[g][e]])
          rep.fail(fmt("restriction not functorial on pair ({}, {})", g, f));
    }
  return rep;
}

ValidationReport validate_pshmor(const PshMor& t) {
  ValidationReport rep;
  const Presheaf& P = *t.src;
  const Presheaf& Q = *t.dst;
  const FinCategory& B = *P.base;
  for (int b = 0; b < B.obj_count(); ++b) {
    if (static_cast<int>(t.comp[b].size()) != P.card[b]) {
      rep.fail(fmt("component at object {} has wrong arity", b));
      return rep;
    }
    for (int v : t.comp[b])
      if (v < 0 || v >= Q.card[b]) {
        rep.fail(fmt("component at object {} leaves the target set", b));
        return rep;
      }
  }
  for (int f = 0; f < B.mor_count(); ++f) {
    int x = B.dom(f), y = B.cod(f);
    for (int e = 0; e < P.card[y]; ++e)
      if (t.comp[x][P.res[f][e]] != Q.res[f][t.comp[y][e]])
        rep.fail(fmt("naturality fails at morphism {} on element {}", f, e));
  }
  return rep;
}

PshMor psh_identity(const Presheaf& P) {
  PshMor t{&P, &P, {}};
  t.comp.resize(P.card.size());
  for (size_t b = 0; b < P.card.size(); ++b) {
    t.comp[b].resize(P.card[b]);
    std::iota(t.comp[b].begin(), t.comp[b].end(), 0);
  }
  return t;
}

std::vector<std::vector<int>> psh_compose(const PshMor& g, const PshMor& f) {
  std::vector<std::vector<int>> out(f.comp.size());
  for (size_t b = 0; b < f.comp.size(); ++b) {
    out[b].resize(f.comp[b].size());
    for (size_t e = 0; e < f.comp[b].size(); ++e)
      out[b][e] = g.comp[b][f.comp[b][e]];
  }
  return out;
}

bool psh_mono(const PshMor& t) {
  for (size_t b = 0; b < t.comp.size(); ++b) {
    std::vector<char> seen(t.dst->card[b], 0);
    for (int v : t.comp[b]) {
      if (seen[v]) return false;
      seen[v] = 1;
    }
  }
  return true;
}

bool psh_epi(const PshMor& t) {
  for (size_t b = 0; b < t.comp.size(); ++b) {
    std::vector<char> seen(t.dst->card[b], 0);
    for (int v : t.comp[b]) seen[v] = 1;
    for (char s : seen)
      if (!s) return false;
  }
  return true;
}

bool psh_iso(const PshMor& t) { return psh_mono(t) && psh_epi(t); }

Presheaf terminal_presheaf(const FinCategory& B) {
  Presheaf P{&B, std::vector<int>(B.obj_count(), 1), {}, "1"};
  P.res.assign(B.mor_count(), {0});
  return P;
}

Presheaf initial_presheaf(const FinCategory& B) {
  Presheaf P{&B, std::vector<int>(B.obj_count(), 0), {}, "0"};
  P.res.assign(B.mor_count(), {});
  return P;
}

Presheaf representable(const FinCategory& B, int c) {
  Presheaf P{&B, {}, {}, fmt("y({})", B.obj_name(c))};
  P.card.resize(B.obj_count());
  for (int x = 0; x < B.obj_count(); ++x)
    P.card[x] = static_cast<int>(B.hom(x, c).size());
  P.res.resize(B.mor_count());
  for (int f = 0; f < B.mor_count(); ++f) {
    int x = B.dom(f), y = B.cod(f);
    const auto& hy = B.hom(y, c);
    const auto& hx = B.hom(x, c);
    P.res[f].resize(hy.size());
    for (size_t e = 0; e < hy.size(); ++e) {
      int composed = B.compose(hy[e], f);
      auto it = std::find(hx.begin(), hx.end(), composed);
      P.res[f][e] = static_cast<int>(it - hx.begin());
    }
  }
  return P;
}

Presheaf product_presheaf(const Presheaf& P, const Presheaf& Q) {
  const FinCategory& B = *P.base;
  Presheaf R{&B, {}, {}, P.label + "x" + Q.label};
  R.card.resize(B.obj_count());
  for (int b = 0; b < B.obj_count(); ++b) R.card[b] = P.card[b] * Q.card[b];
  R.res.resize(B.mor_count());
  for (int f = 0; f < B.mor_count(); ++f) {
    int x = B.dom(f), y = B.cod(f);
    R.res[f].resize(R.card[y]);
    for (int u = 0; u < P.card[y]; ++u)
      for (int v = 0; v < Q.card[y]; ++v)
        R.res[f][u * Q.card[y] + v] =
            P.res[f][u] * Q.card[x] + Q.res[f][v];
  }
  return R;
}

// -- sieves -------------------------------------------------------------------

bool is_sieve(const FinCategory& B, int b, const Sieve& s) {
  for (int f = 0; f < B.mor_count(); ++f) {
    if (!s[f]) continue;
    if (B.cod(f) != b) return false;
    for (int t : B.into(B.dom(f)))
      if (!s[B.compose(f, t)]) return false;
  }
  return true;
}

Sieve max_sieve(const FinCategory& B, int b) {
  Sieve s(B.mor_count(), 0);
  for (int f : B.into(b)) s[f] = 1;
  return s;
}

Sieve empty_sieve(const FinCategory& B) { return Sieve(B.mor_count(), 0); }

Sieve sieve_pullback(const FinCategory& B, int f, const Sieve& s) {
  Sieve out(B.mor_count(), 0);
  for (int t : B.into(B.dom(f)))
    if (s[B.compose(f, t)]) out[t] = 1;
  return out;
}

bool sieve_member(const Sieve& s, int f) { return s[f] != 0; }

int OmegaPresheaf::index_of(int b, const Sieve& s) const {
  for (size_t i = 0; i < elems[b].size(); ++i)
    if (elems[b][i] == s) return static_cast<int>(i);
  return -1;
}

int OmegaPresheaf::top(int b) const {
  return index_of(b, max_sieve(*psh.base, b));
}

int OmegaPresheaf::bot(int b) const {
  return index_of(b, empty_sieve(*psh.base));
}

OmegaPresheaf omega(const FinCategory& B) {
  OmegaPresheaf Om;
  Om.psh.base = &B;
  Om.psh.label = "Omega";
  Om.elems.resize(B.obj_count());
  for (int b = 0; b < B.obj_count(); ++b) {
    const auto& in = B.into(b);
    if (in.size() > 20)
      throw BoundExceeded(
          fmt("sieve enumeration over {} incoming morphisms", in.size()));
    for (std::uint64_t mask = 0; mask < (1ull << in.size()); ++mask) {
      Sieve s(B.mor_count(), 0);
      for (size_t i = 0; i < in.size(); ++i)
        if (mask >> i & 1) s[in[i]] = 1;
      if (is_sieve(B, b, s)) Om.elems[b].push_back(std::move(s));
    }
    std::sort(Om.elems[b].begin(), Om.elems[b].end(),
              [](const Sieve& a, const Sieve& c) {
                int na = std::count(a.begin(), a.end(), 1);
                int nc = std::count(c.begin(), c.end(), 1);
                if (na != nc) return na < nc;
                return a < c;
              });
    Om.psh.card.push_back(static_cast<int>(Om.elems[b].size()));
  }
  Om.psh.res.resize(B.mor_count());
  for (int f = 0; f < B.mor_count(); ++f) {
    int y = B.cod(f);
    Om.psh.res[f].resize(Om.psh.card[y]);
    for (int i = 0; i < Om.psh.card[y]; ++i) {
      int j = Om.index_of(B.dom(f), sieve_pullback(B, f, Om.elems[y][i]));
      if (j < 0)
        throw InternalDisagreement("sieve pullback left the sieve set");
      Om.psh.res[f][i] = j;
    }
  }
  ValidationReport rep = validate_presheaf(Om.psh);
  if (!rep.ok())
    throw InternalDisagreement("sieve pullback is not functorial: " +
                               rep.violations.front());
  return Om;
}

PshMor true_arrow(const Presheaf& one, const OmegaPresheaf& Om) {
  PshMor t{&one, &Om.psh, {}};
  t.comp.resize(one.card.size());
  for (size_t b = 0; b < one.card.size(); ++b)
    t.comp[b].assign(one.card[b], Om.top(static_cast<int>(b)));
  return t;
}

// -- subobjects ---------------------------------------------------------------

ValidationReport validate_subobject(const Subobject& S) {
  ValidationReport rep;
  const Presheaf& P = *S.of;
  const FinCategory& B = *P.base;
  for (int f = 0; f < B.mor_count(); ++f) {
    int x = B.dom(f), y = B.cod(f);
    for (int e = 0; e < P.card[y]; ++e)
      if (S.sel[y][e] && !S.sel[x][P.res[f][e]])
        rep.fail(
            fmt("selection not closed under restriction along morphism {}",
                f));
  }
  return rep;
}

Subobject full_subobject(const Presheaf& P) {
  Subobject S{&P, {}};
  S.sel.resize(P.card.size());
  for (size_t b = 0; b < P.card.size(); ++b) S.sel[b].assign(P.card[b], 1);
  return S;
}

Subobject empty_subobject(const Presheaf& P) {
  Subobject S{&P, {}};
  S.sel.resize(P.card.size());
  for (size_t b = 0; b < P.card.size(); ++b) S.sel[b].assign(P.card[b], 0);
  return S;
}

Subobject image_subobject(const PshMor& t) {
  Subobject S = empty_subobject(*t.dst);
  for (size_t b = 0; b < t.comp.size(); ++b)
    for (int v : t.comp[b]) S.sel[b][v] = 1;
  return S;
}

Subobject subobject_from_mono(const PshMor& m) {
  if (!psh_mono(m))
    throw NotMono("characteristic data requested for a non-injective map");
  return image_subobject(m);
}

bool sub_leq(const Subobject& a, const Subobject& b) {
  for (size_t i = 0; i < a.sel.size(); ++i)
    for (size_t e = 0; e < a.sel[i].size(); ++e)
      if (a.sel[i][e] && !b.sel[i][e]) return false;
  return true;
}

Subobject sub_intersect(const Subobject& a, const Subobject& b) {
  Subobject out = a;
  for (size_t i = 0; i < out.sel.size(); ++i)
    for (size_t e = 0; e < out.sel[i].size(); ++e)
      out.sel[i][e] = out.sel[i][e] && b.sel[i][e];
  return out;
}

Subobject sub_preimage(const PshMor& h, const Subobject& S) {
  Subobject out = empty_subobject(*h.src);
  for (size_t b = 0; b < h.comp.size(); ++b)
    for (size_t e = 0; e < h.comp[b].size(); ++e)
      out.sel[b][e] = S.sel[b][h.comp[b][e]];
  return out;
}

Presheaf materialize(const Subobject& S) {
  const Presheaf& P = *S.of;
  const FinCategory& B = *P.base;
  Presheaf out{&B, {}, {}, "sub(" + P.label + ")"};
  std::vector<std::vector<int>> pos(P.card.size());
  out.card.resize(P.card.size());
  for (size_t b = 0; b < P.card.size(); ++b) {
    pos[b].assign(P.card[b], -1);
    int n = 0;
    for (int e = 0; e < P.card[b]; ++e)
      if (S.sel[b][e]) pos[b][e] = n++;
    out.card[b] = n;
  }
  out.res.resize(B.mor_count());
  for (int f = 0; f < B.mor_count(); ++f) {
    int x = B.dom(f), y = B.cod(f);
    for (int e = 0; e < P.card[y]; ++e)
      if (S.sel[y][e]) out.res[f].push_back(pos[x][P.res[f][e]]);
  }
  return out;
}

std::vector<std::vector<int>> inclusion_components(const Subobject& S) {
  std::vector<std::vector<int>> comp(S.sel.size());
  for (size_t b = 0; b < S.sel.size(); ++b)
    for (size_t e = 0; e < S.sel[b].size(); ++e)
      if (S.sel[b][e]) comp[b].push_back(static_cast<int>(e));
  return comp;
}

std::vector<std::vector<int>> char_components(const OmegaPresheaf& Om,
                                              const Subobject& S) {
  const Presheaf& A = *S.of;
  const FinCategory& B = *A.base;
  std::vector<std::vector<int>> chi(A.card.size());
  for (int b = 0; b < B.obj_count(); ++b) {
    chi[b].resize(A.card[b]);
    for (int e = 0; e < A.card[b]; ++e) {
      Sieve s(B.mor_count(), 0);
      for (int f : B.into(b))
        if (S.sel[B.dom(f)][A.res[f][e]]) s[f] = 1;
      int i = Om.index_of(b, s);
      if (i < 0)
        throw InternalDisagreement(
            "characteristic values must land in the sieve set");
      chi[b][e] = i;
    }
  }
  return chi;
}

Subobject subobject_of_char(const OmegaPresheaf& Om, const Presheaf& A,
                            const std::vector<std::vector<int>>& chi) {
  Subobject S = empty_subobject(A);
  for (size_t b = 0; b < A.card.size(); ++b)
    for (int e = 0; e < A.card[b]; ++e)
      S.sel[b][e] = chi[b][e] == Om.top(static_cast<int>(b));
  return S;
}

// -- internal meet ------------------------------------------------------------

MeetTable internal_meet(const OmegaPresheaf& Om) {
  const FinCategory& B = *Om.psh.base;
  Presheaf prod = product_presheaf(Om.psh, Om.psh);
  Subobject toptop = empty_subobject(prod);
  for (int b = 0; b < B.obj_count(); ++b) {
    int t = Om.top(b);
    toptop.sel[b][t * Om.psh.card[b] + t] = 1;
  }
  auto chi = char_components(Om, toptop);

  MeetTable mt;
  mt.wedge.resize(B.obj_count());
  for (int b = 0; b < B.obj_count(); ++b) {
    int n = Om.psh.card[b];
    mt.wedge[b].assign(n, std::vector<int>(n, -1));
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        int w = chi[b][u * n + v];
        Sieve meet = Om.elems[b][u];
        for (int f = 0; f < B.mor_count(); ++f)
          meet[f] = meet[f] && Om.elems[b][v][f];
        if (w != Om.index_of(b, meet))
          throw InternalDisagreement(
              "classified meet disagrees with sieve intersection");
        mt.wedge[b][u][v] = w;
      }
  }
  return mt;
}

// -- internal topologies -------------------------------------------------------

LTTopology identity_topology(const OmegaPresheaf& Om) {
  LTTopology k;
  k.k.resize(Om.psh.card.size());
  for (size_t b = 0; b < Om.psh.card.size(); ++b) {
    k.k[b].resize(Om.psh.card[b]);
    std::iota(k.k[b].begin(), k.k[b].end(), 0);
  }
  return k;
}

LTTopology top_topology(const OmegaPresheaf& Om) {
  LTTopology k;
  k.k.resize(Om.psh.card.size());
  for (size_t b = 0; b < Om.psh.card.size(); ++b)
    k.k[b].assign(Om.psh.card[b], Om.top(static_cast<int>(b)));
  return k;
}

ValidationReport validate_topology(const OmegaPresheaf& Om,
                                   const MeetTable& mt, const LTTopology& k) {
  ValidationReport rep;
  const FinCategory& B = *Om.psh.base;
  for (int b = 0; b < B.obj_count(); ++b)
    if (static_cast<int>(k.k[b].size()) != Om.psh.card[b]) {
      rep.fail(fmt("endomap has wrong arity at object {}", b));
      return rep;
    }
  for (int f = 0; f < B.mor_count(); ++f) {
    int x = B.dom(f), y = B.cod(f);
    for (int e = 0; e < Om.psh.card[y]; ++e)
      if (k.k[x][Om.psh.res[f][e]] != Om.psh.res[f][k.k[y][e]])
        rep.fail(fmt("endomap not natural at morphism {}", f));
  }
  for (int b = 0; b < B.obj_count(); ++b) {
    if (k.k[b][Om.top(b)] != Om.top(b))
      rep.fail(fmt("maximal sieve not fixed at object {}", b));
    for (int e = 0; e < Om.psh.card[b]; ++e)
      if (k.k[b][k.k[b][e]] != k.k[b][e])
        rep.fail(fmt("endomap not idempotent at object {} element {}", b, e));
    for (int u = 0; u < Om.psh.card[b]; ++u)
      for (int v = 0; v < Om.psh.card[b]; ++v)
        if (k.k[b][mt.wedge[b][u][v]] != mt.wedge[b][k.k[b][u]][k.k[b][v]])
          rep.fail(
              fmt("meet compatibility fails at object {} pair ({}, {})", b, u,
                  v));
  }
  return rep;
}

std::vector<LTTopology> enumerate_topologies(const OmegaPresheaf& Om,
                                             const MeetTable& mt) {
  const FinCategory& B = *Om.psh.base;
  int n_obj = B.obj_count();
  long long space = 1;
  for (int b = 0; b < n_obj; ++b) {
    long long per = 1;
    for (int e = 0; e < Om.psh.card[b]; ++e) {
      per *= Om.psh.card[b];
      if (per > 10'000'000) throw BoundExceeded("endomap space too large");
    }
    space *= per;
    if (space > 10'000'000) throw BoundExceeded("endomap space too large");
  }

  std::vector<LTTopology> out;
  LTTopology cur;
  cur.k.resize(n_obj);
  // Assign components object by object, pruning by naturality between
  // already-assigned objects.
  std::function<void(int)> rec = [&](int b) {
    if (b == n_obj) {
      if (validate_topology(Om, mt, cur).ok()) out.push_back(cur);
      return;
    }
    int n = Om.psh.card[b];
    std::vector<int> digits(n, 0);
    std::vector<int> radix(n, n);
    do {
      cur.k[b] = digits;
      bool natural = true;
      for (int f = 0; f < B.mor_count() && natural; ++f) {
        int x = B.dom(f), y = B.cod(f);
        if (x > b || y > b) continue;
        for (int e = 0; e < Om.psh.card[y] && natural; ++e)
          if (cur.k[x][Om.psh.res[f][e]] != Om.psh.res[f][cur.k[y][e]])
            natural = false;
      }
      if (natural) rec(b + 1);
    } while (n > 0 && advance(digits, radix));
    if (n == 0) {
      cur.k[b] = {};
      rec(b + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

int count_grothendieck_topologies(const OmegaPresheaf& Om) {
  const FinCategory& B = *Om.psh.base;
  int n_obj = B.obj_count();
  // Per object: subsets of the sieve set that contain the maximal sieve.
  std::vector<int> radix(n_obj);
  for (int b = 0; b < n_obj; ++b) {
    if (Om.psh.card[b] > 20)
      throw BoundExceeded("covering-family space too large");
    radix[b] = 1 << (Om.psh.card[b] - 1);
  }
  if (checked_product(radix, 1'000'000) > 1'000'000)
    throw BoundExceeded("covering-family space too large");

  auto covering = [&](const std::vector<int>& choice, int b, int i) {
    if (i == Om.top(b)) return true;
    int pos = i < Om.top(b) ? i : i - 1;
    return (choice[b] >> pos & 1) != 0;
  };

  std::vector<int> choice(n_obj, 0);
  int count = 0;
  do {
    bool ok = true;
    // stability: pullbacks of covering sieves are covering
    for (int b = 0; b < n_obj && ok; ++b)
      for (int i = 0; i < Om.psh.card[b] && ok; ++i) {
        if (!covering(choice, b, i)) continue;
        for (int f : B.into(b)) {
          int x = B.dom(f);
          int j = Om.index_of(x, sieve_pullback(B, f, Om.elems[b][i]));
          if (!covering(choice, x, j)) {
            ok = false;
            break;
          }
        }
      }
    // transitivity: a sieve whose pullbacks along a covering sieve all
    // cover must itself cover
    for (int b = 0; b < n_obj && ok; ++b)
      for (int i = 0; i < Om.psh.card[b] && ok; ++i)
        for (int r = 0; r < Om.psh.card[b] && ok; ++r) {
          if (!covering(choice, b, r)) continue;
          bool all = true;
          for (int f : B.into(b)) {
            if (!Om.elems[b][r][f]) continue;
            int x = B.dom(f);
            int j = Om.index_of(x, sieve_pullback(B, f, Om.elems[b][i]));
            if (!covering(choice, x, j)) {
              all = false;
              break;
            }
          }
          if (all && !covering(choice, b, i)) ok = false;
        }
    if (ok) ++count;
  } while (advance(choice, radix));
  return count;
}

// -- closure ------------------------------------------------------------------

Subobject closure_of(const OmegaPresheaf& Om, const LTTopology& k,
                     const Subobject& S) {
  auto chi = char_components(Om, S);
  Subobject out = empty_subobject(*S.of);
  for (size_t b = 0; b < out.sel.size(); ++b)
    for (size_t e = 0; e < out.sel[b].size(); ++e)
      out.sel[b][e] =
          k.k[b][chi[b][e]] == Om.top(static_cast<int>(b));
  return out;
}

LTTopology topology_of_closure(
    const OmegaPresheaf& Om,
    const std::function<Subobject(const Subobject&)>& close) {
  Subobject top_point = empty_subobject(Om.psh);
  for (size_t b = 0; b < top_point.sel.size(); ++b)
    top_point.sel[b][Om.top(static_cast<int>(b))] = 1;
  Subobject closed = close(top_point);
  return LTTopology{char_components(Om, closed)};
}

std::vector<Subobject> all_subobjects(const Presheaf& P) {
  const FinCategory& B = *P.base;
  std::vector<int> radix(P.card.size());
  for (size_t b = 0; b < P.card.size(); ++b) {
    if (P.card[b] > 20) throw BoundExceeded("subobject space too large");
    radix[b] = 1 << P.card[b];
  }
  if (checked_product(radix, 1'000'000) > 1'000'000)
    throw BoundExceeded("subobject space too large");

  std::vector<Subobject> out;
  std::vector<int> mask(P.card.size(), 0);
  do {
    Subobject S = empty_subobject(P);
    for (size_t b = 0; b < P.card.size(); ++b)
      for (int e = 0; e < P.card[b]; ++e) S.sel[b][e] = mask[b] >> e & 1;
    bool closed = true;
    for (int f = 0; f < B.mor_count() && closed; ++f) {
      int x = B.dom(f), y = B.cod(f);
      for (int e = 0; e < P.card[y]; ++e)
        if (S.sel[y][e] && !S.sel[x][P.res[f][e]]) {
          closed = false;
          break;
        }
    }
    if (closed) out.push_back(std::move(S));
  } while (advance(mask, radix));
  std::sort(out.begin(), out.end(),
            [](const Subobject& a, const Subobject& b) { return a.sel < b.sel; });
  return out;
}

bool is_dense(const OmegaPresheaf& Om, const LTTopology& k,
              const Subobject& S) {
  return closure_of(Om, k, S) == full_subobject(*S.of);
}

bool is_closed(const OmegaPresheaf& Om, const LTTopology& k,
               const Subobject& S) {
  return closure_of(Om, k, S) == S;
}

ValidationReport check_closure_axioms(const OmegaPresheaf& Om,
                                      const LTTopology& k,
                                      const std::vector<const Presheaf*>& ambs,
                                      const std::vector<PshMor>& mors) {
  ValidationReport rep;
  auto close = [&](const Subobject& S) { return closure_of(Om, k, S); };
  for (const Presheaf* A : ambs) {
    auto subs = all_subobjects(*A);
    for (size_t i = 0; i < subs.size(); ++i) {
      Subobject c = close(subs[i]);
      if (!sub_leq(subs[i], c))
        rep.fail(fmt("closure not inflationary at subobject {} of {}", i,
                     A->label));
      if (!(close(c) == c))
        rep.fail(fmt("closure not idempotent at subobject {} of {}", i,
                     A->label));
      for (size_t j = 0; j < subs.size(); ++j)
        if (!(close(sub_intersect(subs[i], subs[j])) ==
              sub_intersect(c, close(subs[j]))))
          rep.fail(fmt("closure does not preserve the meet of subobjects "
                       "{} and {} of {}",
                       i, j, A->label));
    }
  }
  for (size_t h = 0; h < mors.size(); ++h) {
    const PshMor& t = mors[h];
    for (const Subobject& S : all_subobjects(*t.dst)) {
      Subobject pre = sub_preimage(t, S);
      if (!(close(pre) == sub_preimage(t, close(S))))
        rep.fail(fmt("closure does not commute with preimage along map {}",
                     h));
    }
  }
  return rep;
}

DenseClosedFactor dense_closed_factor(const OmegaPresheaf& Om,
                                      const LTTopology& k,
                                      const Subobject& S) {
  DenseClosedFactor out;
  out.closure = closure_of(Om, k, S);
  if (!sub_leq(S, out.closure))
    throw InternalDisagreement("closure is not inflationary");
  out.middle = materialize(out.closure);
  out.middle.label = "cls(" + S.of->label + ")";
  out.closed_part = inclusion_components(out.closure);

  // Positions of the selected elements inside the materialized closure.
  Subobject inside{&out.middle, {}};
  inside.sel.resize(S.sel.size());
  out.dense_part.resize(S.sel.size());
  for (size_t b = 0; b < S.sel.size(); ++b) {
    int pos = 0;
    for (size_t e = 0; e < S.sel[b].size(); ++e) {
      if (!out.closure.sel[b][e]) continue;
      inside.sel[b].push_back(S.sel[b][e]);
      if (S.sel[b][e]) out.dense_part[b].push_back(pos);
      ++pos;
    }
  }
  if (!is_dense(Om, k, inside))
    throw InternalDisagreement("left factor is not dense in the closure");
  if (!is_closed(Om, k, out.closure))
    throw InternalDisagreement("closure is not closed in the ambient object");
  return out;
}

// -- sheaves ------------------------------------------------------------------

std::vector<int> covering_sieves(const OmegaPresheaf& Om, const LTTopology& k,
                                 int b) {
  std::vector<int> out;
  for (int i = 0; i < Om.psh.card[b]; ++i)
    if (k.k[b][i] == Om.top(b)) out.push_back(i);
  return out;
}

namespace {

// Matching families for a sieve, each a full-length vector over base
// morphism ids with -1 outside the sieve. Deterministic odometer order.
std::vector<std::vector<int>> matching_families(const FinCategory& B,
                                                const Presheaf& P,
                                                const Sieve& s) {
  std::vector<int> members;
  for (int f = 0; f < B.mor_count(); ++f)
    if (s[f]) members.push_back(f);
  std::vector<int> radix(members.size());
  for (size_t i = 0; i < members.size(); ++i)
    radix[i] = P.card[B.dom(members[i])];
  if (checked_product(radix, 1'000'000) > 1'000'000)
    throw BoundExceeded("matching-family space too large");

  std::vector<std::vector<int>> out;
  for (int r : radix)
    if (r == 0) return out;  // no family assigns into an empty set
  std::vector<int> digits(members.size(), 0);
  auto member_pos = [&](int f) {
    return static_cast<int>(
        std::find(members.begin(), members.end(), f) - members.begin());
  };
  do {
    bool ok = true;
    for (size_t i = 0; i < members.size() && ok; ++i) {
      int f = members[i];
      for (int g : B.into(B.dom(f))) {
        int fg = B.compose(f, g);
        if (digits[member_pos(fg)] != P.res[g][digits[i]]) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      std::vector<int> fam(B.mor_count(), -1);
      for (size_t i = 0; i < members.size(); ++i) fam[members[i]] = digits[i];
      out.push_back(std::move(fam));
    }
  } while (!members.empty() && advance(digits, radix));
  return out;
}

int count_amalgamations(const FinCategory& B, const Presheaf& P,
                        const Sieve& s, const std::vector<int>& fam, int b) {
  int count = 0;
  for (int y = 0; y < P.card[b]; ++y) {
    bool ok = true;
    for (int f : B.into(b)) {
      if (!s[f]) continue;
      if (P.res[f][y] != fam[f]) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  }
  return count;
}

bool sheaf_condition(const OmegaPresheaf& Om, const LTTopology& k,
                     const Presheaf& P, bool require_existence) {
  const FinCategory& B = *P.base;
  for (int b = 0; b < B.obj_count(); ++b)
    for (int si : covering_sieves(Om, k, b)) {
      const Sieve& s = Om.elems[b][si];
      for (const auto& fam : matching_families(B, P, s)) {
        int n = count_amalgamations(B, P, s, fam, b);
        if (n > 1 || (require_existence && n != 1)) return false;
      }
    }
  return true;
}

}  // namespace

bool is_sheaf(const OmegaPresheaf& Om, const LTTopology& k,
              const Presheaf& P) {
  return sheaf_condition(Om, k, P, true);
}

bool is_separated(const OmegaPresheaf& Om, const LTTopology& k,
                  const Presheaf& P) {
  return sheaf_condition(Om, k, P, false);
}

// -- sheafification ------------------------------------------------------------

namespace {

struct PlusData {
  Presheaf psh;
  std::vector<std::vector<int>> unit;  // P -> plus
  // class representatives per object: (sieve index, family)
  std::vector<std::vector<std::pair<int, std::vector<int>>>> reps;
  std::vector<std::vector<int>> cls;  // rep index -> class
};

PlusData plus_construction(const OmegaPresheaf& Om, const LTTopology& k,
                           const Presheaf& P) {
  const FinCategory& B = *P.base;
  PlusData out;
  out.psh.base = &B;
  out.psh.label = P.label + "+";
  out.reps.resize(B.obj_count());
  out.cls.resize(B.obj_count());

  for (int b = 0; b < B.obj_count(); ++b) {
    auto& reps = out.reps[b];
    for (int si : covering_sieves(Om, k, b))
      for (auto& fam : matching_families(B, P, Om.elems[b][si]))
        reps.emplace_back(si, std::move(fam));

    // Union-find over representatives: related when the families agree on
    // some covering sieve contained in both.
    std::vector<int> parent(reps.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    auto agree_on = [&](const std::vector<int>& f1, const std::vector<int>& f2,
                        const Sieve& s) {
      for (int f = 0; f < B.mor_count(); ++f)
        if (s[f] && f1[f] != f2[f]) return false;
      return true;
    };
    for (size_t i = 0; i < reps.size(); ++i)
      for (size_t j = i + 1; j < reps.size(); ++j) {
        if (find(static_cast<int>(i)) == find(static_cast<int>(j))) continue;
        for (int si : covering_sieves(Om, k, b)) {
          const Sieve& s = Om.elems[b][si];
          bool inside = true;
          for (int f = 0; f < B.mor_count() && inside; ++f)
            if (s[f] && (!Om.elems[b][reps[i].first][f] ||
                         !Om.elems[b][reps[j].first][f]))
              inside = false;
          if (inside && agree_on(reps[i].second, reps[j].second, s)) {
            parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
            break;
          }
        }
      }

    out.cls[b].resize(reps.size());
    int n = 0;
    std::vector<int> root_class(reps.size(), -1);
    for (size_t i = 0; i < reps.size(); ++i) {
      int r = find(static_cast<int>(i));
      if (root_class[r] < 0) root_class[r] = n++;
      out.cls[b][i] = root_class[r];
    }
    out.psh.card.push_back(n);
  }

  auto class_of = [&](int b, int si, const std::vector<int>& fam) {
    for (size_t i = 0; i < out.reps[b].size(); ++i)
      if (out.reps[b][i].first == si && out.reps[b][i].second == fam)
        return out.cls[b][i];
    throw InternalDisagreement("restricted family left the family set");
  };

  out.psh.res.resize(B.mor_count());
  for (int f = 0; f < B.mor_count(); ++f) {
    int x = B.dom(f), y = B.cod(f);
    out.psh.res[f].assign(out.psh.card[y], -1);
    for (size_t i = 0; i < out.reps[y].size(); ++i) {
      if (out.psh.res[f][out.cls[y][i]] >= 0) continue;
      const auto& [si, fam] = out.reps[y][i];
      Sieve pulled = sieve_pullback(B, f, Om.elems[y][si]);
      int pi = Om.index_of(x, pulled);
      if (k.k[x][pi] != Om.top(x))
        throw InternalDisagreement("pulled-back covering sieve not covering");
      std::vector<int> pfam(B.mor_count(), -1);
      for (int t = 0; t < B.mor_count(); ++t)
        if (pulled[t]) pfam[t] = fam[B.compose(f, t)];
      out.psh.res[f][out.cls[y][i]] = class_of(x, pi, pfam);
    }
  }

  out.unit.resize(B.obj_count());
  for (int b = 0; b < B.obj_count(); ++b) {
    out.unit[b].resize(P.card[b]);
    for (int e = 0; e < P.card[b]; ++e) {
      std::vector<int> fam(B.mor_count(), -1);
      for (int f : B.into(b)) fam[f] = P.res[f][e];
      out.unit[b][e] = class_of(b, Om.top(b), fam);
    }
  }

  ValidationReport rep = validate_presheaf(out.psh);
  if (!rep.ok())
    throw InternalDisagreement("family quotient is not a presheaf: " +
                               rep.violations.front());
  return out;
}

}  // namespace

SheafificationResult sheafify(const OmegaPresheaf& Om, const LTTopology& k,
                              const Presheaf& P) {
  SheafificationResult out;
  PlusData once = plus_construction(Om, k, P);
  PlusData twice = plus_construction(Om, k, once.psh);
  out.plus1 = std::move(once.psh);
  out.sheaf = std::move(twice.psh);
  out.sheaf.label = "a(" + P.label + ")";
  out.unit1 = std::move(once.unit);
  out.unit.resize(out.unit1.size());
  for (size_t b = 0; b < out.unit1.size(); ++b) {
    out.unit[b].resize(out.unit1[b].size());
    for (size_t e = 0; e < out.unit1[b].size(); ++e)
      out.unit[b][e] = twice.unit[b][out.unit1[b][e]];
  }
  return out;
}

// -- exponentials --------------------------------------------------------------

ExponentialResult exponential(const FinCategory& B, const Presheaf& P,
                              const Presheaf& Q) {
  ExponentialResult E;
  E.exp.base = &B;
  E.exp.label = Q.label + "^" + P.label;
  E.family.resize(B.obj_count());

  // Position table: at object c, a family assigns a value in Q(dom f) for
  // every f in into(c) and x in P(dom f).
  std::vector<std::vector<int>> pos_base(B.obj_count());
  for (int c = 0; c < B.obj_count(); ++c) {
    const auto& in = B.into(c);
    std::vector<int> radix;
    std::vector<int> base(B.mor_count(), -1);
    int total = 0;
    for (int f : in) {
      base[f] = total;
      total += P.card[B.dom(f)];
      for (int i = 0; i < P.card[B.dom(f)]; ++i)
        radix.push_back(Q.card[B.dom(f)]);
    }
    pos_base[c] = base;
    if (checked_product(radix, 1'000'000) > 1'000'000)
      throw BoundExceeded("exponential family space too large");

    auto natural = [&](const std::vector<int>& fam) {
      for (int f : in) {
        int d = B.dom(f);
        for (int g : B.into(d)) {
          int fg = B.compose(f, g);
          for (int x = 0; x < P.card[d]; ++x)
            if (fam[base[fg] + P.res[g][x]] != Q.res[g][fam[base[f] + x]])
              return false;
        }
      }
      return true;
    };

    bool empty_positions = radix.empty();
    bool dead = false;
    for (int r : radix)
      if (r == 0) dead = true;
    if (empty_positions) {
      E.family[c].push_back({});
    } else if (!dead) {
      std::vector<int> digits(radix.size(), 0);
      do {
        if (natural(digits)) E.family[c].push_back(digits);
      } while (advance(digits, radix));
    }
    E.exp.card.push_back(static_cast<int>(E.family[c].size()));
  }

  auto family_index = [&](int c, const std::vector<int>& fam) {
    for (size_t i = 0; i < E.family[c].size(); ++i)
      if (E.family[c][i] == fam) return static_cast<int>(i);
    throw InternalDisagreement("restricted family is not natural");
  };

  E.exp.res.resize(B.mor_count());
  for (int h = 0; h < B.mor_count(); ++h) {
    int cp = B.dom(h), c = B.cod(h);
    for (const auto& fam : E.family[c]) {
      std::vector<int> rfam;
      for (int fp : B.into(cp)) {
        int hf = B.compose(h, fp);
        for (int x = 0; x < P.card[B.dom(fp)]; ++x)
          rfam.push_back(fam[pos_base[c][hf] + x]);
      }
      E.exp.res[h].push_back(family_index(cp, rfam));
    }
  }
  {
    ValidationReport rep = validate_presheaf(E.exp);
    if (!rep.ok())
      throw InternalDisagreement("exponential is not a presheaf: " +
                                 rep.violations.front());
  }

  E.ev.resize(B.obj_count());
  for (int c = 0; c < B.obj_count(); ++c) {
    E.ev[c].resize(E.exp.card[c] * P.card[c]);
    for (int e = 0; e < E.exp.card[c]; ++e)
      for (int x = 0; x < P.card[c]; ++x)
        E.ev[c][e * P.card[c] + x] =
            E.family[c][e][pos_base[c][B.identity(c)] + x];
  }
  return E;
}

std::vector<std::vector<int>> exponential_transpose(
    const ExponentialResult& E, const Presheaf& R, const Presheaf& P,
    const std::vector<std::vector<int>>& t) {
  const FinCategory& B = *R.base;
  std::vector<std::vector<int>> g(B.obj_count());
  for (int c = 0; c < B.obj_count(); ++c) {
    g[c].resize(R.card[c]);
    for (int r = 0; r < R.card[c]; ++r) {
      std::vector<int> fam;
      for (int f : B.into(c)) {
        int d = B.dom(f);
        for (int x = 0; x < P.card[d]; ++x)
          fam.push_back(t[d][R.res[f][r] * P.card[d] + x]);
      }
      int idx = -1;
      for (size_t i = 0; i < E.family[c].size(); ++i)
        if (E.family[c][i] == fam) {
          idx = static_cast<int>(i);
          break;
        }
      if (idx < 0)
        throw InternalDisagreement("transposed family is not natural");
      g[c][r] = idx;
    }
  }
  return g;
}

}  // namespace facto
