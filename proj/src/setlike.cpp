#include "facto/setlike.hpp"


namespace facto {

namespace {

// Enumerates all functions [d] -> [c] in lexicographic order.
std::vector<std::vector<int>> all_functions(int d, int c) {
  std::vector<std::vector<int>> out;
  if (d == 0) {
    out.push_back({});
    return out;
  }
  if (c == 0) return out;  // no functions from nonempty to empty
  std::vector<int> fn(d, 0);
  while (true) {
    out.push_back(fn);
    int i = d - 1;
    while (i >= 0 && fn[i] == c - 1) fn[i--] = 0;
    if (i < 0) break;
    ++fn[i];
  }
  return out;
}

}  // namespace

SetSkeleton::SetSkeleton(int max_size) : max_size_(max_size) {
  for (int n = 0; n <= max_size; ++n) cat_.add_object(std::to_string(n));
  index_.assign(max_size + 1, std::vector<std::vector<int>>(max_size + 1));
  lut_.assign(max_size + 1,
              std::vector<std::map<std::vector<int>, int>>(max_size + 1));
  fn_.resize(cat_.mor_count());
  // Identities are functions too; register their tables.
  for (int n = 0; n <= max_size; ++n) {
    std::vector<int> idfn(n);
    for (int i = 0; i < n; ++i) idfn[i] = i;
    int id = cat_.identity(n);
    if (static_cast<int>(fn_.size()) <= id) fn_.resize(id + 1);
    fn_[id] = idfn;
    index_[n][n].push_back(id);
    lut_[n][n].emplace(fn_[id], id);
  }
  for (int d = 0; d <= max_size; ++d)
    for (int c = 0; c <= max_size; ++c)
      for (auto& fn : all_functions(d, c)) {
        if (d == c) {
          bool is_id = true;
          for (int i = 0; i < d; ++i)
            if (fn[i] != i) { is_id = false; break; }
          if (is_id) continue;  // already present as identity
        }
        int m = cat_.add_morphism(d, c);
        fn_.resize(cat_.mor_count());
        fn_[m] = fn;
        index_[d][c].push_back(m);
        lut_[d][c].emplace(fn, m);
      }
  // Composition by table lookup.
  for (int f = 0; f < cat_.mor_count(); ++f)
    for (int g = 0; g < cat_.mor_count(); ++g) {
      if (cat_.cod(f) != cat_.dom(g)) continue;
      std::vector<int> comp(fn_[f].size());
      for (size_t i = 0; i < comp.size(); ++i) comp[i] = fn_[g][fn_[f][i]];
      cat_.set_compose(g, f, mor_of_unfinalized(cat_.dom(f), cat_.cod(g), comp));
    }
  cat_.finalize();
}

int SetSkeleton::mor_of_unfinalized(int d, int c,
                                    const std::vector<int>& fn) const {
  auto it = lut_[d][c].find(fn);
  if (it != lut_[d][c].end()) return it->second;
  throw UnknownId(fmt("no morphism {} -> {} with that table", d, c));
}

int SetSkeleton::mor_of(int d, int c, const std::vector<int>& fn) const {
  return mor_of_unfinalized(d, c, fn);
}

std::vector<int> SetSkeleton::fn_of(int mor) const { return fn_.at(mor); }

FinCategory chain_poset(int n) {
  FinCategory C;
  for (int i = 0; i < n; ++i) C.add_object(std::to_string(i));
  std::vector<std::vector<int>> arrow(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i) arrow[i][i] = C.identity(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      arrow[i][j] = C.add_morphism(i, j, fmt("le_{}_{}", i, j));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        C.set_compose(arrow[j][k], arrow[i][j], arrow[i][k]);
  C.finalize();
  return C;
}

FinCategory walking_arrow() {
  FinCategory C;
  int a = C.add_object("a"), b = C.add_object("b");
  C.add_morphism(a, b, "f");
  C.finalize();
  return C;
}

FinCategory terminal_category() {
  FinCategory C;
  C.add_object("pt");
  C.finalize();
  return C;
}

int GroupTable::unit() const {
  for (int e = 0; e < order(); ++e) {
    bool ok = true;
    for (int g = 0; g < order() && ok; ++g)
      if (mult[e][g] != g || mult[g][e] != g) ok = false;
    if (ok) return e;
  }
  return -1;
}

ValidationReport GroupTable::validate() const {
  ValidationReport rep;
  int n = order();
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(mult[i].size()) != n) {
      rep.fail("multiplication table is not square");
      return rep;
    }
    for (int j = 0; j < n; ++j)
      if (mult[i][j] < 0 || mult[i][j] >= n)
        rep.fail(fmt("entry {}*{} out of range", i, j));
  }
  if (!rep.ok()) return rep;
  if (unit() < 0) rep.fail("no identity element");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (mult[mult[i][j]][k] != mult[i][mult[j][k]]) {
          rep.fail(fmt("associativity fails at ({},{},{})", i, j, k));
          return rep;
        }
  int e = unit();
  if (e >= 0)
    for (int i = 0; i < n; ++i) {
      bool has_inv = false;
      for (int j = 0; j < n; ++j)
        if (mult[i][j] == e && mult[j][i] == e) has_inv = true;
      if (!has_inv) rep.fail(fmt("element {} has no inverse", i));
    }
  return rep;
}

GroupTable cyclic_group(int n) {
  GroupTable g;
  g.mult.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    g.names.push_back(i == 0 ? "e" : "g" + std::to_string(i));
    for (int j = 0; j < n; ++j) g.mult[i][j] = (i + j) % n;
  }
  return g;
}

GroupTable trivial_group() { return cyclic_group(1); }

}  // namespace facto
