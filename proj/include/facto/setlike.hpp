#pragma once

#include <map>
#include <vector>

#include "facto/fincat.hpp"

// Generators for the stock instance categories: skeletal finite sets,
// chain posets, finite groups by multiplication table.

namespace facto {

/// Skeleton of finite sets of size <= N. Object k is "the" k-element set,
/// morphisms are all functions, composition is function composition.
/// Function tables are recoverable from morphism ids.
class SetSkeleton {
 public:
  explicit SetSkeleton(int max_size);

  const FinCategory& cat() const { return cat_; }
  int max_size() const { return max_size_; }

  /// Object representing a set of the given size (equal to the size itself).
  int obj_of_size(int n) const { return n; }
  int size_of(int obj) const { return obj; }

  /// Morphism id for the function d -> c given by table fn (fn[i] in [0,c)).
  int mor_of(int dom_size, int cod_size, const std::vector<int>& fn) const;
  /// Function table of a morphism.
  std::vector<int> fn_of(int mor) const;

 private:
  int mor_of_unfinalized(int dom_size, int cod_size,
                         const std::vector<int>& fn) const;

  int max_size_;
  FinCategory cat_;
  std::vector<std::vector<int>> fn_;                 // per morphism
  std::vector<std::vector<std::vector<int>>> index_; // [dom][cod] -> list
  // [dom][cod] function-table lookup; keeps the composition fill linear in
  // the number of composable pairs instead of scanning hom sets.
  std::vector<std::vector<std::map<std::vector<int>, int>>> lut_;
};

/// Chain poset 0 < 1 < ... < n-1 as a category (one morphism i -> j iff
/// i <= j).
FinCategory chain_poset(int n);

/// Walking arrow: objects a, b and one non-identity morphism f : a -> b.
FinCategory walking_arrow();

/// One object, identity only.
FinCategory terminal_category();

/// Finite group from a multiplication table: table[i][j] = i*j, identity
/// element required at index 0... the constructor locates the identity.
struct GroupTable {
  std::vector<std::vector<int>> mult;
  std::vector<std::string> names;

  int order() const { return static_cast<int>(mult.size()); }
  int unit() const;
  ValidationReport validate() const;
};

GroupTable cyclic_group(int n);
GroupTable trivial_group();

}  // namespace facto
