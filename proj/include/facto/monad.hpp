#pragma once

#include <map>
#include <memory>
#include <tuple>

#include "facto/ortho.hpp"
#include "facto/setlike.hpp"

// Monads and comonads on finite categories, Eilenberg-Moore (co)algebra
// categories, free/forgetful adjunctions, induced factorization systems,
// and the bounded group-action instance generator.
//
// Endofunctors may be partial (entries -1): bounded-set monads like G×(−)
// leave any finite skeleton eventually. Laws are checked on the defined
// subdomain and reports state the truncation.

namespace facto {

struct Monad {
  Functor T;               // endofunctor, possibly partial
  std::vector<int> unit;   // per object a: η_a : a -> Ta   (-1 = undefined)
  std::vector<int> mult;   // per object a: μ_a : TTa -> Ta (-1 = undefined)

  const FinCategory& cat() const { return *T.source; }
};

struct Comonad {
  Functor G;                 // endofunctor, possibly partial
  std::vector<int> counit;   // per object a: ε_a : Ga -> a
  std::vector<int> comult;   // per object a: δ_a : Ga -> GGa

  const FinCategory& cat() const { return *G.source; }
};

Monad identity_monad(const FinCategory& C);
Comonad identity_comonad(const FinCategory& C);

/// Unit/multiplication squares plus naturality, each checked wherever the
/// (possibly partial) functor data is defined.
ValidationReport validate_monad(const Monad& M);
ValidationReport validate_comonad(const Comonad& W);

struct Algebra {
  int carrier = -1;    // object A
  int structure = -1;  // morphism h : TA -> A
  // The associativity square needs T(h); when T is truncated there the
  // algebra is admitted with this flag cleared (and the caller may verify
  // the law by instance-specific means).
  bool fully_checked = true;

  auto operator<=>(const Algebra& o) const {
    return std::tie(carrier, structure) <=> std::tie(o.carrier, o.structure);
  }
  bool operator==(const Algebra& o) const {
    return carrier == o.carrier && structure == o.structure;
  }
};

/// All (A,h) with h∘η_A = id_A, and h∘T(h) = h∘μ_A where checkable,
/// ordered by (carrier, structure).
std::vector<Algebra> enumerate_algebras(const Monad& M);

/// Materialized Eilenberg-Moore category: objects are algebras, morphisms
/// are structure-compatible base morphisms. Heap-held because the functor
/// accessors reference the contained category.
struct EMCategory {
  const FinCategory* base = nullptr;
  Monad monad;
  FinCategory category;
  std::vector<Algebra> algebras;       // per object of `category`
  std::vector<int> mor_base;           // em morphism -> base morphism
  std::vector<int> free_obj;           // base object -> em object or -1
  std::vector<int> free_mor;           // base morphism -> em morphism or -1

  Functor forgetful() const;
  Functor free() const;  // partial wherever (TA, μ_A) is unavailable

  int find_algebra(int carrier, int structure) const;
  /// Morphism id for (src algebra, dst algebra, underlying base morphism).
  int find_mor(int src, int dst, int base_mor) const;

  std::map<std::tuple<int, int, int>, int> mor_lookup;
};

/// Builds the EM category over the given algebras (default: all enumerated
/// ones). Throws BoundExceeded past the morphism cap.
std::unique_ptr<EMCategory> em_category(
    const Monad& M, std::optional<std::vector<Algebra>> algebras = {});

/// Preimage of a base class under the forgetful functor.
MorphismClass preimage_class(const EMCategory& em, const MorphismClass& c);
Dfs induced_classes(const EMCategory& em, const Dfs& base);

/// Owns every functor a constructed adjunction's transformations point at.
struct AdjunctionBundle {
  std::unique_ptr<Functor> F, G, GF, FG, idC, idD;
  Adjunction adj;
};

AdjunctionBundle free_forgetful_adjunction(const EMCategory& em);

struct LiftedFactorization {
  int e, m;  // base (L,R)-factorization of the underlying morphism
  int k;     // induced structure TC -> C on the middle object
};

/// Lifts the (L,R)-factorization of an algebra morphism to the EM category:
/// k is the unique filler with m∘k = d∘T(m) and k∘T(e) = e∘h. Verifies
/// (C,k) is an algebra and that e, m are algebra morphisms.
LiftedFactorization lift_factorization(const EMCategory& em, int f_em, const MorphismClass& L,
                         const MorphismClass& R);

/// Right-induced dfs on the EM category: verifies the dfs axioms for the
/// forgetful preimages, the local-object equivalence for S ∈ {J, J·E},
/// and that free ⊣ forgetful is a Quillen adjunction. Throws
/// HypothesisFailed when T fails to preserve E or J on its domain.
ValidationReport check_right_induced_dfs(const EMCategory& em, const Dfs& dfs);

/// Coalgebras of (G,ε,δ) computed as algebras of the dual monad on the
/// opposite category; `category` is the opposite of that EM category, so
/// ids agree with `dual`.
struct CoEMCategory {
  const FinCategory* base = nullptr;
  std::unique_ptr<FinCategory> base_op;
  Comonad comonad;
  std::unique_ptr<EMCategory> dual;
  FinCategory category;
  std::vector<Algebra> coalgebras;  // structure s : A -> GA
  std::vector<int> mor_base;

  Functor forgetful() const;
  int find_coalgebra(int carrier, int structure) const;
};

std::unique_ptr<CoEMCategory> coem_category(const Comonad& W);

/// Left-induced dfs on coalgebras: (i) dfs axioms for forgetful preimages,
/// (ii) reflection of J·E-local objects, (iii) the locality equivalence
/// when G preserves J·E-local objects. Checks G's preservation of
/// equalizers/pullbacks, trivial fibrations and bifibrant morphisms first.
ValidationReport check_left_induced_dfs(const CoEMCategory& co, const Dfs& dfs);

/// Lifted Quillen adjunction between two EM categories: requires
/// R∘V_D = V_C∘Q on the nose, the base adjunction Quillen, and checks the
/// lifted adjunction against both induced triples.
ValidationReport check_lifted_quillen(const EMCategory& emC, const EMCategory& emD,
                            const Adjunction& base_adj,
                            const Adjunction& lifted_adj, const Dfs& dfsC,
                            const Dfs& dfsD);

/// Bounded G×(−) monad over a finite-set skeleton, with
/// η_X(x) = (e,x) and μ_X(g₁,(g₂,x)) = (g₁g₂,x). Pairs (g,x) are encoded
/// as g·|X| + x. The skeleton bound is the largest size within the
/// morphism cap, at most |G|·N; T is undefined where |G|·|X| exceeds it.
struct GroupActionInstance {
  GroupTable group;
  int carrier_bound = 0;   // requested N
  int skeleton_bound = 0;  // realized ambient bound
  std::unique_ptr<SetSkeleton> sets;
  Monad monad;
  std::unique_ptr<EMCategory> em;
};

GroupActionInstance group_action_instance(const GroupTable& g, int N);

}  // namespace facto
