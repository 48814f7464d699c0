#pragma once

#include <optional>
#include <string>
#include <vector>

#include "facto/fincat.hpp"

// Lifting and orthogonality machinery: (weak/double/Quillen) factorization
// systems, locality, Quillen adjunction checks, Bousfield comparison.
// Every verdict is decided by exhaustive enumeration over the finite
// category.

namespace facto {

/// Extensional set of morphisms of a fixed category, with O(1) membership.
class MorphismClass {
 public:
  MorphismClass() = default;
  MorphismClass(const FinCategory& C, std::string label);

  const FinCategory& cat() const { return *cat_; }
  const std::string& label() const { return label_; }
  void set_label(std::string l) { label_ = std::move(l); }

  bool contains(int f) const { return member_[f]; }
  void insert(int f) { member_.at(f) = 1; }
  void erase(int f) { member_.at(f) = 0; }
  int size() const;
  std::vector<int> members() const;

  bool operator==(const MorphismClass& o) const { return member_ == o.member_; }
  bool subset_of(const MorphismClass& o) const;

  MorphismClass intersect(const MorphismClass& o) const;
  MorphismClass unite(const MorphismClass& o) const;

 private:
  const FinCategory* cat_ = nullptr;
  std::vector<char> member_;
  std::string label_;
};

// Standard classes, materialized by definition sweeps.
MorphismClass all_morphisms(const FinCategory& C);
MorphismClass no_morphisms(const FinCategory& C);
MorphismClass iso_class(const FinCategory& C);
MorphismClass mono_class(const FinCategory& C);
MorphismClass epi_class(const FinCategory& C);
/// e extremal epi: e epi and every mono dividing it (e = m∘x, m mono) is iso.
MorphismClass extremal_epi_class(const FinCategory& C);
MorphismClass extremal_mono_class(const FinCategory& C);
/// e strong epi: e epi and e has unique-lifting against every mono.
MorphismClass strong_epi_class(const FinCategory& C);
MorphismClass strong_mono_class(const FinCategory& C);
/// e regular epi: e is a coequalizer of some parallel pair.
MorphismClass regular_epi_class(const FinCategory& C);
MorphismClass regular_mono_class(const FinCategory& C);
/// Bimorphisms: mono and epi.
MorphismClass bim_class(const FinCategory& C);

// -- lifting -----------------------------------------------------------------

struct NonCommutingSquare : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// All diagonal fillers of the commuting square  v∘f = g∘u  (u on top,
/// v on the bottom), in ascending id order.
struct LiftReport {
  int f, g, u, v;
  std::vector<int> fillers;  // h with h∘f = u and g∘h = v
};

LiftReport lift_fillers(const FinCategory& C, int f, int g, int u, int v);

/// f has the left lifting property against g: every commuting square admits
/// at least one filler.
bool has_llp(const FinCategory& C, int f, int g);
/// f ⊥ g: every commuting square admits exactly one filler.
bool is_orthogonal(const FinCategory& C, int f, int g);

MorphismClass perp_right(const FinCategory& C, const MorphismClass& M);
MorphismClass perp_left(const FinCategory& C, const MorphismClass& M);
MorphismClass box_right(const FinCategory& C, const MorphismClass& M);
MorphismClass box_left(const FinCategory& C, const MorphismClass& M);

/// R·L = { m∘e | m ∈ R, e ∈ L, composable }.
MorphismClass class_compose(const FinCategory& C, const MorphismClass& R,
                            const MorphismClass& L);

// -- factorization systems ---------------------------------------------------

struct Dfs {
  MorphismClass E, J, M;
};

struct Qfs {
  MorphismClass Cof, W, Fib;
};

/// Weak factorization system: Mor C = R·L and L = box_left(R),
/// R = box_right(L).
ValidationReport verify_wfs(const FinCategory& C, const MorphismClass& L,
                            const MorphismClass& R);
/// Orthogonal factorization system: Mor C = R·L and L = perp_left(R),
/// R = perp_right(L).
ValidationReport verify_fs(const FinCategory& C, const MorphismClass& L,
                           const MorphismClass& R);

/// Double factorization system axioms: iso-stability, Mor C = M·J·E, and
/// unique ladder fillers (s,t); also re-derives E = ⊥(M·J),
/// J = ⊥M ∩ E⊥, M = (J·E)⊥.
ValidationReport verify_dfs(const FinCategory& C, const Dfs& dfs);

/// Quillen factorization system: two orthogonal fs's plus 2-out-of-3 for W.
ValidationReport verify_qfs(const FinCategory& C, const Qfs& qfs);

struct NoFactorization : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FsFactorization {
  int left, right;  // f = right ∘ left
};
struct DfsFactorization {
  int e, j, m;  // f = m ∘ j ∘ e
};

/// Lexicographically least (L,R)-factorization of f.
FsFactorization factorize_fs(const FinCategory& C, int f,
                             const MorphismClass& L, const MorphismClass& R);
std::vector<FsFactorization> all_fs_factorizations(const FinCategory& C, int f,
                                                   const MorphismClass& L,
                                                   const MorphismClass& R);

DfsFactorization factorize_dfs(const FinCategory& C, int f, const Dfs& dfs);
std::vector<DfsFactorization> all_dfs_factorizations(const FinCategory& C,
                                                     int f, const Dfs& dfs);

/// Any two (E,J,M)-factorizations of the same morphism are linked by a
/// unique pair of comparison isos; checked by explicit search.
bool dfs_factorizations_equivalent(const FinCategory& C,
                                   const DfsFactorization& a,
                                   const DfsFactorization& b);
bool fs_factorizations_equivalent(const FinCategory& C,
                                  const FsFactorization& a,
                                  const FsFactorization& b);

// -- dfs <-> qfs bijection ---------------------------------------------------

struct HypothesisFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Checks the two hypotheses of the dfs->qfs direction: (i) E·M ⊆ M·E, and
/// (ii) j ∈ J is iso whenever ej ∈ E for some e ∈ E or jm ∈ M for some
/// m ∈ M. Returns a failure description or nullopt.
std::optional<std::string> qfs_hypotheses(const FinCategory& C,
                                           const Dfs& dfs);

/// (Cof, W, Fib) = (J·E, M·E, M·J). Throws HypothesisFailed.
Qfs dfs_to_qfs(const FinCategory& C, const Dfs& dfs);
/// (E, J, M) = (Cof∩W, Cof∩Fib, Fib∩W).
Dfs qfs_to_dfs(const FinCategory& C, const Qfs& qfs);

/// Asserts classwise equality of both round trips.
ValidationReport dfs_qfs_roundtrip(const FinCategory& C, const Dfs& dfs);

// -- locality ----------------------------------------------------------------

/// X is L-local: every f : dom(m) -> X, m ∈ L, extends uniquely along m.
bool is_local(const FinCategory& C, int X, const MorphismClass& L);
/// At most one extension.
bool is_separating(const FinCategory& C, int X, const MorphismClass& L);
std::vector<int> local_objects(const FinCategory& C, const MorphismClass& L);

// -- localization checks -----------------------------------------------------

/// (i) right-orthogonality vs domain locality; (ii) locality of composites;
/// (iii) fibrations between J-locals; (iv) reflectivity via the universal
/// arrow from the factorization of X -> 1.
ValidationReport check_localization_properties(const FinCategory& C, const Dfs& dfs);

struct DiagonalReport {
  bool applicable = false;   // A×A exists
  bool local = false;        // A is J·E-local
  bool separating = false;
  bool trivial_fibration = false;  // Δ_A ∈ M
  ValidationReport implications;   // both directions of the statement
};

DiagonalReport check_diagonal(const FinCategory& C, const Dfs& dfs, int A);

// -- Quillen functors --------------------------------------------------------

bool is_left_quillen(const Functor& F, const Dfs& dfs_src, const Dfs& dfs_dst);
bool is_right_quillen(const Functor& G, const Dfs& dfs_dst, const Dfs& dfs_src);
/// Quillen adjunction: the left leg is left Quillen; also asserts the
/// left/right equivalence on the instance.
ValidationReport check_quillen_adjunction(const Adjunction& adj,
                                          const Dfs& dfs_src,
                                          const Dfs& dfs_dst);

/// dfs2 is a Bousfield localization of dfs1: J1·E1 = J2·E2 and
/// M1·E1 ⊆ M2·E2.
bool check_bousfield(const FinCategory& C, const Dfs& dfs1, const Dfs& dfs2);

}  // namespace facto
