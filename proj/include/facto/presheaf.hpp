#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "facto/ortho.hpp"

// Finite presheaf toposes: presheaves on a finite base category, the sieve
// subobject classifier, characteristic maps, internal topologies and their
// closure operators, dense/closed monomorphisms, sheaves and sheafification,
// exponentials, and materialized "windows" (finite full subcategories) that
// feed the generic orthogonality machinery.
//
// Presheaf elements are dense integers 0..card(b)-1 per base object b.
// Subobjects are canonicalized as pointwise subsets; subobject isomorphism
// is decided by pointwise set equality after canonicalization.

namespace facto {

struct NotMono : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two formulas the theory proves equal came apart numerically — an engine
/// bug, never an instance property.
struct InternalDisagreement : std::logic_error {
  using std::logic_error::logic_error;
};

// -- presheaves and their morphisms ------------------------------------------

struct Presheaf {
  const FinCategory* base = nullptr;
  std::vector<int> card;  // per base object b: |P(b)|
  // Per base morphism f : x -> y, the restriction P(y) -> P(x);
  // res[f].size() == card[y], values in [0, card[x]).
  std::vector<std::vector<int>> res;
  std::string label;

  bool operator==(const Presheaf& o) const {
    return card == o.card && res == o.res;
  }
};

/// Identity and (contravariant) composition laws of the restriction tables.
ValidationReport validate_presheaf(const Presheaf& P);

struct PshMor {
  const Presheaf* src = nullptr;
  const Presheaf* dst = nullptr;
  std::vector<std::vector<int>> comp;  // per base object b: P(b) -> Q(b)
};

/// Naturality with every restriction map.
ValidationReport validate_pshmor(const PshMor& t);

PshMor psh_identity(const Presheaf& P);
/// g after f; domains must match shape-exactly.
std::vector<std::vector<int>> psh_compose(const PshMor& g, const PshMor& f);

// In a presheaf topos these componentwise notions agree with the categorical
// ones; windows classify their morphisms by them.
bool psh_mono(const PshMor& t);  // componentwise injective
bool psh_epi(const PshMor& t);   // componentwise surjective
bool psh_iso(const PshMor& t);

Presheaf terminal_presheaf(const FinCategory& B);
Presheaf initial_presheaf(const FinCategory& B);
/// hom(-, c): elements at x are the morphisms x -> c in ascending id order.
Presheaf representable(const FinCategory& B, int c);
/// Pointwise product; pairs (u,v) at b are encoded as u*|Q(b)| + v.
Presheaf product_presheaf(const Presheaf& P, const Presheaf& Q);

// -- sieves and the subobject classifier -------------------------------------

/// Membership vector over ALL base morphism ids; members share a codomain.
using Sieve = std::vector<char>;

bool is_sieve(const FinCategory& B, int b, const Sieve& s);
Sieve max_sieve(const FinCategory& B, int b);
Sieve empty_sieve(const FinCategory& B);
/// Pullback along f : x -> y of a sieve on y: { t with cod x | f∘t ∈ s }.
Sieve sieve_pullback(const FinCategory& B, int f, const Sieve& s);
/// f belongs to a sieve on cod(f) iff its pullback along f is maximal.
bool sieve_member(const Sieve& s, int f);

struct OmegaPresheaf {
  Presheaf psh;                          // value at b = all sieves on b
  std::vector<std::vector<Sieve>> elems; // elems[b][i], canonically ordered

  int index_of(int b, const Sieve& s) const;
  int top(int b) const;  // index of the maximal sieve
  int bot(int b) const;  // index of the empty sieve
};

/// All sieves per object (ordered by size, then membership lexicographic);
/// restriction = sieve pullback, verified functorial at construction.
OmegaPresheaf omega(const FinCategory& B);

/// Picks the maximal sieve at every object; `one` must be terminal.
PshMor true_arrow(const Presheaf& one, const OmegaPresheaf& Om);

// -- canonical subobjects -----------------------------------------------------

struct Subobject {
  const Presheaf* of = nullptr;
  std::vector<std::vector<char>> sel;  // pointwise membership

  bool operator==(const Subobject& o) const { return sel == o.sel; }
};

/// Closure under every restriction map.
ValidationReport validate_subobject(const Subobject& S);

Subobject full_subobject(const Presheaf& P);
Subobject empty_subobject(const Presheaf& P);
/// Canonicalizes the image of a componentwise-injective morphism.
/// Throws NotMono otherwise.
Subobject subobject_from_mono(const PshMor& m);
/// Image of an arbitrary morphism as a subobject of its target.
Subobject image_subobject(const PshMor& t);

bool sub_leq(const Subobject& a, const Subobject& b);
Subobject sub_intersect(const Subobject& a, const Subobject& b);
/// Preimage h^{-1}(S) for h : B -> A, S a subobject of A.
Subobject sub_preimage(const PshMor& h, const Subobject& S);

/// The canonical sub-presheaf: selected elements renumbered ascending.
Presheaf materialize(const Subobject& S);
/// Components of the inclusion materialize(S) -> ambient.
std::vector<std::vector<int>> inclusion_components(const Subobject& S);

/// chi(x) = the sieve of base morphisms pulling x into the subobject;
/// the pullback of `true` along chi recovers S exactly.
std::vector<std::vector<int>> char_components(const OmegaPresheaf& Om,
                                              const Subobject& S);
/// Pullback of `true` along chi : A -> Ω, as a subobject of A.
Subobject subobject_of_char(const OmegaPresheaf& Om, const Presheaf& A,
                            const std::vector<std::vector<int>>& chi);

// -- internal meet ------------------------------------------------------------

/// wedge[b][u][v] = index of the meet of sieves u and v at b. Computed as
/// the characteristic map of the top pair in Ω×Ω and cross-checked against
/// pointwise sieve intersection (InternalDisagreement on mismatch).
struct MeetTable {
  std::vector<std::vector<std::vector<int>>> wedge;
};

MeetTable internal_meet(const OmegaPresheaf& Om);

// -- internal topologies -------------------------------------------------------

struct LTTopology {
  std::vector<std::vector<int>> k;  // per base object: Ω(b) -> Ω(b)

  bool operator==(const LTTopology& o) const { return k == o.k; }
  bool operator<(const LTTopology& o) const { return k < o.k; }
};

LTTopology identity_topology(const OmegaPresheaf& Om);
LTTopology top_topology(const OmegaPresheaf& Om);  // constant at the maximal sieve

/// Naturality plus the three laws: k∘true = true, k∘k = k, and
/// compatibility with the internal meet.
ValidationReport validate_topology(const OmegaPresheaf& Om, const MeetTable& mt,
                                   const LTTopology& k);

/// Every natural endomap of Ω satisfying the topology laws, canonically
/// ordered. Throws BoundExceeded when the endomap space is too large.
std::vector<LTTopology> enumerate_topologies(const OmegaPresheaf& Om,
                                             const MeetTable& mt);

/// Independent oracle: counts covering-sieve assignments satisfying
/// maximality, stability and transitivity directly.
int count_grothendieck_topologies(const OmegaPresheaf& Om);

// -- closure, density, sheaves -------------------------------------------------

/// x ∈ c(S) iff k sends char_S(x) to the maximal sieve.
Subobject closure_of(const OmegaPresheaf& Om, const LTTopology& k,
                     const Subobject& S);
/// k = char of the closure of the top-point subobject of Ω.
LTTopology topology_of_closure(
    const OmegaPresheaf& Om,
    const std::function<Subobject(const Subobject&)>& close);

/// Idempotent, inflationary, meet-preserving, preimage-stable — checked
/// exhaustively over all subobjects of the given ambient presheaves and all
/// supplied morphisms between them.
ValidationReport check_closure_axioms(const OmegaPresheaf& Om,
                                      const LTTopology& k,
                                      const std::vector<const Presheaf*>& ambs,
                                      const std::vector<PshMor>& mors);

/// All subobjects of P, canonically ordered.
std::vector<Subobject> all_subobjects(const Presheaf& P);

bool is_dense(const OmegaPresheaf& Om, const LTTopology& k, const Subobject& S);
bool is_closed(const OmegaPresheaf& Om, const LTTopology& k,
               const Subobject& S);

/// m = (closure ↪ ambient) ∘ (S ↪ closure); the first stage is dense in the
/// materialized closure, the second closed in the ambient
/// (InternalDisagreement if either fails).
struct DenseClosedFactor {
  Subobject closure;                         // of the ambient presheaf
  Presheaf middle;                           // materialized closure
  std::vector<std::vector<int>> dense_part;  // materialize(S) -> middle
  std::vector<std::vector<int>> closed_part; // middle -> ambient
};
DenseClosedFactor dense_closed_factor(const OmegaPresheaf& Om,
                                      const LTTopology& k, const Subobject& S);

/// Covering sieves at b: those k sends to the maximal sieve.
std::vector<int> covering_sieves(const OmegaPresheaf& Om, const LTTopology& k,
                                 int b);

/// Matching-family criterion: every matching family for every covering
/// sieve has exactly one (at most one) amalgamation.
bool is_sheaf(const OmegaPresheaf& Om, const LTTopology& k, const Presheaf& P);
bool is_separated(const OmegaPresheaf& Om, const LTTopology& k,
                  const Presheaf& P);

/// Plus construction applied twice. `unit` is the composite
/// P -> plus1 -> sheaf; its image part is dense and its first stage epi.
struct SheafificationResult {
  Presheaf plus1;  // matching families modulo refinement, once
  Presheaf sheaf;  // twice
  std::vector<std::vector<int>> unit1;  // P -> plus1
  std::vector<std::vector<int>> unit;   // P -> sheaf
};
SheafificationResult sheafify(const OmegaPresheaf& Om, const LTTopology& k,
                              const Presheaf& P);

// -- exponentials --------------------------------------------------------------

/// (Q^P)(c) = natural families over { (f : d -> c, x ∈ P(d)) } with values
/// in Q; element tables are exposed for oracle tests. `ev` is indexed over
/// the product exp × P with the standard pair encoding.
struct ExponentialResult {
  Presheaf exp;
  // family[c][e] flattens e's assignment: for each f ∈ into(c) ascending,
  // for each x ∈ P(dom f): the value in Q(dom f).
  std::vector<std::vector<std::vector<int>>> family;
  std::vector<std::vector<int>> ev;  // (exp × P) -> Q
};
ExponentialResult exponential(const FinCategory& B, const Presheaf& P,
                              const Presheaf& Q);
/// The unique g : R -> Q^P with ev ∘ (g×1) = t, for t : R×P -> Q.
std::vector<std::vector<int>> exponential_transpose(
    const ExponentialResult& E, const Presheaf& R, const Presheaf& P,
    const std::vector<std::vector<int>>& t);

// -- materialized windows ------------------------------------------------------

struct WindowOptions {
  int max_card = 4;      // admit objects with every |P(b)| within this bound
  int max_objects = 48;  // stop closing past this many objects
  bool with_products = true;
  bool with_subobjects = true;
};

/// A finite full subcategory of the presheaf topos: the seeds together with
/// the initial/terminal presheaves and Ω, closed under canonical subobjects
/// and pointwise products within bounds, with EVERY natural transformation
/// between admitted objects materialized. Stability claims checked on a
/// window are claims about the window, whose object set is reported.
struct ToposWindow {
  const FinCategory* base = nullptr;
  OmegaPresheaf Om;
  MeetTable meet;
  std::deque<Presheaf> objects;  // stable addresses; cat object i = objects[i]
  FinCategory cat;
  std::vector<PshMor> mor_data;  // per cat morphism id
  int omega_obj = -1, terminal_obj = -1, initial_obj = -1;
  int true_mor = -1;
  bool truncated = false;  // object closure hit max_objects

  int obj_of(const Presheaf& P) const;  // exact-shape lookup, -1 if absent
  int mor_of(int src, int dst, const std::vector<std::vector<int>>& comp) const;

  MorphismClass epis() const;
  MorphismClass monos() const;
  MorphismClass dense_monos(const LTTopology& k) const;
  MorphismClass closed_monos(const LTTopology& k) const;
  /// (epis, k-dense monos, k-closed monos).
  Dfs image_closure_dfs(const LTTopology& k) const;

  std::map<std::pair<std::vector<int>, std::vector<std::vector<int>>>, int>
      obj_lookup;  // (card, res) -> object
  std::map<std::tuple<int, int, std::vector<std::vector<int>>>, int>
      mor_lookup;
};

ToposWindow build_window(const FinCategory& B,
                         const std::vector<Presheaf>& seeds,
                         WindowOptions opt = {});

// -- cartesian dfs, generated topologies, adjunction transfer -----------------

/// (i) E and J·E stable under every pullback that exists in the window
/// (up to apex iso); (ii) M·J consists of componentwise monos. Also
/// evaluates the equivalent characterization (M and J monic, E/J/M each
/// pullback-stable) and reports if the two verdicts come apart.
ValidationReport is_cartesian_dfs(const ToposWindow& W, const Dfs& dfs);

/// Factorizes `true` through the dfs and returns the characteristic map of
/// its right part; validates the topology laws and that the input is a
/// Bousfield localization of the generated image/closure dfs.
/// Throws HypothesisFailed when the dfs is not cartesian.
LTTopology topology_of_dfs(const ToposWindow& W, const Dfs& dfs);

/// k1 ≤ k2, decided five ways (meet definition, sheaf inclusion, closure
/// comparison, dense-mono inclusion, cofibration inclusion); all verdicts
/// must agree or InternalDisagreement is thrown.
struct TopologyComparison {
  bool le = false;
  bool by_meet = false, by_sheaves = false, by_closure = false,
       by_dense = false, by_cof = false;
};
TopologyComparison compare_topologies(const ToposWindow& W,
                                      const LTTopology& k1,
                                      const LTTopology& k2);

// Limit preservation of a functor between windows, decided by direct
// construction of the limit on both sides and a mediating-isomorphism
// search. Quantified over the limits that exist in the windows.
bool functor_preserves_terminal(const ToposWindow& W1, const ToposWindow& W2,
                                const Functor& F);
bool functor_preserves_products(const ToposWindow& W1, const ToposWindow& W2,
                                const Functor& F);
bool functor_preserves_equalizers(const ToposWindow& W1, const ToposWindow& W2,
                                  const Functor& F);
bool functor_preserves_pullbacks(const ToposWindow& W1, const ToposWindow& W2,
                                 const Functor& F);

/// Four renditions of continuity for G : Wsrc -> Wdst between windows with
/// chosen topologies, evaluated independently: image of the source
/// (dense mono)∘epi class lands in the target one; G commutes with closure
/// of images (as equality, and as inequality); and the classifier square
/// built from the characteristic map of G(true) commutes. Disagreement is
/// recorded in `report`.
struct ContinuityReport {
  bool cof_preserved = false, closure_preserved = false,
       closure_continuous = false, classifier_square = false;
  ValidationReport report;

  bool continuous() const {
    return cof_preserved && closure_preserved && closure_continuous &&
           classifier_square && report.ok();
  }
};
ContinuityReport continuity_conditions(const ToposWindow& Wsrc,
                                       const ToposWindow& Wdst,
                                       const Functor& G,
                                       const LTTopology& ksrc,
                                       const LTTopology& kdst);

/// Quillen adjunction F : W1 ⇄ W2 : G between windows carrying cartesian
/// dfs's. When F preserves finite limits on the window, sweeps every sheaf
/// and separated object of W2 through G. Independently evaluates the four
/// continuity conditions on G (cofibration preservation, closure
/// preservation, closure continuity, and the classifier square) and asserts
/// they share one truth value.
struct ToposAdjunctionReport {
  bool geometric = false;  // F preserves finite limits on the window
  bool cof_preserved = false, closure_preserved = false,
       closure_continuous = false, classifier_square = false;
  LTTopology k1, k2;
  ValidationReport report;

  bool ok() const { return report.ok(); }
};
ToposAdjunctionReport check_topos_adjunction(const ToposWindow& W1,
                                             const ToposWindow& W2,
                                             const Adjunction& adj,
                                             const Dfs& dfs1, const Dfs& dfs2);

/// Owns the functors an adjunction between windows points at.
struct WindowAdjunction {
  Functor left, right, rl, lr, id_src, id_dst;
  NatTrans unit, counit;
  Adjunction adj;
};

/// The constant-presheaf / global-sections adjunction between a window over
/// the one-object base and a window over an arbitrary base. Every constant
/// presheaf on a set-window object and every point count of a presheaf
/// window object must resolve to a window object (BoundExceeded otherwise).
std::unique_ptr<WindowAdjunction> constant_sections_adjunction(
    const ToposWindow& WS, const ToposWindow& W);

}  // namespace facto
