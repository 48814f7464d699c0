#pragma once

#include "facto/monad.hpp"
#include "facto/presheaf.hpp"

// Cartesian comonads on materialized presheaf windows, their coalgebra
// toposes with the equalizer-built subobject classifier, extension of an
// internal topology along the forgetful functor, and the identification of
// the extension with the topology generated by the left-induced
// factorization system on coalgebras.
//
// The stock instance is the product comonad B×(−): its coalgebras are the
// slice over B, which is built independently as a cross-checking oracle.

namespace facto {

struct NotCartesian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A construction the theory proves unique produced zero or several
/// candidates — an engine bug, never an instance property.
struct NoUniqueArrow : std::logic_error {
  using std::logic_error::logic_error;
};

struct WindowComonad {
  const ToposWindow* window = nullptr;
  Comonad cm;           // endofunctor data on window->cat
  int factor_obj = -1;  // product comonads: the fixed factor; -1 for raw data
};

/// The comonad B×(−) with counit the second projection and comultiplication
/// (diagonal of B)×identity. Every B×X must already be a window object.
/// With B terminal this is the identity comonad on the nose.
WindowComonad product_comonad(const ToposWindow& W, int factor_obj);

/// Wraps externally supplied comonad data (e.g. a corpus declaration).
WindowComonad window_comonad(const ToposWindow& W, Comonad cm);

/// Comonad laws plus preservation of the window's pullbacks and equalizers.
/// (Product comonads genuinely fail to preserve the terminal object and
/// binary products, so only connected limits are required here.)
ValidationReport check_cartesian_comonad(const WindowComonad& Cm);

struct CoalgebraTopos {
  std::unique_ptr<CoEMCategory> co;
  int terminal_obj = -1;  // the cofree coalgebra on the terminal window object
  int omega_obj = -1;     // classifier coalgebra, in co->category
  int true_mor = -1;      // terminal_obj -> omega_obj, in co->category
  int m_carrier = -1;     // window object underlying omega_obj
  int m_mor = -1;         // window morphism: classifier carrier -> G(Omega)
  // Product comonads only: the slice category over the factor, with the
  // equivalence sweep folded into `report`.
  FinCategory slice;
  std::vector<int> slice_obj;  // slice object -> window morphism into B
  ValidationReport report;     // equalizer universality, classifier, slice
};

/// Classifier carrier = equalizer of the identity and G(tau)∘delta on
/// G(Omega), where tau classifies G(true); the universal property is
/// re-verified by sweep and the classifier point found as the unique
/// factorization of G(true) through the equalizer.
CoalgebraTopos build_coalgebra_topos(const WindowComonad& Cm);

struct ExtensionResult {
  int ktilde = -1;  // endomorphism of the classifier, in co->category
  std::vector<std::vector<int>> ktilde_comp;  // on the carrier elements
  ValidationReport report;  // laws, meet compatibility, transfer sweeps
};

/// The unique classifier endomorphism commuting with G(k) over the
/// equalizer inclusion. Validates the topology laws using the induced
/// internal meet, and checks that the forgetful functor preserves and
/// reflects the corresponding dense and closed monomorphisms by exhaustive
/// sweep. Requires the comonad cartesian and continuity of G for k on both
/// sides (HypothesisFailed otherwise).
ExtensionResult extend_lt(const WindowComonad& Cm, const CoalgebraTopos& T,
                          const LTTopology& k);

/// Flagship identification: the topology generated by the left-induced
/// factorization system on coalgebras equals the extension of the one
/// generated on the base window. Gates: dfs cartesian, comonad cartesian,
/// G continuous and preserving the right and middle classes. Also re-checks
/// the classwise preimage identity behind the proof.
ValidationReport check_induced_topology_extension(const WindowComonad& Cm,
                                                  const CoalgebraTopos& T,
                                                  const Dfs& dfs);

}  // namespace facto
