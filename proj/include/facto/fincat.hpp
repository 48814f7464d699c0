#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Explicitly finite categories: objects and morphisms are dense integer ids,
// composition is a dense (g,f)-indexed table. Everything downstream
// (orthogonality sweeps, EM categories, topos windows) runs on this
// representation.

namespace facto {

/// Minimal "{}" substitution, enough for diagnostic messages.
template <typename... Args>
std::string fmt(std::string_view f, const Args&... args) {
  std::ostringstream out;
  size_t pos = 0;
  auto emit = [&](const auto& a) {
    size_t brace = f.find("{}", pos);
    if (brace == std::string_view::npos) return;
    out << f.substr(pos, brace - pos) << a;
    pos = brace + 2;
  };
  (emit(args), ...);
  out << f.substr(pos);
  return out.str();
}

/// Accumulates violated laws with human-readable witnesses. An empty report
/// means the checked structure satisfies every law.
struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
  void fail(std::string msg) { violations.push_back(std::move(msg)); }
  void merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
  }
};

struct BoundExceeded : std::runtime_error {
  explicit BoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownId : std::out_of_range {
  explicit UnknownId(const std::string& what) : std::out_of_range(what) {}
};

/// Hard cap on morphism counts; constructions that would exceed it throw
/// BoundExceeded. Overridable via the FACTO_MAX_MOR environment variable.
int max_mor_bound();

class FinCategory {
 public:
  // -- construction ---------------------------------------------------------

  int add_object(std::string name = {});
  /// Adds a non-identity morphism dom -> cod. Identities are created by
  /// add_object.
  int add_morphism(int dom, int cod, std::string name = {});
  /// Records g∘f = gf. May deliberately rebind identity composites (used by
  /// tests that construct broken categories).
  void set_compose(int g, int f, int gf);
  /// Fills identity composites not set explicitly and builds the hom index.
  /// Must be called before any query.
  void finalize();

  /// Assembles a category directly from its tables (ids preserved verbatim).
  static FinCategory from_raw(std::vector<int> dom, std::vector<int> cod,
                              std::vector<int> identity,
                              std::vector<int> table,
                              std::vector<std::string> obj_names = {},
                              std::vector<std::string> mor_names = {});

  // -- queries --------------------------------------------------------------

  int obj_count() const noexcept { return static_cast<int>(identity_.size()); }
  int mor_count() const noexcept { return static_cast<int>(dom_.size()); }
  int dom(int f) const { return dom_.at(f); }
  int cod(int f) const { return cod_.at(f); }
  int identity(int a) const { return identity_.at(a); }
  bool is_identity(int f) const { return identity_.at(dom_.at(f)) == f; }

  /// g∘f, or -1 when the pair is not composable / the entry is missing.
  int compose(int g, int f) const {
    return table_[static_cast<size_t>(g) * dom_.size() + f];
  }
  bool composable(int g, int f) const { return cod_[f] == dom_[g]; }

  /// All morphisms a -> b, ascending by id.
  const std::vector<int>& hom(int a, int b) const {
    return hom_[static_cast<size_t>(a) * identity_.size() + b];
  }
  /// All morphisms out of / into an object.
  const std::vector<int>& out_of(int a) const { return out_.at(a); }
  const std::vector<int>& into(int b) const { return in_.at(b); }

  const std::string& obj_name(int a) const { return obj_name_.at(a); }
  const std::string& mor_name(int f) const { return mor_name_.at(f); }
  void set_obj_name(int a, std::string n) { obj_name_.at(a) = std::move(n); }
  void set_mor_name(int f, std::string n) { mor_name_.at(f) = std::move(n); }
  int find_obj(const std::string& name) const;
  int find_mor(const std::string& name) const;

  bool finalized() const noexcept { return finalized_; }

 private:
  std::vector<int> dom_, cod_;
  std::vector<int> identity_;
  std::vector<int> table_;  // (g * mor_count + f) -> composite or -1
  std::vector<std::vector<int>> hom_;
  std::vector<std::vector<int>> out_, in_;
  std::vector<std::string> obj_name_, mor_name_;
  size_t pending_table_dim_ = 0;
  bool finalized_ = false;
};

/// Lists every violated category law with a witness; empty iff C is a
/// category. Violations are data, not errors.
ValidationReport validate_category(const FinCategory& C);

bool is_mono(const FinCategory& C, int f);
bool is_epi(const FinCategory& C, int f);
bool is_iso(const FinCategory& C, int f);
/// Two-sided inverse of f, if any.
std::optional<int> inverse_of(const FinCategory& C, int f);

/// Same object/morphism ids, dom/cod swapped, composition transposed.
/// opposite(opposite(C)) has identical tables to C.
FinCategory opposite(const FinCategory& C);

// -- functors, natural transformations, adjunctions -------------------------

/// Mapping between finite categories. Entries may be -1 when `partial` is
/// set; laws are then checked on the defined subdomain only.
struct Functor {
  const FinCategory* source = nullptr;
  const FinCategory* target = nullptr;
  std::vector<int> obj_map;
  std::vector<int> mor_map;
  bool partial = false;

  bool obj_defined(int a) const { return obj_map.at(a) >= 0; }
  bool mor_defined(int f) const { return mor_map.at(f) >= 0; }
  int on_obj(int a) const { return obj_map.at(a); }
  int on_mor(int f) const { return mor_map.at(f); }
};

Functor identity_functor(const FinCategory& C);
Functor compose_functors(const Functor& G, const Functor& F);  // G after F

ValidationReport validate_functor(const Functor& F);

struct NatTrans {
  const Functor* source = nullptr;
  const Functor* target = nullptr;
  std::vector<int> component;  // per object of source->source; -1 = undefined

  bool defined_at(int a) const { return component.at(a) >= 0; }
  int at(int a) const { return component.at(a); }
};

ValidationReport validate_nattrans(const NatTrans& t);

struct Adjunction {
  Functor left;    // F : C -> D
  Functor right;   // G : D -> C
  NatTrans unit;   // 1_C => G F
  NatTrans counit; // F G => 1_D
};

ValidationReport validate_adjunction(const Adjunction& adj);

// -- diagrams and (co)limits -------------------------------------------------

struct Diagram {
  const FinCategory* shape = nullptr;
  Functor functor;  // shape -> ambient
};

struct Cone {
  int apex = -1;
  std::vector<int> legs;  // per shape object

  auto operator<=>(const Cone&) const = default;
};

bool is_cone(const FinCategory& C, const Diagram& D, const Cone& c);
bool is_cocone(const FinCategory& C, const Diagram& D, const Cone& c);

/// Brute-force limiting cone search: enumerates every cone and tests
/// universality exhaustively. Returns the lexicographically least limiting
/// cone, or nullopt when C has no limit for D.
std::optional<Cone> compute_limit(const FinCategory& C, const Diagram& D);
std::optional<Cone> compute_colimit(const FinCategory& C, const Diagram& D);

std::vector<Cone> all_limit_cones(const FinCategory& C, const Diagram& D);

std::optional<int> terminal_object(const FinCategory& C);
std::optional<int> initial_object(const FinCategory& C);

/// Limit of the cospan  x --f--> z <--g-- y.  Legs are (proj to x, proj to y).
struct PullbackResult {
  int apex;
  int to_left;
  int to_right;
};
std::optional<PullbackResult> compute_pullback(const FinCategory& C, int f,
                                               int g);
/// Binary product as a pullback over the terminal object, or a direct
/// cone search when no terminal exists.
std::optional<PullbackResult> compute_product(const FinCategory& C, int a,
                                              int b);
/// Equalizer of a parallel pair f,g : a -> b. Returns the equalizing morphism.
std::optional<int> compute_equalizer(const FinCategory& C, int f, int g);
std::optional<int> compute_coequalizer(const FinCategory& C, int f, int g);

}  // namespace facto
