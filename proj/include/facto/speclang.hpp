#pragma once

#include <deque>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "facto/coalgebra.hpp"
#include "facto/monad.hpp"
#include "facto/presheaf.hpp"

// Declaration language and command driver: a line-oriented text format for
// categories, functors, (co)monads, morphism classes, factorization
// systems, presheaves, groups, windows and product comonads, plus the
// commands that expose every engine check with replayable structured
// reports.

namespace facto::spec {

using json = nlohmann::ordered_json;

/// Syntax or resolution failure, with 1-based source coordinates.
struct ParseError : std::runtime_error {
  int line = 0, col = 0;
  ParseError(const std::string& msg, int l, int c);
};

/// A command was invoked with names that do not resolve or flags that make
/// no sense; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- abstract syntax ----------------------------------------------------------

struct CategoryDecl {
  std::string name;
  std::vector<std::string> objects;
  struct MorEntry {
    std::string name, dom, cod;
  };
  std::vector<MorEntry> mors;
  struct ComposeEntry {
    std::string g, f, gf;
  };
  std::vector<ComposeEntry> composes;
  bool generate_compose = false;  // infer unique composites (posets etc.)
  std::string builtin;            // sets|chain|walking_arrow|terminal, or ""
  std::vector<int> builtin_args;
};

struct FunctorDecl {
  std::string name, src, dst;
  std::vector<std::pair<std::string, std::string>> obj_entries, mor_entries;
  std::string builtin;  // "id" | "compose" | ""
  std::vector<std::string> builtin_args;
};

struct NatTransDecl {
  std::string name, src, dst;  // functor names
  std::vector<std::pair<std::string, std::string>> at;
};

struct AdjunctionDecl {
  std::string name, left, right, unit, counit;
};

struct MonadDecl {
  std::string name, cat, T;
  std::vector<std::pair<std::string, std::string>> unit, mult;
};

struct ComonadDecl {
  std::string name, cat, G;
  std::vector<std::pair<std::string, std::string>> counit, comult;
};

struct ClassExpr {
  // literal | epi | mono | iso | all | none | perp_right | perp_left |
  // box_right | box_left | compose | union | intersect
  std::string kind;
  std::vector<std::string> args;
};

struct ClassDecl {
  std::string name, cat;
  ClassExpr expr;
};

struct DfsDecl {
  std::string name, cat, E, J, M;
};

struct QfsDecl {
  std::string name, cat, Cof, W, Fib;
};

struct PresheafDecl {
  std::string name, base;
  struct AtEntry {
    std::string obj;
    std::vector<std::string> elems;
  };
  std::vector<AtEntry> at;
  struct ResEntry {
    std::string mor;
    std::vector<std::pair<std::string, std::string>> map;  // cod elem -> dom elem
  };
  std::vector<ResEntry> restricts;
};

struct GroupDecl {
  std::string name;
  std::vector<std::string> elements;
  struct TableEntry {
    std::string a, b, c;  // a*b = c
  };
  std::vector<TableEntry> table;
};

struct WindowDecl {
  std::string name, base;
  std::vector<std::string> seeds;
  int max_card = 4, max_objects = 48;
};

struct ComonadProductDecl {
  std::string name, window, factor;
};

using DeclNode =
    std::variant<CategoryDecl, FunctorDecl, NatTransDecl, AdjunctionDecl,
                 MonadDecl, ComonadDecl, ClassDecl, DfsDecl, QfsDecl,
                 PresheafDecl, GroupDecl, WindowDecl, ComonadProductDecl>;

struct Decl {
  int line = 0;
  DeclNode node;
};

struct Ast {
  std::vector<Decl> decls;
};

Ast parse(const std::string& text);
/// Canonical rendering; parse(pretty(parse(t))) has the same pretty form.
std::string pretty(const Ast& ast);

// -- resolved documents -------------------------------------------------------

struct SpecDocument {
  Ast ast;

  std::deque<FinCategory> categories;
  std::vector<std::string> category_names;
  std::deque<Functor> functors;
  std::vector<std::string> functor_names;
  std::deque<NatTrans> nattranses;
  std::vector<std::string> nattrans_names;
  std::deque<Adjunction> adjunctions;
  std::vector<std::string> adjunction_names;
  struct MonadEntry {
    std::string name;
    Monad m;
  };
  std::deque<MonadEntry> monads;
  struct ComonadEntry {
    std::string name;
    Comonad c;
  };
  std::deque<ComonadEntry> comonads;
  struct ClassEntry {
    std::string name, cat;  // cat: category-like reference name
    MorphismClass cls;
  };
  std::deque<ClassEntry> classes;
  struct DfsEntry {
    std::string name, cat;
    Dfs d;
  };
  std::deque<DfsEntry> dfss;
  struct QfsEntry {
    std::string name, cat;
    Qfs q;
  };
  std::deque<QfsEntry> qfss;
  struct PresheafEntry {
    std::string name, base;
    Presheaf p;
  };
  std::deque<PresheafEntry> presheaves;
  struct GroupEntry {
    std::string name;
    GroupTable g;
  };
  std::deque<GroupEntry> groups;
  struct WindowEntry {
    std::string name, base;
    ToposWindow w;
  };
  std::deque<WindowEntry> windows;
  struct WindowComonadEntry {
    std::string name, window, factor;
    WindowComonad cm;
  };
  std::deque<WindowComonadEntry> wcomonads;

  /// Law violations found while re-validating declarations on load.
  ValidationReport load_report;

  /// Category-like reference: a declared category or a window's category.
  /// Returns nullptr when absent; fills `desc` with a window description.
  const FinCategory* find_catlike(const std::string& name,
                                  std::string* desc = nullptr) const;
  const ToposWindow* find_window(const std::string& name) const;
  int class_index(const std::string& name) const;
  int dfs_index(const std::string& name) const;
  int qfs_index(const std::string& name) const;
  int monad_index(const std::string& name) const;
  int comonad_index(const std::string& name) const;
  int group_index(const std::string& name) const;
  int presheaf_index(const std::string& name) const;
  int wcomonad_index(const std::string& name) const;
  int functor_index(const std::string& name) const;
  int adjunction_index(const std::string& name) const;

  /// Morphism by declared name, or "#<id>" / decimal id fallback.
  int resolve_mor(const FinCategory& C, const std::string& token) const;
};

/// Resolves and re-validates; resolution failures throw ParseError with the
/// declaration's line, law violations land in load_report.
SpecDocument load(Ast ast);
SpecDocument load_text(const std::string& text);
SpecDocument load_file(const std::string& path);

// -- reports ------------------------------------------------------------------

struct Report {
  std::string command;
  std::string verdict = "pass";  // pass|fail|not-applicable|hypothesis-failed
  json witnesses = json::array();
  std::vector<std::string> details;  // human-readable law violations
  json result;                       // command-specific payload
  std::string window;                // which finite subcategory was used
  long long timing_ms = 0;

  int exit_code() const;  // 0 pass, 1 fail, 2 hypothesis-failed/not-applicable
  json to_json(bool stable_timing) const;
  std::string human() const;
};

/// Worst exit code across a batch.
int batch_exit_code(const std::vector<Report>& reports);

// -- commands -----------------------------------------------------------------

Report cmd_validate(const SpecDocument& doc);
Report cmd_factorize_fs(const SpecDocument& doc, const std::string& L,
                        const std::string& R, const std::string& mor);
Report cmd_factorize_dfs(const SpecDocument& doc, const std::string& dfs,
                         const std::string& mor);
Report cmd_verify_wfs(const SpecDocument& doc, const std::string& L,
                      const std::string& R);
Report cmd_verify_fs(const SpecDocument& doc, const std::string& L,
                     const std::string& R);
Report cmd_verify_dfs(const SpecDocument& doc, const std::string& dfs);
Report cmd_verify_qfs(const SpecDocument& doc, const std::string& qfs);
Report cmd_perp(const SpecDocument& doc, const std::string& cls, bool right);
Report cmd_local(const SpecDocument& doc, const std::string& cls);
Report cmd_localization(const SpecDocument& doc, const std::string& dfs);
Report cmd_diagonal(const SpecDocument& doc, const std::string& dfs,
                    const std::string& obj);
Report cmd_quillen(const SpecDocument& doc, const std::string& adj,
                   const std::string& dfs_src, const std::string& dfs_dst);
Report cmd_bousfield(const SpecDocument& doc, const std::string& dfs1,
                     const std::string& dfs2);
/// Round trips between triple and Quillen systems; on a dfs name checks the
/// translation hypotheses first and sweeps for two-out-of-three violations
/// of the derived weak-equivalence class when they fail.
Report cmd_bijection(const SpecDocument& doc, const std::string& system);
Report cmd_em_build(const SpecDocument& doc, const std::string& monad);
Report cmd_em_induced(const SpecDocument& doc, const std::string& monad,
                      const std::string& dfs);
Report cmd_em_lift(const SpecDocument& doc, const std::string& monad,
                   const std::string& L, const std::string& R,
                   const std::string& mor);
Report cmd_em_lifted_quillen(const SpecDocument& doc, const std::string& monad,
                             const std::string& dfs);
Report cmd_gset(const SpecDocument& doc, const std::string& group, int bound);
Report cmd_coem_build(const SpecDocument& doc, const std::string& comonad);
Report cmd_coem_induced(const SpecDocument& doc, const std::string& comonad,
                        const std::string& dfs);
Report cmd_lt_enumerate(const SpecDocument& doc, const std::string& window);
Report cmd_lt_compare(const SpecDocument& doc, const std::string& window,
                      int i, int j);
/// Image/closure system of topology #i, verified and regenerated.
Report cmd_lt_roundtrip(const SpecDocument& doc, const std::string& window,
                        int i);
Report cmd_sheaf_check(const SpecDocument& doc, const std::string& window,
                       int topology, const std::string& presheaf);
Report cmd_sheafify(const SpecDocument& doc, const std::string& window,
                    int topology, const std::string& presheaf);
Report cmd_cartesian_dfs(const SpecDocument& doc, const std::string& window,
                         const std::string& dfs);
Report cmd_cartesian_topology(const SpecDocument& doc,
                              const std::string& window, int topology);
Report cmd_topos_adjunction(const SpecDocument& doc, const std::string& wsrc,
                            const std::string& wdst, int ksrc, int kdst);
Report cmd_coalg_build(const SpecDocument& doc, const std::string& cm);
Report cmd_coalg_extend(const SpecDocument& doc, const std::string& cm,
                        int topology);
Report cmd_coalg_identify(const SpecDocument& doc, const std::string& cm,
                          int topology);

/// Canonical battery over every declaration of the document, in
/// declaration order; deterministic.
std::vector<Report> run_corpus(const SpecDocument& doc);

/// Re-executes every structured witness of a machine report (single report,
/// array, or corpus output) against the document; passes when each witness
/// still reproduces its violation.
Report cmd_replay(const SpecDocument& doc, const json& report_json);

}  // namespace facto::spec
