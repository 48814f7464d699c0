#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "facto/speclang.hpp"

// Batch verifier CLI: loads a declaration file and runs one engine check,
// the full corpus battery, or a witness replay. Machine reports are
// byte-stable given identical inputs (timing zeroed by --stable).

namespace {

using facto::spec::Report;
using facto::spec::SpecDocument;
using json = facto::spec::json;

struct OutputOptions {
  bool machine = false;
  bool stable = false;
  std::string out_path;
};

void emit(const json& payload, const std::string& human,
          const OutputOptions& opt) {
  std::string text = opt.machine ? payload.dump(2) + "\n" : human;
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw facto::spec::UsageError("cannot open --out path");
    out << text;
  } else {
    std::cout << text;
  }
}

int emit_report(const Report& r, const OutputOptions& opt) {
  emit(r.to_json(opt.stable), r.human(), opt);
  return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-category factorization and topos checker"};
  app.require_subcommand(1);

  OutputOptions out;
  app.add_flag("--machine", out.machine, "emit a structured JSON report");
  app.add_flag("--stable", out.stable,
               "zero the timing field for byte-stable output");
  app.add_option("--out", out.out_path, "write the report to a file");

  std::string doc_path, a1, a2, a3, a4;
  int i1 = -1, i2 = -1;

  auto* validate = app.add_subcommand("validate", "load and re-validate");
  validate->add_option("file", doc_path)->required();

  auto* print = app.add_subcommand("print", "canonical pretty-print");
  print->add_option("file", doc_path)->required();

  auto* factorize = app.add_subcommand("factorize", "factor one morphism");
  factorize->add_option("file", doc_path)->required();
  std::vector<std::string> fs_pair, dfs_one;
  factorize->add_option("--fs", fs_pair, "left and right class")
      ->expected(2);
  factorize->add_option("--dfs", a1, "triple system name");
  factorize->add_option("mor", a2, "morphism name or id")->required();

  auto* verify = app.add_subcommand("verify", "verify a factorization system");
  verify->add_option("file", doc_path)->required();
  std::vector<std::string> v_wfs, v_fs;
  std::string v_dfs, v_qfs;
  verify->add_option("--wfs", v_wfs, "weak system classes")->expected(2);
  verify->add_option("--fs", v_fs, "orthogonal system classes")->expected(2);
  verify->add_option("--dfs", v_dfs, "triple system name");
  verify->add_option("--qfs", v_qfs, "Quillen system name");

  auto* perp = app.add_subcommand("perp", "orthogonal complement of a class");
  perp->add_option("file", doc_path)->required();
  perp->add_option("class", a1)->required();
  bool left = false;
  perp->add_flag("--left", left, "left complement (default: right)");

  auto* local = app.add_subcommand("local", "objects local to a class");
  local->add_option("file", doc_path)->required();
  local->add_option("class", a1)->required();

  auto* localization =
      app.add_subcommand("localization", "locality and reflectivity laws");
  localization->add_option("file", doc_path)->required();
  localization->add_option("dfs", a1)->required();

  auto* diagonal =
      app.add_subcommand("diagonal", "diagonal characterization of locality");
  diagonal->add_option("file", doc_path)->required();
  diagonal->add_option("dfs", a1)->required();
  diagonal->add_option("object", a2)->required();

  auto* quillen = app.add_subcommand("quillen", "Quillen adjunction check");
  quillen->add_option("file", doc_path)->required();
  quillen->add_option("adjunction", a1)->required();
  quillen->add_option("dfs_src", a2)->required();
  quillen->add_option("dfs_dst", a3)->required();

  auto* bousfield = app.add_subcommand("bousfield", "localization relation");
  bousfield->add_option("file", doc_path)->required();
  bousfield->add_option("dfs1", a1)->required();
  bousfield->add_option("dfs2", a2)->required();

  auto* bijection = app.add_subcommand(
      "bijection", "triple/Quillen system round trip");
  bijection->add_option("file", doc_path)->required();
  bijection->add_option("system", a1, "dfs or qfs name")->required();

  auto* em = app.add_subcommand("em", "Eilenberg-Moore category checks");
  em->add_option("file", doc_path)->required();
  em->add_option("monad", a1)->required();
  bool em_build = false;
  std::string em_induced, em_lq;
  std::vector<std::string> em_lift;
  em->add_flag("--build", em_build, "materialize and report counts");
  em->add_option("--induced", em_induced, "right-induced system check");
  em->add_option("--lift", em_lift, "L R mor: lift a factorization")
      ->expected(3);
  em->add_option("--lifted-quillen", em_lq, "lifted Quillen check");

  auto* gset = app.add_subcommand("gset", "bounded group-action instance");
  gset->add_option("file", doc_path)->required();
  gset->add_option("group", a1)->required();
  gset->add_option("bound", i1)->required();

  auto* coem = app.add_subcommand("coem", "coalgebra category checks");
  coem->add_option("file", doc_path)->required();
  coem->add_option("comonad", a1)->required();
  bool coem_build = false;
  std::string coem_induced;
  coem->add_flag("--build", coem_build, "materialize and report counts");
  coem->add_option("--induced", coem_induced, "left-induced system check");

  auto* lt = app.add_subcommand("lt", "internal topology commands");
  lt->add_option("file", doc_path)->required();
  lt->add_option("window", a1)->required();
  bool lt_enum = false;
  std::vector<int> lt_cmp;
  int lt_from = -1;
  lt->add_flag("--enumerate", lt_enum, "enumerate against the oracle");
  lt->add_option("--compare", lt_cmp, "compare two topology indices")
      ->expected(2);
  lt->add_option("--from-dfs", lt_from,
                 "verify and regenerate topology #i from its image/closure "
                 "system");

  auto* sheaf = app.add_subcommand("sheaf", "sheaf checks");
  sheaf->add_option("file", doc_path)->required();
  sheaf->add_option("window", a1)->required();
  sheaf->add_option("--topology", i1, "topology index")->required();
  std::string sh_check, sh_sheafify;
  sheaf->add_option("--check", sh_check, "presheaf to test");
  sheaf->add_option("--sheafify", sh_sheafify, "presheaf to reflect");

  auto* cartesian = app.add_subcommand("cartesian", "cartesian system check");
  cartesian->add_option("file", doc_path)->required();
  cartesian->add_option("window", a1)->required();
  std::string ca_dfs;
  int ca_top = -1;
  cartesian->add_option("--dfs", ca_dfs, "declared system in the window");
  cartesian->add_option("--topology", ca_top, "image/closure system of #i");

  auto* ta = app.add_subcommand("topos-adjunction",
                                "constant/sections adjunction transfer");
  ta->add_option("file", doc_path)->required();
  ta->add_option("wsrc", a1, "window over the one-object base")->required();
  ta->add_option("wdst", a2, "target window")->required();
  ta->add_option("--ksrc", i1, "source topology index")->required();
  ta->add_option("--kdst", i2, "target topology index")->required();

  auto* coalg = app.add_subcommand("coalg", "coalgebra topos commands");
  coalg->add_option("file", doc_path)->required();
  coalg->add_option("comonad", a1, "comonad-product name")->required();
  bool cg_build = false;
  int cg_extend = -1, cg_identify = -1;
  coalg->add_flag("--build", cg_build, "build and cross-check the topos");
  coalg->add_option("--extend", cg_extend, "extend topology #i");
  coalg->add_option("--identify", cg_identify,
                    "identify the induced topology with the extension of #i");

  auto* corpus = app.add_subcommand("corpus", "run the full battery");
  std::vector<std::string> corpus_files;
  bool corpus_all = false;
  corpus->add_flag("--all", corpus_all, "run every check per file");
  corpus->add_option("files", corpus_files, "declaration files")->required();

  auto* replay = app.add_subcommand("replay", "re-execute report witnesses");
  replay->add_option("file", doc_path)->required();
  replay->add_option("report", a1, "machine report file")->required();

  // accept the output flags after the subcommand name as well
  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough(true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (corpus->parsed()) {
      if (!corpus_all) throw facto::spec::UsageError("corpus requires --all");
      json files = json::array();
      std::vector<Report> all;
      for (const auto& path : corpus_files) {
        SpecDocument doc = facto::spec::load_file(path);
        std::vector<Report> reports = facto::spec::run_corpus(doc);
        json entry;
        entry["file"] = path;
        entry["reports"] = json::array();
        std::ostringstream human;
        human << "== " << path << " ==\n";
        for (const auto& r : reports) {
          entry["reports"].push_back(r.to_json(out.stable));
          human << r.human();
          all.push_back(r);
        }
        files.push_back(std::move(entry));
        if (!out.machine) std::cout << human.str();
      }
      if (out.machine || !out.out_path.empty())
        emit(files, "", {true, out.stable, out.out_path});
      return facto::spec::batch_exit_code(all);
    }

    if (print->parsed()) {
      SpecDocument doc = facto::spec::load_file(doc_path);
      std::cout << facto::spec::pretty(doc.ast);
      return 0;
    }

    SpecDocument doc = facto::spec::load_file(doc_path);
    namespace sp = facto::spec;
    Report r;
    if (validate->parsed()) {
      r = sp::cmd_validate(doc);
    } else if (factorize->parsed()) {
      if (fs_pair.size() == 2)
        r = sp::cmd_factorize_fs(doc, fs_pair[0], fs_pair[1], a2);
      else if (!a1.empty())
        r = sp::cmd_factorize_dfs(doc, a1, a2);
      else
        throw sp::UsageError("factorize needs --fs or --dfs");
    } else if (verify->parsed()) {
      if (v_wfs.size() == 2)
        r = sp::cmd_verify_wfs(doc, v_wfs[0], v_wfs[1]);
      else if (v_fs.size() == 2)
        r = sp::cmd_verify_fs(doc, v_fs[0], v_fs[1]);
      else if (!v_dfs.empty())
        r = sp::cmd_verify_dfs(doc, v_dfs);
      else if (!v_qfs.empty())
        r = sp::cmd_verify_qfs(doc, v_qfs);
      else
        throw sp::UsageError("verify needs --wfs, --fs, --dfs or --qfs");
    } else if (perp->parsed()) {
      r = sp::cmd_perp(doc, a1, !left);
    } else if (local->parsed()) {
      r = sp::cmd_local(doc, a1);
    } else if (localization->parsed()) {
      r = sp::cmd_localization(doc, a1);
    } else if (diagonal->parsed()) {
      r = sp::cmd_diagonal(doc, a1, a2);
    } else if (quillen->parsed()) {
      r = sp::cmd_quillen(doc, a1, a2, a3);
    } else if (bousfield->parsed()) {
      r = sp::cmd_bousfield(doc, a1, a2);
    } else if (bijection->parsed()) {
      r = sp::cmd_bijection(doc, a1);
    } else if (em->parsed()) {
      if (em_lift.size() == 3)
        r = sp::cmd_em_lift(doc, a1, em_lift[0], em_lift[1], em_lift[2]);
      else if (!em_induced.empty())
        r = sp::cmd_em_induced(doc, a1, em_induced);
      else if (!em_lq.empty())
        r = sp::cmd_em_lifted_quillen(doc, a1, em_lq);
      else
        r = sp::cmd_em_build(doc, a1);
    } else if (gset->parsed()) {
      r = sp::cmd_gset(doc, a1, i1);
    } else if (coem->parsed()) {
      if (!coem_induced.empty())
        r = sp::cmd_coem_induced(doc, a1, coem_induced);
      else
        r = sp::cmd_coem_build(doc, a1);
    } else if (lt->parsed()) {
      if (lt_cmp.size() == 2)
        r = sp::cmd_lt_compare(doc, a1, lt_cmp[0], lt_cmp[1]);
      else if (lt_from >= 0)
        r = sp::cmd_lt_roundtrip(doc, a1, lt_from);
      else if (lt_enum)
        r = sp::cmd_lt_enumerate(doc, a1);
      else
        throw sp::UsageError("lt needs --enumerate, --compare or --from-dfs");
    } else if (sheaf->parsed()) {
      if (!sh_check.empty())
        r = sp::cmd_sheaf_check(doc, a1, i1, sh_check);
      else if (!sh_sheafify.empty())
        r = sp::cmd_sheafify(doc, a1, i1, sh_sheafify);
      else
        throw sp::UsageError("sheaf needs --check or --sheafify");
    } else if (cartesian->parsed()) {
      if (!ca_dfs.empty())
        r = sp::cmd_cartesian_dfs(doc, a1, ca_dfs);
      else if (ca_top >= 0)
        r = sp::cmd_cartesian_topology(doc, a1, ca_top);
      else
        throw sp::UsageError("cartesian needs --dfs or --topology");
    } else if (ta->parsed()) {
      r = sp::cmd_topos_adjunction(doc, a1, a2, i1, i2);
    } else if (coalg->parsed()) {
      if (cg_extend >= 0)
        r = sp::cmd_coalg_extend(doc, a1, cg_extend);
      else if (cg_identify >= 0)
        r = sp::cmd_coalg_identify(doc, a1, cg_identify);
      else if (cg_build)
        r = sp::cmd_coalg_build(doc, a1);
      else
        throw sp::UsageError("coalg needs --build, --extend or --identify");
    } else if (replay->parsed()) {
      std::ifstream in(a1);
      if (!in) throw sp::UsageError("cannot open report file");
      json report_json = json::parse(in);
      r = sp::cmd_replay(doc, report_json);
    } else {
      throw sp::UsageError("no command given");
    }
    return emit_report(r, out);
  } catch (const facto::spec::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const facto::spec::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
