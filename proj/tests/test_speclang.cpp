#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "facto/speclang.hpp"

using namespace facto;
using namespace facto::spec;

namespace {

const char* kArrowDoc = R"(
category C {
  objects: x y;
  mor u : x -> y;
  generate: compose;
}
class IsoC in C = iso(C);
class AllC in C = all(C);
dfs D in C = (IsoC, IsoC, AllC);
)";

}  // namespace

TEST_CASE("parsing and loading a small document") {
  SpecDocument doc = load_text(kArrowDoc);
  CHECK(doc.load_report.ok());
  REQUIRE(doc.categories.size() == 1);
  const FinCategory& C = doc.categories[0];
  CHECK(C.obj_count() == 2);
  CHECK(C.mor_count() == 3);
  CHECK(C.find_mor("u") >= 0);
  CHECK(doc.dfs_index("D") == 0);
  CHECK(doc.classes[0].cls.size() == 2);  // the two identities
}

TEST_CASE("pretty-printing is a fixed point of parsing") {
  std::vector<std::string> texts = {
      kArrowDoc,
      "category T = terminal();\nwindow W on T { max_card = 2; }\n",
      "category B = walking_arrow();\n"
      "presheaf P on B { at a = {s t}; at b = {z}; restrict f : z -> s; }\n",
      "group G { elements: e a b; table: a*a = b, a*b = e, b*a = e, "
      "b*b = a; }\n"};
  for (const auto& t : texts) {
    std::string once = pretty(parse(t));
    std::string twice = pretty(parse(once));
    CHECK(once == twice);
    CHECK(doctest::String(once.c_str()) != "");
  }
}

TEST_CASE("syntax errors carry source positions") {
  try {
    parse("category C {\n  objects x y;\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("2:") != std::string::npos);
  }
}

TEST_CASE("missing composition entries are load errors naming the pair") {
  const char* text = R"(
category C {
  objects: x y z;
  mor u : x -> y;
  mor v : y -> z;
}
)";
  try {
    load_text(text);
    FAIL("expected a load error");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("missing composition entry") != std::string::npos);
    CHECK(msg.find("v.u") != std::string::npos);
  }
}

TEST_CASE("unresolved references are load errors") {
  CHECK_THROWS_AS(load_text("class E in Nowhere = epi(Nowhere);"),
                  ParseError);
  CHECK_THROWS_AS(load_text("category C = terminal();\n"
                            "class E in C = {ghost};"),
                  ParseError);
  CHECK_THROWS_AS(load_text("category C = terminal();\n"
                            "category C = terminal();"),
                  ParseError);
}

TEST_CASE("presheaf declarations build validated restriction tables") {
  const char* text = R"(
category B = walking_arrow();
presheaf P on B {
  at a = {s};
  at b = {z w};
  restrict f : z -> s, w -> s;
}
)";
  SpecDocument doc = load_text(text);
  CHECK(doc.load_report.ok());
  REQUIRE(doc.presheaves.size() == 1);
  const Presheaf& P = doc.presheaves[0].p;
  CHECK(P.card == std::vector<int>{1, 2});
  CHECK(validate_presheaf(P).ok());
}

TEST_CASE("groups default the first element to the identity") {
  SpecDocument doc = load_text(
      "group Z2 { elements: e g; table: g*g = e; }");
  CHECK(doc.load_report.ok());
  const GroupTable& g = doc.groups[0].g;
  CHECK(g.order() == 2);
  CHECK(g.validate().ok());
  CHECK(g.mult[1][1] == 0);
}

TEST_CASE("command verdicts map to exit codes") {
  SpecDocument doc = load_text(kArrowDoc);
  Report ok = cmd_verify_dfs(doc, "D");
  CHECK(ok.verdict == "pass");
  CHECK(ok.exit_code() == 0);

  // a deliberately wrong system: all three classes everything
  SpecDocument bad = load_text(
      "category C = sets(2);\n"
      "class A in C = all(C);\n"
      "dfs D in C = (A, A, A);\n");
  Report r = cmd_verify_dfs(bad, "D");
  CHECK(r.verdict == "fail");
  CHECK(r.exit_code() == 1);
  CHECK(!r.witnesses.empty());
  Report rep = cmd_replay(bad, r.to_json(true));
  CHECK(rep.verdict == "pass");

  CHECK_THROWS_AS(cmd_verify_dfs(doc, "Nope"), UsageError);
}

TEST_CASE("hypothesis failures surface as their own verdict with replayable "
          "witnesses") {
  SpecDocument doc = load_text(
      "category S = sets(2);\n"
      "class Epi in S = epi(S);\n"
      "class Mono in S = mono(S);\n"
      "class Iso in S = iso(S);\n"
      "dfs IsoFirst in S = (Iso, Epi, Mono);\n");
  CHECK(cmd_verify_dfs(doc, "IsoFirst").verdict == "pass");
  Report r = cmd_bijection(doc, "IsoFirst");
  CHECK(r.verdict == "hypothesis-failed");
  CHECK(r.exit_code() == 2);
  CHECK(!r.witnesses.empty());
  for (const auto& w : r.witnesses)
    CHECK(w.at("type").get<std::string>() == "two-out-of-three");
  Report rep = cmd_replay(doc, r.to_json(true));
  CHECK(rep.verdict == "pass");
  CHECK(rep.result.at("reproduced").get<int>() ==
        static_cast<int>(r.witnesses.size()));
}

TEST_CASE("machine reports are deterministic modulo timing") {
  SpecDocument doc = load_text(kArrowDoc);
  json a = cmd_verify_dfs(doc, "D").to_json(true);
  json b = cmd_verify_dfs(doc, "D").to_json(true);
  CHECK(a.dump() == b.dump());
  CHECK(a.contains("verdict"));
  CHECK(a.contains("witnesses"));
  CHECK(a.contains("window"));
  CHECK(a.contains("timing_ms"));
  CHECK(a.at("timing_ms").get<int>() == 0);
}

TEST_CASE("window declarations expose engine commands") {
  SpecDocument doc = load_text(
      "category T = terminal();\nwindow W on T { max_card = 3; }\n");
  Report e = cmd_lt_enumerate(doc, "W");
  CHECK(e.verdict == "pass");
  CHECK(e.result.at("topologies").get<int>() == 2);
  CHECK(e.result.at("grothendieck_oracle").get<int>() == 2);
  CHECK(cmd_lt_roundtrip(doc, "W", 0).verdict == "pass");
  CHECK(cmd_lt_compare(doc, "W", 0, 1).result.at("le").get<bool>());
  CHECK_THROWS_AS(cmd_lt_roundtrip(doc, "W", 7), UsageError);
}

TEST_CASE("the corpus battery is deterministic end to end") {
  const char* text =
      "category S = sets(2);\n"
      "class Epi in S = epi(S);\n"
      "class Mono in S = mono(S);\n"
      "class Iso in S = iso(S);\n"
      "dfs Image in S = (Epi, Iso, Mono);\n";
  SpecDocument doc = load_text(text);
  auto one = run_corpus(doc);
  auto two = run_corpus(doc);
  REQUIRE(one.size() == two.size());
  for (size_t i = 0; i < one.size(); ++i)
    CHECK(one[i].to_json(true).dump() == two[i].to_json(true).dump());
  CHECK(batch_exit_code(one) == 0);
}
