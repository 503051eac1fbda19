#include <json.hpp>
#include <sstream>

#include "doctest.h"
#include "ncalg/cli.hpp"
#include "ncalg/ncseries.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = ncalg::run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("expand and order") {
  auto r = run({"expand", "--ring", "z", "--degree", "2", "--word", "hkHK", "--pretty"});
  CHECK(r.code == 0);
  CHECK(r.out == "1 + a*b - b*a\n");

  r = run({"expand", "--ring", "z", "--degree", "2", "--word", "hkHK"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("series") == "1 + a*b - b*a");

  r = run({"order", "--u", "h", "--v", "k"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("order") == "GT");
  CHECK(run({"order", "--u", "k", "--v", "h", "--pretty"}).out == "LT\n");
  CHECK(run({"order", "--u", "hk", "--v", "hk", "--pretty"}).out == "EQ\n");
}

TEST_CASE("fox transport") {
  const auto r = run({"fox", "--element", "2*hkH - k + 3", "--gen", "k", "--degree", "4"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("transport_verified") == true);
}

TEST_CASE("sweep") {
  const auto r = run({"sweep", "--max-len", "2", "--degree", "3", "--axioms"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("injective") == true);
  CHECK(j.at("words") == 17);
  CHECK(j.at("axioms").at("undecided") == 0);
}

TEST_CASE("coproduct verbs") {
  auto r = run({"coproduct", "mul", R"({"type":"a","tensors":[["a"]]})", R"({"type":"b","tensors":[["b"]]})",
                "--degree", "3"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j.at("alpha") == "a*b");
  CHECK(j.at("components").at(0).at("type") == "ab");

  // Shared boundary letter merges slots.
  r = run({"coproduct", "mul", R"({"type":"ab","tensors":[["a","b"]]})", "-", "--degree", "4"},
          R"({"type":"ba","tensors":[["b","a"]]})");
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j.at("alpha") == "a*b*b*a");
  CHECK(j.at("components").at(0).at("type") == "aba");

  r = run({"coproduct", "eval", R"({"scalar": 2, "components": [{"type":"a","tensors":[["a*a"]]}]})", "--degree",
           "3"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("alpha") == "2 + a*a");

  r = run({"coproduct", "decompose", "a + a*b + b*a*b", "--ncap", "1", "--degree", "4"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j.at("components").at("a") == "a");
  CHECK(j.at("components").at("ab") == "a*b");
  CHECK(j.at("components").at("bab") == "b*a*b");

  r = run({"coproduct", "decompose", "a*b*a*b", "--ncap", "1", "--degree", "4"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("not_in_image") == "abab");

  r = run({"coproduct", "eval", R"({"type":"a","tensors":[["1 + a"]]})", "--a-subring", "polynomial"});
  CHECK(r.code == 2);
}

TEST_CASE("property: series survive a print/parse round trip through the CLI") {
  for (const char* s : {"a", "1 + a*b - b*a", "3*a^2*b - 2*b", "a*b*a*b"}) {
    const auto r = run({"coproduct", "decompose", s, "--ncap", "3", "--degree", "4"});
    REQUIRE(r.code == 0);
    const ncalg::Ring z = ncalg::Ring::integers();
    ncalg::NcSeries sum(z, ncalg::Alphabet(), 4, {});
    const json comps = json::parse(r.out).at("components");
    for (const auto& [type, text] : comps.items())
      sum = sum + ncalg::parse_series(text.get<std::string>(), z, 4);
    CHECK(sum == ncalg::parse_series(s, z, 4));
  }
}

TEST_CASE("witness run all") {
  const auto r = run({"witness", "run", "all"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.at("reports").size() == 5);
  for (const auto& rep : j.at("reports")) CHECK(rep.at("passed") == true);
  CHECK(run({"witness", "run", "nope"}).code == 2);
}

TEST_CASE("flat-check and sahaev-check") {
  auto r = run({"flat-check", "--ring", "zmod:4", "--presentation", R"({"n":1,"gens":[[2]]})", "--cohn"});
  CHECK(r.code == 1);
  auto j = json::parse(r.out);
  CHECK(j.at("result") == "NotFlat");
  CHECK(j.at("cohn").at("holds") == false);

  r = run({"flat-check", "--ring", "zmod:6", "--presentation", "-"}, R"({"n":1,"gens":[[3]]})");
  CHECK(r.code == 0);
  j = json::parse(r.out);
  CHECK(j.at("result") == "Flat");
  CHECK(j.at("e") == json::parse(R"([["3"]])"));

  r = run({"sahaev-check", R"J({"ring":"prod:q^2","sequence":[[["(0,0)"]],[["(1,0)"]],[["(1,1)"]]]})J"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("pairs") == 2);

  r = run({"sahaev-check", R"([[["3"]],[["3"]]])", "--ring", "zmod:6"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out).at("index") == 0);
}

TEST_CASE("errors exit with 2") {
  auto r = run({"expand", "--word", "hk("});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 1, column 3") != std::string::npos);
  r = run({"sahaev-check", "[[1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 1") != std::string::npos);
  CHECK(run({"expand", "--ring", "zmod:0", "--word", "h"}).code == 2);
  CHECK(run({"expand", "--degree", "65", "--word", "h"}).code == 2);
  CHECK(run({"expand", "--word", "h", "--element", "h"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::vector<std::string>> cmds = {
      {"expand", "--degree", "5", "--element", "2*hkHK - kh + 1"},
      {"sweep", "--max-len", "3", "--degree", "4"},
      {"witness", "run", "gmb2"},
  };
  for (const auto& c : cmds) {
    const auto a = run(c), b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}
