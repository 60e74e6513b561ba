#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "endspace/cli.hpp"

using namespace endspace;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("cli subcommands") {
  CHECK(call({"validate", "catalog:bintree-tops"}).code == 0);
  CHECK(call({"validate", "catalog:ladder-to-limit"}).code == 0);
  auto b = call({"build", "catalog:two-storey"});
  CHECK(b.code == 0);
  CHECK(b.out.find("\"height\":\"w*2\"") != std::string::npos);

  auto c = call({"converge", "catalog:bintree", "--seq", "branch(prefix=rep(0,n);period(1))", "--target",
                 "branch(period(0))"});
  CHECK(c.code == 0);
  CHECK(c.out.find("\"verdict\":\"Converges\"") != std::string::npos);
  auto oc = call({"oracle-converge", "catalog:bintree", "--seq", "prefix(0; period(1))", "--target", "period(0)",
                  "--depth", "32"});
  CHECK(oc.out.find("\"verdict\":\"Diverges\"") != std::string::npos);

  CHECK(call({"adhesion", "catalog:chain-omega2", "--depth", "3"}).code == 0);
  CHECK(call({"split", "catalog:ladder-to-limit", "--depth", "5", "--breadth", "3"}).code == 0);
  CHECK(call({"transport", "catalog:ladder-to-limit", "--samples", "10"}).code == 0);
  CHECK(call({"bipartitions", "catalog:bintree", "--nodes", "100", "--pairs", "20"}).code == 0);
  CHECK(call({"expansion", "catalog:two-storey", "--samples", "20"}).code == 0);
}

TEST_CASE("cli dot output") {
  const std::string path = "cli_test_truncation.dot";
  auto r = call({"truncate", "catalog:bintree", "--depth", "3", "--dot", path});
  CHECK(r.code == 0);
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().rfind("graph truncation {", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("cli errors") {
  auto p = call({"converge", "catalog:bintree", "--seq", "branch(prefix=rep(0,n);period(1)", "--target", "period(0)"});
  CHECK(p.code == 2);
  CHECK(p.err.find("1:33") != std::string::npos);
  CHECK(call({"frobnicate", "catalog:bintree"}).code == 2);
  CHECK(call({"validate", "catalog:nope"}).code == 2);
  CHECK(call({"converge", "catalog:bintree", "--seq", "period(2)", "--target", "period(0)"}).code == 2);
}

TEST_CASE("cli compare is deterministic") {
  auto a = call({"compare", "catalog:two-storey", "--samples", "15", "--depth", "32"});
  auto b = call({"compare", "catalog:two-storey", "--samples", "15", "--depth", "32"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 16);
}
