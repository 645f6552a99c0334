#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "panda/commands.hpp"
#include "panda/errors.hpp"
#include "support.hpp"

using namespace panda;
using namespace panda::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("panda_cli_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const PandaError& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kUsage;
}

bool has_float(const Json& j) {
  if (j.is_number_float()) return true;
  if (j.is_structured())
    for (const auto& v : j) if (has_float(v)) return true;
  return false;
}

}  // namespace

TEST_CASE("parsing queries and rules") {
  Program c4 = program("Q(x,y) :- R(x,y), S(y,z), U(z,w), V(w,x).");
  CHECK(c4.is_query);
  CHECK(c4.query.free == (X | Y));
  CHECK(c4.query.body.atoms.size() == 4);
  CHECK(c4.universe().size() == 4);

  Program r = two_heads();
  CHECK_FALSE(r.is_query);
  REQUIRE(r.rule.output.atoms.size() == 2);
  CHECK(r.rule.output.atoms[0].vars == (X | Y | Z));
  CHECK(r.rule.output.atoms[1].vars == (Y | Z | W));

  Program b = program("% boolean\nQ() :- R(a,b),\n  S(b,c).");
  CHECK(b.query.free.empty());
}

TEST_CASE("parse errors carry a location") {
  try {
    program("Q(x) :- R(x,y)\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.code() == ErrorCode::kParseError);
  }
  try {
    program("Q(x) :- R(x,y), S(y,,z).");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 21);
  }
  CHECK(code_of([] { program("Q(x) :- R(x,y), R(y,x)."); }) ==
        ErrorCode::kParseError);
  CHECK(code_of([] { program("Q(q) :- R(x,y)."); }) ==
        ErrorCode::kHeadVarNotInBody);
}

TEST_CASE("print and parse round trip") {
  for (const std::string text :
       {"Q(x,y) :- R(x,y), S(y,z), U(z,w), V(w,x).",
        "A(x,y,z) | B(y,z,w) :- R(x,y), S(y,z), U(z,w).", "Q() :- R(a,b)."}) {
    Program p = program(text);
    CHECK(program(print_program(p)) == p);
  }
}

TEST_CASE("statistics") {
  Program p = program("Q(x,w) :- R(x,y), S(y,z), U(z,w).");
  StatisticsProfile s = stats(p, "card R <= 100\ndeg S (z|y) <= 1\n");
  REQUIRE(s.constraints.size() == 2);
  CHECK(s.constraints[0].x.empty());
  VarSet y = VarSet::singleton(p.universe().index_of("y"));
  VarSet z = VarSet::singleton(p.universe().index_of("z"));
  CHECK(s.constraints[1].x == y);
  CHECK(s.constraints[1].y == z);
  CHECK(constraint_label(s.constraints[1], p.universe(), p.body()) == "S(z|y)");
  CHECK(stats(p, print_stats(s, p.universe(), p.body())).constraints ==
        s.constraints);

  CHECK(code_of([&] { stats(p, "deg S (w|y) <= 3"); }) ==
        ErrorCode::kNonGuardedConstraint);
  CHECK(code_of([&] { stats(p, "card T <= 3"); }) ==
        ErrorCode::kUnknownRelation);
  CHECK(code_of([&] { stats(p, "card R <= -1"); }) == ErrorCode::kParseError);
}

TEST_CASE("loading relations") {
  Program p = program("Q(x,y) :- R(x,y), S(y,z).");
  fs::path dir = scratch("load");
  write(dir / "R.csv", "x,y\n1,2\n1,3\n2,2\n1,2\n");
  write(dir / "S.csv", "y,z\n2,a\n3,b\n");
  ValueDictionary dict;
  LoadReport rep;
  Instance inst = load_relations(dir, p.body(), p.universe(), dict, &rep);
  CHECK(inst.at("R").size() == 3);
  CHECK(rep.duplicates.at("R") == 1);
  CHECK(rep.rows.at("S") == 2);

  StatisticsProfile tight = stats(p, "card R <= 2");
  try {
    check_instance(inst, tight);
    FAIL("expected a violation");
  } catch (const PandaError& e) {
    CHECK(e.code() == ErrorCode::kConstraintViolated);
    CHECK(std::string(e.what()).find("R") != std::string::npos);
  }
  StatisticsProfile fd = stats(p, "deg R (y|x) <= 1");
  CHECK(code_of([&] { check_instance(inst, fd); }) ==
        ErrorCode::kConstraintViolated);

  write(dir / "S.csv", "z,y\n2,a\n");
  CHECK(code_of([&] {
          ValueDictionary d;
          load_relations(dir, p.body(), p.universe(), d);
        }) == ErrorCode::kHeaderMismatch);
  fs::remove(dir / "S.csv");
  CHECK(code_of([&] {
          ValueDictionary d;
          load_relations(dir, p.body(), p.universe(), d);
        }) == ErrorCode::kMissingFile);

  fs::path man = dir / "manifest.txt";
  write(dir / "other.csv", "y,z\n2,a\n");
  write(man, "R R.csv\nS other.csv\n");
  ValueDictionary d2;
  CHECK(load_relations(man, p.body(), p.universe(), d2).at("S").size() == 1);
}

TEST_CASE("csv output is sorted") {
  Program p = program("Q(x,y) :- R(x,y).");
  ValueDictionary dict;
  Value ten = dict.intern("10"), two = dict.intern("2"), b = dict.intern("b");
  Table t = Table::from_rows(X | Y, {{ten, two}, {two, b}, {two, ten}});
  CHECK(format_csv(t, p.query.head_order, p.universe(), dict) ==
        "x,y\n2,10\n2,b\n10,2\n");
}

TEST_CASE("bound and width commands") {
  Program p = two_heads();
  StatisticsProfile s = stats(p, card_text(p, "4096"));
  Json j = cmd_bound(p, s, {});
  CHECK(j["bound"]["exponent"] == "3/2");
  CHECK(j["bound"]["value"] == "262144");
  CHECK_FALSE(has_float(j));

  Program c4 = program(slurp(fs::path(FIXTURE_DIR) / "four_cycle.dl"));
  StatisticsProfile s4 =
      stats(c4, slurp(fs::path(FIXTURE_DIR) / "four_cycle.stats"));
  CHECK(cmd_width(c4, s4, {}, true)["width"]["exponent"] == "3/2");
  CHECK(cmd_width(c4, s4, {}, false)["width"]["exponent"] == "2");
  Json plan = cmd_plan(c4, s4, {});
  CHECK(plan["rules"].size() == 4);
  CHECK_FALSE(has_float(plan));

  RunConfig small;
  small.max_variables = 3;
  CHECK(code_of([&] { cmd_bound(c4, s4, small); }) ==
        ErrorCode::kUniverseTooLarge);
  CHECK(exit_code_for(ErrorCode::kUniverseTooLarge) == 1);
  CHECK(exit_code_for(ErrorCode::kConstraintViolated) == 2);
  CHECK(exit_code_for(ErrorCode::kNoApplicableCase) == 3);
}

TEST_CASE("run and verify round trip") {
  for (const std::string name : {"two_heads", "four_cycle", "path_fd"}) {
    Program p = program(slurp(fs::path(FIXTURE_DIR) / (name + ".dl")));
    StatisticsProfile s =
        stats(p, slurp(fs::path(FIXTURE_DIR) / (name + ".stats")));
    fs::path data = scratch(name + "_data");
    fs::path out1 = scratch(name + "_out1");
    fs::path out2 = scratch(name + "_out2");
    RunConfig g;
    g.seed = 5;
    g.domain = 10;
    g.tuples = 50;
    cmd_generate(p, &s, data, g);
    Json r1 = cmd_run(p, s, data, out1, {});
    CHECK_FALSE(has_float(r1));
    RunConfig par;
    par.parallel = true;
    cmd_run(p, s, data, out2, par);
    CHECK(cmd_verify(p, s, data, out1)["ok"] == true);
    for (const auto& e : fs::directory_iterator(out1)) {
      CHECK_MESSAGE(slurp(e.path()) == slurp(out2 / e.path().filename()),
                    name);
    }
  }
}

TEST_CASE("verify rejects a wrong answer") {
  Program p = program(slurp(fs::path(FIXTURE_DIR) / "four_cycle.dl"));
  StatisticsProfile s =
      stats(p, slurp(fs::path(FIXTURE_DIR) / "four_cycle.stats"));
  fs::path data = scratch("wrong_data");
  fs::path out = scratch("wrong_out");
  RunConfig g;
  g.seed = 9;
  g.domain = 6;
  g.tuples = 30;
  cmd_generate(p, &s, data, g);
  cmd_oracle(p, data, out);
  CHECK(cmd_verify(p, s, data, out)["ok"] == true);
  write(out / "Q.csv", "x,y\n");
  CHECK(cmd_verify(p, s, data, out)["ok"] == false);
}
