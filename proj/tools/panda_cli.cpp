#include <iostream>

#include "CLI11.hpp"
#include "panda/commands.hpp"

using namespace panda;

namespace {

struct Options {
  std::string program;
  std::string stats;
  std::string data;
  std::string out = "out";
  std::string results;
  std::string basis = "elemental";
  bool pretty = false;
  RunConfig run;
};

StatisticsProfile load_stats(const Options& o, const Program& prog) {
  if (o.stats.empty()) return {};
  return parse_stats(read_text_file(o.stats), prog.universe(), prog.body());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case optimal evaluation of conjunctive queries and "
               "disjunctive rules under degree constraints"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  auto common = [&](CLI::App* sub, bool stats, bool lp) {
    sub->add_option("program", o.program, "query or rule file")
        ->required()
        ->check(CLI::ExistingFile);
    if (stats) {
      sub->add_option("-s,--stats", o.stats, "statistics file")
          ->envname("PANDA_STATS");
    }
    if (lp) {
      sub->add_option("--basis", o.basis, "witness basis")
          ->check(CLI::IsMember({"elemental", "full"}))
          ->envname("PANDA_BASIS");
      sub->add_option("--max-vars", o.run.max_variables,
                      "refuse programs with more variables")
          ->envname("PANDA_MAX_VARS");
    }
  };

  auto* bound = app.add_subcommand("bound", "polymatroid bound");
  common(bound, true, true);
  auto* witness = app.add_subcommand("witness", "integral Shannon witness");
  common(witness, true, true);
  auto* subw = app.add_subcommand("subw", "submodular width");
  common(subw, true, true);
  auto* fhtw = app.add_subcommand("fhtw", "fractional hypertree width");
  common(fhtw, true, true);

  auto* plan = app.add_subcommand("plan", "query plan with witnesses");
  common(plan, true, true);

  auto* run = app.add_subcommand("run", "evaluate and write result CSVs");
  common(run, true, true);
  run->add_option("-d,--data", o.data, "relation directory or manifest")
      ->required()
      ->envname("PANDA_DATA");
  run->add_option("-o,--out", o.out, "output directory")->envname("PANDA_OUT");
  run->add_flag("--parallel", o.run.parallel, "parallel subproblems")
      ->envname("PANDA_PARALLEL");
  run->add_flag("--trace", o.run.trace, "include the step trace")
      ->envname("PANDA_TRACE");

  auto* verify = app.add_subcommand("verify", "check results against the oracle");
  common(verify, true, false);
  verify->add_option("-d,--data", o.data, "relation directory or manifest")
      ->required()
      ->envname("PANDA_DATA");
  verify->add_option("-r,--results", o.results, "directory of result CSVs")
      ->required();

  auto* oracle = app.add_subcommand("oracle", "naive evaluation");
  common(oracle, false, false);
  oracle->add_option("-d,--data", o.data, "relation directory or manifest")
      ->required()
      ->envname("PANDA_DATA");
  oracle->add_option("-o,--out", o.out, "output directory")->envname("PANDA_OUT");

  auto* generate = app.add_subcommand("generate", "random instance CSVs");
  common(generate, true, false);
  generate->add_option("-o,--out", o.out, "output directory")
      ->envname("PANDA_OUT");
  generate->add_option("--seed", o.run.seed, "generator seed")
      ->envname("PANDA_SEED");
  generate->add_option("--domain", o.run.domain, "values per column");
  generate->add_option("--tuples", o.run.tuples, "rows per relation");
  generate->add_option("--skew", o.run.skew, "share of rows on value 0")
      ->check(CLI::Range(0.0, 1.0));

  app.add_flag("--pretty", o.pretty, "indent JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    o.run.basis = o.basis == "full" ? Basis::kFull : Basis::kElemental;
    Program prog = parse_program(read_text_file(o.program));
    Json out;
    int status = 0;
    if (*bound) {
      out = cmd_bound(prog, load_stats(o, prog), o.run);
    } else if (*witness) {
      out = cmd_witness(prog, load_stats(o, prog), o.run);
    } else if (*subw || *fhtw) {
      out = cmd_width(prog, load_stats(o, prog), o.run, subw->parsed());
    } else if (*plan) {
      out = cmd_plan(prog, load_stats(o, prog), o.run);
    } else if (*run) {
      out = cmd_run(prog, load_stats(o, prog), o.data, o.out, o.run);
    } else if (*verify) {
      out = cmd_verify(prog, load_stats(o, prog), o.data, o.results);
      if (!out["ok"].get<bool>()) status = 3;
    } else if (*oracle) {
      out = cmd_oracle(prog, o.data, o.out);
    } else if (*generate) {
      if (o.stats.empty()) {
        out = cmd_generate(prog, nullptr, o.out, o.run);
      } else {
        StatisticsProfile p = load_stats(o, prog);
        out = cmd_generate(prog, &p, o.out, o.run);
      }
    }
    std::cout << out.dump(o.pretty ? 2 : -1) << "\n";
    return status;
  } catch (const PandaError& e) {
    std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what()
              << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
}
