#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tadi/cli.hpp"
#include "tadi/types.hpp"

namespace {

struct SubArgs {
  std::string config_path;
  std::map<std::string, std::string> values;  // key -> raw value from flags
  CLI::App* app = nullptr;
};

// every config key doubles as a --section.key flag that overrides the file
void register_run_flags(CLI::App* sub, SubArgs& args) {
  args.app = sub;
  sub->add_option("-c,--config", args.config_path, "key=value config file");
  for (const auto& key : tadi::config_keys()) {
    args.values[key] = "";
    sub->add_option("--" + key, args.values[key], "");
  }
}

tadi::RunConfig assemble_config(const SubArgs& args) {
  tadi::RunConfig cfg;
  if (!args.config_path.empty()) tadi::load_config_file(cfg, args.config_path);
  for (const auto& [key, value] : args.values) {
    if (args.app->get_option("--" + key)->count() > 0) {
      tadi::apply_config_entry(cfg, key, value);
    }
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"indefinite low-rank ADI solver for generalized Lyapunov equations"};
  app.require_subcommand(1);

  SubArgs solve_args, oracle_args, gen_args;
  CLI::App* solve = app.add_subcommand("solve", "run a solver variant and write trace artifacts");
  register_run_flags(solve, solve_args);
  tadi::Index repeat_flag = 0;
  solve->add_option("--repeat", repeat_flag, "independent repeats with consecutive seeds");

  CLI::App* oracle =
      app.add_subcommand("oracle", "solve densely, run the configured variant, report the error");
  register_run_flags(oracle, oracle_args);

  CLI::App* gen = app.add_subcommand("gen", "write a synthetic problem as Matrix Market files");
  register_run_flags(gen, gen_args);

  std::vector<std::string> compare_paths;
  CLI::App* compare = app.add_subcommand("compare", "tabulate two or more trace CSVs");
  compare->add_option("traces", compare_paths, "trace.csv paths")->expected(-1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tadi::kExitInputError;  // --help stays 0, bad usage -> 3
  }

  try {
    if (solve->parsed()) {
      tadi::RunConfig cfg = assemble_config(solve_args);
      if (repeat_flag > 0) cfg.repeat = repeat_flag;
      return tadi::run_solve(cfg, std::cout);
    }
    if (oracle->parsed()) {
      return tadi::run_oracle(assemble_config(oracle_args), std::cout);
    }
    if (gen->parsed()) {
      return tadi::run_gen(assemble_config(gen_args), std::cout);
    }
    if (compare->parsed()) {
      return tadi::run_compare(compare_paths, std::cout);
    }
  } catch (const tadi::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return tadi::kExitInputError;
  } catch (const tadi::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return tadi::kExitNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return tadi::kExitInputError;
  }
  return tadi::kExitInputError;
}
