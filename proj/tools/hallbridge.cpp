// Batch front end: load a quiver algebra, enumerate module classes, print
// structure-constant tables, or run the verification suite.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hallbridge/verify.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hallbridge::ParseError("cannot open input file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hallbridge::Error("cannot open output file " + path);
  out << text;
}

std::set<std::string> split_checks(const std::string& arg) {
  std::set<std::string> out;
  std::string cur;
  for (char c : arg) {
    if (c == ',') {
      if (!cur.empty()) out.insert(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.insert(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hallbridge: exact Hall-algebra computations for quiver algebras"};
  app.require_subcommand(1);

  std::string input_path, out_path, checks_arg, which = "hall";
  int max_dim = 2, workers = 1;
  long long budget = 1'000'000;
  unsigned long long seed = 12345;

  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  verify->add_option("input", input_path, "algebra input file (JSON)")->required();
  verify->add_option("--max-dim", max_dim, "total-dimension bound for the module universe")
      ->required();
  verify->add_option("--checks", checks_arg, "comma-separated subset of checks");
  verify->add_option("--budget", budget, "search budget (q^dim enumeration cap)");
  verify->add_option("--workers", workers, "worker threads");
  verify->add_option("--seed", seed, "seed for the sampled-triple checks");
  verify->add_option("--out", out_path, "report output path (default stdout)");

  CLI::App* table = app.add_subcommand("table", "emit a structure-constant table");
  table->add_option("input", input_path, "algebra input file (JSON)")->required();
  table->add_option("--max-dim", max_dim, "total-dimension bound")->required();
  table->add_option("--which", which, "hall or dh")->check(CLI::IsMember({"hall", "dh"}));
  table->add_option("--budget", budget, "search budget");
  table->add_option("--out", out_path, "table output path (default stdout)");

  CLI::App* enumerate = app.add_subcommand("enumerate", "list module classes up to the bound");
  enumerate->add_option("input", input_path, "algebra input file (JSON)")->required();
  enumerate->add_option("--max-dim", max_dim, "total-dimension bound")->required();
  enumerate->add_option("--budget", budget, "search budget");
  enumerate->add_option("--out", out_path, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  hallbridge::Budgets bud;
  bud.search = budget;
  bud.raw_enum = budget * 10;

  try {
    std::string input = read_file(input_path);
    if (app.got_subcommand(verify)) {
      hallbridge::VerifyOptions opts;
      opts.max_total_dim = max_dim;
      opts.checks = split_checks(checks_arg);
      opts.budgets = bud;
      opts.workers = workers;
      opts.seed = seed;
      hallbridge::VerifyRun run = hallbridge::run_verify(input, opts);
      write_output(out_path, run.report.to_json());
      return run.exit_code;
    }
    if (app.got_subcommand(table)) {
      std::string text = which == "hall" ? hallbridge::hall_table_json(input, max_dim, bud)
                                         : hallbridge::dh_table_json(input, max_dim, bud);
      write_output(out_path, text);
      return 0;
    }
    write_output(out_path, hallbridge::enumerate_json(input, max_dim, bud));
    return 0;
  } catch (const hallbridge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
