// quadsym: analyses of accretive quadratic symbols, JSON report on stdout or --report.

#include "quadsym/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Analyses of accretive quadratic symbols"};
  app.require_subcommand(1, 1);

  std::string input, csv_dir, report_path, trunc_text = "10,14,18,22", shells_text = "1:1024:geometric";
  quadsym::RunOptions opts;

  for (const auto& name : quadsym::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--input", input, "symbol document (JSON)")->required();
    sub->add_option("--n-max", opts.n_max, "cap on every truncation degree");
    sub->add_option("--tol", opts.tol, "relative kernel threshold")->capture_default_str();
    sub->add_option("--seed", opts.seed, "seed for all sampling")->capture_default_str();
    sub->add_option("--trunc", trunc_text, "truncation degrees for the subelliptic trend")->capture_default_str();
    sub->add_option("--shells", shells_text, "radius shells lo:hi:geometric")->capture_default_str();
    sub->add_option("--csv", csv_dir, "directory for key,x,value plot series");
    sub->add_option("--report", report_path, "write the JSON report here instead of stdout");
    sub->add_flag("--timings", opts.timings, "include runtimes in the report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  opts.subcommand = app.get_subcommands().front()->get_name();

  try {
    opts.trunc = quadsym::parse_int_list(trunc_text);
    std::tie(opts.shell_lo, opts.shell_hi) = quadsym::parse_shells(shells_text);
    const quadsym::SymbolDocument doc = quadsym::load_symbol(input);
    const quadsym::RunResult res = quadsym::run(doc, opts);

    const std::string text = res.report.dump(2) + "\n";
    if (report_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(report_path);
      if (!out) throw quadsym::InputError("cannot write report '" + report_path + "'");
      out << text;
    }
    if (!csv_dir.empty()) quadsym::write_series(csv_dir, res.series);
    return res.exit_code;
  } catch (const quadsym::InputError& e) {
    std::cerr << "quadsym: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "quadsym: " << e.what() << "\n";
    return 2;
  }
}
