#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qrm/report.hpp>

namespace {

std::vector<qrm::Method> parse_method_list(const std::string& csv) {
  std::vector<qrm::Method> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const std::size_t comma = csv.find(',', start);
    const std::string token =
        csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) out.push_back(qrm::parse_method(token));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int emit(const qrm::RunRequest& req) {
  const qrm::RunResult res = qrm::run_request(req);
  if (!res.output.empty()) {
    if (req.out_path.empty()) {
      std::cout << res.output;
    } else {
      std::ofstream file(req.out_path, std::ios::binary);
      if (!file) {
        std::cerr << "error: cannot open output file: " << req.out_path << "\n";
        return 2;
      }
      file << res.output;
    }
  }
  if (!res.error.empty()) std::cerr << "error: " << res.error << "\n";
  return res.exit_code;
}

struct Flags {
  double g = 0.1;
  double delta = 1.0;
  double tol = 1e-7;
  double g_start = 0.0;
  double g_end = 1.0;
  int levels = 8;
  int steps = 11;
  int truncation = -1;
  std::string method{};
  std::string initial = "vgs";
  std::string format = "csv";
  std::string out{};
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--g", f.g, "coupling strength g, in units of the cavity frequency");
  sub->add_option("--delta", f.delta, "atom frequency, in units of the cavity frequency");
  sub->add_option("--tol", f.tol, "relative convergence tolerance for the exact solver");
  sub->add_option("--truncation", f.truncation, "fixed Fock cutoff M (default: chosen automatically)");
  sub->add_option("--format", f.format, "output format: csv or json");
  sub->add_option("--out", f.out, "write the table to this path instead of standard output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Energy spectra and vacuum-Rabi emission analysis for a two-level atom coupled to a "
      "quantized cavity mode, counter-rotating terms included"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* spectrum = app.add_subcommand("spectrum", "lowest energy levels for one method");
  add_common(spectrum, f);
  spectrum->add_option("--levels", f.levels, "number of levels to print");
  spectrum->add_option("--method", f.method,
                       "exact | ed-oracle | rwa | order0 | order1 | order2 | series");

  CLI::App* converge = app.add_subcommand(
      "converge", "grow the Fock cutoff until the requested levels stabilize");
  add_common(converge, f);
  converge->add_option("--levels", f.levels, "number of levels to converge (default 20)");

  CLI::App* sweep = app.add_subcommand("sweep", "level energies across a coupling grid");
  add_common(sweep, f);
  sweep->add_option("--levels", f.levels, "levels per method");
  sweep->add_option("--methods,--method", f.method, "comma-separated method list");
  sweep->add_option("--g-start", f.g_start, "first coupling of the grid")->required();
  sweep->add_option("--g-end", f.g_end, "last coupling of the grid")->required();
  sweep->add_option("--steps", f.steps, "number of grid points (>= 2)");

  CLI::App* splitting =
      app.add_subcommand("splitting", "emission peak heights and vacuum Rabi splitting");
  add_common(splitting, f);
  splitting->add_option("--initial", f.initial, "initial state: vgs or e0");
  splitting->add_option("--method", f.method, "series | order2 | exact (default series)");
  splitting->add_option("--g-start", f.g_start, "sweep the splitting over a coupling grid");
  splitting->add_option("--g-end", f.g_end, "end of the coupling grid");
  splitting->add_option("--steps", f.steps, "number of grid points (>= 2)");

  CLI::App* compare =
      app.add_subcommand("compare", "side-by-side level energies and deviations across methods");
  add_common(compare, f);
  compare->add_option("--levels", f.levels, "number of levels to compare");
  compare->add_option("--methods,--method", f.method, "comma-separated method list (>= 2)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  qrm::RunRequest req;
  req.params.delta = f.delta;
  req.params.g = f.g;
  req.levels = f.levels;
  req.tol = f.tol;
  req.truncation = f.truncation;
  req.g_start = f.g_start;
  req.g_end = f.g_end;
  req.steps = f.steps;
  req.out_path = f.out;
  try {
    req.format = qrm::parse_format(f.format);
    req.initial = qrm::parse_initial(f.initial);
    if (!f.method.empty()) req.methods = parse_method_list(f.method);

    if (*spectrum) {
      req.command = qrm::Command::spectrum;
    } else if (*converge) {
      req.command = qrm::Command::converge;
      if (!converge->count("--levels")) req.levels = 20;
    } else if (*sweep) {
      req.command = qrm::Command::sweep;
    } else if (*splitting) {
      req.command = qrm::Command::splitting;
      const bool has_start = splitting->count("--g-start") > 0;
      const bool has_end = splitting->count("--g-end") > 0;
      if (has_start != has_end)
        throw std::invalid_argument("a splitting grid needs both --g-start and --g-end");
      if (!has_start && splitting->count("--steps") > 0)
        throw std::invalid_argument("--steps requires --g-start and --g-end");
      req.use_grid = has_start;
    } else if (*compare) {
      req.command = qrm::Command::compare;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return emit(req);
}
