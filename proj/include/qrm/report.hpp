#pragma once

#include <string>
#include <vector>

#include <qrm/emission.hpp>
#include <qrm/types.hpp>

namespace qrm {

enum class Command { spectrum, converge, sweep, splitting, compare };
enum class OutputFormat { csv, json };

const char* to_string(Command c);
const char* to_string(OutputFormat f);

Command parse_command(const std::string& name);
Method parse_method(const std::string& name);
InitialKind parse_initial(const std::string& name);
OutputFormat parse_format(const std::string& name);

struct RunRequest {
  Command command = Command::spectrum;
  ModelParams params{};
  std::vector<Method> methods{};  // empty: per-command default (see effective_methods)
  int levels = 8;
  double g_start = 0.0;
  double g_end = 1.0;
  int steps = 2;
  bool use_grid = false;  // splitting only: iterate the grid instead of the single g
  InitialKind initial = InitialKind::vgs;
  OutputFormat format = OutputFormat::csv;
  std::string out_path{};  // empty: standard output
  double tol = 1e-7;
  int truncation = -1;  // fixed Fock cutoff; negative requests automatic growth

  void validate() const;  // throws std::invalid_argument on a malformed request
};

struct RunResult {
  int exit_code = 0;     // 0 success, 2 argument error, 3 numerical non-convergence
  std::string output{};  // rendered table (CSV or JSON)
  std::string error{};   // diagnostic accompanying a nonzero exit code
};

// Method list actually used by a request: fills in the per-command default
// (exact for spectrum/converge/sweep, series for splitting) when none given.
std::vector<Method> effective_methods(const RunRequest& req);

// 12-significant-digit decimal rendering used for every CSV number.
std::string format_number(double x);

// Lowest `levels` energies of the chosen method, sorted ascending and indexed
// from zero.  `truncation` fixes the Fock cutoff where one applies (negative
// selects the default: automatic growth for exact, 40 for the dense check).
Spectrum spectrum_for_method(const ModelParams& p, Method method, int levels, double tol,
                             int truncation);

// Executes a request end to end and renders its table.  Never throws: every
// failure is reported through exit_code and error.
RunResult run_request(const RunRequest& req);

}  // namespace qrm
