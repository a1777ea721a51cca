#include <qrm/report.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include <qrm/ed_oracle.hpp>
#include <qrm/order2.hpp>
#include <qrm/rwa.hpp>
#include <qrm/solver.hpp>

namespace qrm {

namespace {

using ordered_json = nlohmann::ordered_json;

// All columns of a rendered table, plus the exit status of the command that
// produced it (a converge run can emit a partial table and still fail).
struct Table {
  std::vector<std::string> columns;
  std::vector<ordered_json> rows;
  int exit_code = 0;
  std::string error{};
};

constexpr double kVisibleHeight = 1e-2;
constexpr int kDefaultFockCutoff = 40;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string cell_to_csv(const ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_escape(v.get<std::string>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  return format_number(v.get<double>());
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j) {
    if (j) out += ',';
    out += csv_escape(t.columns[j]);
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      if (j) out += ',';
      out += cell_to_csv(row.at(t.columns[j]));
    }
    out += '\n';
  }
  return out;
}

ordered_json request_echo(const RunRequest& req) {
  ordered_json echo;
  echo["command"] = to_string(req.command);
  echo["delta"] = req.params.delta;
  echo["g"] = req.params.g;
  echo["levels"] = req.levels;
  ordered_json methods = ordered_json::array();
  for (Method m : effective_methods(req)) methods.push_back(to_string(m));
  echo["methods"] = methods;
  echo["initial"] = to_string(req.initial);
  echo["g_start"] = req.g_start;
  echo["g_end"] = req.g_end;
  echo["steps"] = req.steps;
  echo["use_grid"] = req.use_grid;
  echo["tol"] = req.tol;
  echo["truncation"] = req.truncation;
  echo["format"] = to_string(req.format);
  echo["out"] = req.out_path;
  return echo;
}

std::string render_json(const RunRequest& req, const Table& t) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["request_echo"] = request_echo(req);
  ordered_json results = ordered_json::array();
  for (const auto& row : t.rows) results.push_back(row);
  doc["results"] = results;
  return doc.dump(2) + "\n";
}

std::vector<double> sweep_grid(const RunRequest& req) {
  std::vector<double> grid(static_cast<std::size_t>(req.steps));
  for (int i = 0; i < req.steps; ++i)
    grid[static_cast<std::size_t>(i)] =
        req.g_start + (req.g_end - req.g_start) * static_cast<double>(i) / (req.steps - 1);
  return grid;
}

// Deterministic ordering of a freshly assembled level list: ascending energy,
// even sector first on exact ties, then insertion order.
void sort_and_index(std::vector<EnergyLevel>& levels, int count) {
  std::stable_sort(levels.begin(), levels.end(), [](const EnergyLevel& a, const EnergyLevel& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.parity == Parity::even && b.parity == Parity::odd;
  });
  if (static_cast<int>(levels.size()) > count) levels.resize(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < levels.size(); ++i) levels[i].index = static_cast<int>(i);
}

EnergyLevel make_level(Parity parity, double energy, Method method, int truncation) {
  EnergyLevel lv;
  lv.parity = parity;
  lv.energy = energy;
  lv.method = method;
  lv.truncation = truncation;
  return lv;
}

// The doublet built on photon number n carries parity (-1)^(n+1).
Parity doublet_parity(int n) { return n % 2 == 0 ? Parity::odd : Parity::even; }

Spectrum rwa_like_spectrum(const ModelParams& p, Method method, int levels) {
  Spectrum sp;
  sp.params = p;
  sp.levels.push_back(make_level(Parity::even, -p.delta / 2, method, -1));
  // Strong coupling drags high-n doublet floors below low-n ones, so scan a
  // margin of extra doublets before keeping the lowest `levels` entries.
  const int n_max = levels + 10 + static_cast<int>(p.g * p.g);
  for (int n = 0; n <= n_max; ++n) {
    double lo = 0, hi = 0;
    if (method == Method::rwa) {
      const RwaDoublet d = rwa_doublet(p, n);
      lo = d.E_lower;
      hi = d.E_upper;
    } else {
      lo = first_order_level(n, -1, p);
      hi = first_order_level(n, +1, p);
    }
    sp.levels.push_back(make_level(doublet_parity(n), lo, method, -1));
    sp.levels.push_back(make_level(doublet_parity(n), hi, method, -1));
  }
  sort_and_index(sp.levels, levels);
  return sp;
}

Spectrum order0_spectrum(const ModelParams& p, int levels) {
  Spectrum sp;
  sp.params = p;
  for (int m = 0; m <= levels + 1; ++m)
    for (Parity parity : {Parity::even, Parity::odd})
      sp.levels.push_back(make_level(parity, zero_order_level(m, parity, p), Method::order0, -1));
  sort_and_index(sp.levels, levels);
  return sp;
}

Table cmd_spectrum(const RunRequest& req) {
  const Spectrum sp =
      spectrum_for_method(req.params, effective_methods(req)[0], req.levels, req.tol, req.truncation);
  Table t;
  t.columns = {"index", "parity", "energy", "method", "M", "detuning"};
  for (const EnergyLevel& lv : sp.levels) {
    ordered_json row;
    row["index"] = lv.index;
    row["parity"] = to_string(lv.parity);
    row["energy"] = lv.energy;
    row["method"] = to_string(lv.method);
    row["M"] = lv.truncation;
    row["detuning"] = req.params.detuning();
    t.rows.push_back(row);
  }
  return t;
}

Table cmd_converge(const RunRequest& req) {
  SolverConfig cfg;
  cfg.level_count = req.levels;
  cfg.tol_energy = req.tol;
  cfg.M = req.truncation;
  Table t;
  Spectrum sp;
  ConvergenceReport rep;
  try {
    std::tie(sp, rep) = converge_spectrum(req.params, cfg);
  } catch (const ConvergenceError& e) {
    sp = e.partial;
    rep = e.report;
    t.exit_code = 3;
    t.error = e.what();
  }
  if (t.exit_code == 0 &&
      !std::all_of(rep.converged.begin(), rep.converged.end(), [](bool c) { return c; })) {
    t.exit_code = 3;
    t.error = "not every requested level converged at the fixed truncation";
  }
  t.columns = {"index", "parity", "energy", "delta", "converged", "M_final"};
  for (std::size_t i = 0; i < sp.levels.size(); ++i) {
    ordered_json row;
    row["index"] = sp.levels[i].index;
    row["parity"] = to_string(sp.levels[i].parity);
    row["energy"] = sp.levels[i].energy;
    row["delta"] = rep.per_level_delta[i];
    row["converged"] = static_cast<bool>(rep.converged[i]);
    row["M_final"] = rep.M_final;
    t.rows.push_back(row);
  }
  return t;
}

Table cmd_sweep(const RunRequest& req) {
  const std::vector<Method> methods = effective_methods(req);
  Table t;
  t.columns = {"g", "status"};
  for (Method m : methods)
    for (int j = 0; j < req.levels; ++j)
      t.columns.push_back(std::string(to_string(m)) + "_E" + std::to_string(j));
  for (double g : sweep_grid(req)) {
    ordered_json row;
    row["g"] = g;
    row["status"] = "ok";
    std::string failures;
    for (Method m : methods) {
      ModelParams pp = req.params;
      pp.g = g;
      std::vector<EnergyLevel> levels;
      try {
        levels = spectrum_for_method(pp, m, req.levels, req.tol, req.truncation).levels;
      } catch (const std::exception& e) {
        if (!failures.empty()) failures += "; ";
        failures += std::string(to_string(m)) + " failed: " + e.what();
      }
      for (int j = 0; j < req.levels; ++j) {
        const std::string col = std::string(to_string(m)) + "_E" + std::to_string(j);
        if (j < static_cast<int>(levels.size()))
          row[col] = levels[static_cast<std::size_t>(j)].energy;
        else
          row[col] = nullptr;
      }
    }
    if (!failures.empty()) row["status"] = failures;
    t.rows.push_back(row);
  }
  return t;
}

Table cmd_splitting(const RunRequest& req) {
  const Method method = effective_methods(req)[0];
  const int M = req.truncation >= 0 ? req.truncation : kDefaultFockCutoff;
  const std::vector<double> grid = req.use_grid ? sweep_grid(req) : std::vector<double>{req.params.g};
  Table t;
  t.columns = {"g",         "initial", "method",           "h1",
               "h2",        "h3",      "h4",               "n_visible",
               "ratio",     "splitting_series", "splitting_exact", "splitting_rwa"};
  for (double g : grid) {
    ModelParams pp = req.params;
    pp.g = g;
    const PeakSet peaks = emission_peaks(req.initial, pp, method, M);
    double h[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < peaks.peaks.size() && i < 4; ++i) h[i] = peaks.peaks[i].height;
    int visible = 0;
    for (const Peak& pk : peaks.peaks)
      if (pk.height > kVisibleHeight) ++visible;
    const SplittingResult series = splitting(pp, g, Method::series);
    const SplittingResult exact = splitting(pp, g, Method::exact);
    ordered_json row;
    row["g"] = g;
    row["initial"] = to_string(req.initial);
    row["method"] = to_string(method);
    row["h1"] = h[0];
    row["h2"] = h[1];
    row["h3"] = h[2];
    row["h4"] = h[3];
    row["n_visible"] = visible;
    if (peaks.peaks.size() >= 2 && h[1] != 0)
      row["ratio"] = h[0] / h[1];
    else
      row["ratio"] = nullptr;
    row["splitting_series"] = series.value;
    row["splitting_exact"] = exact.value;
    row["splitting_rwa"] = series.rwa_value;
    t.rows.push_back(row);
  }
  return t;
}

Table cmd_compare(const RunRequest& req) {
  const std::vector<Method> methods = effective_methods(req);
  Method reference = methods[0];
  for (Method m : methods)
    if (m == Method::exact) reference = m;
  std::vector<Spectrum> spectra;
  for (Method m : methods)
    spectra.push_back(spectrum_for_method(req.params, m, req.levels, req.tol, req.truncation));
  const std::size_t ref_at = static_cast<std::size_t>(
      std::find(methods.begin(), methods.end(), reference) - methods.begin());

  Table t;
  t.columns = {"level"};
  for (Method m : methods) t.columns.push_back(std::string("E_") + to_string(m));
  for (Method m : methods)
    if (m != reference) t.columns.push_back(std::string("dev_") + to_string(m));

  std::vector<double> max_dev(methods.size(), 0.0);
  for (int i = 0; i < req.levels; ++i) {
    ordered_json row;
    row["level"] = std::to_string(i);
    const double e_ref = spectra[ref_at].levels[static_cast<std::size_t>(i)].energy;
    for (std::size_t k = 0; k < methods.size(); ++k)
      row[std::string("E_") + to_string(methods[k])] =
          spectra[k].levels[static_cast<std::size_t>(i)].energy;
    for (std::size_t k = 0; k < methods.size(); ++k) {
      if (methods[k] == reference) continue;
      const double dev = std::abs(spectra[k].levels[static_cast<std::size_t>(i)].energy - e_ref);
      max_dev[k] = std::max(max_dev[k], dev);
      row[std::string("dev_") + to_string(methods[k])] = dev;
    }
    t.rows.push_back(row);
  }
  ordered_json summary;
  summary["level"] = "max";
  for (Method m : methods) summary[std::string("E_") + to_string(m)] = nullptr;
  for (std::size_t k = 0; k < methods.size(); ++k)
    if (methods[k] != reference) summary[std::string("dev_") + to_string(methods[k])] = max_dev[k];
  t.rows.push_back(summary);
  return t;
}

Table dispatch(const RunRequest& req) {
  switch (req.command) {
    case Command::spectrum:
      return cmd_spectrum(req);
    case Command::converge:
      return cmd_converge(req);
    case Command::sweep:
      return cmd_sweep(req);
    case Command::splitting:
      return cmd_splitting(req);
    case Command::compare:
      return cmd_compare(req);
  }
  throw std::invalid_argument("unknown command");
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::spectrum:
      return "spectrum";
    case Command::converge:
      return "converge";
    case Command::sweep:
      return "sweep";
    case Command::splitting:
      return "splitting";
    case Command::compare:
      return "compare";
  }
  return "?";
}

const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

Command parse_command(const std::string& name) {
  if (name == "spectrum") return Command::spectrum;
  if (name == "converge") return Command::converge;
  if (name == "sweep") return Command::sweep;
  if (name == "splitting") return Command::splitting;
  if (name == "compare") return Command::compare;
  throw std::invalid_argument("unknown command: " + name);
}

Method parse_method(const std::string& name) {
  if (name == "exact") return Method::exact;
  if (name == "ed-oracle") return Method::ed_oracle;
  if (name == "rwa") return Method::rwa;
  if (name == "order0") return Method::order0;
  if (name == "order1") return Method::order1;
  if (name == "order2") return Method::order2;
  if (name == "series") return Method::series;
  throw std::invalid_argument("unknown method: " + name);
}

InitialKind parse_initial(const std::string& name) {
  if (name == "vgs") return InitialKind::vgs;
  if (name == "e0") return InitialKind::e0;
  throw std::invalid_argument("unknown initial state: " + name);
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw std::invalid_argument("unknown format: " + name);
}

std::vector<Method> effective_methods(const RunRequest& req) {
  if (!req.methods.empty()) return req.methods;
  if (req.command == Command::splitting) return {Method::series};
  if (req.command == Command::compare) return {};
  return {Method::exact};
}

void RunRequest::validate() const {
  if (levels < 1) throw std::invalid_argument("level count must be at least 1");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (command == Command::sweep || (command == Command::splitting && use_grid)) {
    if (steps < 2) throw std::invalid_argument("sweep grid needs steps >= 2");
    if (!(g_start < g_end)) throw std::invalid_argument("sweep grid needs start < end");
  }
  const std::vector<Method> ms = effective_methods(*this);
  if ((command == Command::spectrum || command == Command::splitting) && ms.size() != 1)
    throw std::invalid_argument("this command takes a single method");
  if (command == Command::compare && ms.size() < 2)
    throw std::invalid_argument("compare needs at least two methods");
  if (command == Command::converge && (ms.size() != 1 || ms[0] != Method::exact))
    throw std::invalid_argument("converge supports the exact method only");
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (ms[i] == ms[j]) throw std::invalid_argument("duplicate method selected");
}

std::string format_number(double x) {
  if (x == 0.0) x = 0.0;  // collapse the sign of a negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Spectrum spectrum_for_method(const ModelParams& p, Method method, int levels, double tol,
                             int truncation) {
  if (levels < 1) throw std::invalid_argument("level count must be at least 1");
  switch (method) {
    case Method::exact: {
      SolverConfig cfg;
      cfg.level_count = levels;
      cfg.tol_energy = tol;
      cfg.M = truncation;
      return converge_spectrum(p, cfg).first;
    }
    case Method::ed_oracle: {
      const int M = truncation >= 0 ? truncation : kDefaultFockCutoff;
      if (levels > 2 * (M + 1))
        throw std::invalid_argument("level count exceeds the dense basis size");
      Spectrum sp = ed_oracle(p, M);
      sp.levels.resize(static_cast<std::size_t>(levels));
      return sp;
    }
    case Method::rwa:
    case Method::order1:
      return rwa_like_spectrum(p, method, levels);
    case Method::order0:
      return order0_spectrum(p, levels);
    case Method::order2:
    case Method::series:
      return approximation_spectrum(p, levels, method);
  }
  throw std::invalid_argument("unknown method");
}

RunResult run_request(const RunRequest& req) {
  RunResult out;
  try {
    req.validate();
    const Table t = dispatch(req);
    out.exit_code = t.exit_code;
    out.error = t.error;
    out.output = req.format == OutputFormat::csv ? render_csv(t) : render_json(req, t);
  } catch (const ConvergenceError& e) {
    out.exit_code = 3;
    out.error = e.what();
  } catch (const std::invalid_argument& e) {
    out.exit_code = 2;
    out.error = e.what();
  } catch (const std::domain_error& e) {
    out.exit_code = 2;
    out.error = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 3;
    out.error = e.what();
  }
  return out;
}

}  // namespace qrm
