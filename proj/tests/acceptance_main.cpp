// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Every expected value is either a structural identity, a published
// closed form, or a frozen regression value from the dense-diagonalization
// check; thresholds are stated inline next to each check.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include <qrm/cubic.hpp>
#include <qrm/ed_oracle.hpp>
#include <qrm/emission.hpp>
#include <qrm/hamiltonian.hpp>
#include <qrm/order2.hpp>
#include <qrm/rwa.hpp>
#include <qrm/solver.hpp>

namespace {

int failures = 0;

void report(int number, bool pass, const std::string& name, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s  %2d  %s: %s\n", pass ? "PASS" : "FAIL", number, name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string label_name(const qrm::SecondOrderLevelLabel& label) {
  switch (label.kind) {
    case qrm::LevelKind::ground: return "ground";
    case qrm::LevelKind::first_excited: return "first-excited";
    case qrm::LevelKind::branch1: return "branch1(" + std::to_string(label.n) + ")";
    default: return "branch2(" + std::to_string(label.n) + ")";
  }
}

// 1. The first-order levels coincide with the rotating-wave doublets.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> delta_draw(0.0, 2.0);
  std::uniform_real_distribution<double> g_draw(0.0, 0.5);
  std::uniform_int_distribution<int> m_draw(0, 10);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const qrm::ModelParams p{delta_draw(rng), g_draw(rng)};
    const int m = m_draw(rng);
    const auto doublet = qrm::rwa_doublet(p, m);
    worst = std::max(worst, std::abs(qrm::first_order_level(m, -1, p) - doublet.E_lower));
    worst = std::max(worst, std::abs(qrm::first_order_level(m, +1, p) - doublet.E_upper));
  }
  const double elapsed = seconds_since(start);
  report(1, worst <= 1e-12 && elapsed < 1.0, "first-order ladder equals rotating-wave doublets",
         "max deviation " + fmt(worst) + " over 200 draws (limit 1e-12), " + fmt(elapsed) + " s");
}

// 2. The recurrence solver reproduces the dense diagonalization.
void criterion_2() {
  const auto start = std::chrono::steady_clock::now();
  const int M = 40;
  double worst = 0;
  for (double delta : {0.1, 1.0, 1.5}) {
    for (double g : {0.1, 0.5, 1.0}) {
      const qrm::ModelParams p{delta, g};
      const qrm::Vec<double> even = qrm::find_levels(p, qrm::Parity::even, M, M + 1, 1e-12);
      const qrm::Vec<double> odd = qrm::find_levels(p, qrm::Parity::odd, M, M + 1, 1e-12);
      std::vector<double> merged(even.data(), even.data() + even.size());
      merged.insert(merged.end(), odd.data(), odd.data() + odd.size());
      std::sort(merged.begin(), merged.end());
      const qrm::Spectrum dense = qrm::ed_oracle(p, M);
      for (std::size_t i = 0; i < merged.size(); ++i)
        worst = std::max(worst, std::abs(merged[i] - dense.levels[i].energy));
    }
  }
  const double elapsed = seconds_since(start);
  report(2, worst <= 1e-9 && elapsed < 10.0, "bisection spectrum matches dense diagonalization",
         "max |dE| " + fmt(worst) + " over 9 parameter sets x 82 levels (limit 1e-9), " +
             fmt(elapsed) + " s");
}

// 3. The 20 lowest levels converge at the documented photon cutoffs.
void criterion_3() {
  const std::vector<std::pair<double, int>> cases = {{0.1, 15}, {1.0, 25}, {2.0, 40}};
  bool pass = true;
  std::ostringstream detail;
  for (double delta : {0.1, 1.0, 1.5}) {
    for (const auto& [g, M_stated] : cases) {
      qrm::SolverConfig config;
      config.level_count = 20;
      config.tol_energy = 1e-7;
      config.M = M_stated;
      const qrm::ModelParams p{delta, g};
      const auto [spectrum, rep] = qrm::converge_spectrum(p, config);
      const int count =
          static_cast<int>(std::count(rep.converged.begin(), rep.converged.end(), true));
      config.M = M_stated + 10;
      const auto [spectrum10, rep10] = qrm::converge_spectrum(p, config);
      const bool all10 =
          std::count(rep10.converged.begin(), rep10.converged.end(), true) == 20;
      if (count < 16 || !all10) pass = false;
      detail << "delta=" << delta << " g=" << g << ": " << count << "/20 at M=" << M_stated
             << (all10 ? "" : " (!M+10)") << "; ";
    }
  }
  report(3, pass, "level convergence at the documented cutoffs",
         detail.str() + "limits: >=16/20 at the stated cutoff, 20/20 ten rungs higher");
}

// 4. The coupling series agrees with the cubic closed forms to fourth order.
void criterion_4() {
  const std::vector<std::pair<qrm::SecondOrderLevelLabel, bool>> labels = {
      {qrm::so_ground(), false},         // sixth-order residual: ratio well above the window
      {qrm::so_first_excited(), true},
      {qrm::so_branch1(1), true},
      {qrm::so_branch2(0), true},
  };
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [label, windowed] : labels) {
    const double d1 =
        std::abs(qrm::second_order_energy(label, 0.01) - qrm::series_energy(label, 0.01));
    const double d2 =
        std::abs(qrm::second_order_energy(label, 0.02) - qrm::series_energy(label, 0.02));
    const double ratio = d2 / d1;
    const bool ok = windowed ? (ratio >= 12.0 && ratio <= 20.0) : ratio >= 12.0;
    if (!ok) pass = false;
    detail << label_name(label) << " ratio " << fmt(ratio)
           << (windowed ? " (window [12,20])" : " (>=12; sixth-order term)") << "; ";
  }
  report(4, pass, "series-cubic residual scales as the fourth power", detail.str());
}

// 5. Second-order accuracy over the eight lowest levels (frozen regression
// envelopes measured against the converged solver).
void criterion_5() {
  const std::vector<std::pair<double, double>> gates = {
      {0.1, 1.3e-2}, {0.2, 4.9e-2}, {0.4, 1.7e-1}};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [g, gate] : gates) {
    const qrm::ModelParams p{1.0, g};
    qrm::SolverConfig config;
    config.level_count = 8;
    const auto [exact, rep] = qrm::converge_spectrum(p, config);
    const qrm::Spectrum approx = qrm::approximation_spectrum(p, 8, qrm::Method::order2);
    double worst = 0;
    for (int i = 0; i < 8; ++i)
      worst = std::max(worst, std::abs(exact.levels[i].energy - approx.levels[i].energy));
    if (worst > gate) pass = false;
    detail << "g=" << g << ": max dev " << fmt(worst) << " (gate " << fmt(gate) << "); ";
  }
  report(5, pass, "second-order ladder tracks the exact eight lowest levels", detail.str());
}

// 6. Emission peak-height ratios: series values and exact agreement.
void criterion_6() {
  const double g = 0.1;
  const auto vgs = qrm::heights_series(qrm::InitialKind::vgs, g);
  const auto e0 = qrm::heights_series(qrm::InitialKind::e0, g);
  const double r_vgs = vgs[0] / vgs[1];
  const double r_e0 = e0[0] / e0[1];

  const qrm::ModelParams p{1.0, g};
  const auto vgs_exact = qrm::emission_peaks(qrm::InitialKind::vgs, p, qrm::Method::exact, 40);
  const auto e0_exact = qrm::emission_peaks(qrm::InitialKind::e0, p, qrm::Method::exact, 40);
  const double r_vgs_exact = vgs_exact.peaks[0].height / vgs_exact.peaks[1].height;
  const double r_e0_exact = e0_exact.peaks[0].height / e0_exact.peaks[1].height;

  const bool pass = std::abs(r_vgs - 1.107) <= 1e-3 && std::abs(r_e0 - 0.905) <= 1e-3 &&
                    std::abs(r_vgs_exact / r_vgs - 1.0) <= 0.02 &&
                    std::abs(r_e0_exact / r_e0 - 1.0) <= 0.02;
  report(6, pass, "peak-height ratios",
         "series " + fmt(r_vgs) + "/" + fmt(r_e0) + " (targets 1.107/0.905 +-0.001), exact " +
             fmt(r_vgs_exact) + "/" + fmt(r_e0_exact) + " (within 2% of series)");
}

// 7. Vacuum splitting: series value and exact agreement; the size of the
// third-order deficit is recorded, not asserted.
void criterion_7() {
  const qrm::ModelParams p{1.0, 0.1};
  const auto series = qrm::splitting(p, 0.1, qrm::Method::series);
  const auto exact = qrm::splitting(p, 0.1, qrm::Method::exact);
  const bool pass =
      std::abs(series.value - 0.19975) <= 1e-15 && std::abs(exact.value - series.value) <= 5e-4;
  report(7, pass, "vacuum splitting below the rotating-wave value",
         "series " + fmt(series.value) + " (target 0.19975), exact " + fmt(exact.value) +
             " (within 5e-4). Recorded: the deficit 2g - series is 0.00025 at g = 0.1; a "
             "sometimes-quoted figure of 0.0025 is ten times the formula value g^3/4.");
}

// 8. Completeness of the exact odd-block decomposition.
void criterion_8() {
  bool pass = true;
  std::ostringstream detail;
  for (double g : {0.1, 0.5}) {
    const qrm::ModelParams p{1.0, g};
    for (qrm::InitialKind kind : {qrm::InitialKind::vgs, qrm::InitialKind::e0}) {
      const auto initial = qrm::prepare_initial(kind, p, qrm::Method::exact, 40);
      const auto set = qrm::decompose_odd(initial, p, qrm::Method::exact, 40);
      double total = 0;
      for (const auto& pk : set.peaks) total += pk.height;
      if (std::abs(total - 1.0) > 1e-8) pass = false;
      detail << qrm::to_string(kind) << " g=" << g << ": 1-sum=" << fmt(1.0 - total) << "; ";
    }
  }
  report(8, pass, "odd-block decomposition sums to one", detail.str() + "limit 1e-8");
}

// 9. Structural properties: parity commutation, coupling-sign invariance,
// block-lab equality, cubic root sums, and negative discriminants.
void criterion_9() {
  std::ostringstream detail;
  bool pass = true;

  {
    const qrm::ModelParams p{0.7, 0.9};
    const int M = 30;
    const qrm::Mat<double> H = qrm::build_lab_hamiltonian(p, M);
    const qrm::Mat<double> P = qrm::parity_operator<double>(M);
    const double comm = (H * P - P * H).cwiseAbs().maxCoeff();
    if (comm >= 1e-14) pass = false;
    detail << "parity commutator " << fmt(comm) << " (<1e-14); ";
  }

  {
    double worst = 0;
    for (double g : {0.3, 1.2}) {
      const qrm::Spectrum plus = qrm::ed_oracle(qrm::ModelParams{0.8, g}, 30);
      const qrm::Spectrum minus = qrm::ed_oracle(qrm::ModelParams{0.8, -g}, 30);
      for (std::size_t i = 0; i < plus.levels.size(); ++i)
        worst = std::max(worst, std::abs(plus.levels[i].energy - minus.levels[i].energy));
    }
    if (worst >= 1e-10) pass = false;
    detail << "coupling-sign spectral shift " << fmt(worst) << " (<1e-10); ";
  }

  {
    const qrm::ModelParams p{0.7, 0.6};
    const int M = 25;
    Eigen::SelfAdjointEigenSolver<qrm::Mat<double>> lab(qrm::build_lab_hamiltonian(p, M));
    Eigen::SelfAdjointEigenSolver<qrm::Mat<double>> even(
        qrm::build_parity_block(p, qrm::Parity::even, M).dense());
    Eigen::SelfAdjointEigenSolver<qrm::Mat<double>> odd(
        qrm::build_parity_block(p, qrm::Parity::odd, M).dense());
    std::vector<double> blocks(even.eigenvalues().data(),
                               even.eigenvalues().data() + even.eigenvalues().size());
    blocks.insert(blocks.end(), odd.eigenvalues().data(),
                  odd.eigenvalues().data() + odd.eigenvalues().size());
    std::sort(blocks.begin(), blocks.end());
    double worst = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      worst = std::max(worst, std::abs(blocks[i] - lab.eigenvalues()[i]));
    if (worst >= 1e-10) pass = false;
    detail << "block-vs-lab spectral gap " << fmt(worst) << " (<1e-10); ";
  }

  {
    double worst_sum = 0;
    double worst_gamma = -1e300;
    int count = 0;
    for (int m = 0; m <= 50; ++m) {
      for (qrm::CubicCase family : {qrm::CubicCase::parity_aligned, qrm::CubicCase::parity_opposed}) {
        for (int step = 1; step <= 80; ++step) {
          const double g = 0.025 * step;
          const auto [b, c, d] = qrm::resonant_cubic<double>({family, m}, g);
          const qrm::CubicSolution sol = qrm::solve_cubic_real(b, c, d);
          worst_gamma = std::max(worst_gamma, sol.Gamma);
          if (sol.roots.size() == 3) {
            worst_sum = std::max(worst_sum,
                                 std::abs(sol.roots[0] + sol.roots[1] + sol.roots[2] + b));
          } else {
            worst_sum = 1e300;
          }
          ++count;
        }
      }
    }
    if (worst_sum >= 1e-10 || worst_gamma >= 0) pass = false;
    detail << "cubic root-sum defect " << fmt(worst_sum) << " (<1e-10) and max discriminant "
           << fmt(worst_gamma) << " (<0) over " << count << " cubics";
  }

  report(9, pass, "symmetry and structure properties", detail.str());
}

// 10. Strong-coupling emission shows exactly three visible peaks.
void criterion_10() {
  const qrm::ModelParams p{1.0, 0.8};
  const auto set = qrm::emission_peaks(qrm::InitialKind::vgs, p, qrm::Method::exact, 40);
  int visible = 0;
  std::ostringstream heights;
  for (const auto& pk : set.peaks)
    if (pk.height > 1e-2) {
      ++visible;
      heights << fmt(pk.height) << " ";
    }
  report(10, visible == 3, "three visible strong-coupling emission peaks",
         std::to_string(visible) + " peaks above 1e-2 at g=0.8: " + heights.str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures == 0) {
    std::printf("all 10 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", failures);
  return 1;
}
