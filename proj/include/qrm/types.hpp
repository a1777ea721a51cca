#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace qrm {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Conserved parity of the total excitation number (photons plus atomic
// excitation).  The enumerator value is the eigenvalue of the parity operator
// on that sector.
enum class Parity : int { even = +1, odd = -1 };

template <typename Scalar>
constexpr Scalar parity_sign(Parity p) {
  return p == Parity::even ? Scalar(1) : Scalar(-1);
}

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

// Which road produced an energy level.
enum class Method { exact, ed_oracle, rwa, order0, order1, order2, series };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::ed_oracle: return "ed-oracle";
    case Method::rwa: return "rwa";
    case Method::order0: return "order0";
    case Method::order1: return "order1";
    case Method::order2: return "order2";
    case Method::series: return "series";
  }
  return "unknown";
}

// Model parameters.  The cavity frequency sets the unit of energy, so the
// model is fully specified by the atomic splitting and the coupling.
template <typename Scalar>
struct ModelParamsT {
  Scalar delta{1};  // atomic transition frequency, in units of the cavity frequency
  Scalar g{0};      // atom-field coupling, in units of the cavity frequency

  // Dimensionless detuning between atom and cavity; derived, never stored.
  Scalar detuning() const { return delta - Scalar(1); }
};
using ModelParams = ModelParamsT<double>;

template <typename Scalar>
struct EnergyLevelT {
  int index = 0;  // global rank in ascending energy order, 0 = ground state
  Parity parity{Parity::even};
  Scalar energy{};
  Method method{Method::exact};
  int truncation = 0;  // photon cutoff used; 0 for closed forms
};
using EnergyLevel = EnergyLevelT<double>;

// Merged, ascending list of energy levels with their parity labels.
// Ties are listed even before odd.
template <typename Scalar>
struct SpectrumT {
  std::vector<EnergyLevelT<Scalar>> levels;
  ModelParamsT<Scalar> params;
};
using Spectrum = SpectrumT<double>;

// Two-component wavefunction over the photon ladder: amplitudes on the upper
// (atom-excited) and lower (atom-ground) components for photon numbers 0..M.
template <typename Scalar>
struct SpinFockStateT {
  Vec<Scalar> upper;
  Vec<Scalar> lower;

  int truncation() const { return static_cast<int>(upper.size()) - 1; }

  Scalar squared_norm() const { return upper.squaredNorm() + lower.squaredNorm(); }
};
using SpinFockState = SpinFockStateT<double>;

// Coefficient vector of a state living in one parity sector, expressed in the
// sector's own ladder basis (one amplitude per ladder index 0..M).
template <typename Scalar>
struct ParityBlockStateT {
  Parity parity{Parity::even};
  Vec<Scalar> coeffs;

  int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
};
using ParityBlockState = ParityBlockStateT<double>;

// Controls for the certified eigenvalue search and the truncation scan.
template <typename Scalar>
struct SolverConfigT {
  int level_count = 20;      // number of merged levels requested
  Scalar tol_energy = 1e-7;  // convergence target for the truncation scan
  Scalar tol_root = 1e-12;   // bisection width for individual eigenvalues
  int M = -1;                // fixed truncation; negative means automatic growth
  int M_max = 400;           // hard cap for the truncation scan

  void validate() const {
    if (level_count < 1) throw std::invalid_argument("level_count must be at least 1");
    if (!(tol_root > Scalar(0)) || !(tol_root <= tol_energy))
      throw std::invalid_argument("tolerances must satisfy 0 < tol_root <= tol_energy");
    if (M >= 0 && M < level_count / 2 + 2)
      throw std::invalid_argument("fixed truncation too small for requested level count");
    if (M_max < 1) throw std::invalid_argument("M_max must be positive");
  }
};
using SolverConfig = SolverConfigT<double>;

// Per-level outcome of the truncation scan at the final truncation.  Deltas
// are relative to the enlarged-basis reference energy; levels lying within
// 1e-3 of zero are instead measured absolutely against a 1e-9 floor, rescaled
// so the same tolerance comparison applies.
template <typename Scalar>
struct ConvergenceReportT {
  int M_final = 0;
  std::vector<Scalar> per_level_delta;
  std::vector<bool> converged;  // converged[i] iff per_level_delta[i] < tol_energy
};
using ConvergenceReport = ConvergenceReportT<double>;

// Raised when the truncation scan hits its cap; carries what was computed so
// callers can still inspect the partial result.
template <typename Scalar>
class ConvergenceErrorT : public std::runtime_error {
 public:
  ConvergenceErrorT(const std::string& what, SpectrumT<Scalar> partial_spectrum,
                    ConvergenceReportT<Scalar> partial_report)
      : std::runtime_error(what),
        partial(std::move(partial_spectrum)),
        report(std::move(partial_report)) {}

  SpectrumT<Scalar> partial;
  ConvergenceReportT<Scalar> report;
};
using ConvergenceError = ConvergenceErrorT<double>;

}  // namespace qrm
