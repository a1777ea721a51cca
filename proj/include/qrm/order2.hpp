#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "qrm/cubic.hpp"
#include "qrm/states.hpp"
#include "qrm/types.hpp"

namespace qrm {

// Dimensionless tridiagonal kernel of the parity sector at trial energy E:
//   Omega_m(E) = [m - E - s*(delta/2)*(-1)^m] / g.
// Determinant truncations of the sector matrix written through this kernel
// generate the approximation ladder below.
template <typename Scalar>
Scalar omega_m(Scalar E, int m, Parity parity, const ModelParamsT<Scalar>& p) {
  if (p.g == Scalar(0)) throw std::domain_error("omega kernel undefined at g = 0");
  if (m < 0) throw std::invalid_argument("ladder index must be nonnegative");
  const Scalar s = parity_sign<Scalar>(parity);
  const Scalar sm = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
  return (Scalar(m) - E - s * sm * p.delta / 2) / p.g;
}

// Zero-order approximation: keep only the diagonal, Omega_m(E) = 0.
template <typename Scalar>
Scalar zero_order_level(int m, Parity parity, const ModelParamsT<Scalar>& p) {
  if (m < 0) throw std::invalid_argument("ladder index must be nonnegative");
  const Scalar s = parity_sign<Scalar>(parity);
  const Scalar sm = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
  return Scalar(m) - s * sm * p.delta / 2;
}

// First-order approximation: 2x2 determinant truncation, which reproduces the
// rotating-wave doublet energies exactly.  branch is +1 (upper) or -1 (lower).
template <typename Scalar>
Scalar first_order_level(int m, int branch, const ModelParamsT<Scalar>& p) {
  using std::sqrt;
  if (m < 0) throw std::invalid_argument("ladder index must be nonnegative");
  if (branch != 1 && branch != -1) throw std::invalid_argument("branch must be +1 or -1");
  const Scalar det = Scalar(1) - p.delta;
  const Scalar root = sqrt(det * det + 4 * p.g * p.g * Scalar(m + 1));
  return Scalar(m) + Scalar(0.5) + Scalar(branch) * root / 2;
}

// The two families of 3x3 determinant truncations at resonance.  The family
// is fixed by whether the ladder-site sign (-1)^m matches the sector sign:
//   parity_aligned:  even m in the even sector, or odd m in the odd sector;
//   parity_opposed:  the complementary combinations.
enum class CubicCase { parity_aligned, parity_opposed };

template <typename Scalar>
struct CubicFamilyT {
  CubicCase family{CubicCase::parity_aligned};
  int m = 0;
};
using CubicFamily = CubicFamilyT<double>;

inline CubicCase cubic_case_for(int m, Parity parity) {
  const bool aligned = (m % 2 == 0) == (parity == Parity::even);
  return aligned ? CubicCase::parity_aligned : CubicCase::parity_opposed;
}

// Monic cubic coefficients (b, c, d) whose roots are the 3x3 determinant
// energies at resonance (delta = 1).
template <typename Scalar>
std::tuple<Scalar, Scalar, Scalar> resonant_cubic(const CubicFamilyT<Scalar>& fam, Scalar g) {
  if (fam.m < 0) throw std::invalid_argument("ladder index must be nonnegative");
  const Scalar m = Scalar(fam.m);
  const Scalar g2 = g * g;
  if (fam.family == CubicCase::parity_aligned) {
    const Scalar b = -(3 * m + Scalar(2.5));
    const Scalar c = (m + Scalar(1.5)) * (3 * m + Scalar(0.5)) - (2 * m + 3) * g2;
    const Scalar d = -(m - Scalar(0.5)) * (m + Scalar(1.5)) * (m + Scalar(1.5)) +
                     (2 * m * m + 4 * m + Scalar(0.5)) * g2;
    return {b, c, d};
  }
  const Scalar b = -(3 * m + Scalar(3.5));
  const Scalar c = (m + Scalar(0.5)) * (3 * m + Scalar(5.5)) - (2 * m + 3) * g2;
  const Scalar d = -(m + Scalar(0.5)) * (m + Scalar(0.5)) * (m + Scalar(2.5)) +
                   (2 * m * m + 6 * m + Scalar(3.5)) * g2;
  return {b, c, d};
}

// Names for the levels the second-order treatment resolves.  branch1/branch2
// are the lower/upper members of the n-th excited doublet; ground and
// first_excited are the two levels below the doublet ladder.
enum class LevelKind { ground, first_excited, branch1, branch2 };

struct SecondOrderLevelLabel {
  LevelKind kind{LevelKind::ground};
  int n = 0;  // doublet index; ignored for ground / first_excited
};

inline SecondOrderLevelLabel so_ground() { return {LevelKind::ground, 0}; }
inline SecondOrderLevelLabel so_first_excited() { return {LevelKind::first_excited, 0}; }
inline SecondOrderLevelLabel so_branch1(int n) { return {LevelKind::branch1, n}; }
inline SecondOrderLevelLabel so_branch2(int n) { return {LevelKind::branch2, n}; }

namespace detail {

// Maps a level label to its cubic family, ladder offset and sector.
template <typename Scalar>
CubicFamilyT<Scalar> cubic_family_for_label(const SecondOrderLevelLabel& label) {
  switch (label.kind) {
    case LevelKind::ground:
      return {CubicCase::parity_aligned, 0};
    case LevelKind::first_excited:
      return {CubicCase::parity_opposed, 0};
    case LevelKind::branch1:
      if (label.n < 1)
        throw std::invalid_argument(
            "branch1 requires n >= 1; the two n = 0 levels are ground and first_excited");
      return {CubicCase::parity_aligned, label.n - 1};
    case LevelKind::branch2:
      if (label.n < 0) throw std::invalid_argument("branch2 requires n >= 0");
      return {CubicCase::parity_opposed, label.n};
  }
  throw std::invalid_argument("unknown level label");
}

inline Parity parity_of_family(const CubicCase family, int m) {
  const bool m_even = m % 2 == 0;
  if (family == CubicCase::parity_aligned) return m_even ? Parity::even : Parity::odd;
  return m_even ? Parity::odd : Parity::even;
}

}  // namespace detail

inline Parity parity_of_label(const SecondOrderLevelLabel& label) {
  const auto fam = detail::cubic_family_for_label<double>(label);
  return detail::parity_of_family(fam.family, fam.m);
}

// Second-order (3x3 determinant) energy at resonance.  Ground and
// first_excited take the smallest ascending root of their m = 0 cubics; the
// doublet branches take the middle root.  At g = 0 the sorted repeated roots
// coincide with the g -> 0+ limits, so the selection is continuous.
template <typename Scalar>
Scalar second_order_energy(const SecondOrderLevelLabel& label, Scalar g) {
  const auto fam = detail::cubic_family_for_label<Scalar>(label);
  const auto [b, c, d] = resonant_cubic(fam, g);
  const CubicSolutionT<Scalar> sol = solve_cubic_real(b, c, d);
  if (sol.roots.size() != 3)
    throw std::runtime_error("resonant cubic unexpectedly lost its three real roots");
  const bool smallest =
      label.kind == LevelKind::ground || label.kind == LevelKind::first_excited;
  return smallest ? sol.roots[0] : sol.roots[1];
}

// Truncated coupling series for the same levels at resonance.
template <typename Scalar>
Scalar series_energy(const SecondOrderLevelLabel& label, Scalar g) {
  using std::sqrt;
  const Scalar g2 = g * g;
  switch (label.kind) {
    case LevelKind::ground:
      return Scalar(-0.5) - g2 / 2 - g2 * g2 / 8;
    case LevelKind::first_excited:
      return Scalar(0.5) - g - g2 / 2 + g2 * g / 8;
    case LevelKind::branch1: {
      const int n = label.n;
      if (n < 1)
        throw std::invalid_argument(
            "branch1 requires n >= 1; the two n = 0 levels are ground and first_excited");
      const Scalar rn = sqrt(Scalar(n + 1));
      return Scalar(n) + Scalar(0.5) - g * rn + Scalar(n) / 4 * g2 +
             Scalar(n) * (3 * Scalar(n) + 4) / (32 * rn) * g2 * g;
    }
    case LevelKind::branch2: {
      const int n = label.n;
      if (n < 0) throw std::invalid_argument("branch2 requires n >= 0");
      const Scalar rn = sqrt(Scalar(n + 1));
      return Scalar(n) + Scalar(0.5) + g * rn - (Scalar(n) + 2) / 4 * g2 -
             (Scalar(n) + 2) * (3 * Scalar(n) + 2) / (32 * rn) * g2 * g;
    }
  }
  throw std::invalid_argument("unknown level label");
}

// Second-order eigenstate at resonance: three consecutive ladder amplitudes
// at indices m, m+1, m+2 in the ratio
//   [-sqrt(m+1)/Omega_m(E)] : 1 : [-sqrt(m+2)/Omega_{m+2}(E)],
// normalized and sign-fixed.
template <typename Scalar>
ParityBlockStateT<Scalar> second_order_state(const SecondOrderLevelLabel& label, Scalar g) {
  using std::isfinite;
  using std::sqrt;
  const auto fam = detail::cubic_family_for_label<Scalar>(label);
  const Parity parity = detail::parity_of_family(fam.family, fam.m);
  const Scalar E = second_order_energy(label, g);
  const ModelParamsT<Scalar> p{Scalar(1), g};

  const Scalar om_lo = omega_m(E, fam.m, parity, p);
  const Scalar om_hi = omega_m(E, fam.m + 2, parity, p);
  if (om_lo == Scalar(0) || om_hi == Scalar(0))
    throw std::domain_error("degenerate second-order state: kernel vanishes at this energy");
  const Scalar r0 = -sqrt(Scalar(fam.m + 1)) / om_lo;
  const Scalar r2 = -sqrt(Scalar(fam.m + 2)) / om_hi;
  if (!isfinite(r0) || !isfinite(r2))
    throw std::domain_error("degenerate second-order state: coefficient ratio overflows");

  ParityBlockStateT<Scalar> state;
  state.parity = parity;
  state.coeffs = Vec<Scalar>::Zero(fam.m + 3);
  state.coeffs[fam.m] = r0;
  state.coeffs[fam.m + 1] = 1;
  state.coeffs[fam.m + 2] = r2;
  state.coeffs.normalize();
  fix_sign(state.coeffs);
  return state;
}

// General-detuning second-order energies: eigenvalues of the 3x3 tridiagonal
// section of the parity sector at ladder indices m..m+2, i.e. the roots of
// the determinant with diagonals Omega_m, Omega_{m+1}, Omega_{m+2} and
// off-diagonals sqrt(m+1), sqrt(m+2).  Ascending.
template <typename Scalar>
Vec<Scalar> det2nd_general(int m, Parity parity, const ModelParamsT<Scalar>& p) {
  using std::sqrt;
  if (p.g == Scalar(0)) throw std::domain_error("second-order determinant undefined at g = 0");
  if (m < 0) throw std::invalid_argument("ladder index must be nonnegative");
  Eigen::Matrix<Scalar, 3, 3> section = Eigen::Matrix<Scalar, 3, 3>::Zero();
  for (int j = 0; j < 3; ++j) section(j, j) = zero_order_level(m + j, parity, p);
  section(0, 1) = section(1, 0) = p.g * sqrt(Scalar(m + 1));
  section(1, 2) = section(2, 1) = p.g * sqrt(Scalar(m + 2));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, 3, 3>> es(section);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("3x3 eigensolver failed to converge");
  return es.eigenvalues();
}

// One rung of an approximation ladder: the level together with the label that
// produced it, so callers can locate a label's global rank.
template <typename Scalar>
struct LabelledLevelT {
  SecondOrderLevelLabel label;
  EnergyLevelT<Scalar> level;
};
using LabelledLevel = LabelledLevelT<double>;

// Ascending ladder of the lowest `count` levels of the resonant approximation
// selected by `method` (order2: cubic roots; series: truncated expansions),
// keeping each level's label.  Ties list even parity first.
template <typename Scalar>
std::vector<LabelledLevelT<Scalar>> labelled_ladder(Scalar g, int count, Method method) {
  if (count < 1) throw std::invalid_argument("must request at least one level");
  if (method != Method::order2 && method != Method::series)
    throw std::invalid_argument("labelled ladders exist for order2 and series methods only");
  const auto energy_of = [&](const SecondOrderLevelLabel& label) {
    return method == Method::order2 ? second_order_energy(label, g) : series_energy(label, g);
  };

  std::vector<LabelledLevelT<Scalar>> entries;
  const int n_max = count + 8;
  const auto add = [&](const SecondOrderLevelLabel& label) {
    LabelledLevelT<Scalar> e;
    e.label = label;
    e.level.energy = energy_of(label);
    e.level.parity = parity_of_label(label);
    e.level.method = method;
    e.level.truncation = -1;  // closed forms carry no Fock cutoff
    entries.push_back(e);
  };
  add(so_ground());
  add(so_first_excited());
  for (int n = 1; n <= n_max; ++n) add(so_branch1(n));
  for (int n = 0; n <= n_max; ++n) add(so_branch2(n));

  std::stable_sort(entries.begin(), entries.end(),
                   [](const LabelledLevelT<Scalar>& a, const LabelledLevelT<Scalar>& b) {
                     if (a.level.energy != b.level.energy) return a.level.energy < b.level.energy;
                     return a.level.parity == Parity::even && b.level.parity == Parity::odd;
                   });
  entries.resize(count);
  for (int i = 0; i < count; ++i) entries[i].level.index = i;
  return entries;
}

// The same ladder reduced to a plain spectrum.
template <typename Scalar>
SpectrumT<Scalar> approximation_spectrum(const ModelParamsT<Scalar>& p, int count, Method method) {
  if (p.delta != Scalar(1))
    throw std::domain_error(
        "closed-form second-order levels exist at resonance (delta = 1) only; "
        "use det2nd_general for finite detuning");
  SpectrumT<Scalar> spec;
  spec.params = p;
  for (const auto& e : labelled_ladder(p.g, count, method)) spec.levels.push_back(e.level);
  return spec;
}

}  // namespace qrm
