#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qrm/order2.hpp"
#include "qrm/solver.hpp"
#include "qrm/states.hpp"
#include "qrm/types.hpp"

namespace qrm {

// The two initial states of the vacuum-Rabi-splitting analysis: the atomic
// flip applied to the dressed ground state, or the bare excited atom in the
// empty cavity.
enum class InitialKind { vgs, e0 };

inline const char* to_string(InitialKind k) { return k == InitialKind::vgs ? "vgs" : "e0"; }

template <typename Scalar>
struct PeakT {
  int level_index = 0;   // global rank of the emitting level in its ladder
  Scalar frequency{};    // E_level - E_GS of the same method
  Scalar height{};       // overlap probability with the initial state
};
using Peak = PeakT<double>;

template <typename Scalar>
struct PeakSetT {
  std::vector<PeakT<Scalar>> peaks;
  Method method{Method::exact};
  // Set when the basis failed to capture the initial state to within 1e-6 of
  // its weight (approximate bases do not resolve every rung).
  bool truncation_warning = false;
};
using PeakSet = PeakSetT<double>;

// Initial state of the emission problem at photon capacity M.  `vgs` applies
// the atomic flip (swap of the two components) to the selected method's
// ground state; `e0` is the bare |e,0>.  Both come out normalized with odd
// parity.
template <typename Scalar>
SpinFockStateT<Scalar> prepare_initial(InitialKind kind, const ModelParamsT<Scalar>& p,
                                       Method method, int M = 40) {
  if (M < 1) throw std::invalid_argument("photon truncation must be at least 1");
  if (kind == InitialKind::e0) {
    SpinFockStateT<Scalar> state;
    state.upper = Vec<Scalar>::Zero(M + 1);
    state.lower = Vec<Scalar>::Zero(M + 1);
    state.upper[0] = 1;
    return state;
  }

  SpinFockStateT<Scalar> gs;
  if (method == Method::exact) {
    const Vec<Scalar> ground = find_levels(p, Parity::even, M, 1);
    auto [block, residual] = eigenstate_at(ground[0], p, Parity::even, M);
    (void)residual;
    gs = rotate_to_lab(block);
  } else if (method == Method::order2) {
    if (p.delta != Scalar(1))
      throw std::domain_error("second-order initial states exist at resonance (delta = 1) only");
    ParityBlockStateT<Scalar> block = second_order_state<Scalar>(so_ground(), p.g);
    ParityBlockStateT<Scalar> padded;
    padded.parity = block.parity;
    padded.coeffs = Vec<Scalar>::Zero(M + 1);
    padded.coeffs.head(block.coeffs.size()) = block.coeffs;
    gs = rotate_to_lab(padded);
  } else {
    throw std::invalid_argument("initial states are defined for the exact and order2 methods");
  }
  std::swap(gs.upper, gs.lower);  // atomic flip
  fix_sign(gs);
  return gs;
}

namespace detail {

// Overlap heights of `coords` against the full odd sector of the truncated
// block, with global ranks from the merged two-sector spectrum.
template <typename Scalar>
PeakSetT<Scalar> decompose_exact(const Vec<Scalar>& coords, const ModelParamsT<Scalar>& p,
                                 int M) {
  const int n = M + 1;
  const Vec<Scalar> even = find_levels(p, Parity::even, M, n);
  const Vec<Scalar> odd = find_levels(p, Parity::odd, M, n);
  const SpectrumT<Scalar> merged = merge_spectra(even, odd, p, 2 * n, Method::exact, M);
  const Scalar E_gs = merged.levels.front().energy;

  std::vector<int> odd_rank;
  odd_rank.reserve(n);
  for (const auto& level : merged.levels)
    if (level.parity == Parity::odd) odd_rank.push_back(level.index);

  PeakSetT<Scalar> out;
  out.method = Method::exact;
  out.peaks.resize(n);

  if (p.g == Scalar(0)) {
    // Decoupled block: the eigenbasis is the ladder basis itself; sort the
    // diagonal to map level order to ladder index.
    const TridiagonalBlockT<Scalar> block = build_parity_block(p, Parity::odd, M);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return block.diag[a] < block.diag[b]; });
    for (int j = 0; j < n; ++j) {
      out.peaks[j].level_index = odd_rank[j];
      out.peaks[j].frequency = block.diag[perm[j]] - E_gs;
      out.peaks[j].height = coords[perm[j]] * coords[perm[j]];
    }
  } else {
    for (int j = 0; j < n; ++j) {
      const Vec<Scalar> v = truncated_eigenvector(p, Parity::odd, M, odd[j]);
      const Scalar amp = v.dot(coords);
      out.peaks[j].level_index = odd_rank[j];
      out.peaks[j].frequency = odd[j] - E_gs;
      out.peaks[j].height = amp * amp;
    }
  }

  Scalar total = 0;
  for (const auto& pk : out.peaks) total += pk.height;
  out.truncation_warning = (Scalar(1) - total) >= Scalar(1e-6);
  return out;
}

// Overlap heights against the odd-parity second-order states whose
// three-rung windows reach the support of `coords`.
template <typename Scalar>
PeakSetT<Scalar> decompose_order2(const Vec<Scalar>& coords, const ModelParamsT<Scalar>& p) {
  using std::abs;
  if (p.delta != Scalar(1))
    throw std::domain_error("second-order decomposition exists at resonance (delta = 1) only");
  if (p.g == Scalar(0))
    throw std::domain_error("second-order decomposition undefined at g = 0; use the series method");

  int support_end = -1;
  for (Eigen::Index i = 0; i < coords.size(); ++i)
    if (abs(coords[i]) > Scalar(1e-14)) support_end = static_cast<int>(i);

  // Odd-parity labels whose window [m, m+2] touches the support.
  std::vector<SecondOrderLevelLabel> labels;
  labels.push_back(so_first_excited());
  for (int n = 0; n <= support_end; n += 2) labels.push_back(so_branch2(n));
  for (int n = 2; n - 1 <= support_end; n += 2) labels.push_back(so_branch1(n));

  // Global ranks come from the merged approximation ladder; enlarge it until
  // every label is inside.
  int count = 2 * (support_end + 4);
  std::vector<LabelledLevelT<Scalar>> ladder;
  auto rank_of = [&](const SecondOrderLevelLabel& want) {
    for (const auto& e : ladder)
      if (e.label.kind == want.kind && e.label.n == want.n) return e.level.index;
    return -1;
  };
  for (int attempt = 0; attempt < 6; ++attempt) {
    ladder = labelled_ladder<Scalar>(p.g, count, Method::order2);
    bool all = true;
    for (const auto& l : labels) all = all && rank_of(l) >= 0;
    if (all) break;
    count *= 2;
  }

  const Scalar E_gs = second_order_energy(so_ground(), p.g);
  PeakSetT<Scalar> out;
  out.method = Method::order2;
  Scalar total = 0;
  for (const auto& label : labels) {
    const int rank = rank_of(label);
    if (rank < 0) throw std::runtime_error("approximation ladder failed to cover a needed label");
    const ParityBlockStateT<Scalar> state = second_order_state<Scalar>(label, p.g);
    const auto fam = cubic_family_for_label<Scalar>(label);
    Scalar amp = 0;
    for (int j = 0; j < 3; ++j) {
      const int idx = fam.m + j;
      if (idx < coords.size()) amp += state.coeffs[idx] * coords[idx];
    }
    PeakT<Scalar> pk;
    pk.level_index = rank;
    pk.frequency = second_order_energy(label, p.g) - E_gs;
    pk.height = amp * amp;
    total += pk.height;
    out.peaks.push_back(pk);
  }
  std::sort(out.peaks.begin(), out.peaks.end(),
            [](const PeakT<Scalar>& a, const PeakT<Scalar>& b) { return a.frequency < b.frequency; });
  out.truncation_warning = (Scalar(1) - total) >= Scalar(1e-6);
  return out;
}

}  // namespace detail

// Decomposition of a normalized initial state over the odd-parity eigenbasis
// of the chosen method.  Heights are overlap probabilities; frequencies are
// measured from the method's own ground-state energy; level indices are
// global ranks in the method's merged spectrum.
template <typename Scalar>
PeakSetT<Scalar> decompose_odd(const SpinFockStateT<Scalar>& initial, const ModelParamsT<Scalar>& p,
                               Method method, int M) {
  using std::abs;
  if (abs(initial.squared_norm() - Scalar(1)) > Scalar(1e-8))
    throw std::invalid_argument("decomposition requires a normalized initial state");
  const Vec<Scalar> coords = state_to_block(initial, Parity::odd).coeffs;
  if (method == Method::exact) {
    if (initial.truncation() != M)
      throw std::invalid_argument("initial state truncation must match the requested M");
    return detail::decompose_exact(coords, p, M);
  }
  if (method == Method::order2) return detail::decompose_order2(coords, p);
  throw std::invalid_argument("decomposition is defined for the exact and order2 methods");
}

// Leading-order peak heights as truncated coupling series.  vgs returns the
// four odd-sector heights {h1, h2, h3, h4}; e0 returns {h1, h2}.
template <typename Scalar>
std::vector<Scalar> heights_series(InitialKind kind, Scalar g) {
  using std::sqrt;
  const Scalar g2 = g * g;
  const Scalar g3 = g2 * g;
  const Scalar g4 = g2 * g2;
  if (kind == InitialKind::vgs) {
    return {Scalar(0.5) + g / 4 + Scalar(11) / 32 * g3 - g4 / 16,
            Scalar(0.5) - g / 4 - Scalar(11) / 32 * g3 - g4 / 16,
            Scalar(3) / 64 * g4 * g2,
            g4 / 16 + sqrt(Scalar(3)) / 48 * g4 * g};
  }
  return {Scalar(0.5) - g / 4 + Scalar(5) / 32 * g3 - g4 / 16,
          Scalar(0.5) + g / 4 - Scalar(5) / 32 * g3 - g4 / 16};
}

template <typename Scalar>
struct SplittingResultT {
  Scalar value{};      // E_2 - E_1 of the chosen method
  Scalar rwa_value{};  // the rotating-wave splitting 2g, for comparison
};
using SplittingResult = SplittingResultT<double>;

// Vacuum Rabi splitting: the separation of the two lowest excited levels.
// The series form carries the leading counter-rotating correction -g^3/4.
template <typename Scalar>
SplittingResultT<Scalar> splitting(const ModelParamsT<Scalar>& params, Scalar g, Method method) {
  SplittingResultT<Scalar> out;
  out.rwa_value = 2 * g;
  ModelParamsT<Scalar> p = params;
  p.g = g;
  switch (method) {
    case Method::series:
      if (p.delta != Scalar(1))
        throw std::domain_error("series splitting exists at resonance (delta = 1) only");
      out.value = 2 * g - g * g * g / 4;
      return out;
    case Method::order2:
      if (p.delta != Scalar(1))
        throw std::domain_error("second-order splitting exists at resonance (delta = 1) only");
      out.value = second_order_energy(so_branch2(0), g) - second_order_energy(so_first_excited(), g);
      return out;
    case Method::exact: {
      SolverConfigT<Scalar> config;
      config.level_count = 3;
      const auto [spectrum, report] = converge_spectrum(p, config);
      out.value = spectrum.levels[2].energy - spectrum.levels[1].energy;
      return out;
    }
    default:
      throw std::invalid_argument("splitting is defined for the series, order2, and exact methods");
  }
}

// Emission peak set of the chosen initial state and method, sorted by
// frequency: heights against the odd-parity basis, frequencies measured from
// the method's ground state.
template <typename Scalar>
PeakSetT<Scalar> emission_peaks(InitialKind kind, const ModelParamsT<Scalar>& p, Method method,
                                int M = 40) {
  if (method == Method::series) {
    if (p.delta != Scalar(1))
      throw std::domain_error("series emission peaks exist at resonance (delta = 1) only");
    std::vector<SecondOrderLevelLabel> labels = {so_first_excited(), so_branch2(0)};
    if (kind == InitialKind::vgs) {
      labels.push_back(so_branch1(2));
      labels.push_back(so_branch2(2));
    }
    const std::vector<Scalar> hs = heights_series(kind, p.g);
    const Scalar E_gs = series_energy<Scalar>(so_ground(), p.g);
    PeakSetT<Scalar> out;
    out.method = Method::series;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      PeakT<Scalar> pk;
      pk.level_index = -1;
      for (int count = 12; pk.level_index < 0 && count <= 96; count *= 2) {
        for (const auto& e : labelled_ladder<Scalar>(p.g, count, Method::series))
          if (e.label.kind == labels[i].kind && e.label.n == labels[i].n)
            pk.level_index = e.level.index;
      }
      if (pk.level_index < 0)
        throw std::runtime_error("approximation ladder failed to cover a needed label");
      pk.frequency = series_energy(labels[i], p.g) - E_gs;
      pk.height = hs[i];
      out.peaks.push_back(pk);
    }
    std::sort(out.peaks.begin(), out.peaks.end(),
              [](const PeakT<Scalar>& a, const PeakT<Scalar>& b) { return a.frequency < b.frequency; });
    return out;
  }

  const SpinFockStateT<Scalar> initial = prepare_initial(kind, p, method, M);
  PeakSetT<Scalar> out = decompose_odd(initial, p, method, M);
  std::sort(out.peaks.begin(), out.peaks.end(),
            [](const PeakT<Scalar>& a, const PeakT<Scalar>& b) { return a.frequency < b.frequency; });
  return out;
}

}  // namespace qrm
