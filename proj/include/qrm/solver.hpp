#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrm/hamiltonian.hpp"
#include "qrm/states.hpp"
#include "qrm/types.hpp"

namespace qrm {

namespace detail {

// Number of eigenvalues of the symmetric tridiagonal block strictly below E,
// by counting negative pivots of the shifted LDL^T factorization (Sturm
// sequence).  Overflow-proof and monotone in E.
template <typename Scalar>
int sturm_count(const TridiagonalBlockT<Scalar>& block, Scalar E) {
  const Eigen::Index n = block.diag.size();
  const Scalar tiny = std::numeric_limits<Scalar>::min();
  int count = 0;
  Scalar q = block.diag[0] - E;
  if (q == Scalar(0)) q = -tiny;
  if (q < Scalar(0)) ++count;
  for (Eigen::Index i = 1; i < n; ++i) {
    q = block.diag[i] - E - block.off[i - 1] * block.off[i - 1] / q;
    if (q == Scalar(0)) q = -tiny;
    if (q < Scalar(0)) ++count;
  }
  return count;
}

// Enclosing interval for all eigenvalues of the block, from its Gershgorin
// disks: center d_m, radius = sum of the adjacent off-diagonal magnitudes.
template <typename Scalar>
std::pair<Scalar, Scalar> gershgorin_interval(const TridiagonalBlockT<Scalar>& block) {
  using std::abs;
  const Eigen::Index n = block.diag.size();
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar hi = -lo;
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar r = 0;
    if (i > 0) r += abs(block.off[i - 1]);
    if (i + 1 < n) r += abs(block.off[i]);
    lo = std::min(lo, block.diag[i] - r);
    hi = std::max(hi, block.diag[i] + r);
  }
  return {lo, hi};
}

}  // namespace detail

// Number of sector eigenvalues strictly below E at truncation M.
template <typename Scalar>
int eig_count_below(Scalar E, const ModelParamsT<Scalar>& p, Parity parity, int M) {
  return detail::sturm_count(build_parity_block(p, parity, M), E);
}

// The k lowest eigenvalues of one parity sector, each bracketed by the Sturm
// count and refined by bisection to interval width tol_root.  Deterministic
// and incapable of missing or double-counting roots.
template <typename Scalar>
Vec<Scalar> find_levels(const ModelParamsT<Scalar>& p, Parity parity, int M, int k,
                        Scalar tol_root = Scalar(1e-12)) {
  if (k < 1) throw std::invalid_argument("must request at least one level");
  if (k > M + 1)
    throw std::invalid_argument("cannot request more levels than the block dimension M+1");
  if (!(tol_root > Scalar(0))) throw std::invalid_argument("tol_root must be positive");

  const TridiagonalBlockT<Scalar> block = build_parity_block(p, parity, M);
  const auto [glo, ghi] = detail::gershgorin_interval(block);

  Vec<Scalar> roots(k);
  Scalar lo_start = glo;
  for (int j = 0; j < k; ++j) {
    // The j-th eigenvalue (0-based) is the infimum of E with count(E) >= j+1.
    Scalar lo = lo_start;
    Scalar hi = ghi;
    while (hi - lo > tol_root) {
      const Scalar mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;  // interval at floating-point resolution
      if (detail::sturm_count(block, mid) >= j + 1)
        hi = mid;
      else
        lo = mid;
    }
    roots[j] = lo + (hi - lo) / 2;
    lo_start = lo;  // later eigenvalues cannot lie below this certified bound
  }
  return roots;
}

namespace detail {

// Eigenvector of the tridiagonal block at an eigenvalue E, built by running
// the block recurrence from both ends and matching in the middle.  The
// forward sweep alone is numerically unstable for low-lying states (errors
// grow through the classically forbidden region), while the combined sweep is
// accurate wherever E is close to a true eigenvalue.
template <typename Scalar>
Vec<Scalar> two_sided_eigenvector(const TridiagonalBlockT<Scalar>& block, Scalar E) {
  using std::abs;
  const Eigen::Index n = block.diag.size();
  const Scalar huge = Scalar(1e100);

  if (n == 1) return Vec<Scalar>::Constant(1, Scalar(1));

  // Pivot: the last diagonal entry not above E, where the eigenvector
  // magnitude peaks; the forward sweep is stable up to there.  Never step
  // past it: at very small coupling each extra step amplifies forward error
  // by (E - diag)/off, which is unbounded.
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (block.diag[i] <= E) pivot = i;

  // Forward sweep on 0..pivot (one extra entry for the matching choice).
  const Eigen::Index f_end = std::min(pivot + 1, n - 1);
  Vec<Scalar> f = Vec<Scalar>::Zero(f_end + 1);
  f[0] = 1;
  if (f_end >= 1) {
    f[1] = (E - block.diag[0]) / block.off[0];
    for (Eigen::Index m = 1; m < f_end; ++m) {
      f[m + 1] = ((E - block.diag[m]) * f[m] - block.off[m - 1] * f[m - 1]) / block.off[m];
      if (abs(f[m + 1]) > huge) f.head(m + 2) /= abs(f[m + 1]);
    }
  }

  // Backward sweep on pivot..n-1.
  Vec<Scalar> b = Vec<Scalar>::Zero(n);
  b[n - 1] = 1;
  if (n >= 2) b[n - 2] = (E - block.diag[n - 1]) / block.off[n - 2];
  for (Eigen::Index m = n - 2; m > pivot; --m) {
    b[m - 1] = ((E - block.diag[m]) * b[m] - block.off[m] * b[m + 1]) / block.off[m - 1];
    if (abs(b[m - 1]) > huge) b.tail(n - m + 1) /= abs(b[m - 1]);
  }

  // Match the sweeps where the backward values are best conditioned.
  Eigen::Index q = pivot;
  if (f_end > pivot && abs(b[pivot + 1]) > abs(b[pivot])) q = pivot + 1;
  if (b[q] == Scalar(0) || f[q] == Scalar(0)) {
    // Degenerate matching point; fall back to whichever overlap index works.
    q = (q == pivot && f_end > pivot) ? pivot + 1 : pivot;
    if (b[q] == Scalar(0))
      throw std::runtime_error("eigenvector matching failed; trial energy is not an eigenvalue");
  }

  Vec<Scalar> c(n);
  c.head(q + 1) = f.head(q + 1);
  const Scalar scale = f[q] / b[q];
  for (Eigen::Index m = q + 1; m < n; ++m) c[m] = b[m] * scale;
  c.normalize();
  fix_sign(c);
  return c;
}

// Distance measure between E and the spectrum of the block enlarged by 20
// ladder rungs: the residual norm of the reconstructed eigenvector there.
// Small only if E is (still) an eigenvalue of the enlarged block, i.e. if the
// level was converged in truncation.
template <typename Scalar>
Scalar enlarged_residual(const ModelParamsT<Scalar>& p, Parity parity, int M, Scalar E) {
  const TridiagonalBlockT<Scalar> wide = build_parity_block(p, parity, M + 20);
  Vec<Scalar> c;
  try {
    c = two_sided_eigenvector(wide, E);
  } catch (const std::runtime_error&) {
    return std::numeric_limits<Scalar>::infinity();
  }
  const Eigen::Index n = c.size();
  Vec<Scalar> r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar v = (wide.diag[i] - E) * c[i];
    if (i > 0) v += wide.off[i - 1] * c[i - 1];
    if (i + 1 < n) v += wide.off[i] * c[i + 1];
    r[i] = v;
  }
  return r.norm();
}

}  // namespace detail

// Normalized sector eigenstate at a converged eigenvalue E, with a residual
// diagnostic measured in a basis enlarged by 20 rungs.  A residual above 1e-4
// means E is not an accurate eigenvalue (wrong sector, stale truncation, or a
// made-up number) and is reported as an error.
template <typename Scalar>
std::pair<ParityBlockStateT<Scalar>, Scalar> eigenstate_at(Scalar E, const ModelParamsT<Scalar>& p,
                                                           Parity parity, int M) {
  using std::abs;
  ParityBlockStateT<Scalar> state;
  state.parity = parity;

  if (p.g == Scalar(0)) {
    // Decoupled limit: eigenvectors are ladder basis vectors; pick the
    // diagonal entry nearest E (lowest index on ties).
    const TridiagonalBlockT<Scalar> block = build_parity_block(p, parity, M);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < block.diag.size(); ++i)
      if (abs(block.diag[i] - E) < abs(block.diag[best] - E)) best = i;
    if (abs(block.diag[best] - E) > Scalar(1e-4))
      throw std::domain_error("trial energy is not an eigenvalue of the decoupled block");
    state.coeffs = Vec<Scalar>::Zero(M + 1);
    state.coeffs[best] = 1;
    return {std::move(state), Scalar(0)};
  }

  const Scalar residual = detail::enlarged_residual(p, parity, M, E);
  if (residual > Scalar(1e-4))
    throw std::domain_error("eigenstate residual too large: trial energy is unconverged or "
                            "misbracketed (residual " +
                            std::to_string(residual) + ")");
  state.coeffs = detail::two_sided_eigenvector(build_parity_block(p, parity, M), E);
  return {std::move(state), residual};
}

// Eigenvector of one parity sector at truncation M as a pure linear-algebra
// object.  Unlike eigenstate_at, no physical-convergence gate is applied:
// high rungs of a truncated block are legitimate basis vectors for expansions
// over that block even when their energies have not converged in M.
template <typename Scalar>
Vec<Scalar> truncated_eigenvector(const ModelParamsT<Scalar>& p, Parity parity, int M, Scalar E) {
  return detail::two_sided_eigenvector(build_parity_block(p, parity, M), E);
}

namespace detail {

// Merge per-sector eigenvalue lists into a single ascending spectrum with
// parity labels; exact ties list the even level first.
template <typename Scalar>
SpectrumT<Scalar> merge_spectra(const Vec<Scalar>& even, const Vec<Scalar>& odd,
                                const ModelParamsT<Scalar>& p, int count, Method method,
                                int truncation) {
  SpectrumT<Scalar> spec;
  spec.params = p;
  Eigen::Index ie = 0, io = 0;
  while (static_cast<int>(spec.levels.size()) < count) {
    const bool take_even =
        ie < even.size() && (io >= odd.size() || even[ie] <= odd[io]);
    if (!take_even && io >= odd.size())
      throw std::invalid_argument("not enough levels computed to merge the requested count");
    EnergyLevelT<Scalar> level;
    level.index = static_cast<int>(spec.levels.size());
    level.method = method;
    level.truncation = truncation;
    if (take_even) {
      level.parity = Parity::even;
      level.energy = even[ie++];
    } else {
      level.parity = Parity::odd;
      level.energy = odd[io++];
    }
    spec.levels.push_back(level);
  }
  return spec;
}

}  // namespace detail

// Grows the photon truncation until the requested number of merged levels is
// stable against a reference computed 20 rungs higher, then returns the
// spectrum at the final truncation together with the per-level report.  A
// fixed config.M skips the growth and reports convergence at that truncation.
template <typename Scalar>
std::pair<SpectrumT<Scalar>, ConvergenceReportT<Scalar>> converge_spectrum(
    const ModelParamsT<Scalar>& p, const SolverConfigT<Scalar>& config) {
  using std::abs;
  config.validate();
  const int k = config.level_count;
  // Clamp the automatic starting cutoff to the cap so a tight cap still
  // yields one full evaluation to hand back with the failure.
  const int M_start =
      config.M >= 0 ? config.M : std::min(std::max(k / 2 + 2, 12), config.M_max);

  SpectrumT<Scalar> last_spectrum;
  ConvergenceReportT<Scalar> last_report;

  for (int M = M_start; M <= config.M_max; ++M) {
    const int kb = std::min(k, M + 1);
    const int kb_ref = std::min(k, M + 21);
    const Vec<Scalar> even = find_levels(p, Parity::even, M, kb, config.tol_root);
    const Vec<Scalar> odd = find_levels(p, Parity::odd, M, kb, config.tol_root);
    const Vec<Scalar> even_ref = find_levels(p, Parity::even, M + 20, kb_ref, config.tol_root);
    const Vec<Scalar> odd_ref = find_levels(p, Parity::odd, M + 20, kb_ref, config.tol_root);

    // Within one sector levels cannot cross as M grows (symmetric tridiagonal
    // blocks with nonvanishing off-diagonals have simple, interlacing
    // spectra), so sector index i at M corresponds to sector index i in the
    // reference.  Merge the truncated lists to pick the k lowest.
    SpectrumT<Scalar> spectrum = detail::merge_spectra(even, odd, p, k, Method::exact, M);

    ConvergenceReportT<Scalar> report;
    report.M_final = M;
    report.per_level_delta.resize(k);
    report.converged.resize(k);
    Eigen::Index ie = 0, io = 0;
    bool all_ok = true;
    for (int i = 0; i < k; ++i) {
      const bool is_even = spectrum.levels[i].parity == Parity::even;
      const Scalar E = spectrum.levels[i].energy;
      const Scalar E_ref = is_even ? even_ref[ie++] : odd_ref[io++];
      Scalar delta;
      if (abs(E_ref) >= Scalar(1e-3)) {
        delta = abs(E - E_ref) / abs(E_ref);
      } else {
        // Near-zero level: absolute shift against a 1e-9 floor, rescaled so
        // the same tol_energy comparison applies.
        delta = abs(E - E_ref) * (config.tol_energy / Scalar(1e-9));
      }
      report.per_level_delta[i] = delta;
      const bool ok = delta < config.tol_energy;
      report.converged[i] = ok;
      all_ok = all_ok && ok;
    }

    if (all_ok || config.M >= 0) return {std::move(spectrum), std::move(report)};
    last_spectrum = std::move(spectrum);
    last_report = std::move(report);
  }

  throw ConvergenceErrorT<Scalar>(
      "spectrum did not converge by the truncation cap M_max = " + std::to_string(config.M_max),
      std::move(last_spectrum), std::move(last_report));
}

}  // namespace qrm
