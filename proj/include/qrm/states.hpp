#pragma once

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "qrm/types.hpp"

namespace qrm {

// Sign convention used throughout: the overall phase of a real state vector
// is fixed by making its first nonzero entry positive.  Entries below `tol`
// count as zero.
template <typename Scalar>
void fix_sign(Vec<Scalar>& v, Scalar tol = Scalar(1e-12)) {
  using std::abs;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (abs(v[i]) > tol) {
      if (v[i] < Scalar(0)) v = -v;
      return;
    }
  }
}

// Same convention for two-component states; amplitudes are scanned photon
// number first, upper component before lower.
template <typename Scalar>
void fix_sign(SpinFockStateT<Scalar>& s, Scalar tol = Scalar(1e-12)) {
  using std::abs;
  for (Eigen::Index i = 0; i < s.upper.size(); ++i) {
    for (const Scalar a : {s.upper[i], s.lower[i]}) {
      if (abs(a) > tol) {
        if (a < Scalar(0)) {
          s.upper = -s.upper;
          s.lower = -s.lower;
        }
        return;
      }
    }
  }
}

template <typename Scalar>
Scalar overlap(const SpinFockStateT<Scalar>& a, const SpinFockStateT<Scalar>& b) {
  if (a.upper.size() != b.upper.size())
    throw std::invalid_argument("overlap requires equal photon capacity");
  return a.upper.dot(b.upper) + a.lower.dot(b.lower);
}

// Expectation value of the excitation-number parity (-1)^{N} in a normalized
// state: the upper component carries one extra excitation, so photon number n
// contributes with sign -(-1)^n there and +(-1)^n on the lower component.
template <typename Scalar>
Scalar parity_expectation(const SpinFockStateT<Scalar>& state) {
  using std::abs;
  if (abs(state.squared_norm() - Scalar(1)) > Scalar(1e-8))
    throw std::invalid_argument("parity_expectation requires a normalized state");
  Scalar value = 0;
  for (Eigen::Index n = 0; n < state.upper.size(); ++n) {
    const Scalar sn = (n % 2 == 0) ? Scalar(1) : Scalar(-1);
    value += sn * (state.lower[n] * state.lower[n] - state.upper[n] * state.upper[n]);
  }
  return value;
}

// Expands a parity-sector coefficient vector into the two-component
// wavefunction it represents.  Within a sector the ladder index n fixes both
// the photon number and which atomic component the amplitude lives on:
// lower (atom ground) where (-1)^n matches the sector sign, upper otherwise.
// The result is normalized and sign-fixed.
template <typename Scalar>
SpinFockStateT<Scalar> rotate_to_lab(const ParityBlockStateT<Scalar>& block) {
  using std::sqrt;
  const Scalar s = parity_sign<Scalar>(block.parity);
  const Scalar norm = sqrt(block.coeffs.squaredNorm());
  if (!(norm > Scalar(0))) throw std::invalid_argument("cannot rotate an all-zero state");
  SpinFockStateT<Scalar> out;
  out.upper = Vec<Scalar>::Zero(block.coeffs.size());
  out.lower = Vec<Scalar>::Zero(block.coeffs.size());
  for (Eigen::Index n = 0; n < block.coeffs.size(); ++n) {
    const Scalar sn = (n % 2 == 0) ? Scalar(1) : Scalar(-1);
    if (s * sn > Scalar(0))
      out.lower[n] = block.coeffs[n] / norm;
    else
      out.upper[n] = block.coeffs[n] / norm;
  }
  fix_sign(out);
  return out;
}

// Inverse of rotate_to_lab: reads the sector coefficients out of a
// two-component wavefunction.  Amplitudes living on the opposite sector are
// dropped, so the result has norm <= 1 for a normalized input.
template <typename Scalar>
ParityBlockStateT<Scalar> state_to_block(const SpinFockStateT<Scalar>& state, Parity parity) {
  const Scalar s = parity_sign<Scalar>(parity);
  ParityBlockStateT<Scalar> block;
  block.parity = parity;
  block.coeffs.resize(state.upper.size());
  for (Eigen::Index n = 0; n < block.coeffs.size(); ++n) {
    const Scalar sn = (n % 2 == 0) ? Scalar(1) : Scalar(-1);
    block.coeffs[n] = (s * sn > Scalar(0)) ? state.lower[n] : state.upper[n];
  }
  return block;
}

// Fraction of the state's weight lying in the given parity sector.
template <typename Scalar>
Scalar parity_weight(const SpinFockStateT<Scalar>& state, Parity parity) {
  return state_to_block(state, parity).coeffs.squaredNorm();
}

}  // namespace qrm
