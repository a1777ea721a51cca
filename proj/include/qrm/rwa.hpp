#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "qrm/states.hpp"
#include "qrm/types.hpp"

namespace qrm {

// One excitation manifold of the rotating-wave model: the states |e,n> and
// |g,n+1> mix into a lower and an upper dressed branch split by the Rabi
// frequency R_n = sqrt(detuning^2 + 4g^2(n+1)).
template <typename Scalar>
struct RwaDoubletT {
  int n = 0;
  Scalar E_lower{};
  Scalar E_upper{};
  Scalar R{};          // Rabi frequency; always E_upper - E_lower
  Scalar amp_c_lower{};  // amplitude of |e,n>   in the lower branch
  Scalar amp_d_lower{};  // amplitude of |g,n+1> in the lower branch
  Scalar amp_c_upper{};  // amplitude of |e,n>   in the upper branch
  Scalar amp_d_upper{};  // amplitude of |g,n+1> in the upper branch
};
using RwaDoublet = RwaDoubletT<double>;

// Diagonalizes the 2x2 manifold matrix
//   [[n + 1/2 + detuning/2,  g sqrt(n+1)      ],
//    [g sqrt(n+1),           n + 1/2 - detuning/2]]
// in the basis {|e,n>, |g,n+1>}.  Phase convention: the |e,n> amplitude is
// nonnegative in each branch (and the |g,n+1> amplitude positive when the
// former vanishes).
template <typename Scalar>
RwaDoubletT<Scalar> rwa_doublet(const ModelParamsT<Scalar>& p, int n) {
  using std::abs;
  using std::sqrt;
  if (n < 0) throw std::invalid_argument("manifold index must be nonnegative");
  const Scalar det = p.detuning();
  const Scalar t = p.g * sqrt(Scalar(n + 1));
  const Scalar R = sqrt(det * det + 4 * t * t);

  RwaDoubletT<Scalar> d;
  d.n = n;
  d.R = R;
  d.E_lower = Scalar(n) + Scalar(0.5) - R / 2;
  d.E_upper = Scalar(n) + Scalar(0.5) + R / 2;

  // Branch vectors, written in whichever algebraic form avoids cancellation.
  Scalar cl, dl;
  if (R == Scalar(0)) {
    cl = 1;
    dl = 0;
  } else if (det >= Scalar(0)) {
    cl = 2 * t;
    dl = -(det + R);
  } else {
    cl = R - det;
    dl = -2 * t;
  }
  const Scalar norm = sqrt(cl * cl + dl * dl);
  cl /= norm;
  dl /= norm;
  if (cl < Scalar(0) || (cl == Scalar(0) && dl < Scalar(0))) {
    cl = -cl;
    dl = -dl;
  }
  d.amp_c_lower = cl;
  d.amp_d_lower = dl;

  // Upper branch is the orthogonal complement with the same phase convention.
  Scalar cu = -dl, du = cl;
  if (cu < Scalar(0) || (cu == Scalar(0) && du < Scalar(0))) {
    cu = -cu;
    du = -du;
  }
  d.amp_c_upper = cu;
  d.amp_d_upper = du;
  return d;
}

// Ground state of the rotating-wave model: exactly |g,0> at energy -delta/2.
// The photon capacity of the returned state is selectable for composing with
// truncated bases.
template <typename Scalar>
std::pair<Scalar, SpinFockStateT<Scalar>> rwa_ground(const ModelParamsT<Scalar>& p, int M = 1) {
  if (M < 1) throw std::invalid_argument("photon truncation must be at least 1");
  SpinFockStateT<Scalar> state;
  state.upper = Vec<Scalar>::Zero(M + 1);
  state.lower = Vec<Scalar>::Zero(M + 1);
  state.lower[0] = 1;
  return {-p.delta / 2, std::move(state)};
}

// The doublet branches as two-component wavefunctions at photon capacity M.
template <typename Scalar>
std::pair<SpinFockStateT<Scalar>, SpinFockStateT<Scalar>> rwa_doublet_states(
    const RwaDoubletT<Scalar>& d, int M) {
  if (M < d.n + 1) throw std::invalid_argument("truncation too small for this manifold");
  SpinFockStateT<Scalar> lower, upper;
  lower.upper = Vec<Scalar>::Zero(M + 1);
  lower.lower = Vec<Scalar>::Zero(M + 1);
  upper = lower;
  lower.upper[d.n] = d.amp_c_lower;
  lower.lower[d.n + 1] = d.amp_d_lower;
  upper.upper[d.n] = d.amp_c_upper;
  upper.lower[d.n + 1] = d.amp_d_upper;
  return {std::move(lower), std::move(upper)};
}

}  // namespace qrm
