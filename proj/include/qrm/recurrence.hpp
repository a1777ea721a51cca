#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qrm/types.hpp"

namespace qrm {

// Coefficient sequence c_0..c_{M+1} generated by the parity-sector three-term
// recurrence at a trial energy.  The true coefficient is
//   c_true[i] = coeffs[i] * exp(log_scales[i]);
// the stored values are renormalized on the fly because they grow factorially
// when E is far from an eigenvalue.
template <typename Scalar>
struct RecurrenceSequenceT {
  Vec<Scalar> coeffs;
  Vec<Scalar> log_scales;
};
using RecurrenceSequence = RecurrenceSequenceT<double>;

// Sign and log-magnitude of a quantity too large (or small) to hold in a
// plain floating-point value.
template <typename Scalar>
struct ScaledValueT {
  int sign = 0;           // -1, 0, +1
  Scalar log_magnitude =  // natural log of |value|; -inf when sign == 0
      -std::numeric_limits<Scalar>::infinity();

  Scalar value() const {
    using std::exp;
    return Scalar(sign) * exp(log_magnitude);
  }
};
using ScaledValue = ScaledValueT<double>;

// Runs the sector recurrence at trial energy E:
//   c_0 = 1,  c_1 = (E + s*delta/2)/g,
//   c_{m+1} = [E - m + s(delta/2)(-1)^m] c_m / (g sqrt(m+1))
//             - sqrt(m/(m+1)) c_{m-1},       m = 1..M,
// with s = +1 for the even sector and -1 for the odd one.  Whenever the
// rolling pair exceeds 1e100 in magnitude it is rescaled and the cumulative
// scale recorded per index in log form.
template <typename Scalar>
RecurrenceSequenceT<Scalar> recurrence_coefficients(Scalar E, const ModelParamsT<Scalar>& p,
                                                    Parity parity, int M) {
  using std::abs;
  using std::isfinite;
  using std::log;
  using std::sqrt;
  if (p.g == Scalar(0))
    throw std::domain_error("recurrence undefined for decoupled model (g = 0); use closed forms");
  if (M < 1) throw std::invalid_argument("photon truncation must be at least 1");

  const Scalar s = parity_sign<Scalar>(parity);
  const Scalar threshold = Scalar(1e100);

  RecurrenceSequenceT<Scalar> seq;
  seq.coeffs.resize(M + 2);
  seq.log_scales = Vec<Scalar>::Zero(M + 2);

  Scalar log_scale = 0;
  Scalar prev = 1;                         // c_0
  Scalar curr = (E + s * p.delta / 2) / p.g;  // c_1
  seq.coeffs[0] = prev;
  seq.coeffs[1] = curr;
  seq.log_scales[1] = log_scale;

  for (int m = 1; m <= M; ++m) {
    const Scalar sm = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
    const Scalar next = (E - Scalar(m) + s * sm * p.delta / 2) * curr / (p.g * sqrt(Scalar(m + 1))) -
                        sqrt(Scalar(m) / Scalar(m + 1)) * prev;
    if (!isfinite(next)) throw std::runtime_error("recurrence produced a non-finite coefficient");
    prev = curr;
    curr = next;
    if (abs(curr) > threshold || abs(prev) > threshold) {
      const Scalar mag = std::max(abs(curr), abs(prev));
      prev /= mag;
      curr /= mag;
      log_scale += log(mag);
    }
    seq.coeffs[m + 1] = curr;
    seq.log_scales[m + 1] = log_scale;
    // Earlier entries keep the scale they were stored with; only the rolling
    // pair participates in renormalization.
    seq.coeffs[m] = prev;
    seq.log_scales[m] = log_scale;
  }
  return seq;
}

// Scaled residual of the truncation boundary equation
//   [E - M + s(delta/2)(-1)^M] c_M - g sqrt(M) c_{M-1},
// whose zeros are exactly the sector eigenvalues at this truncation.  Equal,
// via the recurrence, to g*sqrt(M+1)*c_{M+1}.
template <typename Scalar>
ScaledValueT<Scalar> boundary_value(Scalar E, const ModelParamsT<Scalar>& p, Parity parity,
                                    int M) {
  using std::abs;
  using std::log;
  using std::sqrt;
  const RecurrenceSequenceT<Scalar> seq = recurrence_coefficients(E, p, parity, M);
  const Scalar tail = p.g * sqrt(Scalar(M + 1)) * seq.coeffs[M + 1];
  ScaledValueT<Scalar> out;
  if (tail == Scalar(0)) return out;
  out.sign = tail > Scalar(0) ? 1 : -1;
  out.log_magnitude = log(abs(tail)) + seq.log_scales[M + 1];
  return out;
}

}  // namespace qrm
