#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qrm/types.hpp"

namespace qrm {

// Real solution set of a monic cubic x^3 + b x^2 + c x + d, solved in closed
// form through the resolvent combinations
//   A = b^2 - 3c,  B = bc - 9d,  C = c^2 - 3bd,  Gamma = B^2 - 4AC.
// Gamma < 0 gives three distinct real roots via the trigonometric formulas
// (angle theta); Gamma = 0 gives repeated real roots with explicit
// multiplicity; Gamma > 0 gives a single real root via a stable Cardano form.
template <typename Scalar>
struct CubicSolutionT {
  Scalar b{}, c{}, d{};
  Scalar A{}, B{}, C{};
  Scalar Gamma{};
  Scalar theta = std::numeric_limits<Scalar>::quiet_NaN();  // set only when Gamma < 0
  std::vector<Scalar> roots;  // ascending; three entries when Gamma <= 0, one otherwise
};
using CubicSolution = CubicSolutionT<double>;

template <typename Scalar>
CubicSolutionT<Scalar> solve_cubic_real(Scalar b, Scalar c, Scalar d) {
  using std::abs;
  using std::acos;
  using std::cbrt;
  using std::cos;
  using std::isfinite;
  using std::sin;
  using std::sqrt;
  if (!isfinite(b) || !isfinite(c) || !isfinite(d))
    throw std::invalid_argument("cubic coefficients must be finite");

  CubicSolutionT<Scalar> sol;
  sol.b = b;
  sol.c = c;
  sol.d = d;
  sol.A = b * b - 3 * c;
  sol.B = b * c - 9 * d;
  sol.C = c * c - 3 * b * d;
  sol.Gamma = sol.B * sol.B - 4 * sol.A * sol.C;

  if (sol.Gamma < Scalar(0)) {
    // Three distinct real roots.
    const Scalar sqrtA = sqrt(sol.A);
    Scalar arg = (2 * sol.A * b - 3 * sol.B) / (2 * sqrtA * sol.A);
    arg = std::clamp(arg, Scalar(-1), Scalar(1));
    sol.theta = acos(arg) / 3;
    const Scalar ct = cos(sol.theta);
    const Scalar st = sin(sol.theta);
    const Scalar r3 = sqrt(Scalar(3));
    sol.roots = {(-b + sqrtA * (ct + r3 * st)) / 3, (-b + sqrtA * (ct - r3 * st)) / 3,
                 (-b - 2 * sqrtA * ct) / 3};
  } else if (sol.Gamma == Scalar(0)) {
    if (sol.A == Scalar(0)) {
      // Triple root.
      sol.roots = {-b / 3, -b / 3, -b / 3};
    } else {
      // One single and one double root.
      const Scalar K = sol.B / sol.A;
      sol.roots = {-b + K, -K / 2, -K / 2};
    }
  } else {
    // One real root (stable Cardano resolvent).
    const Scalar sq = sqrt(sol.Gamma);
    const Scalar Y1 = sol.A * b + Scalar(1.5) * (-sol.B + sq);
    const Scalar Y2 = sol.A * b + Scalar(1.5) * (-sol.B - sq);
    sol.roots = {(-b - (cbrt(Y1) + cbrt(Y2))) / 3};
  }

  // One Newton step per root tightens the closed forms against rounding in
  // the resolvents; skipped where the derivative is too small to help
  // (multiple roots).
  for (Scalar& r : sol.roots) {
    const Scalar p = ((r + b) * r + c) * r + d;
    const Scalar dp = (3 * r + 2 * b) * r + c;
    if (abs(dp) > Scalar(1e-8) * std::max(Scalar(1), abs(3 * r * r))) r -= p / dp;
  }
  std::sort(sol.roots.begin(), sol.roots.end());
  return sol;
}

}  // namespace qrm
