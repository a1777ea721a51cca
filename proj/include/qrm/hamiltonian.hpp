#pragma once

#include <cmath>
#include <stdexcept>

#include "qrm/types.hpp"

namespace qrm {

namespace detail {
inline void check_truncation(int M) {
  if (M < 1) throw std::invalid_argument("photon truncation must be at least 1");
}
}  // namespace detail

// Full Hamiltonian on the product basis, ordered as the atom-excited photon
// ladder |e,0..M> followed by the atom-ground ladder |g,0..M>.  The coupling
// contains no rotating-wave truncation: both co- and counter-rotating terms
// are present, so |e,n> couples to |g,n-1> and |g,n+1> alike.
template <typename Scalar>
Mat<Scalar> build_lab_hamiltonian(const ModelParamsT<Scalar>& p, int M) {
  detail::check_truncation(M);
  using std::sqrt;
  const int d = M + 1;
  Mat<Scalar> H = Mat<Scalar>::Zero(2 * d, 2 * d);
  for (int n = 0; n <= M; ++n) {
    H(n, n) = Scalar(n) + p.delta / Scalar(2);
    H(d + n, d + n) = Scalar(n) - p.delta / Scalar(2);
  }
  for (int n = 0; n < M; ++n) {
    const Scalar t = p.g * sqrt(Scalar(n + 1));
    H(n, d + n + 1) = t;  // |e,n> <-> |g,n+1>
    H(d + n + 1, n) = t;
    H(n + 1, d + n) = t;  // |e,n+1> <-> |g,n>
    H(d + n, n + 1) = t;
  }
  return H;
}

// Diagonal of the excitation-number parity operator in the same basis:
// (-1)^{n+1} on |e,n> and (-1)^n on |g,n>.  Commutes with the Hamiltonian.
template <typename Scalar>
Vec<Scalar> parity_operator_diagonal(int M) {
  detail::check_truncation(M);
  const int d = M + 1;
  Vec<Scalar> diag(2 * d);
  for (int n = 0; n <= M; ++n) {
    const Scalar sn = (n % 2 == 0) ? Scalar(1) : Scalar(-1);
    diag[n] = -sn;
    diag[d + n] = sn;
  }
  return diag;
}

template <typename Scalar = double>
Eigen::DiagonalMatrix<Scalar, Eigen::Dynamic> parity_operator(int M) {
  return Eigen::DiagonalMatrix<Scalar, Eigen::Dynamic>(parity_operator_diagonal<Scalar>(M));
}

// One parity sector of the Hamiltonian.  In the sector's ladder basis the
// Hamiltonian is a real symmetric tridiagonal matrix of dimension M+1:
//   diagonal      d_m = m - s * (delta/2) * (-1)^m     (s = sector sign)
//   off-diagonal  o_m = g * sqrt(m+1)
template <typename Scalar>
struct TridiagonalBlockT {
  Parity parity{Parity::even};
  Vec<Scalar> diag;  // size M+1
  Vec<Scalar> off;   // size M

  int truncation() const { return static_cast<int>(diag.size()) - 1; }

  Mat<Scalar> dense() const {
    Mat<Scalar> T = Mat<Scalar>::Zero(diag.size(), diag.size());
    for (Eigen::Index i = 0; i < diag.size(); ++i) T(i, i) = diag[i];
    for (Eigen::Index i = 0; i < off.size(); ++i) {
      T(i, i + 1) = off[i];
      T(i + 1, i) = off[i];
    }
    return T;
  }
};
using TridiagonalBlock = TridiagonalBlockT<double>;

template <typename Scalar>
TridiagonalBlockT<Scalar> build_parity_block(const ModelParamsT<Scalar>& p, Parity parity,
                                             int M) {
  detail::check_truncation(M);
  using std::sqrt;
  const Scalar s = parity_sign<Scalar>(parity);
  TridiagonalBlockT<Scalar> block;
  block.parity = parity;
  block.diag.resize(M + 1);
  block.off.resize(M);
  for (int m = 0; m <= M; ++m) {
    const Scalar sm = (m % 2 == 0) ? Scalar(1) : Scalar(-1);
    block.diag[m] = Scalar(m) - s * sm * p.delta / Scalar(2);
  }
  for (int m = 0; m < M; ++m) block.off[m] = p.g * sqrt(Scalar(m + 1));
  return block;
}

}  // namespace qrm
