#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qrm/hamiltonian.hpp"
#include "qrm/states.hpp"
#include "qrm/types.hpp"

namespace qrm {

// Result of the independent dense-diagonalization cross-check: ascending
// energies with parity labels, plus the eigenvectors as two-component states.
template <typename Scalar>
struct EdSolutionT {
  SpectrumT<Scalar> spectrum;
  std::vector<SpinFockStateT<Scalar>> states;
};
using EdSolution = EdSolutionT<double>;

namespace detail {

// Replaces the eigenvectors of a (numerically) degenerate cluster by an
// orthonormal set supported purely on one parity sector each.  A dense solver
// may return arbitrary rotations inside a degenerate subspace, mixing the
// sectors; since parity commutes with the Hamiltonian, the cluster space
// splits cleanly and the even part is listed first.
template <typename Scalar>
void purify_cluster(Mat<Scalar>& vectors, const Vec<Scalar>& parity_diag, Eigen::Index begin,
                    Eigen::Index end) {
  const Eigen::Index n = end - begin;
  const Eigen::Index dim = vectors.rows();
  Mat<Scalar> cluster = vectors.middleCols(begin, n);

  Mat<Scalar> replacement(dim, n);
  Eigen::Index filled = 0;
  for (const Scalar target : {Scalar(1), Scalar(-1)}) {
    // Project the cluster onto this sector's coordinates and orthonormalize.
    Mat<Scalar> projected = cluster;
    for (Eigen::Index r = 0; r < dim; ++r)
      if (parity_diag[r] != target) projected.row(r).setZero();
    Eigen::ColPivHouseholderQR<Mat<Scalar>> qr(projected);
    qr.setThreshold(Scalar(1e-6));
    const Eigen::Index rank = qr.rank();
    if (rank == 0) continue;
    if (filled + rank > n)
      throw std::runtime_error("degenerate cluster spans more states than its dimension");
    Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(dim, rank);
    replacement.middleCols(filled, rank) = q;
    filled += rank;
  }
  if (filled != n) throw std::runtime_error("failed to split a degenerate cluster by parity");
  vectors.middleCols(begin, n) = replacement;
}

}  // namespace detail

// Independent road to the spectrum: assemble the full Hamiltonian and hand it
// to a dense symmetric eigensolver, then label each eigenvector by its parity
// expectation value.  Degeneracies are disentangled so every label is +-1 to
// high accuracy; anything else fails loudly.
template <typename Scalar>
EdSolutionT<Scalar> ed_oracle_states(const ModelParamsT<Scalar>& p, int M) {
  using std::abs;
  const Mat<Scalar> H = build_lab_hamiltonian(p, M);
  const Vec<Scalar> P = parity_operator_diagonal<Scalar>(M);
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("dense eigensolver failed to converge");
  Vec<Scalar> energies = es.eigenvalues();
  Mat<Scalar> vectors = es.eigenvectors();
  const Eigen::Index dim = energies.size();

  // Scan for clusters of numerically equal energies and make their vectors
  // parity-pure, listing even states before odd ones inside each cluster.
  const Scalar cluster_tol = Scalar(1e-9);
  Eigen::Index begin = 0;
  while (begin < dim) {
    Eigen::Index end = begin + 1;
    while (end < dim && abs(energies[end] - energies[end - 1]) <=
                            cluster_tol * std::max(Scalar(1), abs(energies[end])))
      ++end;
    if (end - begin > 1) detail::purify_cluster(vectors, P, begin, end);
    begin = end;
  }

  EdSolutionT<Scalar> out;
  out.spectrum.params = p;
  out.spectrum.levels.resize(dim);
  out.states.resize(dim);
  const int d = M + 1;
  for (Eigen::Index i = 0; i < dim; ++i) {
    Vec<Scalar> v = vectors.col(i);
    const Scalar expectation = v.dot(P.asDiagonal() * v);
    if (abs(abs(expectation) - Scalar(1)) > Scalar(1e-8))
      throw std::runtime_error("eigenvector is not parity-pure; cannot label the spectrum");
    auto& level = out.spectrum.levels[i];
    level.index = static_cast<int>(i);
    level.energy = energies[i];
    level.parity = expectation > Scalar(0) ? Parity::even : Parity::odd;
    level.method = Method::ed_oracle;
    level.truncation = M;
    SpinFockStateT<Scalar> state;
    state.upper = v.head(d);
    state.lower = v.tail(d);
    fix_sign(state);
    out.states[i] = std::move(state);
  }

  return out;
}

// Convenience wrapper returning only energies and labels.
template <typename Scalar>
SpectrumT<Scalar> ed_oracle(const ModelParamsT<Scalar>& p, int M) {
  return ed_oracle_states(p, M).spectrum;
}

}  // namespace qrm
