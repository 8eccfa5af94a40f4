#pragma once

#include "coh/gii.hpp"

#include <Eigen/Eigenvalues>

#include <random>

namespace coh::test {

using Rng = std::mt19937_64;

inline CMatrix random_complex(Rng& rng, Index d) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = cplx(n(rng), n(rng));
  return a;
}

inline CMatrix random_hermitian(Rng& rng, Index d) {
  const CMatrix a = random_complex(rng, d);
  return 0.5 * (a + a.adjoint());
}

/// A A^H with A of the given rank.
inline CMatrix random_psd(Rng& rng, Index d, Index rank = -1) {
  if (rank < 0) rank = d;
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix a(d, rank);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < rank; ++j) a(i, j) = cplx(n(rng), n(rng));
  return a * a.adjoint();
}

/// PSD with unit diagonal: Gram matrix of random unit vectors.
inline CMatrix random_coherence(Rng& rng, Index d, Index rank = -1) {
  CMatrix g = random_psd(rng, d, rank);
  RVector s = g.diagonal().real().cwiseSqrt().cwiseInverse();
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) *= s(i) * s(j);
  g.diagonal().setOnes();
  return g;
}

/// Random POVM with k outcomes: S^{-1/2} A_i S^{-1/2}, S = sum A_i.
inline Observable random_povm(Rng& rng, Index d, int k) {
  std::vector<CMatrix> a;
  CMatrix s = CMatrix::Zero(d, d);
  for (int i = 0; i < k; ++i) {
    a.push_back(random_psd(rng, d, 1 + static_cast<Index>(rng() % d)));
    if (i == 0) a.back() += 0.1 * CMatrix::Identity(d, d);  // keeps the sum invertible
    s += a.back();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  const CMatrix w = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                    es.eigenvectors().adjoint();
  Observable m;
  for (auto& x : a) {
    CMatrix e = w * x * w;
    m.effects.push_back(0.5 * (e + e.adjoint()));
  }
  return m;
}

inline IncoherentObservable random_table(Rng& rng, Index d, Index k) {
  std::gamma_distribution<double> g(1.0, 1.0);
  RMatrix t(d, k);
  for (Index n = 0; n < d; ++n) {
    for (Index j = 0; j < k; ++j) t(n, j) = g(rng);
    t.row(n) /= t.row(n).sum();
  }
  return IncoherentObservable{t};
}

inline double oracle_min_eig(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline RVector oracle_eigenvalues(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace coh::test
