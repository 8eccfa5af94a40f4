#include "coh/hermitian.hpp"

#include "coh/detail/jacobi.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace coh {

CMatrix hadamard(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("hadamard: operands have different shapes");
  return a.cwiseProduct(b);
}

bool is_hermitian(const CMatrix& h, double tol) {
  if (h.rows() != h.cols()) return false;
  if (!h.allFinite()) return false;
  return (h - h.adjoint()).norm() <= scaled_tol(h, tol);
}

EigenSystem eig_hermitian(const CMatrix& h) {
  if (!is_hermitian(h))
    throw std::invalid_argument("eig_hermitian: matrix is not Hermitian");
  const Index n = h.rows();
  CMatrix a = 0.5 * (h + h.adjoint());
  CMatrix v = CMatrix::Identity(n, n);
  if (detail::jacobi_sweeps<cplx>(a, v) < 0)
    throw std::runtime_error("eig_hermitian: Jacobi sweeps did not converge");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() < a(j, j).real(); });
  EigenSystem out{RVector(n), CMatrix(n, n)};
  for (Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double min_eigenvalue(const CMatrix& h) {
  if (h.rows() == 0) return 0.0;
  return eig_hermitian(h).values(0);
}

bool is_psd(const CMatrix& h, double tol) {
  return min_eigenvalue(h) >= -scaled_tol(h, tol);
}

CMatrix project_psd(const CMatrix& h) {
  const auto es = eig_hermitian(h);
  const RVector clipped = es.values.cwiseMax(0.0);
  return es.vectors * clipped.asDiagonal() * es.vectors.adjoint();
}

std::vector<CVector> gram_vectors(const CMatrix& c) {
  const auto es = eig_hermitian(c);
  const double tol = scaled_tol(c, kTolEig);
  if (es.values.size() > 0 && es.values(0) < -scaled_tol(c, kPsdSlack))
    throw std::invalid_argument("gram_vectors: matrix is not PSD (min eigenvalue " +
                                std::to_string(es.values(0)) + ")");
  std::vector<Index> kept;
  for (Index k = 0; k < es.values.size(); ++k)
    if (es.values(k) > tol) kept.push_back(k);
  const Index n = c.rows();
  const Index r = static_cast<Index>(kept.size());
  // B = Lambda^{1/2} V^H restricted to the range; C = B^H B
  CMatrix b(r, n);
  for (Index i = 0; i < r; ++i)
    b.row(i) = std::sqrt(es.values(kept[i])) * es.vectors.col(kept[i]).adjoint();
  std::vector<CVector> eta;
  eta.reserve(static_cast<std::size_t>(n));
  for (Index m = 0; m < n; ++m) {
    CVector col = b.col(m);
    const double nrm = col.norm();
    if (nrm > 0.0) col /= nrm;
    eta.push_back(std::move(col));
  }
  return eta;
}

}  // namespace coh
