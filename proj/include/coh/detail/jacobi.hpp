#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <type_traits>

namespace coh::detail {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
inline Scalar conj_of(const Scalar& x) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return x;
  } else {
    return std::conj(x);
  }
}

template <class Scalar>
double off_diagonal_norm2(const Mat<Scalar>& a) {
  double s = 0.0;
  const auto n = a.rows();
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < q; ++p) s += 2.0 * std::norm(a(p, q));
  return s;
}

// Cyclic Jacobi on a Hermitian (or real symmetric) matrix held in `a`.
// On return `a` is diagonal up to `rel_tol * ||a||_F` and `v` has been
// right-multiplied by the accumulated unitary, so that a_in = v a_out v^H
// when v started as the identity. Pass v = V0 and a = V0^H H V0 to warm start.
// Returns the number of sweeps performed, or -1 if max_sweeps was hit.
template <class Scalar>
int jacobi_sweeps(Mat<Scalar>& a, Mat<Scalar>& v, double rel_tol = 1e-14,
                  int max_sweeps = 60) {
  const auto n = a.rows();
  const double fro2 = a.squaredNorm();
  const double target = rel_tol * rel_tol * (fro2 > 0.0 ? fro2 : 1.0);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm2(a) <= target) return sweep;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        const double g = std::abs(apq);
        if (g == 0.0) continue;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        // negligible against the diagonal: zero it directly
        if (sweep > 3 && g < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = Scalar(0);
          a(q, p) = Scalar(0);
          continue;
        }
        const Scalar e = apq / g;
        const double tau = (aqq - app) / (2.0 * g);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 0.5 / tau;
        } else {
          t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Scalar se = s * e;
        const Scalar sec = s * conj_of(e);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p);
          const Scalar akq = a(k, q);
          a(k, p) = c * akp - sec * akq;
          a(k, q) = se * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k);
          const Scalar aqk = a(q, k);
          a(p, k) = c * apk - se * aqk;
          a(q, k) = sec * apk + c * aqk;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = Scalar(app - t * g);
        a(q, q) = Scalar(aqq + t * g);
        for (Eigen::Index k = 0; k < v.rows(); ++k) {
          const Scalar vkp = v(k, p);
          const Scalar vkq = v(k, q);
          v(k, p) = c * vkp - sec * vkq;
          v(k, q) = se * vkp + c * vkq;
        }
      }
    }
  }
  return off_diagonal_norm2(a) <= target ? max_sweeps : -1;
}

// Eigenvalue clipping with a cached eigenbasis. `basis` is both the warm
// start and the output eigenbasis. `negative` receives h - P_+(h).
template <class Scalar>
void split_psd_warm(const Mat<Scalar>& h, Mat<Scalar>& basis, Mat<Scalar>& positive,
                    Mat<Scalar>& negative, Mat<Scalar>& work) {
  const auto n = h.rows();
  if (basis.rows() != n) basis = Mat<Scalar>::Identity(n, n);
  work.noalias() = basis.adjoint() * h;
  positive.noalias() = work * basis;
  work = positive;
  if (jacobi_sweeps<Scalar>(work, basis) < 0) {
    // warm start went astray; restart cold
    basis = Mat<Scalar>::Identity(n, n);
    work = h;
    jacobi_sweeps<Scalar>(work, basis);
  }
  Eigen::VectorXd clipped(n);
  for (Eigen::Index i = 0; i < n; ++i) clipped(i) = std::max(0.0, std::real(work(i, i)));
  work.noalias() = basis * clipped.asDiagonal();
  positive.noalias() = work * basis.adjoint();
  negative = h - positive;
}

}  // namespace coh::detail
