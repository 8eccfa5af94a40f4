#include "coh/measurement.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace coh {

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].what << " (" << violations[i].magnitude << ")";
  }
  return os.str();
}

ValidationReport validate_povm(const Observable& m, double tol) {
  ValidationReport r;
  if (m.effects.empty()) {
    r.violations.push_back({"no effects", 0.0});
    return r;
  }
  const Index d = m.dim();
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < m.effects.size(); ++i) {
    const CMatrix& e = m.effects[i];
    const std::string tag = "effect " + std::to_string(i);
    if (e.rows() != d || e.cols() != d) {
      r.violations.push_back({tag + ": shape differs from effect 0", 0.0});
      continue;
    }
    if (!e.allFinite()) {
      r.violations.push_back({tag + ": non-finite entry", 0.0});
      continue;
    }
    const double asym = (e - e.adjoint()).norm();
    if (asym > scaled_tol(e, kTolHerm)) {
      r.violations.push_back({tag + ": not Hermitian", asym});
      continue;
    }
    const double lo = min_eigenvalue(e);
    if (lo < -tol) r.violations.push_back({tag + ": negative eigenvalue", -lo});
    if (e.cwiseAbs().maxCoeff() <= tol) r.warnings.push_back(tag + " is zero");
    sum += e;
  }
  if (!r.ok()) return r;
  const double dev = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > tol) r.violations.push_back({"effects do not sum to identity", dev});
  return r;
}

ValidationReport validate_incoherent(const IncoherentObservable& p, double tol) {
  ValidationReport r;
  if (p.table.rows() == 0 || p.table.cols() == 0) {
    r.violations.push_back({"empty table", 0.0});
    return r;
  }
  if (!p.table.allFinite()) {
    r.violations.push_back({"non-finite entry", 0.0});
    return r;
  }
  const double lo = p.table.minCoeff();
  if (lo < -tol) r.violations.push_back({"negative probability", -lo});
  const double hi = p.table.maxCoeff();
  if (hi > 1.0 + tol) r.violations.push_back({"probability above one", hi - 1.0});
  for (Index n = 0; n < p.table.rows(); ++n) {
    const double dev = std::abs(p.table.row(n).sum() - 1.0);
    if (dev > tol)
      r.violations.push_back({"row " + std::to_string(n) + " does not sum to one", dev});
  }
  return r;
}

ValidationReport validate_coherence(const CMatrix& c) {
  ValidationReport r;
  if (c.rows() == 0 || c.rows() != c.cols()) {
    r.violations.push_back({"coherence matrix must be square and nonempty", 0.0});
    return r;
  }
  if (!is_hermitian(c)) {
    r.violations.push_back({"coherence matrix is not Hermitian", (c - c.adjoint()).norm()});
    return r;
  }
  const double diag = (c.diagonal().array() - 1.0).abs().maxCoeff();
  if (diag > kTolPovm) r.violations.push_back({"coherence matrix diagonal is not one", diag});
  const double lo = min_eigenvalue(c);
  if (lo < -scaled_tol(c, kPsdSlack))
    r.violations.push_back({"coherence matrix is not PSD", -lo});
  return r;
}

void require_valid(const Observable& m) {
  const auto r = validate_povm(m);
  if (!r.ok()) throw InvalidInput("invalid observable: " + r.summary());
}

void require_valid(const IncoherentObservable& p) {
  const auto r = validate_incoherent(p);
  if (!r.ok()) throw InvalidInput("invalid incoherent observable: " + r.summary());
}

void require_coherence_matrix(const CMatrix& c) {
  const auto r = validate_coherence(c);
  if (!r.ok()) throw InvalidInput("invalid coherence matrix: " + r.summary());
}

Observable strip_zero_effects(const Observable& m, std::vector<std::size_t>* removed, double tol) {
  Observable out;
  for (std::size_t i = 0; i < m.effects.size(); ++i) {
    if (m.effects[i].size() > 0 && m.effects[i].cwiseAbs().maxCoeff() <= tol) {
      if (removed) removed->push_back(i);
      continue;
    }
    out.effects.push_back(m.effects[i]);
  }
  return out;
}

CoherenceReport coherence_report(const Observable& m) {
  require_valid(m);
  const Index d = m.dim();
  CoherenceReport r{RMatrix::Zero(d, d), RMatrix::Zero(d, d)};
  RMatrix affinity = RMatrix::Zero(d, d);
  for (const auto& e : m.effects) {
    r.coh += e.cwiseAbs();
    for (Index n = 0; n < d; ++n) {
      const double pn = std::max(0.0, e(n, n).real());
      for (Index k = 0; k < d; ++k)
        affinity(n, k) += std::sqrt(pn * std::max(0.0, e(k, k).real()));
    }
  }
  r.coh = 0.5 * (r.coh + r.coh.transpose());
  r.hellinger_sq = (RMatrix::Ones(d, d) - affinity).cwiseMax(0.0);
  r.hellinger_sq.diagonal().setZero();
  return r;
}

RMatrix hellinger_affinity(const IncoherentObservable& p) {
  const Index d = p.dim();
  const RMatrix s = p.table.cwiseMax(0.0).cwiseSqrt();
  RMatrix a = s * s.transpose();
  for (Index n = 0; n < d; ++n) a(n, n) = 1.0;
  return a;
}

RMatrix hellinger_sq(const IncoherentObservable& p) {
  const Index d = p.dim();
  return (RMatrix::Ones(d, d) - hellinger_affinity(p)).cwiseMax(0.0);
}

std::optional<RMatrix> structure_matrix(const IncoherentObservable& p) {
  const RMatrix a = hellinger_affinity(p);
  if (a.minCoeff() < kAffinityZero) return std::nullopt;
  return a.cwiseInverse();
}

std::vector<CMatrix> hellinger_gii(const IncoherentObservable& p) {
  std::vector<CMatrix> blocks;
  blocks.reserve(p.outcomes());
  for (std::size_t j = 0; j < p.outcomes(); ++j) {
    const RVector s = p.table.col(static_cast<Index>(j)).cwiseMax(0.0).cwiseSqrt();
    blocks.emplace_back((s * s.transpose()).cast<cplx>());
  }
  return blocks;
}

CoherenceClass classify_coherence(const Observable& m, double tol) {
  const auto rep = coherence_report(m);
  const Index d = m.dim();
  CoherenceClass out;
  double lo = 1.0, hi = 0.0;
  for (Index n = 0; n < d; ++n)
    for (Index k = 0; k < d; ++k)
      if (n != k) {
        lo = std::min(lo, rep.coh(n, k));
        hi = std::max(hi, rep.coh(n, k));
      }
  if (d < 2 || hi <= tol) {
    out.kind = CoherenceClass::Kind::incoherent;
    return out;
  }
  if (lo < 1.0 - tol) return out;
  out.kind = CoherenceClass::Kind::maximally_coherent;
  const auto stripped = strip_zero_effects(m);
  out.weights.resize(static_cast<Index>(stripped.outcomes()));
  for (std::size_t i = 0; i < stripped.outcomes(); ++i) {
    const CMatrix& e = stripped.effects[i];
    const auto es = eig_hermitian(e);
    CVector psi = es.vectors.col(d - 1);
    if (std::abs(psi(0)) > 0.0) psi *= std::conj(psi(0)) / std::abs(psi(0));
    out.weights(static_cast<Index>(i)) = e.trace().real() / static_cast<double>(d);
    out.states.push_back(std::move(psi));
  }
  return out;
}

Observable fourier_mub(int d) {
  if (d < 2) throw InvalidInput("fourier_mub: d must be at least 2");
  Observable m;
  const double inv = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) {
    CVector psi(d);
    for (int j = 0; j < d; ++j) {
      // reduce the exponent first so the phase argument stays small
      const int k = (j * i) % d;
      psi(j) = inv * std::polar(1.0, 2.0 * std::numbers::pi * k / d);
    }
    m.effects.emplace_back(psi * psi.adjoint());
  }
  return m;
}

IncoherentObservable white_noise_family(int d, double alpha) {
  if (d < 1) throw InvalidInput("white_noise_family: d must be positive");
  const double lo = d > 1 ? -1.0 / (d - 1) : 0.0;
  if (!(alpha >= lo - 1e-12 && alpha <= 1.0 + 1e-12))
    throw InvalidInput("white_noise_family: alpha outside [-1/(d-1), 1]");
  IncoherentObservable p{RMatrix::Constant(d, d, (1.0 - alpha) / d)};
  p.table.diagonal().array() += alpha;
  return p;
}

Observable apply_gio(const CMatrix& c, const Observable& m) {
  require_coherence_matrix(c);
  if (c.rows() != m.dim()) throw DimensionMismatch("apply_gio: dimension mismatch");
  Observable out;
  for (const auto& e : m.effects) out.effects.push_back(hadamard(c, e));
  return out;
}

Observable to_observable(const IncoherentObservable& p) {
  Observable m;
  for (Index j = 0; j < p.table.cols(); ++j)
    m.effects.emplace_back(p.table.col(j).cast<cplx>().asDiagonal());
  return m;
}

IncoherentObservable diagonal_table(const Observable& m) {
  const Index d = m.dim();
  IncoherentObservable p{RMatrix(d, static_cast<Index>(m.outcomes()))};
  for (std::size_t j = 0; j < m.outcomes(); ++j)
    p.table.col(static_cast<Index>(j)) = m.effects[j].diagonal().real();
  return p;
}

}  // namespace coh
