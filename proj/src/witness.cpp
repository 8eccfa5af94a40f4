#include "coh/witness.hpp"

#include <algorithm>
#include <cmath>

namespace coh {

std::vector<TradeoffViolation> tradeoff_witness(const Observable& m, const Observable& f) {
  if (m.dim() != f.dim()) throw DimensionMismatch("tradeoff_witness: dimension mismatch");
  const RMatrix coh = coherence_report(m).coh;
  const RMatrix dsq = coherence_report(f).hellinger_sq;
  std::vector<TradeoffViolation> out;
  for (Index n = 0; n < coh.rows(); ++n)
    for (Index k = n + 1; k < coh.rows(); ++k) {
      const double lhs = coh(n, k) + dsq(n, k);
      if (lhs - 1.0 > kWitnessExcess) out.push_back({n, k, lhs, lhs - 1.0});
    }
  return out;
}

SchurResult schur_sufficient(const Observable& m, const IncoherentObservable& p) {
  require_valid(m);
  require_valid(p);
  if (m.dim() != p.dim()) throw DimensionMismatch("schur_sufficient: dimension mismatch");
  SchurResult out;
  const auto s = structure_matrix(p);
  if (!s) return out;
  const CMatrix sc = s->cast<cplx>();

  std::vector<CMatrix> sm;
  double worst = std::numeric_limits<double>::infinity();
  bool psd = true;
  for (const auto& e : m.effects) {
    sm.push_back(hadamard(sc, e));
    const double lo = min_eigenvalue(sm.back());
    worst = std::min(worst, lo);
    if (lo < -scaled_tol(sm.back(), kPsdSlack)) psd = false;
  }
  out.min_eigenvalue = worst;
  if (!psd) {
    out.kind = SchurResult::Kind::inconclusive;
    return out;
  }

  const auto cp = hellinger_gii(p);
  JointObservable g;
  g.rows = m.outcomes();
  g.cols = p.outcomes();
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j) g.effects.push_back(hadamard(sm[i], cp[j]));

  const Observable rows = g.marginal_rows();
  const Observable cols = g.marginal_cols();
  double dev = 0.0;
  for (std::size_t i = 0; i < g.rows; ++i)
    dev = std::max(dev, (rows.effects[i] - m.effects[i]).cwiseAbs().maxCoeff());
  const Observable pm = to_observable(p);
  for (std::size_t j = 0; j < g.cols; ++j)
    dev = std::max(dev, (cols.effects[j] - pm.effects[j]).cwiseAbs().maxCoeff());
  if (dev > kTolPovm) {
    out.kind = SchurResult::Kind::inconclusive;
    return out;
  }
  out.kind = SchurResult::Kind::certified;
  out.joint = std::move(g);
  return out;
}

std::vector<std::pair<Index, Index>> cor1_check(const CMatrix& c, const IncoherentObservable& p) {
  if (c.rows() != p.dim()) throw DimensionMismatch("cor1_check: dimension mismatch");
  const RMatrix dsq = hellinger_sq(p);
  std::vector<std::pair<Index, Index>> out;
  for (Index n = 0; n < c.rows(); ++n)
    for (Index m = n + 1; m < c.rows(); ++m)
      if (dsq(n, m) - (1.0 - std::abs(c(n, m))) > kWitnessExcess) out.emplace_back(n, m);
  return out;
}

std::string to_string(Cor2Status s) {
  switch (s) {
    case Cor2Status::member: return "member";
    case Cor2Status::inconclusive: return "inconclusive";
    case Cor2Status::inapplicable: return "inapplicable";
  }
  return "inapplicable";
}

Cor2Status cor2_check(const CMatrix& c, const IncoherentObservable& p) {
  if (c.rows() != p.dim()) throw DimensionMismatch("cor2_check: dimension mismatch");
  const auto s = structure_matrix(p);
  if (!s) return Cor2Status::inapplicable;
  return is_psd(hadamard(c, s->cast<cplx>())) ? Cor2Status::member : Cor2Status::inconclusive;
}

GiiWitness build_gii_schur(const CMatrix& c, const IncoherentObservable& p) {
  require_coherence_matrix(c);
  require_valid(p);
  if (cor2_check(c, p) != Cor2Status::member)
    throw InvalidInput("build_gii_schur: C * S(P) is not PSD");
  const CMatrix cs = hadamard(c, structure_matrix(p)->cast<cplx>());
  GiiWitness w;
  w.provenance = Provenance::schur;
  for (const auto& b : hellinger_gii(p)) w.blocks.push_back(hadamard(cs, b));
  return w;
}

AlphaBounds alpha_bounds_dd(const Observable& m) {
  const auto rep = coherence_report(m);
  const Index d = m.dim();
  AlphaBounds b;
  b.g_lower = 0.0;
  for (Index n = 0; n < d; ++n)
    for (Index k = 0; k < d; ++k)
      if (n != k) b.g_lower = std::max(b.g_lower, rep.coh(n, k));
  double upper = 0.0;
  for (const auto& e : m.effects)
    for (Index n = 0; n < d; ++n) {
      const double pn = e(n, n).real();
      if (pn <= 0.0) return {b.g_lower, std::numeric_limits<double>::infinity()};
      double off = 0.0;
      for (Index k = 0; k < d; ++k)
        if (k != n) off += std::abs(e(n, k));
      upper = std::max(upper, off / pn);
    }
  b.g_upper = upper;
  return b;
}

Observable qubit_observable(const std::array<double, 3>& m) {
  CMatrix ms(2, 2);
  ms << cplx(m[2], 0.0), cplx(m[0], -m[1]), cplx(m[0], m[1]), cplx(-m[2], 0.0);
  const CMatrix id = CMatrix::Identity(2, 2);
  return Observable{{0.5 * (id + ms), 0.5 * (id - ms)}};
}

std::optional<double> qubit_alpha_exact(const std::array<double, 3>& m) {
  const double perp2 = m[0] * m[0] + m[1] * m[1];
  const double norm2 = perp2 + m[2] * m[2];
  if (norm2 > 1.0 + 1e-12) throw InvalidInput("qubit_alpha_exact: Bloch vector longer than one");
  const double denom = 1.0 - m[2] * m[2];
  if (denom <= 0.0) return std::nullopt;
  const double ratio = std::clamp(perp2 / denom, 0.0, 1.0);
  return std::sqrt(1.0 - ratio);
}

}  // namespace coh
