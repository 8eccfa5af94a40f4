#include "coh/model_centro3.hpp"

#include <algorithm>
#include <cmath>

namespace coh {

namespace {

constexpr double kEdge = 1e-12;

void check_params(const Centro3Params& c) {
  if (!(c.lambda >= 0.0 && c.lambda <= 1.0 && c.gamma >= 0.0 && c.gamma <= 1.0))
    throw InvalidInput("centro3: lambda and gamma must lie in [0,1]");
  if (c.D() < -kEdge) throw InvalidInput("centro3: D = (1+gamma)/2 - lambda^2 is negative");
}

double sq(double x) { return x * x; }

}  // namespace

double centro3_h_minus(double w, const Centro3Params& c) {
  const double g1 = 1.0 + c.gamma;
  const double d = std::max(0.0, c.D());
  w = std::clamp(w, 0.0, g1);
  if (w <= 2.0 * d) return 0.0;
  return sq((c.lambda * std::sqrt(w) - std::sqrt(g1 - w) * std::sqrt(d)) / g1);
}

double centro3_h_plus(double w, const Centro3Params& c) {
  const double g1 = 1.0 + c.gamma;
  const double d = std::max(0.0, c.D());
  if (w >= 2.0 * c.lambda * c.lambda) return 0.5;
  w = std::max(0.0, w);
  return sq((c.lambda * std::sqrt(w) + std::sqrt(std::max(0.0, g1 - w)) * std::sqrt(d)) / g1);
}

RegionFunctions region_functions(double p, double q, const Centro3Params& c) {
  check_params(c);
  if (!(p >= -kEdge && q >= -kEdge && p + q <= 1.0 + kEdge))
    throw InvalidInput("region_functions: (p, q) outside the simplex");
  p = std::max(0.0, p);
  q = std::max(0.0, q);
  RegionFunctions f;
  f.w_plus = sq(std::sqrt(q) + std::sqrt(p));
  f.w_minus = sq(std::sqrt(q) - std::sqrt(p));
  f.w_zero = c.gamma - 1.0 + 2.0 * (q + p);
  f.w_zero_minus = f.w_plus <= 1.0 - c.gamma ? f.w_minus : f.w_zero;
  f.h_minus_at = centro3_h_minus(f.w_zero_minus, c);
  f.h_plus_at = centro3_h_plus(f.w_plus, c);
  return f;
}

bool centro3_membership(const RegionPoint& pt, const Centro3Params& c) {
  if (pt.r < -kEdge || pt.r > 0.5 + kEdge) return false;
  const auto f = region_functions(pt.p, pt.q, c);
  if (f.w_minus > 1.0 - c.gamma + kEdge) return false;
  return pt.r >= f.h_minus_at - kEdge && pt.r <= f.h_plus_at + kEdge;
}

CMatrix centro3_coherence(const Centro3Params& c) {
  check_params(c);
  CMatrix m(3, 3);
  m << 1.0, c.lambda, c.gamma, c.lambda, 1.0, c.lambda, c.gamma, c.lambda, 1.0;
  return m;
}

IncoherentObservable centro3_observable(const RegionPoint& pt) {
  const double s = 1.0 - pt.p - pt.q;
  RMatrix t(3, 3);
  t << pt.p, s, pt.q,            //
      pt.r, 1.0 - 2.0 * pt.r, pt.r,  //
      pt.q, s, pt.p;
  return IncoherentObservable{t};
}

RegionPoint centro3_line_point(double alpha, double t) {
  return RegionPoint{alpha + (1.0 - alpha) * t, (1.0 - alpha) * t, (1.0 - alpha) * t};
}

double centro3_line_alpha(double t, const Centro3Params& c) {
  check_params(c);
  if (!(t >= 0.25 * (1.0 - c.gamma) - kEdge && t <= 0.5 + kEdge))
    throw InvalidInput("centro3_line_alpha: closed form needs t in [(1-gamma)/4, 1/2]");
  const double d = std::max(0.0, c.D());
  const double den = 1.0 - t * (1.0 - c.gamma) + 2.0 * std::sqrt(std::max(0.0, 2.0 * t * (1.0 - 2.0 * t) * d));
  return 1.0 - c.lambda * c.lambda / den;
}

double centro3_line_alpha_numeric(double t, const Centro3Params& c, double tol) {
  check_params(c);
  if (!(t >= 0.0 && t <= 0.5)) throw InvalidInput("centro3_line_alpha_numeric: t outside [0, 1/2]");
  auto member = [&](double a) { return centro3_membership(centro3_line_point(a, t), c); };
  if (member(1.0)) return 1.0;
  if (!member(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (member(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<MeshSample> centro3_region_mesh(const Centro3Params& c, int resolution, Exec exec) {
  check_params(c);
  if (resolution < 2) throw InvalidInput("centro3_region_mesh: resolution must be at least 2");
  const int n = resolution;
  const double step = 1.0 / (n - 1);
  std::vector<std::pair<int, int>> pq;
  for (int i = 0; i < n; ++i)
    for (int j = 0; i + j < n; ++j) pq.emplace_back(i, j);
  std::vector<MeshSample> out(pq.size() * static_cast<std::size_t>(n));
  for_each_index(out.size(), exec, [&](std::size_t idx) {
    const auto [i, j] = pq[idx / static_cast<std::size_t>(n)];
    const int k = static_cast<int>(idx % static_cast<std::size_t>(n));
    MeshSample s;
    s.pt = RegionPoint{i * step, j * step, 0.5 * k * step};
    s.member = centro3_membership(s.pt, c);
    out[idx] = s;
  });
  return out;
}

}  // namespace coh
