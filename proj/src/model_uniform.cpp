#include "coh/model_uniform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coh {

namespace {

double lower_end(int d) { return -1.0 / (d - 1); }

void check_range(double x, int d, const char* what) {
  if (d < 2) throw InvalidInput(std::string(what) + ": d must be at least 2");
  if (!(x >= lower_end(d) - 1e-12 && x <= 1.0 + 1e-12))
    throw InvalidInput(std::string(what) + ": argument outside [-1/(d-1), 1]");
}

}  // namespace

double g_d(double alpha, int d) {
  check_range(alpha, d, "g_d");
  const double a = std::clamp(alpha, lower_end(d), 1.0);
  const double one = std::max(0.0, 1.0 - a);
  const double two = std::max(0.0, 1.0 + (d - 1) * a);
  return ((d - 2) * one + 2.0 * std::sqrt(one) * std::sqrt(two)) / d;
}

double g_d_inverse(double u, int d, Branch branch) {
  if (d < 2) throw InvalidInput("g_d_inverse: d must be at least 2");
  if (branch == Branch::positive) {
    if (!(u >= -1e-12 && u <= 1.0 + 1e-12))
      throw InvalidInput("g_d_inverse: u outside the positive-branch image [0,1]");
    return g_d(std::clamp(u, 0.0, 1.0), d);
  }
  const double lo = (d - 2.0) / (d - 1.0);
  if (!(u >= lo - 1e-12 && u <= 1.0 + 1e-12))
    throw InvalidInput("g_d_inverse: u outside the negative-branch image [(d-2)/(d-1),1]");
  const double v = std::clamp(u, lo, 1.0);
  const double one = 1.0 - v;
  const double two = 1.0 + (d - 1) * v;
  return ((d - 2) * one - 2.0 * std::sqrt(one) * std::sqrt(two)) / d;
}

CMatrix uniform_coherence(int d, double lambda) {
  check_range(lambda, d, "uniform_coherence");
  CMatrix c = CMatrix::Constant(d, d, cplx(lambda));
  c.diagonal().setOnes();
  return c;
}

double mub_alpha(double lambda, int d) { return g_d(lambda, d); }

AlphaInterval csym_uniform(int d, double lambda) {
  check_range(lambda, d, "csym_uniform");
  AlphaInterval iv;
  iv.hi = g_d(lambda, d);
  if (lambda < 0.0 || lambda <= (d - 2.0) / (d - 1.0))
    iv.lo = lower_end(d);
  else
    iv.lo = g_d_inverse(lambda, d, Branch::negative);
  return iv;
}

NoiseLine uniform_line(int d) {
  if (d < 2) throw InvalidInput("uniform_line: d must be at least 2");
  return NoiseLine{IncoherentObservable{RMatrix::Identity(d, d)},
                   IncoherentObservable{RMatrix::Constant(d, d, 1.0 / d)}};
}

GiiWitness corner_gii(int d) {
  if (d < 3) throw InvalidInput("corner_gii: d must be at least 3");
  const CVector phi = CVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  const CMatrix base = CMatrix::Identity(d, d) - phi * phi.adjoint();
  const double scale = std::sqrt(d / (d - 1.0));
  GiiWitness w;
  w.provenance = Provenance::corner;
  for (int j = 0; j < d; ++j) {
    CVector phij = -phi / std::sqrt(static_cast<double>(d));
    phij(j) += 1.0;
    phij *= scale;
    w.blocks.push_back((base - phij * phij.adjoint()) / (d - 2.0));
  }
  return w;
}

GiiWitness square_gii(int d, double alpha, double lambda) {
  if (d < 3) throw InvalidInput("square_gii: d must be at least 3");
  const double corner = lower_end(d);
  if (!(alpha >= corner - 1e-12 && alpha <= 1e-12 && lambda >= corner - 1e-12 && lambda <= 1e-12))
    throw InvalidInput("square_gii: (alpha, lambda) outside [-1/(d-1), 0]^2");
  const double s = std::clamp(alpha / corner, 0.0, 1.0);
  const double t = std::clamp(lambda / corner, 0.0, 1.0);

  const GiiWitness wc = corner_gii(d);
  const RMatrix pc = white_noise_family(d, corner).table;
  const CMatrix cc = uniform_coherence(d, corner);
  GiiWitness w;
  w.provenance = Provenance::convex_mix;
  for (int j = 0; j < d; ++j) {
    // (alpha_c, 0): identity pattern, blocks diag p(j); (0, lambda_c): C/d; (0, 0): I/d
    const CMatrix diag_pc = pc.col(j).cast<cplx>().asDiagonal();
    const CMatrix id = CMatrix::Identity(d, d) / static_cast<double>(d);
    w.blocks.push_back(s * t * wc.blocks[static_cast<std::size_t>(j)] + s * (1.0 - t) * diag_pc +
                       (1.0 - s) * t * cc / static_cast<double>(d) + (1.0 - s) * (1.0 - t) * id);
  }
  return w;
}

std::vector<MubRow> mub_sweep(int d, const std::vector<double>& lambdas,
                              const AlphaStarOptions& opts, Exec exec) {
  const NoiseLine line = uniform_line(d);
  std::vector<MubRow> out(lambdas.size());
  for_each_index(lambdas.size(), exec, [&](std::size_t i) {
    MubRow r;
    r.lambda = lambdas[i];
    const CMatrix c = uniform_coherence(d, r.lambda);
    r.cor1_bound = cor1_alpha_seed(c, line).alpha;
    r.cor2_bound = cor2_alpha_seed(c, line).alpha;
    r.alpha = alpha_star(c, line, opts);
    r.g = g_d(r.lambda, d);
    out[i] = r;
  });
  return out;
}

}  // namespace coh
