#include "coh/model_spinboson.hpp"

#include "coh/witness.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace coh {

namespace {

void check_lambda(double lambda, const char* what) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidInput(std::string(what) + ": lambda must lie in [0,1]");
}

void check_alpha(double alpha, const char* what) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw InvalidInput(std::string(what) + ": alpha must lie in [0,1]");
}

// inverse of a decreasing function on [0,1]
template <class F>
double invert_decreasing(F f, double target) {
  double lo = 0.0, hi = 1.0;
  if (target >= f(0.0)) return 0.0;
  if (target <= f(1.0)) return 1.0;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double power_sq(double lambda, int k) { return std::pow(lambda, static_cast<double>(k) * k); }

// (a, b) -> (N - a, N - b)
CMatrix mirror(const CMatrix& a) { return a.reverse(); }

}  // namespace

CMatrix sb_full_matrix(int N, double lambda) {
  if (N < 1 || N > kMaxSpinBosonFullN)
    throw InvalidInput("sb_full_matrix: N must lie in [1, " + std::to_string(kMaxSpinBosonFullN) + "]");
  check_lambda(lambda, "sb_full_matrix");
  const Index d = Index{1} << N;
  CMatrix c(d, d);
  for (Index n = 0; n < d; ++n)
    for (Index m = 0; m < d; ++m) {
      const int k = std::popcount(static_cast<unsigned>(n)) - std::popcount(static_cast<unsigned>(m));
      c(n, m) = power_sq(lambda, k);
    }
  return c;
}

CMatrix sb_reduced_matrix(int N, double lambda) {
  if (N < 1) throw InvalidInput("sb_reduced_matrix: N must be positive");
  check_lambda(lambda, "sb_reduced_matrix");
  CMatrix c(N + 1, N + 1);
  for (int n = 0; n <= N; ++n)
    for (int m = 0; m <= N; ++m) c(n, m) = power_sq(lambda, n - m);
  return c;
}

double coin_weight(int N, int j) {
  if (j < 0 || j > N) return 0.0;
  // binom(N, j) / 2^N via lgamma keeps large N finite
  const double lg = std::lgamma(N + 1.0) - std::lgamma(j + 1.0) - std::lgamma(N - j + 1.0);
  return std::exp(lg - N * std::numbers::ln2);
}

BetaTable beta_table(int N, double alpha) {
  if (N < 1) throw InvalidInput("beta_table: N must be positive");
  check_alpha(alpha, "beta_table");
  BetaTable t;
  t.N = N;
  t.alpha = alpha;
  t.c.resize(N + 1);
  t.q.resize(N + 1);
  t.u.resize(N + 1);
  for (int k = 0; k <= N; ++k) {
    t.c(k) = coin_weight(N, k);
    t.q(k) = (1.0 - alpha) * t.c(k);
    t.u(k) = std::sqrt(t.q(k) * (alpha + t.q(k))) - t.q(k);
  }
  return t;
}

double theta3_half_pi(double lambda, double tol) {
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw InvalidInput("theta3_half_pi: lambda must lie in [0,1)");
  double sum = 1.0;
  for (int k = 1;; ++k) {
    const double term = power_sq(lambda, k);
    sum += (k % 2 ? -2.0 : 2.0) * term;
    if (power_sq(lambda, k + 1) / (1.0 - lambda) < tol || term == 0.0) break;
  }
  return sum;
}

SandwichBounds bounds_UL(int N, double lambda) {
  check_lambda(lambda, "bounds_UL");
  SandwichBounds b;
  auto beta01 = [&](double a) { return beta_table(N, a).beta(0, 1); };
  auto beta00 = [&](double a) { return beta_table(N, a).beta(0, 0); };
  // theta3(pi/2, lambda) -> 0 as lambda -> 1
  b.theta3 = lambda < 1.0 ? theta3_half_pi(lambda) : 0.0;
  b.U = invert_decreasing(beta01, lambda);
  b.L = invert_decreasing(beta00, 1.0 - b.theta3);
  return b;
}

double alpha2_closed(double lambda) {
  check_lambda(lambda, "alpha2_closed");
  const double l2 = lambda * lambda;
  return 1.0 - 4.0 * l2 / (3.0 + l2 * l2 + 2.0 * std::numbers::sqrt2 * (1.0 - l2));
}

double alpha2_inverse(double alpha) {
  check_alpha(alpha, "alpha2_inverse");
  return invert_decreasing(alpha2_closed, alpha);
}

IncoherentObservable sb_reduced_observable(int N, double alpha) {
  check_alpha(alpha, "sb_reduced_observable");
  const auto line = sb_reduced_line(N);
  return line.at(alpha);
}

NoiseLine sb_reduced_line(int N) {
  if (N < 1) throw InvalidInput("sb_reduced_line: N must be positive");
  RMatrix mix(N + 1, N + 1);
  for (int j = 0; j <= N; ++j) mix.col(j).setConstant(coin_weight(N, j));
  return NoiseLine{IncoherentObservable{RMatrix::Identity(N + 1, N + 1)}, IncoherentObservable{mix}};
}

IncoherentObservable sb_full_observable(int N, double alpha) {
  if (N < 1 || N > kMaxSpinBosonFullN) throw InvalidInput("sb_full_observable: N out of range");
  check_alpha(alpha, "sb_full_observable");
  const Index d = Index{1} << N;
  RMatrix t(d, N + 1);
  for (Index n = 0; n < d; ++n)
    for (int j = 0; j <= N; ++j)
      t(n, j) = (1.0 - alpha) * coin_weight(N, j) +
                (std::popcount(static_cast<unsigned>(n)) == j ? alpha : 0.0);
  return IncoherentObservable{t};
}

CovarianceAction sb_reversal_action(int N, double lambda) {
  check_lambda(lambda, "sb_reversal_action");
  // C is real symmetric Toeplitz, so the reversal acts with trivial phases
  SymmetryGroup g;
  g.dim = N + 1;
  g.perms.push_back(identity_permutation(N + 1));
  Permutation rev(static_cast<std::size_t>(N + 1));
  for (int k = 0; k <= N; ++k) rev[k] = N - k;
  g.perms.push_back(rev);
  g.phases.assign(2, CVector::Ones(N + 1));
  return natural_action(g);
}

ThresholdBracket alpha_N(int N, double lambda, const AlphaStarOptions& opts) {
  const CMatrix c = sb_reduced_matrix(N, lambda);
  const CovarianceAction act = sb_reversal_action(N, lambda);
  AlphaStarOptions o = opts;
  o.solver.group = &act;
  return alpha_star(c, sb_reduced_line(N), o);
}

std::vector<CurvePoint> alpha_N_curve(int N, const std::vector<double>& lambdas, bool with_sdp,
                                      const AlphaStarOptions& opts, Exec exec) {
  std::vector<CurvePoint> out(lambdas.size());
  for_each_index(lambdas.size(), exec, [&](std::size_t i) {
    CurvePoint pt;
    pt.lambda = lambdas[i];
    pt.bounds = bounds_UL(N, pt.lambda);
    if (with_sdp) {
      pt.alpha = alpha_N(N, pt.lambda, opts);
      pt.computed = true;
    }
    out[i] = pt;
  });
  return out;
}

double appendixH_lambda(int N, double alpha) {
  check_alpha(alpha, "appendixH_lambda");
  const double q0 = (1.0 - alpha) * coin_weight(N, 0);
  const double q1 = (1.0 - alpha) * coin_weight(N, 1);
  return std::sqrt(q0 * (alpha + q0)) + std::sqrt(q1 * (alpha + q1));
}

ThresholdBracket lambda_star(int N, double alpha, const LambdaSearchOptions& opts) {
  check_alpha(alpha, "lambda_star");
  const IncoherentObservable p = sb_reduced_observable(N, alpha);
  auto probe = [&](double lambda) {
    const CMatrix c = sb_reduced_matrix(N, lambda);
    const CovarianceAction act = sb_reversal_action(N, lambda);
    SolverOptions o = opts.solver;
    o.group = &act;
    return solve_gii(c, p, o).status;
  };
  double lo = 0.0, hi = 1.0;
  if (opts.use_seeds) {
    auto violated = [&](double l) { return !cor1_check(sb_reduced_matrix(N, l), p).empty(); };
    auto member = [&](double l) {
      return cor2_check(sb_reduced_matrix(N, l), p) == Cor2Status::member;
    };
    if (violated(1.0)) {
      double a = 0.0, b = 1.0;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (a + b);
        (violated(mid) ? b : a) = mid;
      }
      hi = b;
    }
    if (member(1.0)) {
      lo = 1.0;
    } else {
      double a = 0.0, b = 1.0;
      for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (a + b);
        (member(mid) ? a : b) = mid;
      }
      lo = a;
    }
    if (N >= 5) {
      const double lh = appendixH_lambda(N, alpha);
      const auto report = verify_gii(sb_reduced_matrix(N, lh), p, appendixH_gii(N, alpha), 1e-9);
      if (report.ok) lo = std::max(lo, lh);
    }
    lo = std::min(lo, hi);
  }
  if (lo >= 1.0) {
    ThresholdBracket b;
    b.lo = b.hi = b.value = 1.0;
    return b;
  }
  int extra = 0;
  if (hi >= 1.0) {
    const Status s = probe(1.0);
    ++extra;
    if (s == Status::feasible) {
      ThresholdBracket b;
      b.lo = b.hi = b.value = 1.0;
      b.calls = extra;
      return b;
    }
  }
  auto b = bisect_threshold(probe, lo, hi, opts.bisect_tol);
  b.calls += extra;
  return b;
}

GiiWitness appendixH_gii(int N, double alpha) {
  if (N < 5) throw InvalidInput("appendixH_gii: the construction needs N >= 5");
  check_alpha(alpha, "appendixH_gii");
  const Index d = N + 1;
  std::vector<double> q(static_cast<std::size_t>(N + 1));
  for (int k = 0; k <= N; ++k) q[k] = (1.0 - alpha) * coin_weight(N, k);
  const double u0 = std::sqrt(q[0] * (alpha + q[0]));
  const double u1 = std::sqrt(q[1] * (alpha + q[1]));
  const double lambda = u0 + u1;
  auto w_of = [&](int j) { return j % 2 ? u1 : u0; };

  auto diag = [&](double v) { return CMatrix(CMatrix::Identity(d, d) * v); };
  auto V = [&](int j, double w) {
    CMatrix m = diag(q[j]);
    m(j, j) += alpha;
    m(j - 1, j) = m(j, j - 1) = w;
    m(j, j + 1) = m(j + 1, j) = w;
    return m;
  };

  CMatrix g = sb_reduced_matrix(N, lambda);
  for (Index n = 0; n < d; ++n)
    for (Index m = 0; m < d; ++m)
      if (std::abs(n - m) < 2) g(n, m) = 0.0;

  std::vector<CMatrix> c(static_cast<std::size_t>(N + 1));
  c[0] = diag(q[0]);
  c[0](0, 0) += alpha;
  c[0](0, 1) = c[0](1, 0) = u0;
  c[1] = diag(q[1]);
  c[1](1, 1) += alpha;
  c[1](0, 1) = c[1](1, 0) = u1;
  c[1](1, 2) = c[1](2, 1) = u1;
  c[1](0, 2) = c[1](2, 0) = q[1];
  c[1](N - 2, N) = c[1](N, N - 2) = -q[1];
  c[N] = mirror(c[0]);
  c[N - 1] = mirror(c[1]);

  if (N % 2 == 0) {
    const int j0 = N / 2;
    for (int j = 2; j <= j0 - 1; ++j) c[j] = V(j, w_of(j));
    for (int j = 1; j <= j0 - 2; ++j) c[j0 + j] = mirror(c[j0 - j]);
    c[j0] = V(j0, w_of(j0)) + g;
  } else {
    const int j0 = (N - 1) / 2;
    for (int j = 2; j <= j0 - 1; ++j) c[j] = V(j, w_of(j));
    for (int j = 1; j <= j0 - 2; ++j) c[j0 + 1 + j] = mirror(c[j0 - j]);
    CMatrix dm = diag(q[j0]);
    const int a = j0 - 1;
    dm(a + 1, a + 1) += alpha;
    dm(a, a + 1) = dm(a + 1, a) = w_of(j0);
    dm(a + 1, a + 2) = dm(a + 2, a + 1) = 0.5 * lambda;
    c[j0] = dm + 0.5 * g;
    c[j0 + 1] = mirror(dm) + 0.5 * g;
  }
  GiiWitness w;
  w.provenance = Provenance::appendixH;
  w.blocks = std::move(c);
  return w;
}

double Asymptote::leading(double alpha) const { return k * std::sqrt(std::max(0.0, 1.0 - alpha)); }

double Asymptote::error_bound(double alpha) const {
  if (alpha <= 0.0) return std::numeric_limits<double>::infinity();
  const double v = std::max(0.0, 1.0 - alpha);
  return v + 1.5 * k * std::pow(v / alpha, 1.5);
}

Asymptote asymptote(int N) {
  if (N < 1) throw InvalidInput("asymptote: N must be positive");
  return Asymptote{N, (1.0 + std::sqrt(static_cast<double>(N))) / std::pow(2.0, 0.5 * N)};
}

}  // namespace coh
