#pragma once

// Collective spin-boson dephasing: c_{n,m} = lambda^{(|n|-|m|)^2} on N qubits,
// its reduction to the N+1 excitation classes and the analytic bounds on
// the noise threshold of alpha * (class projectors) + (1-alpha) * coin toss.

#include "coh/gii.hpp"
#include "coh/parallel.hpp"
#include "coh/symmetry.hpp"

#include <vector>

namespace coh {

inline constexpr int kMaxSpinBosonFullN = 12;

CMatrix sb_full_matrix(int N, double lambda);
/// Toeplitz, first row lambda^{k^2} (0^0 = 1).
CMatrix sb_reduced_matrix(int N, double lambda);

/// binom(N, j) / 2^N
double coin_weight(int N, int j);

struct BetaTable {
  int N = 0;
  double alpha = 0.0;
  RVector c;  // coin-toss weights
  RVector q;  // (1 - alpha) c_k
  RVector u;  // sqrt(q_k (alpha + q_k)) - q_k
  double beta(int k, int k2) const { return 1.0 - alpha + u(k) + u(k2); }
};
BetaTable beta_table(int N, double alpha);

/// 1 + 2 sum_k (-1)^k lambda^{k^2}, truncated once the tail is below tol.
double theta3_half_pi(double lambda, double tol = 1e-16);

struct SandwichBounds {
  double U = 1.0;       // [beta_01]^{-1}(lambda)
  double L = 1.0;       // [beta_00]^{-1}(1 - theta3)
  double theta3 = 1.0;
};
SandwichBounds bounds_UL(int N, double lambda);

/// 1 - 4 l^2 / (3 + l^4 + 2 sqrt 2 (1 - l^2))
double alpha2_closed(double lambda);
/// lambda with alpha2_closed(lambda) = alpha.
double alpha2_inverse(double alpha);

/// Reduced observable alpha |j><j| + (1 - alpha) c_N(j) 1.
IncoherentObservable sb_reduced_observable(int N, double alpha);
NoiseLine sb_reduced_line(int N);
/// Full 2^N observable: class projectors mixed with the coin toss.
IncoherentObservable sb_full_observable(int N, double alpha);

/// {identity, k -> N - k} acting on indices and outcomes of the reduced problem.
CovarianceAction sb_reversal_action(int N, double lambda);

/// alpha_N(lambda) by bisection on the reduced covariant problem.
ThresholdBracket alpha_N(int N, double lambda, const AlphaStarOptions& opts = {});

struct CurvePoint {
  double lambda = 0.0;
  SandwichBounds bounds;
  ThresholdBracket alpha;  // empty bracket when not computed
  bool computed = false;
};

std::vector<CurvePoint> alpha_N_curve(int N, const std::vector<double>& lambdas, bool with_sdp,
                                      const AlphaStarOptions& opts = {},
                                      Exec exec = Exec::parallel);

/// max { lambda : reduced observable at alpha is a member for C[lambda] };
/// membership is downward closed in lambda by divisibility.
struct LambdaSearchOptions {
  double bisect_tol = 1e-5;
  bool use_seeds = true;
  SolverOptions solver;
};
ThresholdBracket lambda_star(int N, double alpha, const LambdaSearchOptions& opts = {});

/// u_0 + u_1 with u_k = sqrt(q_k (alpha + q_k)).
double appendixH_lambda(int N, double alpha);

/// Explicit covariant witness for (C[appendixH_lambda], reduced observable), N >= 5.
GiiWitness appendixH_gii(int N, double alpha);

struct Asymptote {
  int N = 1;
  double k = 0.0;  // (1 + sqrt N) / 2^{N/2}
  double leading(double alpha) const;
  /// 1 - alpha + 1.5 k ((1 - alpha)/alpha)^{3/2}
  double error_bound(double alpha) const;
};
Asymptote asymptote(int N);

}  // namespace coh
