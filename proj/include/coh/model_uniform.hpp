#pragma once

// Uniform coherence c_nm = lambda (n != m) and the white-noise family P_alpha.

#include "coh/gii.hpp"
#include "coh/parallel.hpp"

#include <vector>

namespace coh {

/// ((d-2)(1-a) + 2 sqrt(1-a) sqrt(1+(d-1)a)) / d on [-1/(d-1), 1].
double g_d(double alpha, int d);

enum class Branch { positive, negative };

/// positive: alpha in [0,1] (g_d is an involution there);
/// negative: alpha in [-1/(d-1), 0], u in [(d-2)/(d-1), 1].
double g_d_inverse(double u, int d, Branch branch);

CMatrix uniform_coherence(int d, double lambda);

/// Exact threshold alpha_C = g_d(lambda).
double mub_alpha(double lambda, int d);

/// P_alpha for alpha in [lo, hi] are exactly the covariant members.
struct AlphaInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double a, double tol = 0.0) const { return a >= lo - tol && a <= hi + tol; }
};
AlphaInterval csym_uniform(int d, double lambda);

/// sharp = basis observable, mixture = uniform trivial observable.
NoiseLine uniform_line(int d);

/// Witness for C = d/(d-1) (I - |phi><phi|) and P_alpha at alpha = -1/(d-1).
GiiWitness corner_gii(int d);

/// Witness for uniform C[lambda] and P_alpha on the square
/// [-1/(d-1), 0]^2, mixed bilinearly from the corner and three trivial witnesses.
GiiWitness square_gii(int d, double alpha, double lambda);

struct MubRow {
  double lambda = 0.0;
  double cor1_bound = 1.0;  // smallest alpha violating the Hellinger condition
  double cor2_bound = 0.0;  // largest alpha certified by the Schur condition
  ThresholdBracket alpha;
  double g = 1.0;           // g_d(lambda)
};

/// Threshold of the white-noise line against uniform C[lambda] for every lambda.
std::vector<MubRow> mub_sweep(int d, const std::vector<double>& lambdas,
                              const AlphaStarOptions& opts = {}, Exec exec = Exec::parallel);

}  // namespace coh
