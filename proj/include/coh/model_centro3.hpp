#pragma once

// Real centrosymmetric 3x3 coherence [[1,l,g],[l,1,l],[g,l,1]] and the exact
// membership region of the reversal-covariant observables P_(p,q,r).

#include "coh/gii.hpp"
#include "coh/parallel.hpp"

#include <vector>

namespace coh {

struct Centro3Params {
  double lambda = 0.0;
  double gamma = 0.0;
  double D() const { return 0.5 * (1.0 + gamma) - lambda * lambda; }
};

/// p + q <= 1, r in [0, 1/2].
/// P(0) = diag(p, r, q), P(1) = diag(s, 1-2r, s), P(2) = diag(q, r, p), s = 1-p-q.
struct RegionPoint {
  double p = 0.0, q = 0.0, r = 0.0;
};

struct RegionFunctions {
  double w_plus = 0.0, w_minus = 0.0, w_zero = 0.0, w_zero_minus = 0.0;
  double h_minus_at = 0.0;  // h_-(w_zero_minus)
  double h_plus_at = 0.0;   // h_+(w_plus)
};

double centro3_h_minus(double w, const Centro3Params& c);
double centro3_h_plus(double w, const Centro3Params& c);
RegionFunctions region_functions(double p, double q, const Centro3Params& c);

bool centro3_membership(const RegionPoint& pt, const Centro3Params& c);

CMatrix centro3_coherence(const Centro3Params& c);
IncoherentObservable centro3_observable(const RegionPoint& pt);

/// Point of alpha * basis + (1 - alpha) * trivial(t, 1-2t, t).
RegionPoint centro3_line_point(double alpha, double t);

/// Closed form, valid for t in [(1-gamma)/4, 1/2]; throws InvalidInput otherwise.
double centro3_line_alpha(double t, const Centro3Params& c);

/// Any t in [0, 1/2]: bisection on centro3_membership along the line.
double centro3_line_alpha_numeric(double t, const Centro3Params& c, double tol = 1e-13);

struct MeshSample {
  RegionPoint pt;
  bool member = false;
};

/// Grid p, q in {0, 1/(n-1), ..., 1} with p + q <= 1 and r in {0, ..., 1/2},
/// ordered by (p, q, r) index.
std::vector<MeshSample> centro3_region_mesh(const Centro3Params& c, int resolution,
                                            Exec exec = Exec::parallel);

}  // namespace coh
