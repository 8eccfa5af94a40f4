#pragma once

// Genuinely incoherent instruments: witnesses, the alternating-projection
// feasibility solver and threshold bisection along noise lines.

#include "coh/measurement.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace coh {

struct CovarianceAction;

enum class Provenance { solver, schur, corner, appendixH, convex_mix };
std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Blocks C(j) >= 0 with sum_j C(j) = C and diag C(j) = p(j).
struct GiiWitness {
  std::vector<CMatrix> blocks;
  Provenance provenance = Provenance::solver;
  Index dim() const { return blocks.empty() ? 0 : blocks.front().rows(); }
};

enum class Status { feasible, infeasible, unknown };
std::string to_string(Status s);

struct FeasibilityVerdict {
  Status status = Status::unknown;
  double residual = std::numeric_limits<double>::infinity();
  long iterations = 0;
  std::optional<GiiWitness> witness;
};

enum class Method { dykstra, douglas_rachford };

struct SolverOptions {
  long max_iters = 200000;
  double feas_tol = 1e-8;
  double infeas_threshold = 1e-6;
  long stall_window = 500;
  double stall_rel_change = 1e-12;
  Method method = Method::douglas_rachford;
  // Optional symmetry; P must be covariant under it.
  const CovarianceAction* group = nullptr;
};

/// Projection splitting (Douglas-Rachford or Dykstra) between the product PSD
/// cone and the affine set of the witness constraints. Feasible once the
/// affine iterate lies within feas_tol/10 of the cone, so the returned witness
/// verifies at that tolerance. Infeasible on a separating certificate from
/// the iterates, or once the gap stalls above infeas_threshold.
FeasibilityVerdict solve_gii(const CMatrix& c, const IncoherentObservable& p,
                             const SolverOptions& opts = {});

struct GiiViolation {
  enum class Kind { shape, hermitian, psd, sum, diagonal };
  Kind kind;
  std::size_t block = 0;  // psd, diagonal, hermitian
  Index n = 0, m = 0;     // sum, diagonal
  double magnitude = 0.0;
};

struct GiiReport {
  bool ok = true;
  double max_psd = 0.0;   // largest scaled negative eigenvalue
  double max_sum = 0.0;   // largest |sum_j c_nm(j) - c_nm|
  double max_diag = 0.0;  // largest |c_nn(j) - p_n(j)|
  std::vector<GiiViolation> violations;
  std::string summary() const;
};

GiiReport verify_gii(const CMatrix& c, const IncoherentObservable& p, const GiiWitness& w,
                     double tol = 1e-8);

/// Effects G(i,j) stored at index i * cols + j.
struct JointObservable {
  std::size_t rows = 0, cols = 0;
  std::vector<CMatrix> effects;
  const CMatrix& at(std::size_t i, std::size_t j) const { return effects[i * cols + j]; }
  Observable as_observable() const { return Observable{effects}; }
  Observable marginal_rows() const;  // sum over j
  Observable marginal_cols() const;  // sum over i
};

/// G(i,j) = C(j) * Q(i); marginals C * Q(i) and P(j).
JointObservable joint_observable(const GiiWitness& w, const Observable& q);

/// P(alpha) = alpha * sharp + (1 - alpha) * mixture.
struct NoiseLine {
  IncoherentObservable sharp;
  IncoherentObservable mixture;
  IncoherentObservable at(double alpha) const;
};

/// Result of a monotone threshold search: lo is a certified member, hi a
/// certified non-member (or the end of the range). gray marks a band of
/// solver Unknowns inside the bracket; gray_at is the first of them.
struct ThresholdBracket {
  double value = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  bool gray = false;
  double gray_at = std::numeric_limits<double>::quiet_NaN();
  int calls = 0;
  double width() const { return hi - lo; }
};

/// Stops refining after max_unknown Unknown probes.
ThresholdBracket bisect_threshold(const std::function<Status(double)>& probe, double lo,
                                  double hi, double tol, int max_unknown = 3);

/// Corollary seeds along a line: the largest alpha certified by the Schur
/// condition and the smallest alpha where the Hellinger necessary condition fails.
struct AlphaSeed {
  double alpha = 0.0;
  bool certified = false;
};
AlphaSeed cor2_alpha_seed(const CMatrix& c, const NoiseLine& line);
AlphaSeed cor1_alpha_seed(const CMatrix& c, const NoiseLine& line);

struct AlphaStarOptions {
  double bisect_tol = 1e-4;
  bool use_seeds = true;
  SolverOptions solver;
};

/// max { alpha in [0,1] : line.at(alpha) admits a witness for c }.
ThresholdBracket alpha_star(const CMatrix& c, const NoiseLine& line,
                            const AlphaStarOptions& opts = {});

}  // namespace coh
