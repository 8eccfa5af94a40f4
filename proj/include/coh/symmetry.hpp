#pragma once

// Unit-modulus coherence classes, reduction to class representatives, the
// phased permutation symmetry group of a coherence matrix and covariance.

#include "coh/gii.hpp"
#include "coh/parallel.hpp"

#include <vector>

namespace coh {

inline constexpr double kClassTol = 1e-9;
inline constexpr int kMaxSymDim = 8;

/// perm[n] is the image of n.
using Permutation = std::vector<int>;

Permutation identity_permutation(int n);
Permutation compose(const Permutation& a, const Permutation& b);  // a after b
Permutation inverse(const Permutation& a);

struct ClassPartition {
  std::vector<std::vector<int>> classes;  // ordered by smallest member
  std::vector<int> class_of;
  std::size_t size() const { return classes.size(); }
};

/// n ~ m iff |c_nm| = 1 within tol. Throws InvalidInput if the relation is
/// not transitive.
ClassPartition coherence_classes(const CMatrix& c, double tol = kClassTol);

/// C = D * (L Cr L^H) with D_nm = phases(n) conj(phases(m)).
struct Reduction {
  CMatrix reduced;
  ClassPartition partition;
  CVector phases;
  std::vector<int> representatives;

  /// d x n_C indicator matrix of the classes.
  RMatrix lift_matrix() const;
  CMatrix reconstruct() const;
  IncoherentObservable lift(const IncoherentObservable& reduced_p) const;
  GiiWitness lift(const GiiWitness& reduced_w) const;
  /// Rows of representatives, provided every class has identical rows.
  std::optional<IncoherentObservable> restrict(const IncoherentObservable& full,
                                               double tol = kTolPovm) const;
};

/// Representatives are the smallest index per class. The reduced matrix is
/// gauge-fixed so its first row is real and nonnegative.
Reduction reduce(const CMatrix& c);

/// Elements pi with phases u_n(pi) such that W_pi |n> = u_n(pi) |pi(n)>
/// leaves C invariant: c_{pi(n) pi(m)} = u_n c_nm conj(u_m).
struct SymmetryGroup {
  Index dim = 0;
  std::vector<Permutation> perms;
  std::vector<CVector> phases;
  std::size_t order() const { return perms.size(); }
};

/// Brute force over S_d (d <= kMaxSymDim); all entries of c must be nonzero.
SymmetryGroup symmetry_group(const CMatrix& c, Exec exec = Exec::parallel);

/// Closes the given permutations under composition, computes phases from c
/// (anchor index 0) and checks invariance. Throws InvalidInput when a
/// permutation is not a symmetry or phases cannot be derived.
SymmetryGroup group_from_permutations(const CMatrix& c, const std::vector<Permutation>& gens);

/// Phases of pi from the anchor column; nullopt if pi is not a symmetry.
std::optional<CVector> symmetry_phases(const CMatrix& c, const Permutation& pi,
                                       double tol = kClassTol);

bool is_closed(const SymmetryGroup& g);

/// Induced permutation of class labels for every group element.
std::vector<Permutation> class_homomorphism(const SymmetryGroup& g, const ClassPartition& part);

/// Group acting on basis indices together with its action on outcomes.
struct CovarianceAction {
  SymmetryGroup group;
  std::vector<Permutation> outcome_perms;
};

/// Outcomes labelled by basis indices, acted on by the same permutation.
CovarianceAction natural_action(const SymmetryGroup& g);

/// phi(G) acting on the reduced matrix, outcomes = class labels.
CovarianceAction reduced_action(const Reduction& red, const SymmetryGroup& full);

/// p_{pi^-1(n)}(j) = p_n(phi(pi)(j)) for every element.
bool is_covariant(const IncoherentObservable& p, const CovarianceAction& act,
                  double tol = kTolPovm);

/// (1/|G|) sum_pi W_pi^H C(phi(pi)(j)) W_pi.
std::vector<CMatrix> covariant_average(const std::vector<CMatrix>& blocks,
                                       const CovarianceAction& act);

/// W X W^H for a group element.
CMatrix act_on(const CMatrix& x, const Permutation& pi, const CVector& u);

struct SymMembership {
  Reduction reduction;
  FeasibilityVerdict verdict;          // on the reduced problem
  std::optional<GiiWitness> witness;   // lifted to full dimension
  IncoherentObservable lifted_p;
  std::size_t group_order = 1;         // order of the reduced covariance group
};

/// Membership of the lifted observable: reduce C, solve on (Cr, pr) with
/// phi(G_C) covariance, lift. pr lives on the class labels and must be
/// covariant. When G_C cannot be derived (zero entries, large d) the trivial
/// group is used.
SymMembership check_sym_membership(const CMatrix& c, const IncoherentObservable& pr,
                                   const SolverOptions& opts = {});

struct FullMembership {
  Status status = Status::unknown;
  std::vector<std::pair<Index, Index>> not_adapted;  // pairs breaking |c_nm| = 1 classes
  std::optional<SymMembership> sym;
};

/// Full-dimension entry point: rejects observables not adapted to the classes
/// (those violate the Hellinger necessary condition), else restricts and
/// calls check_sym_membership.
FullMembership check_sym_membership_full(const CMatrix& c, const IncoherentObservable& p,
                                         const SolverOptions& opts = {});

}  // namespace coh
