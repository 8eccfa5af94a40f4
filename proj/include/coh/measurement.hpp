#pragma once

// Observables (POVMs), incoherent observables and the coherence/Hellinger
// functionals taken relative to the computational basis.

#include "coh/hermitian.hpp"

#include <optional>
#include <string>
#include <vector>

namespace coh {

inline constexpr double kTolPovm = 1e-9;
// 1 - sum sqrt(p p) below this counts as d^2 = 1
inline constexpr double kAffinityZero = 1e-12;

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Observable {
  std::vector<CMatrix> effects;
  Index dim() const { return effects.empty() ? 0 : effects.front().rows(); }
  std::size_t outcomes() const { return effects.size(); }
};

/// Row n holds the outcome distribution p_n(.) of basis state |n>.
struct IncoherentObservable {
  RMatrix table;
  Index dim() const { return table.rows(); }
  std::size_t outcomes() const { return static_cast<std::size_t>(table.cols()); }
  double p(Index n, Index j) const { return table(n, j); }
};

struct Violation {
  std::string what;
  double magnitude = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_povm(const Observable& m, double tol = kTolPovm);
ValidationReport validate_incoherent(const IncoherentObservable& p, double tol = kTolPovm);
/// Hermitian, unit diagonal, PSD.
ValidationReport validate_coherence(const CMatrix& c);

void require_valid(const Observable& m);
void require_valid(const IncoherentObservable& p);
void require_coherence_matrix(const CMatrix& c);

/// Drops effects that are zero within tol; indices of dropped effects go to `removed`.
Observable strip_zero_effects(const Observable& m, std::vector<std::size_t>* removed = nullptr,
                              double tol = kTolPovm);

struct CoherenceReport {
  RMatrix coh;
  RMatrix hellinger_sq;
};

CoherenceReport coherence_report(const Observable& m);

/// a_nm = sum_j sqrt(p_n(j) p_m(j)); d^2_nm = 1 - a_nm.
RMatrix hellinger_affinity(const IncoherentObservable& p);
RMatrix hellinger_sq(const IncoherentObservable& p);

/// Entry-wise reciprocal of the Hellinger affinities; nullopt when some
/// off-diagonal affinity is below kAffinityZero.
std::optional<RMatrix> structure_matrix(const IncoherentObservable& p);

/// Rank-one blocks c_nm(j) = sqrt(p_n(j) p_m(j)).
std::vector<CMatrix> hellinger_gii(const IncoherentObservable& p);

struct CoherenceClass {
  enum class Kind { incoherent, maximally_coherent, generic };
  Kind kind = Kind::generic;
  // maximally coherent only: M(i) = weights(i) * d * |states[i]><states[i]|
  RVector weights;
  std::vector<CVector> states;
};

CoherenceClass classify_coherence(const Observable& m, double tol = 1e-9);

Observable fourier_mub(int d);

/// p_n(j) = alpha delta_nj + (1 - alpha)/d, alpha in [-1/(d-1), 1].
IncoherentObservable white_noise_family(int d, double alpha);

/// Effects C * M(i).
Observable apply_gio(const CMatrix& c, const Observable& m);

/// Diagonal effects P(j) = diag(p_.(j)).
Observable to_observable(const IncoherentObservable& p);

/// Reads the diagonal distribution table of an observable whose effects are diagonal.
IncoherentObservable diagonal_table(const Observable& m);

}  // namespace coh
