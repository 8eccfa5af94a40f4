#pragma once

// Closed-form incompatibility witnesses and Schur-product certificates.

#include "coh/gii.hpp"

#include <array>
#include <limits>
#include <optional>
#include <vector>

namespace coh {

inline constexpr double kWitnessExcess = 1e-8;

struct TradeoffViolation {
  Index n = 0, m = 0;
  double lhs = 0.0;     // coh_nm(M) + d^2_nm(F)
  double excess = 0.0;  // lhs - 1
};

/// Pairs n < m with coh_nm(M) + d^2_nm(F) > 1 + kWitnessExcess. Any entry
/// certifies that M and F are incompatible.
std::vector<TradeoffViolation> tradeoff_witness(const Observable& m, const Observable& f);

struct SchurResult {
  enum class Kind { certified, inconclusive, inapplicable };
  Kind kind = Kind::inapplicable;
  std::optional<JointObservable> joint;  // certified only
  double min_eigenvalue = 0.0;           // smallest over S(P) * M(i)
};

/// If every S(P) * M(i) is PSD, G(i,j) = S(P) * M(i) * C^P(j) is a joint
/// observable of M and P (marginals are checked before returning).
SchurResult schur_sufficient(const Observable& m, const IncoherentObservable& p);

/// Pairs with d^2_nm(P) > 1 - |c_nm| + kWitnessExcess: P cannot be a member.
std::vector<std::pair<Index, Index>> cor1_check(const CMatrix& c, const IncoherentObservable& p);

enum class Cor2Status { member, inconclusive, inapplicable };
std::string to_string(Cor2Status s);

/// member iff C * S(P) is PSD.
Cor2Status cor2_check(const CMatrix& c, const IncoherentObservable& p);

/// C(j) = C * S(P) * C^P(j). Throws InvalidInput unless cor2_check is member.
GiiWitness build_gii_schur(const CMatrix& c, const IncoherentObservable& p);

struct AlphaBounds {
  double g_lower = 0.0;
  double g_upper = std::numeric_limits<double>::infinity();
};

/// max off-diagonal coherence <= g_d(alpha_M) <= max_{n,i} sum_{m != n} |M(i)_nm| / M(i)_nn.
AlphaBounds alpha_bounds_dd(const Observable& m);

/// M(0) = (I + m.sigma)/2, M(1) = (I - m.sigma)/2.
Observable qubit_observable(const std::array<double, 3>& m);

/// alpha_M = sqrt(1 - (m1^2 + m2^2)/(1 - m3^2)); nullopt when |m3| = 1.
/// Throws InvalidInput for |m| > 1.
std::optional<double> qubit_alpha_exact(const std::array<double, 3>& m);

}  // namespace coh
