#include "coh/measurement.hpp"
#include "coh/model_uniform.hpp"
#include "doctest.h"
#include "support.hpp"

#include <cmath>

using namespace coh;

namespace {

Observable sigma_z() {
  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  return Observable{{a, b}};
}

bool mentions(const ValidationReport& r, const std::string& what) {
  for (const auto& v : r.violations)
    if (v.what.find(what) != std::string::npos) return true;
  return false;
}

Observable noisy_mub(int d, double lambda) {
  Observable m = fourier_mub(d);
  for (auto& e : m.effects) e = lambda * e + (1.0 - lambda) * CMatrix::Identity(d, d) / d;
  return m;
}

}  // namespace

TEST_CASE("validate_povm") {
  CHECK(validate_povm(sigma_z()).ok());

  Observable m = sigma_z();
  for (auto& e : m.effects) e *= 0.9;
  auto r = validate_povm(m);
  CHECK_FALSE(r.ok());
  CHECK(mentions(r, "sum to identity"));
  CHECK(r.violations.front().magnitude == doctest::Approx(0.1));

  Observable neg = sigma_z();
  neg.effects[0](1, 1) = -0.01;
  neg.effects[1](1, 1) = 1.01;
  r = validate_povm(neg);
  CHECK(mentions(r, "negative eigenvalue"));

  Observable z = sigma_z();
  z.effects.push_back(CMatrix::Zero(2, 2));
  r = validate_povm(z);
  CHECK(r.ok());
  CHECK(r.warnings.size() == 1);
  std::vector<std::size_t> removed;
  CHECK(strip_zero_effects(z, &removed).outcomes() == 2);
  CHECK(removed == std::vector<std::size_t>{2});
}

TEST_CASE("validate_incoherent and coherence") {
  CHECK(validate_incoherent(white_noise_family(3, 0.4)).ok());
  RMatrix t(2, 2);
  t << 0.5, 0.6, 0.5, 0.5;
  CHECK_FALSE(validate_incoherent(IncoherentObservable{t}).ok());
  t << -0.1, 1.1, 0.5, 0.5;
  CHECK_FALSE(validate_incoherent(IncoherentObservable{t}).ok());
  CHECK(validate_coherence(uniform_coherence(4, 0.3)).ok());
  CMatrix c = uniform_coherence(3, 0.3);
  c(0, 0) = 0.9;
  CHECK_FALSE(validate_coherence(c).ok());
  CMatrix notpsd = CMatrix::Identity(3, 3);
  notpsd(0, 1) = notpsd(1, 0) = 0.9;
  notpsd(0, 2) = notpsd(2, 0) = -0.9;
  CHECK_FALSE(validate_coherence(notpsd).ok());
}

TEST_CASE("coherence_report basics") {
  const auto basis = coherence_report(to_observable(white_noise_family(4, 1.0)));
  for (Index n = 0; n < 4; ++n)
    for (Index m = 0; m < 4; ++m) {
      CHECK(basis.coh(n, m) == doctest::Approx(n == m ? 1.0 : 0.0));
      CHECK(basis.hellinger_sq(n, m) == doctest::Approx(n == m ? 0.0 : 1.0));
    }

  const auto noisy = coherence_report(noisy_mub(5, 0.35));
  for (Index n = 0; n < 5; ++n)
    for (Index m = 0; m < 5; ++m)
      if (n != m) CHECK(noisy.coh(n, m) == doctest::Approx(0.35).epsilon(1e-12));

  const RMatrix d2 = hellinger_sq(white_noise_family(2, 0.6));
  CHECK(d2(0, 1) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("structure_matrix") {
  const auto trivial = structure_matrix(white_noise_family(3, 0.0));
  REQUIRE(trivial);
  CHECK((*trivial - RMatrix::Ones(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);

  const auto s = structure_matrix(white_noise_family(3, 0.5));
  REQUIRE(s);
  CHECK((*s)(0, 1) == doctest::Approx(1.0 / g_d(0.5, 3)).epsilon(1e-13));
  CHECK((*s)(0, 1) == doctest::Approx(1.2).epsilon(1e-13));
  CHECK((*s)(2, 2) == 1.0);

  CHECK_FALSE(structure_matrix(white_noise_family(3, 1.0)));
}

TEST_CASE("hellinger_gii") {
  const auto basis = hellinger_gii(white_noise_family(3, 1.0));
  for (int j = 0; j < 3; ++j) {
    CMatrix e = CMatrix::Zero(3, 3);
    e(j, j) = 1.0;
    CHECK((basis[j] - e).norm() <= 1e-15);
  }

  RMatrix t(2, 3);
  t << 0.2, 0.5, 0.3, 0.6, 0.1, 0.3;
  const auto q = hellinger_gii(IncoherentObservable{t});
  for (int j = 0; j < 3; ++j) CHECK(q[j](0, 1).real() == doctest::Approx(std::sqrt(t(0, j) * t(1, j))));

  test::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = test::random_table(rng, 4, 5);
    const auto blocks = hellinger_gii(p);
    CMatrix sum = CMatrix::Zero(4, 4);
    for (const auto& b : blocks) {
      sum += b;
      CHECK(test::oracle_min_eig(b) >= -1e-12);
    }
    const RMatrix d2 = coherence_report(to_observable(p)).hellinger_sq;
    CHECK((sum.real() - (RMatrix::Ones(4, 4) - d2)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("classify_coherence") {
  CHECK(classify_coherence(sigma_z()).kind == CoherenceClass::Kind::incoherent);
  const auto mc = classify_coherence(fourier_mub(5));
  REQUIRE(mc.kind == CoherenceClass::Kind::maximally_coherent);
  for (Index i = 0; i < 5; ++i) CHECK(mc.weights(i) == doctest::Approx(0.2));
  const Observable f = fourier_mub(5);
  for (std::size_t i = 0; i < 5; ++i) {
    const CVector& psi = mc.states[i];
    for (Index n = 0; n < 5; ++n) CHECK(std::norm(psi(n)) == doctest::Approx(0.2));
    CHECK((mc.weights(static_cast<Index>(i)) * 5.0 * psi * psi.adjoint() - f.effects[i]).norm() <= 1e-12);
  }
  CHECK(classify_coherence(noisy_mub(4, 0.5)).kind == CoherenceClass::Kind::generic);
  for (int d = 2; d <= 16; ++d)
    CHECK(classify_coherence(fourier_mub(d)).kind == CoherenceClass::Kind::maximally_coherent);
}

TEST_CASE("fourier_mub") {
  const Observable f2 = fourier_mub(2);
  CMatrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  CHECK((f2.effects[0] - plus).norm() <= 1e-15);
  CHECK((f2.effects[1] - minus).norm() <= 1e-15);
  const Observable f3 = fourier_mub(3);
  CHECK(validate_povm(f3).ok());
  for (const auto& e : f3.effects)
    for (Index n = 0; n < 3; ++n) CHECK(e(n, n).real() == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(fourier_mub(1), InvalidInput);
}

TEST_CASE("white_noise_family") {
  CHECK((white_noise_family(3, 1.0).table - RMatrix::Identity(3, 3)).norm() == 0.0);
  CHECK((white_noise_family(3, 0.0).table - RMatrix::Constant(3, 3, 1.0 / 3.0)).norm() <= 1e-15);
  const auto neg = white_noise_family(3, -0.5);
  for (Index n = 0; n < 3; ++n)
    for (Index j = 0; j < 3; ++j) CHECK(neg.p(n, j) == doctest::Approx(n == j ? 0.0 : 0.5));
  CHECK_THROWS_AS(white_noise_family(3, -0.6), InvalidInput);
  CHECK_THROWS_AS(white_noise_family(3, 1.1), InvalidInput);
}

TEST_CASE("apply_gio") {
  const Observable f = fourier_mub(4);
  const Observable same = apply_gio(CMatrix::Ones(4, 4), f);
  for (std::size_t i = 0; i < 4; ++i) CHECK((same.effects[i] - f.effects[i]).norm() <= 1e-15);
  const Observable diag = apply_gio(CMatrix::Identity(4, 4), f);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK((diag.effects[i] - CMatrix(f.effects[i].diagonal().asDiagonal())).norm() <= 1e-15);
  const Observable noisy = apply_gio(uniform_coherence(4, 0.3), f);
  const Observable ref = noisy_mub(4, 0.3);
  for (std::size_t i = 0; i < 4; ++i) CHECK((noisy.effects[i] - ref.effects[i]).norm() <= 1e-14);
  CHECK_THROWS_AS(apply_gio(CMatrix::Identity(3, 3), f), DimensionMismatch);
}

TEST_CASE("randomized coherence inequalities") {
  test::Rng rng(12);
  for (int t = 0; t < 1000; ++t) {
    const Index d = 2 + static_cast<Index>(rng() % 5);
    const Observable m = test::random_povm(rng, d, 2 + static_cast<int>(rng() % 4));
    const auto r = coherence_report(m);
    for (Index n = 0; n < d; ++n)
      for (Index k = 0; k < d; ++k) {
        CHECK(r.coh(n, k) >= -1e-12);
        CHECK(r.coh(n, k) <= 1.0 - r.hellinger_sq(n, k) + 1e-9);
      }
    // triangle inequality for d_nm
    const RMatrix dist = r.hellinger_sq.cwiseMax(0.0).cwiseSqrt();
    for (Index a = 0; a < d; ++a)
      for (Index b = 0; b < d; ++b)
        for (Index c = 0; c < d; ++c) CHECK(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-9);
    // coh(C * M) = |C| coh(M)
    const CMatrix c = test::random_coherence(rng, d);
    const RMatrix lhs = coherence_report(apply_gio(c, m)).coh;
    CHECK((lhs - c.cwiseAbs().cwiseProduct(r.coh)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}
