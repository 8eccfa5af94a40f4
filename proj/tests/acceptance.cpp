// One PASS/FAIL line per acceptance criterion.

#include "coh/model_centro3.hpp"
#include "coh/model_spinboson.hpp"
#include "coh/model_uniform.hpp"
#include "coh/symmetry.hpp"
#include "coh/witness.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

using namespace coh;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;
std::vector<int> only;  // criteria named on the command line; empty runs all

void run(int id, const char* name, const std::function<Outcome()>& f) {
  if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) return;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s [%d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<double> grid9() {
  std::vector<double> g;
  for (int k = 1; k <= 9; ++k) g.push_back(k / 10.0);
  return g;
}

AlphaStarOptions unseeded() {
  AlphaStarOptions o;
  o.use_seeds = false;
  return o;
}

Outcome mub_threshold() {
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d) {
    const auto rows = mub_sweep(d, grid9(), unseeded());
    for (const auto& r : rows) worst = std::max(worst, std::abs(r.alpha.value - g_d(r.lambda, d)));
  }
  return {worst <= 1e-3, fmt("max |alpha_star - g_d| = %.2e over d=2..5, 9 lambdas", worst)};
}

Outcome two_qubit_threshold() {
  double worst = 0.0;
  for (const auto& pt : alpha_N_curve(2, grid9(), true, unseeded()))
    worst = std::max(worst, std::abs(pt.alpha.value - alpha2_closed(pt.lambda)));
  const double at07 = alpha_N(2, 0.7, unseeded()).value;
  const bool ok = worst <= 1e-3 && std::abs(at07 - 0.5814) <= 1e-3;
  return {ok, fmt("max deviation %.2e, alpha_2(0.7) = %.6f", worst, at07)};
}

Outcome sandwich() {
  const double slack = 1e-6;
  int violations = 0, gray = 0, points = 0;
  for (int N : {2, 5, 10})
    for (const auto& pt : alpha_N_curve(N, grid9(), true, unseeded())) {
      ++points;
      gray += pt.alpha.gray;
      const auto& b = pt.bounds;
      // lo is a certified member and hi a certified non-member
      if (b.theta3 > b.L + slack || b.L > pt.alpha.hi + slack || pt.alpha.lo > b.U + slack) {
        ++violations;
        std::printf("  violation N=%d lambda=%.2f: theta3=%.6g L=%.6g [%.6g, %.6g] U=%.6g\n", N, pt.lambda,
                    b.theta3, b.L, pt.alpha.lo, pt.alpha.hi, b.U);
      }
    }
  return {violations == 0, fmt("%g violations in %g points (%g with gray bands)", violations, points, gray)};
}

Outcome toeplitz() {
  double worst = std::numeric_limits<double>::infinity();
  for (int N = 1; N <= 50; ++N)
    for (double l : grid9())
      worst = std::min(worst, test::oracle_min_eig(sb_reduced_matrix(N, l)) - theta3_half_pi(l));
  return {worst >= -1e-9, fmt("min over N<=50 of lambda_min - theta3 = %.3e", worst)};
}

Outcome constructive() {
  const double tol = 1e-8;
  int bad = 0, total = 0;
  for (int d = 3; d <= 8; ++d) {
    const double a = -1.0 / (d - 1);
    bad += !verify_gii(uniform_coherence(d, a), white_noise_family(d, a), corner_gii(d), tol).ok;
    ++total;
  }
  test::Rng rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    RMatrix tab(2, 2);
    const double p = u(rng), q = u(rng);
    tab << p, 1 - p, q, 1 - q;
    const IncoherentObservable obs{tab};
    const double gamma = std::sqrt(p * q) + std::sqrt((1 - p) * (1 - q));
    // includes the boundary |c| = gamma
    const double c = (t % 5 == 0 ? 1.0 : u(rng)) * gamma * (t % 2 ? 1.0 : -1.0);
    CMatrix cm(2, 2);
    cm << 1.0, c, c, 1.0;
    bad += !verify_gii(cm, obs, build_gii_schur(cm, obs), tol).ok;
    ++total;
  }
  for (int N = 5; N <= 12; ++N)
    for (double a : {0.5, 0.7, 0.9, 0.95, 0.99}) {
      const double l = appendixH_lambda(N, a);
      bad += !verify_gii(sb_reduced_matrix(N, l), sb_reduced_observable(N, a), appendixH_gii(N, a), tol).ok;
      ++total;
    }
  return {bad == 0, fmt("%g of %g witnesses fail verification", bad, total)};
}

Outcome region_oracle() {
  test::Rng rng(102);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int agree = 0, unknown = 0, disagree = 0, near = 0;
  auto draw_params = [&] {
    for (;;) {
      Centro3Params c{u(rng), u(rng)};
      if (c.D() >= 0.0) return c;
    }
  };
  auto draw_point = [&] {
    for (;;) {
      RegionPoint pt{u(rng), u(rng), 0.5 * u(rng)};
      if (pt.p + pt.q <= 1.0) return pt;
    }
  };
  auto check = [&](const Centro3Params& c, const RegionPoint& pt) {
    const bool in = centro3_membership(pt, c);
    const auto v = solve_gii(centro3_coherence(c), centro3_observable(pt));
    if (v.status == Status::unknown) ++unknown;
    else if ((v.status == Status::feasible) == in) ++agree;
    else ++disagree;
  };
  for (int t = 0; t < 200; ++t) check(draw_params(), draw_point());
  // points just inside and outside the boundary along rays from the trivial centre
  const RegionPoint centre{1.0 / 3, 1.0 / 3, 1.0 / 3};
  while (near < 200) {
    const auto c = draw_params();
    const auto far = draw_point();
    auto at = [&](double s) {
      return RegionPoint{centre.p + s * (far.p - centre.p), centre.q + s * (far.q - centre.q),
                         centre.r + s * (far.r - centre.r)};
    };
    if (centro3_membership(far, c)) continue;
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 60; ++k) {
      const double mid = 0.5 * (lo + hi);
      (centro3_membership(at(mid), c) ? lo : hi) = mid;
    }
    for (double off : {-1e-3, 1e-3}) {
      const double s = std::clamp(lo + off, 0.0, 1.0);
      check(c, at(s));
      ++near;
    }
  }
  return {disagree == 0, fmt("%g agree, %g unknown, %g disagree", agree, unknown, disagree) +
                             " (" + std::to_string(near) + " near-boundary)"};
}

Outcome qubit_bracket() {
  test::Rng rng(103);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad = 0, equatorial = 0;
  for (int t = 0; t < 500; ++t) {
    std::array<double, 3> m{n(rng), n(rng), t % 4 == 0 ? 0.0 : n(rng)};
    const double s = std::cbrt(u(rng)) / std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    for (double& x : m) x *= s;
    const auto exact = qubit_alpha_exact(m);
    if (!exact) continue;
    const double g = g_d(*exact, 2);
    const auto b = alpha_bounds_dd(qubit_observable(m));
    if (b.g_lower > g + 1e-12 || g > b.g_upper + 1e-12) ++bad;
    if (std::abs(m[2]) < 1e-9) {
      ++equatorial;
      if (b.g_upper - b.g_lower >= 1e-9) ++bad;
    }
  }
  return {bad == 0, fmt("%g failures (%g with m3 = 0)", bad, equatorial)};
}

Outcome properties() {
  test::Rng rng(104);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int trials = 1000;
  int schur = 0, triangle = 0, cohmono = 0, downward = 0, idem = 0, preserve = 0;
  int downward_pairs = 0, preserved = 0;

  for (int t = 0; t < trials; ++t) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const CMatrix a = test::random_psd(rng, d, 1 + static_cast<int>(rng() % d));
    const CMatrix b = test::random_psd(rng, d, 1 + static_cast<int>(rng() % d));
    if (test::oracle_min_eig(hadamard(a, b)) < -1e-10 * (1.0 + a.norm() * b.norm())) ++schur;
  }

  for (int t = 0; t < trials; ++t) {
    const int d = 3 + static_cast<int>(rng() % 4);
    const auto r = coherence_report(test::random_povm(rng, d, 2 + static_cast<int>(rng() % 4)));
    const RMatrix dist = r.hellinger_sq.cwiseMax(0.0).cwiseSqrt();
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z)
          if (dist(x, z) > dist(x, y) + dist(y, z) + 1e-12) {
            ++triangle;
            x = y = z = d;
          }
  }

  for (int t = 0; t < trials; ++t) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const CMatrix c = test::random_coherence(rng, d);
    const Observable m = test::random_povm(rng, d, 2 + static_cast<int>(rng() % 3));
    const RMatrix lhs = coherence_report(apply_gio(c, m)).coh;
    const RMatrix rhs = c.cwiseAbs().cwiseProduct(coherence_report(m).coh);
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-12) ++cohmono;
  }

  for (int t = 0; t < trials; ++t) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const CMatrix c = test::random_coherence(rng, d);
    const RMatrix row = test::random_table(rng, 1, d).table;
    const NoiseLine line{white_noise_family(d, 1.0), IncoherentObservable{row.replicate(d, 1)}};
    double a1 = u(rng), a2 = u(rng);
    if (a1 > a2) std::swap(a1, a2);
    const auto hi = solve_gii(c, line.at(a2));
    if (hi.status != Status::feasible) continue;
    ++downward_pairs;
    if (solve_gii(c, line.at(a1)).status == Status::infeasible) ++downward;
  }

  for (int t = 0; t < trials; ++t) {
    const int N = 2 + static_cast<int>(rng() % 4);
    const double l = u(rng);
    const auto act = sb_reversal_action(N, l);
    std::vector<CMatrix> blocks;
    for (int j = 0; j <= N; ++j) blocks.push_back(test::random_hermitian(rng, N + 1));
    const auto once = covariant_average(blocks, act);
    const auto twice = covariant_average(once, act);
    for (int j = 0; j <= N; ++j)
      if ((once[j] - twice[j]).norm() > 1e-12 * (1.0 + once[j].norm())) {
        ++idem;
        break;
      }
    const CMatrix c = sb_reduced_matrix(N, l);
    const auto p = sb_reduced_observable(N, u(rng));
    const auto v = solve_gii(c, p);
    if (v.status != Status::feasible) continue;
    ++preserved;
    const GiiWitness avg{covariant_average(v.witness->blocks, act), Provenance::solver};
    if (!verify_gii(c, p, avg, 1e-8).ok) ++preserve;
  }

  const bool ok = schur + triangle + cohmono + downward + idem + preserve == 0;
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "failures: schur %d, triangle %d, coh(C*M) %d, downward %d/%d, idempotence %d, "
                "witness preservation %d/%d (%d trials each)",
                schur, triangle, cohmono, downward, downward_pairs, idem, preserve, preserved, trials);
  return {ok, buf};
}

Outcome asymptote_check() {
  LambdaSearchOptions o;
  o.use_seeds = false;
  bool ok = true;
  std::string detail;
  for (int N : {2, 6, 10}) {
    const auto as = asymptote(N);
    for (double a : {0.95, 0.99}) {
      const auto b = lambda_star(N, a, o);
      const double lead = as.leading(a);
      const double err = std::max(std::abs(b.lo - lead), std::abs(b.hi - lead));
      const double bound = as.error_bound(a);
      ok = ok && err <= bound;
      char buf[128];
      std::snprintf(buf, sizeof buf, "%sN=%d a=%.2f: %.2e<=%.2e", detail.empty() ? "" : ", ", N, a, err,
                    bound);
      detail += buf;
    }
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  run(1, "noisy-MUB threshold", mub_threshold);
  run(2, "two-qubit spin-boson threshold", two_qubit_threshold);
  run(3, "spin-boson sandwich", sandwich);
  run(4, "Toeplitz spectral bound", toeplitz);
  run(5, "constructive witnesses", constructive);
  run(6, "centrosymmetric region vs solver", region_oracle);
  run(7, "qubit bracket", qubit_bracket);
  run(8, "property suites", properties);
  run(9, "asymptotic threshold", asymptote_check);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
