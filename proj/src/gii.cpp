#include "coh/gii.hpp"

#include "coh/detail/jacobi.hpp"
#include "coh/symmetry.hpp"
#include "coh/witness.hpp"

#include <cmath>
#include <sstream>

namespace coh {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::solver: return "solver";
    case Provenance::schur: return "schur";
    case Provenance::corner: return "corner";
    case Provenance::appendixH: return "appendixH";
    case Provenance::convex_mix: return "convex_mix";
  }
  return "solver";
}

Provenance provenance_from_string(const std::string& s) {
  for (auto p : {Provenance::solver, Provenance::schur, Provenance::corner,
                 Provenance::appendixH, Provenance::convex_mix})
    if (to_string(p) == s) return p;
  throw InvalidInput("unknown witness provenance '" + s + "'");
}

std::string to_string(Status s) {
  switch (s) {
    case Status::feasible: return "feasible";
    case Status::infeasible: return "infeasible";
    case Status::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

using detail::Mat;

constexpr long kCertifyEvery = 25;

template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
S from_cplx(cplx z) {
  if constexpr (std::is_same_v<S, double>) {
    return z.real();
  } else {
    return z;
  }
}

// Covariance data converted to the working scalar, plus the outcome orbits:
// only representative blocks are diagonalised, the rest are images under W.
template <class S>
struct Orbits {
  std::vector<Permutation> perms, outs;
  std::vector<Vec<S>> u;
  std::vector<int> reps;
  std::vector<int> rep_of;   // outcome -> its representative
  std::vector<int> carrier;  // outcome -> element g with outs[g][rep_of[j]] == j
};

template <class S>
Orbits<S> make_orbits(const CovarianceAction* act, std::size_t k) {
  Orbits<S> o;
  o.rep_of.assign(k, -1);
  o.carrier.assign(k, -1);
  if (!act) {
    for (std::size_t j = 0; j < k; ++j) {
      o.reps.push_back(static_cast<int>(j));
      o.rep_of[j] = static_cast<int>(j);
    }
    return o;
  }
  o.perms = act->group.perms;
  o.outs = act->outcome_perms;
  for (const auto& ph : act->group.phases) {
    Vec<S> v(ph.size());
    for (Index n = 0; n < ph.size(); ++n) v(n) = from_cplx<S>(ph(n));
    o.u.push_back(std::move(v));
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (o.rep_of[j] >= 0) continue;
    o.reps.push_back(static_cast<int>(j));
    for (std::size_t g = 0; g < o.outs.size(); ++g) {
      const int img = o.outs[g][j];
      if (o.rep_of[img] < 0) {
        o.rep_of[img] = static_cast<int>(j);
        o.carrier[img] = static_cast<int>(g);
      }
    }
    o.rep_of[j] = static_cast<int>(j);
  }
  return o;
}

// y = W x W^H: y(pi n, pi m) = u_n x_nm conj(u_m)
template <class S>
void apply_w(const Mat<S>& x, const Permutation& pi, const Vec<S>& u, Mat<S>& y) {
  const Index d = x.rows();
  y.resize(d, d);
  for (Index m = 0; m < d; ++m)
    for (Index n = 0; n < d; ++n)
      y(pi[n], pi[m]) = u(n) * x(n, m) * detail::conj_of(u(m));
}

// Fill non-representative blocks from their representatives.
template <class S>
void propagate(std::vector<Mat<S>>& blocks, const Orbits<S>& o) {
  if (o.perms.empty()) return;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (o.rep_of[j] == static_cast<int>(j)) continue;
    const int g = o.carrier[j];
    apply_w(blocks[static_cast<std::size_t>(o.rep_of[j])], o.perms[g], o.u[g], blocks[j]);
  }
}

// Group average of the representative blocks, then propagate.
template <class S>
void average(std::vector<Mat<S>>& blocks, const Orbits<S>& o) {
  if (o.perms.empty()) return;
  const Index d = blocks.front().rows();
  const double inv = 1.0 / static_cast<double>(o.perms.size());
  for (int r : o.reps) {
    Mat<S> acc = Mat<S>::Zero(d, d);
    for (std::size_t g = 0; g < o.perms.size(); ++g) {
      const Mat<S>& x = blocks[static_cast<std::size_t>(o.outs[g][r])];
      const auto& pi = o.perms[g];
      const auto& u = o.u[g];
      // (W^H X W)_nm = conj(u_n) X_{pi n, pi m} u_m
      for (Index m = 0; m < d; ++m)
        for (Index n = 0; n < d; ++n)
          acc(n, m) += detail::conj_of(u(n)) * x(pi[n], pi[m]) * u(m);
    }
    blocks[static_cast<std::size_t>(r)] = acc * inv;
  }
  propagate(blocks, o);
}

template <class S>
double min_eig(Mat<S> a) {
  Mat<S> v = Mat<S>::Identity(a.rows(), a.cols());
  detail::jacobi_sweeps<S>(a, v);
  return a.diagonal().real().minCoeff();
}

template <class S>
FeasibilityVerdict run_solver(const Mat<S>& c, const RMatrix& p, const SolverOptions& opts) {
  const Index d = c.rows();
  const std::size_t k = static_cast<std::size_t>(p.cols());
  const double accept = opts.feas_tol / 10.0;
  FeasibilityVerdict out;

  // Blocks whose diagonal entry vanishes must have a zero row; the
  // off-diagonal sum is shared among the blocks supporting both indices.
  Eigen::MatrixXi count = Eigen::MatrixXi::Zero(d, d);
  for (std::size_t j = 0; j < k; ++j)
    for (Index n = 0; n < d; ++n)
      for (Index m = 0; m < d; ++m)
        if (p(n, j) > 0.0 && p(m, j) > 0.0) ++count(n, m);
  double structural = 0.0;
  for (Index n = 0; n < d; ++n)
    for (Index m = n + 1; m < d; ++m)
      if (count(n, m) == 0) structural = std::max(structural, std::abs(c(n, m)));
  if (structural > opts.infeas_threshold) {
    out.status = Status::infeasible;
    out.residual = structural;
    return out;
  }
  if (structural > accept) {
    out.residual = structural;
    return out;
  }

  auto affine = [&](std::vector<Mat<S>>& x) {
    for (Index m = 0; m < d; ++m) {
      for (Index n = 0; n < m; ++n) {
        const int cnt = count(n, m);
        if (cnt == 0) {
          for (auto& b : x) b(n, m) = b(m, n) = S(0);
          continue;
        }
        S s(0);
        for (std::size_t j = 0; j < k; ++j)
          if (p(n, j) > 0.0 && p(m, j) > 0.0) s += x[j](n, m);
        const S r = (c(n, m) - s) / static_cast<double>(cnt);
        for (std::size_t j = 0; j < k; ++j) {
          if (p(n, j) > 0.0 && p(m, j) > 0.0) {
            x[j](n, m) += r;
            x[j](m, n) = detail::conj_of(x[j](n, m));
          } else {
            x[j](n, m) = x[j](m, n) = S(0);
          }
        }
      }
    }
    for (std::size_t j = 0; j < k; ++j)
      for (Index n = 0; n < d; ++n) x[j](n, n) = S(p(n, j));
  };

  const Orbits<S> orb = make_orbits<S>(opts.group, k);

  std::vector<Mat<S>> x(k, Mat<S>::Zero(d, d));
  for (std::size_t j = 0; j < k; ++j)
    for (Index m = 0; m < d; ++m)
      for (Index n = 0; n < d; ++n)
        if (n != m && count(n, m) > 0 && p(n, j) > 0.0 && p(m, j) > 0.0)
          x[j](n, m) = c(n, m) / static_cast<double>(count(n, m));
  affine(x);
  average(x, orb);

  auto finish = [&](Status s, double res, long it) {
    out.status = s;
    out.residual = res;
    out.iterations = it;
    if (s == Status::feasible) {
      GiiWitness w;
      w.provenance = Provenance::solver;
      for (auto& b : x) {
        CMatrix blk = b.template cast<cplx>();
        w.blocks.emplace_back(0.5 * (blk + blk.adjoint()));
      }
      out.witness = std::move(w);
    }
    return out;
  };

  // Dykstra: q holds the cone corrections. Douglas-Rachford: q is the
  // governing sequence, y = P_K(q), x = P_A(2y - q).
  const bool dr = opts.method == Method::douglas_rachford;
  std::vector<Mat<S>> basis(k), xbasis(k), y(k), q(k, Mat<S>::Zero(d, d));
  if (dr) q = x;
  Mat<S> z(d, d), pos(d, d), neg(d, d), work(d, d);

  // the initial point may already be a witness
  {
    double worst = 0.0;
    for (int r : orb.reps) {
      z = x[static_cast<std::size_t>(r)];
      detail::split_psd_warm<S>(z, basis[static_cast<std::size_t>(r)], pos, neg, work);
      worst = std::max(worst, neg.norm());
    }
    if (worst <= accept) return finish(Status::feasible, worst, 0);
  }

  // Dual point from the displacement v = y - x: shared off-diagonal part Y,
  // per-block diagonals D(j), restricted to each block's support. If every
  // Y + D(j) is PSD and <Y, C> + sum_j <D(j), p(j)> < 0, no witness exists.
  auto certify = [&](const std::vector<Mat<S>>& xs, const std::vector<Mat<S>>& ys) {
    Mat<S> yoff = Mat<S>::Zero(d, d);
    for (Index m = 0; m < d; ++m)
      for (Index n = 0; n < m; ++n) {
        if (count(n, m) == 0) continue;
        S s(0);
        for (std::size_t j = 0; j < k; ++j)
          if (p(n, j) > 0.0 && p(m, j) > 0.0) s += ys[j](n, m) - xs[j](n, m);
        yoff(n, m) = s / static_cast<double>(count(n, m));
        yoff(m, n) = detail::conj_of(yoff(n, m));
      }
    double value = 0.0, scale = 0.0;
    for (Index m = 0; m < d; ++m)
      for (Index n = 0; n < d; ++n)
        if (n != m) value += std::real(detail::conj_of(yoff(n, m)) * c(n, m));
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<Index> sup;
      for (Index n = 0; n < d; ++n)
        if (p(n, j) > 0.0) sup.push_back(n);
      if (sup.empty()) continue;
      const Index s = static_cast<Index>(sup.size());
      Mat<S> mj(s, s);
      for (Index b = 0; b < s; ++b)
        for (Index a = 0; a < s; ++a)
          mj(a, b) = a == b ? S(std::real(ys[j](sup[a], sup[a]) - xs[j](sup[a], sup[a])))
                            : yoff(sup[a], sup[b]);
      const double nrm = mj.norm();
      scale = std::max(scale, nrm);
      const double shift = std::max(0.0, -min_eig<S>(mj)) + 1e-13 * nrm;
      for (Index a = 0; a < s; ++a) value += (std::real(mj(a, a)) + shift) * p(sup[a], j);
    }
    return scale > 0.0 && value < -1e-9 * scale;
  };

  const long window = std::max<long>(1, opts.stall_window);
  std::vector<double> history(static_cast<std::size_t>(window), 0.0);
  double res = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= opts.max_iters; ++it) {
    if (dr) {
      for (int r : orb.reps) {
        const auto j = static_cast<std::size_t>(r);
        z = q[j];
        detail::split_psd_warm<S>(z, basis[j], pos, neg, work);
        y[j] = pos;
      }
      propagate(y, orb);
      for (std::size_t j = 0; j < k; ++j) x[j] = 2.0 * y[j] - q[j];
      affine(x);
      average(x, orb);
      for (std::size_t j = 0; j < k; ++j) q[j] += x[j] - y[j];
    } else {
      for (int r : orb.reps) {
        const auto j = static_cast<std::size_t>(r);
        z = x[j] + q[j];
        detail::split_psd_warm<S>(z, basis[j], pos, neg, work);
        y[j] = pos;
        q[j] = neg;
      }
      propagate(y, orb);
      propagate(q, orb);
      x = y;
      affine(x);
      average(x, orb);
    }

    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += (x[j] - y[j]).squaredNorm();
    res = std::sqrt(acc);
    if (res <= accept) return finish(Status::feasible, res, it);

    if (it % kCertifyEvery == 0) {
      // the affine iterate itself may already be within reach of the cone
      double worst = 0.0;
      for (int r : orb.reps) {
        const auto j = static_cast<std::size_t>(r);
        z = x[j];
        detail::split_psd_warm<S>(z, xbasis[j], pos, neg, work);
        worst = std::max(worst, neg.norm());
        if (worst > accept) break;
      }
      if (worst <= accept) return finish(Status::feasible, worst, it);
      if (certify(x, y) || certify(y, x)) return finish(Status::infeasible, res, it);
    }

    auto& slot = history[static_cast<std::size_t>(it % window)];
    if (it > window && res > opts.infeas_threshold &&
        std::abs(res - slot) <= opts.stall_rel_change * res)
      return finish(Status::infeasible, res, it);
    slot = res;
  }
  return finish(Status::unknown, res, opts.max_iters);
}

bool is_real_action(const CovarianceAction* act) {
  if (!act) return true;
  for (const auto& u : act->group.phases)
    if (u.imag().cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

}  // namespace

FeasibilityVerdict solve_gii(const CMatrix& c, const IncoherentObservable& p,
                             const SolverOptions& opts) {
  require_coherence_matrix(c);
  require_valid(p);
  if (c.rows() != p.dim()) throw DimensionMismatch("solve_gii: C and P dimensions differ");
  if (!(opts.feas_tol > 0.0 && opts.feas_tol < opts.infeas_threshold))
    throw InvalidInput("solve_gii: need 0 < feas_tol < infeas_threshold");
  if (opts.group) {
    if (opts.group->group.dim != c.rows())
      throw DimensionMismatch("solve_gii: group dimension differs from C");
    for (const auto& op : opts.group->outcome_perms)
      if (op.size() != p.outcomes())
        throw DimensionMismatch("solve_gii: group outcome action has the wrong size");
    if (!is_covariant(p, *opts.group))
      throw InvalidInput("solve_gii: observable is not covariant under the supplied group");
  }
  const CMatrix ch = 0.5 * (c + c.adjoint());
  if (ch.imag().cwiseAbs().maxCoeff() == 0.0 && is_real_action(opts.group)) {
    const RMatrix cr = ch.real();
    return run_solver<double>(cr, p.table, opts);
  }
  return run_solver<cplx>(ch, p.table, opts);
}

std::string GiiReport::summary() const {
  std::ostringstream os;
  os << (ok ? "valid" : "invalid") << " (psd " << max_psd << ", sum " << max_sum << ", diag "
     << max_diag << ")";
  for (const auto& v : violations) {
    os << "\n  ";
    switch (v.kind) {
      case GiiViolation::Kind::shape: os << "shape mismatch"; break;
      case GiiViolation::Kind::hermitian: os << "block " << v.block << " not Hermitian"; break;
      case GiiViolation::Kind::psd: os << "block " << v.block << " not PSD"; break;
      case GiiViolation::Kind::sum: os << "sum constraint at (" << v.n << "," << v.m << ")"; break;
      case GiiViolation::Kind::diagonal:
        os << "diagonal of block " << v.block << " at " << v.n;
        break;
    }
    os << ": " << v.magnitude;
  }
  return os.str();
}

GiiReport verify_gii(const CMatrix& c, const IncoherentObservable& p, const GiiWitness& w,
                     double tol) {
  GiiReport r;
  const Index d = c.rows();
  auto fail = [&](GiiViolation v) {
    r.ok = false;
    r.violations.push_back(v);
  };
  if (c.cols() != d || p.dim() != d || w.blocks.size() != p.outcomes()) {
    fail({GiiViolation::Kind::shape, 0, 0, 0, 0.0});
    return r;
  }
  for (const auto& b : w.blocks)
    if (b.rows() != d || b.cols() != d) {
      fail({GiiViolation::Kind::shape, 0, 0, 0, 0.0});
      return r;
    }
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < w.blocks.size(); ++j) {
    const CMatrix& b = w.blocks[j];
    sum += b;
    const double scale = std::max(1.0, b.norm());
    const double asym = (b - b.adjoint()).norm();
    if (asym > tol * scale) {
      fail({GiiViolation::Kind::hermitian, j, 0, 0, asym});
      continue;
    }
    const double lo = min_eigenvalue(0.5 * (b + b.adjoint()));
    const double neg = std::max(0.0, -lo / scale);
    r.max_psd = std::max(r.max_psd, neg);
    if (neg > tol) fail({GiiViolation::Kind::psd, j, 0, 0, -lo});
    for (Index n = 0; n < d; ++n) {
      const double dev = std::abs(b(n, n) - p.p(n, static_cast<Index>(j)));
      r.max_diag = std::max(r.max_diag, dev);
      if (dev > tol) fail({GiiViolation::Kind::diagonal, j, n, n, dev});
    }
  }
  for (Index n = 0; n < d; ++n)
    for (Index m = 0; m < d; ++m) {
      const double dev = std::abs(sum(n, m) - c(n, m));
      r.max_sum = std::max(r.max_sum, dev);
      if (dev > tol && n <= m) fail({GiiViolation::Kind::sum, 0, n, m, dev});
    }
  return r;
}

Observable JointObservable::marginal_rows() const {
  Observable m;
  for (std::size_t i = 0; i < rows; ++i) {
    CMatrix s = CMatrix::Zero(at(i, 0).rows(), at(i, 0).cols());
    for (std::size_t j = 0; j < cols; ++j) s += at(i, j);
    m.effects.push_back(std::move(s));
  }
  return m;
}

Observable JointObservable::marginal_cols() const {
  Observable m;
  for (std::size_t j = 0; j < cols; ++j) {
    CMatrix s = CMatrix::Zero(at(0, j).rows(), at(0, j).cols());
    for (std::size_t i = 0; i < rows; ++i) s += at(i, j);
    m.effects.push_back(std::move(s));
  }
  return m;
}

JointObservable joint_observable(const GiiWitness& w, const Observable& q) {
  require_valid(q);
  if (w.blocks.empty()) throw InvalidInput("joint_observable: empty witness");
  const Index d = w.dim();
  if (q.dim() != d) throw DimensionMismatch("joint_observable: dimension mismatch");
  CMatrix c = CMatrix::Zero(d, d);
  IncoherentObservable p{RMatrix(d, static_cast<Index>(w.blocks.size()))};
  for (std::size_t j = 0; j < w.blocks.size(); ++j) {
    c += w.blocks[j];
    p.table.col(static_cast<Index>(j)) = w.blocks[j].diagonal().real();
  }
  const auto report = verify_gii(c, p, w);
  if (!report.ok) throw InvalidInput("joint_observable: invalid witness: " + report.summary());
  if (validate_coherence(c).violations.size() > 0)
    throw InvalidInput("joint_observable: witness blocks do not sum to a coherence matrix");

  JointObservable g;
  g.rows = q.outcomes();
  g.cols = w.blocks.size();
  for (std::size_t i = 0; i < g.rows; ++i)
    for (std::size_t j = 0; j < g.cols; ++j) g.effects.push_back(hadamard(w.blocks[j], q.effects[i]));
  return g;
}

IncoherentObservable NoiseLine::at(double alpha) const {
  return IncoherentObservable{alpha * sharp.table + (1.0 - alpha) * mixture.table};
}

ThresholdBracket bisect_threshold(const std::function<Status(double)>& probe, double lo,
                                  double hi, double tol, int max_unknown) {
  // lo stays certified feasible and hi certified infeasible; Unknown points
  // form a band [ulo, uhi] between them and both gaps are narrowed.
  ThresholdBracket b;
  b.lo = lo;
  b.hi = hi;
  double ulo = 0.0, uhi = 0.0;
  int unknowns = 0;
  while (unknowns < max_unknown) {
    double a = b.lo, z = b.hi;
    if (b.gray) {
      const double g1 = ulo - b.lo, g2 = b.hi - uhi;
      if (std::max(g1, g2) <= tol) break;
      if (g1 >= g2) {
        z = ulo;
      } else {
        a = uhi;
      }
    } else if (b.hi - b.lo <= tol) {
      break;
    }
    const double mid = 0.5 * (a + z);
    const Status s = probe(mid);
    ++b.calls;
    if (s == Status::feasible) {
      b.lo = mid;
      if (b.gray && mid >= ulo) b.gray = false;  // non-monotone solver noise: drop the band
    } else if (s == Status::infeasible) {
      b.hi = mid;
      if (b.gray && mid <= uhi) b.gray = false;
    } else {
      ++unknowns;
      if (std::isnan(b.gray_at)) b.gray_at = mid;
      ulo = b.gray ? std::min(ulo, mid) : mid;
      uhi = b.gray ? std::max(uhi, mid) : mid;
      b.gray = true;
    }
  }
  b.value = 0.5 * (b.lo + b.hi);
  return b;
}

AlphaSeed cor2_alpha_seed(const CMatrix& c, const NoiseLine& line) {
  auto member = [&](double a) { return cor2_check(c, line.at(a)) == Cor2Status::member; };
  if (member(1.0)) return {1.0, true};
  if (!member(0.0)) return {0.0, false};
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (member(mid) ? lo : hi) = mid;
  }
  return {lo, true};
}

AlphaSeed cor1_alpha_seed(const CMatrix& c, const NoiseLine& line) {
  auto violated = [&](double a) { return !cor1_check(c, line.at(a)).empty(); };
  if (!violated(1.0)) return {1.0, false};
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (violated(mid) ? hi : lo) = mid;
  }
  return {hi, true};
}

ThresholdBracket alpha_star(const CMatrix& c, const NoiseLine& line,
                            const AlphaStarOptions& opts) {
  require_coherence_matrix(c);
  double lo = 0.0, hi = 1.0;
  bool hi_certified = false;
  if (opts.use_seeds) {
    const auto s2 = cor2_alpha_seed(c, line);
    if (s2.certified) lo = s2.alpha;
    const auto s1 = cor1_alpha_seed(c, line);
    if (s1.certified) {
      hi = s1.alpha;
      hi_certified = true;
    }
    if (lo > hi) lo = hi;
  }
  auto probe = [&](double a) { return solve_gii(c, line.at(a), opts.solver).status; };

  int extra = 0;
  if (!hi_certified && lo < 1.0) {
    const Status s = probe(1.0);
    ++extra;
    if (s == Status::feasible) lo = 1.0;
    if (s == Status::unknown) {
      ThresholdBracket b;
      b.lo = lo;
      b.hi = 1.0;
      b.value = 0.5 * (lo + 1.0);
      b.gray = true;
      b.gray_at = 1.0;
      b.calls = extra;
      return b;
    }
  }
  if (lo >= 1.0) {
    ThresholdBracket b;
    b.lo = b.hi = b.value = 1.0;
    b.calls = extra;
    return b;
  }
  auto b = bisect_threshold(probe, lo, hi, opts.bisect_tol);
  b.calls += extra;
  return b;
}

}  // namespace coh
