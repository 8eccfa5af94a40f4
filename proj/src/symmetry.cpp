#include "coh/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace coh {

Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = a[static_cast<std::size_t>(b[i])];
  return out;
}

Permutation inverse(const Permutation& a) {
  Permutation out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
  return out;
}

ClassPartition coherence_classes(const CMatrix& c, double tol) {
  const int d = static_cast<int>(c.rows());
  auto unit = [&](int n, int m) { return std::abs(std::abs(c(n, m)) - 1.0) <= tol; };
  ClassPartition part;
  part.class_of.assign(static_cast<std::size_t>(d), -1);
  for (int n = 0; n < d; ++n) {
    if (part.class_of[n] >= 0) continue;
    const int k = static_cast<int>(part.classes.size());
    part.classes.push_back({});
    for (int m = n; m < d; ++m)
      if (part.class_of[m] < 0 && unit(n, m)) {
        part.class_of[m] = k;
        part.classes.back().push_back(m);
      }
  }
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m)
      if (unit(n, m) != (part.class_of[n] == part.class_of[m]))
        throw InvalidInput("coherence_classes: unit-modulus relation is not transitive at (" +
                           std::to_string(n) + "," + std::to_string(m) + ")");
  return part;
}

RMatrix Reduction::lift_matrix() const {
  RMatrix l = RMatrix::Zero(static_cast<Index>(partition.class_of.size()),
                            static_cast<Index>(partition.size()));
  for (std::size_t n = 0; n < partition.class_of.size(); ++n)
    l(static_cast<Index>(n), partition.class_of[n]) = 1.0;
  return l;
}

CMatrix Reduction::reconstruct() const {
  const Index d = phases.size();
  CMatrix out(d, d);
  for (Index n = 0; n < d; ++n)
    for (Index m = 0; m < d; ++m)
      out(n, m) = phases(n) * reduced(partition.class_of[n], partition.class_of[m]) *
                  std::conj(phases(m));
  return out;
}

IncoherentObservable Reduction::lift(const IncoherentObservable& reduced_p) const {
  if (reduced_p.dim() != static_cast<Index>(partition.size()))
    throw DimensionMismatch("Reduction::lift: observable does not live on the classes");
  const Index d = phases.size();
  IncoherentObservable out{RMatrix(d, reduced_p.table.cols())};
  for (Index n = 0; n < d; ++n) out.table.row(n) = reduced_p.table.row(partition.class_of[n]);
  return out;
}

GiiWitness Reduction::lift(const GiiWitness& reduced_w) const {
  const Index d = phases.size();
  GiiWitness out;
  out.provenance = reduced_w.provenance;
  for (const auto& b : reduced_w.blocks) {
    if (b.rows() != static_cast<Index>(partition.size()))
      throw DimensionMismatch("Reduction::lift: witness does not live on the classes");
    CMatrix x(d, d);
    for (Index n = 0; n < d; ++n)
      for (Index m = 0; m < d; ++m)
        x(n, m) = phases(n) * b(partition.class_of[n], partition.class_of[m]) * std::conj(phases(m));
    out.blocks.push_back(std::move(x));
  }
  return out;
}

std::optional<IncoherentObservable> Reduction::restrict(const IncoherentObservable& full,
                                                        double tol) const {
  if (full.dim() != phases.size())
    throw DimensionMismatch("Reduction::restrict: dimension mismatch");
  IncoherentObservable out{RMatrix(static_cast<Index>(partition.size()), full.table.cols())};
  for (std::size_t k = 0; k < partition.size(); ++k) {
    const int r = representatives[k];
    out.table.row(static_cast<Index>(k)) = full.table.row(r);
    for (int n : partition.classes[k])
      if ((full.table.row(n) - full.table.row(r)).cwiseAbs().maxCoeff() > tol) return std::nullopt;
  }
  return out;
}

Reduction reduce(const CMatrix& c) {
  require_coherence_matrix(c);
  Reduction red;
  red.partition = coherence_classes(c);
  const Index d = c.rows();
  const Index nc = static_cast<Index>(red.partition.size());
  for (const auto& cls : red.partition.classes) red.representatives.push_back(cls.front());

  red.phases.resize(d);
  for (Index n = 0; n < d; ++n) {
    const cplx z = c(n, red.representatives[red.partition.class_of[n]]);
    red.phases(n) = z / std::abs(z);
  }
  CMatrix cr(nc, nc);
  for (Index k = 0; k < nc; ++k)
    for (Index l = 0; l < nc; ++l) cr(k, l) = c(red.representatives[k], red.representatives[l]);

  // gauge: make the first row real and nonnegative
  CVector w(nc);
  for (Index k = 0; k < nc; ++k) {
    const double a = std::abs(cr(0, k));
    w(k) = a > 0.0 ? std::conj(cr(0, k)) / a : cplx(1.0);
  }
  red.reduced.resize(nc, nc);
  for (Index k = 0; k < nc; ++k)
    for (Index l = 0; l < nc; ++l) red.reduced(k, l) = std::conj(w(k)) * cr(k, l) * w(l);
  for (Index k = 0; k < nc; ++k) {
    red.reduced(k, k) = 1.0;
    red.reduced(0, k) = std::abs(red.reduced(0, k));
    red.reduced(k, 0) = red.reduced(0, k);
  }
  for (Index n = 0; n < d; ++n) red.phases(n) *= w(red.partition.class_of[n]);
  return red;
}

std::optional<CVector> symmetry_phases(const CMatrix& c, const Permutation& pi, double tol) {
  const Index d = c.rows();
  if (static_cast<Index>(pi.size()) != d) return std::nullopt;
  CVector u(d);
  for (Index n = 0; n < d; ++n) {
    const cplx den = c(n, 0);
    if (std::abs(den) == 0.0) return std::nullopt;
    const cplx z = c(pi[n], pi[0]) / den;
    const double a = std::abs(z);
    if (std::abs(a - 1.0) > tol * std::max(1.0, 1.0 / std::abs(den))) return std::nullopt;
    u(n) = z / a;
  }
  for (Index n = 0; n < d; ++n)
    for (Index m = 0; m < d; ++m)
      if (std::abs(c(pi[n], pi[m]) - u(n) * c(n, m) * std::conj(u(m))) > tol) return std::nullopt;
  return u;
}

namespace {

Permutation unrank(std::size_t rank, int d) {
  std::vector<int> pool = identity_permutation(d);
  std::vector<std::size_t> fact(static_cast<std::size_t>(d) + 1, 1);
  for (int i = 1; i <= d; ++i) fact[i] = fact[i - 1] * static_cast<std::size_t>(i);
  Permutation out;
  for (int i = d; i >= 1; --i) {
    const std::size_t idx = rank / fact[i - 1];
    rank %= fact[i - 1];
    out.push_back(pool[idx]);
    pool.erase(pool.begin() + static_cast<long>(idx));
  }
  return out;
}

}  // namespace

SymmetryGroup symmetry_group(const CMatrix& c, Exec exec) {
  require_coherence_matrix(c);
  const int d = static_cast<int>(c.rows());
  if (d > kMaxSymDim)
    throw InvalidInput("symmetry_group: dimension " + std::to_string(d) +
                       " exceeds the brute-force limit; supply the group explicitly");
  if (c.cwiseAbs().minCoeff() == 0.0)
    throw InvalidInput("symmetry_group: coherence matrices with zero entries are unsupported");
  std::size_t total = 1;
  for (int i = 2; i <= d; ++i) total *= static_cast<std::size_t>(i);

  std::vector<std::optional<CVector>> found(total);
  for_each_index(total, exec, [&](std::size_t r) { found[r] = symmetry_phases(c, unrank(r, d)); });

  SymmetryGroup g;
  g.dim = d;
  for (std::size_t r = 0; r < total; ++r)
    if (found[r]) {
      g.perms.push_back(unrank(r, d));
      g.phases.push_back(*found[r]);
    }
  if (!is_closed(g)) throw std::logic_error("symmetry_group: enumerated set is not closed");
  return g;
}

SymmetryGroup group_from_permutations(const CMatrix& c, const std::vector<Permutation>& gens) {
  const int d = static_cast<int>(c.rows());
  std::set<Permutation> seen{identity_permutation(d)};
  std::vector<Permutation> order{identity_permutation(d)};
  for (const auto& g : gens)
    if (static_cast<int>(g.size()) != d)
      throw DimensionMismatch("group_from_permutations: permutation has the wrong length");
  for (std::size_t i = 0; i < order.size(); ++i)
    for (const auto& g : gens) {
      auto p = compose(g, order[i]);
      if (seen.insert(p).second) order.push_back(std::move(p));
    }
  std::sort(order.begin(), order.end());
  SymmetryGroup out;
  out.dim = d;
  for (const auto& p : order) {
    auto u = symmetry_phases(c, p);
    if (!u)
      throw InvalidInput("group_from_permutations: a permutation is not a symmetry of C "
                         "or its phases are undefined");
    out.perms.push_back(p);
    out.phases.push_back(*u);
  }
  return out;
}

bool is_closed(const SymmetryGroup& g) {
  std::set<Permutation> s(g.perms.begin(), g.perms.end());
  if (!s.count(identity_permutation(static_cast<int>(g.dim)))) return false;
  for (const auto& a : g.perms)
    for (const auto& b : g.perms)
      if (!s.count(compose(a, b))) return false;
  return true;
}

std::vector<Permutation> class_homomorphism(const SymmetryGroup& g, const ClassPartition& part) {
  std::vector<Permutation> out;
  for (const auto& pi : g.perms) {
    Permutation phi(part.size());
    for (std::size_t k = 0; k < part.size(); ++k) {
      phi[k] = part.class_of[pi[part.classes[k].front()]];
      for (int n : part.classes[k])
        if (part.class_of[pi[n]] != phi[k])
          throw InvalidInput("class_homomorphism: element does not permute the classes");
    }
    out.push_back(std::move(phi));
  }
  return out;
}

CovarianceAction natural_action(const SymmetryGroup& g) { return CovarianceAction{g, g.perms}; }

CovarianceAction reduced_action(const Reduction& red, const SymmetryGroup& full) {
  const auto phis = class_homomorphism(full, red.partition);
  const SymmetryGroup g = group_from_permutations(red.reduced, phis);
  return natural_action(g);
}

bool is_covariant(const IncoherentObservable& p, const CovarianceAction& act, double tol) {
  const auto& perms = act.group.perms;
  if (act.outcome_perms.size() != perms.size())
    throw InvalidInput("is_covariant: outcome action does not match the group");
  for (std::size_t g = 0; g < perms.size(); ++g) {
    const auto& pi = perms[g];
    const auto& sigma = act.outcome_perms[g];
    if (static_cast<Index>(pi.size()) != p.dim() || sigma.size() != p.outcomes())
      throw DimensionMismatch("is_covariant: outcome-set mismatch");
    for (Index n = 0; n < p.dim(); ++n)
      for (std::size_t j = 0; j < p.outcomes(); ++j)
        if (std::abs(p.p(n, static_cast<Index>(j)) - p.p(pi[n], sigma[j])) > tol) return false;
  }
  return true;
}

CMatrix act_on(const CMatrix& x, const Permutation& pi, const CVector& u) {
  const Index d = x.rows();
  CMatrix y(d, d);
  for (Index m = 0; m < d; ++m)
    for (Index n = 0; n < d; ++n) y(pi[n], pi[m]) = u(n) * x(n, m) * std::conj(u(m));
  return y;
}

std::vector<CMatrix> covariant_average(const std::vector<CMatrix>& blocks,
                                       const CovarianceAction& act) {
  const auto& perms = act.group.perms;
  if (blocks.empty() || perms.empty()) return blocks;
  const Index d = blocks.front().rows();
  std::vector<CMatrix> out(blocks.size(), CMatrix::Zero(d, d));
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    for (std::size_t g = 0; g < perms.size(); ++g) {
      const CMatrix& x = blocks[static_cast<std::size_t>(act.outcome_perms[g][j])];
      const auto& pi = perms[g];
      const auto& u = act.group.phases[g];
      for (Index m = 0; m < d; ++m)
        for (Index n = 0; n < d; ++n)
          out[j](n, m) += std::conj(u(n)) * x(pi[n], pi[m]) * u(m);
    }
    out[j] /= static_cast<double>(perms.size());
  }
  return out;
}

}  // namespace coh
