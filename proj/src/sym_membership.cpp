#include "coh/symmetry.hpp"

namespace coh {

namespace {

// Symmetry group of C when it can be derived, else the trivial group.
SymmetryGroup group_or_trivial(const CMatrix& c) {
  const int d = static_cast<int>(c.rows());
  if (d <= kMaxSymDim && c.cwiseAbs().minCoeff() > 0.0) return symmetry_group(c);
  SymmetryGroup g;
  g.dim = d;
  g.perms.push_back(identity_permutation(d));
  g.phases.push_back(CVector::Ones(d));
  return g;
}

std::optional<CovarianceAction> try_reduced_action(const Reduction& red, const SymmetryGroup& g) {
  try {
    return reduced_action(red, g);
  } catch (const InvalidInput&) {
    return std::nullopt;
  }
}

SymMembership solve_reduced(Reduction red, const IncoherentObservable& pr,
                            const CovarianceAction* act, const SolverOptions& opts) {
  SymMembership out;
  SolverOptions o = opts;
  o.group = act && act->group.order() > 1 ? act : nullptr;
  out.group_order = o.group ? act->group.order() : 1;
  out.verdict = solve_gii(red.reduced, pr, o);
  out.lifted_p = red.lift(pr);
  if (out.verdict.witness) out.witness = red.lift(*out.verdict.witness);
  out.reduction = std::move(red);
  return out;
}

}  // namespace

SymMembership check_sym_membership(const CMatrix& c, const IncoherentObservable& pr,
                                   const SolverOptions& opts) {
  Reduction red = reduce(c);
  require_valid(pr);
  const auto nc = red.partition.size();
  if (static_cast<std::size_t>(pr.dim()) != nc || pr.outcomes() != nc)
    throw InvalidInput("check_sym_membership: reduced observable must have " +
                       std::to_string(nc) + " rows and outcomes (one per class)");
  const auto act = try_reduced_action(red, group_or_trivial(c));
  if (act && !is_covariant(pr, *act))
    throw InvalidInput("check_sym_membership: observable is not covariant under the class action");
  return solve_reduced(std::move(red), pr, act ? &*act : nullptr, opts);
}

FullMembership check_sym_membership_full(const CMatrix& c, const IncoherentObservable& p,
                                         const SolverOptions& opts) {
  require_valid(p);
  Reduction red = reduce(c);
  if (p.dim() != c.rows()) throw DimensionMismatch("check_sym_membership_full: dimension mismatch");
  FullMembership out;
  for (const auto& cls : red.partition.classes)
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = a + 1; b < cls.size(); ++b)
        if ((p.table.row(cls[a]) - p.table.row(cls[b])).cwiseAbs().maxCoeff() > kTolPovm)
          out.not_adapted.emplace_back(cls[a], cls[b]);
  if (!out.not_adapted.empty()) {
    out.status = Status::infeasible;
    return out;
  }
  const IncoherentObservable pr = *red.restrict(p);
  std::optional<CovarianceAction> act;
  if (pr.outcomes() == red.partition.size()) {
    act = try_reduced_action(red, group_or_trivial(c));
    if (act && !is_covariant(pr, *act)) act.reset();
  }
  out.sym = solve_reduced(std::move(red), pr, act ? &*act : nullptr, opts);
  out.status = out.sym->verdict.status;
  return out;
}

}  // namespace coh
