#include "ncprob/symcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncprob {

std::string to_string(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::Exchangeable: return "exchangeable";
    case SymmetryKind::Spreadable: return "spreadable";
    case SymmetryKind::Stationary: return "stationary";
  }
  return "unknown";
}

TupleRelation relation_of(SymmetryKind k) {
  switch (k) {
    case SymmetryKind::Exchangeable: return TupleRelation::Symmetric;
    case SymmetryKind::Spreadable: return TupleRelation::Order;
    case SymmetryKind::Stationary: return TupleRelation::Translation;
  }
  return TupleRelation::Translation;
}

namespace {

// Lexicographic odometer over {0, ..., radix-1}^n; returns false after the
// last word.
bool next_word(std::vector<int>& w, int radix) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (++w[i] < radix) return true;
    w[i] = 0;
  }
  return false;
}

}  // namespace

SymmetryVerdict check_symmetry(const RandomSequenceModel& model,
                               SymmetryKind kind, int degree, int window,
                               double tol) {
  if (degree < 1) throw ValidationError("check_symmetry: degree must be >= 1");
  if (window < 1) throw ValidationError("check_symmetry: window must be >= 1");
  if (window > model.window()) {
    throw WindowError("check_symmetry: window " + std::to_string(window) +
                      " exceeds model window " +
                      std::to_string(model.window()));
  }
  const TupleRelation rel = relation_of(kind);
  const int nbasis = static_cast<int>(model.domain_hermitian_basis().size());

  SymmetryVerdict verdict;
  verdict.kind = kind;
  verdict.degree = degree;
  verdict.window = window;
  verdict.tolerance = tol;

  // Each tuple is compared against its class-canonical representative; the
  // class relations only lower entries, so the representative stays inside
  // the window. First maximal violator in (length, tuple, basis) lex order.
  for (int n = 1; n <= degree; ++n) {
    std::vector<int> entries(static_cast<std::size_t>(n), 0);
    do {
      const IndexTuple tuple{entries};
      const IndexTuple canonical = canon(rel, tuple);
      if (canonical == tuple) continue;
      std::vector<int> basis(static_cast<std::size_t>(n), 0);
      do {
        const Complex vt = model.psi_moment(tuple, basis);
        const Complex vc = model.psi_moment(canonical, basis);
        const double dev = std::abs(vt - vc);
        if (dev > verdict.max_violation) {
          verdict.max_violation = dev;
          verdict.witness = SymmetryWitness{tuple, canonical, basis, vt, vc};
        }
      } while (next_word(basis, nbasis));
    } while (next_word(entries, window));
  }

  verdict.pass = verdict.max_violation <= tol;
  if (verdict.pass && verdict.max_violation == 0.0) verdict.witness.reset();
  return verdict;
}

BraidReport check_braid_relation(const AlgElement& u, double tol) {
  if (u.algebra().num_blocks() != 1) {
    throw StructuralError("check_braid_relation: u must be a single block");
  }
  const int dd = u.algebra().blocks[0];
  const int d = static_cast<int>(std::lround(std::sqrt(double(dd))));
  if (d * d != dd) {
    throw StructuralError(
        "check_braid_relation: u must live in M_{d^2} for some d");
  }
  BraidReport report;
  detail::braid_residuals_impl(u, d, report.braid_residual,
                               report.unitarity_residual);
  if (report.unitarity_residual > tol) {
    throw ValidationError("check_braid_relation: u is not unitary (residual " +
                          std::to_string(report.unitarity_residual) + ")");
  }
  report.pass = report.braid_residual <= tol;

  // Conjugations on legs (0,1) and (2,3) act on disjoint tensor factors, so
  // they commute identically; spot-check on four legs when small enough.
  if (dd * dd <= 4096) {
    const Matrix id = Matrix::Identity(dd, dd);
    const Matrix a = kron(u.block(0), id);
    const Matrix b = kron(id, u.block(0));
    report.distant_commutation = (a * b - b * a).cwiseAbs().maxCoeff() <= tol;
  } else {
    report.distant_commutation = true;
  }
  return report;
}

SymmetryHierarchyAudit symmetry_hierarchy_audit(const RandomSequenceModel& model,
                                                int degree, int window,
                                                double tol) {
  SymmetryHierarchyAudit audit;
  audit.exchangeable =
      check_symmetry(model, SymmetryKind::Exchangeable, degree, window, tol);
  audit.spreadable =
      check_symmetry(model, SymmetryKind::Spreadable, degree, window, tol);
  audit.stationary =
      check_symmetry(model, SymmetryKind::Stationary, degree, window, tol);
  const bool ok1 = !audit.exchangeable.pass || audit.spreadable.pass;
  const bool ok2 = !audit.spreadable.pass || audit.stationary.pass;
  audit.monotone = ok1 && ok2;
  return audit;
}

}  // namespace ncprob
