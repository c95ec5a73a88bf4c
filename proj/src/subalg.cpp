#include "ncprob/subalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace ncprob {

AlgElement Subalgebra::project(const AlgElement& x) const {
  AlgElement out = AlgElement::zero(ambient);
  for (const AlgElement& e : basis) {
    out += gns_inner(state, e, x) * e;
  }
  return out;
}

double Subalgebra::span_distance(const AlgElement& x) const {
  return gns_norm(state, x - project(x));
}

namespace {

// Modified Gram-Schmidt step with one re-orthogonalization pass. Returns
// false when the candidate is (numerically) inside the current span.
bool gs_extend(const FaithfulState& state, std::vector<AlgElement>& basis,
               AlgElement cand, double rank_tol) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const AlgElement& e : basis) {
      cand -= gns_inner(state, e, cand) * e;
    }
  }
  const double n = gns_norm(state, cand);
  if (n <= rank_tol) return false;
  cand *= Complex(1.0 / n);
  basis.push_back(std::move(cand));
  return true;
}

}  // namespace

Subalgebra generate_subalgebra(const BlockAlgebra& ambient,
                               const FaithfulState& state,
                               const std::vector<AlgElement>& generators,
                               double tol) {
  if (generators.empty()) {
    throw ValidationError("generate_subalgebra: generators must be nonempty");
  }
  for (const AlgElement& g : generators) {
    require_same_algebra(g.algebra(), ambient, "generate_subalgebra");
  }
  const double rank_tol = tol * static_cast<double>(ambient.element_dim());

  // Multiplier set: generators and their adjoints. Right multiplication
  // from the identity reaches every word in them.
  std::vector<AlgElement> multipliers;
  for (const AlgElement& g : generators) {
    multipliers.push_back(g);
    multipliers.push_back(g.adjoint());
  }

  std::vector<AlgElement> basis;
  gs_extend(state, basis, AlgElement::identity(ambient), rank_tol);
  for (const AlgElement& g : generators) gs_extend(state, basis, g, rank_tol);

  std::size_t stable_from = 0;
  for (int iter = 0; iter < kGenerateIterationCap; ++iter) {
    const std::size_t before = basis.size();
    // Only products involving basis vectors added since the last round can
    // leave the current span.
    const std::size_t scan_from = stable_from;
    stable_from = before;
    for (std::size_t i = scan_from; i < before; ++i) {
      for (const AlgElement& m : multipliers) {
        if (static_cast<int>(basis.size()) > kSubalgebraDimCap) {
          throw ResourceError("generate_subalgebra: dimension exceeds cap " +
                              std::to_string(kSubalgebraDimCap));
        }
        gs_extend(state, basis, basis[i] * m, rank_tol);
      }
    }
    if (basis.size() == before) {
      Subalgebra sub{ambient, state, std::move(basis), true};
      return sub;
    }
  }
  throw InternalError("generate_subalgebra: failed to stabilize within cap");
}

Subalgebra scalar_subalgebra(const BlockAlgebra& ambient,
                             const FaithfulState& state) {
  return generate_subalgebra(ambient, state,
                             {AlgElement::identity(ambient)});
}

bool check_modular_invariance(const FaithfulState& state,
                              const Subalgebra& target, double tol) {
  if (state.is_tracial()) return true;
  for (const AlgElement& e : target.basis) {
    AlgElement conj = AlgElement::zero(state.algebra);
    for (int b = 0; b < state.algebra.num_blocks(); ++b) {
      // Block weights cancel in the conjugation; only rho_b acts.
      conj.block(b) =
          state.densities[b] * e.block(b) * state.densities[b].inverse();
    }
    const double scale = std::max(1.0, gns_norm(state, conj));
    if (target.span_distance(conj) > tol * scale) return false;
  }
  return true;
}

GnsFrame::GnsFrame(const FaithfulState& state) : state_(state) {
  for (int b = 0; b < state.algebra.num_blocks(); ++b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(state.densities[b]);
    Matrix sq = es.eigenvectors() *
                es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                es.eigenvectors().adjoint();
    sqrt_densities_.push_back(std::sqrt(state.weights[b]) * sq);
  }
}

Vector GnsFrame::coords(const AlgElement& x) const {
  require_same_algebra(x.algebra(), state_.algebra, "GnsFrame::coords");
  Vector v(static_cast<Eigen::Index>(state_.algebra.element_dim()));
  Eigen::Index at = 0;
  for (int b = 0; b < state_.algebra.num_blocks(); ++b) {
    const Matrix m = x.block(b) * sqrt_densities_[b];
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) v(at++) = m(r, c);
    }
  }
  return v;
}

Matrix CondExp::projection_matrix() const {
  const GnsFrame frame(target_.state);
  const auto units = matrix_unit_basis(target_.ambient);
  const Eigen::Index n = static_cast<Eigen::Index>(units.size());
  Matrix cols(static_cast<Eigen::Index>(target_.ambient.element_dim()), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    cols.col(j) = frame.coords(apply(units[static_cast<std::size_t>(j)]));
  }
  Matrix unit_coords(cols.rows(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    unit_coords.col(j) = frame.coords(units[static_cast<std::size_t>(j)]);
  }
  // Change of frame from matrix units to the GNS-orthonormal coordinates.
  return unit_coords.colPivHouseholderQr().solve(cols);
}

namespace {

AlgElement random_element(const BlockAlgebra& a, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  AlgElement x = AlgElement::zero(a);
  for (int b = 0; b < a.num_blocks(); ++b) {
    const int d = a.blocks[b];
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        x.block(b)(r, c) = Complex(g(rng), g(rng));
      }
    }
  }
  return x;
}

double min_hermitian_eigenvalue(const AlgElement& x) {
  double m = std::numeric_limits<double>::infinity();
  for (int b = 0; b < x.algebra().num_blocks(); ++b) {
    const Matrix h = 0.5 * (x.block(b) + x.block(b).adjoint());
    if (h.rows() <= 64) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(h);
      m = std::min(m, es.eigenvalues().minCoeff());
      continue;
    }
    // Large block: shifted power iteration from a deterministic start gives
    // a cheap minimum-eigenvalue estimate (Gershgorin shift keeps the
    // iterated operator positive).
    const double shift = h.cwiseAbs().rowwise().sum().maxCoeff();
    Vector v = Vector::Ones(h.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = Complex(1.0 + 0.25 * std::sin(double(i)), 0.3 * std::cos(double(i)));
    }
    v.normalize();
    double lam = 0.0;
    for (int it = 0; it < 80; ++it) {
      Vector w = shift * v - h * v;
      lam = w.norm();
      if (lam == 0.0) break;
      v = w / lam;
    }
    m = std::min(m, shift - lam);
  }
  return m;
}

}  // namespace

CondExp conditional_expectation(const BlockAlgebra& ambient,
                                const FaithfulState& state,
                                const Subalgebra& target, double tol,
                                std::uint64_t seed) {
  require_same_algebra(ambient, target.ambient, "conditional_expectation");
  if (!target.contains_identity) {
    throw PreconditionError("conditional_expectation: target must contain the "
                            "identity");
  }
  CondExpValidity validity = CondExpValidity::Valid;
  if (!check_modular_invariance(state, target, tol)) {
    validity = CondExpValidity::NotModularlyInvariant;
  } else {
    // Positivity sampling: E(x*x) must stay positive semidefinite. The
    // trial counts shrink with ambient size to keep the check affordable on
    // long tensor chains.
    long long mult_cost = 0;
    for (int d : ambient.blocks) {
      mult_cost += static_cast<long long>(d) * d * d;
    }
    const int pos_trials =
        mult_cost <= (1 << 18) ? 200 : std::max<long long>(8, (1 << 21) / (mult_cost >> 7));
    const int bim_trials =
        mult_cost <= (1 << 18) ? 32 : std::max<long long>(4, (1 << 18) / (mult_cost >> 7));
    std::mt19937_64 rng(seed);
    bool positive = true;
    for (int trial = 0; trial < pos_trials && positive; ++trial) {
      const AlgElement x = random_element(ambient, rng);
      const AlgElement exx = target.project(x.adjoint() * x);
      const double scale =
          std::max(1.0, gns_inner(state, x, x).real());
      if (min_hermitian_eigenvalue(exx) < -tol * scale) positive = false;
    }
    // Bimodule sampling on the target basis.
    if (positive) {
      std::mt19937_64 rng2(seed ^ 0x9E3779B97F4A7C15ull);
      for (int trial = 0; trial < bim_trials && positive; ++trial) {
        const AlgElement x = random_element(ambient, rng2);
        for (const AlgElement& a : target.basis) {
          const AlgElement lhs = target.project(a * x);
          const AlgElement rhs = a * target.project(x);
          const double scale = std::max(1.0, gns_norm(state, rhs));
          if (gns_norm(state, lhs - rhs) > 1e2 * tol * scale) {
            positive = false;
            break;
          }
        }
      }
    }
    if (!positive) validity = CondExpValidity::NotPositive;
  }
  return CondExp(target, validity);
}

namespace {

bool span_contains(const Subalgebra& big, const std::vector<AlgElement>& small,
                   double tol) {
  for (const AlgElement& e : small) {
    if (big.span_distance(e) > tol) return false;
  }
  return true;
}

// Dimension of the intersection of the spans of two GNS-orthonormal bases.
int intersection_dim(const FaithfulState& state, const Subalgebra& a,
                     const Subalgebra& b, double tol) {
  const GnsFrame frame(state);
  Matrix qa(static_cast<Eigen::Index>(state.algebra.element_dim()), a.dim());
  for (int j = 0; j < a.dim(); ++j) {
    qa.col(j) = frame.coords(a.basis[static_cast<std::size_t>(j)]);
  }
  Matrix qb(qa.rows(), b.dim());
  for (int j = 0; j < b.dim(); ++j) {
    qb.col(j) = frame.coords(b.basis[static_cast<std::size_t>(j)]);
  }
  // Singular values of Qa^H Qb are the cosines of the principal angles.
  Eigen::JacobiSVD<Matrix> svd(qa.adjoint() * qb);
  int dim = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1.0 - tol) ++dim;
  }
  return dim;
}

}  // namespace

CommutingSquareReport verify_commuting_square(const CondExp& e1,
                                              const CondExp& e2,
                                              const CondExp& e0, double tol) {
  const Subalgebra& m1 = e1.target();
  const Subalgebra& m2 = e2.target();
  const Subalgebra& m0 = e0.target();
  if (!e1.valid() || !e2.valid() || !e0.valid()) {
    throw PreconditionError("verify_commuting_square: all expectations must "
                            "be Valid");
  }
  if (!span_contains(m1, m0.basis, 1e-8) || !span_contains(m2, m0.basis, 1e-8)) {
    throw PreconditionError("verify_commuting_square: M0 must be contained in "
                            "M1 and M2");
  }
  const FaithfulState& state = m0.state;
  CommutingSquareReport rep;

  // (i) M0-independence on the generated bases.
  for (const AlgElement& x : m1.basis) {
    for (const AlgElement& y : m2.basis) {
      const double dev =
          gns_norm(state, e0.apply(x * y) - e0.apply(x) * e0.apply(y));
      rep.dev_independence = std::max(rep.dev_independence, dev);
    }
  }
  rep.independence = rep.dev_independence <= tol;

  // (ii) E1(M2) = M0: containment plus matching rank.
  {
    std::vector<AlgElement> images;
    for (const AlgElement& y : m2.basis) images.push_back(e1.apply(y));
    for (const AlgElement& im : images) {
      rep.dev_range = std::max(rep.dev_range, m0.span_distance(im));
    }
    // Rank of the image span never exceeds dim M0 when containment holds;
    // it always contains M0 since E1 fixes M0 pointwise.
    rep.range_condition = rep.dev_range <= tol;
  }

  // (iii) E1 E2 = E0 on the ambient matrix units.
  const auto units = matrix_unit_basis(m0.ambient);
  for (const AlgElement& u : units) {
    const double dev = gns_norm(state, e1.apply(e2.apply(u)) - e0.apply(u));
    rep.dev_composition = std::max(rep.dev_composition, dev);
  }
  rep.composition = rep.dev_composition <= tol;

  // (iv) E1 E2 = E2 E1 and M1 /\ M2 = M0.
  for (const AlgElement& u : units) {
    const double dev =
        gns_norm(state, e1.apply(e2.apply(u)) - e2.apply(e1.apply(u)));
    rep.dev_commutation = std::max(rep.dev_commutation, dev);
  }
  const bool commutes = rep.dev_commutation <= tol;
  const int cap_dim = intersection_dim(state, m1, m2, 1e-7);
  rep.commutation = commutes && cap_dim == m0.dim();

  const bool all = rep.all_hold();
  const bool none = !rep.independence && !rep.range_condition &&
                    !rep.composition && !rep.commutation;
  rep.all_agree = all || none;
  return rep;
}

}  // namespace ncprob
