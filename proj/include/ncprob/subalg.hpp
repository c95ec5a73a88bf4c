#ifndef NCPROB_SUBALG_HPP
#define NCPROB_SUBALG_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ncprob/matalg.hpp"

namespace ncprob {

// A unital *-subalgebra of a block algebra, carried as a GNS-orthonormal
// basis (deterministic order: generator order, then product generation
// order).
struct Subalgebra {
  BlockAlgebra ambient;
  FaithfulState state;
  std::vector<AlgElement> basis;
  bool contains_identity = false;

  int dim() const { return static_cast<int>(basis.size()); }
  // GNS-orthogonal projection of x onto the span of the basis.
  AlgElement project(const AlgElement& x) const;
  // Distance of x from the span, in GNS norm.
  double span_distance(const AlgElement& x) const;
};

inline constexpr int kGenerateIterationCap = 64;
inline constexpr int kSubalgebraDimCap = 4096;

// Smallest unital *-subalgebra containing the generators. Iterates right
// multiplication of the current basis by the generators and their adjoints,
// extending by modified Gram-Schmidt with a re-orthogonalization pass until
// the dimension stabilizes. Rank tolerance is tol * ambient element
// dimension.
Subalgebra generate_subalgebra(const BlockAlgebra& ambient,
                               const FaithfulState& state,
                               const std::vector<AlgElement>& generators,
                               double tol = 1e-10);

// The scalars C*1.
Subalgebra scalar_subalgebra(const BlockAlgebra& ambient,
                             const FaithfulState& state);

// Finite Takesaki criterion: rho N rho^{-1} is contained in N, where rho is
// the density implementing psi. Always true for tracial psi.
bool check_modular_invariance(const FaithfulState& state,
                              const Subalgebra& target, double tol = 1e-8);

enum class CondExpValidity { Valid, NotModularlyInvariant, NotPositive };

// The GNS-orthogonal projection onto a subalgebra. When Valid it is the
// unique psi-preserving conditional expectation onto the target.
class CondExp {
 public:
  CondExp(Subalgebra target, CondExpValidity validity)
      : target_(std::move(target)), validity_(validity) {}

  const Subalgebra& target() const { return target_; }
  CondExpValidity validity() const { return validity_; }
  bool valid() const { return validity_ == CondExpValidity::Valid; }

  AlgElement apply(const AlgElement& x) const { return target_.project(x); }

  // Matrix of the projection in the ambient matrix-unit frame, orthonormal
  // under the GNS form via the coordinate map of GnsFrame. Computed on
  // demand; intended for reports and small ambients.
  Matrix projection_matrix() const;

 private:
  Subalgebra target_;
  CondExpValidity validity_;
};

// Builds the projection and classifies it: modular invariance via
// check_modular_invariance, positivity by seeded sampling of 200 elements
// x*x, bimodule property on the target basis.
CondExp conditional_expectation(const BlockAlgebra& ambient,
                                const FaithfulState& state,
                                const Subalgebra& target, double tol = 1e-8,
                                std::uint64_t seed = 0x5EED);

// Coordinates in which the GNS form is the standard inner product:
// v(x) = concat_b sqrt(w_b) vec(x_b rho_b^{1/2}).
class GnsFrame {
 public:
  explicit GnsFrame(const FaithfulState& state);
  Vector coords(const AlgElement& x) const;

 private:
  FaithfulState state_;
  std::vector<Matrix> sqrt_densities_;
};

struct CommutingSquareReport {
  // The four equivalent conditions of the commuting-square proposition.
  bool independence = false;        // E0(xy) = E0(x) E0(y)
  bool range_condition = false;     // E1(M2) = M0
  bool composition = false;         // E1 E2 = E0
  bool commutation = false;         // E1 E2 = E2 E1 and M1 /\ M2 = M0
  double dev_independence = 0.0;
  double dev_range = 0.0;
  double dev_composition = 0.0;
  double dev_commutation = 0.0;
  bool all_agree = false;  // the proposition asserts all four move together

  bool all_hold() const {
    return independence && range_condition && composition && commutation;
  }
};

// Evaluates the four conditions numerically on the ambient matrix-unit
// spanning set. Requires M0 contained in M1 and in M2, and all three
// expectations Valid.
CommutingSquareReport verify_commuting_square(const CondExp& e1,
                                              const CondExp& e2,
                                              const CondExp& e0,
                                              double tol = 1e-8);

}  // namespace ncprob

#endif
