#ifndef NCPROB_SEQMODEL_HPP
#define NCPROB_SEQMODEL_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncprob/matalg.hpp"
#include "ncprob/tuplecomb.hpp"

namespace ncprob {

// A unital *-homomorphism between block algebras, stored via the images of
// the domain's matrix-unit basis.
class StarHom {
 public:
  StarHom(BlockAlgebra dom, FaithfulState dom_state, BlockAlgebra cod,
          FaithfulState cod_state, std::vector<AlgElement> unit_images);

  const BlockAlgebra& domain() const { return dom_; }
  const BlockAlgebra& codomain() const { return cod_; }
  const std::vector<AlgElement>& unit_images() const { return unit_images_; }

  AlgElement apply(const AlgElement& x) const;

  // Checks linearity structure, unitality, multiplicativity, *-preservation,
  // state compatibility psi(iota(a)) = phi_0(a) and injectivity.
  void validate(double tol = 1e-9) const;

  // gamma is a phi_0-preserving automorphism of its (shared) domain and
  // codomain; true when state-preserving and bijective.
  bool is_state_preserving_automorphism(double tol = 1e-9) const;

  static StarHom identity_automorphism(const BlockAlgebra& a,
                                       const FaithfulState& s);
  // Conjugation x -> u x u* by a unitary of the same algebra.
  static StarHom conjugation(const BlockAlgebra& a, const FaithfulState& s,
                             const AlgElement& u);

 private:
  BlockAlgebra dom_;
  FaithfulState dom_state_;
  BlockAlgebra cod_;
  FaithfulState cod_state_;
  std::vector<AlgElement> unit_images_;
};

enum class ModelKind {
  IidTensor,
  CodomainPerturbed,
  CoinMixture,
  YangBaxter,
  Custom
};

std::string to_string(ModelKind k);

// A finite window of *-homomorphic embeddings of a base algebra into an
// ambient algebra, with the mixed-moment functional psi_iota[i; a].
//
// Models whose embeddings are leg-local and whose legs are interchangeable
// (iid tensor, coin mixture) may carry a logical window larger than the
// materialized one; moments of tuples reaching beyond the materialized
// embeddings are evaluated exactly by compressing the distinct indices onto
// a short chain.
class RandomSequenceModel {
 public:
  ModelKind kind() const;
  const BlockAlgebra& base() const;
  const FaithfulState& base_state() const;
  const BlockAlgebra& ambient() const;
  const FaithfulState& ambient_state() const;

  // Logical window L: psi_moment accepts indices < window().
  int window() const;
  // Number of concretely materialized embeddings (<= window()).
  int materialized_window() const;
  const StarHom& embedding(int i) const;
  bool shift_semantics() const;
  bool leg_local() const;

  // Hermitian basis of the base algebra used by the checkers.
  const std::vector<AlgElement>& domain_hermitian_basis() const;

  // Generators of the scenario's candidate tail subalgebra, when the
  // construction provides one (the coin model's fiber scalars). Empty
  // otherwise.
  const std::vector<AlgElement>& tail_candidate_generators() const;

  // psi(iota_{i(1)}(a_1) ... iota_{i(n)}(a_n)); empty product gives 1.
  Complex moment(const IndexTuple& tuple,
                 std::span<const AlgElement> factors) const;
  // Factors given as indices into domain_hermitian_basis().
  Complex psi_moment(const IndexTuple& tuple,
                     const std::vector<int>& basis_choice) const;

  // Stable key for memoizing moments: the compressed tuple for leg-local
  // models (tuples with the same key have identical moments by
  // construction), the tuple itself otherwise.
  IndexTuple moment_key(const IndexTuple& tuple) const;

  static RandomSequenceModel make(
      ModelKind kind, BlockAlgebra base, FaithfulState base_state, int window,
      BlockAlgebra ambient, FaithfulState ambient_state,
      std::vector<StarHom> embeddings, bool shift_semantics, bool leg_local,
      std::function<RandomSequenceModel(int)> rebuild = nullptr,
      std::vector<AlgElement> tail_candidate = {});

 private:
  struct Impl;
  RandomSequenceModel() = default;

  std::shared_ptr<const Impl> impl_;
};

// Maximum number of legs a leg-local model materializes; compressed moment
// evaluation never needs more legs than the tuple length.
inline constexpr int kMaxMaterializedLegs = 8;

RandomSequenceModel iid_tensor_sequence(const BlockAlgebra& base,
                                        const FaithfulState& base_state, int L);

// The M_2 tensor chain with iota_1 replaced by Ad(U_omega on legs 0,1) of
// iota_0; omega = 1 reproduces the iid chain. Requires |omega| = 1, L >= 4.
RandomSequenceModel codomain_perturbed_sequence(Complex omega, int L);

// The unitary U_omega on M_2 (x) M_2: fixes |00>, swaps |01> and |10>,
// multiplies |11> by omega.
AlgElement perturbation_unitary(Complex omega);

struct CoinAtom {
  double p = 0.5;
  double weight = 1.0;
};

RandomSequenceModel coin_mixture_sequence(const std::vector<CoinAtom>& atoms,
                                          int L);

// Braided sequence iota_n = rho(sigma_n ... sigma_1) iota_0 where
// rho(sigma_k) conjugates legs (k-1, k) of the M_d chain by u; u must be a
// unitary in M_{d^2} satisfying the braid relation.
RandomSequenceModel yang_baxter_sequence(const AlgElement& u, int d, int L,
                                         double tol = 1e-10);

// The flip unitary on M_d (x) M_d (the symmetric-group case).
AlgElement flip_unitary(int d);

// Replaces iota_position by iota_position composed with a phi_0-preserving
// automorphism gamma of the base.
RandomSequenceModel perturbed_domain_sequence(const RandomSequenceModel& model,
                                              int position,
                                              const StarHom& gamma);

namespace detail {
// Braid-relation and unitarity residuals of u in M_{d^2} on M_d^{(x)3}.
void braid_residuals_impl(const AlgElement& u, int d, double& braid_res,
                          double& unitary_res);
}  // namespace detail

}  // namespace ncprob

#endif
