#include "ncprob/seqmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncprob {

namespace {

std::vector<AlgElement> unit_images_of(const BlockAlgebra& dom,
                                       const std::function<AlgElement(const AlgElement&)>& f) {
  std::vector<AlgElement> images;
  for (const AlgElement& u : matrix_unit_basis(dom)) images.push_back(f(u));
  return images;
}

}  // namespace

StarHom::StarHom(BlockAlgebra dom, FaithfulState dom_state, BlockAlgebra cod,
                 FaithfulState cod_state, std::vector<AlgElement> unit_images)
    : dom_(std::move(dom)),
      dom_state_(std::move(dom_state)),
      cod_(std::move(cod)),
      cod_state_(std::move(cod_state)),
      unit_images_(std::move(unit_images)) {
  if (unit_images_.size() != dom_.element_dim()) {
    throw StructuralError("StarHom: one image per domain matrix unit required");
  }
  for (const AlgElement& im : unit_images_) {
    require_same_algebra(im.algebra(), cod_, "StarHom");
  }
}

AlgElement StarHom::apply(const AlgElement& x) const {
  require_same_algebra(x.algebra(), dom_, "StarHom::apply");
  AlgElement out = AlgElement::zero(cod_);
  std::size_t idx = 0;
  for (int b = 0; b < dom_.num_blocks(); ++b) {
    const int d = dom_.blocks[b];
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        const Complex coeff = x.block(b)(r, c);
        if (coeff != Complex(0.0)) out += coeff * unit_images_[idx];
        ++idx;
      }
    }
  }
  return out;
}

void StarHom::validate(double tol) const {
  const auto units = matrix_unit_basis(dom_);
  // Unitality: sum of diagonal-unit images is the identity.
  AlgElement unit_sum = AlgElement::zero(cod_);
  std::size_t idx = 0;
  for (int b = 0; b < dom_.num_blocks(); ++b) {
    const int d = dom_.blocks[b];
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        if (r == c) unit_sum += unit_images_[idx];
        ++idx;
      }
    }
  }
  if ((unit_sum - AlgElement::identity(cod_)).max_abs() > tol) {
    throw ValidationError("StarHom: not unital");
  }
  // Multiplicativity and *-preservation on the matrix-unit basis.
  for (std::size_t i = 0; i < units.size(); ++i) {
    if ((apply(units[i].adjoint()) - apply(units[i]).adjoint()).max_abs() > tol) {
      throw ValidationError("StarHom: not *-preserving");
    }
    for (std::size_t j = 0; j < units.size(); ++j) {
      if ((apply(units[i] * units[j]) - apply(units[i]) * apply(units[j]))
              .max_abs() > tol) {
        throw ValidationError("StarHom: not multiplicative");
      }
    }
  }
  // State compatibility: psi(iota(a)) = phi_0(a).
  for (const AlgElement& u : units) {
    if (std::abs(state_eval(cod_state_, apply(u)) - state_eval(dom_state_, u)) >
        tol) {
      throw ValidationError("StarHom: not state compatible");
    }
  }
  // Injectivity: nonsingular Gram matrix of the images.
  const std::size_t n = units.size();
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          gns_inner(cod_state_, unit_images_[i], unit_images_[j]);
    }
  }
  Eigen::JacobiSVD<Matrix> svd(gram);
  if (svd.singularValues().minCoeff() < tol) {
    throw ValidationError("StarHom: not injective");
  }
}

bool StarHom::is_state_preserving_automorphism(double tol) const {
  if (!(dom_ == cod_)) return false;
  for (const AlgElement& u : matrix_unit_basis(dom_)) {
    if (std::abs(state_eval(dom_state_, apply(u)) - state_eval(dom_state_, u)) >
        tol) {
      return false;
    }
  }
  // Surjectivity on the finite-dimensional domain follows from injectivity.
  const std::size_t n = unit_images_.size();
  Matrix gram(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          gns_inner(dom_state_, unit_images_[i], unit_images_[j]);
    }
  }
  Eigen::JacobiSVD<Matrix> svd(gram);
  return svd.singularValues().minCoeff() > tol;
}

StarHom StarHom::identity_automorphism(const BlockAlgebra& a,
                                       const FaithfulState& s) {
  return StarHom(a, s, a, s, matrix_unit_basis(a));
}

StarHom StarHom::conjugation(const BlockAlgebra& a, const FaithfulState& s,
                             const AlgElement& u) {
  require_same_algebra(a, u.algebra(), "StarHom::conjugation");
  const AlgElement uadj = u.adjoint();
  return StarHom(a, s, a, s, unit_images_of(a, [&](const AlgElement& x) {
                   return u * x * uadj;
                 }));
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::IidTensor: return "iid_tensor";
    case ModelKind::CodomainPerturbed: return "codomain_perturbed";
    case ModelKind::CoinMixture: return "coin_mixture";
    case ModelKind::YangBaxter: return "yang_baxter";
    case ModelKind::Custom: return "custom";
  }
  return "unknown";
}

struct RandomSequenceModel::Impl {
  ModelKind kind = ModelKind::Custom;
  BlockAlgebra base;
  FaithfulState base_state;
  int window = 0;
  BlockAlgebra ambient;
  FaithfulState ambient_state;
  std::vector<StarHom> embeddings;
  bool shift_semantics = true;
  bool leg_local = false;
  std::function<RandomSequenceModel(int)> rebuild;
  std::vector<AlgElement> tail_candidate;
  std::vector<AlgElement> herm_basis;
  std::vector<std::vector<AlgElement>> herm_images;

  mutable std::mutex cache_mutex;
  mutable std::map<int, std::shared_ptr<const RandomSequenceModel>> cache;

  // Memoized psi-moments, keyed by moment_key(tuple) and the basis choice.
  // The model is immutable, so caching is always sound; for leg-local models
  // the key is the order-canonical tuple, sharing entries across a class.
  mutable std::mutex psi_mutex;
  mutable std::map<std::pair<std::vector<int>, std::vector<int>>, Complex>
      psi_cache;
};

ModelKind RandomSequenceModel::kind() const { return impl_->kind; }
const BlockAlgebra& RandomSequenceModel::base() const { return impl_->base; }
const FaithfulState& RandomSequenceModel::base_state() const {
  return impl_->base_state;
}
const BlockAlgebra& RandomSequenceModel::ambient() const {
  return impl_->ambient;
}
const FaithfulState& RandomSequenceModel::ambient_state() const {
  return impl_->ambient_state;
}
int RandomSequenceModel::window() const { return impl_->window; }
int RandomSequenceModel::materialized_window() const {
  return static_cast<int>(impl_->embeddings.size());
}
bool RandomSequenceModel::shift_semantics() const {
  return impl_->shift_semantics;
}
bool RandomSequenceModel::leg_local() const { return impl_->leg_local; }
const std::vector<AlgElement>& RandomSequenceModel::domain_hermitian_basis()
    const {
  return impl_->herm_basis;
}
const std::vector<AlgElement>& RandomSequenceModel::tail_candidate_generators()
    const {
  return impl_->tail_candidate;
}

const StarHom& RandomSequenceModel::embedding(int i) const {
  if (i < 0 || i >= materialized_window()) {
    throw WindowError("embedding index " + std::to_string(i) +
                      " outside materialized window " +
                      std::to_string(materialized_window()));
  }
  return impl_->embeddings[static_cast<std::size_t>(i)];
}

RandomSequenceModel RandomSequenceModel::make(
    ModelKind kind, BlockAlgebra base, FaithfulState base_state, int window,
    BlockAlgebra ambient, FaithfulState ambient_state,
    std::vector<StarHom> embeddings, bool shift_semantics, bool leg_local,
    std::function<RandomSequenceModel(int)> rebuild,
    std::vector<AlgElement> tail_candidate) {
  if (window < 1) throw ValidationError("RandomSequenceModel: window must be >= 1");
  if (embeddings.empty()) {
    throw ValidationError("RandomSequenceModel: at least one embedding");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = kind;
  impl->base = std::move(base);
  impl->base_state = std::move(base_state);
  impl->window = window;
  impl->ambient = std::move(ambient);
  impl->ambient_state = std::move(ambient_state);
  impl->embeddings = std::move(embeddings);
  impl->shift_semantics = shift_semantics;
  impl->leg_local = leg_local;
  impl->rebuild = std::move(rebuild);
  impl->tail_candidate = std::move(tail_candidate);
  impl->herm_basis = hermitian_basis(impl->base);
  impl->herm_images.reserve(impl->embeddings.size());
  for (const StarHom& e : impl->embeddings) {
    std::vector<AlgElement> row;
    row.reserve(impl->herm_basis.size());
    for (const AlgElement& h : impl->herm_basis) row.push_back(e.apply(h));
    impl->herm_images.push_back(std::move(row));
  }
  RandomSequenceModel m;
  m.impl_ = std::move(impl);
  return m;
}

IndexTuple RandomSequenceModel::moment_key(const IndexTuple& tuple) const {
  if (!impl_->leg_local) return tuple;
  return canon(TupleRelation::Order, tuple);
}

namespace {

const RandomSequenceModel& submodel_for(
    const std::function<RandomSequenceModel(int)>& rebuild, int legs,
    std::mutex& mu,
    std::map<int, std::shared_ptr<const RandomSequenceModel>>& cache) {
  std::scoped_lock lock(mu);
  auto it = cache.find(legs);
  if (it == cache.end()) {
    it = cache
             .emplace(legs, std::make_shared<const RandomSequenceModel>(
                                rebuild(legs)))
             .first;
  }
  return *it->second;
}

}  // namespace

Complex RandomSequenceModel::moment(const IndexTuple& tuple,
                                    std::span<const AlgElement> factors) const {
  if (static_cast<std::size_t>(tuple.size()) != factors.size()) {
    throw ValidationError("moment: tuple and factor count mismatch");
  }
  if (tuple.size() == 0) return Complex(1.0);
  if (tuple.max_entry() >= impl_->window) {
    throw WindowError("moment: index " + std::to_string(tuple.max_entry()) +
                      " beyond window " + std::to_string(impl_->window) +
                      "; rebuild the model with a larger window");
  }
  if (impl_->leg_local && impl_->rebuild) {
    // Exact compression: relabel the distinct indices onto 0..k-1 and
    // evaluate on the shortest chain hosting them; valid because all legs
    // carry identical, leg-local embeddings.
    std::vector<int> distinct = tuple.entries;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    const int legs = static_cast<int>(distinct.size());
    if (legs > kMaxMaterializedLegs) {
      throw ResourceError("moment: tuple touches " + std::to_string(legs) +
                          " distinct legs, above the materialization cap " +
                          std::to_string(kMaxMaterializedLegs));
    }
    if (legs < materialized_window() || tuple.max_entry() >= materialized_window()) {
      std::vector<int> compressed(tuple.entries.size());
      for (std::size_t i = 0; i < tuple.entries.size(); ++i) {
        compressed[i] = static_cast<int>(
            std::lower_bound(distinct.begin(), distinct.end(),
                             tuple.entries[i]) -
            distinct.begin());
      }
      const RandomSequenceModel& sub = submodel_for(
          impl_->rebuild, legs, impl_->cache_mutex, impl_->cache);
      return sub.moment(IndexTuple(std::move(compressed)), factors);
    }
  }
  if (tuple.max_entry() >= materialized_window()) {
    throw WindowError("moment: index beyond materialized window and model is "
                      "not leg-local");
  }
  // Direct evaluation in the materialized ambient algebra.
  AlgElement prod = embedding(tuple[0]).apply(factors[0]);
  for (int k = 1; k < tuple.size(); ++k) {
    prod = prod * embedding(tuple[k]).apply(factors[static_cast<std::size_t>(k)]);
  }
  return state_eval(impl_->ambient_state, prod);
}

Complex RandomSequenceModel::psi_moment(
    const IndexTuple& tuple, const std::vector<int>& basis_choice) const {
  if (static_cast<std::size_t>(tuple.size()) != basis_choice.size()) {
    throw ValidationError("psi_moment: tuple and basis choice length mismatch");
  }
  if (tuple.size() == 0) return Complex(1.0);
  for (int h : basis_choice) {
    if (h < 0 || h >= static_cast<int>(impl_->herm_basis.size())) {
      throw ValidationError("psi_moment: basis index out of range");
    }
  }
  if (tuple.max_entry() >= impl_->window) {
    throw WindowError("psi_moment: index beyond window " +
                      std::to_string(impl_->window));
  }
  // For leg-local models the moment depends only on the order class, so
  // evaluating the canonical (compressed) tuple is exact and keeps the
  // products on the shortest possible chain.
  const IndexTuple key = moment_key(tuple);
  {
    std::scoped_lock lock(impl_->psi_mutex);
    auto it = impl_->psi_cache.find({key.entries, basis_choice});
    if (it != impl_->psi_cache.end()) return it->second;
  }
  const IndexTuple& eval_tuple = impl_->leg_local ? key : tuple;
  Complex value;
  const int legs = eval_tuple.max_entry() + 1;
  if (impl_->leg_local && impl_->rebuild && legs < materialized_window()) {
    // Evaluate on the shortest sub-chain that hosts the compressed tuple;
    // products on 2^legs dimensions instead of the full materialized chain.
    const RandomSequenceModel& sub = submodel_for(
        impl_->rebuild, legs, impl_->cache_mutex, impl_->cache);
    value = sub.psi_moment(eval_tuple, basis_choice);
  } else if (eval_tuple.max_entry() < materialized_window()) {
    // Fast path through the precomputed hermitian images.
    const auto& imgs = impl_->herm_images;
    AlgElement prod = imgs[static_cast<std::size_t>(eval_tuple[0])]
                          [static_cast<std::size_t>(basis_choice[0])];
    for (int k = 1; k < eval_tuple.size(); ++k) {
      prod = prod * imgs[static_cast<std::size_t>(eval_tuple[k])]
                        [static_cast<std::size_t>(basis_choice[k])];
    }
    value = state_eval(impl_->ambient_state, prod);
  } else {
    std::vector<AlgElement> factors;
    factors.reserve(basis_choice.size());
    for (int h : basis_choice) {
      factors.push_back(impl_->herm_basis[static_cast<std::size_t>(h)]);
    }
    value = moment(eval_tuple, factors);
  }
  {
    std::scoped_lock lock(impl_->psi_mutex);
    impl_->psi_cache.emplace(std::pair{key.entries, basis_choice}, value);
  }
  return value;
}

RandomSequenceModel iid_tensor_sequence(const BlockAlgebra& base,
                                        const FaithfulState& base_state,
                                        int L) {
  if (L < 1) throw ValidationError("iid_tensor_sequence: L must be >= 1");
  const int mat = std::min(L, kMaxMaterializedLegs);
  auto [chain, chain_state] = tensor_chain(base, base_state, mat);
  std::vector<StarHom> embeddings;
  embeddings.reserve(static_cast<std::size_t>(mat));
  for (int leg = 0; leg < mat; ++leg) {
    std::vector<AlgElement> images;
    for (const AlgElement& u : matrix_unit_basis(base)) {
      images.push_back(tensor_leg_embed(base, mat, leg, u));
    }
    embeddings.emplace_back(base, base_state, chain, chain_state,
                            std::move(images));
  }
  auto rebuild = [base, base_state](int legs) {
    return iid_tensor_sequence(base, base_state, legs);
  };
  return RandomSequenceModel::make(
      ModelKind::IidTensor, base, base_state, L, chain, chain_state,
      std::move(embeddings), /*shift_semantics=*/true, /*leg_local=*/true,
      rebuild);
}

AlgElement perturbation_unitary(Complex omega) {
  AlgElement u = AlgElement::zero(BlockAlgebra::full_matrix(4));
  u.block(0)(0, 0) = 1.0;
  u.block(0)(1, 2) = 1.0;
  u.block(0)(2, 1) = 1.0;
  u.block(0)(3, 3) = omega;
  return u;
}

RandomSequenceModel codomain_perturbed_sequence(Complex omega, int L) {
  if (std::abs(std::abs(omega) - 1.0) > 1e-12) {
    throw ValidationError("codomain_perturbed_sequence: omega must be unimodular");
  }
  if (L < 4) throw ValidationError("codomain_perturbed_sequence: L must be >= 4");
  if (L > kMaxMaterializedLegs) {
    throw ResourceError("codomain_perturbed_sequence: window above chain cap");
  }
  const BlockAlgebra base = BlockAlgebra::full_matrix(2);
  const FaithfulState base_state = FaithfulState::normalized_trace(base);
  auto [chain, chain_state] = tensor_chain(base, base_state, L);

  // U_omega amplified to legs 0,1 of the chain.
  const AlgElement u4 = perturbation_unitary(omega);
  const int tail_dim = 1 << (L - 2);
  AlgElement u_amp = AlgElement::zero(chain);
  u_amp.block(0) = kron(u4.block(0), Matrix::Identity(tail_dim, tail_dim));
  const AlgElement u_amp_adj = u_amp.adjoint();

  std::vector<StarHom> embeddings;
  for (int n = 0; n < L; ++n) {
    std::vector<AlgElement> images;
    for (const AlgElement& unit : matrix_unit_basis(base)) {
      if (n == 1) {
        const AlgElement at0 = tensor_leg_embed(base, L, 0, unit);
        images.push_back(u_amp * at0 * u_amp_adj);
      } else {
        images.push_back(tensor_leg_embed(base, L, n, unit));
      }
    }
    embeddings.emplace_back(base, base_state, chain, chain_state,
                            std::move(images));
  }
  return RandomSequenceModel::make(
      ModelKind::CodomainPerturbed, base, base_state, L, chain, chain_state,
      std::move(embeddings), /*shift_semantics=*/false, /*leg_local=*/false);
}

RandomSequenceModel coin_mixture_sequence(const std::vector<CoinAtom>& atoms,
                                          int L) {
  if (atoms.empty()) throw ValidationError("coin_mixture_sequence: no atoms");
  if (L < 1) throw ValidationError("coin_mixture_sequence: L must be >= 1");
  double wsum = 0.0;
  for (const CoinAtom& a : atoms) {
    if (!(a.weight > 0.0)) {
      throw ValidationError("coin_mixture_sequence: weights must be positive");
    }
    if (!(a.p > 0.0 && a.p < 1.0)) {
      throw ValidationError("coin_mixture_sequence: p must lie in (0, 1)");
    }
    wsum += a.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw ValidationError("coin_mixture_sequence: weights must sum to 1");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (atoms[i].p == atoms[j].p) {
        throw ValidationError("coin_mixture_sequence: atoms must be distinct");
      }
    }
  }

  const int mat = std::min(L, kMaxMaterializedLegs);
  const BlockAlgebra base = BlockAlgebra::commutative(2);
  double pbar = 0.0;
  for (const CoinAtom& a : atoms) pbar += a.weight * a.p;
  const FaithfulState base_state = FaithfulState::trace_p(pbar);

  // Ambient: direct sum over atoms of the 2^mat one-dimensional fibers of
  // the coin chain, fiber weights w_k * prod(p_k or 1 - p_k).
  const int fibers = 1 << mat;
  std::vector<int> dims;
  std::vector<double> weights;
  std::vector<Matrix> densities;
  for (const CoinAtom& a : atoms) {
    for (int bits = 0; bits < fibers; ++bits) {
      double w = a.weight;
      for (int leg = 0; leg < mat; ++leg) {
        const bool tails = (bits >> (mat - 1 - leg)) & 1;
        w *= tails ? (1.0 - a.p) : a.p;
      }
      dims.push_back(1);
      weights.push_back(w);
      densities.push_back(Matrix::Identity(1, 1));
    }
  }
  BlockAlgebra ambient(dims);
  FaithfulState ambient_state(ambient, std::move(weights), std::move(densities));

  std::vector<StarHom> embeddings;
  for (int leg = 0; leg < mat; ++leg) {
    std::vector<AlgElement> images;
    for (int comp = 0; comp < 2; ++comp) {  // matrix units of C^2
      AlgElement im = AlgElement::zero(ambient);
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        for (int bits = 0; bits < fibers; ++bits) {
          const int bit = (bits >> (mat - 1 - leg)) & 1;
          if (bit == comp) {
            im.block(static_cast<int>(k) * fibers + bits)(0, 0) = 1.0;
          }
        }
      }
      images.push_back(std::move(im));
    }
    embeddings.emplace_back(base, base_state, ambient, ambient_state,
                            std::move(images));
  }

  // Candidate tail: the fiber scalars, one indicator per atom.
  std::vector<AlgElement> tail;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    AlgElement ind = AlgElement::zero(ambient);
    for (int bits = 0; bits < fibers; ++bits) {
      ind.block(static_cast<int>(k) * fibers + bits)(0, 0) = 1.0;
    }
    tail.push_back(std::move(ind));
  }

  auto rebuild = [atoms](int legs) { return coin_mixture_sequence(atoms, legs); };
  return RandomSequenceModel::make(
      ModelKind::CoinMixture, base, base_state, L, ambient, ambient_state,
      std::move(embeddings), /*shift_semantics=*/true, /*leg_local=*/true,
      rebuild, std::move(tail));
}

AlgElement flip_unitary(int d) {
  AlgElement u = AlgElement::zero(BlockAlgebra::full_matrix(d * d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      u.block(0)(i * d + j, j * d + i) = 1.0;
    }
  }
  return u;
}

namespace {

// Residual of the braid relation of u on M_d^{(x)3}; also reports the
// unitarity defect. Shared with symcheck's public checker.
void braid_residuals(const AlgElement& u, int d, double& braid_res,
                     double& unitary_res) {
  if (!(u.algebra() == BlockAlgebra::full_matrix(d * d))) {
    throw StructuralError("braid: u must live in M_{d^2}");
  }
  const Matrix& m = u.block(0);
  unitary_res = (m.adjoint() * m - Matrix::Identity(d * d, d * d))
                    .cwiseAbs()
                    .maxCoeff();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix u12 = kron(m, id);
  const Matrix u23 = kron(id, m);
  braid_res = (u12 * u23 * u12 - u23 * u12 * u23).cwiseAbs().maxCoeff();
}

}  // namespace

namespace detail {
void braid_residuals_impl(const AlgElement& u, int d, double& braid_res,
                          double& unitary_res) {
  braid_residuals(u, d, braid_res, unitary_res);
}
}  // namespace detail

RandomSequenceModel yang_baxter_sequence(const AlgElement& u, int d, int L,
                                         double tol) {
  if (L < 2) throw ValidationError("yang_baxter_sequence: L must be >= 2");
  if (L > kMaxMaterializedLegs) {
    throw ResourceError("yang_baxter_sequence: window above chain cap");
  }
  double braid_res = 0.0, unitary_res = 0.0;
  braid_residuals(u, d, braid_res, unitary_res);
  if (unitary_res > tol) {
    throw PreconditionError("yang_baxter_sequence: u is not unitary, residual " +
                            std::to_string(unitary_res));
  }
  if (braid_res > tol) {
    throw PreconditionError(
        "yang_baxter_sequence: braid relation violated, residual " +
        std::to_string(braid_res));
  }

  const BlockAlgebra base = BlockAlgebra::full_matrix(d);
  const FaithfulState base_state = FaithfulState::normalized_trace(base);
  auto [chain, chain_state] = tensor_chain(base, base_state, L);

  // rho(sigma_k) = Ad(u on legs (k-1, k)) as a chain unitary, k = 1..L-1.
  const int chain_dim = chain.blocks[0];
  std::vector<Matrix> sigma;
  for (int k = 1; k < L; ++k) {
    const int left = 1;
    Matrix m = Matrix::Identity(left, left);
    for (int pre = 0; pre < k - 1; ++pre) m = kron(m, Matrix::Identity(d, d));
    m = kron(m, u.block(0));
    for (int post = k + 1; post < L; ++post) m = kron(m, Matrix::Identity(d, d));
    if (m.rows() != chain_dim) throw InternalError("yang_baxter: size mismatch");
    sigma.push_back(std::move(m));
  }

  std::vector<StarHom> embeddings;
  for (int n = 0; n < L; ++n) {
    // V_n = rho(sigma_n) ... rho(sigma_1); iota_n = Ad(V_n) iota_0.
    Matrix v = Matrix::Identity(chain_dim, chain_dim);
    for (int k = n; k >= 1; --k) v = v * sigma[static_cast<std::size_t>(k - 1)];
    std::vector<AlgElement> images;
    for (const AlgElement& unit : matrix_unit_basis(base)) {
      const AlgElement at0 = tensor_leg_embed(base, L, 0, unit);
      AlgElement im = AlgElement::zero(chain);
      im.block(0) = v * at0.block(0) * v.adjoint();
      images.push_back(std::move(im));
    }
    embeddings.emplace_back(base, base_state, chain, chain_state,
                            std::move(images));
  }
  return RandomSequenceModel::make(
      ModelKind::YangBaxter, base, base_state, L, chain, chain_state,
      std::move(embeddings), /*shift_semantics=*/true, /*leg_local=*/false);
}

RandomSequenceModel perturbed_domain_sequence(const RandomSequenceModel& model,
                                              int position,
                                              const StarHom& gamma) {
  if (position < 0 || position >= model.materialized_window()) {
    throw WindowError("perturbed_domain_sequence: position outside the "
                      "materialized window");
  }
  if (!(gamma.domain() == model.base()) || !(gamma.codomain() == model.base())) {
    throw ValidationError("perturbed_domain_sequence: gamma must be an "
                          "automorphism of the base");
  }
  if (!gamma.is_state_preserving_automorphism()) {
    throw ValidationError("perturbed_domain_sequence: gamma must preserve the "
                          "base state");
  }
  std::vector<StarHom> embeddings;
  for (int n = 0; n < model.materialized_window(); ++n) {
    if (n != position) {
      embeddings.push_back(model.embedding(n));
      continue;
    }
    std::vector<AlgElement> images;
    for (const AlgElement& unit : matrix_unit_basis(model.base())) {
      images.push_back(model.embedding(n).apply(gamma.apply(unit)));
    }
    embeddings.emplace_back(model.base(), model.base_state(), model.ambient(),
                            model.ambient_state(), std::move(images));
  }
  return RandomSequenceModel::make(
      ModelKind::Custom, model.base(), model.base_state(),
      model.materialized_window(), model.ambient(), model.ambient_state(),
      std::move(embeddings), /*shift_semantics=*/false, /*leg_local=*/false);
}

}  // namespace ncprob
