#include "ncprob/matalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ncprob {

BlockAlgebra::BlockAlgebra(std::vector<int> dims) : blocks(std::move(dims)) {
  if (blocks.empty()) {
    throw ValidationError("BlockAlgebra: at least one block required");
  }
  for (int d : blocks) {
    if (d < 1) {
      throw ValidationError("BlockAlgebra: block dimension must be >= 1");
    }
  }
}

BlockAlgebra BlockAlgebra::full_matrix(int d) { return BlockAlgebra({d}); }

BlockAlgebra BlockAlgebra::commutative(int n) {
  return BlockAlgebra(std::vector<int>(static_cast<std::size_t>(n), 1));
}

std::size_t BlockAlgebra::element_dim() const {
  std::size_t s = 0;
  for (int d : blocks) s += static_cast<std::size_t>(d) * d;
  return s;
}

void require_same_algebra(const BlockAlgebra& a, const BlockAlgebra& b,
                          const char* where) {
  if (!(a == b)) {
    throw StructuralError(std::string(where) + ": algebra mismatch");
  }
}

AlgElement::AlgElement(BlockAlgebra algebra, std::vector<Matrix> mats)
    : algebra_(std::move(algebra)), mats_(std::move(mats)) {
  if (mats_.size() != algebra_.blocks.size()) {
    throw StructuralError("AlgElement: block count mismatch");
  }
  for (std::size_t b = 0; b < mats_.size(); ++b) {
    const int d = algebra_.blocks[b];
    if (mats_[b].rows() != d || mats_[b].cols() != d) {
      throw StructuralError("AlgElement: block size mismatch");
    }
  }
}

AlgElement AlgElement::zero(const BlockAlgebra& a) {
  std::vector<Matrix> m;
  m.reserve(a.blocks.size());
  for (int d : a.blocks) m.push_back(Matrix::Zero(d, d));
  return AlgElement(a, std::move(m));
}

AlgElement AlgElement::identity(const BlockAlgebra& a) {
  std::vector<Matrix> m;
  m.reserve(a.blocks.size());
  for (int d : a.blocks) m.push_back(Matrix::Identity(d, d));
  return AlgElement(a, std::move(m));
}

AlgElement AlgElement::matrix_unit(const BlockAlgebra& a, int block, int r,
                                   int c) {
  AlgElement e = zero(a);
  e.block(block)(r, c) = 1.0;
  return e;
}

AlgElement AlgElement::adjoint() const {
  std::vector<Matrix> m;
  m.reserve(mats_.size());
  for (const Matrix& x : mats_) m.push_back(x.adjoint());
  return AlgElement(algebra_, std::move(m));
}

bool AlgElement::is_hermitian(double tol) const {
  for (const Matrix& x : mats_) {
    if ((x - x.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

double AlgElement::frobenius_norm() const {
  double s = 0.0;
  for (const Matrix& x : mats_) s += x.squaredNorm();
  return std::sqrt(s);
}

double AlgElement::max_abs() const {
  double m = 0.0;
  for (const Matrix& x : mats_) {
    if (x.size() > 0) m = std::max(m, x.cwiseAbs().maxCoeff());
  }
  return m;
}

AlgElement& AlgElement::operator+=(const AlgElement& o) {
  require_same_algebra(algebra_, o.algebra_, "operator+");
  for (std::size_t b = 0; b < mats_.size(); ++b) mats_[b] += o.mats_[b];
  return *this;
}

AlgElement& AlgElement::operator-=(const AlgElement& o) {
  require_same_algebra(algebra_, o.algebra_, "operator-");
  for (std::size_t b = 0; b < mats_.size(); ++b) mats_[b] -= o.mats_[b];
  return *this;
}

AlgElement& AlgElement::operator*=(Complex s) {
  for (Matrix& x : mats_) x *= s;
  return *this;
}

AlgElement operator*(const AlgElement& a, const AlgElement& b) {
  require_same_algebra(a.algebra_, b.algebra_, "operator*");
  std::vector<Matrix> m;
  m.reserve(a.mats_.size());
  for (std::size_t i = 0; i < a.mats_.size(); ++i) {
    m.push_back(a.mats_[i] * b.mats_[i]);
  }
  return AlgElement(a.algebra_, std::move(m));
}

FaithfulState::FaithfulState(BlockAlgebra a, std::vector<double> w,
                             std::vector<Matrix> rho)
    : algebra(std::move(a)), weights(std::move(w)), densities(std::move(rho)) {
  if (weights.size() != algebra.blocks.size() ||
      densities.size() != algebra.blocks.size()) {
    throw StructuralError("FaithfulState: block count mismatch");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < weights.size(); ++b) {
    if (weights[b] <= 0.0) {
      throw ValidationError("FaithfulState: weights must be positive");
    }
    total += weights[b];
    const int d = algebra.blocks[b];
    if (densities[b].rows() != d || densities[b].cols() != d) {
      throw StructuralError("FaithfulState: density size mismatch");
    }
    if (std::abs(densities[b].trace() - Complex(1.0)) > 1e-9) {
      throw ValidationError("FaithfulState: density must have unit trace");
    }
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("FaithfulState: weights must sum to 1");
  }
}

FaithfulState FaithfulState::normalized_trace(const BlockAlgebra& a) {
  double total = 0.0;
  for (int d : a.blocks) total += d;
  std::vector<double> w;
  std::vector<Matrix> rho;
  for (int d : a.blocks) {
    w.push_back(d / total);
    rho.push_back(Matrix::Identity(d, d) / static_cast<double>(d));
  }
  return FaithfulState(a, std::move(w), std::move(rho));
}

FaithfulState FaithfulState::trace_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("trace_p: p must lie strictly between 0 and 1");
  }
  BlockAlgebra a = BlockAlgebra::commutative(2);
  return FaithfulState(a, {p, 1.0 - p},
                       {Matrix::Identity(1, 1), Matrix::Identity(1, 1)});
}

bool FaithfulState::is_tracial(double tol) const {
  for (std::size_t b = 0; b < densities.size(); ++b) {
    const int d = algebra.blocks[b];
    if ((densities[b] - Matrix::Identity(d, d) / static_cast<double>(d))
            .cwiseAbs()
            .maxCoeff() > tol) {
      return false;
    }
  }
  return true;
}

Complex state_eval(const FaithfulState& state, const AlgElement& x) {
  require_same_algebra(state.algebra, x.algebra(), "state_eval");
  Complex s = 0.0;
  for (int b = 0; b < state.algebra.num_blocks(); ++b) {
    s += state.weights[b] * (state.densities[b] * x.block(b)).trace();
  }
  return s;
}

Complex gns_inner(const FaithfulState& state, const AlgElement& x,
                  const AlgElement& y) {
  return state_eval(state, x.adjoint() * y);
}

double gns_norm(const FaithfulState& state, const AlgElement& x) {
  double v = gns_inner(state, x, x).real();
  return std::sqrt(std::max(0.0, v));
}

FaithfulnessReport check_faithful(const FaithfulState& state, double tol) {
  FaithfulnessReport rep;
  rep.min_weight = state.weights[0];
  rep.min_density_eigenvalue = std::numeric_limits<double>::infinity();
  for (int b = 0; b < state.algebra.num_blocks(); ++b) {
    rep.min_weight = std::min(rep.min_weight, state.weights[b]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(state.densities[b]);
    rep.min_density_eigenvalue =
        std::min(rep.min_density_eigenvalue, es.eigenvalues().minCoeff());
  }
  rep.faithful = rep.min_weight > tol && rep.min_density_eigenvalue > tol;
  return rep;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {

// Multi-index odometer over block tuples, leg 0 most significant.
std::vector<int> first_multi_index(int length) {
  return std::vector<int>(static_cast<std::size_t>(length), 0);
}

bool next_multi_index(std::vector<int>& idx, int radix) {
  for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
    if (++idx[i] < radix) return true;
    idx[i] = 0;
  }
  return false;
}

}  // namespace

std::pair<BlockAlgebra, FaithfulState> tensor_chain(
    const BlockAlgebra& base, const FaithfulState& base_state, int length,
    std::size_t entry_cap) {
  if (length < 1) throw ValidationError("tensor_chain: length must be >= 1");
  require_same_algebra(base, base_state.algebra, "tensor_chain");

  const int nb = base.num_blocks();
  double total_entries = 0.0;
  std::vector<int> dims;
  std::vector<double> weights;
  std::vector<Matrix> densities;
  std::vector<int> idx = first_multi_index(length);
  do {
    std::size_t d = 1;
    double w = 1.0;
    for (int leg = 0; leg < length; ++leg) {
      d *= static_cast<std::size_t>(base.blocks[idx[leg]]);
      w *= base_state.weights[idx[leg]];
    }
    if (d * d > entry_cap) {
      throw ResourceError("tensor_chain: block of dimension " +
                          std::to_string(d) + " exceeds entry cap " +
                          std::to_string(entry_cap));
    }
    total_entries += static_cast<double>(d) * static_cast<double>(d);
    if (total_entries > 4.0 * static_cast<double>(entry_cap) * nb) {
      throw ResourceError("tensor_chain: total size exceeds cap");
    }
    Matrix rho = Matrix::Identity(1, 1);
    for (int leg = 0; leg < length; ++leg) {
      rho = kron(rho, base_state.densities[idx[leg]]);
    }
    dims.push_back(static_cast<int>(d));
    weights.push_back(w);
    densities.push_back(std::move(rho));
  } while (next_multi_index(idx, nb));

  BlockAlgebra chain(dims);
  return {chain, FaithfulState(chain, std::move(weights), std::move(densities))};
}

AlgElement tensor_leg_embed(const BlockAlgebra& base, int length, int leg,
                            const AlgElement& x) {
  require_same_algebra(base, x.algebra(), "tensor_leg_embed");
  if (leg < 0 || leg >= length) {
    throw ValidationError("tensor_leg_embed: leg out of range");
  }
  const int nb = base.num_blocks();
  std::vector<Matrix> mats;
  std::vector<int> idx(static_cast<std::size_t>(length), 0);
  do {
    Matrix m = Matrix::Identity(1, 1);
    for (int j = 0; j < length; ++j) {
      const int d = base.blocks[idx[j]];
      if (j == leg) {
        m = kron(m, x.block(idx[j]));
      } else {
        m = kron(m, Matrix::Identity(d, d));
      }
    }
    mats.push_back(std::move(m));
  } while (next_multi_index(idx, nb));

  std::vector<int> dims;
  dims.reserve(mats.size());
  for (const Matrix& m : mats) dims.push_back(static_cast<int>(m.rows()));
  return AlgElement(BlockAlgebra(dims), std::move(mats));
}

std::vector<AlgElement> matrix_unit_basis(const BlockAlgebra& a) {
  std::vector<AlgElement> out;
  out.reserve(a.element_dim());
  for (int b = 0; b < a.num_blocks(); ++b) {
    const int d = a.blocks[b];
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        out.push_back(AlgElement::matrix_unit(a, b, r, c));
      }
    }
  }
  return out;
}

AlgElement pauli_x() {
  AlgElement e = AlgElement::zero(BlockAlgebra::full_matrix(2));
  e.block(0) << 0, 1, 1, 0;
  return e;
}

AlgElement pauli_y() {
  AlgElement e = AlgElement::zero(BlockAlgebra::full_matrix(2));
  e.block(0) << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return e;
}

AlgElement pauli_z() {
  AlgElement e = AlgElement::zero(BlockAlgebra::full_matrix(2));
  e.block(0) << 1, 0, 0, -1;
  return e;
}

std::vector<AlgElement> hermitian_basis(const BlockAlgebra& a) {
  if (a == BlockAlgebra::full_matrix(2)) {
    return {AlgElement::identity(a), pauli_x(), pauli_y(), pauli_z()};
  }
  std::vector<AlgElement> out;
  for (int b = 0; b < a.num_blocks(); ++b) {
    const int d = a.blocks[b];
    for (int i = 0; i < d; ++i) {
      out.push_back(AlgElement::matrix_unit(a, b, i, i));
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        AlgElement s = AlgElement::zero(a);
        s.block(b)(i, j) = 1.0;
        s.block(b)(j, i) = 1.0;
        out.push_back(s);
        AlgElement t = AlgElement::zero(a);
        t.block(b)(i, j) = Complex(0, -1);
        t.block(b)(j, i) = Complex(0, 1);
        out.push_back(t);
      }
    }
  }
  return out;
}

}  // namespace ncprob
