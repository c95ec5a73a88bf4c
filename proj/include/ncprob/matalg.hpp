#ifndef NCPROB_MATALG_HPP
#define NCPROB_MATALG_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ncprob/errors.hpp"

namespace ncprob {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// A finite direct sum of full complex matrix blocks, identified by the
// ordered list of block dimensions. Equality is structural.
struct BlockAlgebra {
  std::vector<int> blocks;

  BlockAlgebra() = default;
  explicit BlockAlgebra(std::vector<int> dims);

  // M_d as a single block.
  static BlockAlgebra full_matrix(int d);
  // C^n as n one-dimensional blocks.
  static BlockAlgebra commutative(int n);

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  // Dimension of the algebra as a vector space, sum of d_b^2.
  std::size_t element_dim() const;

  bool operator==(const BlockAlgebra&) const = default;
};

// An element of a block algebra: one dense complex matrix per block.
class AlgElement {
 public:
  AlgElement(BlockAlgebra algebra, std::vector<Matrix> mats);

  static AlgElement zero(const BlockAlgebra& a);
  static AlgElement identity(const BlockAlgebra& a);
  // Matrix unit e_{rc} supported in the given block.
  static AlgElement matrix_unit(const BlockAlgebra& a, int block, int r, int c);

  const BlockAlgebra& algebra() const { return algebra_; }
  const Matrix& block(int b) const { return mats_[b]; }
  Matrix& block(int b) { return mats_[b]; }

  AlgElement adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;
  double frobenius_norm() const;
  double max_abs() const;

  AlgElement& operator+=(const AlgElement& o);
  AlgElement& operator-=(const AlgElement& o);
  AlgElement& operator*=(Complex s);

  friend AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
  friend AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
  friend AlgElement operator*(Complex s, AlgElement a) { return a *= s; }
  friend AlgElement operator*(AlgElement a, Complex s) { return a *= s; }
  friend AlgElement operator*(const AlgElement& a, const AlgElement& b);

 private:
  BlockAlgebra algebra_;
  std::vector<Matrix> mats_;
};

void require_same_algebra(const BlockAlgebra& a, const BlockAlgebra& b,
                          const char* where);

// Block weights plus positive-definite unit-trace density matrices; together
// they define the state psi(x) = sum_b w_b tr(rho_b x_b) and its GNS form.
struct FaithfulState {
  BlockAlgebra algebra;
  std::vector<double> weights;
  std::vector<Matrix> densities;

  FaithfulState() = default;
  FaithfulState(BlockAlgebra a, std::vector<double> w, std::vector<Matrix> rho);

  // Tracial state with block weights proportional to block dimension.
  static FaithfulState normalized_trace(const BlockAlgebra& a);
  // trace_p on C^2: psi((a1, a2)) = p a1 + (1-p) a2.
  static FaithfulState trace_p(double p);

  bool is_tracial(double tol = 1e-12) const;
};

Complex state_eval(const FaithfulState& state, const AlgElement& x);
Complex gns_inner(const FaithfulState& state, const AlgElement& x,
                  const AlgElement& y);
double gns_norm(const FaithfulState& state, const AlgElement& x);

struct FaithfulnessReport {
  bool faithful = false;
  double min_density_eigenvalue = 0.0;
  double min_weight = 0.0;
};

FaithfulnessReport check_faithful(const FaithfulState& state, double tol);

// Default cap on dense complex entries per block of a tensor chain (256^2).
inline constexpr std::size_t kDefaultChainEntryCap = 65536;

std::pair<BlockAlgebra, FaithfulState> tensor_chain(
    const BlockAlgebra& base, const FaithfulState& base_state, int length,
    std::size_t entry_cap = kDefaultChainEntryCap);

// Embeds x at the given leg of the length-fold chain of its algebra,
// identity on all other legs. Leg 0 is the leftmost tensor factor.
AlgElement tensor_leg_embed(const BlockAlgebra& base, int length, int leg,
                            const AlgElement& x);

Matrix kron(const Matrix& a, const Matrix& b);

// Enumeration of the matrix units of an algebra: block-major, row-major
// within each block. This is the canonical linear basis used throughout.
std::vector<AlgElement> matrix_unit_basis(const BlockAlgebra& a);

// A hermitian spanning basis. For a single M_2 block this is the Pauli
// basis {1, sigma_x, sigma_y, sigma_z}; otherwise block-supported
// E_ii, (E_ij + E_ji), i(E_ij - E_ji).
std::vector<AlgElement> hermitian_basis(const BlockAlgebra& a);

AlgElement pauli_x();
AlgElement pauli_y();
AlgElement pauli_z();

}  // namespace ncprob

#endif
