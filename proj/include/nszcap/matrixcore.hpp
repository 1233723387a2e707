#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nszcap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised for malformed user input: wrong dimensions, non-Hermitian data,
/// invalid channel parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Subsystem { kFirst, kSecond };

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-9;

/// Kronecker product; row index of the result is i * rows(B) + k.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Partial trace of a (d_first * d_second)-square operator with ordering
/// first (x) second.
ComplexMatrix partial_trace(const ComplexMatrix& m, int d_first, int d_second,
                            Subsystem traced);

/// max_ij |M_ij - conj(M_ji)|; infinity for non-square input.
double hermitian_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

/// True when every imaginary part is at most `tol` in magnitude.
bool is_real(const ComplexMatrix& m, double tol = 1e-13);

struct HermitianEigen {
  RealVector eigenvalues;     // ascending
  ComplexMatrix eigenvectors;  // columns, unitary
};

/// Dense Hermitian eigendecomposition. Real-valued inputs are diagonalised in
/// real arithmetic so that the eigenvectors come back real as well.
HermitianEigen eig_hermitian(const ComplexMatrix& m);

/// Orthogonal projector onto span{v_i : lambda_i > rank_tol * lambda_max}.
ComplexMatrix support_projection(const ComplexMatrix& m,
                                 double rank_tol = kDefaultRankTol);

/// Orthonormal bases for the range and the kernel of a projector, so that
/// [range | kernel] is unitary.
struct ProjectorSplit {
  ComplexMatrix range;
  ComplexMatrix kernel;
};
ProjectorSplit split_projector(const ComplexMatrix& projector);

/// U_{a,b} = X^a Z^b with X|j> = |j+1 mod d>, Z|j> = w^j |j>, w = e^{2 pi i/d}.
ComplexMatrix generalized_pauli(int d, int a, int b);

/// Largest absolute eigenvalue of a Hermitian matrix.
double op_norm(const ComplexMatrix& m);

/// |i><j| in dimension d.
ComplexMatrix ket_bra(int d, int i, int j);

ComplexMatrix identity(int d);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Smallest eigenvalue of the Hermitian part of `m`.
double min_eigenvalue(const ComplexMatrix& m);

}  // namespace nszcap
