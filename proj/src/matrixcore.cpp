#include "nszcap/matrixcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace nszcap {

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int d_first, int d_second,
                            Subsystem traced) {
  if (d_first <= 0 || d_second <= 0) {
    throw InputError("partial_trace: subsystem dimensions must be positive");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(d_first) * d_second;
  if (m.rows() != n || m.cols() != n) {
    throw InputError("partial_trace: matrix is " + std::to_string(m.rows()) +
                     "x" + std::to_string(m.cols()) + ", expected " +
                     std::to_string(n) + "-square");
  }
  if (traced == Subsystem::kFirst) {
    ComplexMatrix out = ComplexMatrix::Zero(d_second, d_second);
    for (int a = 0; a < d_first; ++a) {
      out += m.block(a * d_second, a * d_second, d_second, d_second);
    }
    return out;
  }
  ComplexMatrix out(d_first, d_first);
  for (int a1 = 0; a1 < d_first; ++a1) {
    for (int a2 = 0; a2 < d_first; ++a2) {
      out(a1, a2) = m.block(a1 * d_second, a2 * d_second, d_second, d_second)
                        .trace();
    }
  }
  return out;
}

double hermitian_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return hermitian_defect(m) <= tol;
}

bool is_real(const ComplexMatrix& m, double tol) {
  return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() <= tol;
}

HermitianEigen eig_hermitian(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    throw InputError("eig_hermitian: input is not Hermitian (defect " +
                     std::to_string(hermitian_defect(m)) + ")");
  }
  HermitianEigen out;
  if (m.rows() == 0) return out;
  if (is_real(m)) {
    RealMatrix re = 0.5 * (m.real() + m.real().transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(re);
    out.eigenvalues = solver.eigenvalues();
    out.eigenvectors = solver.eigenvectors().cast<Complex>();
    return out;
  }
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  return out;
}

ComplexMatrix support_projection(const ComplexMatrix& m, double rank_tol) {
  const HermitianEigen e = eig_hermitian(m);
  const Eigen::Index n = m.rows();
  if (n == 0) return ComplexMatrix(0, 0);
  if (e.eigenvalues(0) < -1e-8) {
    throw InputError("support_projection: matrix has negative eigenvalue " +
                     std::to_string(e.eigenvalues(0)));
  }
  const double lambda_max = e.eigenvalues(n - 1);
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  if (lambda_max <= 0.0) return p;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (e.eigenvalues(k) > rank_tol * lambda_max) {
      p += e.eigenvectors.col(k) * e.eigenvectors.col(k).adjoint();
    }
  }
  return 0.5 * (p + p.adjoint());
}

ProjectorSplit split_projector(const ComplexMatrix& projector) {
  const HermitianEigen e = eig_hermitian(projector);
  const Eigen::Index n = projector.rows();
  Eigen::Index kernel_dim = 0;
  while (kernel_dim < n && e.eigenvalues(kernel_dim) < 0.5) ++kernel_dim;
  ProjectorSplit out;
  out.kernel = e.eigenvectors.leftCols(kernel_dim);
  out.range = e.eigenvectors.rightCols(n - kernel_dim);
  return out;
}

ComplexMatrix generalized_pauli(int d, int a, int b) {
  if (d <= 0 || a < 0 || b < 0 || a >= d || b >= d) {
    throw InputError("generalized_pauli: need 0 <= a,b < d");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  // X^a Z^b |j> = w^{bj} |j + a>
  for (int j = 0; j < d; ++j) {
    const double angle = two_pi * static_cast<double>((b * j) % d) / d;
    u((j + a) % d, j) = std::polar(1.0, angle);
  }
  return u;
}

double op_norm(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    throw InputError("op_norm: input is not Hermitian");
  }
  if (m.rows() == 0) return 0.0;
  return eig_hermitian(m).eigenvalues.cwiseAbs().maxCoeff();
}

ComplexMatrix ket_bra(int d, int i, int j) {
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  out(i, j) = 1.0;
  return out;
}

ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const ComplexMatrix& m) {
  if (m.rows() == 0) return 0.0;
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  return eig_hermitian(h).eigenvalues(0);
}

}  // namespace nszcap
