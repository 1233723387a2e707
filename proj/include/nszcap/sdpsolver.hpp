#pragma once

#include <string>
#include <vector>

#include "nszcap/matrixcore.hpp"

namespace nszcap::sdp {

enum class BlockKind { kPsdHermitian, kNonnegDiagonal };

struct Block {
  BlockKind kind = BlockKind::kPsdHermitian;
  int dim = 0;
};

/// One entry of a sparse Hermitian block-diagonal coefficient. An entry with
/// row < col stands for both A(row, col) = value and A(col, row) =
/// conj(value); diagonal entries must be real. Repeated positions add up.
struct Entry {
  int block = 0;
  int row = 0;
  int col = 0;
  Complex value;
};

using Coefficient = std::vector<Entry>;

/// <A, X> = rhs, with <A, X> = sum_blocks tr(A_b X_b).
struct Constraint {
  Coefficient coefficient;
  double rhs = 0.0;
};

/// maximize <C, X> subject to <A_k, X> = b_k and every block of X in its cone.
struct Problem {
  std::vector<Block> blocks;
  Coefficient objective;
  std::vector<Constraint> constraints;

  int add_block(BlockKind kind, int dim);
  /// Throws InputError on out-of-range entries or complex diagonal values.
  void validate() const;
};

struct Options {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
};

enum class Status { kOptimal, kInfeasible, kUnbounded, kMaxIter, kNumericalFailure };

std::string to_string(Status status);

struct Solution {
  Status status = Status::kNumericalFailure;
  double primal_value = 0.0;
  double dual_value = 0.0;
  /// |primal - dual| at the returned iterate.
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  /// Hermitian blocks of X (diagonal blocks are returned as diagonal matrices).
  std::vector<ComplexMatrix> primal_blocks;
  /// Dual slack Z = sum_k y_k A_k - C.
  std::vector<ComplexMatrix> dual_slack_blocks;
  /// One multiplier per constraint; constraints found redundant get 0.
  std::vector<double> dual_multipliers;
  /// Number of constraints dropped as linearly dependent or trivially satisfied.
  int dropped_constraints = 0;
  /// True when the problem was solved over real symmetric matrices.
  bool real_arithmetic = false;
};

/// [[Re H, -Im H], [Im H, Re H]]: H >= 0 iff the result is PSD, and
/// <realify(A), realify(B)> = 2 Re tr(A B) for Hermitian A, B.
RealMatrix realify(const ComplexMatrix& h);

/// Inverse of realify on matrices of that form; general 2n x 2n input is
/// projected onto the complex-structured subspace.
ComplexMatrix complexify(const RealMatrix& r);

/// Infeasible-start primal-dual path following (HKM direction, Mehrotra
/// predictor-corrector). Complex blocks are realified; problems whose data
/// are all real are solved directly over real symmetric matrices.
Solution solve(const Problem& problem, const Options& options = {});

/// Evaluates <A, X> for a coefficient against complex blocks.
double evaluate(const Coefficient& coefficient,
                const std::vector<ComplexMatrix>& blocks);

/// Hermitian and anti-Hermitian parts of a complex-linear functional
/// f(X) = sum tr(G_b X_b), given as general (row, col, value) entries of G.
/// Returns coefficients for Re f and Im f.
struct GeneralEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  Complex value;
};
std::pair<Coefficient, Coefficient> split_functional(
    const std::vector<GeneralEntry>& functional, double drop_tol = 1e-14);

}  // namespace nszcap::sdp
