#include "nszcap/sdpsolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <tuple>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace nszcap::sdp {

namespace {

// Blocks up to this real dimension use the vectorized Schur kernel.
constexpr int kSmallBlock = 16;
constexpr double kStepFraction = 0.98;
constexpr double kDivergence = 1e8;

struct Triplet {
  int r;
  int c;
  double v;
};

// Real symmetric image of one input block.
struct RealBlock {
  bool diagonal = false;
  bool doubled = false;   // realified complex block
  int input_dim = 0;
  int n = 0;              // real dimension
  std::vector<int> rows;  // constraint indices touching the block
  std::vector<std::vector<Triplet>> coef;  // parallel to rows
  std::vector<Triplet> objective;
};

struct RealProblem {
  std::vector<RealBlock> blocks;
  RealVector b;
  std::vector<int> origin;  // working row -> input constraint index
  int m() const { return static_cast<int>(b.size()); }
};

void append_entry(const Entry& e, bool doubled, bool diagonal, int n,
                  std::vector<Triplet>& out) {
  const double a = e.value.real();
  const double b = e.value.imag();
  if (diagonal) {
    if (a != 0.0) out.push_back({e.row, e.row, a});
    return;
  }
  if (!doubled) {
    if (a == 0.0) return;
    out.push_back({e.row, e.col, a});
    if (e.row != e.col) out.push_back({e.col, e.row, a});
    return;
  }
  const int r = e.row;
  const int c = e.col;
  if (r == c) {
    if (a != 0.0) {
      out.push_back({r, r, 0.5 * a});
      out.push_back({r + n, r + n, 0.5 * a});
    }
    return;
  }
  if (a != 0.0) {
    const double h = 0.5 * a;
    out.push_back({r, c, h});
    out.push_back({c, r, h});
    out.push_back({r + n, c + n, h});
    out.push_back({c + n, r + n, h});
  }
  if (b != 0.0) {
    const double h = 0.5 * b;
    out.push_back({r, c + n, -h});
    out.push_back({c, r + n, h});
    out.push_back({r + n, c, h});
    out.push_back({c + n, r, -h});
  }
}

// Imaginary content of a coefficient that survives on real symmetric blocks.
struct ImagProfile {
  bool has_real = false;
  bool has_imag = false;
};

ImagProfile profile(const Coefficient& coef, const std::vector<Block>& blocks) {
  ImagProfile p;
  for (const auto& e : coef) {
    if (e.value.real() != 0.0) p.has_real = true;
    if (blocks[e.block].kind == BlockKind::kPsdHermitian && e.row != e.col &&
        e.value.imag() != 0.0) {
      p.has_imag = true;
    }
  }
  return p;
}

double dot(const std::vector<Triplet>& t, const RealMatrix& x) {
  double s = 0.0;
  for (const auto& e : t) s += e.v * x(e.r, e.c);
  return s;
}

// A(X) over all working rows.
RealVector apply_a(const RealProblem& p, const std::vector<RealMatrix>& x) {
  RealVector out = RealVector::Zero(p.m());
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const auto& blk = p.blocks[k];
    for (std::size_t i = 0; i < blk.rows.size(); ++i) {
      out(blk.rows[i]) += dot(blk.coef[i], x[k]);
    }
  }
  return out;
}

// sum_i y_i A_i per block.
std::vector<RealMatrix> apply_at(const RealProblem& p, const RealVector& y) {
  std::vector<RealMatrix> out;
  out.reserve(p.blocks.size());
  for (const auto& blk : p.blocks) {
    RealMatrix m = RealMatrix::Zero(blk.n, blk.n);
    for (std::size_t i = 0; i < blk.rows.size(); ++i) {
      const double yi = y(blk.rows[i]);
      if (yi == 0.0) continue;
      for (const auto& e : blk.coef[i]) m(e.r, e.c) += yi * e.v;
    }
    out.push_back(std::move(m));
  }
  return out;
}

RealMatrix dense_of(const std::vector<Triplet>& t, int n) {
  RealMatrix m = RealMatrix::Zero(n, n);
  for (const auto& e : t) m(e.r, e.c) += e.v;
  return m;
}

// M_ij = sum_blocks tr(A_i X A_j Zinv).
RealMatrix schur_complement(const RealProblem& p, const std::vector<RealMatrix>& x,
                            const std::vector<RealMatrix>& zinv) {
  const int m = p.m();
  RealMatrix schur = RealMatrix::Zero(m, m);
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const auto& blk = p.blocks[k];
    const int n = blk.n;
    const int mb = static_cast<int>(blk.rows.size());
    if (mb == 0) continue;
    const RealMatrix& xk = x[k];
    const RealMatrix& zk = zinv[k];

    if (n <= kSmallBlock) {
      RealMatrix a = RealMatrix::Zero(mb, n * n);
      for (int i = 0; i < mb; ++i) {
        for (const auto& e : blk.coef[i]) a(i, e.r * n + e.c) += e.v;
      }
      RealMatrix kron(n * n, n * n);
      for (int pp = 0; pp < n; ++pp) {
        for (int q = 0; q < n; ++q) {
          for (int r = 0; r < n; ++r) {
            for (int s = 0; s < n; ++s) {
              kron(pp * n + q, r * n + s) = xk(q, r) * zk(s, pp);
            }
          }
        }
      }
      const RealMatrix block_schur = (a * kron) * a.transpose();
      for (int i = 0; i < mb; ++i) {
        for (int j = 0; j < mb; ++j) {
          schur(blk.rows[i], blk.rows[j]) += block_schur(i, j);
        }
      }
      continue;
    }

    std::vector<int> sparse_idx;
    std::vector<int> dense_idx;
    for (int i = 0; i < mb; ++i) {
      if (static_cast<int>(blk.coef[i].size()) > 4 * n) {
        dense_idx.push_back(i);
      } else {
        sparse_idx.push_back(i);
      }
    }

    for (std::size_t dj = 0; dj < dense_idx.size(); ++dj) {
      const int j = dense_idx[dj];
      const RealMatrix h = xk * dense_of(blk.coef[j], n) * zk;
      auto pair_value = [&](int i) {
        double s = 0.0;
        for (const auto& e : blk.coef[i]) s += e.v * h(e.c, e.r);
        return s;
      };
      for (int i : sparse_idx) {
        const double s = pair_value(i);
        schur(blk.rows[i], blk.rows[j]) += s;
        schur(blk.rows[j], blk.rows[i]) += s;
      }
      for (std::size_t di = 0; di <= dj; ++di) {
        const int i = dense_idx[di];
        const double s = pair_value(i);
        schur(blk.rows[i], blk.rows[j]) += s;
        if (i != j) schur(blk.rows[j], blk.rows[i]) += s;
      }
    }

    for (std::size_t si = 0; si < sparse_idx.size(); ++si) {
      const auto& ai = blk.coef[sparse_idx[si]];
      const int row_i = blk.rows[sparse_idx[si]];
      for (std::size_t sj = si; sj < sparse_idx.size(); ++sj) {
        const auto& aj = blk.coef[sparse_idx[sj]];
        double s = 0.0;
        for (const auto& ei : ai) {
          for (const auto& ej : aj) {
            s += ei.v * ej.v * xk(ei.c, ej.r) * zk(ej.c, ei.r);
          }
        }
        const int row_j = blk.rows[sparse_idx[sj]];
        schur(row_i, row_j) += s;
        if (sj != si) schur(row_j, row_i) += s;
      }
    }
  }
  return schur;
}

// Largest step alpha with x + alpha * dx PSD (infinity if unbounded).
double max_step(const RealMatrix& x, const RealMatrix& dx) {
  Eigen::LLT<RealMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const RealMatrix l_inv_dx =
      llt.matrixL().solve(dx);
  const RealMatrix w = llt.matrixL().solve(l_inv_dx.transpose());
  const RealMatrix sym = 0.5 * (w + w.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues()(0);
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

double block_dot(const std::vector<RealMatrix>& a, const std::vector<RealMatrix>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double max_abs(const std::vector<RealMatrix>& a) {
  double s = 0.0;
  for (const auto& m : a) {
    if (m.size() > 0) s = std::max(s, m.cwiseAbs().maxCoeff());
  }
  return s;
}

// Rows of the Gram matrix that are linearly independent. Returns false when a
// dependent row carries an inconsistent right-hand side.
bool independent_rows(const RealMatrix& gram, const RealVector& b,
                      std::vector<int>& keep) {
  const int m = static_cast<int>(gram.rows());
  keep.clear();
  if (m == 0) return true;
  const double scale = std::max(1.0, gram.diagonal().maxCoeff());
  {
    Eigen::LLT<RealMatrix> llt(gram);
    if (llt.info() == Eigen::Success) {
      const RealMatrix& l = llt.matrixLLT();
      bool clean = true;
      for (int i = 0; i < m && clean; ++i) {
        const double pivot = l(i, i) * l(i, i);
        if (!(pivot > 1e-10 * std::max(gram(i, i), 1e-300))) clean = false;
      }
      if (clean) {
        for (int i = 0; i < m; ++i) keep.push_back(i);
        return true;
      }
    }
  }
  Eigen::LDLT<RealMatrix> ldlt(gram);
  RealVector order(m);
  for (int i = 0; i < m; ++i) order(i) = i;
  order = ldlt.transpositionsP() * order;
  const RealVector d = ldlt.vectorD();
  std::vector<int> dropped;
  for (int k = 0; k < m; ++k) {
    const int row = static_cast<int>(order(k));
    if (d(k) > 1e-10 * scale) {
      keep.push_back(row);
    } else {
      dropped.push_back(row);
    }
  }
  std::sort(keep.begin(), keep.end());
  if (dropped.empty()) return true;
  const int r = static_cast<int>(keep.size());
  RealMatrix gbb(r, r);
  RealVector bb(r);
  for (int i = 0; i < r; ++i) {
    bb(i) = b(keep[i]);
    for (int j = 0; j < r; ++j) gbb(i, j) = gram(keep[i], keep[j]);
  }
  Eigen::LDLT<RealMatrix> basis(gbb);
  const double bscale = 1.0 + b.cwiseAbs().maxCoeff();
  for (int row : dropped) {
    RealVector g(r);
    for (int i = 0; i < r; ++i) g(i) = gram(keep[i], row);
    const RealVector c = basis.solve(g);
    if (std::abs(b(row) - c.dot(bb)) > 1e-7 * bscale) return false;
  }
  return true;
}

RealProblem build_real_problem(const Problem& problem, bool real_mode,
                               std::vector<int>& candidate_rows) {
  RealProblem rp;
  rp.blocks.resize(problem.blocks.size());
  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    auto& blk = rp.blocks[k];
    blk.diagonal = problem.blocks[k].kind == BlockKind::kNonnegDiagonal;
    blk.input_dim = problem.blocks[k].dim;
    blk.doubled = !blk.diagonal && !real_mode;
    blk.n = blk.doubled ? 2 * blk.input_dim : blk.input_dim;
  }
  for (const auto& e : problem.objective) {
    auto& blk = rp.blocks[e.block];
    append_entry(e, blk.doubled, blk.diagonal, blk.input_dim, blk.objective);
  }
  rp.b.resize(static_cast<Eigen::Index>(candidate_rows.size()));
  for (std::size_t w = 0; w < candidate_rows.size(); ++w) {
    const auto& con = problem.constraints[candidate_rows[w]];
    rp.b(static_cast<Eigen::Index>(w)) = con.rhs;
    std::map<int, std::vector<Triplet>> per_block;
    for (const auto& e : con.coefficient) {
      auto& blk = rp.blocks[e.block];
      append_entry(e, blk.doubled, blk.diagonal, blk.input_dim, per_block[e.block]);
    }
    for (auto& [k, trip] : per_block) {
      if (trip.empty()) continue;
      rp.blocks[k].rows.push_back(static_cast<int>(w));
      rp.blocks[k].coef.push_back(std::move(trip));
    }
  }
  rp.origin = candidate_rows;
  return rp;
}

RealProblem restrict_rows(const RealProblem& p, const std::vector<int>& keep) {
  std::vector<int> new_index(p.m(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) new_index[keep[i]] = static_cast<int>(i);
  RealProblem out;
  out.blocks.resize(p.blocks.size());
  out.b.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.b(static_cast<Eigen::Index>(i)) = p.b(keep[i]);
    out.origin.push_back(p.origin[keep[i]]);
  }
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const auto& src = p.blocks[k];
    auto& dst = out.blocks[k];
    dst.diagonal = src.diagonal;
    dst.doubled = src.doubled;
    dst.input_dim = src.input_dim;
    dst.n = src.n;
    dst.objective = src.objective;
    for (std::size_t i = 0; i < src.rows.size(); ++i) {
      const int ni = new_index[src.rows[i]];
      if (ni < 0) continue;
      dst.rows.push_back(ni);
      dst.coef.push_back(src.coef[i]);
    }
  }
  return out;
}

ComplexMatrix to_input_block(const RealBlock& blk, const RealMatrix& m, double scale) {
  if (blk.doubled) return scale * complexify(m);
  ComplexMatrix out = m.cast<Complex>();
  if (blk.diagonal) {
    ComplexMatrix d = ComplexMatrix::Zero(blk.n, blk.n);
    d.diagonal() = out.diagonal();
    return d;
  }
  return out;
}

}  // namespace

int Problem::add_block(BlockKind kind, int dim) {
  blocks.push_back({kind, dim});
  return static_cast<int>(blocks.size()) - 1;
}

void Problem::validate() const {
  auto check = [&](const Coefficient& coef, const std::string& where) {
    for (const auto& e : coef) {
      if (e.block < 0 || e.block >= static_cast<int>(blocks.size())) {
        throw InputError(where + ": entry references missing block");
      }
      const auto& blk = blocks[e.block];
      if (e.row < 0 || e.col < e.row || e.col >= blk.dim) {
        throw InputError(where + ": entry position out of range");
      }
      if (blk.kind == BlockKind::kNonnegDiagonal && e.row != e.col) {
        throw InputError(where + ": off-diagonal entry in diagonal block");
      }
      if (e.row == e.col && std::abs(e.value.imag()) > kHermitianTol) {
        throw InputError(where + ": complex diagonal entry in Hermitian coefficient");
      }
    }
  };
  for (const auto& blk : blocks) {
    if (blk.dim <= 0) throw InputError("sdp: block dimensions must be positive");
  }
  check(objective, "objective");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    check(constraints[i].coefficient, "constraint " + std::to_string(i));
  }
}

std::string to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
    case Status::kMaxIter: return "max-iter";
    case Status::kNumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

RealMatrix realify(const ComplexMatrix& h) {
  if (!is_hermitian(h)) throw InputError("realify: input is not Hermitian");
  const Eigen::Index n = h.rows();
  RealMatrix r(2 * n, 2 * n);
  r.topLeftCorner(n, n) = h.real();
  r.topRightCorner(n, n) = -h.imag();
  r.bottomLeftCorner(n, n) = h.imag();
  r.bottomRightCorner(n, n) = h.real();
  return r;
}

ComplexMatrix complexify(const RealMatrix& r) {
  const Eigen::Index n = r.rows() / 2;
  ComplexMatrix out(n, n);
  out.real() = 0.5 * (r.topLeftCorner(n, n) + r.bottomRightCorner(n, n));
  out.imag() = 0.5 * (r.bottomLeftCorner(n, n) - r.topRightCorner(n, n));
  return out;
}

double evaluate(const Coefficient& coefficient, const std::vector<ComplexMatrix>& blocks) {
  double s = 0.0;
  for (const auto& e : coefficient) {
    const auto& x = blocks.at(e.block);
    if (e.row == e.col) {
      s += e.value.real() * x(e.row, e.row).real();
    } else {
      // A(r,c) X(c,r) + A(c,r) X(r,c) = 2 Re(A(r,c) X(c,r))
      s += 2.0 * (e.value * x(e.col, e.row)).real();
    }
  }
  return s;
}

std::pair<Coefficient, Coefficient> split_functional(
    const std::vector<GeneralEntry>& functional, double drop_tol) {
  std::map<std::tuple<int, int, int>, Complex> re;
  std::map<std::tuple<int, int, int>, Complex> im;
  const Complex two_i(0.0, 2.0);
  for (const auto& g : functional) {
    const Complex v = g.value;
    if (g.row == g.col) {
      re[{g.block, g.row, g.row}] += v.real();
      im[{g.block, g.row, g.row}] += v.imag();
    } else if (g.row < g.col) {
      re[{g.block, g.row, g.col}] += 0.5 * v;
      im[{g.block, g.row, g.col}] += v / two_i;
    } else {
      re[{g.block, g.col, g.row}] += 0.5 * std::conj(v);
      im[{g.block, g.col, g.row}] += -std::conj(v) / two_i;
    }
  }
  auto collect = [drop_tol](const std::map<std::tuple<int, int, int>, Complex>& src) {
    Coefficient out;
    for (const auto& [key, v] : src) {
      const auto [blk, r, c] = key;
      Complex value = v;
      if (std::abs(value.real()) <= drop_tol) value.real(0.0);
      if (std::abs(value.imag()) <= drop_tol || r == c) value.imag(0.0);
      if (value == Complex(0.0, 0.0)) continue;
      out.push_back({blk, r, c, value});
    }
    return out;
  };
  return {collect(re), collect(im)};
}

Solution solve(const Problem& problem, const Options& options) {
  problem.validate();
  Solution sol;

  // Real arithmetic suffices when no constraint mixes real and imaginary
  // parts and purely imaginary rows are homogeneous: the real part of any
  // feasible Hermitian X is then feasible with the same objective.
  bool real_mode = !profile(problem.objective, problem.blocks).has_imag;
  for (const auto& con : problem.constraints) {
    if (!real_mode) break;
    const ImagProfile p = profile(con.coefficient, problem.blocks);
    if (p.has_imag && (p.has_real || con.rhs != 0.0)) real_mode = false;
  }
  std::vector<int> candidate_rows;
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& con = problem.constraints[i];
    const ImagProfile p = profile(con.coefficient, problem.blocks);
    if (real_mode && p.has_imag) continue;
    if (!p.has_real && !p.has_imag) {
      if (std::abs(con.rhs) > options.feas_tol) {
        sol.status = Status::kInfeasible;
        return sol;
      }
      continue;
    }
    candidate_rows.push_back(static_cast<int>(i));
  }
  sol.real_arithmetic = real_mode;

  RealProblem full = build_real_problem(problem, real_mode, candidate_rows);
  std::vector<RealMatrix> ident;
  for (const auto& blk : full.blocks) ident.push_back(RealMatrix::Identity(blk.n, blk.n));
  std::vector<int> keep;
  if (!independent_rows(schur_complement(full, ident, ident), full.b, keep)) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  RealProblem rp = keep.size() == static_cast<std::size_t>(full.m())
                       ? std::move(full)
                       : restrict_rows(full, keep);
  sol.dropped_constraints =
      static_cast<int>(problem.constraints.size()) - rp.m();

  const int m = rp.m();
  const std::size_t nb = rp.blocks.size();
  std::vector<RealMatrix> c_mat;
  int total_dim = 0;
  for (const auto& blk : rp.blocks) {
    c_mat.push_back(dense_of(blk.objective, blk.n));
    total_dim += blk.n;
  }
  const double b_norm = m > 0 ? rp.b.cwiseAbs().maxCoeff() : 0.0;
  const double c_norm = max_abs(c_mat);
  const double start = 1.0 + b_norm;

  std::vector<RealMatrix> x;
  std::vector<RealMatrix> z;
  for (const auto& blk : rp.blocks) {
    x.push_back(start * RealMatrix::Identity(blk.n, blk.n));
    z.push_back(start * RealMatrix::Identity(blk.n, blk.n));
  }
  RealVector y = RealVector::Zero(m);

  auto report = [&](const char* tag, int iter, double pobj, double dobj, double pinf,
                    double dinf, double mu, double ap, double ad) {
    if (!options.verbose) return;
    std::fprintf(stderr, "%s %3d pobj %+.10e dobj %+.10e pinf %.2e dinf %.2e mu %.2e ap %.3f ad %.3f\n",
                 tag, iter, pobj, dobj, pinf, dinf, mu, ap, ad);
  };

  Status status = Status::kMaxIter;
  double pobj = 0.0;
  double dobj = 0.0;
  double pinf = 0.0;
  double dinf = 0.0;
  int iter = 0;
  int stalls = 0;
  for (;; ++iter) {
    const RealVector ax = apply_a(rp, x);
    const RealVector rp_res = rp.b - ax;
    std::vector<RealMatrix> aty = apply_at(rp, y);
    std::vector<RealMatrix> rd(nb);
    for (std::size_t k = 0; k < nb; ++k) rd[k] = c_mat[k] - aty[k] + z[k];
    pobj = block_dot(c_mat, x);
    dobj = m > 0 ? rp.b.dot(y) : 0.0;
    pinf = m > 0 ? rp_res.cwiseAbs().maxCoeff() / (1.0 + b_norm) : 0.0;
    dinf = max_abs(rd) / (1.0 + c_norm);
    const double mu = block_dot(x, z) / total_dim;
    const double gap = std::abs(pobj - dobj);
    report("it", iter, pobj, dobj, pinf, dinf, mu, 0, 0);

    if (gap <= options.gap_tol * (1.0 + std::abs(pobj)) && pinf <= options.feas_tol &&
        dinf <= options.feas_tol) {
      status = Status::kOptimal;
      break;
    }
    if (pobj > kDivergence && pinf < 1e-3) {
      status = Status::kUnbounded;
      break;
    }
    if (dobj < -kDivergence && dinf < 1e-3) {
      status = Status::kInfeasible;
      break;
    }
    if (iter >= options.max_iter) {
      status = Status::kMaxIter;
      break;
    }

    std::vector<RealMatrix> zinv(nb);
    bool ok = true;
    for (std::size_t k = 0; k < nb; ++k) {
      Eigen::LLT<RealMatrix> llt(z[k]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      zinv[k] = llt.solve(RealMatrix::Identity(z[k].rows(), z[k].cols()));
      zinv[k] = 0.5 * (zinv[k] + zinv[k].transpose());
    }
    if (!ok) {
      status = Status::kNumericalFailure;
      break;
    }

    // Equilibrate by the diagonal before factoring: near the optimum the
    // diagonal spans many orders of magnitude.
    const RealMatrix schur = schur_complement(rp, x, zinv);
    RealVector scale = RealVector::Ones(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double d = schur(i, i);
      if (d > 0.0) scale(i) = 1.0 / std::sqrt(d);
    }
    RealMatrix scaled = scale.asDiagonal() * schur * scale.asDiagonal();
    Eigen::LLT<RealMatrix> factor(scaled);
    for (double reg = 1e-14; factor.info() != Eigen::Success && reg < 1e-6; reg *= 100.0) {
      scaled.diagonal().array() += reg;
      factor.compute(scaled);
    }
    if (factor.info() != Eigen::Success) {
      status = Status::kNumericalFailure;
      break;
    }
    auto schur_solve = [&](const RealVector& r) -> RealVector {
      return scale.asDiagonal() * factor.solve(scale.asDiagonal() * r);
    };

    // Solves for (dX, dy, dZ) given the complementarity target per block.
    auto direction = [&](const std::vector<RealMatrix>& target,
                         std::vector<RealMatrix>& dx, RealVector& dy,
                         std::vector<RealMatrix>& dz) {
      // target = sigma mu Zinv - X (- dXa dZa Zinv)
      std::vector<RealMatrix> g(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        RealMatrix t = target[k] + x[k] * rd[k] * zinv[k];
        g[k] = 0.5 * (t + t.transpose());
      }
      const RealVector rhs = apply_a(rp, g) - rp_res;
      dy = m > 0 ? schur_solve(rhs) : RealVector();
      // Refine against the unregularized matrix so A(dX) stays consistent
      // with the primal residual.
      for (int sweep = 0; sweep < 2 && m > 0; ++sweep) dy += schur_solve(rhs - schur * dy);
      const std::vector<RealMatrix> atdy = apply_at(rp, dy);
      dx.resize(nb);
      dz.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        dz[k] = atdy[k] - rd[k];
        RealMatrix t = target[k] - x[k] * dz[k] * zinv[k];
        dx[k] = 0.5 * (t + t.transpose());
      }
    };
    auto step_lengths = [&](const std::vector<RealMatrix>& dx,
                            const std::vector<RealMatrix>& dz, double& ap, double& ad) {
      ap = std::numeric_limits<double>::infinity();
      ad = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(x[k], dx[k]));
        ad = std::min(ad, max_step(z[k], dz[k]));
      }
    };

    std::vector<RealMatrix> target(nb);
    for (std::size_t k = 0; k < nb; ++k) target[k] = -x[k];
    std::vector<RealMatrix> dxa, dza;
    RealVector dya;
    direction(target, dxa, dya, dza);
    double ap_max = 0.0;
    double ad_max = 0.0;
    step_lengths(dxa, dza, ap_max, ad_max);
    const double ap_aff = std::min(1.0, ap_max);
    const double ad_aff = std::min(1.0, ad_max);
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      mu_aff += (x[k] + ap_aff * dxa[k]).cwiseProduct(z[k] + ad_aff * dza[k]).sum();
    }
    mu_aff /= total_dim;
    double sigma = std::pow(std::max(0.0, mu_aff) / mu, 3.0);
    sigma = std::clamp(sigma, 0.0, 1.0);

    for (std::size_t k = 0; k < nb; ++k) {
      target[k] = sigma * mu * zinv[k] - x[k] - dxa[k] * dza[k] * zinv[k];
    }
    std::vector<RealMatrix> dx, dz;
    RealVector dy;
    direction(target, dx, dy, dz);
    step_lengths(dx, dz, ap_max, ad_max);
    const double ap = std::min(1.0, kStepFraction * ap_max);
    const double ad = std::min(1.0, kStepFraction * ad_max);
    for (std::size_t k = 0; k < nb; ++k) {
      x[k] += ap * dx[k];
      z[k] += ad * dz[k];
    }
    if (m > 0) y += ad * dy;
    report("  step", iter, pobj, dobj, pinf, dinf, mu, ap, ad);

    // A blocked step on either side that persists means no further progress.
    stalls = std::min(ap, ad) < 1e-8 ? stalls + 1 : 0;
    if (stalls >= (std::max(ap, ad) < 1e-8 ? 3 : 10)) {
      status = Status::kNumericalFailure;
      break;
    }
  }

  sol.status = status;
  sol.iterations = iter;
  sol.primal_value = pobj;
  sol.dual_value = dobj;
  sol.gap = std::abs(pobj - dobj);
  sol.primal_infeasibility = pinf;
  sol.dual_infeasibility = dinf;
  sol.dual_multipliers.assign(problem.constraints.size(), 0.0);
  for (int i = 0; i < m; ++i) sol.dual_multipliers[rp.origin[i]] = y(i);
  for (std::size_t k = 0; k < nb; ++k) {
    sol.primal_blocks.push_back(to_input_block(rp.blocks[k], x[k], 1.0));
    sol.dual_slack_blocks.push_back(to_input_block(rp.blocks[k], z[k], 2.0));
  }
  return sol;
}

}  // namespace nszcap::sdp
