#include "nszcap/capacities.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <stdexcept>

namespace nszcap {

namespace {

using sdp::BlockKind;
using sdp::GeneralEntry;

// coeff * X[p, q] as a functional tr(G X).
GeneralEntry element(int block, int p, int q, Complex coeff = 1.0) {
  return {block, q, p, coeff};
}

void append_dense(int block, const ComplexMatrix& g, Complex scale,
                  std::vector<GeneralEntry>& out) {
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      if (std::abs(g(r, c)) > 1e-15) {
        out.push_back({block, static_cast<int>(r), static_cast<int>(c), scale * g(r, c)});
      }
    }
  }
}

using EntryFunctional = std::function<void(int p, int q, std::vector<GeneralEntry>&)>;

// Adds L(X) = rhs for a Hermitian-valued linear map given entrywise, one real
// row per real degree of freedom of the upper triangle.
void add_matrix_equality(sdp::Problem& prob, int dim, const EntryFunctional& entry,
                         const ComplexMatrix& rhs) {
  std::vector<GeneralEntry> f;
  for (int p = 0; p < dim; ++p) {
    for (int q = p; q < dim; ++q) {
      f.clear();
      entry(p, q, f);
      auto [re, im] = sdp::split_functional(f);
      prob.constraints.push_back({std::move(re), rhs(p, q).real()});
      if (p != q) prob.constraints.push_back({std::move(im), rhs(p, q).imag()});
    }
  }
}

void add_trace_objective(sdp::Problem& prob, int block, int dim, double scale) {
  for (int i = 0; i < dim; ++i) prob.objective.push_back({block, i, i, scale});
}

// Column v of length d_a * d_b viewed as a d_a x d_b matrix.
ComplexMatrix reshape(const ComplexVector& v, int d_a, int d_b) {
  ComplexMatrix m(d_a, d_b);
  for (int a = 0; a < d_a; ++a) {
    for (int b = 0; b < d_b; ++b) m(a, b) = v(a * d_b + b);
  }
  return m;
}

void require_size(const NCGraph& k, const CapacityOptions& opts) {
  require_choi_dim(k.d_a(), k.d_b(), 1, opts.max_choi_dim);
}

sdp::Solution run(const sdp::Problem& prob, const CapacityOptions& opts,
                  const std::string& what) {
  sdp::Solution sol = sdp::solve(prob, opts.solver);
  if (sol.status != sdp::Status::kOptimal) {
    throw SolverFailure(what + ": solver returned " + sdp::to_string(sol.status) +
                            " after " + std::to_string(sol.iterations) +
                            " iterations (gap " + std::to_string(sol.gap) +
                            ", primal infeasibility " +
                            std::to_string(sol.primal_infeasibility) +
                            ", dual infeasibility " +
                            std::to_string(sol.dual_infeasibility) + ")",
                        sol);
  }
  return sol;
}

CapacityResult make_result(Quantity q, const sdp::Solution& sol, double value) {
  CapacityResult r;
  r.quantity = q;
  r.value = value;
  r.log2_value = value > 0.0 ? std::log2(value) : -std::numeric_limits<double>::infinity();
  r.gap = sol.gap;
  r.status = sol.status;
  r.iterations = sol.iterations;
  return r;
}

// Bipartite one-shot program in the eigenbasis [range(P) | range(1-P)] of
// P_AB. Writing U = V Ur V^dag and S (x) 1 - U = V (0 + Wq) V^dag puts the
// zero-overlap condition tr P (S (x) 1 - U) = 0 into the block structure, so
// the program keeps a strictly feasible interior.
CapacityResult solve_upsilon(const NCGraph& k, bool activated,
                             const CapacityOptions& opts) {
  require_size(k, opts);
  const int da = k.d_a();
  const int db = k.d_b();
  const int n = da * db;
  const ProjectorSplit split = split_projector(k.projector());
  const int rank_p = static_cast<int>(split.range.cols());
  const int rank_q = n - rank_p;
  ComplexMatrix basis(n, n);
  basis << split.range, split.kernel;

  std::vector<ComplexMatrix> columns;
  columns.reserve(n);
  for (int p = 0; p < n; ++p) columns.push_back(reshape(basis.col(p), da, db));

  sdp::Problem prob;
  const int s_blk = prob.add_block(BlockKind::kPsdHermitian, da);
  const int u_blk = prob.add_block(BlockKind::kPsdHermitian, n);
  const int w_blk = rank_q > 0 ? prob.add_block(BlockKind::kPsdHermitian, rank_q) : -1;
  const int y_blk = activated ? prob.add_block(BlockKind::kPsdHermitian, db) : -1;
  add_trace_objective(prob, s_blk, da, 1.0);

  // [V^dag (S (x) 1) V]_pq - Ur_pq - Wq_pq = 0
  add_matrix_equality(
      prob, n,
      [&](int p, int q, std::vector<GeneralEntry>& f) {
        append_dense(s_blk, columns[q] * columns[p].adjoint(), 1.0, f);
        f.push_back(element(u_blk, p, q, -1.0));
        if (p >= rank_p && q >= rank_p) {
          f.push_back(element(w_blk, p - rank_p, q - rank_p, -1.0));
        }
      },
      ComplexMatrix::Zero(n, n));

  // tr_A (V Ur V^dag) (+ Y) = 1_B
  std::vector<ComplexMatrix> marginal_maps(static_cast<std::size_t>(db) * db);
  for (int b1 = 0; b1 < db; ++b1) {
    for (int b2 = b1; b2 < db; ++b2) {
      marginal_maps[b1 * db + b2] =
          basis.adjoint() * tensor(identity(da), ket_bra(db, b2, b1)) * basis;
    }
  }
  add_matrix_equality(
      prob, db,
      [&](int b1, int b2, std::vector<GeneralEntry>& f) {
        append_dense(u_blk, marginal_maps[b1 * db + b2], 1.0, f);
        if (activated) f.push_back(element(y_blk, b1, b2));
      },
      identity(db));

  const std::string what = activated ? "upsilon_hat" : "upsilon";
  const sdp::Solution sol = run(prob, opts, what);
  CapacityResult r = make_result(activated ? Quantity::kUpsilonHat : Quantity::kUpsilon,
                                 sol, sol.primal_value);
  r.primal_witness["S_A"] = sol.primal_blocks[s_blk];
  r.primal_witness["U_AB"] = basis * sol.primal_blocks[u_blk] * basis.adjoint();
  return r;
}

std::vector<ComplexMatrix> kernel_bases(const CqGraph& c) {
  std::vector<ComplexMatrix> out;
  for (const auto& p : c.projections()) out.push_back(split_projector(p).kernel);
  return out;
}

enum class CqProgram { kOneShot, kActivated, kPacking };

CapacityResult solve_cq(const CqGraph& c, CqProgram kind, const CapacityOptions& opts) {
  const int n_out = c.size();
  const int db = c.d_b();
  const std::vector<ComplexMatrix> kernels = kernel_bases(c);

  sdp::Problem prob;
  const int s_blk = prob.add_block(BlockKind::kNonnegDiagonal, n_out);
  std::vector<int> r_blk(n_out, -1);
  std::vector<int> z_blk(n_out, -1);
  if (kind != CqProgram::kPacking) {
    for (int i = 0; i < n_out; ++i) {
      const int ri = static_cast<int>(kernels[i].cols());
      if (ri == 0) continue;
      r_blk[i] = prob.add_block(BlockKind::kPsdHermitian, ri);
      z_blk[i] = prob.add_block(BlockKind::kPsdHermitian, ri);
    }
  }
  const int y_blk =
      kind != CqProgram::kOneShot ? prob.add_block(BlockKind::kPsdHermitian, db) : -1;
  add_trace_objective(prob, s_blk, n_out, 1.0);

  // R_i + Z_i = s_i 1 on range(1 - P_i)
  for (int i = 0; i < n_out; ++i) {
    if (r_blk[i] < 0) continue;
    const int ri = static_cast<int>(kernels[i].cols());
    add_matrix_equality(
        prob, ri,
        [&](int p, int q, std::vector<GeneralEntry>& f) {
          if (p == q) f.push_back(element(s_blk, i, i));
          f.push_back(element(r_blk[i], p, q, -1.0));
          f.push_back(element(z_blk[i], p, q, -1.0));
        },
        ComplexMatrix::Zero(ri, ri));
  }

  // sum_i (s_i P_i + K_i R_i K_i^dag) (+ Y) = 1
  add_matrix_equality(
      prob, db,
      [&](int b1, int b2, std::vector<GeneralEntry>& f) {
        for (int i = 0; i < n_out; ++i) {
          const Complex pij = c.projections()[i](b1, b2);
          if (std::abs(pij) > 1e-15) f.push_back(element(s_blk, i, i, pij));
          if (r_blk[i] >= 0) {
            const ComplexMatrix g =
                kernels[i].adjoint() * ket_bra(db, b2, b1) * kernels[i];
            append_dense(r_blk[i], g, 1.0, f);
          }
        }
        if (y_blk >= 0) f.push_back(element(y_blk, b1, b2));
      },
      identity(db));

  Quantity q = Quantity::kUpsilonCq;
  if (kind == CqProgram::kActivated) q = Quantity::kUpsilonHatCq;
  if (kind == CqProgram::kPacking) q = Quantity::kAramCq;
  const sdp::Solution sol = run(prob, opts, to_string(q));
  CapacityResult r = make_result(q, sol, sol.primal_value);
  r.primal_witness["s"] = sol.primal_blocks[s_blk];
  for (int i = 0; i < n_out; ++i) {
    if (r_blk[i] < 0) {
      if (kind != CqProgram::kPacking) r.primal_witness["R_" + std::to_string(i)] =
          ComplexMatrix::Zero(db, db);
      continue;
    }
    r.primal_witness["R_" + std::to_string(i)] =
        kernels[i] * sol.primal_blocks[r_blk[i]] * kernels[i].adjoint();
  }
  return r;
}

}  // namespace

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::kUpsilon: return "upsilon";
    case Quantity::kUpsilonHat: return "upsilon_hat";
    case Quantity::kAram: return "aram";
    case Quantity::kUpsilonCq: return "upsilon_cq";
    case Quantity::kUpsilonHatCq: return "upsilon_hat_cq";
    case Quantity::kAramCq: return "aram_cq";
  }
  return "unknown";
}

int default_max_choi_dim() {
  if (const char* env = std::getenv("NSZCAP_MAX_DIM")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return 4096;
}

void require_choi_dim(int d_a, int d_b, int n, int limit) {
  double dim = 1.0;
  for (int i = 0; i < n; ++i) dim *= static_cast<double>(d_a) * d_b;
  if (dim > limit) {
    throw InputError("Choi dimension " + std::to_string(static_cast<long long>(dim)) +
                     " exceeds the size guard " + std::to_string(limit));
  }
}

CapacityResult upsilon(const NCGraph& k, const CapacityOptions& opts) {
  return solve_upsilon(k, false, opts);
}

CapacityResult upsilon_hat(const NCGraph& k, const CapacityOptions& opts) {
  return solve_upsilon(k, true, opts);
}

// min tr T s.t. V <= 1 (x) T, tr_B V >= 1_A, T >= 0, (1-P) V (1-P) <= 0, with
// V eliminated through X1 = 1 (x) T - V, stored in the same rotated basis as
// the primal.
CapacityResult upsilon_hat_dual(const NCGraph& k, const CapacityOptions& opts) {
  require_size(k, opts);
  const int da = k.d_a();
  const int db = k.d_b();
  const int n = da * db;
  const ProjectorSplit split = split_projector(k.projector());
  const int rank_p = static_cast<int>(split.range.cols());
  const int rank_q = n - rank_p;
  ComplexMatrix basis(n, n);
  basis << split.range, split.kernel;

  sdp::Problem prob;
  const int t_blk = prob.add_block(BlockKind::kPsdHermitian, db);
  const int x1_blk = prob.add_block(BlockKind::kPsdHermitian, n);
  const int x2_blk = prob.add_block(BlockKind::kPsdHermitian, da);
  const int x3_blk = rank_q > 0 ? prob.add_block(BlockKind::kPsdHermitian, rank_q) : -1;
  add_trace_objective(prob, t_blk, db, -1.0);

  // tr(T) 1_A - tr_B(V X1 V^dag) - X2 = 1_A
  add_matrix_equality(
      prob, da,
      [&](int a1, int a2, std::vector<GeneralEntry>& f) {
        if (a1 == a2) {
          for (int b = 0; b < db; ++b) f.push_back(element(t_blk, b, b));
        }
        const ComplexMatrix g =
            basis.adjoint() * tensor(ket_bra(da, a2, a1), identity(db)) * basis;
        append_dense(x1_blk, g, -1.0, f);
        f.push_back(element(x2_blk, a1, a2, -1.0));
      },
      identity(da));

  // Wq^dag (X1 - 1 (x) T) Wq = X3, with Wq^dag X1 Wq the trailing block of X1.
  if (rank_q > 0) {
    std::vector<ComplexMatrix> kernel_cols;
    for (int p = 0; p < rank_q; ++p) kernel_cols.push_back(reshape(split.kernel.col(p), da, db));
    add_matrix_equality(
        prob, rank_q,
        [&](int p, int q, std::vector<GeneralEntry>& f) {
          f.push_back(element(x1_blk, rank_p + p, rank_p + q));
          append_dense(t_blk, kernel_cols[q].transpose() * kernel_cols[p].conjugate(), -1.0, f);
          f.push_back(element(x3_blk, p, q, -1.0));
        },
        ComplexMatrix::Zero(rank_q, rank_q));
  }

  const sdp::Solution sol = run(prob, opts, "upsilon_hat_dual");
  CapacityResult r = make_result(Quantity::kUpsilonHat, sol, -sol.primal_value);
  const ComplexMatrix& t = sol.primal_blocks[t_blk];
  r.dual_witness["T_B"] = t;
  r.dual_witness["V_AB"] =
      tensor(identity(da), t) - basis * sol.primal_blocks[x1_blk] * basis.adjoint();
  return r;
}

CapacityResult aram(const NCGraph& k, const CapacityOptions& opts) {
  require_size(k, opts);
  const int da = k.d_a();
  const int db = k.d_b();
  const ComplexMatrix& p = k.projector();

  sdp::Problem prob;
  const int s_blk = prob.add_block(BlockKind::kPsdHermitian, da);
  const int y_blk = prob.add_block(BlockKind::kPsdHermitian, db);
  add_trace_objective(prob, s_blk, da, 1.0);

  // tr_A P (S (x) 1) + Y = 1_B, with [tr_A P (S (x) 1)]_{b1 b2}
  //   = sum_{a, a'} P[a b1, a' b2] S[a', a].
  add_matrix_equality(
      prob, db,
      [&](int b1, int b2, std::vector<GeneralEntry>& f) {
        ComplexMatrix g(da, da);
        for (int a = 0; a < da; ++a) {
          for (int a2 = 0; a2 < da; ++a2) g(a, a2) = p(a * db + b1, a2 * db + b2);
        }
        append_dense(s_blk, g, 1.0, f);
        f.push_back(element(y_blk, b1, b2));
      },
      identity(db));

  const sdp::Solution sol = run(prob, opts, "aram");
  CapacityResult r = make_result(Quantity::kAram, sol, sol.primal_value);
  r.primal_witness["S_A"] = sol.primal_blocks[s_blk];
  return r;
}

CapacityResult upsilon_cq(const CqGraph& c, const CapacityOptions& opts) {
  return solve_cq(c, CqProgram::kOneShot, opts);
}

CapacityResult upsilon_hat_cq(const CqGraph& c, const CapacityOptions& opts) {
  return solve_cq(c, CqProgram::kActivated, opts);
}

CapacityResult aram_cq(const CqGraph& c, const CapacityOptions& opts) {
  return solve_cq(c, CqProgram::kPacking, opts);
}

double superdense_bound(const NCGraph& k) {
  return static_cast<double>(k.d_a()) / op_norm(k.marginal_b());
}

bool Thm9Report::consistent() const {
  const bool v = aram_gt_1.holds;
  return pb_strict.holds == v && trq_posdef.holds == v && uhat_gt_1.holds == v;
}

Thm9Report thm9_criteria(const NCGraph& k, const CapacityOptions& opts,
                         double strict_tol) {
  Thm9Report rep;
  rep.strict_tol = strict_tol;
  rep.aram_value = aram(k, opts).value;
  rep.uhat_value = upsilon_hat(k, opts).value;
  const ComplexMatrix pb = k.marginal_b();
  const ComplexMatrix trq = partial_trace(k.complement(), k.d_a(), k.d_b(),
                                          Subsystem::kFirst);
  const double pb_max = eig_hermitian(0.5 * (pb + pb.adjoint())).eigenvalues.maxCoeff();
  const double trq_min = min_eigenvalue(trq);
  auto make = [](double margin) { return CriterionValue{margin > 0.0, margin}; };
  rep.aram_gt_1 = make(rep.aram_value - 1.0 - strict_tol);
  rep.pb_strict = make(k.d_a() - strict_tol - pb_max);
  rep.trq_posdef = make(trq_min - strict_tol);
  rep.uhat_gt_1 = make(rep.uhat_value - 1.0 - strict_tol);
  if (!rep.consistent()) {
    throw std::logic_error(
        "activation criteria disagree (aram " + std::to_string(rep.aram_value) +
        ", upsilon_hat " + std::to_string(rep.uhat_value) + ", margins " +
        std::to_string(rep.pb_strict.margin) + "/" + std::to_string(rep.trq_posdef.margin) +
        "); the solver tolerance is probably too loose for this instance");
  }
  return rep;
}

bool is_activatable(const NCGraph& k, double eps, const CapacityOptions& opts) {
  return upsilon_hat(k, opts).value > upsilon(k, opts).value + eps;
}

std::optional<int> find_n0(const NCGraph& k, int n_max, const CapacityOptions& opts) {
  if (n_max < 1) throw InputError("find_n0: n_max must be at least 1");
  for (int n = 1; n <= n_max; ++n) {
    require_choi_dim(k.d_a(), k.d_b(), n, opts.max_choi_dim);
    if (upsilon(tensor_power(k, n), opts).value >= 2.0 - 1e-7) return n;
  }
  return std::nullopt;
}

double primal_violation(const NCGraph& k, const ComplexMatrix& s,
                        const ComplexMatrix& u, bool activated) {
  const int da = k.d_a();
  const int db = k.d_b();
  const ComplexMatrix slack = tensor(s, identity(db)) - u;
  double worst = std::max(hermitian_defect(s), hermitian_defect(u));
  worst = std::max(worst, -min_eigenvalue(u));
  worst = std::max(worst, -min_eigenvalue(slack));
  const ComplexMatrix marginal = partial_trace(u, da, db, Subsystem::kFirst);
  if (activated) {
    worst = std::max(worst, -min_eigenvalue(identity(db) - marginal));
  } else {
    worst = std::max(worst, max_abs_diff(marginal, identity(db)));
  }
  worst = std::max(worst, std::abs((k.projector() * slack).trace()));
  return worst;
}

double dual_violation(const NCGraph& k, const ComplexMatrix& t, const ComplexMatrix& v) {
  const int da = k.d_a();
  const int db = k.d_b();
  const ComplexMatrix q = k.complement();
  double worst = std::max(hermitian_defect(t), hermitian_defect(v));
  worst = std::max(worst, -min_eigenvalue(t));
  worst = std::max(worst, -min_eigenvalue(tensor(identity(da), t) - v));
  worst = std::max(worst, -min_eigenvalue(partial_trace(v, da, db, Subsystem::kSecond) -
                                          identity(da)));
  worst = std::max(worst, -min_eigenvalue(-(q * v * q)));
  return worst;
}

double aram_dual_violation(const NCGraph& k, const ComplexMatrix& t) {
  const int da = k.d_a();
  const int db = k.d_b();
  const ComplexMatrix m = partial_trace(k.projector() * tensor(identity(da), t), da, db,
                                        Subsystem::kSecond);
  double worst = hermitian_defect(t);
  worst = std::max(worst, -min_eigenvalue(t));
  worst = std::max(worst, -min_eigenvalue(m - identity(da)));
  return worst;
}

}  // namespace nszcap
