#pragma once

#include <string>
#include <vector>

#include "nszcap/matrixcore.hpp"

namespace nszcap {

/// A quantum channel L(A) -> L(B) given by Kraus operators E_i (d_out x d_in).
class KrausChannel {
 public:
  enum class Mode { kStrict, kRelaxed };

  /// Strict mode requires sum_i E_i^dag E_i = 1 within 1e-8. Relaxed mode
  /// also accepts trace-decreasing sets (sum <= 1) and records the fact in
  /// `subnormalized()`.
  KrausChannel(int d_in, int d_out, std::vector<ComplexMatrix> kraus,
               Mode mode = Mode::kStrict);

  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }
  bool subnormalized() const { return subnormalized_; }

  /// max-entry deviation of sum_i E_i^dag E_i from the identity.
  double trace_preservation_defect() const;

 private:
  int d_in_;
  int d_out_;
  std::vector<ComplexMatrix> kraus_;
  bool subnormalized_ = false;
};

/// Non-commutative bipartite graph: the support projector P_AB of a Choi
/// matrix, on A (x) B with A the leading factor.
class NCGraph {
 public:
  NCGraph(int d_a, int d_b, ComplexMatrix projector);

  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  const ComplexMatrix& projector() const { return projector_; }
  /// 1 - P_AB.
  ComplexMatrix complement() const;
  /// tr_A P_AB.
  ComplexMatrix marginal_b() const;
  int rank() const;

 private:
  int d_a_;
  int d_b_;
  ComplexMatrix projector_;
};

/// Classical-quantum graph: one output-support projector per classical input.
class CqGraph {
 public:
  explicit CqGraph(std::vector<ComplexMatrix> projections);

  const std::vector<ComplexMatrix>& projections() const { return projections_; }
  int d_b() const { return d_b_; }
  int size() const { return static_cast<int>(projections_.size()); }

 private:
  std::vector<ComplexMatrix> projections_;
  int d_b_;
};

/// Throws InputError unless P^2 = P = P^dag within `tol`.
void require_projector(const ComplexMatrix& p, double tol, const std::string& what);

/// J_AB = sum_ij |i><j|_A (x) N(|i><j|)_B.
ComplexMatrix choi_matrix(const KrausChannel& channel);

NCGraph ncgraph_from_channel(const KrausChannel& channel,
                             double rank_tol = kDefaultRankTol);

/// Noiseless classical channel on l symbols: P = sum_i |ii><ii|.
NCGraph delta(int l);

/// Support of the product Choi state, ordered (A A')(B B').
NCGraph tensor_graph(const NCGraph& k1, const NCGraph& k2);

/// K^{(x) n}; n >= 1.
NCGraph tensor_power(const NCGraph& k, int n);

/// Direct sum of operator spaces on (A1 + A2) (x) (B1 + B2). The first
/// summand occupies the leading basis vectors of both spaces; for equal
/// dimensions this is the flag construction with the flag as the most
/// significant index.
NCGraph direct_sum(const NCGraph& k1, const NCGraph& k2);

/// Dense-coding cq-graph: outputs (U_m (x) 1) P (U_m (x) 1)^dag over all d_A^2
/// generalized Paulis U_m on A.
CqGraph superdense_cq(const NCGraph& k);

/// Output states rho_i -> their support projections.
CqGraph cq_from_states(const std::vector<ComplexMatrix>& outputs,
                       double rank_tol = kDefaultRankTol);

/// The cq-graph viewed as a bipartite graph: P_AB = sum_i |i><i| (x) P_i.
NCGraph ncgraph_from_cq(const CqGraph& cq);

/// Built-in channels used throughout the examples and the test suites.
namespace builtin {

/// Qubit (or qudit) identity channel.
KrausChannel identity_channel(int d = 2);
/// Completely depolarizing channel: Kraus span is every d x d operator.
KrausChannel depolarizing_channel(int d = 2);
/// Two-input cq-channel with pure outputs alpha|0> +- beta|1>, given
/// alpha^2 in (0, 1]. Kraus operators E_i = |psi_i><i|.
KrausChannel example4_channel(double alpha_sq);
std::vector<ComplexMatrix> example4_states(double alpha_sq);
/// Amplitude damping with decay r in [0, 1].
KrausChannel amplitude_damping_channel(double r);
/// Three-dimensional channel whose activated capacity exceeds the
/// semidefinite packing number.
KrausChannel prop11_channel();
/// The three orthonormal vectors spanning the support of prop11_channel().
std::vector<ComplexVector> prop11_support_vectors();
/// Upper-bound witness for the packing number of prop11_channel().
ComplexMatrix prop11_dual_witness();

}  // namespace builtin

}  // namespace nszcap
