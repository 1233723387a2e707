#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "nszcap/graphspace.hpp"
#include "nszcap/sdpsolver.hpp"

namespace nszcap {

enum class Quantity {
  kUpsilon,
  kUpsilonHat,
  kAram,
  kUpsilonCq,
  kUpsilonHatCq,
  kAramCq,
};

std::string to_string(Quantity q);

using NamedMatrices = std::map<std::string, ComplexMatrix>;

struct CapacityResult {
  Quantity quantity = Quantity::kUpsilon;
  double value = 0.0;
  double log2_value = 0.0;
  double gap = 0.0;
  sdp::Status status = sdp::Status::kNumericalFailure;
  int iterations = 0;
  /// S_A, U_AB (bipartite) or s (diagonal), R_i (cq).
  NamedMatrices primal_witness;
  /// T_B, V_AB when the dual program was solved.
  NamedMatrices dual_witness;
};

/// A capacity program whose solver run did not reach an optimal status.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, sdp::Solution solution)
      : std::runtime_error(what), solution_(std::move(solution)) {}
  const sdp::Solution& solution() const { return solution_; }

 private:
  sdp::Solution solution_;
};

struct CapacityOptions {
  sdp::Options solver;
  /// Largest d_A * d_B accepted before solving.
  int max_choi_dim = 4096;
};

/// Default Choi-dimension guard, honouring NSZCAP_MAX_DIM when set.
int default_max_choi_dim();

/// One-shot no-signalling-assisted zero-error capacity (number of messages).
CapacityResult upsilon(const NCGraph& k, const CapacityOptions& opts = {});
/// Activated capacity: the same program with tr_A U <= 1_B.
CapacityResult upsilon_hat(const NCGraph& k, const CapacityOptions& opts = {});
/// Dual program of upsilon_hat (min tr T_B); witness in dual_witness.
CapacityResult upsilon_hat_dual(const NCGraph& k, const CapacityOptions& opts = {});
/// Semidefinite fractional packing number.
CapacityResult aram(const NCGraph& k, const CapacityOptions& opts = {});

CapacityResult upsilon_cq(const CqGraph& c, const CapacityOptions& opts = {});
CapacityResult upsilon_hat_cq(const CqGraph& c, const CapacityOptions& opts = {});
CapacityResult aram_cq(const CqGraph& c, const CapacityOptions& opts = {});

/// d_A / ||tr_A P_AB||_inf.
double superdense_bound(const NCGraph& k);

inline constexpr double kStrictTol = 1e-7;

struct CriterionValue {
  bool holds = false;
  /// Signed distance from the threshold; positive when the criterion holds.
  double margin = 0.0;
};

struct Thm9Report {
  CriterionValue aram_gt_1;
  CriterionValue pb_strict;
  CriterionValue trq_posdef;
  CriterionValue uhat_gt_1;
  double strict_tol = kStrictTol;
  double aram_value = 0.0;
  double uhat_value = 0.0;
  bool consistent() const;
};

/// Positivity criteria for the activated capacity. Throws
/// std::logic_error when the four (provably equivalent) criteria disagree.
Thm9Report thm9_criteria(const NCGraph& k, const CapacityOptions& opts = {},
                         double strict_tol = kStrictTol);

/// upsilon_hat(K) > upsilon(K) + eps.
bool is_activatable(const NCGraph& k, double eps = 1e-6,
                    const CapacityOptions& opts = {});

/// Least n <= n_max with upsilon(K^{(x)n}) >= 2 - 1e-7.
std::optional<int> find_n0(const NCGraph& k, int n_max,
                           const CapacityOptions& opts = {});

/// Throws InputError when (d_A d_B)^n exceeds the guard.
void require_choi_dim(int d_a, int d_b, int n, int limit);

/// Largest constraint violation of a candidate (S_A, U_AB) for the one-shot
/// program (`activated` = false) or the activated one, checked directly on
/// the complex matrices. Includes negative-eigenvalue violations.
double primal_violation(const NCGraph& k, const ComplexMatrix& s,
                        const ComplexMatrix& u, bool activated);

/// Largest violation of a candidate (T_B, V_AB) for the dual program of the
/// activated capacity.
double dual_violation(const NCGraph& k, const ComplexMatrix& t, const ComplexMatrix& v);

/// Largest violation of T_B >= 0, tr_B P (1 (x) T_B) >= 1_A (upper-bound
/// witness for the packing number).
double aram_dual_violation(const NCGraph& k, const ComplexMatrix& t);

}  // namespace nszcap
