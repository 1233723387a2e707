#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nszcap/capacities.hpp"

namespace nszcap {

enum class Relation { kEq, kGe, kLe, kImplies };

std::string to_string(Relation r);

/// One numerical certificate: `lhs relation rhs` within `tolerance`. For
/// kImplies, lhs and rhs are truth values (nonzero = true).
struct TheoremCheck {
  std::string name;
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::kEq;
  double tolerance = 0.0;
  bool passed = false;
  /// Hypothesis not met (or the instance was out of reach); passed is true
  /// but nothing was certified.
  bool vacuous = false;
  std::string note;
  /// Further conditions that must hold for the check to pass.
  std::vector<TheoremCheck> parts;

  /// How far inside the tolerance band the relation holds (negative = violated).
  double margin() const;
};

/// Sets `passed` from the relation and the parts.
void settle(TheoremCheck& c);

TheoremCheck make_check(std::string name, std::string instance, double lhs,
                        Relation relation, double rhs, double tolerance);
TheoremCheck vacuous_check(std::string name, std::string instance, std::string note);

struct RandomChannelSpec {
  int d_in = 2;
  int d_out = 2;
  int num_kraus = 1;
  std::uint64_t seed = 0;

  std::string describe() const;
};

/// Sizes drawn from {2,3} x {2,3} x {1,2,3}, deterministic in the seed.
RandomChannelSpec random_spec(std::uint64_t seed);

/// Kraus operators sliced from a Haar-random isometry A -> B (x) E. The
/// environment is enlarged when d_out * num_kraus < d_in.
KrausChannel random_channel(const RandomChannelSpec& spec);

/// Random cq output states: 2..4 inputs on d_B in {2,3}, ranks 1..d_B.
std::vector<ComplexMatrix> random_cq_states(std::uint64_t seed);

struct SuiteOptions {
  CapacityOptions capacity;
  /// Replaces every check tolerance when set.
  std::optional<double> tolerance;
  /// Derived graphs (tensor products, direct sums) with a larger Choi
  /// dimension are skipped with a note rather than solved.
  int work_choi_dim = 36;
};

TheoremCheck check_lemma2(const NCGraph& k, int l, const std::string& instance,
                          const SuiteOptions& opts = {});
TheoremCheck check_main_theorem(const NCGraph& k, const std::string& instance,
                                const SuiteOptions& opts = {});
TheoremCheck check_theorem5(const NCGraph& k1, const NCGraph& k2,
                            const std::string& instance, const SuiteOptions& opts = {});
TheoremCheck check_corollary6(const NCGraph& k, const std::string& instance,
                              const SuiteOptions& opts = {});
TheoremCheck check_theorem7(const NCGraph& k1, const NCGraph& k2,
                            const std::string& instance, const SuiteOptions& opts = {});
TheoremCheck check_theorem9(const NCGraph& k, const std::string& instance,
                            const SuiteOptions& opts = {});
TheoremCheck check_prop11(const SuiteOptions& opts = {});
TheoremCheck check_sandwich(const NCGraph& k, int n, const std::string& instance,
                            const SuiteOptions& opts = {});
/// Primal and dual activated-capacity programs agree.
TheoremCheck check_duality(const NCGraph& k, const std::string& instance,
                           const SuiteOptions& opts = {});
/// Upsilon = upsilon_hat = aram = l.
TheoremCheck check_delta(int l, const SuiteOptions& opts = {});
/// cq programs against their bipartite counterparts and each other.
TheoremCheck check_cq(const CqGraph& c, const std::string& instance,
                      const SuiteOptions& opts = {});

/// Names accepted by SuiteConfig::only.
const std::vector<std::string>& check_names();

struct NamedGraph {
  std::string name;
  NCGraph graph;
};

struct SuiteConfig {
  std::vector<std::uint64_t> seeds;
  SuiteOptions options;
  /// Restrict to one check family (see check_names()).
  std::optional<std::string> only;
  /// Additional instances run through the single-graph checks.
  std::vector<NamedGraph> extra;
};

struct SuiteReport {
  std::vector<TheoremCheck> checks;  // sorted by (name, instance)
  int failures() const;
  int vacuous() const;
};

/// Built-in instances plus one random channel, pair and cq channel per seed.
/// Solver failures inside a check are recorded as failed checks.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace nszcap
