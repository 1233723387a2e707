#include "nszcap/theoremsuite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace nszcap {

namespace {

constexpr double kEqTol = 1e-5;
constexpr double kBoundTol = 1e-6;
constexpr double kWitnessTol = 1e-7;
const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

double tol(const SuiteOptions& opts, double fallback) {
  return opts.tolerance.value_or(fallback);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

long long choi_dim(const NCGraph& k) {
  return static_cast<long long>(k.d_a()) * k.d_b();
}

// Empty when the derived graph of Choi dimension `dim` fits the budget.
std::optional<std::string> too_large(long long dim, const SuiteOptions& opts) {
  if (dim <= opts.work_choi_dim) return std::nullopt;
  return "skipped: derived Choi dimension " + std::to_string(dim) +
         " exceeds the work limit " + std::to_string(opts.work_choi_dim);
}

// Runs a check body, turning solver trouble into a failed check and a
// size-guard rejection into a skip.
TheoremCheck guarded(const std::string& name, const std::string& instance,
                     const std::function<TheoremCheck()>& body) {
  try {
    return body();
  } catch (const SolverFailure& e) {
    TheoremCheck c = make_check(name, instance, 0.0, Relation::kEq, 0.0, 0.0);
    c.passed = false;
    c.note = std::string("solver failure: ") + e.what();
    return c;
  } catch (const InputError& e) {
    return vacuous_check(name, instance, std::string("skipped: ") + e.what());
  } catch (const std::logic_error& e) {
    TheoremCheck c = make_check(name, instance, 0.0, Relation::kEq, 0.0, 0.0);
    c.passed = false;
    c.note = e.what();
    return c;
  }
}

ComplexMatrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

}  // namespace

std::string to_string(Relation r) {
  switch (r) {
    case Relation::kEq: return "eq";
    case Relation::kGe: return "ge";
    case Relation::kLe: return "le";
    case Relation::kImplies: return "implies";
  }
  return "unknown";
}

double TheoremCheck::margin() const {
  switch (relation) {
    case Relation::kEq: return tolerance - std::abs(lhs - rhs);
    case Relation::kGe: return lhs - rhs + tolerance;
    case Relation::kLe: return rhs - lhs + tolerance;
    case Relation::kImplies: return (lhs == 0.0 || rhs != 0.0) ? 1.0 : -1.0;
  }
  return -1.0;
}

void settle(TheoremCheck& c) {
  if (c.vacuous) {
    c.passed = true;
    return;
  }
  bool ok = std::isfinite(c.lhs) && std::isfinite(c.rhs) && c.margin() >= 0.0;
  for (auto& p : c.parts) {
    settle(p);
    ok = ok && p.passed;
  }
  c.passed = ok;
}

TheoremCheck make_check(std::string name, std::string instance, double lhs,
                        Relation relation, double rhs, double tolerance) {
  TheoremCheck c;
  c.name = std::move(name);
  c.instance = std::move(instance);
  c.lhs = lhs;
  c.rhs = rhs;
  c.relation = relation;
  c.tolerance = tolerance;
  settle(c);
  return c;
}

TheoremCheck vacuous_check(std::string name, std::string instance, std::string note) {
  TheoremCheck c;
  c.name = std::move(name);
  c.instance = std::move(instance);
  c.vacuous = true;
  c.passed = true;
  c.note = std::move(note);
  return c;
}

std::string RandomChannelSpec::describe() const {
  return "random(d_in=" + std::to_string(d_in) + ",d_out=" + std::to_string(d_out) +
         ",kraus=" + std::to_string(num_kraus) + ",seed=" + std::to_string(seed) + ")";
}

RandomChannelSpec random_spec(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RandomChannelSpec s;
  s.seed = seed;
  s.d_in = 2 + static_cast<int>(rng() % 2);
  s.d_out = 2 + static_cast<int>(rng() % 2);
  s.num_kraus = 1 + static_cast<int>(rng() % 3);
  return s;
}

KrausChannel random_channel(const RandomChannelSpec& spec) {
  if (spec.d_in < 1 || spec.d_out < 1 || spec.num_kraus < 1) {
    throw InputError("random channel dimensions must be positive");
  }
  const int env = std::max(spec.num_kraus, (spec.d_in + spec.d_out - 1) / spec.d_out);
  // The channel stream is offset from the size stream of random_spec.
  std::mt19937_64 rng(spec.seed ^ 0x5851f42d4c957f2dULL);
  const ComplexMatrix g = gaussian_matrix(spec.d_out * env, spec.d_in, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix w = qr.householderQ() * ComplexMatrix::Identity(g.rows(), g.cols());
  const ComplexMatrix r = qr.matrixQR().topRows(spec.d_in).triangularView<Eigen::Upper>();
  for (int j = 0; j < spec.d_in; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) w.col(j) *= r(j, j) / mag;
  }
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < env; ++k) kraus.push_back(w.block(k * spec.d_out, 0, spec.d_out, spec.d_in));
  return KrausChannel(spec.d_in, spec.d_out, std::move(kraus));
}

std::vector<ComplexMatrix> random_cq_states(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
  const int inputs = 2 + static_cast<int>(rng() % 3);
  const int db = 2 + static_cast<int>(rng() % 2);
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < inputs; ++i) {
    const int rank = 1 + static_cast<int>(rng() % db);
    const ComplexMatrix g = gaussian_matrix(db, rank, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    out.push_back(rho);
  }
  return out;
}

TheoremCheck check_lemma2(const NCGraph& k, int l, const std::string& instance,
                          const SuiteOptions& opts) {
  const std::string name = "lemma2";
  if (auto skip = too_large(choi_dim(k) * l * l, opts)) return vacuous_check(name, instance, *skip);
  return guarded(name, instance, [&] {
    const double uh = upsilon_hat(k, opts.capacity).value;
    const double lhs = upsilon_hat(tensor_graph(k, delta(l)), opts.capacity).value;
    TheoremCheck c = make_check(name, instance + " l=" + std::to_string(l), lhs,
                                Relation::kEq, l * uh, tol(opts, kEqTol) * l * (1.0 + uh));
    return c;
  });
}

TheoremCheck check_main_theorem(const NCGraph& k, const std::string& instance,
                                const SuiteOptions& opts) {
  const std::string name = "main_theorem";
  if (auto skip = too_large(choi_dim(k) * 4, opts)) return vacuous_check(name, instance, *skip);
  return guarded(name, instance, [&] {
    const double lhs = upsilon(tensor_graph(k, delta(2)), opts.capacity).value / 2.0;
    const double rhs = upsilon_hat(k, opts.capacity).value;
    return make_check(name, instance, lhs, Relation::kEq, rhs, tol(opts, kEqTol));
  });
}

TheoremCheck check_theorem5(const NCGraph& k1, const NCGraph& k2,
                            const std::string& instance, const SuiteOptions& opts) {
  const std::string name = "theorem5";
  if (auto skip = too_large(choi_dim(k1) * choi_dim(k2), opts)) {
    return vacuous_check(name, instance, *skip);
  }
  return guarded(name, instance, [&] {
    const double u2 = upsilon(k2, opts.capacity).value;
    if (u2 <= 1.0 + 1e-7) {
      return vacuous_check(name, instance,
                           "second graph has a one-shot capacity of 1; the hypothesis cannot hold");
    }
    const double uh1 = upsilon_hat(k1, opts.capacity).value;
    if (u2 - 1.0 < 1.0 / uh1 - 1e-9) {
      return vacuous_check(name, instance,
                           "hypothesis fails: " + fmt(u2 - 1.0) + " < " + fmt(1.0 / uh1));
    }
    const double lhs = upsilon(tensor_graph(k1, k2), opts.capacity).value;
    return make_check(name, instance, lhs, Relation::kGe, uh1 * u2, tol(opts, kEqTol));
  });
}

TheoremCheck check_corollary6(const NCGraph& k, const std::string& instance,
                              const SuiteOptions& opts) {
  const std::string name = "corollary6";
  return guarded(name, instance, [&] {
    const double u = upsilon(k, opts.capacity).value;
    if (u < kGolden - 1e-9) {
      return vacuous_check(name, instance, "one-shot capacity " + fmt(u) +
                                               " is below the golden ratio");
    }
    if (auto skip = too_large(choi_dim(k) * choi_dim(k), opts)) {
      return vacuous_check(name, instance, *skip);
    }
    const double uh = upsilon_hat(k, opts.capacity).value;
    const double lhs = upsilon(tensor_graph(k, k), opts.capacity).value;
    return make_check(name, instance, lhs, Relation::kGe, uh * u, tol(opts, kEqTol));
  });
}

TheoremCheck check_theorem7(const NCGraph& k1, const NCGraph& k2,
                            const std::string& instance, const SuiteOptions& opts) {
  const std::string name = "theorem7";
  const long long dim = static_cast<long long>(k1.d_a() + k2.d_a()) * (k1.d_b() + k2.d_b());
  if (auto skip = too_large(dim, opts)) return vacuous_check(name, instance, *skip);
  return guarded(name, instance, [&] {
    const double lhs = upsilon(direct_sum(k1, k2), opts.capacity).value;
    const double rhs =
        upsilon_hat(k1, opts.capacity).value + upsilon_hat(k2, opts.capacity).value;
    return make_check(name, instance, lhs, Relation::kEq, rhs, tol(opts, kEqTol));
  });
}

TheoremCheck check_theorem9(const NCGraph& k, const std::string& instance,
                            const SuiteOptions& opts) {
  const std::string name = "theorem9";
  return guarded(name, instance, [&] {
    const double bound = superdense_bound(k);
    TheoremCheck agree;
    double uh = 0.0;
    try {
      const Thm9Report rep = thm9_criteria(k, opts.capacity);
      const int count = rep.aram_gt_1.holds + rep.pb_strict.holds + rep.trq_posdef.holds +
                        rep.uhat_gt_1.holds;
      agree = make_check(name + ".criteria_agree", instance, count, Relation::kEq,
                         rep.aram_gt_1.holds ? 4.0 : 0.0, 0.0);
      agree.note = "margins " + fmt(rep.aram_gt_1.margin) + ", " + fmt(rep.pb_strict.margin) +
                   ", " + fmt(rep.trq_posdef.margin) + ", " + fmt(rep.uhat_gt_1.margin);
      uh = rep.uhat_value;
    } catch (const std::logic_error& e) {
      agree = make_check(name + ".criteria_agree", instance, 0.0, Relation::kEq, 1.0, 0.0);
      agree.note = e.what();
      uh = upsilon_hat(k, opts.capacity).value;
    }
    TheoremCheck c = make_check(name, instance, uh, Relation::kGe, bound, tol(opts, kBoundTol));
    c.parts.push_back(agree);
    const double packing = aram_cq(superdense_cq(k), opts.capacity).value;
    c.parts.push_back(make_check(name + ".superdense_packing", instance, packing, Relation::kEq,
                                 bound, tol(opts, kEqTol)));
    settle(c);
    return c;
  });
}

TheoremCheck check_prop11(const SuiteOptions& opts) {
  const std::string name = "prop11";
  const std::string instance = "prop11";
  return guarded(name, instance, [&] {
    const NCGraph k = ncgraph_from_channel(builtin::prop11_channel());
    const double uh = upsilon_hat(k, opts.capacity).value;
    const double a = aram(k, opts.capacity).value;
    const ComplexMatrix t = builtin::prop11_dual_witness();
    TheoremCheck c = make_check(name, instance, uh - a, Relation::kGe, 1e-3, 0.0);
    c.note = "upsilon_hat " + fmt(uh) + ", aram " + fmt(a);
    c.parts.push_back(make_check(name + ".upsilon_hat", instance, uh, Relation::kEq, 1.1767,
                                 2e-3));
    c.parts.push_back(make_check(name + ".aram_upper", instance, a, Relation::kLe, 1.1751, 1e-4));
    c.parts.push_back(make_check(name + ".witness_feasible", instance,
                                 aram_dual_violation(k, t), Relation::kLe, 0.0,
                                 tol(opts, kBoundTol)));
    c.parts.push_back(make_check(name + ".witness_trace", instance, t.trace().real(),
                                 Relation::kEq, 1.1751, tol(opts, kBoundTol)));
    settle(c);
    return c;
  });
}

TheoremCheck check_sandwich(const NCGraph& k, int n, const std::string& instance,
                            const SuiteOptions& opts) {
  const std::string name = "sandwich";
  const std::string inst = instance + " n=" + std::to_string(n);
  double dim = 1.0;
  for (int i = 0; i < n; ++i) dim *= static_cast<double>(choi_dim(k));
  if (auto skip = too_large(static_cast<long long>(dim), opts)) return vacuous_check(name, inst, *skip);
  return guarded(name, inst, [&] {
    const std::optional<int> n0 = find_n0(k, n, opts.capacity);
    if (!n0) {
      return vacuous_check(name, inst, "skipped: n0 not found up to n=" + std::to_string(n));
    }
    const double lower =
        2.0 * (n == *n0 ? 1.0 : upsilon_hat(tensor_power(k, n - *n0), opts.capacity).value);
    const NCGraph kn = tensor_power(k, n);
    const double mid = upsilon(kn, opts.capacity).value;
    const double upper = upsilon_hat(kn, opts.capacity).value;
    TheoremCheck c = make_check(name, inst, mid, Relation::kGe, lower, tol(opts, kEqTol));
    c.note = "n0=" + std::to_string(*n0);
    c.parts.push_back(make_check(name + ".upper", inst, mid, Relation::kLe, upper,
                                 tol(opts, kEqTol)));
    settle(c);
    return c;
  });
}

TheoremCheck check_duality(const NCGraph& k, const std::string& instance,
                           const SuiteOptions& opts) {
  const std::string name = "duality";
  return guarded(name, instance, [&] {
    const CapacityResult primal = upsilon_hat(k, opts.capacity);
    const CapacityResult dual = upsilon_hat_dual(k, opts.capacity);
    TheoremCheck c = make_check(name, instance, dual.value, Relation::kEq, primal.value,
                                tol(opts, kBoundTol));
    const double pv = primal_violation(k, primal.primal_witness.at("S_A"),
                                       primal.primal_witness.at("U_AB"), true);
    const double dv =
        dual_violation(k, dual.dual_witness.at("T_B"), dual.dual_witness.at("V_AB"));
    c.parts.push_back(make_check(name + ".primal_witness", instance, pv, Relation::kLe, 0.0,
                                 tol(opts, kWitnessTol)));
    c.parts.push_back(make_check(name + ".dual_witness", instance, dv, Relation::kLe, 0.0,
                                 tol(opts, kWitnessTol)));
    settle(c);
    return c;
  });
}

TheoremCheck check_delta(int l, const SuiteOptions& opts) {
  const std::string name = "delta";
  const std::string instance = "delta(" + std::to_string(l) + ")";
  return guarded(name, instance, [&] {
    const NCGraph k = delta(l);
    const double t = tol(opts, 1e-7);
    TheoremCheck c = make_check(name, instance, upsilon(k, opts.capacity).value, Relation::kEq,
                                l, t);
    c.parts.push_back(make_check(name + ".upsilon_hat", instance,
                                 upsilon_hat(k, opts.capacity).value, Relation::kEq, l, t));
    c.parts.push_back(make_check(name + ".aram", instance, aram(k, opts.capacity).value,
                                 Relation::kEq, l, t));
    settle(c);
    return c;
  });
}

TheoremCheck check_cq(const CqGraph& cq, const std::string& instance,
                      const SuiteOptions& opts) {
  const std::string name = "cq";
  return guarded(name, instance, [&] {
    const double ucq = upsilon_cq(cq, opts.capacity).value;
    const double u = upsilon(ncgraph_from_cq(cq), opts.capacity).value;
    TheoremCheck c = make_check(name, instance, ucq, Relation::kEq, u, tol(opts, 2e-6));
    c.parts.push_back(make_check(name + ".activated", instance,
                                 upsilon_hat_cq(cq, opts.capacity).value, Relation::kEq,
                                 aram_cq(cq, opts.capacity).value, tol(opts, kBoundTol)));
    settle(c);
    return c;
  });
}

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "corollary6", "cq",       "delta",    "duality",  "lemma2",  "main_theorem",
      "prop11",     "sandwich", "theorem5", "theorem7", "theorem9"};
  return names;
}

int SuiteReport::failures() const {
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

int SuiteReport::vacuous() const {
  return static_cast<int>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.vacuous; }));
}

SuiteReport run_suite(const SuiteConfig& config) {
  if (config.only) {
    const auto& names = check_names();
    if (std::find(names.begin(), names.end(), *config.only) == names.end()) {
      throw InputError("unknown check '" + *config.only + "'");
    }
  }
  const SuiteOptions& opts = config.options;
  SuiteReport report;
  auto want = [&](const char* name) { return !config.only || *config.only == name; };
  auto add = [&](TheoremCheck c) { report.checks.push_back(std::move(c)); };

  std::vector<NamedGraph> singles;
  for (double a : {0.5, 2.0 / 3.0, 0.75, 0.9}) {
    singles.push_back({"example4(alpha_sq=" + fmt(a) + ")",
                       ncgraph_from_channel(builtin::example4_channel(a))});
  }
  singles.push_back({"amplitude_damping(r=0.75)",
                     ncgraph_from_channel(builtin::amplitude_damping_channel(0.75))});
  singles.push_back({"prop11", ncgraph_from_channel(builtin::prop11_channel())});
  singles.push_back({"identity(d=2)", ncgraph_from_channel(builtin::identity_channel(2))});
  singles.push_back({"depolarizing(d=2)", ncgraph_from_channel(builtin::depolarizing_channel(2))});
  singles.push_back({"delta(2)", delta(2)});
  for (const auto& e : config.extra) singles.push_back(e);

  const NCGraph ex4 = ncgraph_from_channel(builtin::example4_channel(0.75));
  if (want("prop11")) add(check_prop11(opts));
  if (want("delta")) {
    for (int l = 1; l <= 6; ++l) add(check_delta(l, opts));
  }
  if (want("lemma2")) add(check_lemma2(delta(2), 3, "delta(2)", opts));
  if (want("theorem7")) {
    add(check_theorem7(ex4, ex4, "example4(alpha_sq=0.75)+example4(alpha_sq=0.75)", opts));
    add(check_theorem7(delta(1), delta(1), "delta(1)+delta(1)", opts));
  }
  if (want("theorem5")) {
    add(check_theorem5(ex4, delta(2), "example4(alpha_sq=0.75)*delta(2)", opts));
    add(check_theorem5(ex4, delta(1), "example4(alpha_sq=0.75)*delta(1)", opts));
  }
  if (want("sandwich")) add(check_sandwich(delta(2), 2, "delta(2)", opts));
  if (want("cq")) {
    add(check_cq(cq_from_states(builtin::example4_states(0.75)), "example4(alpha_sq=0.75)",
                 opts));
  }

  for (const auto& g : singles) {
    if (want("lemma2")) add(check_lemma2(g.graph, 2, g.name, opts));
    if (want("main_theorem")) add(check_main_theorem(g.graph, g.name, opts));
    if (want("duality")) add(check_duality(g.graph, g.name, opts));
    if (want("theorem9")) add(check_theorem9(g.graph, g.name, opts));
    if (want("corollary6")) add(check_corollary6(g.graph, g.name, opts));
  }

  for (std::uint64_t seed : config.seeds) {
    const RandomChannelSpec spec = random_spec(seed);
    const NCGraph k = ncgraph_from_channel(random_channel(spec));
    const std::string inst = spec.describe();
    if (want("lemma2")) add(check_lemma2(k, 2, inst, opts));
    if (want("main_theorem")) add(check_main_theorem(k, inst, opts));
    if (want("duality")) add(check_duality(k, inst, opts));
    if (want("theorem9")) add(check_theorem9(k, inst, opts));
    if (want("corollary6")) add(check_corollary6(k, inst, opts));

    const RandomChannelSpec partner = random_spec(seed ^ 0x9e3779b97f4a7c15ULL);
    const NCGraph k2 = ncgraph_from_channel(random_channel(partner));
    const std::string pair = inst + "+" + partner.describe();
    if (want("theorem7")) add(check_theorem7(k, k2, pair, opts));
    if (want("theorem5")) add(check_theorem5(k, k2, inst + "*" + partner.describe(), opts));

    if (want("cq")) {
      add(check_cq(cq_from_states(random_cq_states(seed)),
                   "random_cq(seed=" + std::to_string(seed) + ")", opts));
    }
    if (want("sandwich")) {
      RandomChannelSpec qubit = spec;
      qubit.d_in = 2;
      add(check_sandwich(ncgraph_from_channel(random_channel(qubit)), 2, qubit.describe(), opts));
    }
  }

  std::stable_sort(report.checks.begin(), report.checks.end(), [](const auto& x, const auto& y) {
    return std::tie(x.name, x.instance) < std::tie(y.name, y.instance);
  });
  return report;
}

}  // namespace nszcap
