// nszcap: zero-error capacities with no-signalling assistance.
//
// Exit codes: 0 ok, 1 input error, 2 solver failure, 3 verification failure.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nszcap/capacities.hpp"
#include "nszcap/channel_document.hpp"
#include "nszcap/theoremsuite.hpp"

using nlohmann::json;
using namespace nszcap;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;
constexpr int kExitVerify = 3;

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json witness_json(const NamedMatrices& w) {
  json out = json::object();
  for (const auto& [name, m] : w) out[name] = matrix_json(m);
  return out;
}

// JSON has no infinities; emit null instead.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string canonical(std::string q) {
  for (auto& ch : q) {
    if (ch == '-') ch = '_';
  }
  return q;
}

const CqGraph& require_cq(const ResolvedChannel& ch, const std::string& q) {
  if (!ch.cq) {
    throw InputError("quantity '" + q + "' needs a cq channel (a cq document or a cq built-in)");
  }
  return *ch.cq;
}

json compute(const ResolvedChannel& ch, const std::string& quantity, bool witness,
             const CapacityOptions& opts) {
  const std::string q = canonical(quantity);
  json out;
  out["channel"] = ch.description;
  out["d_a"] = ch.graph.d_a();
  out["d_b"] = ch.graph.d_b();
  if (q == "superdense_bound") {
    const double v = superdense_bound(ch.graph);
    out["quantity"] = q;
    out["value"] = v;
    out["log2_value"] = std::log2(v);
    return out;
  }
  if (q == "thm9" || q == "thm9_criteria") {
    const Thm9Report rep = thm9_criteria(ch.graph, opts);
    auto crit = [](const CriterionValue& c) { return json{{"holds", c.holds}, {"margin", c.margin}}; };
    out["quantity"] = "thm9_criteria";
    out["aram_gt_1"] = crit(rep.aram_gt_1);
    out["pb_strict"] = crit(rep.pb_strict);
    out["trq_posdef"] = crit(rep.trq_posdef);
    out["uhat_gt_1"] = crit(rep.uhat_gt_1);
    out["strict_tol"] = rep.strict_tol;
    out["aram"] = rep.aram_value;
    out["upsilon_hat"] = rep.uhat_value;
    return out;
  }
  CapacityResult r;
  if (q == "upsilon") {
    r = upsilon(ch.graph, opts);
  } else if (q == "upsilon_hat") {
    r = upsilon_hat(ch.graph, opts);
  } else if (q == "upsilon_hat_dual") {
    r = upsilon_hat_dual(ch.graph, opts);
  } else if (q == "aram") {
    r = aram(ch.graph, opts);
  } else if (q == "upsilon_cq") {
    r = upsilon_cq(require_cq(ch, q), opts);
  } else if (q == "upsilon_hat_cq") {
    r = upsilon_hat_cq(require_cq(ch, q), opts);
  } else if (q == "aram_cq") {
    r = aram_cq(require_cq(ch, q), opts);
  } else {
    throw InputError("unknown quantity '" + quantity + "'");
  }
  out["quantity"] = q == "upsilon_hat_dual" ? q : to_string(r.quantity);
  out["value"] = r.value;
  out["log2_value"] = number(r.log2_value);
  out["gap"] = r.gap;
  out["status"] = sdp::to_string(r.status);
  out["iterations"] = r.iterations;
  if (witness) {
    if (!r.primal_witness.empty()) out["primal_witness"] = witness_json(r.primal_witness);
    if (!r.dual_witness.empty()) out["dual_witness"] = witness_json(r.dual_witness);
  }
  return out;
}

json check_json(const TheoremCheck& c) {
  json j;
  j["name"] = c.name;
  j["instance"] = c.instance;
  j["relation"] = to_string(c.relation);
  j["lhs"] = number(c.lhs);
  j["rhs"] = number(c.rhs);
  j["tolerance"] = c.tolerance;
  j["margin"] = c.vacuous ? json(nullptr) : number(c.margin());
  j["passed"] = c.passed;
  j["vacuous"] = c.vacuous;
  if (!c.note.empty()) j["note"] = c.note;
  if (!c.parts.empty()) {
    j["parts"] = json::array();
    for (const auto& p : c.parts) j["parts"].push_back(check_json(p));
  }
  return j;
}

void print_text(const SuiteReport& rep) {
  for (const auto& c : rep.checks) {
    const char* tag = c.vacuous ? "SKIP" : (c.passed ? "PASS" : "FAIL");
    std::cout << tag << "  " << c.name << "  " << c.instance;
    if (!c.vacuous) {
      std::cout << "  lhs=" << c.lhs << " " << to_string(c.relation) << " rhs=" << c.rhs
                << " margin=" << c.margin();
    }
    if (!c.note.empty()) std::cout << "  (" << c.note << ")";
    std::cout << "\n";
    for (const auto& p : c.parts) {
      std::cout << "      " << (p.passed ? "ok  " : "FAIL") << " " << p.name << "  lhs=" << p.lhs
                << " rhs=" << p.rhs << " margin=" << p.margin() << "\n";
    }
  }
  std::cout << rep.checks.size() << " checks, " << rep.failures() << " failed, "
            << rep.vacuous() << " vacuous or skipped\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"No-signalling-assisted zero-error capacities of quantum channels"};
  app.require_subcommand(1);

  std::string channel_file;
  std::string builtin_spec;
  std::string quantity;
  bool witness = false;
  double gap_tol = 1e-8;
  auto* cmd_compute = app.add_subcommand("compute", "Solve one capacity program for a channel");
  auto* src = cmd_compute->add_option_group("source");
  src->add_option("--channel", channel_file, "Channel document (JSON)");
  src->add_option("--builtin", builtin_spec, "Built-in channel, NAME[:params]");
  src->require_option(1);
  cmd_compute
      ->add_option("--quantity", quantity,
                   "upsilon | upsilon-hat | upsilon-hat-dual | aram | upsilon-cq | "
                   "upsilon-hat-cq | aram-cq | superdense-bound | thm9")
      ->required();
  cmd_compute->add_flag("--witness", witness, "Include primal/dual witness matrices");
  cmd_compute->add_option("--gap-tol", gap_tol, "Solver duality-gap tolerance")
      ->check(CLI::PositiveNumber);

  std::vector<std::uint64_t> seeds;
  std::string only;
  double tolerance = 0.0;
  int work_dim = 36;
  std::string format = "json";
  auto* cmd_verify = app.add_subcommand("verify", "Run the theorem verification suite");
  cmd_verify->add_option("--seed", seeds, "Random instance seed (repeatable)");
  cmd_verify->add_option("--only", only, "Run a single check family");
  auto* tol_opt = cmd_verify->add_option("--tolerance", tolerance, "Override every check tolerance")
                      ->check(CLI::NonNegativeNumber);
  cmd_verify->add_option("--work-dim", work_dim,
                         "Skip derived graphs whose Choi dimension exceeds this")
      ->check(CLI::PositiveNumber);
  cmd_verify->add_option("--format", format, "json | text")
      ->check(CLI::IsMember({"json", "text"}));

  auto* cmd_examples = app.add_subcommand("examples", "List built-in channels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (cmd_compute->parsed()) {
      CapacityOptions opts;
      opts.max_choi_dim = default_max_choi_dim();
      opts.solver.gap_tol = gap_tol;
      const ChannelDocument doc = channel_file.empty() ? parse_builtin_spec(builtin_spec)
                                                       : read_channel_document(channel_file);
      const ResolvedChannel ch = resolve(doc);
      std::cout << compute(ch, quantity, witness, opts).dump(2) << "\n";
      return 0;
    }
    if (cmd_verify->parsed()) {
      SuiteConfig cfg;
      cfg.seeds = seeds;
      cfg.options.capacity.max_choi_dim = default_max_choi_dim();
      cfg.options.work_choi_dim = work_dim;
      if (tol_opt->count() > 0) cfg.options.tolerance = tolerance;
      if (!only.empty()) cfg.only = only;
      const SuiteReport rep = run_suite(cfg);
      if (format == "text") {
        print_text(rep);
      } else {
        json out;
        out["checks"] = json::array();
        for (const auto& c : rep.checks) out["checks"].push_back(check_json(c));
        out["total"] = rep.checks.size();
        out["failures"] = rep.failures();
        out["vacuous"] = rep.vacuous();
        out["strict_tol"] = kStrictTol;
        std::cout << out.dump(2) << "\n";
      }
      return rep.failures() == 0 ? 0 : kExitVerify;
    }
    if (cmd_examples->parsed()) {
      json out = json::array();
      for (const auto& b : builtin_registry()) {
        out.push_back({{"name", b.name}, {"parameters", b.parameters}, {"description", b.description}});
      }
      std::cout << out.dump(2) << "\n";
      return 0;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::logic_error& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
