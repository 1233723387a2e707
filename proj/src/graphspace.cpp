#include "nszcap/graphspace.hpp"

#include <cmath>

namespace nszcap {

namespace {

constexpr double kTraceTol = 1e-8;
constexpr double kProjectorTol = 1e-9;

// Maps (A B A' B') ordering to (A A' B B') for the tensor of two graphs.
std::vector<Eigen::Index> reorder_tensor_indices(int da1, int db1, int da2,
                                                 int db2) {
  std::vector<Eigen::Index> target(static_cast<std::size_t>(da1) * db1 * da2 * db2);
  for (int a = 0; a < da1; ++a) {
    for (int b = 0; b < db1; ++b) {
      for (int a2 = 0; a2 < da2; ++a2) {
        for (int b2 = 0; b2 < db2; ++b2) {
          const Eigen::Index src = ((a * db1 + b) * da2 + a2) * db2 + b2;
          const Eigen::Index dst = ((a * da2 + a2) * db1 + b) * db2 + b2;
          target[src] = dst;
        }
      }
    }
  }
  return target;
}

}  // namespace

KrausChannel::KrausChannel(int d_in, int d_out, std::vector<ComplexMatrix> kraus,
                           Mode mode)
    : d_in_(d_in), d_out_(d_out), kraus_(std::move(kraus)) {
  if (d_in_ <= 0 || d_out_ <= 0) {
    throw InputError("KrausChannel: dimensions must be positive");
  }
  if (kraus_.empty()) {
    throw InputError("KrausChannel: at least one Kraus operator is required");
  }
  for (std::size_t i = 0; i < kraus_.size(); ++i) {
    if (kraus_[i].rows() != d_out_ || kraus_[i].cols() != d_in_) {
      throw InputError("KrausChannel: kraus[" + std::to_string(i) + "] is " +
                       std::to_string(kraus_[i].rows()) + "x" +
                       std::to_string(kraus_[i].cols()) + ", expected " +
                       std::to_string(d_out_) + "x" + std::to_string(d_in_));
    }
  }
  const double defect = trace_preservation_defect();
  if (defect <= kTraceTol) return;
  if (mode == Mode::kStrict) {
    throw InputError("KrausChannel: sum E^dag E deviates from identity by " +
                     std::to_string(defect));
  }
  ComplexMatrix sum = ComplexMatrix::Zero(d_in_, d_in_);
  for (const auto& e : kraus_) sum += e.adjoint() * e;
  const RealVector lambda = eig_hermitian(0.5 * (sum + sum.adjoint())).eigenvalues;
  if (lambda(lambda.size() - 1) > 1.0 + kTraceTol) {
    throw InputError("KrausChannel: sum E^dag E exceeds the identity");
  }
  subnormalized_ = true;
}

double KrausChannel::trace_preservation_defect() const {
  ComplexMatrix sum = ComplexMatrix::Zero(d_in_, d_in_);
  for (const auto& e : kraus_) sum += e.adjoint() * e;
  return max_abs_diff(sum, identity(d_in_));
}

void require_projector(const ComplexMatrix& p, double tol, const std::string& what) {
  if (p.rows() != p.cols()) {
    throw InputError(what + ": projector must be square");
  }
  const double herm = hermitian_defect(p);
  const double idem = max_abs_diff(p * p, p);
  if (herm > tol || idem > tol) {
    throw InputError(what + ": not an orthogonal projector (hermitian defect " +
                     std::to_string(herm) + ", idempotence defect " +
                     std::to_string(idem) + ")");
  }
}

NCGraph::NCGraph(int d_a, int d_b, ComplexMatrix projector)
    : d_a_(d_a), d_b_(d_b), projector_(std::move(projector)) {
  if (d_a_ <= 0 || d_b_ <= 0) {
    throw InputError("NCGraph: dimensions must be positive");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(d_a_) * d_b_;
  if (projector_.rows() != n || projector_.cols() != n) {
    throw InputError("NCGraph: projector must be " + std::to_string(n) + "-square");
  }
  require_projector(projector_, kProjectorTol, "NCGraph");
  projector_ = 0.5 * (projector_ + projector_.adjoint());
}

ComplexMatrix NCGraph::complement() const {
  return identity(d_a_ * d_b_) - projector_;
}

ComplexMatrix NCGraph::marginal_b() const {
  return partial_trace(projector_, d_a_, d_b_, Subsystem::kFirst);
}

int NCGraph::rank() const {
  return static_cast<int>(std::lround(projector_.trace().real()));
}

CqGraph::CqGraph(std::vector<ComplexMatrix> projections)
    : projections_(std::move(projections)) {
  if (projections_.empty()) {
    throw InputError("CqGraph: at least one output is required");
  }
  d_b_ = static_cast<int>(projections_.front().rows());
  if (d_b_ <= 0) throw InputError("CqGraph: empty output space");
  for (std::size_t i = 0; i < projections_.size(); ++i) {
    if (projections_[i].rows() != d_b_) {
      throw InputError("CqGraph: projection " + std::to_string(i) +
                       " has mismatched dimension");
    }
    require_projector(projections_[i], kProjectorTol,
                      "CqGraph projection " + std::to_string(i));
    projections_[i] = 0.5 * (projections_[i] + projections_[i].adjoint());
  }
}

ComplexMatrix choi_matrix(const KrausChannel& channel) {
  const int da = channel.d_in();
  const int db = channel.d_out();
  ComplexMatrix j = ComplexMatrix::Zero(da * db, da * db);
  for (const auto& e : channel.kraus()) {
    // |v> = sum_a |a> (x) E|a>
    ComplexVector v(da * db);
    for (int a = 0; a < da; ++a) {
      for (int b = 0; b < db; ++b) v(a * db + b) = e(b, a);
    }
    j += v * v.adjoint();
  }
  return j;
}

NCGraph ncgraph_from_channel(const KrausChannel& channel, double rank_tol) {
  return NCGraph(channel.d_in(), channel.d_out(),
                 support_projection(choi_matrix(channel), rank_tol));
}

NCGraph delta(int l) {
  if (l < 1) throw InputError("delta: l must be at least 1");
  ComplexMatrix p = ComplexMatrix::Zero(l * l, l * l);
  for (int i = 0; i < l; ++i) p(i * l + i, i * l + i) = 1.0;
  return NCGraph(l, l, std::move(p));
}

NCGraph tensor_graph(const NCGraph& k1, const NCGraph& k2) {
  const ComplexMatrix kron = tensor(k1.projector(), k2.projector());
  const auto target =
      reorder_tensor_indices(k1.d_a(), k1.d_b(), k2.d_a(), k2.d_b());
  const Eigen::Index n = kron.rows();
  ComplexMatrix p(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) p(target[x], target[y]) = kron(x, y);
  }
  return NCGraph(k1.d_a() * k2.d_a(), k1.d_b() * k2.d_b(), std::move(p));
}

NCGraph tensor_power(const NCGraph& k, int n) {
  if (n < 1) throw InputError("tensor_power: n must be at least 1");
  NCGraph out = k;
  for (int i = 1; i < n; ++i) out = tensor_graph(out, k);
  return out;
}

NCGraph direct_sum(const NCGraph& k1, const NCGraph& k2) {
  const int da = k1.d_a() + k2.d_a();
  const int db = k1.d_b() + k2.d_b();
  ComplexMatrix p = ComplexMatrix::Zero(da * db, da * db);
  auto embed = [&](const NCGraph& k, int a_offset, int b_offset) {
    const int ka = k.d_a();
    const int kb = k.d_b();
    for (int a1 = 0; a1 < ka; ++a1) {
      for (int b1 = 0; b1 < kb; ++b1) {
        for (int a2 = 0; a2 < ka; ++a2) {
          for (int b2 = 0; b2 < kb; ++b2) {
            p((a1 + a_offset) * db + b1 + b_offset,
              (a2 + a_offset) * db + b2 + b_offset) =
                k.projector()(a1 * kb + b1, a2 * kb + b2);
          }
        }
      }
    }
  };
  embed(k1, 0, 0);
  embed(k2, k1.d_a(), k1.d_b());
  return NCGraph(da, db, std::move(p));
}

CqGraph superdense_cq(const NCGraph& k) {
  const int da = k.d_a();
  std::vector<ComplexMatrix> outputs;
  outputs.reserve(static_cast<std::size_t>(da) * da);
  const ComplexMatrix id_b = identity(k.d_b());
  for (int a = 0; a < da; ++a) {
    for (int b = 0; b < da; ++b) {
      const ComplexMatrix u = tensor(generalized_pauli(da, a, b), id_b);
      outputs.push_back(u * k.projector() * u.adjoint());
    }
  }
  return CqGraph(std::move(outputs));
}

CqGraph cq_from_states(const std::vector<ComplexMatrix>& outputs, double rank_tol) {
  std::vector<ComplexMatrix> projections;
  projections.reserve(outputs.size());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto& rho = outputs[i];
    if (rho.rows() != rho.cols()) {
      throw InputError("cq_from_states: output " + std::to_string(i) +
                       " is not square");
    }
    if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-8) {
      throw InputError("cq_from_states: output " + std::to_string(i) +
                       " does not have unit trace");
    }
    projections.push_back(support_projection(rho, rank_tol));
  }
  return CqGraph(std::move(projections));
}

NCGraph ncgraph_from_cq(const CqGraph& cq) {
  const int da = cq.size();
  const int db = cq.d_b();
  ComplexMatrix p = ComplexMatrix::Zero(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    p.block(i * db, i * db, db, db) = cq.projections()[i];
  }
  return NCGraph(da, db, std::move(p));
}

namespace builtin {

KrausChannel identity_channel(int d) {
  return KrausChannel(d, d, {identity(d)});
}

KrausChannel depolarizing_channel(int d) {
  std::vector<ComplexMatrix> kraus;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      kraus.push_back(generalized_pauli(d, a, b) / static_cast<double>(d));
    }
  }
  return KrausChannel(d, d, std::move(kraus));
}

std::vector<ComplexMatrix> example4_states(double alpha_sq) {
  if (!(alpha_sq > 0.0 && alpha_sq <= 1.0)) {
    throw InputError("example4: alpha_sq must lie in (0, 1]");
  }
  const double alpha = std::sqrt(alpha_sq);
  const double beta = std::sqrt(1.0 - alpha_sq);
  ComplexVector psi0(2), psi1(2);
  psi0 << alpha, beta;
  psi1 << alpha, -beta;
  return {psi0 * psi0.adjoint(), psi1 * psi1.adjoint()};
}

KrausChannel example4_channel(double alpha_sq) {
  if (!(alpha_sq > 0.0 && alpha_sq <= 1.0)) {
    throw InputError("example4: alpha_sq must lie in (0, 1]");
  }
  const double alpha = std::sqrt(alpha_sq);
  const double beta = std::sqrt(1.0 - alpha_sq);
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = alpha;
  e0(1, 0) = beta;
  e1(0, 1) = alpha;
  e1(1, 1) = -beta;
  return KrausChannel(2, 2, {e0, e1});
}

KrausChannel amplitude_damping_channel(double r) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw InputError("amplitude-damping: r must lie in [0, 1]");
  }
  ComplexMatrix e0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix e1 = ComplexMatrix::Zero(2, 2);
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1.0 - r);
  e1(0, 1) = std::sqrt(r);
  return KrausChannel(2, 2, {e0, e1});
}

KrausChannel prop11_channel() {
  ComplexMatrix e0 = (ket_bra(3, 0, 0) + ket_bra(3, 2, 0)) / std::sqrt(2.0);
  ComplexMatrix e1 = std::sqrt(50.0 / 99.0) * ket_bra(3, 0, 2) +
                     std::sqrt(1.0 / 99.0) * ket_bra(3, 1, 1) +
                     std::sqrt(49.0 / 99.0) * ket_bra(3, 2, 2);
  ComplexMatrix e2 = std::sqrt(98.0 / 99.0) * ket_bra(3, 0, 1);
  return KrausChannel(3, 3, {e0, e1, e2});
}

std::vector<ComplexVector> prop11_support_vectors() {
  auto basis = [](int a, int b) {
    ComplexVector v = ComplexVector::Zero(9);
    v(a * 3 + b) = 1.0;
    return v;
  };
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return {
      inv_sqrt2 * (basis(0, 0) + basis(0, 2)),
      basis(1, 0),
      0.1 * basis(1, 1) + inv_sqrt2 * basis(2, 0) + 0.7 * basis(2, 2),
  };
}

ComplexMatrix prop11_dual_witness() {
  const double c = 0.1751;
  ComplexMatrix t = ComplexMatrix::Zero(3, 3);
  t(0, 0) = 1.0;
  t(0, 2) = std::sqrt(c);
  t(2, 0) = std::sqrt(c);
  t(2, 2) = c;
  return t;
}

}  // namespace builtin

}  // namespace nszcap
