#include <cmath>

#include "doctest.h"
#include "nszcap/graphspace.hpp"
#include "nszcap/theoremsuite.hpp"
#include "test_helpers.hpp"

using namespace nszcap;

TEST_CASE("choi_matrix of the qubit identity is 2|Phi><Phi|") {
  const ComplexMatrix j = choi_matrix(builtin::identity_channel(2));
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 0) = expect(0, 3) = expect(3, 0) = expect(3, 3) = 1.0;
  CHECK(max_abs_diff(j, expect) < 1e-15);
}

TEST_CASE("choi marginal on B-traced side is the identity for trace-preserving channels") {
  std::vector<KrausChannel> channels = {builtin::identity_channel(3),
                                        builtin::depolarizing_channel(2),
                                        builtin::example4_channel(0.75),
                                        builtin::amplitude_damping_channel(0.3),
                                        builtin::prop11_channel()};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) channels.push_back(random_channel(random_spec(seed)));
  for (const auto& ch : channels) {
    const ComplexMatrix j = choi_matrix(ch);
    CHECK(max_abs_diff(partial_trace(j, ch.d_in(), ch.d_out(), Subsystem::kSecond),
                       identity(ch.d_in())) < 1e-8);
  }
}

TEST_CASE("ncgraph ranks") {
  CHECK(ncgraph_from_channel(builtin::identity_channel(2)).rank() == 1);
  CHECK(ncgraph_from_channel(builtin::example4_channel(0.75)).rank() == 2);
  const NCGraph full = ncgraph_from_channel(builtin::depolarizing_channel(2));
  CHECK(max_abs_diff(full.projector(), identity(4)) < 1e-12);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const RandomChannelSpec spec = random_spec(seed);
    const KrausChannel ch = random_channel(spec);
    CHECK(ncgraph_from_channel(ch).rank() == static_cast<int>(ch.kraus().size()));
  }
}

TEST_CASE("support of the three-dimensional example channel matches its spanning vectors") {
  const NCGraph k = ncgraph_from_channel(builtin::prop11_channel());
  ComplexMatrix p = ComplexMatrix::Zero(9, 9);
  for (const auto& v : builtin::prop11_support_vectors()) p += v * v.adjoint();
  CHECK(max_abs_diff(k.projector(), p) < 1e-8);
}

TEST_CASE("support projection does not depend on the Kraus representation") {
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 3; seed <= 6; ++seed) {
    RandomChannelSpec spec = random_spec(seed);
    spec.num_kraus = 3;
    const KrausChannel ch = random_channel(spec);
    const int n = static_cast<int>(ch.kraus().size());
    const Eigen::HouseholderQR<ComplexMatrix> qr(testing::random_matrix(n, n, rng));
    const ComplexMatrix u = qr.householderQ();
    std::vector<ComplexMatrix> mixed;
    for (int i = 0; i < n; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(ch.d_out(), ch.d_in());
      for (int j = 0; j < n; ++j) e += u(i, j) * ch.kraus()[j];
      mixed.push_back(e);
    }
    const KrausChannel other(ch.d_in(), ch.d_out(), mixed);
    const ComplexMatrix diff =
        ncgraph_from_channel(ch).projector() - ncgraph_from_channel(other).projector();
    CHECK(op_norm(0.5 * (diff + diff.adjoint())) <= 1e-8);
  }
}

TEST_CASE("KrausChannel validation") {
  CHECK_THROWS_AS(KrausChannel(2, 2, {2.0 * identity(2)}), InputError);
  CHECK_THROWS_AS(KrausChannel(2, 2, {}), InputError);
  CHECK_THROWS_AS(KrausChannel(2, 3, {identity(2)}), InputError);
  const KrausChannel sub(2, 2, {0.5 * identity(2)}, KrausChannel::Mode::kRelaxed);
  CHECK(sub.subnormalized());
  CHECK_THROWS_AS(KrausChannel(2, 2, {0.5 * identity(2)}), InputError);
  CHECK_FALSE(builtin::identity_channel(2).subnormalized());
  CHECK_THROWS_AS(KrausChannel(2, 2, {2.0 * identity(2)}, KrausChannel::Mode::kRelaxed),
                  InputError);
}

TEST_CASE("NCGraph rejects non-projectors") {
  ComplexMatrix p = identity(4);
  p(0, 0) = 0.5;
  CHECK_THROWS_AS(NCGraph(2, 2, p), InputError);
  CHECK_THROWS_AS(NCGraph(2, 3, identity(4)), InputError);
}

TEST_CASE("delta graphs") {
  const NCGraph d1 = delta(1);
  CHECK(d1.d_a() == 1);
  CHECK(d1.projector()(0, 0) == Complex(1.0));
  const NCGraph d2 = delta(2);
  CHECK(d2.rank() == 2);
  CHECK(d2.projector()(0, 0) == Complex(1.0));
  CHECK(d2.projector()(3, 3) == Complex(1.0));
  CHECK(max_abs_diff(d2.marginal_b(), identity(2)) == 0.0);
  CHECK_THROWS_AS(delta(0), InputError);
}

TEST_CASE("tensor_graph") {
  // with (A A')(B B') ordering the product of two noiseless bits is delta(4) verbatim
  CHECK(max_abs_diff(tensor_graph(delta(2), delta(2)).projector(), delta(4).projector()) == 0.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const NCGraph k1 = ncgraph_from_channel(random_channel(random_spec(seed)));
    const NCGraph k2 = ncgraph_from_channel(random_channel(random_spec(seed + 100)));
    const NCGraph k = tensor_graph(k1, k2);
    CHECK(k.d_a() == k1.d_a() * k2.d_a());
    CHECK(k.d_b() == k1.d_b() * k2.d_b());
    CHECK(k.rank() == k1.rank() * k2.rank());
    CHECK(max_abs_diff(k.projector() * k.projector(), k.projector()) < 1e-9);
  }
  CHECK(tensor_power(delta(2), 3).d_a() == 8);
  CHECK_THROWS_AS(tensor_power(delta(2), 0), InputError);
}

TEST_CASE("tensor_graph matches the Choi support of the product channel") {
  const KrausChannel a = builtin::amplitude_damping_channel(0.4);
  const KrausChannel b = builtin::example4_channel(0.75);
  std::vector<ComplexMatrix> kraus;
  for (const auto& e : a.kraus())
    for (const auto& f : b.kraus()) kraus.push_back(tensor(e, f));
  const KrausChannel ab(4, 4, kraus);
  const ComplexMatrix direct = ncgraph_from_channel(ab).projector();
  const ComplexMatrix viaGraph =
      tensor_graph(ncgraph_from_channel(a), ncgraph_from_channel(b)).projector();
  CHECK(max_abs_diff(direct, viaGraph) < 1e-9);
}

TEST_CASE("direct_sum") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const NCGraph k1 = ncgraph_from_channel(random_channel(random_spec(seed)));
    const NCGraph k2 = ncgraph_from_channel(random_channel(random_spec(seed + 50)));
    const NCGraph k = direct_sum(k1, k2);
    CHECK(k.d_a() == k1.d_a() + k2.d_a());
    CHECK(k.d_b() == k1.d_b() + k2.d_b());
    CHECK(k.rank() == k1.rank() + k2.rank());
    CHECK(max_abs_diff(k.projector() * k.projector(), k.projector()) < 1e-9);
  }
  CHECK(max_abs_diff(direct_sum(delta(1), delta(1)).projector(), delta(2).projector()) == 0.0);
}

TEST_CASE("superdense_cq") {
  const NCGraph id = ncgraph_from_channel(builtin::identity_channel(2));
  const CqGraph cq = superdense_cq(id);
  CHECK(cq.size() == 4);
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  for (const auto& p : cq.projections()) {
    CHECK(std::abs(p.trace().real() - 1.0) < 1e-12);
    sum += p;
  }
  CHECK(max_abs_diff(sum, identity(4)) < 1e-12);  // four Bell projectors

  for (const NCGraph& k : {ncgraph_from_channel(builtin::amplitude_damping_channel(0.75)),
                           ncgraph_from_channel(builtin::prop11_channel()),
                           ncgraph_from_channel(random_channel(random_spec(9)))}) {
    const CqGraph c = superdense_cq(k);
    CHECK(c.size() == k.d_a() * k.d_a());
    ComplexMatrix total = ComplexMatrix::Zero(k.d_a() * k.d_b(), k.d_a() * k.d_b());
    for (const auto& p : c.projections()) {
      CHECK(std::lround(p.trace().real()) == k.rank());
      total += p;
    }
    CHECK(max_abs_diff(total, k.d_a() * tensor(identity(k.d_a()), k.marginal_b())) < 1e-9);
  }
}

TEST_CASE("cq_from_states") {
  const CqGraph orth = cq_from_states({ket_bra(2, 0, 0), ket_bra(2, 1, 1)});
  CHECK(orth.size() == 2);
  CHECK(max_abs_diff(orth.projections()[0], ket_bra(2, 0, 0)) < 1e-12);
  CHECK_THROWS_AS(cq_from_states({2.0 * ket_bra(2, 0, 0)}), InputError);
  const NCGraph k = ncgraph_from_cq(orth);
  CHECK(k.d_a() == 2);
  CHECK(max_abs_diff(k.projector(), delta(2).projector()) < 1e-12);
}

TEST_CASE("example 4 states at alpha_sq = 1/2 are orthogonal") {
  const auto states = builtin::example4_states(0.5);
  CHECK(std::abs((states[0] * states[1]).trace()) < 1e-15);
  CHECK_THROWS_AS(builtin::example4_states(0.0), InputError);
  CHECK_THROWS_AS(builtin::example4_channel(1.5), InputError);
}

TEST_CASE("amplitude damping marginal") {
  const NCGraph k = ncgraph_from_channel(builtin::amplitude_damping_channel(0.75));
  const RealVector ev = eig_hermitian(k.marginal_b()).eigenvalues;
  CHECK(ev(0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(1.8).epsilon(1e-12));
  // ||P_B|| = (3 - r)/(2 - r)
  CHECK(op_norm(k.marginal_b()) == doctest::Approx((3 - 0.75) / (2 - 0.75)).epsilon(1e-12));
}
