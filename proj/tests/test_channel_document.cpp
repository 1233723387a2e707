#include <cmath>
#include <limits>

#include "doctest.h"
#include "nszcap/channel_document.hpp"
#include "nszcap/theoremsuite.hpp"

using namespace nszcap;

TEST_CASE("kraus document round trip is exact") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const KrausChannel ch = random_channel(random_spec(seed));
    ChannelDocument doc;
    doc.type = ChannelDocument::Type::kKraus;
    doc.d_in = ch.d_in();
    doc.d_out = ch.d_out();
    doc.kraus = ch.kraus();
    const ChannelDocument back = parse_channel_document(write_channel_document(doc));
    REQUIRE(back.kraus.size() == doc.kraus.size());
    for (std::size_t i = 0; i < doc.kraus.size(); ++i) {
      CHECK(max_abs_diff(back.kraus[i], doc.kraus[i]) == 0.0);
    }
    CHECK(max_abs_diff(resolve(back).graph.projector(), ncgraph_from_channel(ch).projector()) <
          1e-15);
  }
}

TEST_CASE("cq and builtin documents") {
  ChannelDocument cq;
  cq.type = ChannelDocument::Type::kCq;
  cq.states = builtin::example4_states(0.75);
  const ChannelDocument back = parse_channel_document(write_channel_document(cq));
  CHECK(back.type == ChannelDocument::Type::kCq);
  const ResolvedChannel r = resolve(back);
  REQUIRE(r.cq.has_value());
  CHECK(r.cq->size() == 2);
  CHECK(r.graph.d_a() == 2);

  const ChannelDocument b = parse_channel_document(
      R"({"type": "builtin", "name": "amplitude-damping", "params": {"r": 0.75}})");
  CHECK(b.name == "amplitude-damping");
  CHECK(b.params.at("r") == 0.75);
  CHECK(resolve(b).graph.rank() == 2);
}

TEST_CASE("malformed documents name the offending field") {
  auto message = [](const std::string& text) {
    try {
      parse_channel_document(text);
    } catch (const InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("{").find("JSON") != std::string::npos);
  CHECK(message(R"({"d_in": 2})").find("'type'") != std::string::npos);
  CHECK(message(R"({"type": "kraus", "d_out": 2, "kraus": []})").find("'d_in'") != std::string::npos);
  CHECK(message(R"({"type": "kraus", "d_in": 2, "d_out": 2, "kraus": [[[[1, 0], [0]]]]})")
            .find("kraus[0]") != std::string::npos);
  CHECK(message(R"({"type": "kraus", "d_in": -1, "d_out": 2, "kraus": []})").find("'d_in'") !=
        std::string::npos);
  CHECK(message(R"({"type": "lindblad"})").find("'type'") != std::string::npos);
  CHECK(message(R"({"type": "builtin", "name": "delta", "params": {"l": "two"}})")
            .find("params.l") != std::string::npos);
}

TEST_CASE("documents failing channel validation are input errors") {
  const std::string not_tp =
      R"({"type": "kraus", "d_in": 2, "d_out": 2, "kraus": [[[[2, 0], [0, 0]], [[0, 0], [2, 0]]]]})";
  CHECK_THROWS_AS(resolve(parse_channel_document(not_tp)), InputError);
  const std::string wrong_shape =
      R"({"type": "kraus", "d_in": 3, "d_out": 2, "kraus": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]})";
  CHECK_THROWS_AS(resolve(parse_channel_document(wrong_shape)), InputError);
}

TEST_CASE("builtin specs") {
  ChannelDocument d = parse_builtin_spec("example4:0.75");
  CHECK(d.params.at("alpha_sq") == 0.75);
  d = parse_builtin_spec("example4:alpha_sq=0.5");
  CHECK(d.params.at("alpha_sq") == 0.5);
  CHECK(parse_builtin_spec("prop11").params.empty());
  CHECK(resolve(parse_builtin_spec("delta:3")).graph.d_a() == 3);
  CHECK(resolve(parse_builtin_spec("identity")).graph.d_a() == 2);
  CHECK(resolve(parse_builtin_spec("depolarizing:3")).graph.rank() == 9);
  CHECK_THROWS_AS(resolve(parse_builtin_spec("delta:0")), InputError);
  CHECK_THROWS_AS(resolve(parse_builtin_spec("delta")), InputError);
  CHECK_THROWS_AS(resolve(parse_builtin_spec("delta:2.5")), InputError);
  CHECK_THROWS_AS(resolve(parse_builtin_spec("example4:1.5")), InputError);
  CHECK_THROWS_AS(resolve(parse_builtin_spec("example4")), InputError);
  CHECK_THROWS_AS(resolve(parse_builtin_spec("example4:beta=0.5")), InputError);
  CHECK_THROWS_AS(parse_builtin_spec("example4:abc"), InputError);
  CHECK_THROWS_AS(parse_builtin_spec("prop11:1"), InputError);
  CHECK_THROWS_AS(resolve(parse_builtin_spec("bogus")), InputError);
}

TEST_CASE("builtin registry") {
  bool has_prop11 = false;
  for (const auto& b : builtin_registry()) {
    has_prop11 = has_prop11 || b.name == "prop11";
    if (b.name == "example4") CHECK(b.parameters.find("(0, 1]") != std::string::npos);
    if (b.name == "delta") CHECK(b.parameters.find(">= 1") != std::string::npos);
  }
  CHECK(has_prop11);
}
