#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace securezone;

namespace {

// Contract checks written against the concept, not the concrete type, so any
// future backend can reuse them.
template <BilinearGroup G>
void check_bilinearity(const G& grp, DeterministicRng& rng, int trials) {
  const auto g = grp.generator();
  const auto e_gg = grp.pairing(g, g);
  for (int i = 0; i < trials; ++i) {
    const auto a = grp.random_scalar(rng);
    const auto b = grp.random_scalar(rng);
    const auto lhs = grp.pairing(grp.exp(g, a), grp.exp(g, b));
    const auto rhs = grp.gt_exp(e_gg, grp.scalar_mul(a, b));
    REQUIRE(lhs == rhs);
  }
}

template <BilinearGroup G>
void check_group_laws(const G& grp, DeterministicRng& rng, int trials) {
  const auto g = grp.generator();
  for (int i = 0; i < trials; ++i) {
    const auto x = grp.exp(g, grp.random_scalar(rng));
    const auto y = grp.exp(g, grp.random_scalar(rng));
    const auto z = grp.exp(g, grp.random_scalar(rng));
    REQUIRE(grp.mul(x, y) == grp.mul(y, x));
    REQUIRE(grp.mul(grp.mul(x, y), z) == grp.mul(x, grp.mul(y, z)));
    // exponentiation by the group order is the identity
    const auto order = grp.scalar_from_u64(TransparentGroup::kOrder);
    REQUIRE(grp.exp(x, order) == grp.exp(g, grp.scalar_from_u64(0)));
  }
}

}  // namespace

TEST_CASE("pairing is bilinear", "[group][property]") {
  DeterministicRng rng(2024);
  check_bilinearity(transparent_group(), rng, 1000);
}

TEST_CASE("source group laws hold", "[group][property]") {
  DeterministicRng rng(2025);
  check_group_laws(transparent_group(), rng, 200);
}

TEST_CASE("element serialization round-trips and carries the insecure flag", "[group]") {
  const auto& grp = transparent_group();
  DeterministicRng rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto s = grp.random_scalar(rng);
    const Bytes b = grp.serialize_scalar(s);
    REQUIRE(b.size() == 12);
    CHECK(std::string(b.begin(), b.begin() + 4) == "XPAR");
    CHECK(grp.parse_scalar(b) == s);
  }
  const Bytes desc = grp.group_description();
  CHECK(std::string(desc.begin(), desc.begin() + 4) == "XPAR");
}

TEST_CASE("element parsing is strict", "[group]") {
  const auto& grp = transparent_group();
  CHECK_THROWS_AS(grp.parse_source(Bytes{1, 2, 3}), WireError);
  Bytes bad = grp.serialize_source(TransparentGroup::Source{5});
  bad[0] = 'Y';  // break the magic
  CHECK_THROWS_AS(grp.parse_source(bad), WireError);
  // out-of-range value (>= p)
  ByteWriter w;
  w.raw(std::string_view("XPAR"));
  w.u64(TransparentGroup::kOrder);
  CHECK_THROWS_AS(grp.parse_source(w.bytes()), WireError);
  // trailing garbage
  Bytes long_one = grp.serialize_source(TransparentGroup::Source{5});
  long_one.push_back(0);
  CHECK_THROWS_AS(grp.parse_source(long_one), WireError);
}

TEST_CASE("hash_to_source is deterministic and separates attributes", "[group]") {
  const auto& grp = transparent_group();
  CHECK(grp.hash_to_source(to_bytes("officer")) == grp.hash_to_source(to_bytes("officer")));
  CHECK(grp.hash_to_source(to_bytes("officer")) != grp.hash_to_source(to_bytes("Officer")));
}

TEST_CASE("random scalars cover the range deterministically", "[group]") {
  const auto& grp = transparent_group();
  DeterministicRng a(9), b(9);
  for (int i = 0; i < 100; ++i) {
    const auto x = grp.random_scalar(a);
    REQUIRE(x == grp.random_scalar(b));
    REQUIRE(x.v < TransparentGroup::kOrder);
  }
  DeterministicRng c(10);
  for (int i = 0; i < 100; ++i) REQUIRE(grp.random_nonzero_scalar(c).v != 0);
}
