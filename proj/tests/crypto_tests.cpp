#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace securezone;

namespace {

Bytes random_bytes(DeterministicRng& rng, std::size_t n) {
  Bytes out(n);
  rng.fill(out);
  return out;
}

}  // namespace

TEST_CASE("known-answer vectors for suite 0x01 pass", "[crypto][kat]") {
  const auto failures = sztest::kat_failures(SZ_VECTOR_DIR);
  for (const auto& f : failures) UNSCOPED_INFO(f);
  REQUIRE(failures.empty());
}

TEST_CASE("hash is deterministic with avalanche behavior", "[crypto]") {
  DeterministicRng rng(123);
  for (int i = 0; i < 1000; ++i) {
    Bytes msg = random_bytes(rng, 1 + rng.uniform_below(64));
    const Digest d = hash(msg);
    REQUIRE(hash(msg) == d);
    Bytes flipped = msg;
    flipped[rng.uniform_below(flipped.size())] ^=
        static_cast<Byte>(1u << rng.uniform_below(8));
    REQUIRE(hash(flipped) != d);
  }
}

TEST_CASE("tokens respect window boundaries", "[crypto][token]") {
  TokenSeed seed;
  DeterministicRng rng(5);
  rng.fill(seed.bytes);
  CHECK(token_at(seed, 100, 30) == token_at(seed, 101, 30));  // same window
  CHECK(token_at(seed, 100, 30) != token_at(seed, 131, 30));  // neighbor window
  CHECK(token_at(seed, 100, 30).window_index == 3);
  CHECK_THROWS_AS(token_at(seed, 100, 0), ZeroWindow);
}

TEST_CASE("different seeds give different tokens", "[crypto][token]") {
  DeterministicRng rng(6);
  for (int i = 0; i < 100; ++i) {
    TokenSeed a, b;
    rng.fill(a.bytes);
    rng.fill(b.bytes);
    REQUIRE(token_at(a, 1000, 30).tk != token_at(b, 1000, 30).tk);
  }
}

TEST_CASE("seal and open round-trip, including empty plaintext", "[crypto][aead]") {
  DeterministicRng rng(7);
  const auto key = rng.take_array<32>();
  for (const std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{300}}) {
    const Bytes pt = random_bytes(rng, n);
    const SealedBox box = seal(key, pt, rng);
    const auto back = open(key, box);
    REQUIRE(back.has_value());
    REQUIRE(*back == pt);
  }
}

TEST_CASE("open fails under any other key", "[crypto][aead]") {
  DeterministicRng rng(8);
  const auto key = rng.take_array<32>();
  const SealedBox box = seal(key, to_bytes("attempt"), rng);
  for (int i = 0; i < 100; ++i) {
    const auto wrong = rng.take_array<32>();
    REQUIRE_FALSE(open(wrong, box).has_value());
  }
}

TEST_CASE("every single-byte flip of a sealed box fails authentication", "[crypto][aead]") {
  DeterministicRng rng(9);
  const auto key = rng.take_array<32>();
  const SealedBox box = seal(key, to_bytes("zone advisory payload"), rng);
  for (std::size_t i = 0; i < box.nonce.size(); ++i) {
    SealedBox tampered = box;
    tampered.nonce[i] ^= 0xff;
    REQUIRE_FALSE(open(key, tampered).has_value());
  }
  for (std::size_t i = 0; i < box.ciphertext.size(); ++i) {
    SealedBox tampered = box;
    tampered.ciphertext[i] ^= 0xff;
    REQUIRE_FALSE(open(key, tampered).has_value());
  }
}

TEST_CASE("kdf separates labels and is length-stable", "[crypto][kdf]") {
  DeterministicRng rng(10);
  for (std::size_t n = 0; n <= 64; ++n) {
    const Bytes input = random_bytes(rng, n);
    const auto dem = kdf(input, kKdfLabelDem);
    const auto tok = kdf(input, kKdfLabelToken);
    REQUIRE(dem.size() == 32);
    REQUIRE(dem != tok);
    REQUIRE(kdf(input, kKdfLabelDem) == dem);
  }
}

TEST_CASE("signatures verify and reject tampering", "[crypto][sign]") {
  DeterministicRng rng(11);
  const SigningKeypair keys = signing_keypair(rng);
  const Bytes msg = to_bytes("broadcast token digest");
  const Signature sig = sign(keys, msg);
  REQUIRE(verify(keys.public_key, msg, sig));

  for (int i = 0; i < 100; ++i) {
    const SigningKeypair other = signing_keypair(rng);
    REQUIRE_FALSE(verify(other.public_key, msg, sig));
  }
  for (std::size_t byte = 0; byte < msg.size(); ++byte) {
    Bytes tampered = msg;
    tampered[byte] ^= 0x01;
    REQUIRE_FALSE(verify(keys.public_key, tampered, sig));
  }
  for (std::size_t byte = 0; byte < sig.bytes.size(); ++byte) {
    Signature tampered = sig;
    tampered.bytes[byte] ^= 0x01;
    REQUIRE_FALSE(verify(keys.public_key, msg, tampered));
  }
}

TEST_CASE("signature wire form is strict", "[crypto][sign]") {
  DeterministicRng rng(12);
  const Signature sig = sign(signing_keypair(rng), to_bytes("m"));
  ByteWriter w;
  write_signature(w, sig);

  ByteReader ok(as_span(w.bytes()));
  CHECK(read_signature(ok) == sig);

  Bytes bad_suite = w.bytes();
  bad_suite[0] = 0x02;
  ByteReader r1(bad_suite);
  CHECK_THROWS_AS(read_signature(r1), MalformedSignature);

  Bytes short_len = w.bytes();
  short_len[2] = 10;  // claim a 10-byte signature
  ByteReader r2(short_len);
  CHECK_THROWS_AS(read_signature(r2), MalformedSignature);
}

TEST_CASE("sealed box wire form round-trips strictly", "[crypto][aead]") {
  DeterministicRng rng(13);
  const auto key = rng.take_array<32>();
  const SealedBox box = seal(key, to_bytes("payload"), rng);
  const Bytes wire = serialize_sealed_box(box);
  CHECK(parse_sealed_box(wire) == box);
  Bytes trailing = wire;
  trailing.push_back(0);
  CHECK_THROWS_AS(parse_sealed_box(trailing), WireError);
  for (std::size_t cut = 0; cut < wire.size(); ++cut) {
    CHECK_THROWS_AS(parse_sealed_box(std::span(wire.data(), cut)), WireError);
  }
}

TEST_CASE("deterministic rng reproduces streams and respects bounds", "[crypto][rng]") {
  DeterministicRng a(99), b(99);
  for (int i = 0; i < 50; ++i) REQUIRE(a.next_u64() == b.next_u64());
  DeterministicRng c(100);
  for (int i = 0; i < 1000; ++i) REQUIRE(c.uniform_below(7) < 7);
}
