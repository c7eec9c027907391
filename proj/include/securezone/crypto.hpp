#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "securezone/bytes.hpp"
#include "securezone/rng.hpp"

namespace securezone {

// Suite 0x01: SHA-256 hashing, HKDF-SHA256 key derivation, HMAC-SHA256 token
// PRF, ChaCha20-Poly1305 (IETF, 12-byte nonce / 16-byte tag) sealing, and
// Ed25519 signatures. Every serialized object carries the suite id so the
// wire stays pinned even if other suites appear later.

inline constexpr Byte kSuiteId = 0x01;

/// Token window in seconds; verifiers search windows {n-1, n, n+1}.
inline constexpr std::uint32_t kDefaultTokenWindow = 30;

inline constexpr std::string_view kKdfLabelDem = "SZ-DEM";      // ABE-encapsulated key
inline constexpr std::string_view kKdfLabelToken = "SZ-TOKEN";  // tk-derived sealing key

struct ZeroWindow : Error {
  using Error::Error;
};

struct MalformedSignature : Error {
  using Error::Error;
};

namespace detail {

inline void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error("libsodium initialization failed");
}

}  // namespace detail

struct Digest {
  std::array<Byte, 32> bytes{};
  bool operator==(const Digest&) const = default;
};

inline Digest hash(std::span<const Byte> data) {
  detail::ensure_sodium();
  Digest d;
  crypto_hash_sha256(d.bytes.data(), data.data(), data.size());
  return d;
}

inline Bytes hmac_sha256(std::span<const Byte> key, std::span<const Byte> msg) {
  detail::ensure_sodium();
  static constexpr Byte kNone = 0;  // non-null stand-in for empty spans
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.empty() ? &kNone : key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, msg.empty() ? &kNone : msg.data(), msg.size());
  Bytes out(crypto_auth_hmacsha256_BYTES);
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

/// HKDF-SHA256 (extract + expand). Empty salt means a block of hash-length
/// zeros, matching RFC 5869.
inline Bytes hkdf_sha256(std::span<const Byte> salt, std::span<const Byte> ikm,
                         std::span<const Byte> info, std::size_t length) {
  if (length > 255 * 32) throw Error("hkdf output too long");
  const std::array<Byte, 32> zero_salt{};
  const auto prk = hmac_sha256(salt.empty() ? std::span<const Byte>(zero_salt) : salt, ikm);
  Bytes out;
  out.reserve(length);
  Bytes block;
  Byte counter = 1;
  while (out.size() < length) {
    Bytes input = block;
    input.insert(input.end(), info.begin(), info.end());
    input.push_back(counter++);
    block = hmac_sha256(prk, input);
    const std::size_t want = std::min<std::size_t>(block.size(), length - out.size());
    out.insert(out.end(), block.begin(), block.begin() + static_cast<std::ptrdiff_t>(want));
  }
  return out;
}

/// 32-byte key from arbitrary input, domain-separated by label.
inline std::array<Byte, 32> kdf(std::span<const Byte> input, std::string_view label) {
  const auto okm = hkdf_sha256({}, input,
                               std::span<const Byte>(reinterpret_cast<const Byte*>(label.data()),
                                                     label.size()),
                               32);
  std::array<Byte, 32> out{};
  std::copy(okm.begin(), okm.end(), out.begin());
  return out;
}

struct TokenSeed {
  std::array<Byte, 32> bytes{};
  bool operator==(const TokenSeed&) const = default;
};

struct Token {
  std::array<Byte, 16> tk{};
  std::uint64_t window_index = 0;
  bool operator==(const Token&) const = default;
};

/// Windowed one-time token: first 16 bytes of HMAC-SHA256(seed, window index)
/// with window index = floor(time / W). Replay exposure is bounded by the
/// verifier's +-1 window search.
inline Token token_at(const TokenSeed& seed, std::uint64_t time_seconds,
                      std::uint32_t window_seconds) {
  if (window_seconds == 0) throw ZeroWindow("token window must be at least 1 second");
  Token t;
  t.window_index = time_seconds / window_seconds;
  ByteWriter w;
  w.u64(t.window_index);
  const auto mac = hmac_sha256(seed.bytes, w.bytes());
  std::copy(mac.begin(), mac.begin() + 16, t.tk.begin());
  return t;
}

struct SealedBox {
  std::array<Byte, 12> nonce{};
  Bytes ciphertext;  // includes the trailing 16-byte tag
  bool operator==(const SealedBox&) const = default;
};

inline Bytes aead_encrypt(const std::array<Byte, 32>& key, const std::array<Byte, 12>& nonce,
                          std::span<const Byte> ad, std::span<const Byte> plaintext) {
  detail::ensure_sodium();
  Bytes out(plaintext.size() + crypto_aead_chacha20poly1305_ietf_ABYTES);
  unsigned long long out_len = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(out.data(), &out_len, plaintext.data(),
                                            plaintext.size(), ad.data(), ad.size(), nullptr,
                                            nonce.data(), key.data());
  out.resize(out_len);
  return out;
}

inline std::optional<Bytes> aead_decrypt(const std::array<Byte, 32>& key,
                                         const std::array<Byte, 12>& nonce,
                                         std::span<const Byte> ad,
                                         std::span<const Byte> ciphertext) {
  detail::ensure_sodium();
  if (ciphertext.size() < crypto_aead_chacha20poly1305_ietf_ABYTES) return std::nullopt;
  Bytes out(ciphertext.size() - crypto_aead_chacha20poly1305_ietf_ABYTES);
  unsigned long long out_len = 0;
  if (crypto_aead_chacha20poly1305_ietf_decrypt(out.data(), &out_len, nullptr, ciphertext.data(),
                                                ciphertext.size(), ad.data(), ad.size(),
                                                nonce.data(), key.data()) != 0) {
    return std::nullopt;
  }
  out.resize(out_len);
  return out;
}

inline SealedBox seal(const std::array<Byte, 32>& key, std::span<const Byte> plaintext,
                      DeterministicRng& rng) {
  SealedBox box;
  rng.fill(box.nonce);
  box.ciphertext = aead_encrypt(key, box.nonce, {}, plaintext);
  return box;
}

/// Opens a sealed box. Wrong key and tampered bytes are indistinguishable:
/// both return nullopt, never partial plaintext.
inline std::optional<Bytes> open(const std::array<Byte, 32>& key, const SealedBox& box) {
  return aead_decrypt(key, box.nonce, {}, box.ciphertext);
}

struct SigningKeypair {
  std::array<Byte, 32> public_key{};
  std::array<Byte, 64> secret_key{};
  bool operator==(const SigningKeypair&) const = default;
};

struct Signature {
  std::array<Byte, 64> bytes{};
  bool operator==(const Signature&) const = default;
};

inline SigningKeypair signing_keypair_from_seed(const std::array<Byte, 32>& seed) {
  detail::ensure_sodium();
  SigningKeypair kp;
  crypto_sign_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
  return kp;
}

inline SigningKeypair signing_keypair(DeterministicRng& rng) {
  return signing_keypair_from_seed(rng.take_array<32>());
}

inline Signature sign(const SigningKeypair& keys, std::span<const Byte> msg) {
  detail::ensure_sodium();
  Signature sig;
  crypto_sign_detached(sig.bytes.data(), nullptr, msg.data(), msg.size(),
                       keys.secret_key.data());
  return sig;
}

inline bool verify(const std::array<Byte, 32>& public_key, std::span<const Byte> msg,
                   const Signature& sig) {
  detail::ensure_sodium();
  return crypto_sign_verify_detached(sig.bytes.data(), msg.data(), msg.size(),
                                     public_key.data()) == 0;
}

// Wire forms. Fields are length-prefixed, integers big-endian, suite id first.

inline void write_signature(ByteWriter& w, const Signature& sig) {
  w.u8(kSuiteId);
  w.block16(sig.bytes);
}

inline Signature read_signature(ByteReader& r) {
  const std::size_t at = r.offset();
  Byte suite = 0;
  std::span<const Byte> body;
  try {
    suite = r.u8();
    body = r.block16();
  } catch (const WireError& e) {
    throw MalformedSignature(e.what());
  }
  if (suite != kSuiteId) throw MalformedSignature("unsupported signature suite at offset " +
                                                  std::to_string(at));
  if (body.size() != 64) throw MalformedSignature("signature must be 64 bytes");
  Signature sig;
  std::copy(body.begin(), body.end(), sig.bytes.begin());
  return sig;
}

inline void write_sealed_box(ByteWriter& w, const SealedBox& box) {
  w.u8(kSuiteId);
  w.raw(box.nonce);
  w.block32(box.ciphertext);
}

inline SealedBox read_sealed_box(ByteReader& r) {
  const std::size_t at = r.offset();
  if (r.u8() != kSuiteId) throw WireError("unsupported sealed-box suite", at);
  SealedBox box;
  box.nonce = r.fixed<12>();
  auto ct = r.block32();
  box.ciphertext.assign(ct.begin(), ct.end());
  return box;
}

inline Bytes serialize_sealed_box(const SealedBox& box) {
  ByteWriter w;
  write_sealed_box(w, box);
  return w.take();
}

inline SealedBox parse_sealed_box(std::span<const Byte> data) {
  ByteReader r(data);
  auto box = read_sealed_box(r);
  r.require_end("sealed box");
  return box;
}

}  // namespace securezone
