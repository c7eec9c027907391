#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "securezone/abe.hpp"
#include "securezone/bytes.hpp"
#include "securezone/crypto.hpp"
#include "securezone/group.hpp"
#include "securezone/policy.hpp"
#include "securezone/rng.hpp"

namespace securezone {

// Three-party scheme: a Central Authority issues ABE keys, zone certificates
// and the token seed; each Secure Zone Authority broadcasts its policy as an
// onion of ABE KEM (outermost), token-keyed envelope, and a signed token
// digest plus certificate inside; firearms assess received bytes offline.
//
// A zone message is built as
//   tk    = token_at(seed, now, W)
//   inner = ts | sign_sza(hash(tk)) | certificate
//   box   = seal(kdf(tk, "SZ-TOKEN"), inner)
//   (header, K) = abe_encrypt(pk, policy)
//   wire  = "SZM1" | suite | policy | header | seal(K, box)
// and assessed strictly in the reverse order; the first failing layer names
// the outcome.

/// Protocol layers run on the transparent test backend; other backends stay
/// behind the BilinearGroup concept and their own backend id.
using DefaultGroup = TransparentGroup;

inline const DefaultGroup& default_group() { return transparent_group(); }

inline constexpr std::string_view kZoneMessageMagic = "SZM1";
inline constexpr std::string_view kBundleFileMagic = "SZTPD1";
inline constexpr std::string_view kCertificateFileMagic = "SZCRT1";
inline constexpr std::string_view kCaStateFileMagic = "SZCAS1";
inline constexpr std::string_view kSzaStateFileMagic = "SZSZA1";

inline constexpr std::size_t kMaxZoneMessageBytes = 64 * 1024;

struct DuplicateSzaId : Error {
  using Error::Error;
};

struct UnknownAttribute : Error {
  using Error::Error;
};

struct InvalidExpiration : Error {
  using Error::Error;
};

struct MessageTooLarge : Error {
  using Error::Error;
};

/// Structural failure while decoding a zone message or state file.
class MalformedMessage : public Error {
 public:
  MalformedMessage(const std::string& what, std::size_t offset)
      : Error(what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// --- certificates ---------------------------------------------------------

struct Certificate {
  std::uint32_t sza_id = 0;
  std::array<Byte, 32> sza_public_key{};
  Signature ca_signature;
  bool operator==(const Certificate&) const = default;
};

inline Bytes certificate_signing_payload(std::uint32_t sza_id,
                                         const std::array<Byte, 32>& sza_public_key) {
  ByteWriter w;
  w.u32(sza_id);
  w.raw(sza_public_key);
  return w.take();
}

inline bool verify_certificate(const std::array<Byte, 32>& ca_public_key,
                               const Certificate& cert) {
  return verify(ca_public_key, certificate_signing_payload(cert.sza_id, cert.sza_public_key),
                cert.ca_signature);
}

inline void write_certificate(ByteWriter& w, const Certificate& cert) {
  w.u8(kSuiteId);
  w.u32(cert.sza_id);
  w.block16(cert.sza_public_key);
  write_signature(w, cert.ca_signature);
}

inline Certificate read_certificate(ByteReader& r) {
  const std::size_t at = r.offset();
  if (r.u8() != kSuiteId) throw WireError("unsupported certificate suite", at);
  Certificate cert;
  cert.sza_id = r.u32();
  auto pub = r.block16();
  if (pub.size() != 32) throw WireError("certificate public key must be 32 bytes", at);
  std::copy(pub.begin(), pub.end(), cert.sza_public_key.begin());
  try {
    cert.ca_signature = read_signature(r);
  } catch (const MalformedSignature& e) {
    throw WireError(e.what(), r.offset());
  }
  return cert;
}

inline Bytes serialize_certificate_file(const Certificate& cert) {
  ByteWriter w;
  w.raw(kCertificateFileMagic);
  write_certificate(w, cert);
  return w.take();
}

inline Certificate parse_certificate_file(std::span<const Byte> data) {
  ByteReader r(data);
  r.expect(kCertificateFileMagic, "certificate file");
  auto cert = read_certificate(r);
  r.require_end("certificate file");
  return cert;
}

// --- parties ---------------------------------------------------------------

struct CentralAuthority {
  SystemPublicKey<DefaultGroup> system_public_key;
  MasterSecretKey<DefaultGroup> master_secret_key;
  SigningKeypair signing;
  TokenSeed token_seed;
  AttributeSet universe;
  std::map<std::uint32_t, Certificate> sza_registry;
};

inline CentralAuthority ca_setup(DeterministicRng& rng, AttributeSet universe = {}) {
  for (const auto& name : universe) {
    if (!is_valid_attribute_name(name)) throw Error("invalid attribute name: '" + name + "'");
  }
  auto [pk, mk] = abe_setup(default_group(), rng);
  CentralAuthority ca;
  ca.system_public_key = pk;
  ca.master_secret_key = mk;
  ca.signing = signing_keypair(rng);
  ca.token_seed = TokenSeed{rng.take_array<32>()};
  ca.universe = std::move(universe);
  return ca;
}

struct SzaRegistration {
  Certificate certificate;
  SystemPublicKey<DefaultGroup> system_public_key;
  TokenSeed token_seed;
};

/// Registers a zone authority's public key: the CA certifies it, records it,
/// and hands back the system public key plus the token-authenticator seed.
inline SzaRegistration sza_register(CentralAuthority& ca,
                                    const std::array<Byte, 32>& sza_public_key,
                                    std::uint32_t sza_id) {
  if (ca.sza_registry.contains(sza_id)) {
    throw DuplicateSzaId("SZA id already registered: " + std::to_string(sza_id));
  }
  Certificate cert{sza_id, sza_public_key,
                   sign(ca.signing, certificate_signing_payload(sza_id, sza_public_key))};
  ca.sza_registry.emplace(sza_id, cert);
  return {cert, ca.system_public_key, ca.token_seed};
}

struct SzaState {
  std::uint32_t sza_id = 0;
  SigningKeypair signing;
  Certificate certificate;
  SystemPublicKey<DefaultGroup> system_public_key;
  TokenSeed token_seed;
  AccessTree policy;
};

/// Full zone bring-up: fresh signing keys, registration with the CA, and the
/// zone policy (every leaf must be in the CA's managed universe).
inline SzaState sza_create(CentralAuthority& ca, std::uint32_t sza_id, const AccessTree& policy,
                           DeterministicRng& rng) {
  check_tree_invariants(policy);
  for (const auto& name : leaf_attributes(policy)) {
    if (!ca.universe.contains(name)) {
      throw UnknownAttribute("unknown attribute in zone policy: " + name);
    }
  }
  auto keys = signing_keypair(rng);
  auto reg = sza_register(ca, keys.public_key, sza_id);
  return {sza_id, keys, reg.certificate, reg.system_public_key, reg.token_seed, policy};
}

/// Everything recorded into a firearm's tamper-proof device.
struct FirearmKeyBundle {
  AbeSecretKey<DefaultGroup> secret_key;
  std::uint64_t firearm_id = 0;
  std::uint64_t user_id = 0;
  DefaultGroup::Scalar x;  // mirrors secret_key.x
  std::uint64_t expires_at = 0;
  TokenSeed token_seed;
  std::array<Byte, 32> ca_public_key{};
  Byte suite = kSuiteId;
};

inline FirearmKeyBundle firearm_register(const CentralAuthority& ca, const AttributeSet& attrs,
                                         std::uint64_t firearm_id, std::uint64_t user_id,
                                         std::uint64_t expires_at, std::uint64_t issued_at,
                                         DeterministicRng& rng) {
  for (const auto& attr : attrs) {
    if (!ca.universe.contains(attr)) throw UnknownAttribute("unknown attribute: " + attr);
  }
  if (expires_at <= issued_at) {
    throw InvalidExpiration("expiration " + std::to_string(expires_at) +
                            " not after issuance " + std::to_string(issued_at));
  }
  auto sk = abe_keygen(default_group(), ca.master_secret_key, attrs, rng);
  const auto x = sk.x;
  return {std::move(sk), firearm_id, user_id, x,
          expires_at,    ca.token_seed, ca.signing.public_key, kSuiteId};
}

// --- zone messages ----------------------------------------------------------

struct ZoneMessage {
  Byte suite = kSuiteId;
  std::string policy_text;  // canonical, equals the header's tree
  AbeCiphertextHeader<DefaultGroup> header;
  SealedBox outer_box;
  bool operator==(const ZoneMessage&) const = default;
};

struct InnerBlob {
  std::uint64_t ts = 0;           // SZA clock at composition
  Signature token_signature;      // SZA signature over hash(tk)
  Certificate certificate;
  bool operator==(const InnerBlob&) const = default;
};

inline Bytes serialize_inner_blob(const InnerBlob& blob) {
  ByteWriter w;
  w.u64(blob.ts);
  write_signature(w, blob.token_signature);
  write_certificate(w, blob.certificate);
  return w.take();
}

inline InnerBlob parse_inner_blob(std::span<const Byte> data) {
  ByteReader r(data);
  InnerBlob blob;
  blob.ts = r.u64();
  try {
    blob.token_signature = read_signature(r);
  } catch (const MalformedSignature& e) {
    throw WireError(e.what(), r.offset());
  }
  blob.certificate = read_certificate(r);
  r.require_end("inner payload");
  return blob;
}

inline Bytes serialize_zone_message(const ZoneMessage& msg) {
  ByteWriter w;
  w.raw(kZoneMessageMagic);
  w.u8(msg.suite);
  w.block16(msg.policy_text);
  w.block32(serialize_abe_header(default_group(), msg.header));
  w.block32(serialize_sealed_box(msg.outer_box));
  if (w.size() > kMaxZoneMessageBytes) throw MessageTooLarge("zone message exceeds 64 KiB");
  return w.take();
}

/// Strict decoder: bad magic, unknown suite, non-canonical or mismatched
/// policy text, bad lengths, and trailing bytes all throw MalformedMessage.
inline ZoneMessage parse_zone_message(std::span<const Byte> data) {
  try {
    if (data.size() > kMaxZoneMessageBytes) throw WireError("message larger than 64 KiB", 0);
    ByteReader r(data);
    r.expect(kZoneMessageMagic, "zone message");
    const std::size_t suite_at = r.offset();
    ZoneMessage msg;
    msg.suite = r.u8();
    if (msg.suite != kSuiteId) throw WireError("unsupported suite", suite_at);
    const std::size_t policy_at = r.offset();
    msg.policy_text = r.string_block16();
    AccessTree clear_tree;
    try {
      clear_tree = parse_policy(msg.policy_text);
    } catch (const Error& e) {
      throw WireError(std::string("bad policy: ") + e.what(), policy_at);
    }
    if (serialize_policy(clear_tree) != msg.policy_text) {
      throw WireError("policy text not in canonical form", policy_at);
    }
    msg.header = parse_abe_header(default_group(), r.block32());
    if (serialize_policy(msg.header.tree) != msg.policy_text) {
      throw WireError("clear policy does not match header policy", policy_at);
    }
    msg.outer_box = parse_sealed_box(r.block32());
    r.require_end("zone message");
    return msg;
  } catch (const WireError& e) {
    throw MalformedMessage(e.what(), e.offset());
  }
}

/// Builds one broadcast for the zone at local time `now`. Deterministic given
/// (now, rng seed).
inline Bytes compose_zone_message(const SzaState& sza, std::uint64_t now, DeterministicRng& rng,
                                  std::uint32_t window = kDefaultTokenWindow) {
  const Token tok = token_at(sza.token_seed, now, window);
  const Digest tk_digest = hash(tok.tk);
  InnerBlob blob{now, sign(sza.signing, tk_digest.bytes), sza.certificate};
  const SealedBox inner_box = seal(kdf(tok.tk, kKdfLabelToken), serialize_inner_blob(blob), rng);
  auto [header, dem_key] = abe_encrypt(default_group(), sza.system_public_key, sza.policy, rng);
  const SealedBox outer_box = seal(dem_key.bytes, serialize_sealed_box(inner_box), rng);
  return serialize_zone_message(
      {kSuiteId, serialize_policy(sza.policy), std::move(header), outer_box});
}

// --- assessment -------------------------------------------------------------

enum class Advisory {
  kAuthorized,
  kPolicyNotSatisfied,
  kTokenMismatch,
  kKeyExpired,
  kInvalidCredential,
  kMalformed,
};

inline constexpr std::string_view advisory_token(Advisory a) {
  switch (a) {
    case Advisory::kAuthorized: return "AUTHORIZED";
    case Advisory::kPolicyNotSatisfied: return "POLICY_NOT_SATISFIED";
    case Advisory::kTokenMismatch: return "TOKEN_MISMATCH";
    case Advisory::kKeyExpired: return "KEY_EXPIRED";
    case Advisory::kInvalidCredential: return "INVALID_CREDENTIAL";
    case Advisory::kMalformed: return "MALFORMED";
  }
  return "MALFORMED";
}

inline std::optional<Advisory> parse_advisory_token(std::string_view s) {
  for (Advisory a : {Advisory::kAuthorized, Advisory::kPolicyNotSatisfied,
                     Advisory::kTokenMismatch, Advisory::kKeyExpired,
                     Advisory::kInvalidCredential, Advisory::kMalformed}) {
    if (advisory_token(a) == s) return a;
  }
  return std::nullopt;
}

struct AdvisoryOutcome {
  Advisory kind = Advisory::kMalformed;
  std::string detail;

  bool authorized() const noexcept { return kind == Advisory::kAuthorized; }
  bool operator==(const AdvisoryOutcome&) const = default;
};

/// Offline assessment of received bytes against the firearm's bundle and its
/// local clock. Checks run in fixed order and the first failure decides the
/// outcome:
///   (0) structural parse                     -> MALFORMED
///   (1) ABE decapsulation                    -> POLICY_NOT_SATISFIED
///   (2) outer envelope under the DEM key     -> MALFORMED
///   (3) token envelope, windows {n-1,n,n+1}  -> TOKEN_MISMATCH
///   (4) expiry: bundle.et < message ts       -> KEY_EXPIRED
///   (5) certificate, then token signature    -> INVALID_CREDENTIAL
/// Consumes only bytes and the clock; there is no reply channel.
inline AdvisoryOutcome assess(const FirearmKeyBundle& bundle, std::span<const Byte> message,
                              std::uint64_t now, std::uint32_t window = kDefaultTokenWindow) {
  if (window == 0) throw ZeroWindow("token window must be at least 1 second");

  ZoneMessage msg;
  try {
    msg = parse_zone_message(message);
  } catch (const MalformedMessage& e) {
    return {Advisory::kMalformed, e.what()};
  }
  if (msg.suite != bundle.suite) return {Advisory::kMalformed, "suite mismatch with bundle"};

  std::optional<EncapsulatedKey> dem_key;
  try {
    dem_key = abe_decrypt(default_group(), bundle.secret_key, msg.header);
  } catch (const MalformedHeader& e) {
    return {Advisory::kMalformed, e.what()};
  }
  if (!dem_key) {
    return {Advisory::kPolicyNotSatisfied,
            "attributes do not satisfy the zone policy (indistinguishable from a corrupted "
            "header)"};
  }

  const auto outer = open(dem_key->bytes, msg.outer_box);
  if (!outer) return {Advisory::kMalformed, "outer envelope failed authentication"};
  SealedBox inner_box;
  try {
    inner_box = parse_sealed_box(*outer);
  } catch (const Error&) {
    return {Advisory::kMalformed, "inner envelope framing invalid"};
  }

  const std::uint64_t n = now / window;
  std::optional<Token> matched;
  Bytes inner;
  for (int dw = -1; dw <= 1; ++dw) {
    if (n == 0 && dw < 0) continue;
    const std::uint64_t w_index = n + static_cast<std::uint64_t>(dw);
    const Token candidate = token_at(bundle.token_seed, w_index * window, window);
    if (auto plain = open(kdf(candidate.tk, kKdfLabelToken), inner_box)) {
      matched = candidate;
      inner = std::move(*plain);
      break;
    }
  }
  if (!matched) {
    return {Advisory::kTokenMismatch, "no token within one window of local time opens the message"};
  }

  InnerBlob blob;
  try {
    blob = parse_inner_blob(inner);
  } catch (const Error&) {
    return {Advisory::kMalformed, "inner payload malformed"};
  }
  if (bundle.expires_at < blob.ts) {
    return {Advisory::kKeyExpired, "secret key expired: et " + std::to_string(bundle.expires_at) +
                                       " < ts " + std::to_string(blob.ts)};
  }

  if (!verify_certificate(bundle.ca_public_key, blob.certificate)) {
    return {Advisory::kInvalidCredential, "zone certificate does not verify under the CA key"};
  }
  const Digest tk_digest = hash(matched->tk);
  if (!verify(blob.certificate.sza_public_key, tk_digest.bytes, blob.token_signature)) {
    return {Advisory::kInvalidCredential, "token digest signature invalid for zone key"};
  }

  return {Advisory::kAuthorized,
          "zone " + std::to_string(blob.certificate.sza_id) + " policy satisfied"};
}

// --- state files -------------------------------------------------------------

namespace detail {

inline void write_system_public_key(ByteWriter& w, const SystemPublicKey<DefaultGroup>& pk) {
  const auto& grp = default_group();
  w.u8(DefaultGroup::kBackendId);
  w.block16(grp.group_description());
  w.block16(grp.serialize_source(pk.g));
  w.block16(grp.serialize_source(pk.h));
  w.block16(grp.serialize_target(pk.e_gg_alpha));
}

inline SystemPublicKey<DefaultGroup> read_system_public_key(ByteReader& r) {
  const auto& grp = default_group();
  const std::size_t at = r.offset();
  if (r.u8() != DefaultGroup::kBackendId) throw WireError("unsupported group backend", at);
  const auto desc = r.block16();
  const auto expected = grp.group_description();
  if (!std::equal(desc.begin(), desc.end(), expected.begin(), expected.end())) {
    throw WireError("group description mismatch", at);
  }
  SystemPublicKey<DefaultGroup> pk;
  pk.g = grp.parse_source(r.block16());
  pk.h = grp.parse_source(r.block16());
  pk.e_gg_alpha = grp.parse_target(r.block16());
  return pk;
}

inline void write_secret_key(ByteWriter& w, const AbeSecretKey<DefaultGroup>& sk) {
  const auto& grp = default_group();
  w.u8(DefaultGroup::kBackendId);
  w.block16(grp.serialize_scalar(sk.x));
  w.block16(grp.serialize_source(sk.d));
  w.u16(static_cast<std::uint16_t>(sk.components.size()));
  for (const auto& [name, comp] : sk.components) {
    w.block16(name);
    w.block16(grp.serialize_source(comp.d_attr));
    w.block16(grp.serialize_source(comp.d_rand));
  }
}

inline AbeSecretKey<DefaultGroup> read_secret_key(ByteReader& r) {
  const auto& grp = default_group();
  const std::size_t at = r.offset();
  if (r.u8() != DefaultGroup::kBackendId) throw WireError("unsupported group backend", at);
  AbeSecretKey<DefaultGroup> sk;
  sk.x = grp.parse_scalar(r.block16());
  sk.d = grp.parse_source(r.block16());
  const std::uint16_t n = r.u16();
  if (n == 0) throw WireError("secret key without attributes", at);
  for (std::uint16_t i = 0; i < n; ++i) {
    const std::string name = r.string_block16();
    if (!is_valid_attribute_name(name)) throw WireError("invalid attribute name in key", at);
    auto d_attr = grp.parse_source(r.block16());
    auto d_rand = grp.parse_source(r.block16());
    if (!sk.components.emplace(name, AbeKeyComponent<DefaultGroup>{d_attr, d_rand}).second) {
      throw WireError("duplicate attribute in key", at);
    }
  }
  return sk;
}

}  // namespace detail

inline Bytes serialize_key_bundle(const FirearmKeyBundle& bundle) {
  const auto& grp = default_group();
  ByteWriter w;
  w.raw(kBundleFileMagic);
  w.u8(bundle.suite);
  w.u64(bundle.firearm_id);
  w.u64(bundle.user_id);
  w.u64(bundle.expires_at);
  w.block16(grp.serialize_scalar(bundle.x));
  w.raw(bundle.token_seed.bytes);
  w.block16(bundle.ca_public_key);
  detail::write_secret_key(w, bundle.secret_key);
  return w.take();
}

inline FirearmKeyBundle parse_key_bundle(std::span<const Byte> data) {
  const auto& grp = default_group();
  try {
    ByteReader r(data);
    r.expect(kBundleFileMagic, "key bundle");
    FirearmKeyBundle b;
    const std::size_t suite_at = r.offset();
    b.suite = r.u8();
    if (b.suite != kSuiteId) throw WireError("unsupported suite", suite_at);
    b.firearm_id = r.u64();
    b.user_id = r.u64();
    b.expires_at = r.u64();
    b.x = grp.parse_scalar(r.block16());
    b.token_seed.bytes = r.fixed<32>();
    const auto pub = r.block16();
    if (pub.size() != 32) throw WireError("CA public key must be 32 bytes", suite_at);
    std::copy(pub.begin(), pub.end(), b.ca_public_key.begin());
    b.secret_key = detail::read_secret_key(r);
    if (!(b.x == b.secret_key.x)) throw WireError("bundle x does not match key x", suite_at);
    r.require_end("key bundle");
    return b;
  } catch (const WireError& e) {
    throw MalformedMessage(e.what(), e.offset());
  }
}

inline Bytes serialize_central_authority(const CentralAuthority& ca) {
  const auto& grp = default_group();
  ByteWriter w;
  w.raw(kCaStateFileMagic);
  w.u8(kSuiteId);
  w.raw(ca.token_seed.bytes);
  w.raw(ca.signing.public_key);
  w.block16(ca.signing.secret_key);
  detail::write_system_public_key(w, ca.system_public_key);
  w.block16(grp.serialize_scalar(ca.master_secret_key.beta));
  w.block16(grp.serialize_source(ca.master_secret_key.g_alpha));
  w.u16(static_cast<std::uint16_t>(ca.universe.size()));
  for (const auto& name : ca.universe) w.block16(name);
  w.u16(static_cast<std::uint16_t>(ca.sza_registry.size()));
  for (const auto& [id, cert] : ca.sza_registry) write_certificate(w, cert);
  return w.take();
}

inline CentralAuthority parse_central_authority(std::span<const Byte> data) {
  const auto& grp = default_group();
  try {
    ByteReader r(data);
    r.expect(kCaStateFileMagic, "CA state file");
    const std::size_t at = r.offset();
    if (r.u8() != kSuiteId) throw WireError("unsupported suite", at);
    CentralAuthority ca;
    ca.token_seed.bytes = r.fixed<32>();
    ca.signing.public_key = r.fixed<32>();
    const auto sec = r.block16();
    if (sec.size() != 64) throw WireError("signing secret key must be 64 bytes", at);
    std::copy(sec.begin(), sec.end(), ca.signing.secret_key.begin());
    ca.system_public_key = detail::read_system_public_key(r);
    ca.master_secret_key.beta = grp.parse_scalar(r.block16());
    ca.master_secret_key.g_alpha = grp.parse_source(r.block16());
    const std::uint16_t nu = r.u16();
    for (std::uint16_t i = 0; i < nu; ++i) {
      const std::string name = r.string_block16();
      if (!is_valid_attribute_name(name)) throw WireError("invalid universe attribute", at);
      ca.universe.insert(name);
    }
    const std::uint16_t nr = r.u16();
    for (std::uint16_t i = 0; i < nr; ++i) {
      auto cert = read_certificate(r);
      if (!ca.sza_registry.emplace(cert.sza_id, cert).second) {
        throw WireError("duplicate SZA id in registry", at);
      }
    }
    r.require_end("CA state file");
    return ca;
  } catch (const WireError& e) {
    throw MalformedMessage(e.what(), e.offset());
  }
}

inline Bytes serialize_sza_state(const SzaState& sza) {
  ByteWriter w;
  w.raw(kSzaStateFileMagic);
  w.u8(kSuiteId);
  w.u32(sza.sza_id);
  w.raw(sza.signing.public_key);
  w.block16(sza.signing.secret_key);
  write_certificate(w, sza.certificate);
  detail::write_system_public_key(w, sza.system_public_key);
  w.raw(sza.token_seed.bytes);
  w.block16(serialize_policy(sza.policy));
  return w.take();
}

inline SzaState parse_sza_state(std::span<const Byte> data) {
  try {
    ByteReader r(data);
    r.expect(kSzaStateFileMagic, "SZA state file");
    const std::size_t at = r.offset();
    if (r.u8() != kSuiteId) throw WireError("unsupported suite", at);
    SzaState sza;
    sza.sza_id = r.u32();
    sza.signing.public_key = r.fixed<32>();
    const auto sec = r.block16();
    if (sec.size() != 64) throw WireError("signing secret key must be 64 bytes", at);
    std::copy(sec.begin(), sec.end(), sza.signing.secret_key.begin());
    sza.certificate = read_certificate(r);
    sza.system_public_key = detail::read_system_public_key(r);
    sza.token_seed.bytes = r.fixed<32>();
    const std::size_t policy_at = r.offset();
    const std::string policy_text = r.string_block16();
    try {
      sza.policy = parse_policy(policy_text);
    } catch (const Error& e) {
      throw WireError(std::string("bad policy: ") + e.what(), policy_at);
    }
    r.require_end("SZA state file");
    return sza;
  } catch (const WireError& e) {
    throw MalformedMessage(e.what(), e.offset());
  }
}

}  // namespace securezone
