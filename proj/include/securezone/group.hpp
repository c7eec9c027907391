#pragma once

#include <concepts>
#include <cstdint>
#include <span>

#include "securezone/bytes.hpp"
#include "securezone/crypto.hpp"
#include "securezone/field.hpp"
#include "securezone/rng.hpp"

namespace securezone {

/// Contract for a prime-order pairing group: source group G with generator g,
/// target group GT, bilinear map e: G x G -> GT with e(g^a, g^b) = e(g,g)^ab,
/// plus scalar-field arithmetic and strict element serialization. Production
/// pairing backends plug in behind this concept; the library ships only the
/// transparent test backend below.
template <typename G>
concept BilinearGroup =
    std::regular<typename G::Scalar> && std::regular<typename G::Source> &&
    std::regular<typename G::Target> &&
    requires(const G& g, const typename G::Scalar& s, const typename G::Source& a,
             const typename G::Target& t, DeterministicRng& rng, std::span<const Byte> bytes,
             std::uint64_t n) {
      { G::kBackendId } -> std::convertible_to<Byte>;
      { g.generator() } -> std::same_as<typename G::Source>;
      { g.mul(a, a) } -> std::same_as<typename G::Source>;
      { g.exp(a, s) } -> std::same_as<typename G::Source>;
      { g.pairing(a, a) } -> std::same_as<typename G::Target>;
      { g.gt_identity() } -> std::same_as<typename G::Target>;
      { g.gt_mul(t, t) } -> std::same_as<typename G::Target>;
      { g.gt_exp(t, s) } -> std::same_as<typename G::Target>;
      { g.gt_inverse(t) } -> std::same_as<typename G::Target>;
      { g.scalar_from_u64(n) } -> std::same_as<typename G::Scalar>;
      { g.scalar_add(s, s) } -> std::same_as<typename G::Scalar>;
      { g.scalar_sub(s, s) } -> std::same_as<typename G::Scalar>;
      { g.scalar_mul(s, s) } -> std::same_as<typename G::Scalar>;
      { g.scalar_inverse(s) } -> std::same_as<typename G::Scalar>;
      { g.scalar_is_zero(s) } -> std::same_as<bool>;
      { g.random_scalar(rng) } -> std::same_as<typename G::Scalar>;
      { g.random_nonzero_scalar(rng) } -> std::same_as<typename G::Scalar>;
      { g.hash_to_source(bytes) } -> std::same_as<typename G::Source>;
      { g.group_description() } -> std::same_as<Bytes>;
      { g.serialize_scalar(s) } -> std::same_as<Bytes>;
      { g.serialize_source(a) } -> std::same_as<Bytes>;
      { g.serialize_target(t) } -> std::same_as<Bytes>;
      { g.parse_scalar(bytes) } -> std::same_as<typename G::Scalar>;
      { g.parse_source(bytes) } -> std::same_as<typename G::Source>;
      { g.parse_target(bytes) } -> std::same_as<typename G::Target>;
    };

/// Desk-scale test backend: every element is stored as its own discrete log
/// modulo the Mersenne prime 2^61 - 1, and the pairing is plain modular
/// multiplication. That makes every algebraic identity directly checkable
/// with integer arithmetic -- and makes the backend COMPLETELY INSECURE.
/// Every serialized value carries the "XPAR" prefix as a tamper-evident
/// reminder of that.
class TransparentGroup {
 public:
  static constexpr std::uint64_t kOrder = 2305843009213693951ULL;  // 2^61 - 1, prime
  static constexpr Byte kBackendId = 0x00;
  static constexpr std::string_view kInsecureMagic = "XPAR";

  struct Scalar {
    std::uint64_t v = 0;
    bool operator==(const Scalar&) const = default;
  };
  struct Source {
    std::uint64_t v = 0;  // exponent: this element is g^v
    bool operator==(const Source&) const = default;
  };
  struct Target {
    std::uint64_t v = 0;  // exponent: this element is e(g,g)^v
    bool operator==(const Target&) const = default;
  };

  const PrimeField& field() const noexcept { return field_; }

  Source generator() const { return Source{1}; }
  Source mul(Source a, Source b) const { return Source{field_.add(a.v, b.v)}; }
  Source exp(Source a, Scalar e) const { return Source{field_.mul(a.v, e.v)}; }

  Target pairing(Source a, Source b) const { return Target{field_.mul(a.v, b.v)}; }
  Target gt_identity() const { return Target{0}; }
  Target gt_mul(Target a, Target b) const { return Target{field_.add(a.v, b.v)}; }
  Target gt_exp(Target a, Scalar e) const { return Target{field_.mul(a.v, e.v)}; }
  Target gt_inverse(Target a) const { return Target{field_.neg(a.v)}; }

  Scalar scalar_from_u64(std::uint64_t n) const { return Scalar{field_.reduce(n)}; }
  Scalar scalar_add(Scalar a, Scalar b) const { return Scalar{field_.add(a.v, b.v)}; }
  Scalar scalar_sub(Scalar a, Scalar b) const { return Scalar{field_.sub(a.v, b.v)}; }
  Scalar scalar_mul(Scalar a, Scalar b) const { return Scalar{field_.mul(a.v, b.v)}; }
  Scalar scalar_inverse(Scalar a) const { return Scalar{field_.inverse(a.v)}; }
  bool scalar_is_zero(Scalar a) const { return a.v == 0; }

  Scalar random_scalar(DeterministicRng& rng) const { return Scalar{rng.uniform_below(kOrder)}; }
  Scalar random_nonzero_scalar(DeterministicRng& rng) const {
    return Scalar{1 + rng.uniform_below(kOrder - 1)};
  }

  /// H(attr) = g^(sha256(attr) mod p).
  Source hash_to_source(std::span<const Byte> data) const {
    const Digest d = hash(data);
    std::uint64_t acc = 0;
    for (Byte b : d.bytes) acc = field_.add(field_.mul(acc, 256), b);
    return Source{acc};
  }

  Bytes group_description() const { return encode(kOrder); }
  Bytes serialize_scalar(Scalar s) const { return encode(s.v); }
  Bytes serialize_source(Source s) const { return encode(s.v); }
  Bytes serialize_target(Target t) const { return encode(t.v); }

  Scalar parse_scalar(std::span<const Byte> data) const { return Scalar{decode(data)}; }
  Source parse_source(std::span<const Byte> data) const { return Source{decode(data)}; }
  Target parse_target(std::span<const Byte> data) const { return Target{decode(data)}; }

 private:
  static Bytes encode(std::uint64_t v) {
    ByteWriter w;
    w.raw(kInsecureMagic);
    w.u64(v);
    return w.take();
  }

  static std::uint64_t decode(std::span<const Byte> data) {
    ByteReader r(data);
    r.expect(kInsecureMagic, "transparent group element");
    const std::uint64_t v = r.u64();
    r.require_end("transparent group element");
    if (v >= kOrder) throw WireError("group element out of range", 4);
    return v;
  }

  PrimeField field_{kOrder};
};

static_assert(BilinearGroup<TransparentGroup>);

/// Shared stateless instance of the default backend.
inline const TransparentGroup& transparent_group() {
  static const TransparentGroup g;
  return g;
}

}  // namespace securezone
