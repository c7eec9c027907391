#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "securezone/bytes.hpp"
#include "securezone/crypto.hpp"
#include "securezone/group.hpp"
#include "securezone/policy.hpp"
#include "securezone/rng.hpp"

namespace securezone {

// Ciphertext-policy ABE over access trees, in the classic bilinear form:
//
//   setup:   msk = (beta, g^alpha)         pk = (g, h = g^beta, e(g,g)^alpha)
//   keygen:  D = g^((alpha + x) / beta)    and per granted attribute j:
//            D_j = g^x * H(j)^(r_j),  D'_j = g^(r_j)
//   encrypt: root secret s shared down the tree (gate with threshold k draws
//            a degree k-1 polynomial q with q(0) = its secret; child i gets
//            q(i) by serialization order); each leaf y publishes
//            C_y = g^(q_y(0)), C'_y = H(attr_y)^(q_y(0));
//            C = h^s; C~ = M * e(g,g)^(alpha*s) for a random target-group
//            payload element M; the encapsulated DEM key is KDF(M).
//   decrypt: a satisfied leaf yields e(D_j, C_y) / e(D'_j, C'_y)
//            = e(g,g)^(x * q_y(0)); gates combine k satisfied children with
//            Lagrange weights in the exponent, giving e(g,g)^(x*s) at the
//            root; then M = C~ / (e(C, D) / e(g,g)^(x*s)).
//
// The per-key randomizer x ties all components of one key together: shares
// decrypted with components of two different keys aggregate to exponents
// mixing x1 and x2 and never cancel, so pooled keys cannot meet a policy
// that neither key meets alone.

struct EmptyAttributeSet : Error {
  using Error::Error;
};

struct MalformedHeader : Error {
  using Error::Error;
};

struct EncapsulatedKey {
  std::array<Byte, 32> bytes{};
  bool operator==(const EncapsulatedKey&) const = default;
};

template <BilinearGroup G>
struct SystemPublicKey {
  typename G::Source g;
  typename G::Source h;            // g^beta
  typename G::Target e_gg_alpha;   // e(g,g)^alpha
  bool operator==(const SystemPublicKey&) const = default;
};

template <BilinearGroup G>
struct MasterSecretKey {
  typename G::Scalar beta;
  typename G::Source g_alpha;
  bool operator==(const MasterSecretKey&) const = default;
};

template <BilinearGroup G>
struct AbeKeyComponent {
  typename G::Source d_attr;  // g^x * H(attr)^(r_j)
  typename G::Source d_rand;  // g^(r_j)
  bool operator==(const AbeKeyComponent&) const = default;
};

template <BilinearGroup G>
struct AbeSecretKey {
  typename G::Scalar x;    // collusion-binding randomizer, also key metadata
  typename G::Source d;    // g^((alpha + x) / beta)
  std::map<std::string, AbeKeyComponent<G>, std::less<>> components;

  AttributeSet attributes() const {
    AttributeSet out;
    for (const auto& [name, comp] : components) out.insert(name);
    return out;
  }

  bool operator==(const AbeSecretKey&) const = default;
};

template <BilinearGroup G>
struct AbeLeafShare {
  typename G::Source c_value;  // g^(q_y(0))
  typename G::Source c_attr;   // H(attr_y)^(q_y(0))
  bool operator==(const AbeLeafShare&) const = default;
};

template <BilinearGroup G>
struct AbeCiphertextHeader {
  AccessTree tree;
  typename G::Target c_tilde;            // M * e(g,g)^(alpha*s)
  typename G::Source c;                  // h^s
  std::vector<AbeLeafShare<G>> leaves;   // leaf serialization order
  bool operator==(const AbeCiphertextHeader&) const = default;
};

template <BilinearGroup G>
std::pair<SystemPublicKey<G>, MasterSecretKey<G>> abe_setup(const G& grp, DeterministicRng& rng) {
  const auto alpha = grp.random_scalar(rng);
  const auto beta = grp.random_nonzero_scalar(rng);
  const auto g = grp.generator();
  MasterSecretKey<G> mk{beta, grp.exp(g, alpha)};
  SystemPublicKey<G> pk{g, grp.exp(g, beta), grp.pairing(g, mk.g_alpha)};
  return {pk, mk};
}

template <BilinearGroup G>
AbeSecretKey<G> abe_keygen(const G& grp, const MasterSecretKey<G>& mk, const AttributeSet& attrs,
                           DeterministicRng& rng) {
  if (attrs.empty()) throw EmptyAttributeSet("a key needs at least one attribute");
  AbeSecretKey<G> sk;
  sk.x = grp.random_scalar(rng);
  const auto g = grp.generator();
  const auto g_x = grp.exp(g, sk.x);
  // D = (g^alpha * g^x)^(1/beta)
  sk.d = grp.exp(grp.mul(mk.g_alpha, g_x), grp.scalar_inverse(mk.beta));
  for (const auto& attr : attrs) {
    const auto r_j = grp.random_scalar(rng);
    const auto h_attr = grp.hash_to_source(to_bytes(attr));
    sk.components.emplace(attr, AbeKeyComponent<G>{grp.mul(g_x, grp.exp(h_attr, r_j)),
                                                   grp.exp(g, r_j)});
  }
  return sk;
}

namespace detail {

template <BilinearGroup G>
typename G::Scalar eval_share_polynomial(const G& grp,
                                         std::span<const typename G::Scalar> coeffs,
                                         typename G::Scalar x) {
  auto acc = grp.scalar_from_u64(0);
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    acc = grp.scalar_add(grp.scalar_mul(acc, x), coeffs[i]);
  }
  return acc;
}

/// Distributes `secret` down the tree, appending one share per leaf in
/// serialization order.
template <BilinearGroup G>
void share_secret(const G& grp, const AccessTree::Node& node, typename G::Scalar secret,
                  DeterministicRng& rng, std::vector<typename G::Scalar>& out) {
  if (node.is_leaf()) {
    out.push_back(secret);
    return;
  }
  std::vector<typename G::Scalar> coeffs;
  coeffs.reserve(node.threshold);
  coeffs.push_back(secret);
  for (std::uint32_t i = 1; i < node.threshold; ++i) coeffs.push_back(grp.random_scalar(rng));
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const auto child_secret =
        eval_share_polynomial(grp, std::span<const typename G::Scalar>(coeffs),
                              grp.scalar_from_u64(i + 1));
    share_secret(grp, node.children[i], child_secret, rng, out);
  }
}

template <BilinearGroup G>
typename G::Scalar lagrange_at_zero(const G& grp, std::uint64_t i,
                                    std::span<const std::uint64_t> indices) {
  auto num = grp.scalar_from_u64(1);
  auto den = grp.scalar_from_u64(1);
  const auto zero = grp.scalar_from_u64(0);
  for (std::uint64_t j : indices) {
    if (j == i) continue;
    num = grp.scalar_mul(num, grp.scalar_sub(zero, grp.scalar_from_u64(j)));
    den = grp.scalar_mul(den, grp.scalar_sub(grp.scalar_from_u64(i), grp.scalar_from_u64(j)));
  }
  return grp.scalar_mul(num, grp.scalar_inverse(den));
}

/// Returns e(g,g)^(x * q_node(0)) when the key's attributes satisfy this
/// subtree, nullopt otherwise. `leaf_index` advances across every visited
/// leaf to stay aligned with the header's share list.
template <BilinearGroup G>
std::optional<typename G::Target> decrypt_node(const G& grp, const AbeSecretKey<G>& sk,
                                               const AccessTree::Node& node,
                                               const std::vector<AbeLeafShare<G>>& leaves,
                                               std::size_t& leaf_index) {
  if (node.is_leaf()) {
    const auto& share = leaves[leaf_index++];
    const auto it = sk.components.find(node.attribute);
    if (it == sk.components.end()) return std::nullopt;
    return grp.gt_mul(grp.pairing(it->second.d_attr, share.c_value),
                      grp.gt_inverse(grp.pairing(it->second.d_rand, share.c_attr)));
  }
  std::vector<std::pair<std::uint64_t, typename G::Target>> satisfied;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    auto child = decrypt_node(grp, sk, node.children[i], leaves, leaf_index);
    if (child) satisfied.emplace_back(i + 1, *child);
  }
  if (satisfied.size() < node.threshold) return std::nullopt;
  satisfied.resize(node.threshold);  // first k satisfied children, by index
  std::vector<std::uint64_t> indices;
  indices.reserve(satisfied.size());
  for (const auto& [idx, val] : satisfied) indices.push_back(idx);
  auto acc = grp.gt_identity();
  for (const auto& [idx, val] : satisfied) {
    acc = grp.gt_mul(acc, grp.gt_exp(val, lagrange_at_zero(grp, idx, indices)));
  }
  return acc;
}

}  // namespace detail

template <BilinearGroup G>
std::pair<AbeCiphertextHeader<G>, EncapsulatedKey> abe_encrypt(const G& grp,
                                                               const SystemPublicKey<G>& pk,
                                                               const AccessTree& tree,
                                                               DeterministicRng& rng) {
  check_tree_invariants(tree);
  const auto s = grp.random_scalar(rng);
  std::vector<typename G::Scalar> shares;
  detail::share_secret(grp, tree.root, s, rng, shares);
  // Random payload element of GT; its KDF image is the DEM key.
  const auto m = grp.gt_exp(pk.e_gg_alpha, grp.random_nonzero_scalar(rng));

  AbeCiphertextHeader<G> header;
  header.tree = tree;
  header.c = grp.exp(pk.h, s);
  header.c_tilde = grp.gt_mul(m, grp.gt_exp(pk.e_gg_alpha, s));
  const auto leaf_names = leaf_attributes(tree);
  header.leaves.reserve(leaf_names.size());
  for (std::size_t i = 0; i < leaf_names.size(); ++i) {
    header.leaves.push_back(
        {grp.exp(grp.generator(), shares[i]),
         grp.exp(grp.hash_to_source(to_bytes(leaf_names[i])), shares[i])});
  }
  return {std::move(header), EncapsulatedKey{kdf(grp.serialize_target(m), kKdfLabelDem)}};
}

/// Recovers the encapsulated key when sk's attributes satisfy the header's
/// tree; returns nullopt otherwise. By contract an unsatisfied policy and a
/// garbage header are indistinguishable here. Throws MalformedHeader only
/// for structural violations (share list not matching the tree).
template <BilinearGroup G>
std::optional<EncapsulatedKey> abe_decrypt(const G& grp, const AbeSecretKey<G>& sk,
                                           const AbeCiphertextHeader<G>& header) {
  try {
    check_tree_invariants(header.tree);
  } catch (const Error& e) {
    throw MalformedHeader(e.what());
  }
  if (header.leaves.size() != leaf_count(header.tree)) {
    throw MalformedHeader("leaf share count does not match policy tree");
  }
  std::size_t leaf_index = 0;
  const auto root = detail::decrypt_node(grp, sk, header.tree.root, header.leaves, leaf_index);
  if (!root) return std::nullopt;
  // e(C, D) / e(g,g)^(x*s) = e(g,g)^(alpha*s); divide it out of C~.
  const auto blinding = grp.gt_mul(grp.pairing(header.c, sk.d), grp.gt_inverse(*root));
  const auto m = grp.gt_mul(header.c_tilde, grp.gt_inverse(blinding));
  return EncapsulatedKey{kdf(grp.serialize_target(m), kKdfLabelDem)};
}

// Header wire format:
//   "SZH1" | backend id (1) | policy text (u16 block, canonical form)
//        | C~ | C | per leaf: C_y, C'_y        (each element a u16 block)

inline constexpr std::string_view kAbeHeaderMagic = "SZH1";

template <BilinearGroup G>
void write_abe_header(const G& grp, ByteWriter& w, const AbeCiphertextHeader<G>& header) {
  w.raw(kAbeHeaderMagic);
  w.u8(G::kBackendId);
  w.block16(serialize_policy(header.tree));
  w.block16(grp.serialize_target(header.c_tilde));
  w.block16(grp.serialize_source(header.c));
  for (const auto& leaf : header.leaves) {
    w.block16(grp.serialize_source(leaf.c_value));
    w.block16(grp.serialize_source(leaf.c_attr));
  }
}

template <BilinearGroup G>
AbeCiphertextHeader<G> read_abe_header(const G& grp, ByteReader& r) {
  r.expect(kAbeHeaderMagic, "ABE header");
  const std::size_t backend_at = r.offset();
  if (r.u8() != G::kBackendId) throw WireError("unsupported group backend", backend_at);
  const std::size_t policy_at = r.offset();
  AbeCiphertextHeader<G> header;
  const std::string policy_text = r.string_block16();
  try {
    header.tree = parse_policy(policy_text);
  } catch (const Error& e) {
    throw WireError(std::string("bad policy in header: ") + e.what(), policy_at);
  }
  header.c_tilde = grp.parse_target(r.block16());
  header.c = grp.parse_source(r.block16());
  const std::size_t n = leaf_count(header.tree);
  header.leaves.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto c_value = grp.parse_source(r.block16());
    auto c_attr = grp.parse_source(r.block16());
    header.leaves.push_back({c_value, c_attr});
  }
  return header;
}

template <BilinearGroup G>
Bytes serialize_abe_header(const G& grp, const AbeCiphertextHeader<G>& header) {
  ByteWriter w;
  write_abe_header(grp, w, header);
  return w.take();
}

template <BilinearGroup G>
AbeCiphertextHeader<G> parse_abe_header(const G& grp, std::span<const Byte> data) {
  ByteReader r(data);
  auto header = read_abe_header(grp, r);
  r.require_end("ABE header");
  return header;
}

}  // namespace securezone
