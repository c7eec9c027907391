#!/usr/bin/env python3
"""Generates suite01_kat.json, the known-answer vectors for suite 0x01.

Expected values come from an independent stack (hashlib / hmac /
cryptography), so the C++ side is cross-checked implementation against
implementation. Published vectors from FIPS 180-2, RFC 4231, RFC 5869,
RFC 8439 and RFC 8032 are asserted here before being written out.
"""

import hashlib
import hmac
import json
import os
import random

from cryptography.hazmat.primitives.ciphers.aead import ChaCha20Poly1305
from cryptography.hazmat.primitives.asymmetric.ed25519 import Ed25519PrivateKey
from cryptography.hazmat.primitives import serialization


def sha256(data: bytes) -> bytes:
    return hashlib.sha256(data).digest()


def hmac_sha256(key: bytes, msg: bytes) -> bytes:
    return hmac.new(key, msg, hashlib.sha256).digest()


def hkdf_sha256(salt: bytes, ikm: bytes, info: bytes, length: int) -> bytes:
    prk = hmac_sha256(salt if salt else b"\x00" * 32, ikm)
    okm = b""
    block = b""
    counter = 1
    while len(okm) < length:
        block = hmac_sha256(prk, block + info + bytes([counter]))
        okm += block
        counter += 1
    return okm[:length]


def token_at(seed: bytes, time_s: int, window_s: int) -> bytes:
    index = time_s // window_s
    return hmac_sha256(seed, index.to_bytes(8, "big"))[:16]


def main() -> None:
    rng = random.Random(0x5A5A5A)
    out = {"suite": 1}

    # --- SHA-256: FIPS 180-2 appendix B vectors + computed ones
    fips = [
        (b"abc", "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"),
        (b"", "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"),
        (
            b"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq",
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1",
        ),
    ]
    sha_vectors = []
    for msg, expected in fips:
        assert sha256(msg).hex() == expected, "FIPS vector mismatch"
        sha_vectors.append({"msg": msg.hex(), "digest": expected, "source": "FIPS 180-2"})
    for n in (1, 31, 32, 33, 255, 1000):
        msg = rng.randbytes(n)
        sha_vectors.append({"msg": msg.hex(), "digest": sha256(msg).hex(), "source": "computed"})
    out["sha256"] = sha_vectors

    # --- HMAC-SHA256: RFC 4231 cases 1, 2, 3, 6 + computed
    rfc4231 = [
        (b"\x0b" * 20, b"Hi There",
         "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"),
        (b"Jefe", b"what do ya want for nothing?",
         "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"),
        (b"\xaa" * 20, b"\xdd" * 50,
         "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe"),
        (b"\xaa" * 131, b"Test Using Larger Than Block-Size Key - Hash Key First",
         "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54"),
    ]
    hmac_vectors = []
    for key, msg, expected in rfc4231:
        assert hmac_sha256(key, msg).hex() == expected, "RFC 4231 vector mismatch"
        hmac_vectors.append(
            {"key": key.hex(), "msg": msg.hex(), "mac": expected, "source": "RFC 4231"})
    for kn, mn in ((0, 16), (32, 0), (64, 200)):
        key, msg = rng.randbytes(kn), rng.randbytes(mn)
        hmac_vectors.append({"key": key.hex(), "msg": msg.hex(),
                             "mac": hmac_sha256(key, msg).hex(), "source": "computed"})
    out["hmac_sha256"] = hmac_vectors

    # --- HKDF-SHA256: RFC 5869 test cases 1-3
    rfc5869 = [
        (bytes.fromhex("000102030405060708090a0b0c"), b"\x0b" * 22,
         bytes.fromhex("f0f1f2f3f4f5f6f7f8f9"), 42,
         "3cb25f25faacd57a90434f64d0362f2a2d2d0a90cf1a5a4c5db02d56ecc4c5bf"
         "34007208d5b887185865"),
        (bytes.fromhex("".join(f"{i:02x}" for i in range(0x60, 0xb0))),
         bytes.fromhex("".join(f"{i:02x}" for i in range(0x00, 0x50))),
         bytes.fromhex("".join(f"{i:02x}" for i in range(0xb0, 0x100))), 82,
         "b11e398dc80327a1c8e7f78c596a49344f012eda2d4efad8a050cc4c19afa97c"
         "59045a99cac7827271cb41c65e590e09da3275600c2f09b8367793a9aca3db71"
         "cc30c58179ec3e87c14c01d5c1f3434f1d87"),
        (b"", b"\x0b" * 22, b"", 42,
         "8da4e775a563c18f715f802a063c5a31b8a11f5c5ee1879ec3454e5f3c738d2d"
         "9d201395faa4b61a96c8"),
    ]
    hkdf_vectors = []
    for salt, ikm, info, length, expected in rfc5869:
        got = hkdf_sha256(salt, ikm, info, length).hex()
        assert got == expected, f"RFC 5869 vector mismatch: {got}"
        hkdf_vectors.append({"salt": salt.hex(), "ikm": ikm.hex(), "info": info.hex(),
                             "length": length, "okm": expected, "source": "RFC 5869"})
    out["hkdf_sha256"] = hkdf_vectors

    # --- ChaCha20-Poly1305 (IETF): RFC 8439 2.8.2 + computed empty-AD cases
    key = bytes.fromhex("808182838485868788898a8b8c8d8e8f909192939495969798999a9b9c9d9e9f")
    nonce = bytes.fromhex("070000004041424344454647")
    aad = bytes.fromhex("50515253c0c1c2c3c4c5c6c7")
    plaintext = (b"Ladies and Gentlemen of the class of '99: If I could offer you "
                 b"only one tip for the future, sunscreen would be it.")
    ct = ChaCha20Poly1305(key).encrypt(nonce, plaintext, aad)
    expected_ct = ("d31a8d34648e60db7b86afbc53ef7ec2a4aded51296e08fea9e2b5a736ee62d6"
                   "3dbea45e8ca9671282fafb69da92728b1a71de0a9e060b2905d6a5b67ecd3b36"
                   "92ddbd7f2d778b8c9803aee328091b58fab324e4fad675945585808b4831d7bc"
                   "3ff4def08e4b7a9de576d26586cec64b6116")
    expected_tag = "1ae10b594f09e26a7e902ecbd0600691"
    assert ct.hex() == expected_ct + expected_tag, "RFC 8439 vector mismatch"
    aead_vectors = [{"key": key.hex(), "nonce": nonce.hex(), "ad": aad.hex(),
                     "plaintext": plaintext.hex(), "ciphertext": ct.hex(),
                     "source": "RFC 8439"}]
    for n in (0, 1, 64):
        k, iv, pt = rng.randbytes(32), rng.randbytes(12), rng.randbytes(n)
        aead_vectors.append({"key": k.hex(), "nonce": iv.hex(), "ad": "",
                             "plaintext": pt.hex(),
                             "ciphertext": ChaCha20Poly1305(k).encrypt(iv, pt, b"").hex(),
                             "source": "computed"})
    out["chacha20poly1305"] = aead_vectors

    # --- Ed25519: RFC 8032 7.1 TEST 1-3 + computed
    rfc8032 = [
        ("9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60",
         "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a",
         "",
         "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e06522490155"
         "5fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b"),
        ("4ccd089b28ff96da9db6c346ec114e0f5b8a319f35aba624da8cf6ed4fb8a6fb",
         "3d4017c3e843895a92b70aa74d1b7ebc9c982ccf2ec4968cc0cd55f12af4660c",
         "72",
         "92a009a9f0d4cab8720e820b5f642540a2b27b5416503f8fb3762223ebdb69da"
         "085ac1e43e15996e458f3613d0f11d8c387b2eaeb4302aeeb00d291612bb0c00"),
        ("c5aa8df43f9f837bedb7442f31dcb7b166d38535076f094b85ce3a2e0b4458f7",
         "fc51cd8e6218a1a38da47ed00230f0580816ed13ba3303ac5deb911548908025",
         "af82",
         "6291d657deec24024827e69c3abe01a30ce548a284743a445e3680d7db5ac3ac"
         "18ff9b538d16f290ae67f760984dc6594a7c15e9716ed28dc027beceea1ec40a"),
    ]
    ed_vectors = []
    for seed_hex, pub_hex, msg_hex, sig_hex in rfc8032:
        sk = Ed25519PrivateKey.from_private_bytes(bytes.fromhex(seed_hex))
        pub = sk.public_key().public_bytes(serialization.Encoding.Raw,
                                           serialization.PublicFormat.Raw)
        sig = sk.sign(bytes.fromhex(msg_hex))
        assert pub.hex() == pub_hex, "RFC 8032 public key mismatch"
        assert sig.hex() == sig_hex, "RFC 8032 signature mismatch"
        ed_vectors.append({"seed": seed_hex, "public": pub_hex, "msg": msg_hex,
                           "signature": sig_hex, "source": "RFC 8032"})
    for n in (13, 200):
        seed, msg = rng.randbytes(32), rng.randbytes(n)
        sk = Ed25519PrivateKey.from_private_bytes(seed)
        pub = sk.public_key().public_bytes(serialization.Encoding.Raw,
                                           serialization.PublicFormat.Raw)
        ed_vectors.append({"seed": seed.hex(), "public": pub.hex(), "msg": msg.hex(),
                           "signature": sk.sign(msg).hex(), "source": "computed"})
    out["ed25519"] = ed_vectors

    # --- windowed tokens (library-specific construction, cross-implementation)
    token_vectors = []
    for time_s, window in ((0, 30), (100, 30), (101, 30), (131, 30), (1700000000, 30),
                           (1700000000, 7), (2**40, 1)):
        seed = rng.randbytes(32)
        token_vectors.append({"seed": seed.hex(), "time": time_s, "window": window,
                              "tk": token_at(seed, time_s, window).hex()})
    out["token"] = token_vectors

    # --- labeled KDF (HKDF with empty salt, label as info)
    kdf_vectors = []
    for label in ("SZ-DEM", "SZ-TOKEN"):
        for n in (0, 16, 32, 64):
            ikm = rng.randbytes(n)
            kdf_vectors.append({"input": ikm.hex(), "label": label,
                                "key": hkdf_sha256(b"", ikm, label.encode(), 32).hex()})
    out["kdf"] = kdf_vectors

    path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "suite01_kat.json")
    with open(path, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")
    counts = {k: len(v) for k, v in out.items() if isinstance(v, list)}
    print(f"wrote {path}: {counts}")


if __name__ == "__main__":
    main()
