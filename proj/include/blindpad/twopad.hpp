#pragma once

// The inner cipher: plaintexts in Z_p, ciphertexts in Z_{p²}, keys in
// Z_p × Z_p. Encryption hides a nonce z in the ciphertext's residue mod p
// (c ≡ z, z ≠ 0), which is what makes the blind transformation work: any two
// ciphertexts in the same residue class decrypt to messages that differ by a
// publicly computable amount (map_ciphertext). The flip side is that two
// plaintext/ciphertext pairs with distinct residues pin the key exactly
// (recover_key), so a key must never serve two decryptions.

#include <optional>
#include <span>
#include <vector>

#include "blindpad/num.hpp"

namespace blindpad::twopad {

struct TwoPadKey {
    U256 x;
    U256 y;

    bool operator==(const TwoPadKey& other) const noexcept { return x == other.x && y == other.y; }
};

// Both key halves drawn independently and uniformly from Z_p.
TwoPadKey gen(const PrimeModulus& p, RandomSource& rng);

// c = (p·x·b² + p·y·b + b) mod p² with b = p·m + z and a fresh nonce
// z ← U(Z_p∖{0}). The output always satisfies c ≡ z (mod p).
U256 encrypt(const TwoPadKey& key, const PrimeModulus& p, const U256& message, RandomSource& rng);

// Deterministic entry point with an explicit nonce. Exists for exhaustive
// verification and reproducible traces only; operational callers must use
// encrypt(), which draws the nonce itself.
U256 encrypt_with_nonce(const TwoPadKey& key, const PrimeModulus& p, const U256& message, const U256& nonce);

// z = c mod p, t = (p·(-x)·z² + p·(-y)·z + c) mod p², m = (t - z)/p. The
// division is exact by construction; total over all of Z_{p²} (a residue-0
// ciphertext decrypts fine here, the protocol layer is what rejects it).
U256 decrypt(const TwoPadKey& key, const PrimeModulus& p, const U256& ciphertext);

// Turns a known decryption (m1 of c1) into the decryption of any c2 in the
// same residue class: m2 = (c2 - c1 + p·m1)/p in Z_{p²}. Returns nullopt when
// c1 ≢ c2 (mod p).
std::optional<U256> map_ciphertext(const U256& c1, const U256& m1, const U256& c2, const PrimeModulus& p);

// Encrypts 1 <= L <= p-1 messages under one key with pairwise-distinct
// residues mod p, by drawing the L nonces without replacement from Z_p∖{0}.
std::vector<U256> encrypt_batch(const TwoPadKey& key, const PrimeModulus& p,
                                std::span<const U256> messages, RandomSource& rng);

// Solves the two-equation system v_i = x·z_i² + y·z_i (mod p) from two
// plaintext/ciphertext pairs with distinct nonzero residues. This is the
// reason a session key serves exactly one decryption: whoever holds two
// pairs holds the key.
TwoPadKey recover_key(const U256& m1, const U256& c1, const U256& m2, const U256& c2, const PrimeModulus& p);

// All p² keys, each exactly once. Enumeration support for the verifier and
// tests; requires small p.
std::vector<TwoPadKey> all_keys(const PrimeModulus& p);

} // namespace blindpad::twopad
