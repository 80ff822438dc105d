#pragma once

// The outer layer: an additive one-time pad on Z_n. This is the minimal
// scheme with perfect secrecy on Z_n (key length = message length), used to
// hide the batch (mod p²) from the decryptor and the blind exchange (mod p)
// from the encryptor. Keys are bound to their modulus at creation; freshness
// bookkeeping lives one layer up, in the protocol sessions.

#include "blindpad/num.hpp"

namespace blindpad::otp {

struct OuterKey {
    U256 key;
    U256 modulus;

    bool operator==(const OuterKey& other) const noexcept {
        return key == other.key && modulus == other.modulus;
    }
};

OuterKey otp_gen(const U256& modulus, RandomSource& rng);

// (m + k) mod n. The message must carry the key's modulus.
Residue otp_encrypt(const OuterKey& key, const Residue& message);

// (c - k) mod n.
Residue otp_decrypt(const OuterKey& key, const Residue& ciphertext);

} // namespace blindpad::otp
