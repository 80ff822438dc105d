#include "blindpad/twopad.hpp"

#include <cassert>

namespace blindpad::twopad {

TwoPadKey gen(const PrimeModulus& p, RandomSource& rng) {
    U256 x = sample_uniform(p.p(), false, rng).value;
    U256 y = sample_uniform(p.p(), false, rng).value;
    return TwoPadKey{x, y};
}

U256 encrypt_with_nonce(const TwoPadKey& key, const PrimeModulus& p, const U256& message, const U256& nonce) {
    if (message >= p.p()) raise(errc::invalid_input, "encrypt: message outside Z_p");
    if (nonce == 0 || nonce >= p.p()) raise(errc::invalid_input, "encrypt: nonce outside Z_p\\{0}");
    const U256& pp = p.p_squared();
    U256 b = add_mod(mul_mod(p.p(), message, pp), nonce, pp);
    U256 b_sq = mul_mod(b, b, pp);
    U256 c = mul_mod(p.p(), mul_mod(key.x, b_sq, pp), pp);
    c = add_mod(c, mul_mod(p.p(), mul_mod(key.y, b, pp), pp), pp);
    return add_mod(c, b, pp);
}

U256 encrypt(const TwoPadKey& key, const PrimeModulus& p, const U256& message, RandomSource& rng) {
    U256 z = sample_uniform(p.p(), true, rng).value;
    return encrypt_with_nonce(key, p, message, z);
}

U256 decrypt(const TwoPadKey& key, const PrimeModulus& p, const U256& ciphertext) {
    if (ciphertext >= p.p_squared()) raise(errc::invalid_input, "decrypt: ciphertext outside Z_{p^2}");
    const U256& pp = p.p_squared();
    U256 z = ciphertext % p.p();
    U256 z_sq = mul_mod(z, z, pp);
    // t = c - p·x·z² - p·y·z (mod p²)
    U256 t = sub_mod(ciphertext, mul_mod(p.p(), mul_mod(key.x, z_sq, pp), pp), pp);
    t = sub_mod(t, mul_mod(p.p(), mul_mod(key.y, z, pp), pp), pp);
    U256 numerator = sub_mod(t, z, pp);
    assert(numerator % p.p() == 0); // exact by the scheme's algebra
    return numerator / p.p();
}

std::optional<U256> map_ciphertext(const U256& c1, const U256& m1, const U256& c2, const PrimeModulus& p) {
    if (c1 >= p.p_squared() || c2 >= p.p_squared())
        raise(errc::invalid_input, "map_ciphertext: ciphertext outside Z_{p^2}");
    if (m1 >= p.p()) raise(errc::invalid_input, "map_ciphertext: plaintext outside Z_p");
    if (c1 % p.p() != c2 % p.p()) return std::nullopt;
    const U256& pp = p.p_squared();
    U256 d = add_mod(sub_mod(c2, c1, pp), mul_mod(p.p(), m1, pp), pp);
    assert(d % p.p() == 0);
    return d / p.p();
}

std::vector<U256> encrypt_batch(const TwoPadKey& key, const PrimeModulus& p,
                                std::span<const U256> messages, RandomSource& rng) {
    if (messages.empty()) raise(errc::empty_batch, "encrypt_batch: no messages");
    if (U256(messages.size()) > p.p() - 1)
        raise(errc::capacity_exceeded, "encrypt_batch: batch larger than p-1");
    // c ≡ z (mod p), so distinct nonces give distinct residues directly.
    std::vector<U256> nonces = sample_distinct_nonzero(p.p(), messages.size(), rng);
    std::vector<U256> out;
    out.reserve(messages.size());
    for (std::size_t j = 0; j < messages.size(); ++j)
        out.push_back(encrypt_with_nonce(key, p, messages[j], nonces[j]));
    return out;
}

TwoPadKey recover_key(const U256& m1, const U256& c1, const U256& m2, const U256& c2, const PrimeModulus& p) {
    if (c1 >= p.p_squared() || c2 >= p.p_squared())
        raise(errc::invalid_input, "recover_key: ciphertext outside Z_{p^2}");
    if (m1 >= p.p() || m2 >= p.p()) raise(errc::invalid_input, "recover_key: plaintext outside Z_p");
    U256 z1 = c1 % p.p();
    U256 z2 = c2 % p.p();
    if (z1 == 0 || z2 == 0) raise(errc::invalid_ciphertext, "recover_key: ciphertext with residue 0");
    if (z1 == z2) raise(errc::degenerate_system, "recover_key: equal residues leave the system singular");

    // v_i = (c_i - z_i)/p - m_i (mod p) satisfies v_i = x·z_i² + y·z_i.
    auto v_of = [&](const U256& c, const U256& z, const U256& m) {
        U256 q = (c - z) / p.p();
        return sub_mod(q, m, p.p());
    };
    U256 v1 = v_of(c1, z1, m1);
    U256 v2 = v_of(c2, z2, m2);

    U256 z1_sq = mul_mod(z1, z1, p.p());
    U256 z2_sq = mul_mod(z2, z2, p.p());
    U256 det = sub_mod(mul_mod(z1_sq, z2, p.p()), mul_mod(z2_sq, z1, p.p()), p.p());
    U256 det_inv = inv_mod(det, p.p());

    U256 x = mul_mod(sub_mod(mul_mod(v1, z2, p.p()), mul_mod(v2, z1, p.p()), p.p()), det_inv, p.p());
    U256 y = mul_mod(sub_mod(mul_mod(v2, z1_sq, p.p()), mul_mod(v1, z2_sq, p.p()), p.p()), det_inv, p.p());
    return TwoPadKey{x, y};
}

std::vector<TwoPadKey> all_keys(const PrimeModulus& p) {
    if (p.p() > 4096) raise(errc::bound_exceeded, "all_keys: key space too large to enumerate");
    std::vector<TwoPadKey> keys;
    keys.reserve(static_cast<std::size_t>(p.p_squared()));
    for (U256 x = 0; x < p.p(); ++x)
        for (U256 y = 0; y < p.p(); ++y) keys.push_back(TwoPadKey{x, y});
    return keys;
}

} // namespace blindpad::twopad
