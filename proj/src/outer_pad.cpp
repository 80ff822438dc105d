#include "blindpad/outer_pad.hpp"

namespace blindpad::otp {

OuterKey otp_gen(const U256& modulus, RandomSource& rng) {
    if (modulus < 2) raise(errc::invalid_modulus, "otp_gen: modulus must be at least 2");
    return OuterKey{sample_uniform(modulus, false, rng).value, modulus};
}

namespace {
void check_binding(const OuterKey& key, const Residue& operand, const char* what) {
    if (key.modulus != operand.modulus) raise(errc::binding_mismatch, what);
    if (operand.value >= operand.modulus) raise(errc::invalid_input, "outer pad: value out of range");
}
} // namespace

Residue otp_encrypt(const OuterKey& key, const Residue& message) {
    check_binding(key, message, "otp_encrypt: key and message bound to different moduli");
    return Residue{add_mod(message.value, key.key, key.modulus), key.modulus};
}

Residue otp_decrypt(const OuterKey& key, const Residue& ciphertext) {
    check_binding(key, ciphertext, "otp_decrypt: key and ciphertext bound to different moduli");
    return Residue{sub_mod(ciphertext.value, key.key, key.modulus), key.modulus};
}

} // namespace blindpad::otp
