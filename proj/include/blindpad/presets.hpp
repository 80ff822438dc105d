#pragma once

// Named parameter choices with their key-material accounting. The security
// of the scheme does not depend on the size of p; p only sets the plaintext
// width and the batch capacity L <= p-1, so small primes are legitimate.

#include <optional>
#include <span>
#include <string_view>

#include "blindpad/num.hpp"

namespace blindpad {

struct ParameterPreset {
    std::string_view name;
    U256 p;
    unsigned decryptor_key_bits; // 4*ceil(log2 p)
    unsigned plaintext_bits;     // ceil(log2 p)
    unsigned ciphertext_bits;    // ceil(log2 p²)
};

std::span<const ParameterPreset> parameter_presets();
std::optional<ParameterPreset> find_preset(std::string_view name);

unsigned plaintext_bits(const PrimeModulus& p);
unsigned ciphertext_bits(const PrimeModulus& p);

} // namespace blindpad
