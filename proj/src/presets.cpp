#include "blindpad/presets.hpp"

#include <array>

namespace blindpad {

namespace {

U256 mersenne(unsigned exponent) { return (U256(1) << exponent) - 1; }

const std::array<ParameterPreset, 11>& preset_table() {
    static const std::array<ParameterPreset, 11> table = {{
        {"5", 5, 12, 3, 5},
        {"7", 7, 12, 3, 6},
        {"11", 11, 16, 4, 7},
        {"23", 23, 20, 5, 10},
        {"101", 101, 28, 7, 14},
        {"1009", 1009, 40, 10, 20},
        {"5003", 5003, 52, 13, 25},
        {"20011", 20011, 60, 15, 29},
        {"2^31-1", mersenne(31), 124, 31, 62},
        {"2^61-1", mersenne(61), 244, 61, 122},
        {"2^127-1", mersenne(127), 508, 127, 254},
    }};
    return table;
}

} // namespace

std::span<const ParameterPreset> parameter_presets() { return preset_table(); }

std::optional<ParameterPreset> find_preset(std::string_view name) {
    for (const ParameterPreset& preset : preset_table())
        if (preset.name == name) return preset;
    return std::nullopt;
}

unsigned plaintext_bits(const PrimeModulus& p) { return ceil_log2(p.p()); }

unsigned ciphertext_bits(const PrimeModulus& p) { return ceil_log2(p.p_squared()); }

} // namespace blindpad
