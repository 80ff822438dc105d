#pragma once

// Exact modular arithmetic for moduli up to p² with p of at most 127 bits.
// Residues and moduli are 256-bit fixed-width unsigned integers; products are
// formed in 512 bits before reduction, so every operation is exact.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "blindpad/errors.hpp"

namespace blindpad {

using U256 = boost::multiprecision::uint256_t;
using U512 = boost::multiprecision::uint512_t;

// Number of bits in the binary representation of n; 0 for n = 0.
inline unsigned bit_length(const U256& n) { return n == 0 ? 0u : static_cast<unsigned>(boost::multiprecision::msb(n)) + 1u; }

// ceil(log2 n) for n >= 1.
inline unsigned ceil_log2(const U256& n) { return n <= 1 ? 0u : bit_length(n - 1); }

inline U256 add_mod(const U256& a, const U256& b, const U256& n) {
    return U256((U512(a) + U512(b)) % U512(n));
}

inline U256 sub_mod(const U256& a, const U256& b, const U256& n) {
    U512 lhs = U512(a) + U512(n) - U512(b % n);
    return U256(lhs % U512(n));
}

inline U256 mul_mod(const U256& a, const U256& b, const U256& n) {
    return U256((U512(a) * U512(b)) % U512(n));
}

U256 pow_mod(const U256& base, const U256& exponent, const U256& n);

// A validated public prime p >= 5 with p² cached. All scheme arithmetic takes
// one of these; constructing it is the single place primality is enforced.
class PrimeModulus {
public:
    static PrimeModulus create(const U256& p);

    const U256& p() const noexcept { return p_; }
    const U256& p_squared() const noexcept { return p_squared_; }

    bool operator==(const PrimeModulus& other) const noexcept { return p_ == other.p_; }

private:
    PrimeModulus(U256 p, U256 p_squared) : p_(std::move(p)), p_squared_(std::move(p_squared)) {}
    U256 p_;
    U256 p_squared_;
};

// A canonical representative together with the modulus it lives under.
struct Residue {
    U256 value;
    U256 modulus;

    bool operator==(const Residue& other) const noexcept {
        return value == other.value && modulus == other.modulus;
    }
};

Residue reduce_mod(const U256& x, const U256& n);
Residue reduce_mod(std::int64_t x, const U256& n);

// Multiplicative inverse mod a prime p; a must not be divisible by p.
U256 inv_mod(const U256& a, const U256& p);

// Deterministic for n < 2^64 (fixed witness set); for larger n, 64
// pseudorandom Miller-Rabin rounds with witnesses derived from n, so the
// result is still a pure function of n. Error probability below 2^-128.
bool is_prime(const U256& n);

// Uniform draws, either from OS entropy or from a seeded counter-based
// generator for reproducible tests. The scheme's secrecy argument assumes
// true randomness; the deterministic mode exists only so tests replay.
// Single-owner: a source may move between threads but never be shared.
class RandomSource {
public:
    static RandomSource system();
    static RandomSource seeded(std::uint64_t seed);

    RandomSource(const RandomSource&) = delete;
    RandomSource& operator=(const RandomSource&) = delete;
    RandomSource(RandomSource&&) noexcept = default;
    RandomSource& operator=(RandomSource&&) noexcept = default;

    std::uint64_t next_word();
    bool deterministic() const noexcept { return deterministic_; }

private:
    RandomSource(bool deterministic, std::uint64_t state)
        : deterministic_(deterministic), state_(state) {}
    bool deterministic_;
    std::uint64_t state_;
};

// Uniform on {0..upper-1}, or {1..upper-1} when exclude_zero. Rejection
// sampling, so there is no modulo bias.
Residue sample_uniform(const U256& upper, bool exclude_zero, RandomSource& rng);

// `count` pairwise-distinct uniform draws from {1..modulus-1}, in draw order.
std::vector<U256> sample_distinct_nonzero(const U256& modulus, std::size_t count, RandomSource& rng);

} // namespace blindpad
