#include "blindpad/num.hpp"

#include <array>
#include <random>
#include <set>

namespace blindpad {

U256 pow_mod(const U256& base, const U256& exponent, const U256& n) {
    if (n == 0) raise(errc::invalid_modulus, "pow_mod: modulus is zero");
    if (n == 1) return 0;
    U256 result = 1;
    U256 b = base % n;
    U256 e = exponent;
    while (e != 0) {
        if (boost::multiprecision::bit_test(e, 0)) result = mul_mod(result, b, n);
        b = mul_mod(b, b, n);
        e >>= 1;
    }
    return result;
}

Residue reduce_mod(const U256& x, const U256& n) {
    if (n == 0) raise(errc::invalid_modulus, "reduce_mod: modulus is zero");
    return Residue{x % n, n};
}

Residue reduce_mod(std::int64_t x, const U256& n) {
    if (n == 0) raise(errc::invalid_modulus, "reduce_mod: modulus is zero");
    if (x >= 0) return Residue{U256(static_cast<std::uint64_t>(x)) % n, n};
    // Least non-negative representative of a negative operand.
    U256 magnitude = U256(static_cast<std::uint64_t>(-(x + 1))) + 1;
    U256 rem = magnitude % n;
    return Residue{rem == 0 ? U256(0) : n - rem, n};
}

U256 inv_mod(const U256& a, const U256& p) {
    if (p < 2) raise(errc::invalid_modulus, "inv_mod: modulus must be at least 2");
    U256 reduced = a % p;
    if (reduced == 0) raise(errc::no_inverse, "inv_mod: zero has no inverse");
    // p is prime throughout this library, so Fermat gives the inverse.
    return pow_mod(reduced, p - 2, p);
}

namespace {

bool miller_rabin_witness(const U256& n, const U256& witness, const U256& odd_part, unsigned two_exp) {
    U256 x = pow_mod(witness, odd_part, n);
    if (x == 1 || x == n - 1) return true;
    for (unsigned i = 1; i < two_exp; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return true;
        if (x == 1) return false;
    }
    return false;
}

// SplitMix64: counter-based, full-period, good enough for witness choice and
// for the deterministic test mode.
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

bool is_prime(const U256& n) {
    if (n < 2) raise(errc::invalid_input, "is_prime: argument must be at least 2");
    static constexpr std::array<unsigned, 12> kSmallPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (unsigned q : kSmallPrimes) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }

    U256 odd_part = n - 1;
    unsigned two_exp = 0;
    while (!boost::multiprecision::bit_test(odd_part, 0)) {
        odd_part >>= 1;
        ++two_exp;
    }

    if (n < (U256(1) << 64)) {
        // This witness set is deterministic below 2^64.
        for (unsigned a : kSmallPrimes) {
            if (!miller_rabin_witness(n, a, odd_part, two_exp)) return false;
        }
        return true;
    }

    // Above 2^64: 64 rounds with witnesses derived from n itself, keeping the
    // test a pure function of its input.
    std::uint64_t state = 0x243f6a8885a308d3ull ^ static_cast<std::uint64_t>(n & 0xffffffffffffffffull);
    for (int round = 0; round < 64; ++round) {
        U256 w = 0;
        for (int limb = 0; limb < 4; ++limb) w = (w << 64) | splitmix64(state);
        U256 witness = 2 + (w % (n - 3));
        if (!miller_rabin_witness(n, witness, odd_part, two_exp)) return false;
    }
    return true;
}

PrimeModulus PrimeModulus::create(const U256& p) {
    if (p < 5) raise(errc::invalid_input, "PrimeModulus: p must be at least 5");
    if (bit_length(p) > 127) raise(errc::invalid_input, "PrimeModulus: p must fit in 127 bits");
    if (!is_prime(p)) raise(errc::invalid_input, "PrimeModulus: p is not prime");
    return PrimeModulus(p, p * p);
}

RandomSource RandomSource::system() { return RandomSource(false, 0); }

RandomSource RandomSource::seeded(std::uint64_t seed) { return RandomSource(true, seed); }

std::uint64_t RandomSource::next_word() {
    if (deterministic_) return splitmix64(state_);
    static thread_local std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

Residue sample_uniform(const U256& upper, bool exclude_zero, RandomSource& rng) {
    if (upper == 0) raise(errc::invalid_input, "sample_uniform: empty range");
    if (exclude_zero && upper < 2) raise(errc::empty_range, "sample_uniform: {1..upper-1} is empty");
    if (upper == 1) return Residue{0, upper};

    unsigned bits = bit_length(upper - 1);
    unsigned words = (bits + 63) / 64;
    std::uint64_t top_mask = (bits % 64 == 0) ? ~0ull : ((1ull << (bits % 64)) - 1);
    for (;;) {
        U256 value = 0;
        for (unsigned i = 0; i < words; ++i) {
            std::uint64_t w = rng.next_word();
            if (i == 0) w &= top_mask;
            value = (value << 64) | w;
        }
        if (value >= upper) continue;
        if (exclude_zero && value == 0) continue;
        return Residue{value, upper};
    }
}

std::vector<U256> sample_distinct_nonzero(const U256& modulus, std::size_t count, RandomSource& rng) {
    if (count == 0) raise(errc::empty_batch, "sample_distinct_nonzero: count is zero");
    if (U256(count) > modulus - 1)
        raise(errc::capacity_exceeded, "sample_distinct_nonzero: count exceeds modulus-1");
    std::set<U256> seen;
    std::vector<U256> draws;
    draws.reserve(count);
    while (draws.size() < count) {
        U256 z = sample_uniform(modulus, true, rng).value;
        if (seen.insert(z).second) draws.push_back(z);
    }
    return draws;
}

} // namespace blindpad
