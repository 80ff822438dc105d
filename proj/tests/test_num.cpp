#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <gmp.h>

#include <array>
#include <cmath>
#include <cstring>
#include <set>

#include "blindpad/num.hpp"
#include "blindpad/presets.hpp"

using namespace blindpad;

namespace {

// Reference big-integer route for the cross-check, via GMP.
U256 gmp_mulmod(const U256& a, const U256& b, const U256& n) {
    mpz_t za, zb, zn;
    mpz_init_set_str(za, a.str().c_str(), 10);
    mpz_init_set_str(zb, b.str().c_str(), 10);
    mpz_init_set_str(zn, n.str().c_str(), 10);
    mpz_mul(za, za, zb);
    mpz_mod(za, za, zn);
    char* text = mpz_get_str(nullptr, 10, za);
    U256 result(text);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(text, std::strlen(text) + 1);
    mpz_clears(za, zb, zn, nullptr);
    return result;
}

U256 gmp_addmod(const U256& a, const U256& b, const U256& n) {
    mpz_t za, zb, zn;
    mpz_init_set_str(za, a.str().c_str(), 10);
    mpz_init_set_str(zb, b.str().c_str(), 10);
    mpz_init_set_str(zn, n.str().c_str(), 10);
    mpz_add(za, za, zb);
    mpz_mod(za, za, zn);
    char* text = mpz_get_str(nullptr, 10, za);
    U256 result(text);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(text, std::strlen(text) + 1);
    mpz_clears(za, zb, zn, nullptr);
    return result;
}

bool trial_division_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

U256 random_bits(RandomSource& rng, unsigned bits) {
    U256 v = 0;
    for (unsigned got = 0; got < bits; got += 64) v = (v << 64) | rng.next_word();
    return v & ((U256(1) << bits) - 1);
}

} // namespace

TEST_CASE("reduce_mod canonical range and negatives") {
    CHECK(reduce_mod(U256(7), 5).value == 2);
    CHECK(reduce_mod(std::int64_t(-4), 25).value == 21);
    CHECK(reduce_mod(U256(46), 25).value == 21);
    CHECK(reduce_mod(std::int64_t(-25), 25).value == 0);
    CHECK(reduce_mod(std::int64_t(-1), 25).value == 24);
    CHECK_THROWS_AS(reduce_mod(U256(3), 0), Error);

    for (std::int64_t x = -60; x < 60; ++x) {
        Residue r = reduce_mod(x, 7);
        CHECK(r.value < 7);
        std::int64_t back = static_cast<std::int64_t>(static_cast<std::uint64_t>(r.value));
        CHECK((back - x) % 7 == 0);
    }
}

TEST_CASE("inv_mod on small primes") {
    CHECK(inv_mod(1, 5) == 1);
    CHECK(inv_mod(2, 5) == 3);
    CHECK_THROWS_AS(inv_mod(0, 7), Error);

    for (std::uint64_t p : {5ull, 7ull, 11ull})
        for (std::uint64_t a = 1; a < p; ++a)
            CHECK(mul_mod(a, inv_mod(a, p), p) == 1);
}

TEST_CASE("is_prime agrees with trial division below 10^4") {
    CHECK(is_prime(5));
    CHECK_FALSE(is_prime(25));
    CHECK_THROWS_AS(is_prime(1), Error);
    for (std::uint64_t n = 2; n < 10000; ++n)
        CHECK(is_prime(n) == trial_division_prime(n));
}

TEST_CASE("is_prime on the large presets") {
    U256 m61 = (U256(1) << 61) - 1;
    U256 m127 = (U256(1) << 127) - 1;
    CHECK(is_prime(m61));
    CHECK(is_prime(m127));
    CHECK_FALSE(is_prime(m61 * m61));
    CHECK_FALSE(is_prime(m127 * 3));
    for (const ParameterPreset& preset : parameter_presets()) CHECK(is_prime(preset.p));
}

TEST_CASE("deterministic sampling replays and stays in range") {
    RandomSource a = RandomSource::seeded(42);
    RandomSource b = RandomSource::seeded(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_word() == b.next_word());

    RandomSource rng = RandomSource::seeded(7);
    for (int i = 0; i < 1000; ++i) {
        Residue r = sample_uniform(5, true, rng);
        CHECK(r.value >= 1);
        CHECK(r.value < 5);
        Residue s = sample_uniform(5, false, rng);
        CHECK(s.value < 5);
    }
    CHECK_THROWS_AS(sample_uniform(1, true, rng), Error);
    CHECK_THROWS_AS(sample_uniform(0, false, rng), Error);
}

TEST_CASE("sampler histogram within 5 sigma and never zero when excluded") {
    RandomSource rng = RandomSource::seeded(1234);
    constexpr int kDraws = 100000;
    std::array<int, 7> bins{};
    for (int i = 0; i < kDraws; ++i) {
        Residue r = sample_uniform(7, true, rng);
        REQUIRE(r.value != 0);
        ++bins[static_cast<std::size_t>(r.value)];
    }
    double expected = kDraws / 6.0;
    double sigma = std::sqrt(kDraws * (1.0 / 6.0) * (5.0 / 6.0));
    CHECK(bins[0] == 0);
    for (int z = 1; z <= 6; ++z) CHECK(std::abs(bins[z] - expected) <= 5.0 * sigma);
}

TEST_CASE("distinct nonzero sampling") {
    RandomSource rng = RandomSource::seeded(99);
    std::vector<U256> draws = sample_distinct_nonzero(5, 4, rng);
    std::set<U256> unique(draws.begin(), draws.end());
    CHECK(draws.size() == 4);
    CHECK(unique.size() == 4);
    CHECK(unique == std::set<U256>{1, 2, 3, 4});
    CHECK_THROWS_AS(sample_distinct_nonzero(5, 5, rng), Error);
    CHECK_THROWS_AS(sample_distinct_nonzero(5, 0, rng), Error);
}

TEST_CASE("256-bit arithmetic matches the GMP reference at p = 2^127-1") {
    U256 p = (U256(1) << 127) - 1;
    U256 p2 = p * p;
    RandomSource rng = RandomSource::seeded(2024);
    for (int trial = 0; trial < 100; ++trial) {
        U256 a = random_bits(rng, 254) % p2;
        U256 b = random_bits(rng, 254) % p2;
        CHECK(mul_mod(a, b, p2) == gmp_mulmod(a, b, p2));
        CHECK(add_mod(a, b, p2) == gmp_addmod(a, b, p2));
        CHECK(sub_mod(a, b, p2) == gmp_addmod(a, p2 - (b % p2), p2));
    }
}

TEST_CASE("pow_mod basics") {
    CHECK(pow_mod(2, 10, 1000) == 24);
    CHECK(pow_mod(3, 0, 7) == 1);
    U256 p = (U256(1) << 61) - 1;
    CHECK(pow_mod(2, p - 1, p) == 1); // Fermat at a Mersenne prime
}

TEST_CASE("PrimeModulus validation") {
    PrimeModulus p = PrimeModulus::create(5);
    CHECK(p.p_squared() == 25);
    CHECK_THROWS_AS(PrimeModulus::create(4), Error);
    CHECK_THROWS_AS(PrimeModulus::create(3), Error);
    CHECK_THROWS_AS(PrimeModulus::create((U256(1) << 128) - 159), Error); // too wide
    PrimeModulus big = PrimeModulus::create((U256(1) << 127) - 1);
    CHECK(bit_length(big.p_squared()) == 254);
}

TEST_CASE("bit_length and ceil_log2") {
    CHECK(bit_length(U256(0)) == 0);
    CHECK(bit_length(U256(1)) == 1);
    CHECK(bit_length(U256(5)) == 3);
    CHECK(ceil_log2(U256(5)) == 3);
    CHECK(ceil_log2(U256(8)) == 3);
    CHECK(ceil_log2(U256(9)) == 4);
    CHECK(ceil_log2(U256(25)) == 5);
    CHECK(ceil_log2(U256(49)) == 6);
}
