#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "blindpad/twopad.hpp"
#include "oracle.hpp"

using namespace blindpad;
using twopad::TwoPadKey;

namespace {
const PrimeModulus kP5 = PrimeModulus::create(5);
const PrimeModulus kP7 = PrimeModulus::create(7);
const PrimeModulus kP11 = PrimeModulus::create(11);

std::uint64_t u64(const U256& v) { return static_cast<std::uint64_t>(v); }
} // namespace

TEST_CASE("worked encryption trace") {
    CHECK(twopad::encrypt_with_nonce(TwoPadKey{2, 3}, kP5, 4, 1) == 21);
    CHECK(twopad::encrypt_with_nonce(TwoPadKey{0, 0}, kP5, 0, 1) == 1);
    CHECK(twopad::decrypt(TwoPadKey{2, 3}, kP5, 21) == 4);
    CHECK(twopad::decrypt(TwoPadKey{0, 0}, kP5, 1) == 0);
}

TEST_CASE("encryption matches the independent formula evaluation") {
    for (const PrimeModulus* p : {&kP5, &kP7}) {
        std::uint64_t pv = u64(p->p());
        for (std::uint64_t x = 0; x < pv; ++x)
            for (std::uint64_t y = 0; y < pv; ++y)
                for (std::uint64_t m = 0; m < pv; ++m)
                    for (std::uint64_t z = 1; z < pv; ++z) {
                        U256 c = twopad::encrypt_with_nonce(TwoPadKey{x, y}, *p, m, z);
                        CHECK(u64(c) == oracle::enc(pv, x, y, m, z));
                        CHECK(u64(twopad::decrypt(TwoPadKey{x, y}, *p, c)) == oracle::dec(pv, x, y, u64(c)));
                    }
    }
}

TEST_CASE("round-trip is exhaustive at small primes") {
    for (const PrimeModulus* p : {&kP5, &kP7, &kP11}) {
        for (U256 x = 0; x < p->p(); ++x)
            for (U256 y = 0; y < p->p(); ++y) {
                TwoPadKey key{x, y};
                for (U256 m = 0; m < p->p(); ++m)
                    for (U256 z = 1; z < p->p(); ++z) {
                        U256 c = twopad::encrypt_with_nonce(key, *p, m, z);
                        CHECK(c % p->p() == z); // the nonce is the residue
                        CHECK(twopad::decrypt(key, *p, c) == m);
                    }
            }
    }
}

TEST_CASE("public encrypt draws a nonzero nonce and replays under a seed") {
    RandomSource a = RandomSource::seeded(5);
    RandomSource b = RandomSource::seeded(5);
    TwoPadKey key{2, 3};
    for (int i = 0; i < 50; ++i) {
        U256 ca = twopad::encrypt(key, kP5, 4, a);
        U256 cb = twopad::encrypt(key, kP5, 4, b);
        CHECK(ca == cb);
        CHECK(ca % 5 != 0);
        CHECK(twopad::decrypt(key, kP5, ca) == 4);
    }
    CHECK_THROWS_AS(twopad::encrypt_with_nonce(key, kP5, 5, 1), Error);
    CHECK_THROWS_AS(twopad::encrypt_with_nonce(key, kP5, 4, 0), Error);
    CHECK_THROWS_AS(twopad::decrypt(key, kP5, 25), Error);
}

TEST_CASE("gen draws uniform keys, deterministically under a seed") {
    RandomSource a = RandomSource::seeded(11);
    RandomSource b = RandomSource::seeded(11);
    TwoPadKey ka = twopad::gen(kP5, a);
    TwoPadKey kb = twopad::gen(kP5, b);
    CHECK(ka == kb);
    CHECK(ka.x < 5);
    CHECK(ka.y < 5);

    std::vector<TwoPadKey> keys = twopad::all_keys(kP5);
    CHECK(keys.size() == 25);
    std::set<std::pair<std::uint64_t, std::uint64_t>> unique;
    for (const TwoPadKey& key : keys) unique.emplace(u64(key.x), u64(key.y));
    CHECK(unique.size() == 25); // each key exactly once
}

TEST_CASE("map transforms along a residue class") {
    auto m2 = twopad::map_ciphertext(21, 4, 11, kP5);
    REQUIRE(m2.has_value());
    CHECK(*m2 == 2);
    CHECK(twopad::encrypt_with_nonce(TwoPadKey{2, 3}, kP5, 2, 1) == 11);

    auto identity = twopad::map_ciphertext(21, 4, 21, kP5);
    REQUIRE(identity.has_value());
    CHECK(*identity == 4);

    CHECK_FALSE(twopad::map_ciphertext(21, 4, 12, kP5).has_value());
}

TEST_CASE("map recovers the second plaintext for every common nonce") {
    for (const PrimeModulus* p : {&kP5, &kP7}) {
        for (U256 x = 0; x < p->p(); ++x)
            for (U256 y = 0; y < p->p(); ++y) {
                TwoPadKey key{x, y};
                for (U256 m1 = 0; m1 < p->p(); ++m1)
                    for (U256 m2 = 0; m2 < p->p(); ++m2)
                        for (U256 z = 1; z < p->p(); ++z) {
                            U256 c1 = twopad::encrypt_with_nonce(key, *p, m1, z);
                            U256 c2 = twopad::encrypt_with_nonce(key, *p, m2, z);
                            auto got = twopad::map_ciphertext(c1, m1, c2, *p);
                            REQUIRE(got.has_value());
                            CHECK(*got == m2);
                        }
            }
    }
}

TEST_CASE("batch encryption fills distinct residues and enforces capacity") {
    RandomSource rng = RandomSource::seeded(3);
    TwoPadKey key{1, 2};
    std::vector<U256> messages{0, 1, 2, 3};
    std::vector<U256> batch = twopad::encrypt_batch(key, kP5, messages, rng);
    std::set<U256> residues;
    for (const U256& c : batch) residues.insert(c % 5);
    CHECK(residues == std::set<U256>{1, 2, 3, 4}); // full capacity forces all residues

    std::vector<U256> five(5, 0);
    CHECK_THROWS_AS(twopad::encrypt_batch(key, kP5, five, rng), Error);
    CHECK_THROWS_AS(twopad::encrypt_batch(key, kP5, std::vector<U256>{}, rng), Error);

    for (int trial = 0; trial < 20; ++trial) {
        std::vector<U256> msgs{3, 1, 4};
        std::vector<U256> out = twopad::encrypt_batch(key, kP7, msgs, rng);
        std::set<U256> res;
        for (std::size_t j = 0; j < out.size(); ++j) {
            res.insert(out[j] % 7);
            CHECK(twopad::decrypt(key, kP7, out[j]) == msgs[j]);
        }
        CHECK(res.size() == 3);
    }
}

TEST_CASE("key recovery from two residue-distinct pairs") {
    TwoPadKey recovered = twopad::recover_key(4, 21, 1, 2, kP5);
    CHECK(recovered == TwoPadKey{2, 3});

    CHECK_THROWS_AS(twopad::recover_key(4, 21, 1, 6, kP5), Error);  // 21 ≡ 6 (mod 5)
    CHECK_THROWS_AS(twopad::recover_key(4, 20, 1, 2, kP5), Error);  // residue 0
}

TEST_CASE("key recovery is exact over the whole space") {
    for (const PrimeModulus* p : {&kP5, &kP7}) {
        for (U256 x = 0; x < p->p(); ++x)
            for (U256 y = 0; y < p->p(); ++y) {
                TwoPadKey key{x, y};
                for (U256 m1 = 0; m1 < p->p(); ++m1)
                    for (U256 m2 = 0; m2 < p->p(); ++m2)
                        for (U256 z1 = 1; z1 < p->p(); ++z1)
                            for (U256 z2 = 1; z2 < p->p(); ++z2) {
                                if (z1 == z2) continue;
                                U256 c1 = twopad::encrypt_with_nonce(key, *p, m1, z1);
                                U256 c2 = twopad::encrypt_with_nonce(key, *p, m2, z2);
                                CHECK(twopad::recover_key(m1, c1, m2, c2, *p) == key);
                            }
            }
    }
}

TEST_CASE("exactly one key is consistent with a residue-distinct pair, p=5") {
    std::uint64_t p = 5;
    for (std::uint64_t m1 = 0; m1 < p; ++m1)
        for (std::uint64_t m2 = 0; m2 < p; ++m2)
            for (std::uint64_t z1 = 1; z1 < p; ++z1)
                for (std::uint64_t z2 = 1; z2 < p; ++z2) {
                    if (z1 == z2) continue;
                    std::uint64_t c1 = oracle::enc(p, 2, 3, m1, z1);
                    std::uint64_t c2 = oracle::enc(p, 2, 3, m2, z2);
                    int consistent = 0;
                    for (std::uint64_t x = 0; x < p; ++x)
                        for (std::uint64_t y = 0; y < p; ++y)
                            if (oracle::enc(p, x, y, m1, z1) == c1 && oracle::enc(p, x, y, m2, z2) == c2)
                                ++consistent;
                    CHECK(consistent == 1);
                }
}

TEST_CASE("nonce is exposed as the residue at a large prime") {
    PrimeModulus big = PrimeModulus::create((U256(1) << 61) - 1);
    RandomSource rng = RandomSource::seeded(17);
    TwoPadKey key = twopad::gen(big, rng);
    for (int i = 0; i < 200; ++i) {
        U256 m = sample_uniform(big.p(), false, rng).value;
        U256 z = sample_uniform(big.p(), true, rng).value;
        U256 c = twopad::encrypt_with_nonce(key, big, m, z);
        CHECK(c % big.p() == z);
        CHECK(twopad::decrypt(key, big, c) == m);
    }
}
