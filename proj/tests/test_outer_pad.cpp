#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "blindpad/outer_pad.hpp"

using namespace blindpad;
using otp::OuterKey;

TEST_CASE("key generation is bound to its modulus") {
    RandomSource a = RandomSource::seeded(1);
    RandomSource b = RandomSource::seeded(1);
    OuterKey ka = otp::otp_gen(25, a);
    OuterKey kb = otp::otp_gen(25, b);
    CHECK(ka == kb);
    CHECK(ka.key < 25);
    CHECK(ka.modulus == 25);
    CHECK_THROWS_AS(otp::otp_gen(1, a), Error);

    RandomSource rng = RandomSource::seeded(2);
    std::set<U256> seen;
    for (int i = 0; i < 200; ++i) seen.insert(otp::otp_gen(5, rng).key);
    CHECK(seen == std::set<U256>{0, 1, 2, 3, 4});
}

TEST_CASE("pad examples") {
    CHECK(otp::otp_encrypt(OuterKey{0, 25}, Residue{21, 25}).value == 21);
    CHECK(otp::otp_encrypt(OuterKey{3, 5}, Residue{4, 5}).value == 2);
    CHECK(otp::otp_decrypt(OuterKey{0, 25}, Residue{21, 25}).value == 21);
    CHECK(otp::otp_decrypt(OuterKey{3, 5}, Residue{2, 5}).value == 4);
}

TEST_CASE("modulus binding is enforced") {
    CHECK_THROWS_AS(otp::otp_encrypt(OuterKey{3, 5}, Residue{4, 25}), Error);
    CHECK_THROWS_AS(otp::otp_decrypt(OuterKey{3, 25}, Residue{4, 5}), Error);
    CHECK_THROWS_AS(otp::otp_encrypt(OuterKey{3, 5}, Residue{7, 5}), Error);
}

TEST_CASE("round-trip is exhaustive for n in {5, 25}") {
    for (std::uint64_t n : {5ull, 25ull})
        for (U256 k = 0; k < n; ++k) {
            OuterKey key{k, n};
            for (U256 m = 0; m < n; ++m) {
                Residue c = otp::otp_encrypt(key, Residue{m, n});
                CHECK(c.value < n);
                CHECK(otp::otp_decrypt(key, c).value == m);
            }
        }
}

TEST_CASE("for fixed m the key-to-ciphertext map is a bijection") {
    for (std::uint64_t n : {5ull, 25ull})
        for (U256 m = 0; m < n; ++m) {
            std::set<U256> images;
            for (U256 k = 0; k < n; ++k)
                images.insert(otp::otp_encrypt(OuterKey{k, n}, Residue{m, n}).value);
            CHECK(images.size() == n);
        }
}
