#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "blindpad/verify.hpp"

using namespace blindpad;
using verify::Rational;

namespace {
const PrimeModulus kP5 = PrimeModulus::create(5);
const PrimeModulus kP7 = PrimeModulus::create(7);
} // namespace

TEST_CASE("rationals normalize and compare exactly") {
    CHECK(Rational::of(2, 4) == Rational::of(1, 2));
    CHECK(Rational::of(0, 7) == Rational::of(0, 3));
    CHECK(Rational::of(1, 3).plus(Rational::of(1, 6)) == Rational::of(1, 2));
    CHECK_THROWS_AS(Rational::of(1, 0), Error);
    CHECK(Rational::of(1, 25).str() == "1/25");
}

TEST_CASE("ordinary secrecy holds for the pad at n = 5 and 25") {
    for (std::uint64_t n : {5ull, 25ull}) {
        verify::VerificationReport report = verify::verify_ordinary_secrecy(n);
        CHECK(report.pass);
        CHECK(report.definition == "shannon");
        CHECK(report.modulus == n);
        REQUIRE(!report.tables.empty());
        CHECK(report.tables[0].sums_to_one());
        // Each ciphertext reachable from exactly one key per message.
        for (const auto& [outcome, prob] : report.tables[0].probabilities)
            CHECK(prob == Rational::of(1, n));
    }
}

TEST_CASE("ordinary secrecy fails for an even-key pad on Z_6") {
    verify::EnumeratedOuterScheme broken = verify::broken_even_key_pad(6);
    verify::VerificationReport report = verify::verify_ordinary_secrecy(broken);
    CHECK_FALSE(report.pass);
    REQUIRE(report.counterexample.has_value());
    CHECK(!(report.counterexample->lhs == report.counterexample->rhs));
    CHECK(verify::recheck_shannon(*report.counterexample, broken));
}

TEST_CASE("ordinary secrecy bounds") {
    CHECK_THROWS_AS(verify::verify_ordinary_secrecy(10001), Error);
    CHECK_THROWS_AS(verify::verify_ordinary_secrecy(1), Error);
    CHECK(verify::verify_ordinary_secrecy(10000).pass);
}

TEST_CASE("leak-freeness against Alice holds at p in {5, 7}") {
    for (const PrimeModulus* p : {&kP5, &kP7}) {
        verify::VerificationReport report = verify::verify_leakfree_alice(*p);
        CHECK(report.pass);
        REQUIRE(!report.tables.empty());
        CHECK(report.tables[0].sums_to_one());
        // Every reachable residue-distinct pair has exactly one consistent key.
        REQUIRE(report.tables[0].probabilities.count(1) == 1);
        CHECK(report.tables[0].probabilities.at(1) == Rational::of(1, 1));
    }
}

TEST_CASE("leak-freeness against Alice fails when y_k is forced to zero") {
    verify::EnumeratedInnerCipher broken = verify::weakened_zero_y(kP5);
    verify::VerificationReport report = verify::verify_leakfree_alice(broken);
    CHECK_FALSE(report.pass);
    REQUIRE(report.counterexample.has_value());
    CHECK(verify::recheck_alice(*report.counterexample, broken));
}

TEST_CASE("alice verifier rejects out-of-bounds primes") {
    CHECK_THROWS_AS(verify::verify_leakfree_alice(PrimeModulus::create(11)), Error);
}

TEST_CASE("blindness against the decryptor holds at p in {5, 7}") {
    for (const PrimeModulus* p : {&kP5, &kP7}) {
        verify::VerificationReport report = verify::verify_blindness_decryptor(*p);
        CHECK(report.pass);
        REQUIRE(!report.tables.empty());
        CHECK(report.tables[0].sums_to_one());
        std::uint64_t pv = static_cast<std::uint64_t>(p->p());
        for (const auto& [outcome, prob] : report.tables[0].probabilities)
            CHECK(prob == Rational::of(1, pv - 1)); // C' uniform on Z_p \ {0}
    }
}

TEST_CASE("blindness fails when the nonce is restricted to {1,2}") {
    verify::EnumeratedInnerCipher broken = verify::restricted_nonce(kP5);
    verify::VerificationReport report = verify::verify_blindness_decryptor(broken);
    CHECK_FALSE(report.pass);
    REQUIRE(report.counterexample.has_value());
    CHECK(verify::recheck_blind(*report.counterexample, broken));
    // The violation is the uniformity of C' on Z_p \ {0}.
    CHECK(report.counterexample->outcome.rfind("C'", 0) == 0);
    CHECK(!(report.counterexample->lhs == report.counterexample->rhs));
}

TEST_CASE("leak-freeness against the encryptor holds at p=5, L in {1, 2}") {
    for (std::size_t batch : {std::size_t(1), std::size_t(2)}) {
        verify::VerificationReport report = verify::verify_leakfree_encryptor(kP5, batch);
        CHECK(report.pass);
        CHECK(report.batch_size == batch);
        REQUIRE(!report.tables.empty());
        CHECK(report.tables[0].sums_to_one());
    }
}

TEST_CASE("encryptor leak-freeness fails without the outer layer") {
    verify::EnumeratedInnerCipher cipher = verify::shipped_inner_cipher(kP5);
    verify::VerificationReport report = verify::verify_leakfree_encryptor(cipher, 2, false);
    CHECK_FALSE(report.pass);
    REQUIRE(report.counterexample.has_value());
    CHECK(verify::recheck_encryptor(*report.counterexample, cipher, 2, false));
}

TEST_CASE("encryptor verifier bounds") {
    CHECK_THROWS_AS(verify::verify_leakfree_encryptor(kP7, 2), Error);
    CHECK_THROWS_AS(verify::verify_leakfree_encryptor(kP5, 5), Error);
    CHECK_THROWS_AS(verify::verify_leakfree_encryptor(kP5, 0), Error);
}

TEST_CASE("failing reports re-verify through the shipped-scheme recheck") {
    verify::VerificationReport report = verify::verify_leakfree_alice(kP5);
    CHECK(report.pass);
    CHECK_FALSE(verify::recheck_counterexample(report)); // nothing to recheck

    verify::VerificationReport broken = verify::verify_ordinary_secrecy(verify::broken_even_key_pad(8));
    REQUIRE(broken.counterexample.has_value());
    // The shipped-scheme recheck must NOT confirm a counterexample produced
    // by a different (broken) scheme: the honest pad shows equal counts there.
    CHECK_FALSE(verify::recheck_counterexample(broken));
    CHECK(verify::recheck_shannon(*broken.counterexample, verify::broken_even_key_pad(8)));
}

TEST_CASE("reports render as text and json") {
    verify::VerificationReport report = verify::verify_blindness_decryptor(kP5);
    std::string text = verify::report_text(report);
    CHECK(text.find("definition: blind") != std::string::npos);
    CHECK(text.find("PASS") != std::string::npos);

    std::string json = verify::report_json(report);
    CHECK(json.find("\"definition\": \"blind\"") != std::string::npos);
    CHECK(json.find("\"pass\": true") != std::string::npos);

    verify::VerificationReport failing = verify::verify_ordinary_secrecy(verify::broken_even_key_pad(6));
    std::string failing_json = verify::report_json(failing);
    CHECK(failing_json.find("\"counterexample\"") != std::string::npos);
    CHECK(failing_json.find("\"pass\": false") != std::string::npos);
}
