#pragma once

// Exact verification of the scheme's secrecy properties at small parameters.
// Everything here counts — keys, nonces, whole transcripts — and compares
// conditional distributions as exact rationals. No sampling, no floats: a
// perfect-secrecy claim is an exact equality, so the check is too.
//
// Each verifier also runs against deliberately weakened scheme variants in
// the test suite; a verifier that cannot fail verifies nothing.
//
// Why uniform enumeration suffices: each definition quantifies over every
// prior on the hidden variables, but the conditional probabilities factor
// through per-assignment counts of the hidden randomness (keys, nonces,
// pad keys, the selection index). Equality of those counts cell by cell is
// therefore equivalent to the definitional statement for all priors, and
// counts under uniform enumeration are exactly those cells.
//
// The bounds are hard-coded because the spaces grow fast. Measured sizes:
//   shannon   n <= 10^4          |K|*n encryptions, 10^8 at the bound
//   alice     p in {5,7}         p^2 keys * (p-1)^2 nonce pairs * p^2
//                                message pairs: 86,436 cells at p=7
//   blind     p in {5,7}         p^2 * p * (p-1): 2,058 cells at p=7
//   encryptor p = 5, L <= 4      p^L messages * p^2 keys * (p-1)P_L nonce
//                                orders = 375,000 views, each with L*p^2
//                                transcripts: 37.5M counted cells at L=4

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blindpad/num.hpp"

namespace blindpad::verify {

// Exact nonnegative rational, normalized.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational of(std::uint64_t numerator, std::uint64_t denominator);
    Rational plus(const Rational& other) const;
    bool operator==(const Rational& other) const noexcept { return num == other.num && den == other.den; }
    std::string str() const;
};

// One exact conditional distribution: outcome value -> probability.
struct DistributionTable {
    std::string conditioning;
    std::map<std::uint64_t, Rational> probabilities;

    bool sums_to_one() const;
};

// A concrete violated equality, with the conditioning assignment kept in
// machine-readable form so the inequality can be re-counted independently.
struct Counterexample {
    std::string conditioning;
    std::string outcome;
    Rational lhs;
    Rational rhs;
    std::map<std::string, std::uint64_t> assignment;
};

struct VerificationReport {
    std::string definition; // shannon | alice | blind | encryptor
    std::uint64_t modulus;  // n for shannon, p otherwise
    std::optional<std::size_t> batch_size;
    bool pass = false;
    std::string detail; // which check failed, or a summary of what was counted
    std::vector<DistributionTable> tables;
    std::optional<Counterexample> counterexample;
};

std::string report_text(const VerificationReport& report);
std::string report_json(const VerificationReport& report);

// An outer scheme given by exhaustive description: every key, and the
// encryption map. Plaintext and ciphertext space are both Z_n.
struct EnumeratedOuterScheme {
    std::uint64_t n = 0;
    std::vector<std::uint64_t> keys;
    std::function<std::uint64_t(std::uint64_t key, std::uint64_t message)> encrypt;
};

// An inner cipher given by exhaustive description: key list, allowed nonces,
// and the deterministic encryption/decryption maps on Z_{p²}.
struct EnumeratedInnerCipher {
    std::uint64_t p = 0;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> keys;
    std::vector<std::uint64_t> nonces;
    std::function<std::uint64_t(std::uint64_t x, std::uint64_t y, std::uint64_t message, std::uint64_t nonce)>
        encrypt;
    std::function<std::uint64_t(std::uint64_t x, std::uint64_t y, std::uint64_t ciphertext)> decrypt;
};

// The shipped schemes, wrapped for enumeration (the closures call the real
// implementations, so the verifier checks the code that ships).
EnumeratedOuterScheme shipped_outer_pad(std::uint64_t n);
EnumeratedInnerCipher shipped_inner_cipher(const PrimeModulus& p);

// Weakened variants the test suite must catch.
EnumeratedOuterScheme broken_even_key_pad(std::uint64_t n);            // keys restricted to even residues
EnumeratedInnerCipher weakened_zero_y(const PrimeModulus& p);          // y_k forced to 0
EnumeratedInnerCipher restricted_nonce(const PrimeModulus& p);         // z drawn from {1,2} only

// Ordinary (Shannon) perfect secrecy of an outer scheme on Z_n, via the
// equivalent two-message form: for all m1, m2, c the number of keys taking
// m1 to c equals the number taking m2 to c. n is bounded by 10^4.
VerificationReport verify_ordinary_secrecy(std::uint64_t n);
VerificationReport verify_ordinary_secrecy(const EnumeratedOuterScheme& scheme);

// Leak-freeness against Alice: for every (m1, m2, m) and every ciphertext
// pair with distinct residues mod p, the count of (key, nonce-pair) tuples
// producing (c1, c2) from (m1, m2) equals the count from (m1, m); for the
// shipped cipher every reachable pair comes from exactly one key, so each
// conditional probability over the key space is exactly 1/p². p ∈ {5, 7}.
VerificationReport verify_leakfree_alice(const PrimeModulus& p);
VerificationReport verify_leakfree_alice(const EnumeratedInnerCipher& cipher);

// Blindness against the decryptor: over all (key, m, z), the conditional
// distribution of M given the decryptor's view (key, c', m') equals the
// prior, and C' is exactly uniform on Z_p∖{0} independent of (key, m).
// p ∈ {5, 7}.
VerificationReport verify_blindness_decryptor(const PrimeModulus& p);
VerificationReport verify_blindness_decryptor(const EnumeratedInnerCipher& cipher);

// Leak-freeness against the encryptor: full transcript enumeration over the
// selection i and the pad keys k_C, k_P, for every encryptor view (messages,
// batch, inner key). The conditional distribution of M given (view, w, w')
// must equal the distribution of M given the messages alone. p = 5, L <= 4.
// with_outer_layer=false removes the pads (w = c' in the clear), the variant
// that must fail.
VerificationReport verify_leakfree_encryptor(const PrimeModulus& p, std::size_t batch_size);
VerificationReport verify_leakfree_encryptor(const EnumeratedInnerCipher& cipher, std::size_t batch_size,
                                             bool with_outer_layer);

// Recomputes just the counterexample's conditioning assignment and confirms
// the recorded inequality still holds. Every failing report must re-verify.
// The per-definition forms take the scheme the report was produced against;
// the report-only form assumes the shipped scheme.
bool recheck_shannon(const Counterexample& cex, const EnumeratedOuterScheme& scheme);
bool recheck_alice(const Counterexample& cex, const EnumeratedInnerCipher& cipher);
bool recheck_blind(const Counterexample& cex, const EnumeratedInnerCipher& cipher);
bool recheck_encryptor(const Counterexample& cex, const EnumeratedInnerCipher& cipher, std::size_t batch_size,
                       bool with_outer_layer);
bool recheck_counterexample(const VerificationReport& report);

} // namespace blindpad::verify
