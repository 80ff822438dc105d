#include "blindpad/verify.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "blindpad/outer_pad.hpp"
#include "blindpad/twopad.hpp"

namespace blindpad::verify {

namespace {

std::uint64_t to_u64(const U256& v) { return static_cast<std::uint64_t>(v); }

// Exact equality of a/b and c/d without normalizing.
bool ratio_equal(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    return static_cast<unsigned __int128>(a) * d == static_cast<unsigned __int128>(c) * b;
}

} // namespace

Rational Rational::of(std::uint64_t numerator, std::uint64_t denominator) {
    if (denominator == 0) raise(errc::invalid_input, "Rational: zero denominator");
    std::uint64_t g = std::gcd(numerator, denominator);
    if (g == 0) return Rational{0, 1};
    return Rational{numerator / g, denominator / g};
}

Rational Rational::plus(const Rational& other) const {
    unsigned __int128 n = static_cast<unsigned __int128>(num) * other.den +
                          static_cast<unsigned __int128>(other.num) * den;
    unsigned __int128 d = static_cast<unsigned __int128>(den) * other.den;
    if (n > ~static_cast<std::uint64_t>(0) || d > ~static_cast<std::uint64_t>(0))
        raise(errc::invalid_input, "Rational: sum exceeds 64 bits before reduction");
    return Rational::of(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d));
}

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

bool DistributionTable::sums_to_one() const {
    Rational total{0, 1};
    for (const auto& [outcome, prob] : probabilities) total = total.plus(prob);
    return total == Rational{1, 1};
}

EnumeratedOuterScheme shipped_outer_pad(std::uint64_t n) {
    EnumeratedOuterScheme scheme;
    scheme.n = n;
    scheme.keys.resize(n);
    std::iota(scheme.keys.begin(), scheme.keys.end(), 0);
    scheme.encrypt = [n](std::uint64_t key, std::uint64_t message) {
        otp::OuterKey k{U256(key), U256(n)};
        return to_u64(otp::otp_encrypt(k, Residue{U256(message), U256(n)}).value);
    };
    return scheme;
}

EnumeratedOuterScheme broken_even_key_pad(std::uint64_t n) {
    EnumeratedOuterScheme scheme = shipped_outer_pad(n);
    scheme.keys.clear();
    for (std::uint64_t k = 0; k < n; k += 2) scheme.keys.push_back(k);
    return scheme;
}

EnumeratedInnerCipher shipped_inner_cipher(const PrimeModulus& p) {
    if (p.p() > 0xffffffffull) raise(errc::bound_exceeded, "enumeration requires p to fit 32 bits");
    EnumeratedInnerCipher cipher;
    cipher.p = to_u64(p.p());
    for (const twopad::TwoPadKey& key : twopad::all_keys(p))
        cipher.keys.emplace_back(to_u64(key.x), to_u64(key.y));
    for (std::uint64_t z = 1; z < cipher.p; ++z) cipher.nonces.push_back(z);
    cipher.encrypt = [p](std::uint64_t x, std::uint64_t y, std::uint64_t message, std::uint64_t nonce) {
        return to_u64(twopad::encrypt_with_nonce(twopad::TwoPadKey{x, y}, p, message, nonce));
    };
    cipher.decrypt = [p](std::uint64_t x, std::uint64_t y, std::uint64_t ciphertext) {
        return to_u64(twopad::decrypt(twopad::TwoPadKey{x, y}, p, ciphertext));
    };
    return cipher;
}

EnumeratedInnerCipher weakened_zero_y(const PrimeModulus& p) {
    EnumeratedInnerCipher cipher = shipped_inner_cipher(p);
    cipher.keys.clear();
    for (std::uint64_t x = 0; x < cipher.p; ++x) cipher.keys.emplace_back(x, 0);
    return cipher;
}

EnumeratedInnerCipher restricted_nonce(const PrimeModulus& p) {
    EnumeratedInnerCipher cipher = shipped_inner_cipher(p);
    cipher.nonces = {1, 2};
    return cipher;
}

// ---------------------------------------------------------------------------
// Ordinary (Shannon) perfect secrecy.

VerificationReport verify_ordinary_secrecy(std::uint64_t n) {
    if (n < 2) raise(errc::invalid_modulus, "verify_ordinary_secrecy: modulus must be at least 2");
    return verify_ordinary_secrecy(shipped_outer_pad(n));
}

VerificationReport verify_ordinary_secrecy(const EnumeratedOuterScheme& scheme) {
    const std::uint64_t n = scheme.n;
    if (n < 2) raise(errc::invalid_modulus, "verify_ordinary_secrecy: modulus must be at least 2");
    if (n > 10000) raise(errc::bound_exceeded, "verify_ordinary_secrecy: enumeration bound is n <= 10^4");
    if (scheme.keys.empty()) raise(errc::invalid_input, "verify_ordinary_secrecy: empty key space");

    VerificationReport report;
    report.definition = "shannon";
    report.modulus = n;

    auto histogram = [&](std::uint64_t message) {
        std::vector<std::uint64_t> hist(n, 0);
        for (std::uint64_t key : scheme.keys) {
            std::uint64_t c = scheme.encrypt(key, message);
            if (c >= n) raise(errc::invalid_input, "verify_ordinary_secrecy: ciphertext outside Z_n");
            ++hist[c];
        }
        return hist;
    };

    std::vector<std::uint64_t> reference = histogram(0);
    for (std::uint64_t m = 1; m < n; ++m) {
        std::vector<std::uint64_t> hist = histogram(m);
        for (std::uint64_t c = 0; c < n; ++c) {
            if (hist[c] == reference[c]) continue;
            Counterexample cex;
            cex.assignment = {{"m1", 0}, {"m2", m}, {"c", c}};
            cex.conditioning = "M = 0 versus M = " + std::to_string(m);
            cex.outcome = "ciphertext " + std::to_string(c);
            cex.lhs = Rational::of(reference[c], scheme.keys.size());
            cex.rhs = Rational::of(hist[c], scheme.keys.size());
            report.pass = false;
            report.detail = "Pr[c | m1] != Pr[c | m2] for some (m1, m2, c)";
            report.counterexample = cex;
            return report;
        }
    }

    report.pass = true;
    report.detail = "ciphertext histogram over all " + std::to_string(scheme.keys.size()) +
                    " keys is identical for every message";
    if (n <= 64) {
        DistributionTable table;
        table.conditioning = "ciphertext distribution given M = 0";
        for (std::uint64_t c = 0; c < n; ++c)
            table.probabilities[c] = Rational::of(reference[c], scheme.keys.size());
        report.tables.push_back(std::move(table));
    }
    return report;
}

// ---------------------------------------------------------------------------
// Leak-freeness against Alice.

namespace {

struct AliceCounts {
    std::uint64_t p = 0;
    std::uint64_t p2 = 0;
    // counts[(m1*p + m2)*p2*p2 + c1*p2 + c2]
    std::vector<std::uint32_t> cells;
    // totals[m1*p + m2]: enumerated mass inside the conditioning event
    std::vector<std::uint64_t> totals;

    std::uint32_t at(std::uint64_t m1, std::uint64_t m2, std::uint64_t c1, std::uint64_t c2) const {
        return cells[((m1 * p + m2) * p2 + c1) * p2 + c2];
    }
};

AliceCounts count_pairs(const EnumeratedInnerCipher& cipher) {
    AliceCounts counts;
    counts.p = cipher.p;
    counts.p2 = cipher.p * cipher.p;
    counts.cells.assign(counts.p * counts.p * counts.p2 * counts.p2, 0);
    counts.totals.assign(counts.p * counts.p, 0);

    for (const auto& [x, y] : cipher.keys) {
        for (std::uint64_t z1 : cipher.nonces) {
            for (std::uint64_t z2 : cipher.nonces) {
                for (std::uint64_t m1 = 0; m1 < counts.p; ++m1) {
                    std::uint64_t c1 = cipher.encrypt(x, y, m1, z1);
                    for (std::uint64_t m2 = 0; m2 < counts.p; ++m2) {
                        std::uint64_t c2 = cipher.encrypt(x, y, m2, z2);
                        if (c1 % counts.p == c2 % counts.p) continue; // outside the conditioning event
                        counts.cells[((m1 * counts.p + m2) * counts.p2 + c1) * counts.p2 + c2] += 1;
                        counts.totals[m1 * counts.p + m2] += 1;
                    }
                }
            }
        }
    }
    return counts;
}

} // namespace

VerificationReport verify_leakfree_alice(const PrimeModulus& p) {
    return verify_leakfree_alice(shipped_inner_cipher(p));
}

VerificationReport verify_leakfree_alice(const EnumeratedInnerCipher& cipher) {
    if (cipher.p != 5 && cipher.p != 7)
        raise(errc::bound_exceeded, "verify_leakfree_alice: enumeration bound is p in {5, 7}");

    VerificationReport report;
    report.definition = "alice";
    report.modulus = cipher.p;

    const std::uint64_t p = cipher.p;
    const std::uint64_t p2 = p * p;
    AliceCounts counts = count_pairs(cipher);

    // Definitional check: swapping m2 for m cannot change the pair probability.
    for (std::uint64_t m1 = 0; m1 < p; ++m1) {
        for (std::uint64_t m2 = 0; m2 < p; ++m2) {
            for (std::uint64_t m = 0; m < p; ++m) {
                if (m == m2) continue;
                std::uint64_t total_a = counts.totals[m1 * p + m2];
                std::uint64_t total_b = counts.totals[m1 * p + m];
                for (std::uint64_t c1 = 0; c1 < p2; ++c1) {
                    for (std::uint64_t c2 = 0; c2 < p2; ++c2) {
                        if (c1 % p == c2 % p) continue;
                        std::uint64_t lhs = counts.at(m1, m2, c1, c2);
                        std::uint64_t rhs = counts.at(m1, m, c1, c2);
                        if (ratio_equal(lhs, total_a, rhs, total_b)) continue;
                        Counterexample cex;
                        cex.assignment = {{"m1", m1}, {"m2", m2}, {"m", m}, {"c1", c1}, {"c2", c2}};
                        cex.conditioning = "(M1, M2) = (" + std::to_string(m1) + ", " + std::to_string(m2) +
                                           ") versus (" + std::to_string(m1) + ", " + std::to_string(m) + ")";
                        cex.outcome = "ciphertext pair (" + std::to_string(c1) + ", " + std::to_string(c2) + ")";
                        cex.lhs = Rational::of(lhs, total_a);
                        cex.rhs = Rational::of(rhs, total_b);
                        report.pass = false;
                        report.detail = "pair probability depends on the second plaintext";
                        report.counterexample = cex;
                        return report;
                    }
                }
            }
        }
    }

    // Absolute check from key uniqueness: every residue-distinct
    // pair of honest ciphertexts is consistent with exactly one key, so the
    // probability over the key space is exactly 1/p².
    for (std::uint64_t m1 = 0; m1 < p; ++m1) {
        for (std::uint64_t m2 = 0; m2 < p; ++m2) {
            for (std::uint64_t z1 : cipher.nonces) {
                for (std::uint64_t z2 : cipher.nonces) {
                    if (z1 == z2) continue;
                    for (std::uint64_t q1 = 0; q1 < p; ++q1) {
                        for (std::uint64_t q2 = 0; q2 < p; ++q2) {
                            std::uint64_t c1 = q1 * p + z1;
                            std::uint64_t c2 = q2 * p + z2;
                            std::uint64_t keys_consistent = counts.at(m1, m2, c1, c2);
                            if (keys_consistent == 1 && cipher.keys.size() == p2) continue;
                            Counterexample cex;
                            cex.assignment = {{"m1", m1}, {"m2", m2}, {"c1", c1}, {"c2", c2}};
                            cex.conditioning = "(M1, M2) = (" + std::to_string(m1) + ", " + std::to_string(m2) +
                                               "), pair (" + std::to_string(c1) + ", " + std::to_string(c2) + ")";
                            cex.outcome = "consistent keys";
                            cex.lhs = Rational::of(keys_consistent, cipher.keys.size());
                            cex.rhs = Rational::of(1, p2);
                            report.pass = false;
                            report.detail = "a residue-distinct pair is not consistent with exactly one key";
                            report.counterexample = cex;
                            return report;
                        }
                    }
                }
            }
        }
    }

    report.pass = true;
    report.detail = "every residue-distinct ciphertext pair is consistent with exactly one of the " +
                    std::to_string(p2) + " keys (conditional probability 1/" + std::to_string(p2) + ")";
    DistributionTable table;
    table.conditioning = "number of keys consistent with a residue-distinct pair, (m1, m2) = (0, 0)";
    std::uint64_t pair_count = 0;
    std::map<std::uint64_t, std::uint64_t> count_of_counts;
    for (std::uint64_t z1 : cipher.nonces)
        for (std::uint64_t z2 : cipher.nonces) {
            if (z1 == z2) continue;
            for (std::uint64_t q1 = 0; q1 < p; ++q1)
                for (std::uint64_t q2 = 0; q2 < p; ++q2) {
                    ++count_of_counts[counts.at(0, 0, q1 * p + z1, q2 * p + z2)];
                    ++pair_count;
                }
        }
    for (const auto& [value, occurrences] : count_of_counts)
        table.probabilities[value] = Rational::of(occurrences, pair_count);
    report.tables.push_back(std::move(table));
    return report;
}

// ---------------------------------------------------------------------------
// Blindness against the decryptor.

VerificationReport verify_blindness_decryptor(const PrimeModulus& p) {
    return verify_blindness_decryptor(shipped_inner_cipher(p));
}

VerificationReport verify_blindness_decryptor(const EnumeratedInnerCipher& cipher) {
    if (cipher.p != 5 && cipher.p != 7)
        raise(errc::bound_exceeded, "verify_blindness_decryptor: enumeration bound is p in {5, 7}");

    VerificationReport report;
    report.definition = "blind";
    report.modulus = cipher.p;

    const std::uint64_t p = cipher.p;
    // counts[key][c'][m] over uniform (m, z)
    std::vector<std::uint32_t> counts(cipher.keys.size() * p * p, 0);
    for (std::size_t k = 0; k < cipher.keys.size(); ++k) {
        const auto& [x, y] = cipher.keys[k];
        for (std::uint64_t m = 0; m < p; ++m)
            for (std::uint64_t z : cipher.nonces) {
                std::uint64_t c_prime = cipher.encrypt(x, y, m, z) % p;
                counts[(k * p + c_prime) * p + m] += 1;
            }
    }

    // Definitional check (uniform prior): M given the decryptor's whole view
    // (key, c', and the m' the view determines) matches the prior.
    for (std::size_t k = 0; k < cipher.keys.size(); ++k) {
        const auto& [x, y] = cipher.keys[k];
        for (std::uint64_t c_prime = 0; c_prime < p; ++c_prime) {
            std::uint64_t total = 0;
            for (std::uint64_t m = 0; m < p; ++m) total += counts[(k * p + c_prime) * p + m];
            if (total == 0) continue; // view never occurs; nothing to condition on
            for (std::uint64_t m = 0; m < p; ++m) {
                std::uint64_t hits = counts[(k * p + c_prime) * p + m];
                if (ratio_equal(hits, total, 1, p)) continue;
                Counterexample cex;
                cex.assignment = {{"x", x}, {"y", y}, {"c_prime", c_prime}, {"m", m}};
                cex.conditioning = "key (" + std::to_string(x) + ", " + std::to_string(y) + "), c' = " +
                                   std::to_string(c_prime);
                cex.outcome = "M = " + std::to_string(m);
                cex.lhs = Rational::of(hits, total);
                cex.rhs = Rational::of(1, p);
                report.pass = false;
                report.detail = "the decryptor's view shifts the distribution of M";
                report.counterexample = cex;
                return report;
            }
        }
    }

    // The proof's step: C' is exactly uniform on Z_p∖{0} for every (key, m).
    for (std::size_t k = 0; k < cipher.keys.size(); ++k) {
        const auto& [x, y] = cipher.keys[k];
        for (std::uint64_t m = 0; m < p; ++m) {
            for (std::uint64_t c_prime = 0; c_prime < p; ++c_prime) {
                std::uint64_t hits = counts[(k * p + c_prime) * p + m];
                bool ok = c_prime == 0 ? hits == 0
                                       : ratio_equal(hits, cipher.nonces.size(), 1, p - 1);
                if (ok) continue;
                Counterexample cex;
                cex.assignment = {{"x", x}, {"y", y}, {"m", m}, {"c_prime", c_prime}};
                cex.conditioning = "key (" + std::to_string(x) + ", " + std::to_string(y) + "), M = " +
                                   std::to_string(m);
                cex.outcome = "C' = " + std::to_string(c_prime);
                cex.lhs = Rational::of(hits, cipher.nonces.size());
                cex.rhs = c_prime == 0 ? Rational{0, 1} : Rational::of(1, p - 1);
                report.pass = false;
                report.detail = "C' is not uniform on Z_p\\{0}";
                report.counterexample = cex;
                return report;
            }
        }
    }

    report.pass = true;
    report.detail = "M given (key, c', m') matches the prior and C' is uniform on Z_p\\{0} for every (key, m)";
    DistributionTable table;
    const auto& [x0, y0] = cipher.keys.front();
    table.conditioning = "C' given key (" + std::to_string(x0) + ", " + std::to_string(y0) + "), M = 0";
    for (std::uint64_t c_prime = 1; c_prime < p; ++c_prime)
        table.probabilities[c_prime] = Rational::of(counts[(0 * p + c_prime) * p + 0], cipher.nonces.size());
    report.tables.push_back(std::move(table));
    return report;
}

// ---------------------------------------------------------------------------
// Leak-freeness against the encryptor.

VerificationReport verify_leakfree_encryptor(const PrimeModulus& p, std::size_t batch_size) {
    return verify_leakfree_encryptor(shipped_inner_cipher(p), batch_size, true);
}

VerificationReport verify_leakfree_encryptor(const EnumeratedInnerCipher& cipher, std::size_t batch_size,
                                             bool with_outer_layer) {
    if (cipher.p != 5) raise(errc::bound_exceeded, "verify_leakfree_encryptor: enumeration bound is p = 5");
    if (batch_size < 1 || batch_size > 4)
        raise(errc::bound_exceeded, "verify_leakfree_encryptor: enumeration bound is L <= 4");
    if (!cipher.decrypt) raise(errc::invalid_input, "verify_leakfree_encryptor: cipher lacks a decrypt map");

    VerificationReport report;
    report.definition = "encryptor";
    report.modulus = cipher.p;
    report.batch_size = batch_size;

    const std::uint64_t p = cipher.p;
    const std::size_t L = batch_size;

    // Ordered assignments of distinct nonces, z_1..z_L.
    std::vector<std::vector<std::uint64_t>> nonce_tuples;
    {
        std::vector<std::uint64_t> tuple;
        auto extend = [&](auto&& self) -> void {
            if (tuple.size() == L) {
                nonce_tuples.push_back(tuple);
                return;
            }
            for (std::uint64_t z : cipher.nonces) {
                if (std::find(tuple.begin(), tuple.end(), z) != tuple.end()) continue;
                tuple.push_back(z);
                self(self);
                tuple.pop_back();
            }
        };
        extend(extend);
    }
    if (nonce_tuples.empty())
        raise(errc::invalid_input, "verify_leakfree_encryptor: not enough nonces for the batch size");

    std::vector<std::uint64_t> messages(L, 0);
    std::vector<std::uint64_t> ciphertexts(L, 0);
    std::vector<std::uint64_t> replies(L, 0);
    std::vector<std::uint32_t> counts(p * p * p, 0);
    std::vector<std::uint32_t> base(p, 0);

    const std::uint64_t message_assignments = [&] {
        std::uint64_t total = 1;
        for (std::size_t j = 0; j < L; ++j) total *= p;
        return total;
    }();

    // The maps are deterministic, so evaluate each cell once up front; the
    // enumeration below is then pure table lookups.
    const std::size_t key_count = cipher.keys.size();
    std::vector<std::uint64_t> enc_table(key_count * p * p, 0);
    std::vector<std::uint64_t> reply_table(key_count * p, 0);
    for (std::size_t k = 0; k < key_count; ++k) {
        const auto& [x, y] = cipher.keys[k];
        for (std::uint64_t m = 0; m < p; ++m)
            for (std::uint64_t z : cipher.nonces) enc_table[(k * p + m) * p + z] = cipher.encrypt(x, y, m, z);
        for (std::uint64_t c_prime = 1; c_prime < p; ++c_prime)
            reply_table[k * p + c_prime] = cipher.decrypt(x, y, c_prime);
    }

    std::uint64_t views_counted = 0;
    for (std::size_t k = 0; k < key_count; ++k) {
        const auto& [x, y] = cipher.keys[k];
        for (const auto& nonces : nonce_tuples) {
            for (std::uint64_t assignment = 0; assignment < message_assignments; ++assignment) {
                std::uint64_t digits = assignment;
                for (std::size_t j = 0; j < L; ++j) {
                    messages[j] = digits % p;
                    digits /= p;
                    ciphertexts[j] = enc_table[(k * p + messages[j]) * p + nonces[j]];
                    replies[j] = reply_table[k * p + ciphertexts[j] % p];
                }
                ++views_counted;

                std::fill(counts.begin(), counts.end(), 0);
                std::fill(base.begin(), base.end(), 0);
                for (std::size_t i = 0; i < L; ++i) {
                    ++base[messages[i]];
                    std::uint64_t c_prime = ciphertexts[i] % p;
                    for (std::uint64_t kc = 0; kc < p; ++kc)
                        for (std::uint64_t kp = 0; kp < p; ++kp) {
                            std::uint64_t w = with_outer_layer ? (c_prime + kc) % p : c_prime;
                            std::uint64_t w_prime = with_outer_layer ? (replies[i] + kp) % p : replies[i];
                            counts[(w * p + w_prime) * p + messages[i]] += 1;
                        }
                }

                for (std::uint64_t w = 0; w < p; ++w) {
                    for (std::uint64_t w_prime = 0; w_prime < p; ++w_prime) {
                        std::uint64_t total = 0;
                        for (std::uint64_t m = 0; m < p; ++m) total += counts[(w * p + w_prime) * p + m];
                        if (total == 0) continue; // transcript never occurs under this view
                        for (std::uint64_t m = 0; m < p; ++m) {
                            std::uint64_t hits = counts[(w * p + w_prime) * p + m];
                            if (ratio_equal(hits, total, base[m], L)) continue;
                            Counterexample cex;
                            cex.conditioning = "view with key (" + std::to_string(x) + ", " + std::to_string(y) +
                                               "), transcript (w, w') = (" + std::to_string(w) + ", " +
                                               std::to_string(w_prime) + ")";
                            cex.outcome = "M = " + std::to_string(m);
                            cex.lhs = Rational::of(hits, total);
                            cex.rhs = Rational::of(base[m], L);
                            cex.assignment = {{"x", x}, {"y", y}, {"w", w}, {"w_prime", w_prime}, {"m", m}};
                            for (std::size_t j = 0; j < L; ++j) {
                                cex.assignment["m_" + std::to_string(j + 1)] = messages[j];
                                cex.assignment["z_" + std::to_string(j + 1)] = nonces[j];
                            }
                            report.pass = false;
                            report.detail = "the transcript shifts the distribution of M relative to the batch alone";
                            report.counterexample = cex;
                            return report;
                        }
                    }
                }
            }
        }
    }

    report.pass = true;
    report.detail = "all " + std::to_string(views_counted) +
                    " encryptor views enumerated; (w, w') never shifts the distribution of M";
    DistributionTable table;
    table.conditioning = "M given any transcript, for the view with key (0, 0), messages 0.." +
                         std::to_string(L - 1);
    for (std::size_t j = 0; j < L; ++j) table.probabilities[j] = Rational::of(1, L);
    report.tables.push_back(std::move(table));
    return report;
}

// ---------------------------------------------------------------------------
// Counterexample rechecks: recount only the recorded conditioning assignment.

bool recheck_shannon(const Counterexample& cex, const EnumeratedOuterScheme& scheme) {
    std::uint64_t m1 = cex.assignment.at("m1");
    std::uint64_t m2 = cex.assignment.at("m2");
    std::uint64_t c = cex.assignment.at("c");
    std::uint64_t hits1 = 0, hits2 = 0;
    for (std::uint64_t key : scheme.keys) {
        if (scheme.encrypt(key, m1) == c) ++hits1;
        if (scheme.encrypt(key, m2) == c) ++hits2;
    }
    Rational lhs = Rational::of(hits1, scheme.keys.size());
    Rational rhs = Rational::of(hits2, scheme.keys.size());
    return lhs == cex.lhs && rhs == cex.rhs && !(lhs == rhs);
}

bool recheck_alice(const Counterexample& cex, const EnumeratedInnerCipher& cipher) {
    std::uint64_t m1 = cex.assignment.at("m1");
    std::uint64_t c1 = cex.assignment.at("c1");
    std::uint64_t c2 = cex.assignment.at("c2");
    const std::uint64_t p = cipher.p;

    auto pair_stats = [&](std::uint64_t first_m, std::uint64_t second_m) {
        std::uint64_t hits = 0, total = 0;
        for (const auto& [x, y] : cipher.keys)
            for (std::uint64_t z1 : cipher.nonces)
                for (std::uint64_t z2 : cipher.nonces) {
                    std::uint64_t e1 = cipher.encrypt(x, y, first_m, z1);
                    std::uint64_t e2 = cipher.encrypt(x, y, second_m, z2);
                    if (e1 % p == e2 % p) continue;
                    ++total;
                    if (e1 == c1 && e2 == c2) ++hits;
                }
        return std::pair{hits, total};
    };

    if (cex.assignment.count("m")) {
        std::uint64_t m2 = cex.assignment.at("m2");
        std::uint64_t m = cex.assignment.at("m");
        auto [hits_a, total_a] = pair_stats(m1, m2);
        auto [hits_b, total_b] = pair_stats(m1, m);
        Rational lhs = Rational::of(hits_a, total_a);
        Rational rhs = Rational::of(hits_b, total_b);
        return lhs == cex.lhs && rhs == cex.rhs && !(lhs == rhs);
    }

    // Absolute form: count keys consistent with the two pinned pairs.
    std::uint64_t m2 = cex.assignment.at("m2");
    std::uint64_t z1 = c1 % p, z2 = c2 % p;
    std::uint64_t consistent = 0;
    for (const auto& [x, y] : cipher.keys)
        if (cipher.encrypt(x, y, m1, z1) == c1 && cipher.encrypt(x, y, m2, z2) == c2) ++consistent;
    Rational lhs = Rational::of(consistent, cipher.keys.size());
    return lhs == cex.lhs && !(lhs == cex.rhs);
}

bool recheck_blind(const Counterexample& cex, const EnumeratedInnerCipher& cipher) {
    std::uint64_t x = cex.assignment.at("x");
    std::uint64_t y = cex.assignment.at("y");
    std::uint64_t c_prime = cex.assignment.at("c_prime");
    std::uint64_t m = cex.assignment.at("m");
    const std::uint64_t p = cipher.p;

    if (cex.outcome.rfind("C'", 0) == 0) {
        // Uniformity cell: distribution of C' for fixed (key, m).
        std::uint64_t hits = 0;
        for (std::uint64_t z : cipher.nonces)
            if (cipher.encrypt(x, y, m, z) % p == c_prime) ++hits;
        Rational lhs = Rational::of(hits, cipher.nonces.size());
        return lhs == cex.lhs && !(lhs == cex.rhs);
    }
    // Definitional cell: distribution of M for fixed (key, c').
    std::uint64_t hits = 0, total = 0;
    for (std::uint64_t mm = 0; mm < p; ++mm)
        for (std::uint64_t z : cipher.nonces)
            if (cipher.encrypt(x, y, mm, z) % p == c_prime) {
                ++total;
                if (mm == m) ++hits;
            }
    if (total == 0) return false;
    Rational lhs = Rational::of(hits, total);
    return lhs == cex.lhs && !(lhs == cex.rhs);
}

bool recheck_encryptor(const Counterexample& cex, const EnumeratedInnerCipher& cipher, std::size_t batch_size,
                       bool with_outer_layer) {
    const std::uint64_t p = cipher.p;
    std::uint64_t x = cex.assignment.at("x");
    std::uint64_t y = cex.assignment.at("y");
    std::uint64_t w = cex.assignment.at("w");
    std::uint64_t w_prime = cex.assignment.at("w_prime");
    std::uint64_t m = cex.assignment.at("m");

    std::vector<std::uint32_t> counts(p * p * p, 0);
    std::vector<std::uint32_t> base(p, 0);
    for (std::size_t i = 0; i < batch_size; ++i) {
        std::uint64_t mi = cex.assignment.at("m_" + std::to_string(i + 1));
        std::uint64_t zi = cex.assignment.at("z_" + std::to_string(i + 1));
        std::uint64_t ci = cipher.encrypt(x, y, mi, zi);
        std::uint64_t reply = cipher.decrypt(x, y, ci % p);
        ++base[mi];
        for (std::uint64_t kc = 0; kc < p; ++kc)
            for (std::uint64_t kp = 0; kp < p; ++kp) {
                std::uint64_t ww = with_outer_layer ? (ci % p + kc) % p : ci % p;
                std::uint64_t wwp = with_outer_layer ? (reply + kp) % p : reply;
                counts[(ww * p + wwp) * p + mi] += 1;
            }
    }
    std::uint64_t total = 0;
    for (std::uint64_t mm = 0; mm < p; ++mm) total += counts[(w * p + w_prime) * p + mm];
    if (total == 0) return false;
    Rational lhs = Rational::of(counts[(w * p + w_prime) * p + m], total);
    Rational rhs = Rational::of(base[m], batch_size);
    return lhs == cex.lhs && rhs == cex.rhs && !(lhs == rhs);
}

bool recheck_counterexample(const VerificationReport& report) {
    if (!report.counterexample) return false;
    const Counterexample& cex = *report.counterexample;
    if (report.definition == "shannon") return recheck_shannon(cex, shipped_outer_pad(report.modulus));
    PrimeModulus p = PrimeModulus::create(U256(report.modulus));
    if (report.definition == "alice") return recheck_alice(cex, shipped_inner_cipher(p));
    if (report.definition == "blind") return recheck_blind(cex, shipped_inner_cipher(p));
    if (report.definition == "encryptor")
        return recheck_encryptor(cex, shipped_inner_cipher(p), report.batch_size.value_or(2), true);
    return false;
}

// ---------------------------------------------------------------------------
// Rendering.

std::string report_text(const VerificationReport& report) {
    std::ostringstream out;
    out << "definition: " << report.definition << "\n";
    out << (report.definition == "shannon" ? "n: " : "p: ") << report.modulus << "\n";
    if (report.batch_size) out << "l: " << *report.batch_size << "\n";
    out << "result: " << (report.pass ? "PASS" : "FAIL") << "\n";
    out << "detail: " << report.detail << "\n";
    for (const DistributionTable& table : report.tables) {
        out << "table (" << table.conditioning << "):\n";
        for (const auto& [outcome, prob] : table.probabilities)
            out << "  " << outcome << " -> " << prob.str() << "\n";
    }
    if (report.counterexample) {
        const Counterexample& cex = *report.counterexample;
        out << "counterexample:\n";
        out << "  conditioning: " << cex.conditioning << "\n";
        out << "  outcome: " << cex.outcome << "\n";
        out << "  probabilities: " << cex.lhs.str() << " != " << cex.rhs.str() << "\n";
        out << "  assignment:";
        for (const auto& [name, value] : cex.assignment) out << " " << name << "=" << value;
        out << "\n";
    }
    return out.str();
}

std::string report_json(const VerificationReport& report) {
    nlohmann::json doc;
    doc["definition"] = report.definition;
    doc["parameters"][report.definition == "shannon" ? "n" : "p"] = report.modulus;
    if (report.batch_size) doc["parameters"]["l"] = *report.batch_size;
    doc["pass"] = report.pass;
    doc["detail"] = report.detail;
    doc["tables"] = nlohmann::json::array();
    for (const DistributionTable& table : report.tables) {
        nlohmann::json t;
        t["conditioning"] = table.conditioning;
        t["probabilities"] = nlohmann::json::array();
        for (const auto& [outcome, prob] : table.probabilities)
            t["probabilities"].push_back({{"outcome", outcome}, {"num", prob.num}, {"den", prob.den}});
        doc["tables"].push_back(std::move(t));
    }
    if (report.counterexample) {
        const Counterexample& cex = *report.counterexample;
        nlohmann::json c;
        c["conditioning"] = cex.conditioning;
        c["outcome"] = cex.outcome;
        c["lhs"] = {{"num", cex.lhs.num}, {"den", cex.lhs.den}};
        c["rhs"] = {{"num", cex.rhs.num}, {"den", cex.rhs.den}};
        c["assignment"] = cex.assignment;
        doc["counterexample"] = std::move(c);
    } else {
        doc["counterexample"] = nullptr;
    }
    return doc.dump(2);
}

} // namespace blindpad::verify
