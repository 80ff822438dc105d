#pragma once

// The three-party session: a dealer mints one bundle of correlated keys, the
// encryptor publishes an outer-padded batch, Alice picks one entry and runs
// the blind exchange with the decryptor. Each bundle serves exactly one
// decryption; the decryptor enforces that with an atomic consumed flag.
//
// Knowledge separation is structural: each role's view type contains exactly
// the keys that role is allowed to hold, so code handling one view cannot
// read another role's keys.

#include <array>
#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "blindpad/outer_pad.hpp"
#include "blindpad/twopad.hpp"

namespace blindpad::protocol {

struct SessionId {
    std::array<std::uint8_t, 16> bytes{};

    bool operator==(const SessionId& other) const noexcept { return bytes == other.bytes; }
    std::string hex() const;
    static SessionId from_hex(const std::string& text);
    static SessionId random(RandomSource& rng);
};

// Wire-level message values. The codec in wire.hpp lays these out as bytes.
struct CiphertextBatch {
    SessionId session;
    std::vector<U256> values; // u_j, each in Z_{p²}
};
struct BlindRequest {
    SessionId session;
    U256 value; // w, in Z_p
};
struct BlindResponse {
    SessionId session;
    U256 value; // w', in Z_p
};
enum class ErrorReason : std::uint8_t {
    single_use_violation = 0x01,
    invalid_request = 0x02,
    malformed_frame = 0x03,
};
struct ErrorNotice {
    SessionId session;
    ErrorReason reason;
};
using ProtocolMessage = std::variant<CiphertextBatch, BlindRequest, BlindResponse, ErrorNotice>;

struct EncryptorView {
    SessionId session;
    PrimeModulus p;
    twopad::TwoPadKey inner_key;
    std::vector<otp::OuterKey> batch_keys; // k_1..k_L, modulus p²
};

struct AliceView {
    SessionId session;
    PrimeModulus p;
    std::vector<otp::OuterKey> batch_keys; // k_1..k_L, modulus p²
    otp::OuterKey request_key;             // k_C, modulus p
    otp::OuterKey response_key;            // k_P, modulus p
};

struct DecryptorView {
    SessionId session;
    PrimeModulus p;
    twopad::TwoPadKey inner_key;
    otp::OuterKey request_key;  // k_C
    otp::OuterKey response_key; // k_P
};

// The dealer's full record of one session.
struct SessionKeyMaterial {
    SessionId session;
    PrimeModulus p;
    std::size_t batch_size; // L <= p-1
    twopad::TwoPadKey inner_key;
    std::vector<otp::OuterKey> batch_keys;
    otp::OuterKey request_key;
    otp::OuterKey response_key;
    bool consumed = false;

    EncryptorView encryptor_view() const;
    AliceView alice_view() const;
    DecryptorView decryptor_view() const;
};

// Mints the pre-shared key material one session needs: the inner key for
// encryptor+decryptor, L batch pads for encryptor+Alice, and k_C/k_P for
// Alice+decryptor.
SessionKeyMaterial dealer_issue(const PrimeModulus& p, std::size_t batch_size, RandomSource& rng);

// Decryptor key storage for one session, in bits: x_k, y_k, k_C, k_P.
unsigned decryptor_key_bits(const PrimeModulus& p);

class EncryptorSession {
public:
    explicit EncryptorSession(EncryptorView view) : view_(std::move(view)) {}

    // c_j = Enc_2PAD(m_j) with pairwise-distinct residues, u_j = c_j + k_j.
    // One publication per session.
    CiphertextBatch publish(std::span<const U256> messages, RandomSource& rng);

    const EncryptorView& view() const noexcept { return view_; }

private:
    EncryptorView view_;
    bool published_ = false;
};

class AliceSession {
public:
    enum class Phase { initial, received, requested, finished };

    explicit AliceSession(AliceView view) : view_(std::move(view)) {}

    // Strips the outer pads and validates the batch: right arity, no zero
    // residues, no duplicate residues mod p (duplicates would let Map decrypt
    // a second message for free).
    void receive(const CiphertextBatch& batch);

    // choice is 1-based, matching the protocol's i ∈ {1..L}.
    BlindRequest request(std::size_t choice);

    // m' = w' - k_P, then Map(c', m', c_i).
    U256 finish(const BlindResponse& response);

    Phase phase() const noexcept { return phase_; }
    std::span<const U256> ciphertexts() const noexcept { return ciphertexts_; }

private:
    AliceView view_;
    Phase phase_ = Phase::initial;
    std::vector<U256> ciphertexts_;
    std::size_t choice_ = 0;   // 1-based, set at request time
    U256 transformed_ = 0;     // c' = c_i mod p
};

class DecryptorSession {
public:
    explicit DecryptorSession(DecryptorView view, bool already_consumed = false)
        : view_(std::move(view)), consumed_(already_consumed) {}

    // c' = w - k_C, m' = Dec_2PAD(c'), w' = m' + k_P. Exactly one response
    // per session: the consumed flag is checked-and-set atomically, so
    // concurrent calls cannot both succeed. Rejects c' = 0 (an honest
    // ciphertext never has residue 0).
    BlindResponse respond(const BlindRequest& request);

    bool consumed() const noexcept { return consumed_.load(std::memory_order_acquire); }
    const DecryptorView& view() const noexcept { return view_; }

private:
    DecryptorView view_;
    std::atomic<bool> consumed_;
};

} // namespace blindpad::protocol
