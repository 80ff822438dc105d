#include "blindpad/protocol.hpp"

#include <cassert>
#include <set>

namespace blindpad::protocol {

std::string SessionId::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(32);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

SessionId SessionId::from_hex(const std::string& text) {
    if (text.size() != 32) raise(errc::invalid_input, "session id must be 32 hex digits");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        raise(errc::invalid_input, "session id contains a non-hex digit");
    };
    SessionId id;
    for (std::size_t i = 0; i < 16; ++i)
        id.bytes[i] = static_cast<std::uint8_t>((nibble(text[2 * i]) << 4) | nibble(text[2 * i + 1]));
    return id;
}

SessionId SessionId::random(RandomSource& rng) {
    SessionId id;
    for (std::size_t i = 0; i < 16; i += 8) {
        std::uint64_t w = rng.next_word();
        for (std::size_t j = 0; j < 8; ++j) id.bytes[i + j] = static_cast<std::uint8_t>(w >> (8 * j));
    }
    return id;
}

EncryptorView SessionKeyMaterial::encryptor_view() const {
    return EncryptorView{session, p, inner_key, batch_keys};
}

AliceView SessionKeyMaterial::alice_view() const {
    return AliceView{session, p, batch_keys, request_key, response_key};
}

DecryptorView SessionKeyMaterial::decryptor_view() const {
    return DecryptorView{session, p, inner_key, request_key, response_key};
}

SessionKeyMaterial dealer_issue(const PrimeModulus& p, std::size_t batch_size, RandomSource& rng) {
    if (batch_size == 0) raise(errc::empty_batch, "dealer_issue: batch size is zero");
    if (U256(batch_size) > p.p() - 1)
        raise(errc::capacity_exceeded, "dealer_issue: batch size exceeds p-1");

    SessionKeyMaterial material{
        SessionId::random(rng), p, batch_size,
        twopad::gen(p, rng),
        {},
        otp::OuterKey{0, p.p()},
        otp::OuterKey{0, p.p()},
        false,
    };
    material.batch_keys.reserve(batch_size);
    for (std::size_t j = 0; j < batch_size; ++j)
        material.batch_keys.push_back(otp::otp_gen(p.p_squared(), rng));
    material.request_key = otp::otp_gen(p.p(), rng);
    material.response_key = otp::otp_gen(p.p(), rng);
    return material;
}

unsigned decryptor_key_bits(const PrimeModulus& p) { return 4 * ceil_log2(p.p()); }

CiphertextBatch EncryptorSession::publish(std::span<const U256> messages, RandomSource& rng) {
    if (published_) raise(errc::state_violation, "publish: session already published");
    if (messages.size() != view_.batch_keys.size())
        raise(errc::arity_mismatch, "publish: message count does not match L");

    std::vector<U256> inner = twopad::encrypt_batch(view_.inner_key, view_.p, messages, rng);
    CiphertextBatch batch{view_.session, {}};
    batch.values.reserve(inner.size());
    for (std::size_t j = 0; j < inner.size(); ++j)
        batch.values.push_back(otp::otp_encrypt(view_.batch_keys[j], Residue{inner[j], view_.p.p_squared()}).value);
    published_ = true;
    return batch;
}

void AliceSession::receive(const CiphertextBatch& batch) {
    if (phase_ != Phase::initial) raise(errc::state_violation, "receive: batch already received");
    if (!(batch.session == view_.session)) raise(errc::protocol_error, "receive: wrong session id");
    if (batch.values.empty()) raise(errc::protocol_error, "receive: empty batch");
    if (batch.values.size() != view_.batch_keys.size())
        raise(errc::arity_mismatch, "receive: batch arity does not match L");

    std::vector<U256> inner;
    inner.reserve(batch.values.size());
    std::set<U256> residues;
    for (std::size_t j = 0; j < batch.values.size(); ++j) {
        if (batch.values[j] >= view_.p.p_squared())
            raise(errc::protocol_error, "receive: batch value outside Z_{p^2}");
        U256 c = otp::otp_decrypt(view_.batch_keys[j], Residue{batch.values[j], view_.p.p_squared()}).value;
        U256 residue = c % view_.p.p();
        if (residue == 0) raise(errc::malformed_batch, "receive: ciphertext with residue 0");
        if (!residues.insert(residue).second)
            raise(errc::malformed_batch, "receive: duplicate residues mod p");
        inner.push_back(c);
    }
    ciphertexts_ = std::move(inner);
    phase_ = Phase::received;
}

BlindRequest AliceSession::request(std::size_t choice) {
    if (phase_ != Phase::received)
        raise(errc::state_violation, "request: session not in the received phase");
    if (choice < 1 || choice > ciphertexts_.size())
        raise(errc::selection_out_of_range, "request: choice outside 1..L");

    choice_ = choice;
    transformed_ = ciphertexts_[choice - 1] % view_.p.p();
    U256 w = otp::otp_encrypt(view_.request_key, Residue{transformed_, view_.p.p()}).value;
    phase_ = Phase::requested;
    return BlindRequest{view_.session, w};
}

U256 AliceSession::finish(const BlindResponse& response) {
    if (phase_ != Phase::requested)
        raise(errc::state_violation, "finish: no request outstanding");
    if (!(response.session == view_.session)) raise(errc::protocol_error, "finish: wrong session id");
    if (response.value >= view_.p.p()) raise(errc::protocol_error, "finish: response outside Z_p");

    U256 m_prime = otp::otp_decrypt(view_.response_key, Residue{response.value, view_.p.p()}).value;
    auto plain = twopad::map_ciphertext(transformed_, m_prime, ciphertexts_[choice_ - 1], view_.p);
    if (!plain) raise(errc::corrupted_response, "finish: response fails the Map congruence");
    phase_ = Phase::finished;
    return *plain;
}

BlindResponse DecryptorSession::respond(const BlindRequest& request) {
    if (consumed()) raise(errc::single_use_violation, "respond: session already consumed");
    if (!(request.session == view_.session)) raise(errc::invalid_request, "respond: wrong session id");
    if (request.value >= view_.p.p()) raise(errc::invalid_request, "respond: request outside Z_p");

    U256 transformed = otp::otp_decrypt(view_.request_key, Residue{request.value, view_.p.p()}).value;
    if (transformed == 0)
        raise(errc::invalid_request, "respond: residue 0 cannot come from an honest ciphertext");

    bool expected = false;
    if (!consumed_.compare_exchange_strong(expected, true, std::memory_order_acq_rel))
        raise(errc::single_use_violation, "respond: session already consumed");

    U256 m_prime = twopad::decrypt(view_.inner_key, view_.p, transformed);
    assert(m_prime < view_.p.p());
    U256 w_prime = otp::otp_encrypt(view_.response_key, Residue{m_prime, view_.p.p()}).value;
    return BlindResponse{view_.session, w_prime};
}

} // namespace blindpad::protocol
