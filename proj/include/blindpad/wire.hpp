#pragma once

// Byte-exact framing for protocol messages and the keystore file format.
//
// Frame layout (big-endian throughout):
//   magic "BPD1" | msg_type (1) | session_id (16) | p_bitlen (2) | count (2)
//   | count × W bytes of residues
// W = ceil(2*p_bitlen/8) for CiphertextBatch, ceil(p_bitlen/8) for
// BlindRequest/BlindResponse, and 1 for Error (payload is a reason code).
// A frame is exactly 25 + count*W bytes; anything else is rejected.
//
// Keystores are labeled decimal text, one value per line, so the key
// material every party holds can be audited by eye.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "blindpad/protocol.hpp"

namespace blindpad::wire {

inline constexpr std::size_t kFrameHeaderSize = 25;
inline constexpr std::array<std::uint8_t, 4> kMagic = {'B', 'P', 'D', '1'};

std::vector<std::uint8_t> encode_frame(const protocol::ProtocolMessage& message, const PrimeModulus& p);

protocol::ProtocolMessage decode_frame(std::span<const std::uint8_t> bytes, const PrimeModulus& p);

// Total frame size implied by a header, so a stream reader knows how many
// payload bytes follow. Rejects bad magic or an unknown message type.
std::size_t frame_length_from_header(std::span<const std::uint8_t> header);

enum class Role { dealer, encryptor, alice, decryptor };

const char* role_name(Role role);
std::optional<Role> role_from_name(std::string_view name);

struct KeystoreRecord {
    Role role;
    protocol::SessionId session;
    U256 p;
    std::size_t batch_size = 0;
    std::optional<twopad::TwoPadKey> inner_key;    // dealer, encryptor, decryptor
    std::vector<otp::OuterKey> batch_keys;         // dealer, encryptor, alice
    std::optional<otp::OuterKey> request_key;      // k_C: dealer, alice, decryptor
    std::optional<otp::OuterKey> response_key;     // k_P: dealer, alice, decryptor
    bool consumed = false;

    static KeystoreRecord for_role(const protocol::SessionKeyMaterial& material, Role role);

    protocol::EncryptorView encryptor_view() const;
    protocol::AliceView alice_view() const;
    protocol::DecryptorView decryptor_view() const;
    PrimeModulus modulus() const;
};

// Durable write: temp file in the same directory, fsync, rename over the
// target, fsync the directory. The decryptor's consumed flag must hit disk
// before the response frame leaves the process.
void keystore_save(const KeystoreRecord& record, const std::filesystem::path& path);

// Strict load: validates primality of p, L <= p-1, residue ranges, required
// fields per role, and rejects unknown labels.
KeystoreRecord keystore_load(const std::filesystem::path& path);

} // namespace blindpad::wire
