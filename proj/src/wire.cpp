#include "blindpad/wire.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace blindpad::wire {

namespace {

constexpr std::uint8_t kTypeBatch = 0x01;
constexpr std::uint8_t kTypeRequest = 0x02;
constexpr std::uint8_t kTypeResponse = 0x03;
constexpr std::uint8_t kTypeError = 0x7F;

std::size_t residue_width(std::uint8_t msg_type, unsigned p_bitlen) {
    switch (msg_type) {
        case kTypeBatch: return (2 * static_cast<std::size_t>(p_bitlen) + 7) / 8;
        case kTypeRequest:
        case kTypeResponse: return (static_cast<std::size_t>(p_bitlen) + 7) / 8;
        case kTypeError: return 1;
        default: raise(errc::malformed_frame, "unknown message type");
    }
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
}

std::uint16_t get_u16(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return static_cast<std::uint16_t>((bytes[offset] << 8) | bytes[offset + 1]);
}

void put_residue(std::vector<std::uint8_t>& out, const U256& value, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) {
        unsigned shift = 8 * static_cast<unsigned>(width - 1 - i);
        out.push_back(static_cast<std::uint8_t>((value >> shift) & 0xff));
    }
}

U256 get_residue(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t width) {
    U256 value = 0;
    for (std::size_t i = 0; i < width; ++i) value = (value << 8) | bytes[offset + i];
    return value;
}

std::vector<std::uint8_t> build_frame(std::uint8_t msg_type, const protocol::SessionId& session,
                                      unsigned p_bitlen, std::span<const U256> payload,
                                      std::size_t width) {
    if (payload.size() > 0xffff) raise(errc::invalid_input, "encode: payload count exceeds 16 bits");
    std::vector<std::uint8_t> out;
    out.reserve(kFrameHeaderSize + payload.size() * width);
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    out.push_back(msg_type);
    out.insert(out.end(), session.bytes.begin(), session.bytes.end());
    put_u16(out, static_cast<std::uint16_t>(p_bitlen));
    put_u16(out, static_cast<std::uint16_t>(payload.size()));
    for (const U256& value : payload) put_residue(out, value, width);
    return out;
}

} // namespace

std::vector<std::uint8_t> encode_frame(const protocol::ProtocolMessage& message, const PrimeModulus& p) {
    unsigned p_bitlen = bit_length(p.p());
    return std::visit(
        [&](const auto& msg) -> std::vector<std::uint8_t> {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, protocol::CiphertextBatch>) {
                for (const U256& u : msg.values)
                    if (u >= p.p_squared()) raise(errc::invalid_input, "encode: batch value outside Z_{p^2}");
                return build_frame(kTypeBatch, msg.session, p_bitlen, msg.values,
                                   residue_width(kTypeBatch, p_bitlen));
            } else if constexpr (std::is_same_v<T, protocol::BlindRequest>) {
                if (msg.value >= p.p()) raise(errc::invalid_input, "encode: request outside Z_p");
                return build_frame(kTypeRequest, msg.session, p_bitlen, std::span(&msg.value, 1),
                                   residue_width(kTypeRequest, p_bitlen));
            } else if constexpr (std::is_same_v<T, protocol::BlindResponse>) {
                if (msg.value >= p.p()) raise(errc::invalid_input, "encode: response outside Z_p");
                return build_frame(kTypeResponse, msg.session, p_bitlen, std::span(&msg.value, 1),
                                   residue_width(kTypeResponse, p_bitlen));
            } else {
                U256 reason = static_cast<unsigned>(msg.reason);
                return build_frame(kTypeError, msg.session, p_bitlen, std::span(&reason, 1), 1);
            }
        },
        message);
}

std::size_t frame_length_from_header(std::span<const std::uint8_t> header) {
    if (header.size() < kFrameHeaderSize) raise(errc::malformed_frame, "header shorter than 25 bytes");
    if (!std::equal(kMagic.begin(), kMagic.end(), header.begin()))
        raise(errc::malformed_frame, "bad magic");
    std::uint8_t msg_type = header[4];
    unsigned p_bitlen = get_u16(header, 21);
    std::size_t count = get_u16(header, 23);
    return kFrameHeaderSize + count * residue_width(msg_type, p_bitlen);
}

protocol::ProtocolMessage decode_frame(std::span<const std::uint8_t> bytes, const PrimeModulus& p) {
    if (bytes.size() < kFrameHeaderSize) raise(errc::malformed_frame, "frame shorter than the header");
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
        raise(errc::malformed_frame, "bad magic");

    std::uint8_t msg_type = bytes[4];
    protocol::SessionId session;
    std::copy(bytes.begin() + 5, bytes.begin() + 21, session.bytes.begin());
    unsigned p_bitlen = get_u16(bytes, 21);
    std::size_t count = get_u16(bytes, 23);

    if (p_bitlen != bit_length(p.p()))
        raise(errc::malformed_frame, "frame p_bitlen does not match the session modulus");
    std::size_t width = residue_width(msg_type, p_bitlen);
    if (bytes.size() != kFrameHeaderSize + count * width)
        raise(errc::malformed_frame, "frame length does not match its header");

    switch (msg_type) {
        case kTypeBatch: {
            protocol::CiphertextBatch batch{session, {}};
            batch.values.reserve(count);
            for (std::size_t j = 0; j < count; ++j) {
                U256 u = get_residue(bytes, kFrameHeaderSize + j * width, width);
                if (u >= p.p_squared()) raise(errc::malformed_frame, "batch value outside Z_{p^2}");
                batch.values.push_back(u);
            }
            return batch;
        }
        case kTypeRequest:
        case kTypeResponse: {
            if (count != 1) raise(errc::malformed_frame, "blind exchange frames carry exactly one residue");
            U256 v = get_residue(bytes, kFrameHeaderSize, width);
            if (v >= p.p()) raise(errc::malformed_frame, "residue outside Z_p");
            if (msg_type == kTypeRequest) return protocol::BlindRequest{session, v};
            return protocol::BlindResponse{session, v};
        }
        case kTypeError: {
            if (count != 1) raise(errc::malformed_frame, "error frames carry exactly one reason byte");
            std::uint8_t reason = bytes[kFrameHeaderSize];
            if (reason != 0x01 && reason != 0x02 && reason != 0x03)
                raise(errc::malformed_frame, "unknown error reason");
            return protocol::ErrorNotice{session, static_cast<protocol::ErrorReason>(reason)};
        }
        default: raise(errc::malformed_frame, "unknown message type");
    }
}

const char* role_name(Role role) {
    switch (role) {
        case Role::dealer: return "dealer";
        case Role::encryptor: return "encryptor";
        case Role::alice: return "alice";
        case Role::decryptor: return "decryptor";
    }
    return "?";
}

std::optional<Role> role_from_name(std::string_view name) {
    if (name == "dealer") return Role::dealer;
    if (name == "encryptor") return Role::encryptor;
    if (name == "alice") return Role::alice;
    if (name == "decryptor") return Role::decryptor;
    return std::nullopt;
}

KeystoreRecord KeystoreRecord::for_role(const protocol::SessionKeyMaterial& material, Role role) {
    KeystoreRecord record;
    record.role = role;
    record.session = material.session;
    record.p = material.p.p();
    record.batch_size = material.batch_size;
    record.consumed = material.consumed;
    switch (role) {
        case Role::dealer:
            record.inner_key = material.inner_key;
            record.batch_keys = material.batch_keys;
            record.request_key = material.request_key;
            record.response_key = material.response_key;
            break;
        case Role::encryptor:
            record.inner_key = material.inner_key;
            record.batch_keys = material.batch_keys;
            break;
        case Role::alice:
            record.batch_keys = material.batch_keys;
            record.request_key = material.request_key;
            record.response_key = material.response_key;
            break;
        case Role::decryptor:
            record.inner_key = material.inner_key;
            record.request_key = material.request_key;
            record.response_key = material.response_key;
            break;
    }
    return record;
}

PrimeModulus KeystoreRecord::modulus() const { return PrimeModulus::create(p); }

protocol::EncryptorView KeystoreRecord::encryptor_view() const {
    if (!inner_key || batch_keys.empty())
        raise(errc::keystore_invalid, "record lacks the encryptor's keys");
    return protocol::EncryptorView{session, modulus(), *inner_key, batch_keys};
}

protocol::AliceView KeystoreRecord::alice_view() const {
    if (batch_keys.empty() || !request_key || !response_key)
        raise(errc::keystore_invalid, "record lacks Alice's keys");
    return protocol::AliceView{session, modulus(), batch_keys, *request_key, *response_key};
}

protocol::DecryptorView KeystoreRecord::decryptor_view() const {
    if (!inner_key || !request_key || !response_key)
        raise(errc::keystore_invalid, "record lacks the decryptor's keys");
    return protocol::DecryptorView{session, modulus(), *inner_key, *request_key, *response_key};
}

namespace {

void append_line(std::string& out, const std::string& label, const std::string& value) {
    out += label;
    out += ": ";
    out += value;
    out += '\n';
}

std::string dec(const U256& v) { return v.str(); }

} // namespace

void keystore_save(const KeystoreRecord& record, const std::filesystem::path& path) {
    std::string text = "blindpad keystore v1\n";
    append_line(text, "session_id", record.session.hex());
    append_line(text, "role", role_name(record.role));
    append_line(text, "p", dec(record.p));
    append_line(text, "l", std::to_string(record.batch_size));
    if (record.role == Role::decryptor) {
        PrimeModulus p = PrimeModulus::create(record.p);
        append_line(text, "key_bits", std::to_string(protocol::decryptor_key_bits(p)));
    }
    if (record.inner_key) {
        append_line(text, "inner_x", dec(record.inner_key->x));
        append_line(text, "inner_y", dec(record.inner_key->y));
    }
    for (std::size_t j = 0; j < record.batch_keys.size(); ++j)
        append_line(text, "outer_key_" + std::to_string(j + 1), dec(record.batch_keys[j].key));
    if (record.request_key) append_line(text, "k_c", dec(record.request_key->key));
    if (record.response_key) append_line(text, "k_p", dec(record.response_key->key));
    append_line(text, "consumed", record.consumed ? "true" : "false");

    // Durable replace: temp file, fsync, rename, fsync the directory.
    std::filesystem::path dir = path.parent_path().empty() ? "." : path.parent_path();
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
    if (fd < 0) raise(errc::io_error, "keystore_save: cannot open " + tmp.string());
    const char* data = text.data();
    std::size_t remaining = text.size();
    while (remaining > 0) {
        ssize_t n = ::write(fd, data, remaining);
        if (n < 0) {
            ::close(fd);
            raise(errc::io_error, "keystore_save: write failed");
        }
        data += n;
        remaining -= static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        ::close(fd);
        raise(errc::io_error, "keystore_save: fsync failed");
    }
    ::close(fd);
    if (::rename(tmp.c_str(), path.c_str()) != 0)
        raise(errc::io_error, "keystore_save: rename failed: " + std::string(std::strerror(errno)));
    int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
    if (dfd >= 0) {
        ::fsync(dfd);
        ::close(dfd);
    }
}

KeystoreRecord keystore_load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(errc::io_error, "keystore_load: cannot read " + path.string());
    std::string header;
    if (!std::getline(in, header) || header != "blindpad keystore v1")
        raise(errc::keystore_invalid, "keystore_load: unknown file header");

    std::map<std::string, std::string> fields;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto colon = line.find(": ");
        if (colon == std::string::npos) raise(errc::keystore_invalid, "keystore_load: malformed line");
        std::string label = line.substr(0, colon);
        if (fields.count(label)) raise(errc::keystore_invalid, "keystore_load: duplicate label " + label);
        fields[label] = line.substr(colon + 2);
    }

    auto take = [&](const std::string& label) -> std::string {
        auto it = fields.find(label);
        if (it == fields.end()) raise(errc::keystore_invalid, "keystore_load: missing field " + label);
        std::string value = it->second;
        fields.erase(it);
        return value;
    };
    auto parse_u256 = [&](const std::string& label, const std::string& value) -> U256 {
        if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
            raise(errc::keystore_invalid, "keystore_load: field " + label + " is not a decimal integer");
        if (value.size() > 78) raise(errc::keystore_invalid, "keystore_load: field " + label + " too large");
        return U256(value);
    };

    KeystoreRecord record;
    record.session = protocol::SessionId::from_hex(take("session_id"));
    auto role = role_from_name(take("role"));
    if (!role) raise(errc::keystore_invalid, "keystore_load: unknown role");
    record.role = *role;
    record.p = parse_u256("p", take("p"));

    PrimeModulus p = [&] {
        try {
            return PrimeModulus::create(record.p);
        } catch (const Error& e) {
            raise(errc::keystore_invalid, std::string("keystore_load: ") + e.what());
        }
    }();

    U256 l_value = parse_u256("l", take("l"));
    if (l_value == 0 || l_value > p.p() - 1)
        raise(errc::keystore_invalid, "keystore_load: l outside 1..p-1");
    record.batch_size = static_cast<std::size_t>(l_value);

    auto residue_field = [&](const std::string& label, const U256& modulus) -> U256 {
        U256 v = parse_u256(label, take(label));
        if (v >= modulus) raise(errc::keystore_invalid, "keystore_load: " + label + " out of range");
        return v;
    };

    bool wants_inner = record.role != Role::alice;
    bool wants_batch = record.role != Role::decryptor;
    bool wants_blind = record.role != Role::encryptor;

    if (record.role == Role::decryptor) {
        U256 bits = parse_u256("key_bits", take("key_bits"));
        if (bits != protocol::decryptor_key_bits(p))
            raise(errc::keystore_invalid, "keystore_load: key_bits does not match 4*ceil(log2 p)");
    }
    if (wants_inner)
        record.inner_key = twopad::TwoPadKey{residue_field("inner_x", p.p()), residue_field("inner_y", p.p())};
    if (wants_batch) {
        record.batch_keys.reserve(record.batch_size);
        for (std::size_t j = 1; j <= record.batch_size; ++j)
            record.batch_keys.push_back(
                otp::OuterKey{residue_field("outer_key_" + std::to_string(j), p.p_squared()), p.p_squared()});
    }
    if (wants_blind) {
        record.request_key = otp::OuterKey{residue_field("k_c", p.p()), p.p()};
        record.response_key = otp::OuterKey{residue_field("k_p", p.p()), p.p()};
    }
    std::string consumed = take("consumed");
    if (consumed != "true" && consumed != "false")
        raise(errc::keystore_invalid, "keystore_load: consumed must be true or false");
    record.consumed = consumed == "true";

    if (!fields.empty())
        raise(errc::keystore_invalid, "keystore_load: unknown field " + fields.begin()->first);
    return record;
}

} // namespace blindpad::wire
