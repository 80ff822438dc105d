// blindpad: dealer, encryptor, decryptor server, Alice client, and the
// secrecy verifier, in one binary. One blind decryption runs end to end as
//   deal -> encrypt -> serve -> fetch
// with key material in labeled-text keystores and framed messages over a
// plain stream socket (one request/response per connection).
//
// Exit codes: 0 success, 2 protocol error, 3 single-use violation,
// 4 validation failure.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "blindpad/presets.hpp"
#include "blindpad/verify.hpp"
#include "blindpad/wire.hpp"

namespace {

using namespace blindpad;

constexpr int kExitOk = 0;
constexpr int kExitProtocol = 2;
constexpr int kExitSingleUse = 3;
constexpr int kExitValidation = 4;

int exit_code_for(const Error& error) {
    switch (error.code()) {
        case errc::single_use_violation: return kExitSingleUse;
        case errc::keystore_invalid:
        case errc::invalid_input:
        case errc::invalid_modulus:
        case errc::capacity_exceeded:
        case errc::empty_batch:
        case errc::arity_mismatch:
        case errc::selection_out_of_range:
        case errc::io_error: return kExitValidation;
        default: return kExitProtocol;
    }
}

RandomSource make_rng(std::optional<std::uint64_t> seed) {
    return seed ? RandomSource::seeded(*seed) : RandomSource::system();
}

U256 parse_prime_arg(const std::string& text) {
    std::string value = text;
    if (value.rfind("preset:", 0) == 0) {
        auto preset = find_preset(value.substr(7));
        if (!preset) raise(errc::invalid_input, "unknown preset: " + value.substr(7));
        return preset->p;
    }
    if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
        raise(errc::invalid_input, "--p must be a decimal prime or preset:<name>");
    if (value.size() > 78) raise(errc::invalid_input, "--p too large");
    return U256(value);
}

// --- socket plumbing -------------------------------------------------------

struct Endpoint {
    std::string host;
    std::uint16_t port;
};

Endpoint parse_endpoint(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos) raise(errc::invalid_input, "endpoint must be host:port");
    std::string host = text.substr(0, colon);
    std::string port_text = text.substr(colon + 1);
    if (port_text.empty() || port_text.find_first_not_of("0123456789") != std::string::npos)
        raise(errc::invalid_input, "bad port: " + port_text);
    unsigned long port = std::stoul(port_text);
    if (port > 0xffff) raise(errc::invalid_input, "port out of range");
    return Endpoint{host.empty() ? "127.0.0.1" : host, static_cast<std::uint16_t>(port)};
}

void write_all(int fd, std::span<const std::uint8_t> bytes) {
    std::size_t sent = 0;
    while (sent < bytes.size()) {
        ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
        if (n <= 0) raise(errc::io_error, "socket write failed");
        sent += static_cast<std::size_t>(n);
    }
}

bool read_exact(int fd, std::uint8_t* buffer, std::size_t want) {
    std::size_t got = 0;
    while (got < want) {
        ssize_t n = ::recv(fd, buffer + got, want - got, 0);
        if (n == 0) return false;
        if (n < 0) raise(errc::io_error, "socket read failed");
        got += static_cast<std::size_t>(n);
    }
    return true;
}

std::optional<std::vector<std::uint8_t>> read_frame(int fd) {
    std::vector<std::uint8_t> frame(wire::kFrameHeaderSize);
    if (!read_exact(fd, frame.data(), frame.size())) return std::nullopt;
    std::size_t total = wire::frame_length_from_header(frame);
    if (total > (1u << 22)) raise(errc::malformed_frame, "frame too large");
    frame.resize(total);
    if (total > wire::kFrameHeaderSize &&
        !read_exact(fd, frame.data() + wire::kFrameHeaderSize, total - wire::kFrameHeaderSize))
        raise(errc::malformed_frame, "connection closed mid-frame");
    return frame;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(errc::io_error, "cannot read " + path.string());
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(errc::io_error, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) raise(errc::io_error, "short write to " + path.string());
}

// --- subcommands -----------------------------------------------------------

int run_deal(const std::string& p_arg, std::size_t batch_size, const std::string& out_dir,
             std::optional<std::uint64_t> seed) {
    PrimeModulus p = PrimeModulus::create(parse_prime_arg(p_arg));
    RandomSource rng = make_rng(seed);
    protocol::SessionKeyMaterial material = protocol::dealer_issue(p, batch_size, rng);

    std::filesystem::create_directories(out_dir);
    for (wire::Role role : {wire::Role::dealer, wire::Role::encryptor, wire::Role::alice, wire::Role::decryptor}) {
        wire::KeystoreRecord record = wire::KeystoreRecord::for_role(material, role);
        wire::keystore_save(record, std::filesystem::path(out_dir) / (std::string(wire::role_name(role)) + ".keys"));
    }
    std::cout << "session " << material.session.hex() << ": p=" << p.p() << " l=" << batch_size
              << " decryptor_key_bits=" << protocol::decryptor_key_bits(p) << "\n";
    return kExitOk;
}

int run_encrypt(const std::string& keys_path, const std::string& messages_arg, const std::string& out_path,
                std::optional<std::uint64_t> seed) {
    wire::KeystoreRecord record = wire::keystore_load(keys_path);
    if (record.role != wire::Role::encryptor && record.role != wire::Role::dealer)
        raise(errc::keystore_invalid, "encrypt needs an encryptor keystore");
    PrimeModulus p = record.modulus();

    std::vector<U256> messages;
    std::stringstream stream(messages_arg);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
            raise(errc::invalid_input, "messages must be comma-separated decimal integers");
        U256 m(item);
        if (m >= p.p()) raise(errc::invalid_input, "message " + item + " outside Z_p");
        messages.push_back(m);
    }
    if (messages.size() != record.batch_size)
        raise(errc::arity_mismatch, "expected " + std::to_string(record.batch_size) + " messages");

    RandomSource rng = make_rng(seed);
    protocol::EncryptorSession session(record.encryptor_view());
    protocol::CiphertextBatch batch = session.publish(messages, rng);
    write_file(out_path, wire::encode_frame(batch, p));
    std::cout << "wrote batch of " << messages.size() << " to " << out_path << "\n";
    return kExitOk;
}

class DecryptorServer {
public:
    DecryptorServer(wire::KeystoreRecord record, std::filesystem::path keystore_path)
        : record_(std::move(record)),
          keystore_path_(std::move(keystore_path)),
          modulus_(record_.modulus()),
          session_(record_.decryptor_view(), record_.consumed) {}

    int serve(const Endpoint& endpoint) {
        int listener = ::socket(AF_INET, SOCK_STREAM, 0);
        if (listener < 0) raise(errc::io_error, "socket() failed");
        int one = 1;
        ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(endpoint.port);
        if (::inet_pton(AF_INET, endpoint.host.c_str(), &addr.sin_addr) != 1)
            raise(errc::invalid_input, "listen address must be an IPv4 literal");
        if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0)
            raise(errc::io_error, std::string("bind failed: ") + std::strerror(errno));
        if (::listen(listener, 16) != 0) raise(errc::io_error, "listen failed");

        sockaddr_in bound{};
        socklen_t bound_len = sizeof bound;
        ::getsockname(listener, reinterpret_cast<sockaddr*>(&bound), &bound_len);
        char host[INET_ADDRSTRLEN] = {0};
        ::inet_ntop(AF_INET, &bound.sin_addr, host, sizeof host);
        std::cout << "listening on " << host << ":" << ntohs(bound.sin_port) << "\n" << std::flush;

        for (;;) {
            int conn = ::accept(listener, nullptr, nullptr);
            if (conn < 0) {
                if (errno == EINTR) continue;
                raise(errc::io_error, "accept failed");
            }
            std::thread(&DecryptorServer::handle, this, conn).detach();
        }
    }

private:
    void handle(int conn) {
        try {
            auto frame = read_frame(conn);
            if (frame) respond_to(conn, *frame);
        } catch (const std::exception&) {
            // Connection-level failures end the connection, not the server.
        }
        ::close(conn);
    }

    void respond_to(int conn, std::span<const std::uint8_t> frame) {
        protocol::ErrorReason reason;
        try {
            protocol::ProtocolMessage message = wire::decode_frame(frame, modulus_);
            auto* request = std::get_if<protocol::BlindRequest>(&message);
            if (!request) {
                send_error(conn, protocol::ErrorReason::invalid_request);
                return;
            }
            std::vector<std::uint8_t> out_frame;
            {
                // Serialize the consume-and-persist step: the flag must be on
                // disk before the response leaves.
                std::lock_guard<std::mutex> lock(consume_mutex_);
                protocol::BlindResponse response = session_.respond(*request);
                record_.consumed = true;
                wire::keystore_save(record_, keystore_path_);
                out_frame = wire::encode_frame(response, modulus_);
            }
            write_all(conn, out_frame);
            return;
        } catch (const Error& error) {
            switch (error.code()) {
                case errc::single_use_violation: reason = protocol::ErrorReason::single_use_violation; break;
                case errc::invalid_request: reason = protocol::ErrorReason::invalid_request; break;
                case errc::malformed_frame: reason = protocol::ErrorReason::malformed_frame; break;
                default: reason = protocol::ErrorReason::invalid_request; break;
            }
        }
        send_error(conn, reason);
    }

    void send_error(int conn, protocol::ErrorReason reason) {
        try {
            write_all(conn, wire::encode_frame(protocol::ErrorNotice{record_.session, reason}, modulus_));
        } catch (const std::exception&) {
        }
    }

    wire::KeystoreRecord record_;
    std::filesystem::path keystore_path_;
    PrimeModulus modulus_;
    protocol::DecryptorSession session_;
    std::mutex consume_mutex_;
};

int run_serve(const std::string& keys_path, const std::string& listen_arg) {
    wire::KeystoreRecord record = wire::keystore_load(keys_path);
    if (record.role != wire::Role::decryptor)
        raise(errc::keystore_invalid, "serve needs a decryptor keystore");
    DecryptorServer server(std::move(record), keys_path);
    return server.serve(parse_endpoint(listen_arg));
}

int connect_with_retry(const Endpoint& endpoint) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(endpoint.port);
    if (::inet_pton(AF_INET, endpoint.host.c_str(), &addr.sin_addr) != 1)
        raise(errc::invalid_input, "server address must be an IPv4 literal");
    for (int attempt = 0; attempt < 40; ++attempt) {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) raise(errc::io_error, "socket() failed");
        if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) return fd;
        ::close(fd);
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    raise(errc::io_error, "cannot connect to the decryptor server");
}

int run_fetch(const std::string& keys_path, const std::string& batch_path, std::size_t choice,
              const std::string& server_arg) {
    wire::KeystoreRecord record = wire::keystore_load(keys_path);
    if (record.role != wire::Role::alice && record.role != wire::Role::dealer)
        raise(errc::keystore_invalid, "fetch needs an alice keystore");
    PrimeModulus p = record.modulus();

    protocol::ProtocolMessage batch_message = wire::decode_frame(read_file(batch_path), p);
    auto* batch = std::get_if<protocol::CiphertextBatch>(&batch_message);
    if (!batch) raise(errc::malformed_frame, "batch file does not hold a ciphertext batch frame");

    protocol::AliceSession session(record.alice_view());
    session.receive(*batch);
    protocol::BlindRequest request = session.request(choice);

    int fd = connect_with_retry(parse_endpoint(server_arg));
    write_all(fd, wire::encode_frame(request, p));
    auto reply = read_frame(fd);
    ::close(fd);
    if (!reply) raise(errc::protocol_error, "server closed the connection without a reply");

    protocol::ProtocolMessage message = wire::decode_frame(*reply, p);
    if (auto* response = std::get_if<protocol::BlindResponse>(&message)) {
        std::cout << session.finish(*response) << "\n";
        return kExitOk;
    }
    if (auto* error = std::get_if<protocol::ErrorNotice>(&message)) {
        switch (error->reason) {
            case protocol::ErrorReason::single_use_violation:
                std::cerr << "error: single-use violation (session already consumed)\n";
                return kExitSingleUse;
            case protocol::ErrorReason::invalid_request:
                std::cerr << "error: server rejected the request\n";
                return kExitProtocol;
            case protocol::ErrorReason::malformed_frame:
                std::cerr << "error: server could not parse the request\n";
                return kExitProtocol;
        }
    }
    std::cerr << "error: unexpected reply type\n";
    return kExitProtocol;
}

int run_verify(const std::string& definition, std::uint64_t p_value, std::size_t batch_size,
               const std::string& json_path) {
    std::vector<verify::VerificationReport> reports;
    if (definition == "shannon") {
        // The outer pad runs at both moduli the protocol uses: p and p².
        reports.push_back(verify::verify_ordinary_secrecy(p_value));
        reports.push_back(verify::verify_ordinary_secrecy(p_value * p_value));
    } else {
        PrimeModulus p = PrimeModulus::create(U256(p_value));
        if (definition == "alice") {
            reports.push_back(verify::verify_leakfree_alice(p));
        } else if (definition == "blind") {
            reports.push_back(verify::verify_blindness_decryptor(p));
        } else if (definition == "encryptor") {
            reports.push_back(verify::verify_leakfree_encryptor(p, batch_size));
        } else {
            raise(errc::invalid_input, "unknown definition: " + definition);
        }
    }

    bool all_pass = true;
    for (const auto& report : reports) {
        std::cout << verify::report_text(report) << "\n";
        all_pass = all_pass && report.pass;
    }
    if (!json_path.empty()) {
        std::string json = "[";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i > 0) json += ",";
            json += "\n" + verify::report_json(reports[i]);
        }
        json += "\n]\n";
        if (json_path == "-") {
            std::cout << json;
        } else {
            std::ofstream out(json_path);
            if (!out) raise(errc::io_error, "cannot write " + json_path);
            out << json;
        }
    }
    return all_pass ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"blind decryption with information-theoretic secrecy"};
    app.require_subcommand(1);

    std::string p_arg, out_dir = ".", keys_path, messages_arg, out_path = "batch.bin";
    std::string listen_arg = "127.0.0.1:0", server_arg, batch_path, definition, json_path;
    std::size_t batch_size = 1, choice = 1, verify_l = 2;
    std::uint64_t verify_p = 5;
    std::optional<std::uint64_t> seed;

    auto* deal = app.add_subcommand("deal", "issue key material for one session");
    deal->add_option("--p", p_arg, "prime modulus, decimal or preset:<name>")->required();
    deal->add_option("--l", batch_size, "number of messages (1..p-1)")->required();
    deal->add_option("--out", out_dir, "directory for the four keystores");
    deal->add_option("--seed", seed, "deterministic RNG seed (testing only)");

    auto* encrypt = app.add_subcommand("encrypt", "publish an outer-padded ciphertext batch");
    encrypt->add_option("--keys", keys_path, "encryptor keystore")->required();
    encrypt->add_option("--messages", messages_arg, "m1,...,mL in decimal")->required();
    encrypt->add_option("--out", out_path, "output batch frame file");
    encrypt->add_option("--seed", seed, "deterministic RNG seed (testing only)");

    auto* serve = app.add_subcommand("serve", "run the decryptor server");
    serve->add_option("--keys", keys_path, "decryptor keystore")->required();
    serve->add_option("--listen", listen_arg, "IPv4 address:port (port 0 picks one)");

    auto* fetch = app.add_subcommand("fetch", "blind-decrypt one chosen message");
    fetch->add_option("--keys", keys_path, "alice keystore")->required();
    fetch->add_option("--batch", batch_path, "batch frame file")->required();
    fetch->add_option("--choose", choice, "1-based selection index")->required();
    fetch->add_option("--server", server_arg, "decryptor server address:port")->required();

    auto* verify_cmd = app.add_subcommand("verify", "exhaustively verify a secrecy definition");
    verify_cmd->add_option("--definition", definition, "shannon | alice | blind | encryptor")->required();
    verify_cmd->add_option("--p", verify_p, "prime parameter (for shannon: checks n=p and n=p^2)")->required();
    verify_cmd->add_option("--l", verify_l, "batch size for the encryptor definition");
    verify_cmd->add_option("--json", json_path, "write the machine-readable report here ('-' for stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*deal) return run_deal(p_arg, batch_size, out_dir, seed);
        if (*encrypt) return run_encrypt(keys_path, messages_arg, out_path, seed);
        if (*serve) return run_serve(keys_path, listen_arg);
        if (*fetch) return run_fetch(keys_path, batch_path, choice, server_arg);
        if (*verify_cmd) return run_verify(definition, verify_p, verify_l, json_path);
    } catch (const Error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return exit_code_for(error);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitProtocol;
    }
    return kExitProtocol;
}
