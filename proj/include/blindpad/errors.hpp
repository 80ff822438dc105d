#pragma once

#include <stdexcept>
#include <string>

namespace blindpad {

// Every failure the library reports, in one place. The CLI maps these onto
// wire error reasons and process exit codes.
enum class errc {
    invalid_modulus,        // modulus zero or otherwise unusable
    invalid_input,          // argument outside its documented domain
    no_inverse,             // element not invertible mod p
    empty_range,            // sampler asked for a uniform draw on an empty set
    capacity_exceeded,      // batch larger than p-1
    empty_batch,            // batch of zero messages
    degenerate_system,      // key recovery with c1 ≡ c2 (mod p)
    invalid_ciphertext,     // ciphertext with residue 0 where a nonce is required
    binding_mismatch,       // outer key applied under the wrong modulus
    arity_mismatch,         // message count does not match the session's L
    state_violation,        // protocol phase used out of order
    selection_out_of_range, // Alice chose an index outside 1..L
    single_use_violation,   // second decryption on a consumed session
    invalid_request,        // blind request the decryptor must refuse
    malformed_batch,        // batch with duplicate or zero residues mod p
    corrupted_response,     // response that fails the Map congruence
    malformed_frame,        // wire bytes that do not parse
    keystore_invalid,       // keystore file fails validation
    bound_exceeded,         // enumeration parameters beyond the hard-coded bounds
    protocol_error,         // generic protocol-level failure
    io_error,               // file or socket failure
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

} // namespace blindpad
