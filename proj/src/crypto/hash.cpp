#define OPENSSL_SUPPRESS_DEPRECATED
#include "bcw/crypto/hash.hpp"

#include <openssl/ripemd.h>
#include <openssl/sha.h>

namespace bcw::crypto {

HashDigest sha256(ByteView data) {
    HashDigest out;
    SHA256(data.data(), data.size(), out.bytes.data());
    return out;
}

HashDigest sha256d(ByteView data) { return sha256(sha256(data).view()); }

Hash160 ripemd160(ByteView data) {
    Hash160 out{};
    // The EVP interface lacks RIPEMD-160 in OpenSSL 3 without the legacy provider.
    RIPEMD160(data.data(), data.size(), out.data());
    return out;
}

Hash160 hash160(ByteView data) { return ripemd160(sha256(data).view()); }

} // namespace bcw::crypto
