#include "bcw/common/serialize.hpp"

namespace bcw {

Writer& Writer::u8(std::uint8_t v) {
    buf_.push_back(v);
    return *this;
}

Writer& Writer::u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
}

Writer& Writer::u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
}

Writer& Writer::raw(ByteView data) {
    buf_.insert(buf_.end(), data.begin(), data.end());
    return *this;
}

Writer& Writer::var_bytes(ByteView data) {
    u32(static_cast<std::uint32_t>(data.size()));
    return raw(data);
}

Writer& Writer::bigint(const BigInt& v) {
    Bytes b = bigint_to_bytes(v);
    if (b.size() > 255) throw DomainError("EncodingError", "integer too large");
    u8(static_cast<std::uint8_t>(b.size()));
    return raw(b);
}

void Reader::need(std::size_t n) const {
    if (remaining() < n) throw DecodeError("unexpected end of input");
}

std::uint8_t Reader::u8() {
    need(1);
    return data_[pos_++];
}

std::uint32_t Reader::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
}

std::uint64_t Reader::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
}

Bytes Reader::raw(std::size_t n) {
    need(n);
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
              data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
}

HashDigest Reader::digest() { return HashDigest::from_bytes(raw(32)); }

Bytes Reader::var_bytes(std::size_t max_len) {
    auto n = u32();
    if (n > max_len) throw DecodeError("byte string exceeds limit");
    return raw(n);
}

std::string Reader::str(std::size_t max_len) {
    auto b = var_bytes(max_len);
    return {b.begin(), b.end()};
}

BigInt Reader::bigint() {
    auto n = u8();
    auto b = raw(n);
    if (!b.empty() && b[0] == 0) throw DecodeError("non-canonical integer encoding");
    return bigint_from_bytes(b);
}

std::uint32_t Reader::count(std::size_t min_item_size) {
    auto n = u32();
    if (min_item_size > 0 && n > remaining() / min_item_size)
        throw DecodeError("list count exceeds remaining input");
    return n;
}

void Reader::expect_done() const {
    if (!done()) throw DecodeError("trailing bytes after object");
}

} // namespace bcw
