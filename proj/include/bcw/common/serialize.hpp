#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "bcw/common/bigint.hpp"
#include "bcw/common/bytes.hpp"
#include "bcw/common/error.hpp"

namespace bcw {

/// Append-only little-endian encoder. Lists are prefixed with a u32 count and
/// variable byte strings with a u32 length.
class Writer {
public:
    Writer& u8(std::uint8_t v);
    Writer& u32(std::uint32_t v);
    Writer& i32(std::int32_t v) { return u32(static_cast<std::uint32_t>(v)); }
    Writer& u64(std::uint64_t v);
    Writer& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
    Writer& raw(ByteView data);
    Writer& digest(const HashDigest& d) { return raw(d.view()); }
    Writer& var_bytes(ByteView data);
    Writer& str(std::string_view s) { return var_bytes(as_bytes(s)); }
    /// u8 length + minimal big-endian magnitude; only non-negative values.
    Writer& bigint(const BigInt& v);

    const Bytes& data() const& { return buf_; }
    Bytes take() && { return std::move(buf_); }
    std::size_t size() const { return buf_.size(); }

private:
    Bytes buf_;
};

/// Bounds-checked decoder matching Writer. Rejects non-canonical encodings so
/// that decode(encode(x)) is the only byte string mapping to x.
class Reader {
public:
    explicit Reader(ByteView data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    std::uint64_t u64();
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    Bytes raw(std::size_t n);
    HashDigest digest();
    Bytes var_bytes(std::size_t max_len = 1u << 26);
    std::string str(std::size_t max_len = 1u << 16);
    BigInt bigint();
    /// Reads a list count and rejects counts that cannot fit in the remaining input.
    std::uint32_t count(std::size_t min_item_size = 1);

    std::size_t remaining() const { return data_.size() - pos_; }
    std::size_t position() const { return pos_; }
    bool done() const { return pos_ == data_.size(); }
    void expect_done() const;

private:
    void need(std::size_t n) const;

    ByteView data_;
    std::size_t pos_ = 0;
};

} // namespace bcw
