#include <gtest/gtest.h>

#include "bcw/common/bigint.hpp"
#include "bcw/common/bytes.hpp"
#include "bcw/common/error.hpp"
#include "bcw/common/serialize.hpp"

using namespace bcw;

TEST(Bytes, HexRoundTrip) {
    Bytes b{0x00, 0x01, 0xab, 0xff};
    EXPECT_EQ(to_hex(b), "0001abff");
    EXPECT_EQ(from_hex("0001ABff"), b);
    EXPECT_THROW(from_hex("abc"), DomainError);
    EXPECT_THROW(from_hex("zz"), DomainError);
}

TEST(Bytes, DigestFromHex) {
    std::string h(64, 'a');
    EXPECT_EQ(HashDigest::from_hex(h).hex(), h);
    EXPECT_THROW(HashDigest::from_hex("aa"), DomainError);
    EXPECT_TRUE(HashDigest{}.is_zero());
}

TEST(Serialize, LittleEndianIntegers) {
    Writer w;
    w.u32(0x01020304).u64(5).u8(9);
    Bytes expect{4, 3, 2, 1, 5, 0, 0, 0, 0, 0, 0, 0, 9};
    EXPECT_EQ(w.data(), expect);
    Reader r(w.data());
    EXPECT_EQ(r.u32(), 0x01020304u);
    EXPECT_EQ(r.u64(), 5u);
    EXPECT_EQ(r.u8(), 9);
    EXPECT_TRUE(r.done());
}

TEST(Serialize, VarBytesStringsAndBigints) {
    Writer w;
    w.str("hello").bigint(BigInt(1) << 200).var_bytes(Bytes{});
    Reader r(w.data());
    EXPECT_EQ(r.str(), "hello");
    EXPECT_EQ(r.bigint(), BigInt(1) << 200);
    EXPECT_TRUE(r.var_bytes().empty());
    r.expect_done();
}

TEST(Serialize, TruncationAndTrailingBytesRejected) {
    Writer w;
    w.u64(1);
    Bytes data = w.data();
    data.pop_back();
    Reader r(data);
    EXPECT_THROW(r.u64(), DecodeError);

    Bytes extra = w.data();
    extra.push_back(0);
    Reader r2(extra);
    r2.u64();
    EXPECT_THROW(r2.expect_done(), DecodeError);
}

TEST(Serialize, OversizeLengthPrefixRejected) {
    Writer w;
    w.u32(1000);
    Reader r(w.data());
    EXPECT_THROW(r.var_bytes(), DecodeError);
}

TEST(BigInt, ByteAndHexRoundTrip) {
    BigInt v("0x0123456789abcdef0011");
    EXPECT_EQ(bigint_from_bytes(bigint_to_bytes(v)), v);
    EXPECT_EQ(bigint_to_bytes(v, 16).size(), 16u);
    EXPECT_THROW(bigint_to_bytes(v, 2), std::exception);
    EXPECT_EQ(bigint_from_hex(bigint_to_hex(v)), v);
    EXPECT_TRUE(bigint_to_bytes(0).empty());
}

TEST(BigInt, ModularHelpers) {
    EXPECT_EQ(mod_floor(-3, 7), 4);
    EXPECT_EQ(mod_inverse(3, 7), 5);
    EXPECT_EQ(mod_inverse(2, 4), 0);
}
