#include "bcw/account/call_data.hpp"

#include "bcw/common/serialize.hpp"

namespace bcw::account {

Bytes CallData::encode() const {
    Writer w;
    w.str(function).u32(static_cast<std::uint32_t>(args.size()));
    for (const auto& a : args) w.var_bytes(a);
    return std::move(w).take();
}

CallData CallData::decode(ByteView data) {
    Reader r(data);
    CallData c;
    c.function = r.str(256);
    auto n = r.count(4);
    for (std::uint32_t i = 0; i < n; ++i) c.args.push_back(r.var_bytes());
    r.expect_done();
    return c;
}

Bytes arg_u64(std::uint64_t v) {
    Writer w;
    w.u64(v);
    return std::move(w).take();
}

Bytes arg_address(const crypto::Address& a) { return {a.payload.begin(), a.payload.end()}; }

std::uint64_t as_u64(ByteView b) {
    if (b.size() != 8) throw DomainError("BadArgument", "expected 8-byte integer");
    Reader r(b);
    return r.u64();
}

crypto::Address as_address(ByteView b) {
    if (b.size() != 20) throw DomainError("BadArgument", "expected 20-byte address");
    return crypto::Address::from_payload(b);
}

} // namespace bcw::account
