#include "bcw/chain/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

namespace bcw::chain {

namespace {
constexpr std::uint8_t kMagic[4] = {'B', 'C', 'W', 'C'};
}

Bytes encode_snapshot(const std::vector<Block>& blocks) {
    Writer w;
    w.raw(kMagic).u32(kSnapshotVersion).u32(static_cast<std::uint32_t>(blocks.size()));
    for (const auto& b : blocks) w.var_bytes(serialize_block(b));
    return std::move(w).take();
}

std::vector<Block> decode_snapshot(ByteView data) {
    Reader r(data);
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) throw DecodeError("not a chain snapshot");
    if (r.u32() != kSnapshotVersion) throw DecodeError("unsupported snapshot version");
    auto n = r.count(4 + kHeaderSize);
    std::vector<Block> blocks;
    blocks.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) blocks.push_back(deserialize_block(r.var_bytes(kMaxBlockSize)));
    r.expect_done();
    return blocks;
}

void save_snapshot(const std::filesystem::path& path, const std::vector<Block>& blocks) {
    auto bytes = encode_snapshot(blocks);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("IoError", "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DomainError("IoError", "short write to " + path.string());
}

std::vector<Block> load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("IoError", "cannot read " + path.string());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

} // namespace bcw::chain
