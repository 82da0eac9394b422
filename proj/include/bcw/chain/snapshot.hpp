#pragma once

#include <filesystem>
#include <vector>

#include "bcw/chain/block.hpp"

namespace bcw::chain {

/// File layout: "BCWC" | u32 version=1 | u32 block_count | block_count * (u32 len | block bytes)
inline constexpr std::uint32_t kSnapshotVersion = 1;

Bytes encode_snapshot(const std::vector<Block>& blocks);
/// Throws DecodeError on bad magic, version, lengths or trailing bytes.
std::vector<Block> decode_snapshot(ByteView data);

void save_snapshot(const std::filesystem::path& path, const std::vector<Block>& blocks);
std::vector<Block> load_snapshot(const std::filesystem::path& path);

} // namespace bcw::chain
