#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bcw::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// Exit statuses of `dispatch`.
enum ExitCode : int { kOk = 0, kUsage = 1, kDomain = 2, kInternal = 3 };

/// Written as manifest.json next to the artifacts of a run with --out.
/// config_digest covers the config file bytes and every argument except the
/// output directory, so equal manifests mean equal inputs.
struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::string tool_version;
    std::vector<std::string> outputs;  // relative to the output directory

    std::string to_json() const;
    /// Throws DomainError("BadManifest").
    static RunManifest from_json(std::string_view text);

    bool operator==(const RunManifest&) const = default;
};

/// Parses args (without the program name), runs one subcommand, prints its
/// primary output to `out` and diagnostics to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "12", "0.5", "3.00000001" in whole coins to base units. Throws
/// DomainError("BadAmount").
std::int64_t parse_coin_amount(std::string_view text);

} // namespace bcw::cli
