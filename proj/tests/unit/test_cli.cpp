#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bcw/cli/cli.hpp"
#include "bcw/common/error.hpp"

using namespace bcw;
using namespace bcw::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    Run r;
    r.code = dispatch(args, o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::string cfg(const std::string& name) { return std::string(BCW_CONFIGS) + "/" + name; }

// Fresh scratch directory under the system temp dir.
fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("bcw_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::map<std::string, std::string> dir_contents(const fs::path& dir) {
    std::map<std::string, std::string> m;
    for (const auto& e : fs::directory_iterator(dir)) m[e.path().filename().string()] = slurp(e.path());
    return m;
}

} // namespace

TEST(Cli, FinalityTextOutput) {
    auto r = run({"analyze", "finality", "--q", "0.1", "--k", "6"});
    EXPECT_EQ(r.code, kOk);
    EXPECT_EQ(r.out, "0.0005914\n");
}

TEST(Cli, FinalityCsvHasHeader) {
    auto r = run({"--format", "csv", "analyze", "finality", "--q", "0.1", "--k", "6"});
    ASSERT_EQ(r.code, kOk);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "k,q,p_sum,p_beta");
    EXPECT_NE(r.out.find("6,0.1,0.000591412"), std::string::npos);
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run({}).code, kUsage);
    EXPECT_EQ(run({"bogus"}).code, kUsage);
    EXPECT_EQ(run({"analyze", "finality", "--q", "abc"}).code, kUsage);
    EXPECT_EQ(run({"--format", "xml", "analyze", "finality"}).code, kUsage);
    EXPECT_EQ(run({"mine", "--params", "mainnet"}).code, kUsage);
    EXPECT_EQ(run({"plasma", "run"}).code, kUsage);
}

TEST(Cli, DomainErrorsExitTwo) {
    auto r = run({"analyze", "finality", "--q", "1.5", "--k", "6"});
    EXPECT_EQ(r.code, kDomain);
    EXPECT_NE(r.err.find("InvalidParams"), std::string::npos);
    EXPECT_EQ(run({"chain", "validate", "--file", "/nonexistent/chain.bcw"}).code, kDomain);
    EXPECT_EQ(run({"swap", "run", "--scenario", "alice_wins"}).code, kDomain);
}

TEST(Cli, MalformedConfigExitsTwo) {
    const auto dir = scratch("badcfg");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << "{";
    EXPECT_EQ(run({"sim", "run", "--config", (dir / "bad.json").string()}).code, kDomain);
    std::ofstream(dir / "extra.json") << R"({"alice_expiry": 30, "colour": "blue"})";
    EXPECT_EQ(run({"swap", "run", "--config", (dir / "extra.json").string()}).code, kDomain);
}

TEST(Cli, SimRunIsByteReproducible) {
    const auto a = scratch("sim_a"), b = scratch("sim_b");
    auto r1 = run({"sim", "run", "--config", cfg("honest.json"), "--seed", "7", "--out", a.string()});
    auto r2 = run({"sim", "run", "--config", cfg("honest.json"), "--seed", "7", "--out", b.string()});
    ASSERT_EQ(r1.code, kOk) << r1.err;
    ASSERT_EQ(r2.code, kOk) << r2.err;
    EXPECT_EQ(r1.out, r2.out);
    const auto ca = dir_contents(a), cb = dir_contents(b);
    EXPECT_TRUE(ca.contains("manifest.json"));
    EXPECT_TRUE(ca.contains("metrics.json"));
    EXPECT_EQ(ca, cb);
}

TEST(Cli, SeedChangesOutputAndDigest) {
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    ASSERT_EQ(run({"sim", "run", "--config", cfg("selfish.json"), "--seed", "7", "--out", a.string()}).code, kOk);
    ASSERT_EQ(run({"sim", "run", "--config", cfg("selfish.json"), "--seed", "8", "--out", b.string()}).code, kOk);
    const auto ma = RunManifest::from_json(slurp(a / "manifest.json"));
    const auto mb = RunManifest::from_json(slurp(b / "manifest.json"));
    EXPECT_NE(ma.config_digest, mb.config_digest);
    EXPECT_EQ(ma.seed, 7u);
    EXPECT_EQ(mb.seed, 8u);
    EXPECT_NE(slurp(a / "metrics.json"), slurp(b / "metrics.json"));
}

TEST(Cli, DigestIgnoresArgumentPlacementAndOutDir) {
    const auto a = scratch("place_a"), b = scratch("place_b");
    ASSERT_EQ(run({"sim", "run", "--config", cfg("honest.json"), "--seed", "7", "--out", a.string()}).code, kOk);
    ASSERT_EQ(run({"--seed", "7", "--out", b.string(), "sim", "run", "--config", cfg("honest.json")}).code, kOk);
    EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
}

TEST(Cli, NoFilesWithoutOut) {
    auto r = run({"sim", "run", "--config", cfg("honest.json"), "--trace"});
    ASSERT_EQ(r.code, kOk);
    EXPECT_FALSE(r.err.empty());  // trace goes to stderr
    EXPECT_EQ(r.out.front(), '{');
}

TEST(Cli, ManifestRoundTrip) {
    RunManifest m{"sim run", std::string(64, 'a'), 42, "1.0.0", {"metrics.json", "trace.log"}};
    EXPECT_EQ(RunManifest::from_json(m.to_json()), m);
    EXPECT_THROW(RunManifest::from_json("{}"), DomainError);
    EXPECT_THROW(RunManifest::from_json("not json"), DomainError);
    auto j = m.to_json();
    j.insert(j.rfind('}'), ", \"extra\": 1");
    EXPECT_THROW(RunManifest::from_json(j), DomainError);
}

TEST(Cli, ManifestWrittenForOut) {
    const auto d = scratch("manifest");
    ASSERT_EQ(run({"mine", "--blocks", "3", "--out", d.string()}).code, kOk);
    const auto m = RunManifest::from_json(slurp(d / "manifest.json"));
    EXPECT_EQ(m.command, "mine");
    EXPECT_EQ(m.tool_version, kToolVersion);
    for (const auto& o : m.outputs) EXPECT_TRUE(fs::exists(d / o)) << o;
    EXPECT_EQ(m.config_digest.size(), 64u);
}

TEST(Cli, MineThenValidateAndTamper) {
    const auto d = scratch("mine");
    ASSERT_EQ(run({"mine", "--blocks", "4", "--out", d.string()}).code, kOk);
    const auto file = (d / "chain.bcw").string();
    auto ok = run({"chain", "validate", "--file", file});
    EXPECT_EQ(ok.code, kOk) << ok.err;
    EXPECT_NE(ok.out.find("height 4"), std::string::npos);

    auto bytes = slurp(file);
    bytes[bytes.size() / 2] ^= 1;
    const auto bad = (d / "bad.bcw").string();
    std::ofstream(bad, std::ios::binary) << bytes;
    EXPECT_EQ(run({"chain", "validate", "--file", bad}).code, kDomain);
}

TEST(Cli, PlasmaDemoMatchesGolden) {
    auto r = run({"plasma", "demo"});
    ASSERT_EQ(r.code, kOk);
    EXPECT_EQ(r.out, slurp(std::string(BCW_FIXTURES) + "/plasma_demo.golden.json"));
}

TEST(Cli, WalkthroughListsOutputs) {
    auto r = run({"tx", "walkthrough"});
    ASSERT_EQ(r.code, kOk);
    EXPECT_NE(r.out.find("Tx4: spends #3 creates #6 #7"), std::string::npos);
    EXPECT_NE(r.out.find("#5 unspent bob 9"), std::string::npos);
}

TEST(Cli, SwapExploreFlagsUnsafeConfig) {
    auto r = run({"swap", "run", "--explore", "--config", cfg("swap_unsafe.json")});
    ASSERT_EQ(r.code, kOk) << r.err;
    EXPECT_NE(r.out.find("\"mixed\": 2"), std::string::npos);
}

TEST(Cli, BridgeRunKeepsInvariant) {
    for (const char* c : {"bridge_pooled.json", "bridge_burn_mint.json"}) {
        auto r = run({"bridge", "run", "--config", cfg(c)});
        ASSERT_EQ(r.code, kOk) << r.err;
        EXPECT_NE(r.out.find("\"invariant_holds\": true"), std::string::npos) << c;
    }
}

TEST(Cli, KeygenIsDeterministic) {
    auto a = run({"keygen", "--label", "alice"});
    auto b = run({"keygen", "--label", "alice"});
    ASSERT_EQ(a.code, kOk);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("\"address\": \"1"), std::string::npos);
}

TEST(CoinAmount, Parsing) {
    EXPECT_EQ(parse_coin_amount("12"), 12 * 100'000'000LL);
    EXPECT_EQ(parse_coin_amount("0.5"), 50'000'000);
    EXPECT_EQ(parse_coin_amount("3.00000001"), 300'000'001);
    for (const char* bad : {"", "-1", "1.000000001", "abc", "1.", ".5x", "1e3"})
        EXPECT_THROW(parse_coin_amount(bad), DomainError) << bad;
}
