#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "dampflow/cli.hpp"
#include "dampflow/errors.hpp"
#include "dampflow/io.hpp"

using namespace dampflow;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("dampflow_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST(Io, NumberFormatAndHash) {
    EXPECT_EQ(io::num(0.1), "0.10000000000000001");
    EXPECT_EQ(io::num(2.0), "2");
    EXPECT_EQ(io::fnv1a(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(io::fnv1a("a"), 0xaf63dc4c8601ec8cull);
    EXPECT_EQ(io::hash_hex("a"), "af63dc4c8601ec8c");
}

TEST(Io, AtomicWriteAndCsvRoundTrip) {
    const fs::path dir = scratch("io");
    const fv::Grid1D g{-1.0, 1.0, 3};
    fv::FluidState s;
    s.rho = {0.0, 1.0 / 3.0, 2.5e-300};
    s.mom = {0.0, -0.1, 1e-301};
    io::write_atomic(dir / "sub" / "s.csv", io::snapshot_csv(g, s));
    EXPECT_FALSE(fs::exists(dir / "sub" / "s.csv.tmp"));
    const auto cols = io::parse_snapshot_csv(io::read_file(dir / "sub" / "s.csv"));
    EXPECT_EQ(cols.rho, s.rho);
    EXPECT_EQ(cols.mom, s.mom);
    EXPECT_EQ(cols.x[1], g.center(1));
    EXPECT_THROW(io::parse_snapshot_csv("x,rho\n1,2\n"), DomainError);
    EXPECT_THROW(io::parse_snapshot_csv("x,rho,mom\n1,2\n"), DomainError);
    EXPECT_THROW(io::parse_snapshot_csv("x,rho,mom\n1,2,abc\n"), DomainError);
}

TEST(Cli, Constants) {
    const auto r = call({"constants", "--gamma", "2", "--nu", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json j = json::parse(r.out);
    EXPECT_DOUBLE_EQ(j["kappa"].get<double>(), 0.125);
    EXPECT_NEAR(j["B0"].get<double>(), 0.08333, 1e-5);
    EXPECT_NEAR(j["lambda"].get<double>(), 0.5, 1e-15);
    for (const char* key : {"C1", "C2", "A0", "k", "mu", "phi", "mu_star", "theta_star", "omega"})
        EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(call({}).code, 1);
    EXPECT_EQ(call({"frobnicate"}).code, 1);
    EXPECT_EQ(call({"constants", "--gamma", "abc"}).code, 1);
    EXPECT_EQ(call({"constants", "--gamma", "0.9"}).code, 1);
    EXPECT_EQ(call({"constants", "--config", "/nonexistent/file.json"}).code, 1);
    EXPECT_EQ(call({"rates"}).code, 1);
    EXPECT_EQ(call({"simulate", "--limiter", "superbee", "--end-time", "1", "--cells", "50"}).code, 1);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const fs::path dir = scratch("config");
    io::write_atomic(dir / "c.json", R"({"gamma": 3.0, "nu": 0.5})");
    auto r = call({"constants", "--config", (dir / "c.json").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_DOUBLE_EQ(json::parse(r.out)["gamma"].get<double>(), 3.0);
    EXPECT_DOUBLE_EQ(json::parse(r.out)["nu"].get<double>(), 0.5);
    r = call({"constants", "--config", (dir / "c.json").string(), "--gamma", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_DOUBLE_EQ(json::parse(r.out)["gamma"].get<double>(), 2.0);
    EXPECT_DOUBLE_EQ(json::parse(r.out)["nu"].get<double>(), 0.5);
    io::write_atomic(dir / "bad.json", R"({"gama": 3.0})");
    EXPECT_EQ(call({"constants", "--config", (dir / "bad.json").string()}).code, 1);
}

TEST(Cli, OracleCheckIsDeterministic) {
    const fs::path dir = scratch("oracles");
    const std::vector<std::string> args = {"lemma-check", "--gamma", "1.5", "--samples", "20000",
                                           "--seed", "11", "--h-samples", "500", "--out", dir.string()};
    const auto a = call(args);
    ASSERT_EQ(a.code, 0) << a.err << a.out;
    std::string first;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.path().filename() == "report.json") first = io::read_file(e.path());
    const auto b = call(args);
    EXPECT_EQ(a.out, b.out);
    std::string second;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.path().filename() == "report.json") second = io::read_file(e.path());
    EXPECT_FALSE(first.empty());
    EXPECT_EQ(first, second);
    EXPECT_EQ(json::parse(a.out)["verdicts"]["omega2_ratio"], "PASS");
    const auto c = call({"lemma-check", "--gamma", "1.5", "--samples", "20000", "--seed", "12",
                         "--h-samples", "500", "--out", dir.string()});
    EXPECT_NE(a.out, c.out);
}

TEST(Cli, PipelineThenRates) {
    const fs::path dir = scratch("sim");
    const std::vector<std::string> args = {"full-pipeline", "--gamma", "2", "--cells", "400",
                                           "--end-time", "1000", "--out", dir.string()};
    const auto s = call(args);
    ASSERT_EQ(s.code, 0) << s.err << s.out;
    const json summary = json::parse(s.out);
    const fs::path run = summary["run_directory"].get<std::string>();
    EXPECT_TRUE(fs::exists(run / "manifest.json"));
    EXPECT_EQ(summary["verdicts"]["mass_conservation"], "PASS");
    const std::string csv = io::read_file(run / "rates.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "quantity,t_lo,t_hi,slope,stderr,theory_rate,verdict");

    const auto r = call({"rates", "--run", run.string()});
    ASSERT_EQ(r.code, 0) << r.err << r.out;
    EXPECT_EQ(io::read_file(run / "rates.csv"), csv);

    // same config, same directory and bytes
    const auto again = call(args);
    EXPECT_EQ(again.out, s.out);

    // freeze every snapshot to the first one: no decay, so the rates fail
    const json manifest = json::parse(io::read_file(run / "manifest.json"));
    const std::string first = io::read_file(run / manifest["snapshots"][0]["file"].get<std::string>());
    for (const auto& snap : manifest["snapshots"])
        io::write_atomic(run / snap["file"].get<std::string>(), first);
    EXPECT_EQ(call({"rates", "--run", run.string()}).code, 2);
}

TEST(Cli, DomainTooSmallIsUsageError) {
    const fs::path dir = scratch("small");
    const auto r = call({"simulate", "--cells", "100", "--end-time", "1000", "--x-max", "5",
                         "--out", dir.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("x_max"), std::string::npos);
}
