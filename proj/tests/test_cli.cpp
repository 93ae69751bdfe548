#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "flatlab/cli.hpp"
#include "flatlab/errors.hpp"
#include "flatlab/io.hpp"

using namespace flatlab;
namespace fs = std::filesystem;

namespace {

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"flatlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path work_dir() {
    const auto dir = fs::temp_directory_path() / "flatlab_cli_test";
    fs::create_directories(dir);
    return dir;
}

nlohmann::json scrubbed(const fs::path& file) {
    auto j = nlohmann::json::parse(read_text_file(file));
    if (j.contains("per_eps"))
        for (auto& r : j["per_eps"]) r.erase("wall_ms");
    return j;
}

}  // namespace

TEST_CASE("artifact round trips preserve every bit") {
    const Net net = build_net(2, 0.8, 19);
    const Net back = net_from_json(net_to_json(net));
    REQUIRE(back.count() == net.count());
    for (int i = 0; i < net.count(); ++i) CHECK(back.centers[i].x == net.centers[i].x);
    CHECK(net_to_json(back) == net_to_json(net));

    const ThreadSystem ts = build_threads(place_endpoints(net));
    const ThreadSystem ts_back = threads_from_json(threads_to_json(ts));
    CHECK(threads_to_json(ts_back) == threads_to_json(ts));
    CHECK(ts_back.rho == ts.rho);

    const TunnelProfile p = generate_profile(3, 0.02, 0.1, 0.5, coarse_profile_options());
    const TunnelProfile p_back = profile_from_json(profile_to_json(p));
    CHECK(profile_to_json(p_back) == profile_to_json(p));
}

TEST_CASE("schema mismatches are rejected") {
    const Net net = build_net(2, 1.4, 3);
    CHECK_THROWS_AS(threads_from_json(net_to_json(net)), ValidationError);
    CHECK_THROWS_AS(net_from_json("{\"schema\":\"net/2\"}"), ValidationError);
    CHECK_THROWS_AS(net_from_json("not json"), ValidationError);
}

TEST_CASE("subcommand pipeline and exit codes") {
    const auto dir = work_dir();
    const std::string out = (dir / "runs").string();

    SUBCASE("net -> threads -> query") {
        CHECK(cli({"--out", out, "--stamp", "a", "net", "--m", "2", "--eps", "1.1",
                   "--seed", "5"}) == 0);
        CHECK(cli({"--out", out, "--stamp", "a", "threads", "--net",
                   out + "/a/net.json"}) == 0);
        // x == y prints 0 and succeeds
        CHECK(cli({"--out", out, "--stamp", "a", "query", "--threads",
                   out + "/a/threads.json", "--x", "1,0,0", "--y", "1,0,0"}) == 0);
        // off-sphere input is a validation error
        CHECK(cli({"--out", out, "--stamp", "a", "query", "--threads",
                   out + "/a/threads.json", "--x", "1,1,0", "--y", "1,0,0"}) == 2);
        // dump of endpoint pair distances
        const std::string dump = (dir / "pairs.csv").string();
        CHECK(cli({"--out", out, "--stamp", "a", "query", "--threads",
                   out + "/a/threads.json", "--x", "1,0,0", "--y", "0,1,0",
                   "--dump", dump}) == 0);
        CHECK(read_text_file(dump).rfind("i,j,d_sphere,d_hybrid\n", 0) == 0);
    }
    SUBCASE("unknown flags and bad inputs exit 2") {
        CHECK(cli({"net", "--nope", "1"}) == 2);
        CHECK(cli({"--out", out, "net", "--m", "2", "--eps", "4.0"}) == 2);
        CHECK(cli({"--out", out, "query", "--threads", "/nonexistent.json", "--x", "1,0,0",
                   "--y", "1,0,0"}) == 2);
    }
    SUBCASE("profile feasibility errors exit 3, parameter errors exit 2") {
        CHECK(cli({"--out", out, "--stamp", "p", "profile", "--m", "3", "--rho0", "0.05",
                   "--rho", "0.3", "--L", "0.15"}) == 3);  // below minimal feasible length
        CHECK(cli({"--out", out, "--stamp", "p", "profile", "--m", "3", "--rho0", "0.2",
                   "--rho", "0.1", "--L", "1"}) == 2);  // rho0 >= rho
    }
    SUBCASE("budget with infeasible heights exits 2 naming the height") {
        CHECK(cli({"--out", out, "--stamp", "b", "profile", "--m", "3", "--rho0", "0.02",
                   "--rho", "0.1", "--L", "1"}) == 0);
        CHECK(cli({"--out", out, "--stamp", "b", "budget", "--profile",
                   out + "/b/profile.json", "--diam", "0.04"}) == 2);
        CHECK(cli({"--out", out, "--stamp", "b", "budget", "--profile",
                   out + "/b/profile.json"}) == 0);
    }
}

TEST_CASE("verify is deterministic modulo timing fields") {
    const auto dir = work_dir();
    const std::string out = (dir / "det").string();
    const std::string cfg = (dir / "cfg.txt").string();
    write_text_file(cfg, "m=2\nschedule=0.8,0.6\nseeds=4,5\nsample_size=200\n");

    CHECK(cli({"--out", out, "--stamp", "r1", "verify", "--config", cfg}) == 0);
    CHECK(cli({"--out", out, "--stamp", "r2", "verify", "--config", cfg}) == 0);
    CHECK(scrubbed(fs::path(out) / "r1" / "report.json") ==
          scrubbed(fs::path(out) / "r2" / "report.json"));

    SUBCASE("aggregation") {
        CHECK(cli({"--out", out, "--stamp", "agg", "report", "--runs", out}) == 0);
        const std::string csv = read_text_file(fs::path(out) / "agg" / "combined.csv");
        CHECK(csv.rfind("eps,N,K,", 0) == 0);
        // two runs x two schedule entries
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    }
}

TEST_CASE("verify config overrides") {
    const auto dir = work_dir();
    const std::string out = (dir / "ovr").string();
    // --set beats the file; --json beats the file; env seed beats both
    const std::string cfg = (dir / "cfg2.txt").string();
    write_text_file(cfg, "m=2\nschedule=0.9\nseeds=4\nsample_size=50\n");
    CHECK(cli({"--out", out, "--stamp", "s", "verify", "--config", cfg, "--set",
               "sample_size=60"}) == 0);
    auto j = nlohmann::json::parse(read_text_file(fs::path(out) / "s" / "report.json"));
    CHECK(j["sample_size"].get<int>() == 60);
    CHECK(cli({"--out", out, "--stamp", "t", "verify", "--config", cfg, "--json",
               "{\"sample_size\": 70}"}) == 0);
    j = nlohmann::json::parse(read_text_file(fs::path(out) / "t" / "report.json"));
    CHECK(j["sample_size"].get<int>() == 70);
    // malformed config exits 2
    CHECK(cli({"--out", out, "verify", "--config", cfg, "--set", "schedule=0.5,0.7"}) == 2);
}
