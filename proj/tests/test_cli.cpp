#include "doctest.h"

#include "cfl/cli.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "cfl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cfl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("schedule output is byte-identical to the golden files") {
    const std::string dir = CFL_GOLDEN_DIR;
    struct Case {
        std::vector<std::string> args;
        std::string file;
    };
    const std::vector<Case> cases = {
        {{"--n", "3", "--k", "3", "--demand", "1,2,3", "--delta", "1"}, "schedule_n3_k3_d123_delta1.txt"},
        {{"--n", "3", "--k", "3", "--demand", "1,2,1", "--delta", "1"}, "schedule_n3_k3_d121_delta1.txt"},
        {{"--n", "3", "--k", "3", "--demand", "1,1,1", "--delta", "1"}, "schedule_n3_k3_d111_delta1.txt"},
        {{"--n", "3", "--k", "4", "--demand", "1,2,3,1", "--delta", "0"}, "schedule_n3_k4_d1231_delta0.txt"},
    };
    for (const auto& c : cases) {
        CAPTURE(c.file);
        std::vector<std::string> args = {"schedule"};
        args.insert(args.end(), c.args.begin(), c.args.end());
        const Result r = run_cli(args);
        CHECK(r.code == 0);
        CHECK(r.out == read_file(dir + "/" + c.file));
    }
}

TEST_CASE("schedule json and csv") {
    const Result j = run_cli({"schedule", "--n", "3", "--k", "3", "--demand", "1,2,1", "--delta", "1", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["kappa"] == 6);
    CHECK(doc["code"]["n"] == 10);
    CHECK(doc["transmissions"].size() == 10);
    CHECK(doc["transmissions"][6]["label"] == "X_{1,1} ⊕ X_{1,2} ⊕ X_{1,3}");

    const Result c = run_cli({"schedule", "--n", "2", "--k", "2", "--demand", "1,2", "--format", "csv"});
    REQUIRE(c.code == 0);
    CHECK(c.out.rfind("index,label,support\n", 0) == 0);
}

TEST_CASE("rates in every format") {
    const Result text = run_cli({"rates", "--n", "3", "--k", "3", "--delta", "1"});
    CHECK(text.code == 0);
    CHECK(contains(text.out, "average rate: 86/27"));
    CHECK(contains(text.out, "peak rate: 10/3"));

    const Result zero = run_cli({"rates", "--n", "3", "--k", "3", "--delta", "0", "--format", "json"});
    REQUIRE(zero.code == 0);
    const auto doc = nlohmann::json::parse(zero.out);
    CHECK(doc["average_rate"]["exact"] == "17/9");
    CHECK(doc["peak_rate"]["exact"] == "2");

    const Result k4 = run_cli({"rates", "--n", "3", "--k", "4", "--delta", "0", "--format", "csv"});
    CHECK(k4.code == 0);
    CHECK(contains(k4.out, "3,4,9,27,27,identity,9,4\n"));

    const Result env = run_cli({"rates", "--n", "3", "--k", "3", "--delta", "0", "--memory", "1/6"});
    CHECK(env.code == 0);
    CHECK(contains(env.out, "envelope at M=1/6"));
    CHECK(contains(env.out, "peak 5/2"));
}

TEST_CASE("verify passes on small instances") {
    for (const char* n : {"2", "3"}) {
        const Result r = run_cli({"verify", "--n", n, "--k", n});
        CAPTURE(r.out);
        CHECK(r.code == 0);
        CHECK(contains(r.out, "0 failed"));
        CHECK(!contains(r.out, "FAIL"));
    }
}

TEST_CASE("invalid configurations exit with code 2") {
    CHECK(run_cli({"verify", "--n", "7", "--k", "7"}).code == 2);
    CHECK(run_cli({"schedule", "--n", "3", "--k", "3", "--demand", "1,2,4"}).code == 2);
    CHECK(run_cli({"schedule", "--n", "3", "--k", "3", "--demand", "1,2"}).code == 2);
    CHECK(run_cli({"rates", "--n", "4", "--k", "3"}).code == 2);
    CHECK(run_cli({"rates", "--n", "3"}).code == 2);
    CHECK(run_cli({"rates", "--n", "3", "--k", "3", "--format", "xml"}).code == 2);
    CHECK(run_cli({"rates", "--n", "3", "--k", "3", "--memory", "1/2"}).code == 2);
    CHECK(run_cli({"bogus"}).code == 2);
    CHECK(run_cli({"rates", "--n", "3", "--k", "3", "--code-table", "/nonexistent/table.csv"}).code == 2);
    const Result r = run_cli({"simulate", "--n", "3", "--k", "3", "--demand", "1,2,3", "--bits", "0"});
    CHECK(r.code == 2);
    CHECK(contains(r.err, "error"));
}

TEST_CASE("simulate sweeps every single-error pattern") {
    const Result r = run_cli({"simulate", "--n", "3", "--k", "3", "--demand", "1,2,3", "--delta", "1", "--exhaustive"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "runs: 11 (0 random + 11 exhaustive patterns)"));
    for (const char* u : {"user 1: 11/11", "user 2: 11/11", "user 3: 11/11"}) CHECK(contains(r.out, u));
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    const std::vector<std::string> args = {"simulate", "--n", "3", "--k", "3", "--demand", "1,2,1",
                                           "--delta", "1", "--trials", "200", "--seed", "11", "--format", "json"};
    const Result a = run_cli(args);
    const Result b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto doc = nlohmann::json::parse(a.out);
    CHECK(doc["runs"] == 200);
    for (const auto& s : doc["successes"]) CHECK(s == 200);
}

TEST_CASE("output file and code table from the environment") {
    const auto dir = std::filesystem::temp_directory_path() / "cfl_cli_test";
    std::filesystem::create_directories(dir);
    const auto out_path = dir / "rates.json";
    const Result r = run_cli({"rates", "--n", "3", "--k", "3", "--delta", "1", "--format", "json", "--out", out_path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(nlohmann::json::parse(read_file(out_path))["average_rate"]["exact"] == "86/27");

    const auto table_path = dir / "table.csv";
    {
        std::ofstream t(table_path);
        t << "k,d,n,source\n6,5,30,hand\n3,5,15,hand\n";
    }
    const Result before = run_cli({"rates", "--n", "3", "--k", "3", "--delta", "2", "--format", "json"});
    REQUIRE(before.code == 0);
    CHECK(nlohmann::json::parse(before.out)["average_rate"]["label"] == "upper bound");
    ::setenv("CFL_CODE_TABLE", table_path.string().c_str(), 1);
    const Result after = run_cli({"rates", "--n", "3", "--k", "3", "--delta", "2", "--format", "json"});
    ::unsetenv("CFL_CODE_TABLE");
    REQUIRE(after.code == 0);
    CHECK(nlohmann::json::parse(after.out)["average_rate"]["label"] == "optimal");
    std::filesystem::remove_all(dir);
}

TEST_CASE("help exits cleanly") {
    const Result r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "simulate"));
}
