#include "rcrt/cli.hpp"

#include "rcrt/serialize.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace rcrt;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("analyze emits the staircase with decimal strings") {
    CliRun r = run({"analyze", "--moduli", "165,341,264"});
    REQUIRE(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["lcm"] == "40920");
    REQUIRE(doc["steps"].size() == 6);
    CHECK(doc["steps"][0]["K"] == "165");
    CHECK(doc["steps"][0]["delta4"] == "165");
    CHECK(doc["steps"][5]["K"] == "10571");
    CHECK(doc["steps"][5]["delta4"] == "11");
}

TEST_CASE("capacity") {
    CliRun r = run({"capacity", "--moduli", "10,7", "--delta4", "3"});
    REQUIRE(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["capacity"] == "20");

    CliRun bad = run({"capacity", "--moduli", "10,7", "--delta4", "99"});
    CHECK(bad.code == 1);
    CHECK(bad.err.rfind("domain:", 0) == 0);
}

TEST_CASE("factored moduli form is accepted and echoed") {
    CliRun flat = run({"analyze", "--moduli", "350,450,550,650"});
    CliRun factored = run({"analyze", "--gamma", "50", "--coprime-parts", "7,9,11,13"});
    REQUIRE(factored.code == 0);
    Json fd = Json::parse(factored.out);
    CHECK(fd["gamma"] == "50");
    CHECK(fd["steps"] == Json::parse(flat.out)["steps"]);

    CliRun cap = run({"capacity", "--gamma", "50", "--coprime-parts", "7,9,11,13",
                      "--delta4", "50"});
    CliRun cap_flat = run({"capacity", "--moduli", "350,450,550,650", "--delta4", "50"});
    REQUIRE(cap.code == 0);
    CHECK(Json::parse(cap.out)["capacity"] == Json::parse(cap_flat.out)["capacity"]);

    // non-coprime parts are rejected; 15 and 24 share a factor
    CliRun bad = run({"analyze", "--gamma", "11", "--coprime-parts", "15,31,24"});
    CHECK(bad.code == 1);
    CHECK(bad.err.rfind("domain:", 0) == 0);

    CliRun both = run({"analyze", "--moduli", "10,7", "--gamma", "2",
                       "--coprime-parts", "5,7"});
    CHECK(both.code == 2);
}

TEST_CASE("decode-multi reproduces the worked example") {
    const char* path = "cli_table.json";
    {
        std::ofstream f(path);
        f << R"({"rows": [["64","247","270"],["206","192","213"],)"
          << R"(["7","348","370"],["462","48","62"]]})";
    }
    CliRun r = run({"decode-multi", "--gamma", "50", "--coprime-parts", "7,9,11,13",
                    "--delta", "4", "--table", path});
    std::remove(path);
    REQUIRE(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["estimates"] == Json::array({"1110", "1996", "2016"}));
    CHECK(doc["profile"]["sum_folding"] == "102");
    CHECK(doc["profile"]["center"] == "34");
    CHECK(doc["profile"]["polynomial"] == Json::array({"1", "0", "-108", "432"}));
    CHECK(doc["folding"] == Json::array({"22", "40", "40"}));
}

TEST_CASE("decode-single closed form") {
    CliRun r = run({"decode-single", "--method", "closed", "--gamma", "50",
                    "--coprime-parts", "7,9,11,13", "--residues", "64,206,13,462"});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["estimate"] == "1111");
}

TEST_CASE("decode-single search with a saved list") {
    const char* path = "cli_error_list.json";
    CliRun build = run({"build-error-list", "--moduli", "10,7", "--delta4", "7",
                        "--out", path});
    REQUIRE(build.code == 0);
    CHECK(Json::parse(build.out)["tau"] == "9");

    // X = 5 with errors (+1, +1): residues (6, 6) over sorted moduli (7, 10)
    CliRun fresh = run({"decode-single", "--method", "search", "--moduli", "10,7",
                        "--residues", "6,6", "--delta4", "7", "--k", "7"});
    CliRun reused = run({"decode-single", "--method", "search", "--moduli", "10,7",
                         "--residues", "6,6", "--error-list", path, "--k", "7"});
    std::remove(path);
    REQUIRE(fresh.code == 0);
    REQUIRE(reused.code == 0);
    CHECK(Json::parse(fresh.out)["estimate"] == "6");
    CHECK(Json::parse(fresh.out)["estimate"] == Json::parse(reused.out)["estimate"]);
}

TEST_CASE("select-moduli is deterministic per seed") {
    std::vector<std::string> args = {"select-moduli", "--beta",   "10",  "--count",
                                     "2",             "--delta4", "4",   "--k-target",
                                     "50000",         "--trials", "100", "--seed",
                                     "31"};
    CliRun a = run(args);
    CliRun b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);  // byte-identical
    Json doc = Json::parse(a.out);
    CHECK(doc["seed"] == "31");
}

TEST_CASE("simulate requires a seed and echoes it") {
    CliRun missing = run({"simulate", "--freqs", "1110,1995,2016", "--gamma", "50",
                          "--coprime-parts", "7,9,11,13", "--delta", "4", "--trials",
                          "1"});
    CHECK(missing.code == 2);

    std::vector<std::string> args = {
        "simulate", "--freqs",         "1110,1995,2016", "--gamma", "50",
        "--coprime-parts", "7,9,11,13", "--noise-mode",  "perturb", "--delta",
        "4",        "--trials",        "3",              "--seed",  "9"};
    CliRun a = run(args);
    REQUIRE(a.code == 0);
    Json doc = Json::parse(a.out);
    CHECK(doc["seed"] == "9");
    CHECK(doc["trials"].size() == 3);
    CliRun b = run(args);
    CHECK(a.out == b.out);

    args.push_back("--format");
    args.push_back("csv");
    CliRun csv = run(args);
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("trial,tone,truth,estimate,abs_error,decoded,success", 0) == 0);
}

TEST_CASE("prob-bound") {
    CliRun r = run({"prob-bound", "--beta", "16", "--count", "4", "--delta4", "16",
                    "--k", "1000000", "--p-max", "65521"});
    REQUIRE(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["informative"] == true);
    double bound = std::stod(doc["bound_simple"].get<std::string>());
    CHECK(bound > 0.999);
    CHECK(bound <= 1.0);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"analyze"}).code == 2);  // missing --moduli
    CHECK(run({"decode-single", "--method", "search", "--residues", "1,2"}).code == 2);
}

TEST_CASE("domain failures exit with 1 and a typed prefix") {
    CliRun r = run({"decode-multi", "--gamma", "50", "--coprime-parts", "7,9,49",
                    "--delta", "4", "--table", "nope.json"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("domain:", 0) == 0);  // parts 7 and 49 share a factor
}
