#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

namespace {

struct Out {
    int code;
    std::string out, err;
};

Out run(std::vector<std::string> args) {
    args.insert(args.begin(), "fermi");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    int c = fermi::cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
    return {c, o.str(), e.str()};
}

const std::string kData = FERMI_TEST_DATA;

} // namespace

TEST_CASE("cli exit codes") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"irreducible", kData + "/free_23.json"}).code == 2);  // --lambda missing
    auto pre = run({"free-checks", kData + "/random_23.json"});
    CHECK(pre.code == 1);
    CHECK(nlohmann::json::parse(pre.out)["failed_check"] == "precondition");
    auto red = run({"irreducible", "--lambda", "0", kData + "/free_23.json"});
    CHECK(red.code == 0);  // lambda = [V] for the free operator: reducible is the expected verdict
    CHECK(nlohmann::json::parse(red.out)["result"]["verdict"] == "reducible");
}

TEST_CASE("cli normalized output is stable and omits timings") {
    auto a = run({"--normalize", "charpoly", kData + "/free_11.json"});
    auto b = run({"--normalize", "charpoly", kData + "/free_11.json"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto j = nlohmann::json::parse(a.out);
    CHECK_FALSE(j.contains("timings"));
    CHECK(j["ok"] == true);
    CHECK(run({"charpoly", kData + "/free_11.json"}).out.find("timings") != std::string::npos);
}
