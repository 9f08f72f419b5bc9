#include "friendsim/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "friendsim");
    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = friendsim::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string &name, const std::string &content) {
    const auto path = std::filesystem::temp_directory_path() / ("friendsim_test_" + name);
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("run a built-in scenario") {
    const auto r = cli({"run", "--scenario", "ewf", "--perspective", "ensemble", "--float"});
    CHECK(r.code == 0);
    CHECK(r.out.find("P(W_L=ok & Wbar=ok) = 1/12 (0.0833") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("collapse perspective claims certain failure") {
    const auto r = cli({"run", "--scenario", "ewf", "--perspective", "fbar-collapse"});
    CHECK(r.code == 0);
    CHECK(r.out.find("P(W_L=f) = 1  [certain]") != std::string::npos);
}

TEST_CASE("Wigner scenario") {
    const auto r = cli({"run", "--scenario", "wigner"});
    CHECK(r.code == 0);
    const auto final_step = r.out.substr(r.out.find("step 10"));
    CHECK(final_step.find("1/2*sqrt(2) · |u,light,u⟩") != std::string::npos);
    CHECK(final_step.find("1/2*sqrt(2) · |d,no-light,d⟩") != std::string::npos);
}

TEST_CASE("all perspectives in declaration order") {
    const auto r = cli({"run", "--scenario", "ewf", "--perspective", "all"});
    CHECK(r.code == 0);
    const auto a = r.out.find("perspective ensemble");
    const auto b = r.out.find("perspective fbar-collapse");
    const auto c = r.out.find("perspective wbar-collapse");
    CHECK(a < b);
    CHECK(b < c);
    CHECK(c != std::string::npos);
}

TEST_CASE("JSON output is the document only and round-trips") {
    const auto r = cli({"run", "--scenario", "ewf", "--format", "json"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    CHECK(doc.dump(2) + "\n" == r.out);
    std::vector<std::string> keys;
    for (const auto &[k, v] : doc.items()) {
        keys.push_back(k);
    }
    CHECK(keys == std::vector<std::string>{"perspective", "steps", "queries"});
    const auto &step = doc["steps"][1];
    std::vector<std::string> step_keys;
    for (const auto &[k, v] : step.items()) {
        step_keys.push_back(k);
    }
    CHECK(step_keys == std::vector<std::string>{"id", "state"});
    CHECK(doc["steps"][0]["state"][0]["assignment"]["coin"] == "h");

    const auto collapse = nlohmann::ordered_json::parse(
        cli({"run", "--scenario", "ewf", "--perspective", "fbar-collapse", "--format", "json"}).out);
    CHECK(collapse["steps"][1]["probability"]["exact"] == "2/3");

    const auto bad = cli({"run", "--scenario", "ewf", "--format", "json", "--perspective", "nobody"});
    CHECK(bad.code == 64);
    CHECK(bad.out.empty());
}

TEST_CASE("JSON matches the text values") {
    const auto text = cli({"run", "--scenario", "ewf"}).out;
    const auto doc = nlohmann::ordered_json::parse(cli({"run", "--scenario", "ewf", "--format", "json"}).out);
    for (const auto &q : doc["queries"]) {
        const auto line = "[" + q["at"].get<std::string>() + "] P(" + q["event"].get<std::string>() +
                          ") = " + q["exact"].get<std::string>() + "\n";
        CHECK_MESSAGE(text.find(line) != std::string::npos, line);
    }
}

TEST_CASE("check finds the contradiction") {
    const auto r = cli({"check", "--scenario", "ewf", "--perspectives", "ensemble,fbar-collapse"});
    CHECK(r.code == 3);
    CHECK(r.out.find("CONTRADICTION on W_L=ok") != std::string::npos);
    CHECK(r.out.find("CONTRADICTION on W_L=f") == std::string::npos);

    const auto json = cli({"check", "--scenario", "ewf", "--perspectives", "ensemble,fbar-collapse", "--format", "json"});
    CHECK(json.code == 3);
    CHECK(nlohmann::ordered_json::parse(json.out)["contradictions"].size() == 1);
}

TEST_CASE("check exit codes") {
    CHECK(cli({"check", "--scenario", "ewf", "--perspectives", "ensemble,ensemble"}).code == 0);
    CHECK(cli({"check", "--scenario", "ewf", "--perspectives", "ensemble"}).code == 64);
    CHECK(cli({"check", "--scenario", "ewf", "--perspectives", "ensemble,fbar-collapse", "--event", "W_L=f"}).code == 0);
    CHECK(cli({"check", "--scenario", "ewf", "--perspectives", "ensemble,fbar-collapse", "--postselect", "none"}).code ==
          3);
    CHECK(cli({"check", "--scenario", "ewf", "--event", "W_L=maybe"}).code == 64);
    CHECK(cli({"check", "--scenario", "wigner", "--perspectives", "friend-up,friend-down"}).code == 3);
}

TEST_CASE("trace diff") {
    const auto r = cli({"trace-diff", "--scenario", "ewf", "--perspectives", "ensemble,fbar-collapse"});
    CHECK(r.code == 0);
    CHECK(r.out.find("first divergence at step 00a") != std::string::npos);
    const auto same = cli({"trace-diff", "--scenario", "ewf", "--perspectives", "ensemble,ensemble"});
    CHECK(same.out.find("identical: all 8 states agree") != std::string::npos);
    CHECK(cli({"trace-diff", "--scenario", "ewf", "--perspectives", "ensemble"}).code == 64);
}

TEST_CASE("usage and input errors") {
    CHECK(cli({}).code == 64);
    CHECK(cli({"frobnicate"}).code == 64);
    CHECK(cli({"run"}).code == 64);
    CHECK(cli({"run", "--scenario", "nope"}).code == 64);
    CHECK(cli({"run", "--scenario", "ewf", "--format", "xml"}).code == 64);
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({"scenarios"}).out.find("ewf\t") == 0);

    const auto missing = cli({"run", "/nonexistent/file.protocol"});
    CHECK(missing.code == 1);
    const auto broken = temp_file("broken.protocol", "register coin { h t\n");
    const auto parse = cli({"run", broken.string()});
    CHECK(parse.code == 1);
    CHECK(parse.err.find(":2:1: SyntaxError") != std::string::npos);
    const auto both = cli({"run", broken.string(), "--scenario", "ewf"});
    CHECK(both.code == 64);

    const auto stuck = temp_file("stuck.protocol", R"(register spin { r u d } ready r
register memo { r u d } ready r
step look measure spin recorder memo outcomes { u -> u; d -> d }
)");
    const auto step = cli({"run", stuck.string()});
    CHECK(step.code == 2);
    CHECK(step.err.find("step look") != std::string::npos);
    std::filesystem::remove(broken);
    std::filesystem::remove(stuck);
}

TEST_CASE("output file") {
    const auto path = std::filesystem::temp_directory_path() / "friendsim_test_out.json";
    const auto r = cli({"run", "--scenario", "wigner", "--format", "json", "-o", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    CHECK(nlohmann::ordered_json::parse(in)["perspective"] == "ensemble");
    std::filesystem::remove(path);
}

}
