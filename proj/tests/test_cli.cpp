#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "cubeslice/cli.hpp"
#include "cubeslice/error.hpp"

using namespace cubeslice;
using nlohmann::ordered_json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<ordered_json> records(const std::string& text) {
    std::vector<ordered_json> r;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) r.push_back(ordered_json::parse(line));
    return r;
}

ordered_json only(const Run& r) {
    auto recs = records(r.out);
    REQUIRE(recs.size() == 1);
    return recs[0];
}

}  // namespace

TEST_CASE("sigma") {
    const auto r = run({"sigma", "--d", "5", "--exact"});
    CHECK(r.code == cli::kOk);
    const auto j = only(r);
    CHECK(j["command"] == "sigma");
    CHECK(j["result"]["numerator"] == "115");
    CHECK(j["result"]["denominator"] == "192");
    CHECK(j["error_bounds"] == "exact");
}

TEST_CASE("verify") {
    const auto r = run({"verify", "--d", "3", "--samples", "1000", "--seed", "7"});
    CHECK(r.code == cli::kOk);
    const auto j = only(r);
    CHECK(j["result"]["violations"] == 0);
    CHECK(j["seed"] == 7);
    CHECK(j["error_bounds"].is_object());

    const auto bad = run({"verify", "--d", "3", "--samples", "10", "--tol", "-1e-3"});
    CHECK(bad.code == cli::kViolations);
}

TEST_CASE("volume") {
    const auto j = only(run({"volume", "--dir", "1,1,1", "--method", "exact"}));
    CHECK(j["result"]["value"].get<double>() == doctest::Approx(1.299038105676658).epsilon(1e-15));
    const auto d = only(run({"volume", "--dir", "diag:3", "--method", "quad"}));
    CHECK(d["result"]["value"].get<double>() == doctest::Approx(1.299038105676658).epsilon(1e-9));
    const auto a = only(run({"volume", "--dir", "axis:4:2"}));
    CHECK(a["result"]["value"] == 1.0);
    CHECK(a["result"]["direction"][1] == 1.0);
}

TEST_CASE("parse_direction") {
    CHECK(cli::parse_direction("1,2,3")[2] == 3.0);
    CHECK(cli::parse_direction("diag:4").dim() == 4);
    CHECK(cli::parse_direction("axis:3:1")[0] == 1.0);
    CHECK_THROWS_AS(cli::parse_direction("axis:3:0"), UsageError);
    CHECK_THROWS_AS(cli::parse_direction("axis:3:4"), UsageError);
    CHECK_THROWS_AS(cli::parse_direction("1,,2"), UsageError);
    CHECK_THROWS_AS(cli::parse_direction("1,x"), UsageError);
    CHECK_THROWS_AS(cli::parse_direction("diag:1"), UsageError);
}

TEST_CASE("exit codes and error records") {
    const auto none = run({});
    CHECK(none.code == cli::kUsage);
    const auto zero = run({"volume", "--dir", "0,0"});
    CHECK(zero.code == cli::kUsage);
    const auto j = only(zero);
    CHECK(j["error"]["kind"] == "usage");
    CHECK(j["error"]["reason"].is_string());
    CHECK(run({"sigma", "--d", "0"}).code == cli::kUsage);
    CHECK(run({"sigma", "--d", "abc"}).code == cli::kUsage);
    CHECK(run({"scan", "--d", "4"}).code == cli::kUsage);
    CHECK(run({"--eps", "0.5", "volume", "--dir", "1,2"}).code == cli::kUsage);

    // 30 nonzero weights, two dominant: above the exact cap, and the
    // quadrature tail can neither be truncated nor expanded analytically.
    std::string dir = "1,1";
    for (int i = 0; i < 28; ++i) dir += ",1e-13";
    const auto fail = run({"volume", "--dir", dir, "--method", "quad"});
    CHECK(fail.code == cli::kEngineFailure);
    CHECK(only(fail)["error"]["kind"] == "engine");
}

TEST_CASE("OutputRecord round trip") {
    cli::OutputRecord r;
    r.command = "volume";
    r.parameters["dir"] = "1,2";
    r.result["value"] = 1.1180339887498947;
    r.error_bounds = ordered_json{{"value", 1e-15}};
    r.seed = 12345678901234ULL;
    r.wall_time = 0.25;
    const auto j = cli::to_json(r);
    const auto back = cli::record_from_json(ordered_json::parse(j.dump()));
    CHECK(back.command == r.command);
    CHECK(back.parameters == r.parameters);
    CHECK(back.result == r.result);
    CHECK(back.error_bounds == r.error_bounds);
    CHECK(back.seed == r.seed);
    CHECK(back.wall_time == r.wall_time);
    CHECK(cli::to_json(back).dump() == j.dump());

    cli::OutputRecord plain;
    plain.command = "sigma";
    CHECK_FALSE(cli::to_json(plain).contains("wall_time_s"));
    CHECK_FALSE(cli::record_from_json(cli::to_json(plain)).wall_time.has_value());
}

TEST_CASE("every numeric record carries error bounds") {
    const std::vector<std::vector<std::string>> cmds{
        {"sigma", "--d", "7"},
        {"ratio", "--d-max", "5"},
        {"volume", "--dir", "3,2,1", "--method", "mc", "--n", "10000"},
        {"functional", "--dir", "1,1,0"},
        {"verify", "--d", "4", "--samples", "50"},
        {"maximize", "--d", "3", "--starts", "4", "--budget", "500"},
        {"scan", "--d", "2", "--resolution", "20"},
        {"ibody-check", "--d", "3", "--samples", "20", "--pairs", "20", "--check", "all"},
    };
    for (const auto& c : cmds) {
        const auto r = run(c);
        CAPTURE(c[0]);
        CHECK(r.code == cli::kOk);
        for (const auto& j : records(r.out)) {
            REQUIRE(j.contains("error_bounds"));
            CHECK((j["error_bounds"] == "exact" || j["error_bounds"].is_object()));
        }
    }
}

TEST_CASE("identical invocations give identical bytes") {
    const std::vector<std::string> args{"verify", "--d", "5", "--samples", "500", "--seed", "3"};
    CHECK(run(args).out == run(args).out);
    const std::vector<std::string> mc{"volume", "--dir", "diag:4", "--method", "mc", "--seed", "9"};
    CHECK(run(mc).out == run(mc).out);
    const std::vector<std::string> mx{"maximize", "--d", "4", "--starts", "6", "--seed", "2", "--traces"};
    CHECK(run(mx).out == run(mx).out);
}

TEST_CASE("thread count does not change output") {
    for (const auto& base : std::vector<std::vector<std::string>>{
             {"verify", "--d", "6", "--samples", "2000", "--seed", "42"},
             {"volume", "--dir", "3,1,1,0.5", "--method", "mc", "--n", "200000", "--seed", "5"},
             {"maximize", "--d", "4", "--starts", "6", "--seed", "1"},
             {"ibody-check", "--d", "4", "--samples", "200", "--pairs", "50", "--check", "all"}}) {
        auto one = base;
        one.insert(one.end(), {"--threads", "1"});
        auto eight = base;
        eight.insert(eight.end(), {"--threads", "8"});
        CAPTURE(base[0]);
        CHECK(run(one).out == run(eight).out);
    }
}

TEST_CASE("csv output") {
    const auto r = run({"--csv", "ratio", "--d-max", "3"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.rfind("d,ratio", 0) == 0);
    CHECK(r.out.find("2,3/4,0.75,2/3,true") != std::string::npos);
    const auto s = run({"--csv", "scan", "--d", "2", "--resolution", "10"});
    CHECK(s.code == cli::kOk);
    std::size_t lines = 0;
    for (char c : s.out) lines += c == '\n';
    CHECK(lines == 12);
}

TEST_CASE("--out and environment overrides") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto path = dir / "cubeslice_test_out.jsonl";
    std::filesystem::remove(path);
    const auto r = run({"sigma", "--d", "4", "--out", path.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(ordered_json::parse(line)["result"]["decimal"] == "0.666666666666667");
    in.close();

    const auto env_path = dir / "cubeslice_test_env.jsonl";
    std::filesystem::remove(env_path);
    ::setenv("CUBESLICE_OUT", env_path.string().c_str(), 1);
    ::setenv("CUBESLICE_THREADS", "3", 1);
    const auto e = run({"sigma", "--d", "3"});
    ::unsetenv("CUBESLICE_OUT");
    ::unsetenv("CUBESLICE_THREADS");
    CHECK(e.code == cli::kOk);
    CHECK(e.out.empty());
    CHECK(std::filesystem::exists(env_path));
    std::filesystem::remove(path);
    std::filesystem::remove(env_path);

    ::setenv("CUBESLICE_THREADS", "lots", 1);
    CHECK(run({"sigma", "--d", "3"}).code == cli::kUsage);
    ::unsetenv("CUBESLICE_THREADS");
}

TEST_CASE("--timing adds wall time") {
    const auto j = only(run({"--timing", "sigma", "--d", "3"}));
    CHECK(j.contains("wall_time_s"));
    CHECK_FALSE(only(run({"sigma", "--d", "3"})).contains("wall_time_s"));
}
