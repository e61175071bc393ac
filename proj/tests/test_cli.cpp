#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rrdps/cli.hpp"

using rrdps::cli::run;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s)
{
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        v.push_back(line);
    return v;
}

std::vector<std::string> fields(const std::string& line)
{
    std::vector<std::string> v;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');)
        v.push_back(f);
    return v;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::filesystem::path tmp(const std::string& name)
{
    const std::filesystem::path dir = std::filesystem::path(RRDPS_TEST_TMPDIR) / "cli";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("number formatting")
{
    using rrdps::cli::format_number;
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(0.6) == "0.6");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(1e-7) == "1e-07");
    CHECK(rrdps::cli::pack_bits_hex({1, 0, 1, 0, 0, 0, 0, 1, 1}) == "a18");
    CHECK(rrdps::cli::pack_bits_hex({}).empty());
}

TEST_CASE("bounds")
{
    const Result r = call({"bounds", "--L", "6", "--nu", "1", "2", "3", "--e-points", "101"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 304);
    CHECK(lines[0] == "L,nu,e,F,F_segment,lambda_opt,branch");

    bool found = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = fields(lines[i]);
        REQUIRE(f.size() == 7);
        if (f[1] == "3" && std::stod(f[2]) == 0.3) {
            CHECK(std::stod(f[3]) == doctest::Approx(0.6).epsilon(1e-12));
            found = true;
        }
        if (f[1] == "3" && f[2] == "0") {
            CHECK(f[5] == "limit");
            CHECK(std::stod(f[3]) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        }
    }
    CHECK(found);

    const Result def = call({"bounds", "--L", "6"});
    CHECK(lines_of(def.out).size() == 304);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(call({}).code == 2);
    CHECK(call({"nonsense"}).code == 2);
    CHECK(call({"bounds", "--L", "6", "--nu", "5"}).code == 2);
    CHECK(call({"bounds", "--L", "2"}).code == 2);
    CHECK(call({"bounds", "--e-max", "0.7"}).code == 2);
    CHECK(call({"keyrate", "--eta", "0"}).code == 2);
    CHECK(call({"keyrate", "--L", "6", "--nu-th", "5"}).code == 2);
    CHECK(call({"simulate", "--channel", "bogus"}).code == 2);
    CHECK(call({"simulate", "--rounds", "0"}).code == 2);
    CHECK(call({"verify", "--level", "medium"}).code == 2);
    const Result r = call({"bounds", "--L", "x"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("keyrate")
{
    SUBCASE("single transmission gives both curves")
    {
        const Result r = call({"keyrate", "--L", "6", "--eta", "0.5"});
        REQUIRE(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 3);
        CHECK(lines[0] == "eta,monitored,L,nu_th,mu,Q,e_src,delta_tag,EC,PA,rate_per_pulse");
        const auto mon = fields(lines[1]);
        const auto unmon = fields(lines[2]);
        CHECK(mon[1] == "1");
        CHECK(unmon[1] == "0");
        CHECK(std::stod(mon.back()) >= std::stod(unmon.back()));
    }
    SUBCASE("no key at high error")
    {
        const Result r = call({"keyrate", "--L", "6", "--e", "0.4", "--eta-points", "3"});
        REQUIRE(r.code == 0);
        const auto lines = lines_of(r.out);
        REQUIRE(lines.size() == 7);
        for (std::size_t i = 1; i < lines.size(); ++i)
            CHECK(fields(lines[i]).back() == "0");
    }
    SUBCASE("one curve only")
    {
        const Result r = call({"keyrate", "--L", "6", "--eta", "0.5", "--unmonitored"});
        REQUIRE(r.code == 0);
        CHECK(lines_of(r.out).size() == 2);
    }
}

TEST_CASE("simulate")
{
    const std::vector<std::string> args{"simulate", "--L", "6", "--rounds", "20000", "--seed", "3",
                                        "--channel", "phase_flip", "--channel-param", "0.015"};
    const Result a = call(args);
    REQUIRE(a.code == 0);
    const json doc = json::parse(a.out);
    CHECK(doc["model_comparison"]["e_expected"].get<double>() == doctest::Approx(0.02955));
    CHECK(doc["manifest"]["seed"].get<int>() == 3);
    CHECK(doc["sim_stats"]["emitted"].get<int>() == 20000);
    CHECK(doc.contains("rate_estimate"));
    CHECK(a.out == call(args).out);

    const Result ideal = call({"simulate", "--rounds", "20000", "--seed", "4"});
    REQUIRE(ideal.code == 0);
    const json d2 = json::parse(ideal.out);
    CHECK(d2["sim_stats"]["e_emp"].get<double>() == 0.0);
    CHECK(d2["sim_stats"]["sifted_mismatches"].get<int>() == 0);
}

TEST_CASE("file outputs are byte-identical across runs")
{
    const std::string path = tmp("bounds.csv").string();
    REQUIRE(call({"bounds", "--L", "6", "--e-points", "11", "--out", path}).code == 0);
    const std::string first = slurp(path);
    const std::string first_manifest = slurp(path + ".manifest.json");
    REQUIRE(call({"bounds", "--L", "6", "--e-points", "11", "--out", path}).code == 0);
    CHECK(first == slurp(path));
    CHECK(first_manifest == slurp(path + ".manifest.json"));
    CHECK(json::parse(first_manifest)["subcommand"] == "bounds");

    CHECK(call({"bounds", "--out", (tmp("missing") / "x.csv").string()}).code == 2);
}

TEST_CASE("configuration file")
{
    const auto cfg = tmp("bounds.ini");
    {
        std::ofstream f(cfg);
        f << "[bounds]\nL=5\ne-points=2\n";
    }
    const Result r = call({"--config", cfg.string(), "bounds"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 5);
    CHECK(fields(lines[1])[0] == "5");
}

TEST_CASE("verify fast")
{
    const Result r = call({"verify", "--level", "fast"});
    CHECK(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["pass"].get<bool>());
    CHECK(doc["checks"].size() > 5);
}
