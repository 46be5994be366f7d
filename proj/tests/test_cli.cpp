#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "renewal/cli.hpp"

namespace fs = std::filesystem;
using namespace renewal;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("renewalx-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int counter;
};
int TempDir::counter = 0;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("law spec parsing") {
    CHECK(parse_law_spec("builtin:ssrw:256").horizon() == 256);
    CHECK(parse_law_spec("builtin:geometric:0.5:128").mean() == 2.0);
    CHECK(parse_law_spec("builtin:deterministic:64").pmf(1) == 1.0);
    const GapLaw reg = parse_law_spec("builtin:regvarying:0.7:128:0.0:1.0:0.0");
    CHECK(reg.alpha() == 0.7);
    CHECK_THROWS_AS(parse_law_spec("builtin:nope:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_law_spec("builtin:geometric:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_law_spec("/no/such/file.json"), std::invalid_argument);
}

TEST_CASE("law -> mass -> intersect pipeline through files") {
    TempDir dir;
    CHECK(cli_main({"law", "--spec", "builtin:geometric:0.5:256", "--out",
                    dir.file("law.json")}) == kCliOk);
    const GapLaw law = parse_law_spec(dir.file("law.json"));
    CHECK(law.mean() == 2.0);

    CHECK(cli_main({"mass", "--law", dir.file("law.json"), "--n", "128",
                    "--method", "naive", "--out", dir.file("mass.csv")}) == kCliOk);
    const std::string csv = slurp(dir.file("mass.csv"));
    CHECK(csv.rfind("n,u,U\n", 0) == 0);
    CHECK(csv.find("\r") == std::string::npos);  // LF endings
    CHECK(csv.find("0.5") != std::string::npos);

    CHECK(cli_main({"intersect", "--tau", dir.file("law.json"), "--sigma",
                    dir.file("law.json"), "--n", "128", "--out",
                    dir.file("model")}) == kCliOk);
    const std::string model_csv = slurp(dir.file("model") + "/model.csv");
    CHECK(model_csv.rfind("n,w,g,G,v,psi_star\n", 0) == 0);
    const std::string cls = slurp(dir.file("model") + "/classify.json");
    CHECK(cls.find("\"recurrent\": true") != std::string::npos);
}

TEST_CASE("verify: pass/fail wiring and determinism") {
    TempDir dir;
    SUBCASE("geometric-exact passes with exit 0 and byte-stable outputs") {
        const std::vector<std::string> args = {
            "verify", "--case", "geometric-exact", "--nmax", "512",
            "--grid", "geometric:8:512:2", "--out", dir.file("out")};
        CHECK(cli_main(args) == kCliOk);
        const std::string first = slurp(dir.file("out") + "/geometric-exact.csv");
        CHECK(cli_main(args) == kCliOk);
        CHECK(slurp(dir.file("out") + "/geometric-exact.csv") == first);
        const std::string verdict =
            slurp(dir.file("out") + "/geometric-exact.verdict.json");
        CHECK(verdict.find("\"pass\": true") != std::string::npos);
    }
    SUBCASE("unknown case is a usage error") {
        CHECK(cli_main({"verify", "--case", "no-such-case"}) == kCliBadConfig);
    }
    SUBCASE("list mode") {
        CHECK(cli_main({"verify", "--list"}) == kCliOk);
    }
    SUBCASE("nmax beyond sanity yields horizon overflow") {
        // jain-pruitt at nmax 16 with grid start 1024 -> grid invalid
        CHECK(cli_main({"verify", "--case", "jain-pruitt", "--nmax", "16"}) ==
              kCliInapplicable);
    }
}

TEST_CASE("simulate: determinism and statistics selection") {
    TempDir dir;
    const std::vector<std::string> args = {
        "simulate", "--tau", "builtin:geometric:0.5:256", "--sigma",
        "builtin:geometric:0.5:256", "--statistic", "rho-tail", "--grid",
        "geometric:2:32:2", "--samples", "20000", "--seed", "42",
        "--horizon", "256", "--out", dir.file("sim.json")};
    CHECK(cli_main(args) == kCliOk);
    const std::string first = slurp(dir.file("sim.json"));
    CHECK(cli_main(args) == kCliOk);
    CHECK(slurp(dir.file("sim.json")) == first);  // byte-identical rerun
    CHECK(first.find("\"statistic\": \"rho1-tail\"") != std::string::npos);

    SUBCASE("statistic preconditions map to the inapplicable exit code") {
        // hitting-index with infinite-mean sigma
        CHECK(cli_main({"simulate", "--tau", "builtin:geometric:0.5:256",
                        "--sigma", "builtin:ssrw:256", "--statistic",
                        "hitting-index", "--samples", "100", "--seed", "1"}) ==
              kCliInapplicable);
    }
    SUBCASE("missing sigma is a usage error") {
        CHECK(cli_main({"simulate", "--tau", "builtin:ssrw:256", "--statistic",
                        "rho-mean", "--samples", "10", "--seed", "1"}) ==
              kCliBadConfig);
    }
    SUBCASE("unknown statistic is a usage error") {
        CHECK(cli_main({"simulate", "--tau", "builtin:ssrw:256", "--sigma",
                        "builtin:ssrw:256", "--statistic", "nope", "--samples",
                        "10", "--seed", "1"}) == kCliBadConfig);
    }
}

TEST_CASE("mass horizon overflow exit code") {
    TempDir dir;
    CHECK(cli_main({"mass", "--law", "builtin:ssrw:64", "--n", "128", "--out",
                    dir.file("m.csv")}) == kCliHorizonOverflow);
}

TEST_CASE("usage errors") {
    CHECK(cli_main({}) == kCliBadConfig);
    CHECK(cli_main({"law", "--spec", "builtin:ssrw:64"}) == kCliBadConfig);
    CHECK(cli_main({"frobnicate"}) == kCliBadConfig);
}
