#include "cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using weylab::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "weylab");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json without_timing(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    j.erase("timing");
    return j;
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

} // namespace

TEST(Cli, WorkedTupleSatisfiesThmB) {
    const auto r = call({"exponents", "--n", "3", "--p", "2,inf,2,2", "--q", "2,1,2,2", "--criterion", "thm-B"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["command"], "exponents");
    EXPECT_EQ(j["results"]["verdicts"][0]["holds"], true);
    EXPECT_EQ(j["results"]["verdicts"][0]["lhs"], "1/4");
    EXPECT_EQ(j["passed"], true);
}

TEST(Cli, FailedVerdictExitsOne) {
    const auto r = call({"exponents", "--n", "3", "--p", "2,inf,2,2", "--q", "2,1,2,2", "--criterion", "cotowa-2.5"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("FAILED cotowa-2.5"), std::string::npos);
    EXPECT_EQ(call({"exponents", "--n", "3", "--p", "2,inf,2,2", "--q", "2,1,2,2", "--criterion", "cotowa-2.5",
                    "--expect", "false"})
                  .code,
              0);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(call({"exponents", "--n", "3", "--p", "2", "--q", "2,1,2"}).code, 2);
    EXPECT_EQ(call({"exponents", "--n", "3", "--p", "2,2,2", "--q", "2,1,2"}).code, 2); // N + 1 = 4 entries expected
    EXPECT_EQ(call({"exponents", "--n", "3", "--p", "2,2,2,2", "--q", "2,x,2,2"}).code, 2);
    EXPECT_EQ(call({"exponents", "--n", "3", "--p", "2,2,2,2", "--q", "2,2,2,2", "--criterion", "nope"}).code, 2);
    EXPECT_EQ(call({"exponents", "--n", "3", "--p", "1/2,2,2,2", "--q", "2,2,2,2", "--criterion", "thm-B"}).code, 2);
    EXPECT_EQ(call({"exponents", "--n", "4", "--p", "2,2,2,2,2", "--q", "2,2,2,2,2", "--criterion", "thm-B"}).code, 2);
    EXPECT_EQ(call({}).code, 2);
    EXPECT_EQ(call({"frobnicate"}).code, 2);
    EXPECT_EQ(call({"identities", "--grid", "30"}).code, 2);
    EXPECT_EQ(call({"identities", "--grid", "16", "--tol", "nosuch=1"}).code, 2);
    EXPECT_EQ(call({"ratio", "--p", "2,2,2,2", "--q", "2,2,2,2", "--weights", "unit;unit"}).code, 2);
    EXPECT_EQ(call({"ratio", "--p", "2,2,2,2", "--q", "2,2,2,2", "--A", "1/4"}).code, 2);
    EXPECT_EQ(call({"representation", "--grid", "32", "--N", "3"}).code, 2); // beyond the quadrature budget
    EXPECT_EQ(call({"exponents", "--config", temp_path("missing.json")}).code, 2);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(call({"--help"}).code, 0); }

TEST(Cli, IdentitiesPassAndAreDeterministic) {
    const auto a = call({"identities", "--grid", "16", "--seed", "7", "--samples", "2"});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto b = call({"identities", "--grid", "16", "--seed", "7", "--samples", "2"});
    EXPECT_EQ(without_timing(a.out), without_timing(b.out));
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_GE(j["checks"].size(), 15u);
    for (const auto& c : j["checks"]) EXPECT_LE(c["value"].get<double>(), c["tolerance"].get<double>()) << c["name"];
    EXPECT_TRUE(j.contains("timing"));
}

TEST(Cli, ToleranceOverrideCanFailACheck) {
    const auto r = call({"identities", "--grid", "16", "--samples", "1", "--tol", "route_weyl_matrix=1e-300"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("route_weyl_matrix"), std::string::npos);
}

TEST(Cli, InterpolationCertificate) {
    EXPECT_EQ(call({"interpolate", "--n", "3", "--p", "2,2,2,2", "--q", "1,1,1,2"}).code, 0);
    const auto r = call({"interpolate", "--n", "3", "--p", "2,inf,2,2", "--q", "2,1,2,2"});
    EXPECT_EQ(r.code, 1); // no certificate on the scanned grid
    EXPECT_EQ(nlohmann::json::parse(r.out)["results"]["certificate"]["feasible"], false);
}

TEST(Cli, Representation) {
    const auto r = call({"representation", "--grid", "8", "--N", "2", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LT(nlohmann::json::parse(r.out)["checks"][0]["value"].get<double>(), 1e-6);
}

TEST(Cli, RatioJsonCsvAndConfigFile) {
    const std::vector<std::string> base{"ratio", "--p", "2,inf,2,2", "--q", "2,1,2,2", "--grid", "16",
                                        "--count", "3", "--seed", "5"};
    const auto j = call(base);
    ASSERT_EQ(j.code, 0) << j.err;
    const auto report = nlohmann::json::parse(j.out)["results"]["report"];
    EXPECT_EQ(report["ratios"].size(), 3u);
    EXPECT_EQ(report["criterion_holds"], true);

    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--emit", "csv"});
    const auto c = call(csv_args);
    EXPECT_EQ(c.out.rfind("label,mode,measure,n,seed,p,q,sample,ratio\r\n", 0), 0u);

    const auto path = temp_path("ratio_config.json");
    std::ofstream(path) << R"({"command": "ratio", "p": ["2", "inf", "2", "2"], "q": "2,1,2,2",
                               "grid": 16, "count": 3, "seed": 5})";
    const auto f = call({"--config", path});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_EQ(without_timing(f.out)["results"], without_timing(j.out)["results"]);
    // explicit flags override the file
    const auto g = call({"ratio", "--config", path, "--count", "2"});
    EXPECT_EQ(nlohmann::json::parse(g.out)["results"]["report"]["ratios"].size(), 2u);

    const auto out = temp_path("ratio_out.json");
    auto to_file = base;
    to_file.insert(to_file.end(), {"--out", out});
    const auto h = call(to_file);
    EXPECT_EQ(h.out, "");
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(without_timing(ss.str()), without_timing(j.out));
    std::remove(path.c_str());
    std::remove(out.c_str());
}

TEST(Cli, RatioBoundAndSweepDrift) {
    EXPECT_EQ(call({"ratio", "--p", "2,2,2,2", "--q", "2,2,2,2", "--grid", "16", "--count", "2", "--bound", "1e-9"}).code,
              1);
    const auto s = call({"sweep", "--tuple", "hs|2,2,2,2|2,2,2,2", "--tuple", "lin|2,2|2,2", "--grids", "16,24",
                         "--count", "3", "--measure", "counting"});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto j = nlohmann::json::parse(s.out);
    EXPECT_EQ(j["checks"].size(), 2u);
    EXPECT_EQ(j["results"]["reports"].size(), 4u);
    EXPECT_EQ(call({"sweep", "--tuple", "bad|2,2"}).code, 2);
}
