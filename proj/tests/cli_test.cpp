#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlnclab/cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = rlnclab::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("formula json reports the exact q = 2 values") {
    const auto r = run_cli({"formula", "--field", "gf(2)", "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("q") == "2");
    CHECK(doc.at("results").at("network").at("success").at("exact") == "3/2048");
    CHECK(doc.at("results").at("network").at("success").at("decimal") == "0.00146484");
    CHECK(doc.at("results").at("per_sink").at("t1").at("failure").at("exact") == "125/128");
    CHECK(doc.at("results").at("average").at("failure").at("exact") == "125/128");

    // Round trip: parse and re-serialize reproduces the bytes.
    CHECK(json::parse(r.out).dump(2) + "\n" == r.out);
}

TEST_CASE("formula handles certain erasure and large q") {
    const auto all_fail = run_cli({"formula", "--field", "gf(2)", "--erasure", "1",
                                   "--format", "json"});
    REQUIRE(all_fail.code == 0);
    const json doc = json::parse(all_fail.out);
    CHECK(doc.at("results").at("network").at("failure").at("exact") == "1");
    CHECK(doc.at("results").at("per_sink").at("t2").at("failure").at("exact") == "1");

    const auto big = run_cli({"formula", "--field", "gf(89)", "--format", "json"});
    REQUIRE(big.code == 0);
    CHECK(json::parse(big.out).at("results").at("network").at("success").at("decimal") ==
          "0.903190");

    // 87 is not a prime power but is a legal formula input.
    CHECK(run_cli({"formula", "--field", "gf(87)"}).code == 0);
}

TEST_CASE("enumerate reports raw counts") {
    const auto r = run_cli({"enumerate", "--network", "builtin:butterfly", "--field", "gf(2)",
                            "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("total_assignments") == "4096");
    CHECK(doc.at("results").at("network").at("success_count") == "6");
    CHECK(doc.at("results").at("network").at("success").at("exact") == "3/2048");
    CHECK(doc.at("results").at("per_sink").at("t1").at("success_count") == "96");
}

TEST_CASE("enumerate at q = 3 matches the closed form exactly") {
    const auto r = run_cli({"enumerate", "--field", "gf(3)", "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("results").at("network").at("success").at("exact") == "4096/177147");
}

TEST_CASE("enumerate exit codes") {
    const auto budget = run_cli({"enumerate", "--field", "gf(89)"});
    CHECK(budget.code == 3);
    CHECK(budget.err.find("search space too large") != std::string::npos);

    const auto unrealizable = run_cli({"enumerate", "--field", "gf(87)"});
    CHECK(unrealizable.code == 1);  // not a prime power: no such field

    const auto bad_field = run_cli({"enumerate", "--field", "gf(x)"});
    CHECK(bad_field.code == 2);
}

TEST_CASE("simulate is reproducible byte for byte") {
    const std::vector<std::string> args{"simulate", "--field",  "gf(2)", "--trials", "5000",
                                        "--seed",   "7",        "--format", "json"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    const json doc = json::parse(a.out);
    CHECK(doc.at("trials") == 5000);
    CHECK(doc.at("seed") == 7);
    const double mean = doc.at("results").at("network").at("failure_mean").get<double>();
    CHECK(mean >= 0.0);
    CHECK(mean <= 1.0);

    const auto single = run_cli({"simulate", "--field", "gf(2)", "--trials", "1", "--seed", "1",
                                 "--format", "json"});
    const double m = json::parse(single.out).at("results").at("network").at("failure_mean");
    CHECK((m == 0.0 || m == 1.0));
}

TEST_CASE("polynomial emits the exact coefficient lists at q = 2") {
    const auto r = run_cli({"polynomial", "--field", "gf(2)", "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    // (3/2048)(1-p)^9 expanded, ascending powers of p.
    const std::vector<std::string> network_success{
        "3/2048",   "-27/2048", "27/512",  "-63/512", "189/1024",
        "-189/1024", "63/512",  "-27/512", "27/2048", "-3/2048"};
    CHECK(doc.at("results").at("network").at("success_coefficients") == network_success);
    const std::vector<std::string> sink_success{"3/128",   "-9/64", "45/128", "-15/32",
                                                "45/128", "-9/64", "3/128"};
    CHECK(doc.at("results").at("per_sink").at("t1").at("success_coefficients") == sink_success);
}

TEST_CASE("threshold command") {
    const auto r = run_cli({"threshold", "--success", "0.9", "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("minimal_integer_q") == "87");
    CHECK(doc.at("minimal_prime_power_q") == "89");

    CHECK(run_cli({"threshold", "--success", "1"}).code == 2);
    CHECK(run_cli({"threshold", "--success", "0"}).code == 2);
    CHECK(run_cli({"threshold", "--success", "x"}).code == 2);
}

TEST_CASE("sweep crosses formula and enumeration") {
    const auto r = run_cli({"sweep", "--fields", "2..4", "--columns", "formula,enumerate",
                            "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc.at("rows").size() == 3);
    for (const auto& row : doc.at("rows")) {
        CHECK(row.at("formula_failure_network") == row.at("enumerate_failure_network"));
        CHECK(row.at("formula_failure_sink") == row.at("enumerate_failure_t1"));
        CHECK(row.at("formula_failure_sink") == row.at("enumerate_failure_t2"));
        CHECK(row.at("formula_failure_average") == row.at("enumerate_failure_average"));
    }
    CHECK(doc.at("rows")[0].at("q") == "2");
}

TEST_CASE("sweep leaves unrealizable or over-budget enumeration cells empty") {
    const auto r = run_cli({"sweep", "--fields", "6,89", "--columns", "enumerate", "--format",
                            "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("rows")[0].at("enumerate_failure_network").is_null());  // gf(6) unrealizable
    CHECK(doc.at("rows")[1].at("enumerate_failure_network").is_null());  // gf(89) over budget
}

TEST_CASE("empty sweep emits just the header") {
    const auto r = run_cli({"sweep", "--fields", "", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("q,p") == 0);
    CHECK(r.out.find('\n') == r.out.size() - 1);  // single line
}

TEST_CASE("rate columns approach 5 and 9") {
    const auto r = run_cli({"sweep", "--fields", "10000", "--columns", "rate", "--format",
                            "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    const double sink_rate = std::stod(doc.at("rows")[0].at("rate_sink").get<std::string>());
    const double network_rate =
        std::stod(doc.at("rows")[0].at("rate_network").get<std::string>());
    CHECK(sink_rate > 4.99);
    CHECK(sink_rate < 5.01);
    CHECK(network_rate > 8.99);
    CHECK(network_rate < 9.01);
}

TEST_CASE("limits command") {
    const auto r = run_cli({"limits", "--erasure", "1/10", "--rate-q", "100,10000", "--format",
                            "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("limits").at("network").at("failure").at("exact") == "612579511/1000000000");
    CHECK(doc.at("limits").at("sink").at("failure").at("exact") ==
          doc.at("limits").at("average").at("failure").at("exact"));
    CHECK(doc.at("rates").size() == 2);

    const auto zero = run_cli({"limits", "--format", "json"});
    CHECK(json::parse(zero.out).at("limits").at("network").at("failure").at("exact") == "0");
}

TEST_CASE("csv and table formats stay parseable") {
    const auto csv = run_cli({"formula", "--field", "gf(2)", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.find("target,failure_exact") == 0);
    CHECK(csv.out.find("network,2045/2048") != std::string::npos);

    const auto table = run_cli({"formula", "--field", "gf(2)"});
    REQUIRE(table.code == 0);
    CHECK(table.out.find("3/2048") != std::string::npos);
}

TEST_CASE("parse failures exit with code 2") {
    CHECK(run_cli({"formula"}).code == 2);                               // missing --field
    CHECK(run_cli({"formula", "--field", "gf(1)"}).code == 2);           // q < 2
    CHECK(run_cli({"formula", "--field", "gf(2)", "--erasure", "7/3"}).code == 2);
    CHECK(run_cli({"nonsense"}).code == 2);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"sweep", "--fields", "4..2"}).code == 2);
    CHECK(run_cli({"simulate", "--field", "gf(2)", "--trials", "0"}).code == 2);
    CHECK(run_cli({"formula", "--field", "gf(2)", "--format", "yaml"}).code == 2);
}

TEST_CASE("help exits cleanly") {
    const auto r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("formula") != std::string::npos);
}

TEST_CASE("network files work end to end") {
    // A relay path: decoding at rate 1 succeeds unless a coefficient is zero.
    const std::string path = "cli_test_net.json";
    {
        std::ofstream f(path);
        f << R"({"schema_version":1,"nodes":["s","a","t"],
                 "channels":[{"id":"e1","tail":"s","head":"a"},
                              {"id":"e2","tail":"a","head":"t"}],
                 "source":"s","sinks":["t"],"rate":1})";
    }
    const auto r = run_cli({"enumerate", "--network", path, "--field", "gf(3)", "--format",
                            "json"});
    std::remove(path.c_str());
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    // Two coefficients, 9 assignments; success needs both nonzero: (2/3)^2.
    CHECK(doc.at("results").at("network").at("success").at("exact") == "4/9");
}

}  // TEST_SUITE
