#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "rlnclab/network.hpp"

using rlnclab::Channel;
using rlnclab::NetworkSpec;

namespace {

// Independent precedence check: every channel appears after all channels
// entering its tail node.
bool respects_precedence(const NetworkSpec& spec, const std::vector<std::string>& order) {
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    if (pos.size() != order.size()) return false;
    for (const auto& c : spec.real_channels())
        for (const auto* in : spec.incoming_all(c.tail))
            if (pos.at(in->id) >= pos.at(c.id)) return false;
    return true;
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("butterfly shape") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    CHECK(bf.nodes().size() == 7);
    CHECK(bf.real_channels().size() == 9);
    CHECK(bf.imaginary_channels().size() == 2);
    CHECK(bf.rate() == 2);
    CHECK(bf.source() == "s");
    CHECK(bf.sinks() == std::vector<std::string>{"t1", "t2"});
    CHECK(bf.incoming_real("j").size() == 1);  // only e7 feeds j
    CHECK(bf.incoming_real("j")[0]->id == "e7");
    CHECK(rlnclab::validate(bf).ok());
    CHECK(rlnclab::validate(bf).warnings.empty());
}

TEST_CASE("validation reports constructed violations") {
    SUBCASE("cycle") {
        NetworkSpec bad({"s", "s1", "s2", "i", "j", "t1", "t2"},
                        {{"e1", "s", "s1"},
                         {"e2", "s", "s2"},
                         {"e3", "s1", "t1"},
                         {"e4", "s1", "i"},
                         {"e5", "s2", "i"},
                         {"e6", "s2", "t2"},
                         {"e7", "i", "j"},
                         {"e8", "j", "t1"},
                         {"e9", "j", "t2"},
                         {"back", "t1", "s"}},
                        "s", {"t1", "t2"}, 2);
        const auto report = rlnclab::validate(bad);
        CHECK_FALSE(report.ok());
        bool found = false;
        for (const auto& e : report.errors)
            if (e.find("cycle") != std::string::npos) found = true;
        CHECK(found);
        CHECK_THROWS_AS(rlnclab::topological_order(bad), rlnclab::CyclicNetwork);
    }
    SUBCASE("unreachable sink") {
        NetworkSpec bad({"s", "t1", "x"}, {{"e1", "s", "t1"}}, "s", {"t1", "x"}, 1);
        const auto report = rlnclab::validate(bad);
        CHECK_FALSE(report.ok());
        bool found = false;
        for (const auto& e : report.errors)
            if (e.find("not reachable") != std::string::npos) found = true;
        CHECK(found);
    }
    SUBCASE("reserved imaginary id") {
        NetworkSpec bad({"s", "t"}, {{"d1", "s", "t"}}, "s", {"t"}, 1);
        CHECK_FALSE(rlnclab::validate(bad).ok());
    }
    SUBCASE("self loop and duplicate ids") {
        NetworkSpec bad({"s", "t"}, {{"e1", "s", "t"}, {"e1", "t", "t"}}, "s", {"t"}, 1);
        const auto report = rlnclab::validate(bad);
        CHECK(report.errors.size() >= 2);
    }
    SUBCASE("infeasible rate is only a warning") {
        NetworkSpec thin({"s", "t"}, {{"e1", "s", "t"}}, "s", {"t"}, 2);
        const auto report = rlnclab::validate(thin);
        CHECK(report.ok());
        CHECK_FALSE(report.warnings.empty());
    }
}

TEST_CASE("topological order") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    const auto order = rlnclab::topological_order(bf);
    CHECK(order.size() == 11);
    CHECK(order[0] == "d1");
    CHECK(order[1] == "d2");
    CHECK(respects_precedence(bf, order));
    const auto pos = [&](const std::string& id) {
        return std::find(order.begin(), order.end(), id) - order.begin();
    };
    CHECK(pos("e7") < pos("e8"));
    CHECK(pos("e7") < pos("e9"));
    CHECK(pos("e1") < pos("e3"));
    CHECK(pos("e2") < pos("e5"));
    CHECK(order == rlnclab::topological_order(bf));  // deterministic

    const NetworkSpec single({"s", "t"}, {{"e1", "s", "t"}}, "s", {"t"}, 1);
    CHECK(rlnclab::topological_order(single) == std::vector<std::string>{"d1", "e1"});
}

TEST_CASE("min cut") {
    const NetworkSpec bf = NetworkSpec::butterfly();
    CHECK(rlnclab::min_cut(bf, "t1") == 2);
    CHECK(rlnclab::min_cut(bf, "t2") == 2);
    CHECK(rlnclab::min_cut(bf, "t1") >= bf.rate());
    CHECK_THROWS_AS(rlnclab::min_cut(bf, "i"), rlnclab::UnknownSink);

    const NetworkSpec path({"s", "a", "t"}, {{"e1", "s", "a"}, {"e2", "a", "t"}}, "s", {"t"}, 1);
    CHECK(rlnclab::min_cut(path, "t") == 1);

    // Two parallel length-2 paths.
    const NetworkSpec wide({"s", "a", "b", "t"},
                           {{"e1", "s", "a"}, {"e2", "s", "b"}, {"e3", "a", "t"}, {"e4", "b", "t"}},
                           "s", {"t"}, 2);
    CHECK(rlnclab::min_cut(wide, "t") == 2);
}

TEST_CASE("network files") {
    const std::string text = R"({
      "schema_version": 1,
      "nodes": ["s", "a", "t"],
      "channels": [
        {"id": "e1", "tail": "s", "head": "a"},
        {"id": "e2", "tail": "a", "head": "t"}
      ],
      "source": "s",
      "sinks": ["t"],
      "rate": 1
    })";
    const NetworkSpec net = NetworkSpec::from_json_text(text);
    CHECK(net.real_channels().size() == 2);
    CHECK(net.imaginary_channels().size() == 1);
    CHECK(rlnclab::validate(net).ok());

    CHECK_THROWS_AS(NetworkSpec::from_json_text("not json"), rlnclab::ParseError);
    CHECK_THROWS_AS(NetworkSpec::from_json_text(R"({"schema_version": 2})"), rlnclab::ParseError);
    CHECK_THROWS_AS(NetworkSpec::from_json_text(R"({"schema_version": 1})"), rlnclab::ParseError);

    CHECK(NetworkSpec::resolve("builtin:butterfly") == NetworkSpec::butterfly());
    CHECK_THROWS_AS(NetworkSpec::resolve("builtin:grid"), rlnclab::ParseError);
    CHECK_THROWS_AS(NetworkSpec::resolve("/nonexistent/net.json"), rlnclab::ParseError);
}

}  // TEST_SUITE
