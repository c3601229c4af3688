#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include "doctest.h"
#include "orbcount/io.hpp"

using namespace orbcount;

namespace {

struct Run {
    int status = -1;
    std::string out;
};

Run run(const std::string& args) {
    Run r;
    const std::string cmd = std::string(ORBCOUNT_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

json field(const std::string& name, int degree) {
    return {{"name", name},
            {"degree", degree},
            {"real_places", {"split"}},
            {"res_zeta_RE", {{"rational", "1/4"}, {"pi_power", 1}}}};
}

}  // namespace

TEST_CASE("symbolic JSON round trip") {
    const Symbolic s = Symbolic(Rat(48)) * Symbolic::log("log((1+sqrt(5))/2)", 0.4812118250596034L) /
                       (Symbolic::pi(2) * Symbolic::sqrt(5)) * Symbolic::zeta(3);
    const auto back = symbolic_from_json(to_json(s));
    REQUIRE(back);
    CHECK(*back == s);
    CHECK(static_cast<double>(back->value()) == doctest::Approx(static_cast<double>(s.value())));
    CHECK_FALSE(symbolic_from_json(json(1.5)));
    CHECK(value_from_json(json(1.5)).approx == 1.5L);
    CHECK(value_from_json(json{{"float", 2.0}}).approx == 2.0L);
}

TEST_CASE("invariants files") {
    json minimal = {{"schema_version", 1}, {"n", 2}, {"fields", {field("Q", 1)}}};
    auto in = parse_invariants(minimal);
    CHECK(in.fields.size() == 1);
    auto c = assemble_constant_general(in);
    CHECK(*c.constant.exact == Symbolic(3));  // (pi/4) * 2 / (pi/6)

    json bad_degree = {{"schema_version", 1}, {"n", 4}, {"fields", {field("Q", 1), field("E", 3)}}};
    CHECK_THROWS_WITH_AS(parse_invariants(bad_degree), "fields[1].degree: 3 does not divide n = 4", InvariantsError);
    json dup = {{"schema_version", 1}, {"n", 2}, {"fields", {field("Q", 1), field("Q", 1)}}};
    CHECK_THROWS_WITH_AS(parse_invariants(dup), "fields[1].name: duplicate E record 'Q'", InvariantsError);
    json version = {{"schema_version", 7}, {"n", 2}, {"fields", {field("Q", 1)}}};
    CHECK_THROWS_AS(parse_invariants(version), InvariantsError);
    CHECK_THROWS_AS(parse_invariants(minimal, 3), InvariantsError);
    json missing = {{"schema_version", 1}, {"n", 2}, {"fields", {{{"name", "Q"}, {"degree", 1}}}}};
    CHECK_THROWS_WITH_AS(parse_invariants(missing), "fields[0]: missing \"res_zeta_RE\"", InvariantsError);

    json real_quad = {{"schema_version", 1},
                      {"n", 2},
                      {"base_field",
                       {{"name", "Q(sqrt5)"},
                        {"degree", 2},
                        {"r1", 2},
                        {"r2", 0},
                        {"disc", 5},
                        {"res_zeta", {{"float", 0.43040894}}},
                        {"zeta", {{"2", {{"float", 1.16167}}}}}}},
                      {"fields",
                       {{{"name", "F"}, {"degree", 1}, {"res_zeta_RE", 1.0}},
                        {{"name", "E"}, {"degree", 2}, {"res_zeta_RE", 0.5}, {"delta_locals", {{{"p", 3}, {"value", 2}}}}}}}};
    auto g = assemble_constant_general(parse_invariants(real_quad));
    CHECK(g.term_count == 2);
    CHECK(static_cast<double>(g.numerator.approx) == doctest::Approx(2.0));  // 1 + 2 * 0.5
}

TEST_CASE("command line") {
    auto c = run("constant --poly 1,0,1");
    CHECK(c.status == 0);
    const json j = json::parse(c.out);
    CHECK(j["C"]["symbolic"] == "3");
    CHECK(j["C"]["float"] == 3.0);

    auto s = run("satake --n 2 --d 2 --jmax 4");
    CHECK(s.status == 0);
    const json t = json::parse(s.out);
    for (const auto& row : t["rows"]) {
        if (row["j"].get<int>() % 2 == 1) CHECK(row["image"] == "0");
        CHECK(row["equal"] == true);
    }

    auto census = run("census --poly 1,0,1 --tmax 1000 --format csv");
    CHECK(census.status == 0);
    CHECK(census.out.rfind("T,count,count/T^d\n", 0) == 0);
    CHECK(census.out.find("\n1000,") != std::string::npos);

    CHECK(run("bogus").status == 2);
    CHECK(run("constant").status == 2);
    auto err = run("constant --poly 1,0,-4");
    CHECK(err.status == 1);
    CHECK(json::parse(err.out).contains("error"));
    CHECK(run("delta --p 3 --spec sqrt:3 --e-degree 2").status == 0);
    CHECK(run("delta --p 5 --spec cube:3").status == 1);

    // identical flags give identical bytes
    CHECK(run("analytic --n 3 --mc-samples 20000 --seed 7").out == run("analytic --n 3 --mc-samples 20000 --seed 7").out);
    CHECK(run("orbital --poly 1,0,-20 --prime 2 --twist-order 2").out ==
          run("orbital --poly 1,0,-20 --prime 2 --twist-order 2").out);
}

TEST_CASE("subcommand help lists its own flags") {
    const auto h = run("census --help").out;
    CHECK(h.find("--tmax") != std::string::npos);
    CHECK(h.find("--threads") != std::string::npos);
    CHECK(h.find("--jmax") == std::string::npos);
    CHECK(h.find("--invariants") == std::string::npos);
    const auto o = run("orbital --help").out;
    CHECK(o.find("--twist-order") != std::string::npos);
    CHECK(o.find("--tmax") == std::string::npos);
}
