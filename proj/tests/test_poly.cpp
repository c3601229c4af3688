#include <random>

#include "doctest.h"
#include "orbcount/poly.hpp"

using namespace orbcount;

namespace {

ModPoly power_product(const ModPFactorization& f, std::int64_t p) {
    ModPoly acc{1};
    for (const auto& fac : f.factors)
        for (int i = 0; i < fac.multiplicity; ++i) acc = modp::mul(acc, fac.poly, p);
    return acc;
}

std::vector<IntPoly> random_corpus(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> deg(1, 5), coef(-9, 9);
    std::vector<IntPoly> out;
    while (out.size() < count) {
        const int n = deg(rng);
        std::vector<Int> c;
        for (int i = 0; i < n; ++i) c.push_back(coef(rng));
        c.push_back(1);
        out.emplace_back(c);
    }
    return out;
}

}  // namespace

TEST_CASE("parse_poly reads highest degree first") {
    IntPoly a = parse_poly("1,0,1");
    CHECK(a.degree() == 2);
    CHECK(a.coeffs() == std::vector<Int>{1, 0, 1});
    IntPoly b = parse_poly("1, -1, -1");
    CHECK(b.coeffs() == std::vector<Int>{-1, -1, 1});
    CHECK(b.to_string() == "x^2 - x - 1");
    CHECK(b.to_csv() == "1,-1,-1");
}

TEST_CASE("parse_poly errors") {
    CHECK_THROWS_AS(parse_poly("2,0,1"), PolyError);
    CHECK_THROWS_AS(parse_poly("1"), PolyError);
    CHECK_THROWS_AS(parse_poly(""), PolyError);
    CHECK_THROWS_AS(parse_poly("1,x,3"), PolyError);
    CHECK_THROWS_AS(parse_poly("1,,3"), PolyError);
    CHECK_THROWS_AS(parse_poly("1,3-"), PolyError);
}

TEST_CASE("discriminant examples") {
    CHECK(discriminant(parse_poly("1,0,1")) == -4);
    CHECK(discriminant(parse_poly("1,0,-5")) == 20);
    CHECK(discriminant(parse_poly("1,0,-1,-1")) == -23);
    CHECK(discriminant(parse_poly("1,0,0,0,1")) == 256);
    CHECK(discriminant(parse_poly("1,1,1")) == -3);
    // b^2 - 4c for every small monic quadratic
    for (int b = -6; b <= 6; ++b)
        for (int c = -6; c <= 6; ++c) CHECK(discriminant(IntPoly({c, b, 1})) == b * b - 4 * c);
}

TEST_CASE("irreducibility certificates") {
    auto a = is_irreducible(parse_poly("1,0,1"));
    CHECK(a.status == Irreducibility::irreducible);
    CHECK(a.method == "mod_p");
    CHECK(*a.prime == 3);

    auto b = is_irreducible(parse_poly("1,0,-1"));
    CHECK(b.status == Irreducibility::reducible);
    REQUIRE(b.factor.has_value());
    CHECK(b.factor->degree() == 1);
    CHECK(parse_poly("1,0,-1").evaluate(-(*b.factor)[0]) == 0);

    CHECK(is_irreducible(parse_poly("1,0,-1,-1")).status == Irreducibility::irreducible);

    // x^4 + 1 is reducible modulo every prime but irreducible over Z
    auto c = is_irreducible(parse_poly("1,0,0,0,1"));
    CHECK(c.status == Irreducibility::irreducible);
    CHECK(c.method == "exhaustive");

    // (x^2 + x + 1)(x^2 - 2) has no rational root
    auto d = is_irreducible(IntPoly({-2, -2, -1, 1, 1}));
    CHECK(d.status == Irreducibility::reducible);
    REQUIRE(d.factor.has_value());
    CHECK(d.factor->degree() == 2);

    // degree 5 with a mod-p certificate
    CHECK(is_irreducible(parse_poly("1,0,0,0,-1,-1")).status == Irreducibility::irreducible);
    // degree 6 product of cubics: no certificate possible
    IntPoly cubic({-1, -1, 0, 1});  // x^3 - x - 1
    std::vector<Int> sq(7, Int(0));
    for (int i = 0; i <= 3; ++i)
        for (int j = 0; j <= 3; ++j) sq[i + j] += cubic[i] * cubic[j];
    CHECK(is_irreducible(IntPoly(sq)).status != Irreducibility::irreducible);
}

TEST_CASE("companion matrix examples") {
    IntMatrix a = companion_matrix(parse_poly("1,0,1"));
    CHECK(a(0, 0) == 0);
    CHECK(a(0, 1) == -1);
    CHECK(a(1, 0) == 1);
    CHECK(a(1, 1) == 0);
    IntMatrix b = companion_matrix(parse_poly("1,-1,-1"));
    CHECK(b(0, 1) == 1);
    CHECK(b(1, 1) == 1);
    IntMatrix c = companion_matrix(parse_poly("1,0,-1,-1"));
    CHECK(c(0, 2) == 1);
    CHECK(c(1, 2) == 1);
    CHECK(c(2, 2) == 0);
    CHECK(c(1, 0) == 1);
    CHECK(c(2, 1) == 1);
}

TEST_CASE("factor_mod_p examples") {
    auto f = factor_mod_p(parse_poly("1,0,1"), 2);
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0].poly == ModPoly{1, 1});
    CHECK(f.factors[0].multiplicity == 2);

    auto g = factor_mod_p(parse_poly("1,0,1"), 5);
    REQUIRE(g.factors.size() == 2);
    CHECK(g.factors[0].poly == ModPoly{2, 1});
    CHECK(g.factors[1].poly == ModPoly{3, 1});

    auto h = factor_mod_p(parse_poly("1,0,-5"), 2);
    REQUIRE(h.factors.size() == 1);
    CHECK(h.factors[0].poly == ModPoly{1, 1});
    CHECK(h.factors[0].multiplicity == 2);

    CHECK_THROWS_AS(factor_mod_p(parse_poly("1,0,1"), 15), PolyError);
    // x^4 + 1 mod 3 splits into two quadratics
    auto k = factor_mod_p(parse_poly("1,0,0,0,1"), 3);
    CHECK(k.factor_degrees() == std::vector<int>{2, 2});
    // inseparable layer: (x^2+1)^2 ... squared again mod 2 is (x+1)^4
    auto m = factor_mod_p(IntPoly({1, 0, 0, 0, 1}), 2);
    REQUIRE(m.factors.size() == 1);
    CHECK(m.factors[0].multiplicity == 4);
}

TEST_CASE("property: discriminant vanishes mod p exactly for repeated factors") {
    const auto primes = small_primes(100);
    for (const IntPoly& f : random_corpus(60, 11)) {
        const Int disc = discriminant(f);
        for (std::int64_t p : primes) {
            auto fac = factor_mod_p(f, Int(static_cast<long>(p)));
            CHECK((disc % p == 0) == fac.has_repeated_factor());
            CHECK(power_product(fac, p) == modp::reduce(f.coeffs(), p));
            for (std::size_t i = 0; i < fac.factors.size(); ++i)
                for (std::size_t j = i + 1; j < fac.factors.size(); ++j)
                    CHECK(modp::degree(modp::gcd(fac.factors[i].poly, fac.factors[j].poly, p)) == 0);
        }
    }
}

TEST_CASE("property: companion matrix has the right characteristic polynomial") {
    for (const IntPoly& f : random_corpus(40, 29)) CHECK(charpoly_cofactor(companion_matrix(f)) == f.coeffs());
}
