#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qsym/cayley.hpp"

using namespace qsym;

TEST_CASE("rational parsing and printing", "[rational]") {
    CHECK(parse_rational("3/6") == Q(1, 2));
    CHECK(parse_rational("-7") == Q(-7));
    CHECK(to_string(Q(-2, 4)) == "-1/2");
    CHECK(qpow(Q(2, 3), 3) == Q(8, 27));
    CHECK_THROWS_AS(parse_rational("1/0"), invalid_input);
    CHECK_THROWS_AS(parse_rational("abc"), invalid_input);
}

TEST_CASE("polynomials in n", "[poly]") {
    PolyQ n = PolyQ::n();
    PolyQ p = (n - PolyQ(4)) * (n - PolyQ(6)) * (n - PolyQ(8));
    CHECK(p.degree() == 3);
    CHECK(p(Q(10)) == Q(48));
    CHECK(parse_poly("(n-4)(n-6)(n-8)") == p);
    CHECK(parse_poly("n^3 - 18n^2 + 104n - 192") == p);
    CHECK(parse_poly("(n-2)/4") == (n - PolyQ(2)) * PolyQ(Q(1, 4)));
    CHECK((p - p).is_zero());
    CHECK(PolyQ(std::vector<Q>{Q(1), Q(0), Q(0)}).degree() == 0);  // trailing zeros stripped
    CHECK(p.factored_str() == "(n-4)(n-6)(n-8)");
}

TEST_CASE("cyclotomic arithmetic", "[cyclotomic]") {
    auto i = Cyclotomic::zeta(4, 1);
    CHECK(i * i == Cyclotomic(-1));
    auto w = Cyclotomic::zeta(3, 1);
    CHECK(w + w * w == Cyclotomic(-1));
    CHECK(Cyclotomic::zeta(6, 2) == w);
    CHECK(Cyclotomic::zeta(5, 7) == Cyclotomic::zeta(5, 2));
    CHECK(w.conj() == w * w);
    CHECK((w - w).is_zero());
    CHECK(Cyclotomic::zeta(8, 4) == Cyclotomic(-1));
}

TEST_CASE("cyclotomic conj and float image agree", "[cyclotomic][property]") {
    std::mt19937 g(7);
    for (int trial = 0; trial < 200; ++trial) {
        int m = std::uniform_int_distribution<int>(1, 24)(g);
        Cyclotomic x(Q(0));
        std::complex<double> z = 0;
        for (int t = 0; t < 4; ++t) {
            long long j = std::uniform_int_distribution<int>(0, 3 * m)(g);
            long long c = std::uniform_int_distribution<int>(-5, 5)(g);
            x = x + Cyclotomic(c) * Cyclotomic::zeta(m, j);
            z += static_cast<double>(c) * std::polar(1.0, 2 * M_PI * static_cast<double>(j) / m);
        }
        CHECK(std::abs(x.to_complex() - z) < 1e-12);
        CHECK(std::abs(x.conj().to_complex() - std::conj(z)) < 1e-12);
        CHECK(x.conj().conj() == x);
    }
}

TEST_CASE("group construction", "[group]") {
    AbelianGroup a({2, 2, 2});
    CHECK(a.order() == 8);
    CHECK(a.exponent() == 2);
    AbelianGroup b({4, 2});
    CHECK(b.order() == 8);
    CHECK(b.exponent() == 4);
    AbelianGroup c({1});
    CHECK(c.order() == 1);
    CHECK_THROWS_AS(AbelianGroup(std::vector<int>{}), invalid_input);
    CHECK_THROWS_AS(AbelianGroup({3, 0}), invalid_input);
    CHECK(b.element({-1, 5}) == GroupElement{3, 1});
}

TEST_CASE("enumeration is lexicographic with the last coordinate fastest", "[group]") {
    AbelianGroup G({2, 3});
    auto el = G.elements();
    REQUIRE(el.size() == 6);
    CHECK(el[0] == GroupElement{0, 0});
    CHECK(el[1] == GroupElement{0, 1});
    CHECK(el[3] == GroupElement{1, 0});
    for (std::uint64_t i = 0; i < G.order(); ++i) CHECK(G.index(G.at(i)) == i);
}

TEST_CASE("characters", "[group]") {
    AbelianGroup G({2, 2, 2});
    for (const auto& mu : G.elements())
        for (const auto& al : G.elements()) {
            int dot = 0;
            for (int t = 0; t < 3; ++t) dot += mu[t] * al[t];
            CHECK(char_value(G, mu, al) == Cyclotomic(dot % 2 ? -1 : 1));
        }
    AbelianGroup H({3, 4});
    for (const auto& mu : H.elements())
        for (const auto& al : H.elements()) CHECK(char_value(H, mu, al) == oracle::character(H, mu, al));
}

TEST_CASE("degree-major order", "[group]") {
    AbelianGroup G({2, 2, 2});
    auto o = degree_major_order(G);
    std::vector<int> deg;
    for (const auto& x : o) deg.push_back(AbelianGroup::degree(x));
    CHECK(deg == std::vector<int>{0, 1, 1, 1, 2, 2, 2, 3});
}
