#include <catch2/catch_amalgamated.hpp>

#include "qsym/fourier.hpp"
#include "qsym/report.hpp"

using namespace qsym;
using json_io::json;

TEST_CASE("cyclotomic JSON round trip", "[json]") {
    for (int m : {1, 3, 4, 5, 8, 12})
        for (long long j = 0; j < m; ++j) {
            Cyclotomic x = Cyclotomic::zeta(m, j) * Cyclotomic(Q(3, 7)) + Cyclotomic(Q(-2));
            json js = json_io::to_json(x);
            CHECK(json_io::cyclotomic_from_json(js) == x);
            CHECK(json::parse(js.dump()) == js);
        }
    CHECK_THROWS_AS(json_io::cyclotomic_from_json(json{{"level", 0}, {"coeffs", json::array()}}), invalid_input);
    CHECK_THROWS_AS(json_io::cyclotomic_from_json(json::array()), invalid_input);
}

TEST_CASE("spectrum JSON", "[json]") {
    auto fam = family("hypercube:3");
    auto sp = spectrum(fam.group, fam.gens);
    json j = json_io::to_json(fam.group, fam.gens, sp);
    CHECK(j["group"]["orders"] == json::array({2, 2, 2}));
    CHECK(j["symmetric"] == true);
    REQUIRE(j["eigenvalues"].size() == 4);
    CHECK(j["eigenvalues"][1]["multiplicity"] == 3);
    CHECK(json_io::cyclotomic_from_json(j["eigenvalues"][3]["value"]) == Cyclotomic(-3));
}

TEST_CASE("tensor JSON is sorted by index", "[json]") {
    AbelianGroup G({3});
    auto T = hat_block_intertwiner(G, 1, 2);
    json j = json_io::to_json(T);
    CHECK(j["shape"] == json::array({3, 3, 3}));
    CHECK(j["out_axes"] == 2);
    const auto& e = j["entries"];
    for (std::size_t i = 1; i < e.size(); ++i) CHECK(e[i - 1]["idx"].get<std::vector<int>>() < e[i]["idx"].get<std::vector<int>>());
}

TEST_CASE("partition combination JSON", "[json]") {
    PartLin a = antisym2();
    json j = json_io::to_json(a);
    CHECK(j["k"] == 2);
    REQUIRE(j["terms"].size() == 2);
    for (const auto& t : j["terms"]) CHECK(parse_partition(t["partition"].get<std::string>()).k() == 2);
}

TEST_CASE("verification report", "[report]") {
    VerificationReport r;
    r.suite = "demo";
    r.add("a", "here", true, "");
    r.finding("b", "there", "off by one");
    CHECK_FALSE(r.failed());
    CHECK(r.exit_code() == 0);
    r.add("c", "elsewhere", false, "mismatch");
    CHECK(r.failed());
    CHECK(r.exit_code() == 1);
    json j = r.to_json();
    CHECK(j["status"] == "fail");
    CHECK(j["checks"][1]["verdict"] == "finding");
    CHECK(r.text().find("[finding] b") != std::string::npos);
}

TEST_CASE("size guards", "[config]") {
    CHECK_THROWS_AS(config::require_dense(config::max_dense() + 1, "x"), guard_error);
    CHECK_NOTHROW(config::require_sparse(10, "x"));
    CHECK_THROWS_AS(functor_T<long long>(identity_partition(4), 100), guard_error);
}
