#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "qsym/dsl.hpp"
#include "qsym/functor.hpp"

using namespace qsym;

namespace {

Partition random_partition(int k, int l, std::mt19937& g) {
    std::vector<int> lab(static_cast<std::size_t>(k + l));
    for (auto& x : lab) x = std::uniform_int_distribution<int>(0, std::max(0, k + l - 1))(g);
    return Partition::from_labels(k, l, lab);
}

template <class S>
bool matches(const SparseTensor<S>& T, const oracle::Dense& D) {
    std::size_t nz = 0;
    for (std::size_t x = 0; x < D.v.size(); ++x) {
        auto t = D.tuple(x);
        Q got = Q(T.get(t));
        if (got != D.v[x]) return false;
        nz += D.v[x] != 0;
    }
    return nz == T.nnz();
}

}  // namespace

TEST_CASE("partition text format", "[partition]") {
    auto p = parse_partition("P(2,2){1 2' | 2 1'}");
    CHECK(p.k() == 2);
    CHECK(p.l() == 2);
    CHECK(p == cross_partition());
    CHECK(parse_partition(p.str()) == p);
    CHECK(parse_partition("P(0,4){1' 4' | 2' 3'}") == pk_partition(2));
    CHECK_THROWS_AS(parse_partition("P(2,2){1 2 | 2 1'}"), invalid_input);
    CHECK_THROWS_AS(parse_partition("P(1,1){1}"), invalid_input);
}

TEST_CASE("canonical form and equality", "[partition][property]") {
    std::mt19937 g(3);
    for (int t = 0; t < 300; ++t) {
        int k = std::uniform_int_distribution<int>(0, 4)(g), l = std::uniform_int_distribution<int>(0, 4)(g);
        auto p = random_partition(k, l, g);
        // first-occurrence order
        int next = 0;
        for (int pt = 0; pt < p.points(); ++pt) {
            CHECK(p.block_of(pt) <= next);
            if (p.block_of(pt) == next) ++next;
        }
        CHECK(parse_partition(p.str()) == p);
        CHECK(adjoint(adjoint(p)) == p);
        auto q = random_partition(l, k, g), r = random_partition(1, 2, g);
        CHECK(tensor(tensor(p, q), r) == tensor(p, tensor(q, r)));
    }
}

TEST_CASE("composition counts loops", "[partition]") {
    auto c = compose(cap_partition(), cup_partition());
    CHECK(c.loops == 1);
    CHECK(c.p.points() == 0);
    auto s = compose(singleton_partition(), adjoint(singleton_partition()));
    CHECK(s.loops == 0);
    CHECK(s.p.k() == 1);
    auto snake = compose(tensor(identity_partition(1), cap_partition()), tensor(cup_partition(), identity_partition(1)));
    CHECK(snake.loops == 0);
    CHECK(snake.p == identity_partition(1));
}

TEST_CASE("functor against the dense oracle", "[functor][oracle]") {
    std::mt19937 g(5);
    for (int t = 0; t < 60; ++t) {
        int k = std::uniform_int_distribution<int>(0, 3)(g), l = std::uniform_int_distribution<int>(0, 3)(g);
        auto N = static_cast<std::uint32_t>(std::uniform_int_distribution<int>(2, 4)(g));
        auto p = random_partition(k, l, g);
        CHECK(matches(functor_T<long long>(p, N), oracle::functor(p, N)));
    }
}

TEST_CASE("functoriality against dense composition", "[functor][oracle][property]") {
    std::mt19937 g(9);
    for (int t = 0; t < 200; ++t) {
        int k = std::uniform_int_distribution<int>(0, 3)(g), l = std::uniform_int_distribution<int>(1, 3)(g),
            m = std::uniform_int_distribution<int>(0, 2)(g);
        auto N = static_cast<std::uint32_t>(std::uniform_int_distribution<int>(4, 5)(g));
        auto p = random_partition(k, l, g), q = random_partition(l, m, g);
        auto c = compose(q, p);
        auto dense = oracle::compose(oracle::functor(q, N), static_cast<std::size_t>(m), oracle::functor(p, N), static_cast<std::size_t>(l));
        auto T = functor_T<long long>(c.p, N);
        long long f = 1;
        for (int i = 0; i < c.loops; ++i) f *= N;
        T.scale(f);
        CHECK(matches(T, dense));
    }
}

TEST_CASE("deformed functor parity", "[functor][property]") {
    std::mt19937 g(13);
    for (int t = 0; t < 40; ++t) {
        // random pairing on 4 points split between the rows
        int k = 2 * std::uniform_int_distribution<int>(0, 2)(g);
        int l = 4 - k;
        std::vector<int> pts = {0, 1, 2, 3};
        std::shuffle(pts.begin(), pts.end(), g);
        std::vector<int> lab(4);
        lab[static_cast<std::size_t>(pts[0])] = lab[static_cast<std::size_t>(pts[1])] = 0;
        lab[static_cast<std::size_t>(pts[2])] = lab[static_cast<std::size_t>(pts[3])] = 1;
        auto p = Partition::from_labels(k, l, lab);
        const std::uint32_t N = 3;
        auto T = functor_T<long long>(p, N), D = functor_T_deformed<long long>(p, N);
        CHECK(T.nnz() == D.nnz());
        for (const auto& [key, v] : T.data()) {
            Index idx = T.decode(key);
            Index lo(idx.begin(), idx.begin() + l), up(idx.begin() + l, idx.end());
            CHECK(D.get(idx) == v * sign_sigma(lo) * sign_sigma(up));
        }
    }
    // nested pairings pick up no sign
    auto nested = parse_partition("P(0,4){1' 4' | 2' 3'}");
    CHECK(functor_T_deformed<long long>(nested, 4) == functor_T<long long>(nested, 4));
    CHECK_THROWS_AS(functor_T_deformed<long long>(block_partition(1, 2), 3), invalid_input);
}

TEST_CASE("antisymmetrizers", "[functor]") {
    for (std::uint32_t n = 1; n <= 5; ++n)
        for (int k = 0; k <= static_cast<int>(n); ++k)
            for (bool deformed : {false, true}) {
                auto r = projection_rank(k, n, deformed);
                std::uint64_t c = 1;
                for (int i = 1; i <= k; ++i) c = c * (n - static_cast<std::uint32_t>(k) + static_cast<std::uint32_t>(i)) / static_cast<std::uint32_t>(i);
                CHECK(r.rank == c);
                CHECK(r.idempotent);
                CHECK(r.self_adjoint);
            }
    auto A = antisymmetrizer(2, 4, false);
    CHECK(compose(A, A) == A);
    CHECK(trace(A) == Q(6));
}

TEST_CASE("permanent via the deformed antisymmetrizer", "[functor][oracle]") {
    std::mt19937 g(17);
    for (int size = 1; size <= 4; ++size)
        for (int t = 0; t < 10; ++t) {
            std::vector<std::vector<Q>> M(static_cast<std::size_t>(size), std::vector<Q>(static_cast<std::size_t>(size)));
            for (auto& row : M)
                for (auto& x : row) x = Q(std::uniform_int_distribution<int>(-6, 6)(g), std::uniform_int_distribution<int>(1, 3)(g));
            CHECK(permanent_via_wedge(M) == oracle::permanent(M));
        }
}

TEST_CASE("antisym2 is a self-adjoint idempotent", "[partlin]") {
    auto a = antisym2();
    CHECK(compose(a, a) == a);
    CHECK(adjoint(a) == a);
    CHECK(verify_identity(a, a).equal);
    CHECK_FALSE(verify_identity(a, identity_lin(2)).equal);
    CHECK_THROWS_AS(verify_identity(a, identity_lin(1)), invalid_input);
}

TEST_CASE("formal identities hold under the functor", "[partlin][oracle][property]") {
    std::mt19937 g(21);
    for (int t = 0; t < 40; ++t) {
        auto p = PartLin(random_partition(2, 2, g), PolyQ::n() - PolyQ(1));
        p += PartLin(random_partition(2, 2, g), PolyQ(Q(1, 2)));
        auto q = PartLin(random_partition(2, 2, g));
        auto e = compose(q, p);
        for (std::uint32_t N : {3u, 4u}) {
            auto got = evaluate(e, N);
            auto want = oracle::compose(oracle::functor(q, N), 2, oracle::functor(p, N), 2);
            CHECK(matches(got, want));
        }
    }
}

TEST_CASE("DSL examples", "[dsl]") {
    auto loop = dsl::eval_text("compose(cap, cup)");
    CHECK(loop == PartLin(Partition::from_labels(0, 0, {}), PolyQ::n()));
    CHECK(dsl::eval_text("cap * cup") == loop);
    CHECK(dsl::eval_text("asym(id2)") == antisym2());
    CHECK(dsl::eval_text("pk(2)") == PartLin(parse_partition("P(0,4){1' 4' | 2' 3'}")));
    auto s = dsl::eval_text("scale(poly(n-4), pk(5))");
    CHECK(s == PartLin(pk_partition(5), PolyQ::n() - PolyQ(4)));
    // parses as a difference; the two sides live in P(2,2) and P(4,4)
    auto d = dsl::parse("asym(block(2,2)) - asym(P(4,4){1 3'|2 4'|3 1'|4 2'})");
    CHECK(d->kind == dsl::Kind::binary);
    CHECK_THROWS_AS(dsl::check(d, dsl::Env{}), dsl::arity_error);
    CHECK(dsl::eval_text("asym(block(4,4)) - asym(P(4,4){1 3'|2 4'|3 1'|4 2'})").k() == 4);
}

TEST_CASE("DSL errors carry positions", "[dsl]") {
    CHECK_THROWS_AS(dsl::eval_text("cap + cup"), dsl::arity_error);
    CHECK_THROWS_AS(dsl::eval_text("compose(cap, "), dsl::syntax_error);
    CHECK_THROWS_AS(dsl::eval_text("frobnicate"), invalid_input);
    try {
        dsl::eval_text("id2 +\n  cap");
        FAIL("expected an arity error");
    } catch (const dsl::arity_error& e) {
        CHECK(e.pos.line >= 1);
    }
}

TEST_CASE("DSL print round trip", "[dsl][property]") {
    for (const char* t : {"compose(cap, cup)", "asym(id2) ox id(2) - scale(poly((n-2)/4), cross ox cross)", "adj(rotl(merge)) * fork",
                          "P(2,2){1 2' | 2 1'} * (id2 + cross)", "pk(3) + scale(poly(n^2), pk(3))", "rotr(rotl(merge)) - scale(2, block(0,3))"}) {
        auto a = dsl::parse(t);
        auto b = dsl::parse(dsl::print(a));
        CHECK(dsl::same(a, b));
        CHECK(dsl::eval(a, dsl::Env{}) == dsl::eval(b, dsl::Env{}));
    }
}

TEST_CASE("fixture parsing", "[dsl]") {
    auto fx = dsl::parse_fixture(
        "# comment\n"
        "let a = asym(id2)\n"
        "check idem: a * a == a\n"
        "coeff loop: cap * cup on P(0,0){} == n\n");
    REQUIRE(fx.statements.size() == 3);
    for (const auto& st : fx.statements) {
        if (st.type == dsl::Statement::Type::let) continue;
        auto r = dsl::run_statement(st, fx.env, {3, 4});
        CHECK(r.formal_ok);
        for (const auto& [N, ok] : r.oracle) CHECK(ok);
    }
    auto bad = dsl::parse_fixture("check wrong: id2 == cross\n");
    auto r = dsl::run_statement(bad.statements[0], bad.env, {3});
    CHECK_FALSE(r.formal_ok);
    CHECK_FALSE(r.oracle[0].second);
    CHECK_THROWS_AS(dsl::parse_fixture("let a = id2\nlet a = cross\n"), invalid_input);
    CHECK_THROWS_AS(dsl::parse_fixture("check x: id2\n"), invalid_input);
}

TEST_CASE("tensor oracle agrees with the blockwise functor", "[dsl][oracle]") {
    // the reduced oracle state against a state built from the formal value
    for (const char* f : {"L1-k4", "L2", "L3"}) {
        auto fx = dsl::load_fixture(std::string(QSYM_FIXTURE_DIR) + "/" + f + ".pd");
        int checked = 0;
        for (const auto& st : fx.statements) {
            if (st.type == dsl::Statement::Type::let) continue;
            for (std::uint32_t N : {4u, 5u}) {
                auto formal = dsl::eval(st.lhs, fx.env);
                CHECK(dsl::detail::Oracle::equal(dsl::evaluate_state(st.lhs, fx.env, N), dsl::state_of(formal, N)));
            }
            if (++checked == 2) break;
        }
    }
}

TEST_CASE("lemma fixtures", "[dsl][fixtures]") {
    std::map<std::string, bool> expect = {{"L1-k4", true}, {"L1-k5", true}, {"L1-k6", true}, {"L2-step1", true}, {"L2-square", true},
                                          {"L2-subtract", true}, {"L2-square2", true}, {"L2-alpha", true}, {"L3-PA1", true},
                                          {"L3-PA2", true}, {"L3-swap", true}, {"L3-precomp", false}, {"L3-final", false},
                                          {"L3-precomp-full", true}};
    for (const char* f : {"L1-k4", "L1-k5", "L2", "L3"}) {
        auto fx = dsl::load_fixture(std::string(QSYM_FIXTURE_DIR) + "/" + f);
        for (const auto& st : fx.statements) {
            if (st.type == dsl::Statement::Type::let) continue;
            auto r = dsl::run_statement(st, fx.env, {});
            INFO(st.name);
            REQUIRE(expect.count(st.name));
            CHECK(r.formal_ok == expect.at(st.name));
            if (st.name == "L2-alpha") CHECK(*r.found == parse_poly("(n-4)(n-6)(n-8)"));
        }
    }
}
