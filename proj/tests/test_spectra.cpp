#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "qsym/fourier.hpp"
#include "qsym/hamming.hpp"

using namespace qsym;

namespace {

std::vector<std::size_t> mults(const SpectralDecomposition& sp) { return sp.multiplicities(); }

}  // namespace

TEST_CASE("generating sets", "[cayley]") {
    AbelianGroup G({4});
    CHECK_THROWS_AS(make_generating_set(G, {{0}}), invalid_input);
    CHECK_THROWS_AS(make_generating_set(G, {{1}, {1}}), invalid_input);
    auto S = make_generating_set(G, {{1}, {3}});
    CHECK(S.symmetric);
    CHECK(S.generates);
    auto T = make_generating_set(G, {{1}});
    CHECK_FALSE(T.symmetric);
    auto U = make_generating_set(G, {{2}});
    CHECK_FALSE(U.generates);
    CayleyGraph g(G, U);
    CHECK_FALSE(g.warnings().empty());
}

TEST_CASE("family graphs", "[cayley]") {
    auto q3 = family("hypercube:3");
    CayleyGraph g(q3.group, q3.gens);
    CHECK(g.edge_count() == 12);
    auto k4 = family("complete:4");
    CHECK(CayleyGraph(k4.group, k4.gens).edge_count() == 6);
    CHECK(family("halved:3").gens.elems.size() == 6);
    CHECK_THROWS_AS(family("folded:1"), invalid_input);
    CHECK_THROWS_AS(family("cube:3"), invalid_input);
    CHECK_THROWS_AS(family("hamming:2"), invalid_input);
}

TEST_CASE("adjacency rule and symmetry", "[cayley][property]") {
    for (const char* f : {"hypercube:3", "halved:4", "folded:4", "hamming:2,3", "circulant:7,(1;3)"}) {
        auto fam = family(f);
        const auto& G = fam.group;
        CayleyGraph g(G, fam.gens);
        auto A = g.adjacency<long long>();
        for (std::uint64_t a = 0; a < G.order(); ++a)
            for (std::uint64_t b = 0; b < G.order(); ++b) {
                bool in_s = std::binary_search(fam.gens.elems.begin(), fam.gens.elems.end(), G.sub(G.at(b), G.at(a)));
                auto ua = static_cast<std::uint32_t>(a), ub = static_cast<std::uint32_t>(b);
                CHECK(A.get({ub, ua}) == (in_s ? 1 : 0));
                if (fam.gens.symmetric) CHECK(A.get({ub, ua}) == A.get({ua, ub}));
            }
    }
}

TEST_CASE("spectrum examples", "[cayley]") {
    auto q3 = family("hypercube:3");
    auto sp = spectrum(q3.group, q3.gens);
    REQUIRE(sp.items.size() == 4);
    CHECK(sp.items[0].value == Cyclotomic(3));
    CHECK(sp.items[3].value == Cyclotomic(-3));
    CHECK(mults(sp) == std::vector<std::size_t>{1, 3, 3, 1});
    CHECK(eigenvalue(q3.group, q3.gens, {1, 1, 0}) == Cyclotomic(-1));

    auto k4 = family("complete:4");
    auto s4 = spectrum(k4.group, k4.gens);
    REQUIRE(s4.items.size() == 2);
    CHECK(s4.items[0].value == Cyclotomic(3));
    CHECK(mults(s4) == std::vector<std::size_t>{1, 3});

    auto f5 = family("folded:4");
    CHECK(eigenvalue(f5.group, f5.gens, {1, 0, 0, 0}) == Cyclotomic(1));
}

TEST_CASE("spectral decomposition invariants", "[cayley][property]") {
    for (const char* f : {"hypercube:4", "halved:5", "folded:5", "hamming:2,4", "circulant:8,(1;7;2;6)", "circulant:5,(1;2)"}) {
        auto fam = family(f);
        auto sp = spectrum(fam.group, fam.gens);
        std::size_t total = 0;
        std::set<GroupElement> seen;
        for (std::size_t i = 0; i < sp.items.size(); ++i) {
            total += sp.items[i].labels.size();
            for (const auto& mu : sp.items[i].labels) seen.insert(mu);
            for (std::size_t j = i + 1; j < sp.items.size(); ++j) CHECK(sp.items[i].value != sp.items[j].value);
            if (fam.gens.symmetric) CHECK(sp.items[i].value.conj() == sp.items[i].value);
            if (i + 1 < sp.items.size())
                CHECK(sp.items[i].value.to_complex().real() >= sp.items[i + 1].value.to_complex().real() - 1e-9);
        }
        CHECK(total == fam.group.order());
        CHECK(seen.size() == fam.group.order());
    }
}

TEST_CASE("Fourier conjugation against the dense oracle", "[fourier][oracle]") {
    std::mt19937 g(11);
    for (auto orders : std::vector<std::vector<int>>{{4}, {2, 3}, {3, 3}, {2, 2, 2}, {5}}) {
        AbelianGroup G(orders);
        const auto N = static_cast<std::uint32_t>(G.order());
        SparseTensor<Q> M({N, N}, 1);
        std::vector<Q> dense(N * N, Q(0));
        for (std::uint32_t a = 0; a < N; ++a)
            for (std::uint32_t b = 0; b < N; ++b)
                if (g() % 3 == 0) {
                    Q v(static_cast<long long>(g() % 7) - 3);
                    M.set({a, b}, v);
                    dense[a * N + b] = v;
                }
        auto got = conjugate_by_fourier(G, M);
        auto want = oracle::fourier_conjugate(G, dense);
        for (std::uint32_t a = 0; a < N; ++a)
            for (std::uint32_t b = 0; b < N; ++b) CHECK(got.get({a, b}) == want[a * N + b]);
    }
}

TEST_CASE("Fourier transform diagonalizes Cayley adjacency", "[fourier]") {
    for (const char* f : {"hypercube:3", "circulant:6,(1;5)", "hamming:2,3"}) {
        auto fam = family(f);
        CayleyGraph g(fam.group, fam.gens);
        auto D = conjugate_by_fourier(fam.group, g.adjacency<long long>());
        CHECK(is_diagonal(D));
        for (const auto& mu : fam.group.elements()) {
            auto i = static_cast<std::uint32_t>(fam.group.index(mu));
            CHECK(D.get({i, i}) == eigenvalue(fam.group, fam.gens, mu));
        }
    }
}

TEST_CASE("eigenprojection basis is a scaled coisometry", "[fourier]") {
    auto fam = family("hypercube:4");
    auto sp = spectrum(fam.group, fam.gens);
    auto B = eigen_basis(fam.group, sp, "V1+V3");
    CHECK(B.dim() == 8);
    auto rows = detail::character_rows(fam.group, B, true);
    const std::size_t N = fam.group.order();
    for (std::size_t i = 0; i < B.dim(); ++i)
        for (std::size_t j = 0; j < B.dim(); ++j) {
            Cyclotomic s(Q(0));
            for (std::size_t a = 0; a < N; ++a) s = s + rows[i * N + a] * rows[j * N + a].conj();
            CHECK(s == Cyclotomic(i == j ? Q(static_cast<long long>(N)) : Q(0)));
        }
    CHECK_THROWS_AS(eigen_basis(fam.group, sp, "V9"), invalid_input);
    CHECK_THROWS_AS(eigen_basis(fam.group, sp, "W1"), invalid_input);
}

TEST_CASE("closed-form block intertwiner", "[fourier][oracle]") {
    for (auto orders : std::vector<std::vector<int>>{{3}, {2, 2}, {4}, {2, 3}}) {
        AbelianGroup G(orders);
        const auto N = static_cast<std::uint32_t>(G.order());
        auto all = label_basis(G, G.elements());
        for (int k = 0; k <= 3; ++k)
            for (int l = 0; k + l <= 3; ++l) {
                if (k + l == 0) continue;
                auto closed = convert<Cyclotomic>(hat_block_intertwiner(G, k, l), [](const Q& q) { return Cyclotomic(q); });
                CHECK(closed == project(G, functor_T<long long>(block_partition(k, l), N), all, all));
            }
        // k = l = 1 is the identity
        auto id = hat_block_intertwiner(G, 1, 1);
        CHECK(id == identity_tensor<Q>(N));
    }
}

TEST_CASE("automorphisms and permutation matrices", "[cayley]") {
    auto fam = family("hypercube:3");
    CayleyGraph g(fam.group, fam.gens);
    std::vector<std::uint32_t> flip(8);
    for (std::uint32_t a = 0; a < 8; ++a) flip[a] = a ^ 1u;  // translation by (0,0,1)
    CHECK(is_automorphism(g, flip));
    std::vector<std::uint32_t> bad = {1, 0, 2, 3, 4, 5, 6, 7};
    CHECK_FALSE(is_automorphism(g, bad));
    auto P = perm_matrix<long long>(flip);
    CHECK(P.get({1, 0}) == 1);
    CHECK(compose(P, P) == identity_tensor<long long>(8));
}

TEST_CASE("wreath representation of identity inputs", "[cayley]") {
    std::vector<std::vector<Q>> idm(2, std::vector<Q>{1, 0, 0, 0, 1, 0, 0, 0, 1});
    auto U = wreath_rep(idm, {0, 1}, 3);
    CHECK(U == identity_tensor<Q>(9));
    auto S = wreath_rep(idm, {1, 0}, 3);
    // swapping the coordinates of a 3 x 3 grid
    for (std::uint32_t a = 0; a < 3; ++a)
        for (std::uint32_t b = 0; b < 3; ++b) CHECK(S.get({b * 3 + a, a * 3 + b}) == 1);
}

TEST_CASE("Hamming operator spot entries", "[hamming]") {
    HammingOperators H(3, 2);
    auto R = H.merge();
    const std::size_t D = H.dim();
    // [R]^{(2,1)}_{(1,1),(1,1)} = 1
    CHECK(R(H.position(2, 1), H.position(1, 1) * D + H.position(1, 1)) == 1);
    CHECK((H.AAbb() * H.aBaB()).is_zero());
    CHECK((H.AAbb() * H.aBBa()).is_zero());
    CHECK_THROWS_AS(HammingOperators(1, 2), invalid_input);
}
