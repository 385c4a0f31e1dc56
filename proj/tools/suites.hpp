#pragma once
// Verification suites shared by `qsym verify` and the acceptance runner.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "qsym/dsl.hpp"
#include "qsym/fourier.hpp"
#include "qsym/hamming.hpp"
#include "qsym/report.hpp"

#ifndef QSYM_FIXTURE_DIR
#define QSYM_FIXTURE_DIR "fixtures"
#endif

namespace qsym::suites {

inline std::string fixture_dir() {
    if (const char* e = std::getenv("QSYM_FIXTURES")) return e;
    return QSYM_FIXTURE_DIR;
}

inline std::string fmt_list(const std::vector<std::string>& xs, std::size_t limit = 6) {
    std::string s;
    for (std::size_t i = 0; i < xs.size() && i < limit; ++i) s += (i ? ", " : "") + xs[i];
    if (xs.size() > limit) s += ", ... (" + std::to_string(xs.size()) + " total)";
    return s;
}

inline std::string join_orders(const std::vector<int>& o) {
    std::string s;
    for (std::size_t i = 0; i < o.size(); ++i) s += (i ? "xZ" : "") + std::to_string(o[i]);
    return s;
}

inline std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

inline std::string spectrum_str(const SpectralDecomposition& sp) {
    std::string s;
    for (const auto& it : sp.items) s += (s.empty() ? "" : " ") + it.value.str() + "^" + std::to_string(it.labels.size());
    return s;
}

// ---------------------------------------------------------------------------------------------
// Spectra and diagonalization

/// F^{-1} A F is diagonal and its diagonal matches the spectrum label by label.
inline void fourier_diagonal(VerificationReport& r, const Family& f) {
    const auto& G = f.group;
    config::require_dense(G.order() * G.order(), "fourier-check");
    CayleyGraph g(G, f.gens);
    auto D = conjugate_by_fourier(G, g.adjacency<long long>());
    bool diag = is_diagonal(D);
    auto sp = spectrum(G, f.gens);
    std::size_t bad = 0;
    for (const auto& it : sp.items)
        for (const auto& mu : it.labels) {
            auto i = static_cast<std::uint32_t>(G.index(mu));
            if (D.get({i, i}) != it.value) ++bad;
        }
    r.add(f.name + "/diagonal", "Fourier conjugation of the adjacency matrix", diag && bad == 0,
          std::string(diag ? "diagonal" : "NOT diagonal") + ", " + std::to_string(bad) + " diagonal entries differ from the spectrum; spectrum " +
              spectrum_str(sp));
}

inline void hypercube_spectrum(VerificationReport& r, int n) {
    auto f = family("hypercube:" + std::to_string(n));
    const auto& G = f.group;
    CayleyGraph g(G, f.gens);
    auto D = conjugate_by_fourier(G, g.adjacency<long long>());
    bool ok = is_diagonal(D);
    std::vector<std::string> diag;
    for (const auto& nu : degree_major_order(G)) {
        auto i = static_cast<std::uint32_t>(G.index(nu));
        Cyclotomic v = D.get({i, i});
        if (v != Cyclotomic(n - 2 * AbelianGroup::degree(nu))) ok = false;
        diag.push_back(v.str());
    }
    auto sp = spectrum(G, f.gens);
    bool mult = sp.items.size() == static_cast<std::size_t>(n + 1);
    for (std::size_t k = 0; mult && k < sp.items.size(); ++k)
        mult = sp.items[k].value == Cyclotomic(n - 2 * static_cast<long long>(k)) &&
               sp.items[k].labels.size() == binom(n, static_cast<int>(k));
    std::string d = n <= 4 ? "diag(" + fmt_list(diag, 64) + ")" : "spectrum " + spectrum_str(sp);
    r.add("hypercube:" + std::to_string(n) + "/diagonal", "hypercube diagonalization, degree-major order", ok && mult, d);
}

inline void halved_spectrum(VerificationReport& r, int n) {
    auto f = family("halved:" + std::to_string(n));
    auto sp = spectrum(f.group, f.gens);
    std::map<int, Cyclotomic> by_deg;
    bool formula = true;
    for (const auto& it : sp.items)
        for (const auto& mu : it.labels) {
            int d = AbelianGroup::degree(mu);
            Q want = Q((2 * d - n - 1) * (2 * d - n - 1) - n - 1, 2);
            if (it.value != Cyclotomic(want)) formula = false;
            by_deg[d] = it.value;
        }
    bool sym = true;
    for (int d = 1; d <= n; ++d)
        if (by_deg.at(d) != by_deg.at(n + 1 - d)) sym = false;
    const std::string id = "halved:" + std::to_string(n);
    r.add(id + "/eigenvalues", "halved cube eigenvalue by degree", formula, "spectrum " + spectrum_str(sp));
    r.add(id + "/degeneracy", "halved cube degeneracy d <-> n+1-d", sym, sym ? "" : "some degree pair differs");
}

inline void folded_spectrum(VerificationReport& r, int n) {
    auto f = family("folded:" + std::to_string(n));
    auto sp = spectrum(f.group, f.gens);
    const std::string id = "folded:" + std::to_string(n);
    bool formula = true;
    std::map<int, Cyclotomic> by_deg;
    for (const auto& it : sp.items)
        for (const auto& mu : it.labels) {
            int d = AbelianGroup::degree(mu);
            if (it.value != Cyclotomic(n - 2 * d + (d % 2 ? -1 : 1))) formula = false;
            by_deg[d] = it.value;
        }
    r.add(id + "/eigenvalues", "folded cube eigenvalue n - 2d + (-1)^d", formula, "spectrum " + spectrum_str(sp));
    bool pairs = true;
    for (int d = 1; 2 * d <= n; ++d)
        if (by_deg.at(2 * d - 1) != by_deg.at(2 * d)) pairs = false;
    r.add(id + "/pairing", "folded cube degrees 2d-1 and 2d share an eigenvalue", pairs, "");
    // V_0 = degree 0, V_i = degrees {2i-1, 2i}
    bool pattern = sp.items.size() == static_cast<std::size_t>((n + 1) / 2 + 1);
    for (std::size_t i = 0; pattern && i < sp.items.size(); ++i)
        for (const auto& mu : sp.items[i].labels) {
            int d = AbelianGroup::degree(mu);
            if (static_cast<std::size_t>((d + 1) / 2) != i) pattern = false;
        }
    r.add(id + "/eigenspaces", "folded cube eigenspace label pattern", pattern,
          std::to_string(sp.items.size()) + " distinct eigenvalues");
    // the one-line closed form n - 4 ceil(d/2) against the direct sum
    std::vector<std::string> diffs;
    for (int d = 0; d <= n; ++d) {
        long long direct = n - 2 * d + (d % 2 ? -1 : 1);
        long long closed = n - 4 * ((d + 1) / 2);
        if (direct != closed) diffs.push_back("d=" + std::to_string(d) + ": " + std::to_string(direct) + " vs " + std::to_string(closed));
    }
    if (!diffs.empty())
        r.finding(id + "/closed-form", "folded cube closed form n - 4 ceil(d/2)",
                  "closed form is off by one against the character sum (" + fmt_list(diffs, 3) +
                      "); the character sum equals n + 1 - 4 ceil(d/2)");
}

inline void hamming_spectrum(VerificationReport& r, int n, int m) {
    auto f = family("hamming:" + std::to_string(n) + "," + std::to_string(m));
    auto sp = spectrum(f.group, f.gens);
    bool formula = true;
    for (const auto& it : sp.items)
        for (const auto& mu : it.labels) {
            long long l = std::count(mu.begin(), mu.end(), 0);
            if (it.value != Cyclotomic(m * l - n)) formula = false;
        }
    r.add("hamming:" + std::to_string(n) + "," + std::to_string(m) + "/eigenvalues", "Hamming eigenvalue m*l - n",
          formula && sp.items.size() == static_cast<std::size_t>(n + 1), "spectrum " + spectrum_str(sp));
}

inline void complete_spectrum(VerificationReport& r, int m) {
    auto f = family("complete:" + std::to_string(m));
    auto sp = spectrum(f.group, f.gens);
    bool ok = sp.items.size() == 2 && sp.items[0].value == Cyclotomic(m - 1) && sp.items[0].labels.size() == 1 &&
              sp.items[1].value == Cyclotomic(-1) && sp.items[1].labels.size() == static_cast<std::size_t>(m - 1);
    r.add("complete:" + std::to_string(m) + "/spectrum", "complete graph spectrum", ok, spectrum_str(sp));
}

// ---------------------------------------------------------------------------------------------
// Intertwiners

/// Closed-form block intertwiner against the general Fourier conjugation of T_{b_{k,l}}.
inline void block_closed_form(VerificationReport& r, const std::vector<int>& orders, int k, int l) {
    AbelianGroup G(orders);
    const auto N = static_cast<std::uint32_t>(G.order());
    auto closed = hat_block_intertwiner(G, k, l);
    auto B = label_basis(G, G.elements());
    auto brute = project(G, functor_T<long long>(block_partition(k, l), N), B, B);
    bool ok = brute == convert<Cyclotomic>(closed, [](const Q& q) { return Cyclotomic(q); });
    r.add("block-closed-form[Z" + join_orders(orders) + ",k=" + std::to_string(k) + ",l=" + std::to_string(l) + "]",
          "Fourier transform of block intertwiners", ok, std::to_string(closed.nnz()) + " entries");
}

inline std::vector<std::vector<int>> small_groups(std::uint64_t max_order) {
    std::vector<std::vector<int>> all = {{1}, {2}, {3}, {4}, {2, 2}, {5}, {6}, {2, 3}, {3, 2}, {7}, {8}, {4, 2}, {2, 4}, {2, 2, 2}, {9}, {3, 3}};
    std::vector<std::vector<int>> out;
    for (auto& o : all) {
        std::uint64_t N = 1;
        for (int m : o) N *= static_cast<std::uint64_t>(m);
        if (N <= max_order) out.push_back(o);
    }
    return out;
}

// Rational entries of a projected tensor, or nullopt if one is irrational.
inline std::optional<SparseTensor<Q>> rational_tensor(const SparseTensor<Cyclotomic>& T) {
    SparseTensor<Q> R(T.shape(), T.out_axes());
    for (const auto& [k, v] : T.data()) {
        Cyclotomic c = v.normalized();
        if (!c.is_rational()) return std::nullopt;
        R.set_key(k, c.rational_part());
    }
    return R;
}

// Re-indexes a tensor on basis positions through a position -> index map on every axis.
inline SparseTensor<Q> relabel(const SparseTensor<Q>& T, const std::vector<std::uint32_t>& map, std::uint32_t dim) {
    SparseTensor<Q> R = SparseTensor<Q>::uniform(dim, T.out_axes(), T.in_axes());
    for (const auto& [k, v] : T.data()) {
        Index idx = T.decode(k);
        for (auto& x : idx) x = map[x];
        R.add(idx, v);
    }
    return R;
}

/// 2^n times the V1 projection of T_{b_{2,2}} on the hypercube, against T_aabb + T_abba + T_abab - 2 T_aaaa.
inline void hypercube_projection(VerificationReport& r, int n) {
    auto f = family("hypercube:" + std::to_string(n));
    const auto& G = f.group;
    const auto N = static_cast<std::uint32_t>(G.order());
    auto sp = spectrum(G, f.gens);
    auto B = eigen_basis(G, sp, "V1");
    std::vector<std::uint32_t> map;
    for (const auto& mu : B.labels)
        map.push_back(static_cast<std::uint32_t>(std::find(mu.begin(), mu.end(), 1) - mu.begin()));
    auto P = project(G, functor_T<long long>(block_partition(2, 2), N), B, B);
    auto Pq = rational_tensor(P);
    const auto un = static_cast<std::uint32_t>(n);
    SparseTensor<Q> want = SparseTensor<Q>::uniform(un, 2, 2);
    for (const char* s : {"P(2,2){1 2 | 1' 2'}", "P(2,2){1 2' | 2 1'}", "P(2,2){1 1' | 2 2'}"})
        want += convert<Q>(functor_T<long long>(parse_partition(s), un), [](long long x) { return Q(x); });
    auto aaaa = convert<Q>(functor_T<long long>(block_partition(2, 2), un), [](long long x) { return Q(x); });
    aaaa.scale(Q(-2));
    want += aaaa;
    bool ok = false;
    std::string d = "projection has irrational entries";
    if (Pq) {
        auto got = relabel(*Pq, map, un);
        got.scale(qpow(Q(2), static_cast<unsigned>(n)));
        ok = got == want;
        d = std::to_string(got.nnz()) + " entries, expected " + std::to_string(want.nnz());
    }
    r.add("hypercube:" + std::to_string(n) + "/projected-b22", "projected four-block intertwiner on V1", ok, d);
}

/// T_{b_{n+1,0}} projected to V1 (degree 1 and degree n) of the halved cube, against N times the
/// indicator of permutations of (1..n+1).
inline void halved_block(VerificationReport& r, int n) {
    auto f = family("halved:" + std::to_string(n));
    const auto& G = f.group;
    const auto N = static_cast<std::uint32_t>(G.order());
    config::require_sparse(binom(2 * n + 1, n + 1) * static_cast<std::uint64_t>(n + 1), "halved block check");
    auto sp = spectrum(G, f.gens);
    auto B = eigen_basis(G, sp, "V1");
    std::vector<std::uint32_t> map;
    for (const auto& mu : B.labels) {
        int d = AbelianGroup::degree(mu);
        map.push_back(d == n ? static_cast<std::uint32_t>(n)
                             : static_cast<std::uint32_t>(std::find(mu.begin(), mu.end(), 1) - mu.begin()));
    }
    auto P = project(G, functor_T<long long>(block_partition(n + 1, 0), N), B, B);
    auto Pq = rational_tensor(P);
    const auto d = static_cast<std::uint32_t>(n + 1);
    SparseTensor<Q> want = SparseTensor<Q>::uniform(d, 0, d);
    Index perm(d);
    std::iota(perm.begin(), perm.end(), 0u);
    do want.set(perm, Q(static_cast<long long>(N)));
    while (std::next_permutation(perm.begin(), perm.end()));
    bool ok = false;
    std::string detail = "projection has irrational entries";
    if (Pq) {
        auto got = relabel(*Pq, map, d);
        ok = got == want;
        std::size_t extra = 0;
        for (const auto& [k, v] : got.data())
            if (want.get_key(k) == 0) ++extra;
        detail = std::to_string(got.nnz()) + " nonzero entries (N times indicator), " + std::to_string(want.nnz()) +
                 " permutations expected, " + std::to_string(extra) + " entries outside the permutations";
    }
    r.add("halved:" + std::to_string(n) + "/block-permutations", "projected block intertwiner on V1 + Vn", ok, detail);
}

// Pair {i, j} of [n+1] attached to a degree-1 or degree-2 label of Z_2^n.
inline std::pair<int, int> folded_pair(const GroupElement& mu, int n) {
    std::vector<int> ones;
    for (std::size_t i = 0; i < mu.size(); ++i)
        if (mu[i]) ones.push_back(static_cast<int>(i));
    if (ones.size() == 1) return {ones[0], n};
    return {ones[0], ones[1]};
}

/// Fork intertwiner projected to degrees 1 and 2 of the folded cube, against (1/N) times the
/// indicator that the three pairs can be paired.
inline void folded_fork(VerificationReport& r, int n) {
    auto f = family("folded:" + std::to_string(n));
    const auto& G = f.group;
    const auto N = static_cast<std::uint32_t>(G.order());
    auto sp = spectrum(G, f.gens);
    auto B = eigen_basis(G, sp, "V1");
    auto P = project(G, functor_T<long long>(fork_partition(), N), B, B);
    auto Pq = rational_tensor(P);
    const std::uint32_t D = B.dim();
    std::vector<std::pair<int, int>> pairs;
    for (const auto& mu : B.labels) pairs.push_back(folded_pair(mu, n));
    std::size_t bad = 0, support = 0;
    if (Pq) {
        for (std::uint32_t a = 0; a < D; ++a)
            for (std::uint32_t b = 0; b < D; ++b)
                for (std::uint32_t c = 0; c < D; ++c) {
                    std::map<int, int> cnt;
                    for (auto x : {a, b, c}) {
                        cnt[pairs[x].first] ^= 1;
                        cnt[pairs[x].second] ^= 1;
                    }
                    bool paired = std::all_of(cnt.begin(), cnt.end(), [](const auto& kv) { return kv.second == 0; });
                    Q want = paired ? Q(1) / Q(static_cast<long long>(N)) : Q(0);
                    support += paired;
                    if (Pq->get({a, b, c}) != want) ++bad;
                }
    }
    r.add("folded:" + std::to_string(n) + "/fork", "projected fork intertwiner on degrees 1 and 2", Pq && bad == 0,
          std::to_string(support) + " pairable triples, " + std::to_string(bad) + " mismatching entries (scale 1/N)");
}

/// Deformed functor of the six-pairing combination against the pairing indicator on tuples with
/// i_k != j_k, in dimension d.
inline void folded_pairing_indicator(VerificationReport& r, std::uint32_t d) {
    auto fx = dsl::load_fixture(fixture_dir() + "/folded-eq.pd");
    const dsl::NodePtr* q = fx.env.find("q");
    if (!q) throw invalid_input("folded-eq fixture does not define q");
    auto T = evaluate(dsl::eval(*q, fx.env), d, true);
    std::uint64_t V = 1;
    for (int i = 0; i < 8; ++i) V *= d;
    Index idx(8);
    std::size_t bad = 0, support_bad = 0, support = 0;
    std::set<std::string> values;
    for (std::uint64_t x = 0; x < V; ++x) {
        std::uint64_t t = x;
        for (int a = 7; a >= 0; --a) {
            idx[static_cast<std::size_t>(a)] = static_cast<std::uint32_t>(t % d);
            t /= d;
        }
        bool off = true;
        for (int k = 0; k < 4; ++k) off = off && idx[2 * static_cast<std::size_t>(k)] != idx[2 * static_cast<std::size_t>(k) + 1];
        std::vector<int> cnt(d, 0);
        for (auto v : idx) ++cnt[v];
        bool paired = off && std::all_of(cnt.begin(), cnt.end(), [](int c) { return c % 2 == 0; });
        Q got = T.get(idx);
        if (!off) {
            if (got != 0) ++support_bad;
            continue;
        }
        support += paired;
        if ((got != 0) != paired) ++support_bad;
        if (got != 0) values.insert(to_string(got));
        if (got != (paired ? Q(1) : Q(0))) ++bad;
    }
    std::vector<std::string> vs(values.begin(), values.end());
    r.add("folded-indicator[N=" + std::to_string(d) + "]", "deformed functor of the six-pairing combination", bad == 0 && support_bad == 0,
          std::to_string(support) + " pairable tuples; support " + (support_bad ? "differs" : "agrees") + "; " + std::to_string(bad) +
              " entries differ from 1/0; values on the support: " + fmt_list(vs, 8));
}

// ---------------------------------------------------------------------------------------------
// Automorphisms

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(0x5eed1234ULL);
    return g;
}

inline std::vector<int> random_perm(int n, std::mt19937_64& g) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), g);
    return p;
}

/// Vertex permutation alpha -> (f_1(alpha_{pi(1)}), ..., f_n(alpha_{pi(n)})) + beta.
inline std::vector<std::uint32_t> coordinate_automorphism(const AbelianGroup& G, bool alphabet, std::mt19937_64& g) {
    const int n = static_cast<int>(G.rank());
    const int m = G.orders()[0];
    auto pi = random_perm(n, g);
    std::vector<std::vector<int>> fs;
    for (int i = 0; i < n; ++i) fs.push_back(alphabet ? random_perm(m, g) : [&] {
        std::vector<int> id(static_cast<std::size_t>(m));
        std::iota(id.begin(), id.end(), 0);
        return id;
    }());
    GroupElement beta = G.at(std::uniform_int_distribution<std::uint64_t>(0, G.order() - 1)(g));
    std::vector<std::uint32_t> perm(G.order());
    for (std::uint64_t a = 0; a < G.order(); ++a) {
        GroupElement x = G.at(a), y(x.size());
        for (int i = 0; i < n; ++i)
            y[static_cast<std::size_t>(i)] = fs[static_cast<std::size_t>(i)][static_cast<std::size_t>(x[static_cast<std::size_t>(pi[static_cast<std::size_t>(i)])])];
        perm[a] = static_cast<std::uint32_t>(G.index(G.add(y, beta)));
    }
    return perm;
}

/// F^{-1} P F has no entries between labels of distinct eigenvalues.
inline void eigenspace_invariance(VerificationReport& r, const std::string& fam, int samples) {
    auto f = family(fam);
    const auto& G = f.group;
    config::require_dense(G.order() * G.order(), "eigenspace invariance");
    CayleyGraph g(G, f.gens);
    auto sp = spectrum(G, f.gens);
    std::vector<std::size_t> space(G.order());
    for (std::size_t s = 0; s < sp.items.size(); ++s)
        for (const auto& mu : sp.items[s].labels) space[G.index(mu)] = s;
    const bool alphabet = fam.rfind("hamming", 0) == 0;
    int not_auto = 0, leaks = 0;
    for (int t = 0; t < samples; ++t) {
        auto perm = coordinate_automorphism(G, alphabet, rng());
        if (!is_automorphism(g, perm)) {
            ++not_auto;
            continue;
        }
        auto U = conjugate_by_fourier(G, perm_matrix<long long>(perm));
        for (const auto& [k, v] : U.data()) {
            Index ij = U.decode(k);
            if (space[ij[0]] != space[ij[1]]) {
                ++leaks;
                break;
            }
        }
    }
    r.add(fam + "/invariance", "eigenspaces invariant under sampled automorphisms", not_auto == 0 && leaks == 0,
          std::to_string(samples) + " samples, " + std::to_string(not_auto) + " not automorphisms, " + std::to_string(leaks) +
              " mixing eigenspaces");
}

// ---------------------------------------------------------------------------------------------
// Hamming operators

inline std::string matrix_summary(const QMatrix& M, const HammingOperators& H, std::size_t limit = 3) {
    std::string s = std::to_string(M.nnz()) + " nonzero";
    std::size_t shown = 0;
    const std::size_t D = H.dim();
    for (std::size_t r = 0; r < M.rows && shown < limit; ++r)
        for (std::size_t c = 0; c < M.cols && shown < limit; ++c) {
            if (M(r, c) == 0) continue;
            auto lab = [&](std::size_t p) {
                auto [a, i] = H.label(p);
                return std::to_string(a) + "." + std::to_string(i);
            };
            s += (shown ? "; " : ": ") + std::string("[") + lab(r / D) + " " + lab(r % D) + " | " + lab(c / D) + " " + lab(c % D) +
                 "] = " + to_string(M(r, c));
            ++shown;
        }
    return s;
}

inline void hamming_operators(VerificationReport& r, int n, int m, HammingOperators::AABBReading reading, bool with_projection = true) {
    HammingOperators H(m, n);
    const std::string id = "hamming:" + std::to_string(n) + "," + std::to_string(m);
    auto AAbb = H.AAbb(), aBaB = H.aBaB(), aBBa = H.aBBa(), conn = H.connecter(), merge = H.merge();
    // N T^_{b22} restricted to degree-one labels
    if (with_projection) {
        auto f = family("hamming:" + std::to_string(n) + "," + std::to_string(m));
        const auto& G = f.group;
        const auto N = static_cast<std::uint32_t>(G.order());
        auto sp = spectrum(G, f.gens);
        auto B = eigen_basis(G, sp, "V1");
        auto P = rational_tensor(project(G, functor_T<long long>(block_partition(2, 2), N), B, B));
        bool ok = false;
        if (P) {
            std::vector<std::size_t> pos;
            for (const auto& mu : B.labels) {
                std::size_t i = 0;
                while (mu[i] == 0) ++i;
                pos.push_back(H.position(static_cast<int>(mu[i]), static_cast<int>(i) + 1));
            }
            const std::size_t D = H.dim();
            QMatrix got(D * D, D * D);
            for (const auto& [k, v] : P->data()) {
                Index ix = P->decode(k);
                got(pos[ix[0]] * D + pos[ix[1]], pos[ix[2]] * D + pos[ix[3]]) = v * Q(static_cast<long long>(N));
            }
            ok = got == conn + AAbb + aBaB + aBBa;
        }
        r.add(id + "/connecter-split", "N times the projected four-block splits into four operators", ok, "");
    }
    {
        auto mm = merge.transpose() * merge;
        bool same = mm == conn;
        if (same)
            r.add(id + "/connecter-from-merge", "connecter as R_merge* R_merge", true, "");
        else
            r.finding(id + "/connecter-from-merge", "connecter as R_merge* R_merge",
                      "displayed delta formula differs from R_merge* R_merge, residual " + matrix_summary(conn - mm, H));
    }
    auto z1 = AAbb * aBaB, z2 = AAbb * aBBa;
    r.add(id + "/AAbb-aBaB", "R_AAbb R_aBaB = 0", z1.is_zero(), z1.is_zero() ? "" : matrix_summary(z1, H));
    r.add(id + "/AAbb-aBBa", "R_AAbb R_aBBa = 0", z2.is_zero(), z2.is_zero() ? "" : matrix_summary(z2, H));
    auto S = AAbb + aBaB + aBBa;
    auto S2 = S * S, S3 = S2 * S;
    const Q mq(m);
    {
        const bool mirror = reading == HammingOperators::AABBReading::mirror;
        const char* rname = mirror ? "mirror" : "coincident";
        const std::string sid = id + (mirror ? "/square" : "/square-coincident");
        auto res = S2 - (Q(2) * (mq - 1) * H.AABB(reading) + Q(2) * aBBa + Q(2) * aBaB);
        if (res.is_zero())
            r.add(sid, std::string("squared sum, R_AABB reading ") + rname, true, "");
        else
            r.finding(sid, std::string("squared sum, R_AABB reading ") + rname,
                      "residual S^2 - display: " + matrix_summary(res, H));
    }
    {
        auto res = S3 - (Q(4) * (mq - 1) * (mq - 1) * AAbb + Q(4) * aBBa + Q(4) * aBaB);
        r.add(id + "/cube", "third power of the sum", res.is_zero(), res.is_zero() ? "" : "residual S^3 - display: " + matrix_summary(res, H));
    }
    {
        auto res = S3 - Q(4) * S - Q(4) * mq * (mq - 2) * AAbb;
        r.add(id + "/cube-minus-4S", "S^3 - 4 S = 4m(m-2) R_AAbb", res.is_zero(),
              res.is_zero() ? "" : "residual: " + matrix_summary(res, H));
    }
}

// ---------------------------------------------------------------------------------------------
// Wreath products

inline std::vector<Q> perm_as_matrix(const std::vector<int>& p) {
    const std::size_t m = p.size();
    std::vector<Q> M(m * m, Q(0));
    for (std::size_t a = 0; a < m; ++a) M[static_cast<std::size_t>(p[a]) * m + a] = 1;
    return M;
}

/// u~ from permutation matrices equals the product action b_k = v_k(a_{w(k)}) and commutes with the
/// adjacency matrix of the n-fold Cartesian power of K_m.
inline void wreath(VerificationReport& r, int n, int m, int samples) {
    std::vector<CayleyGraph> copies;
    for (int i = 0; i < n; ++i) {
        auto f = family("complete:" + std::to_string(m));
        copies.emplace_back(f.group, f.gens);
    }
    auto A = convert<Q>(cartesian_adjacency(copies), [](long long x) { return Q(x); });
    std::uint32_t dim = 1;
    for (int i = 0; i < n; ++i) dim *= static_cast<std::uint32_t>(m);
    int not_product = 0, not_commuting = 0;
    for (int t = 0; t < samples; ++t) {
        std::vector<std::vector<int>> vs;
        std::vector<std::vector<Q>> mats;
        for (int i = 0; i < n; ++i) {
            vs.push_back(random_perm(m, rng()));
            mats.push_back(perm_as_matrix(vs.back()));
        }
        auto w = random_perm(n, rng());
        auto U = wreath_rep(mats, w, m);
        SparseTensor<Q> P({dim, dim}, 1);
        std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
        for (std::uint32_t x = 0; x < dim; ++x) {
            std::uint32_t tx = x;
            for (int i = n; i-- > 0;) {
                a[static_cast<std::size_t>(i)] = static_cast<int>(tx % static_cast<std::uint32_t>(m));
                tx /= static_cast<std::uint32_t>(m);
            }
            std::uint32_t y = 0;
            for (int k = 0; k < n; ++k) {
                auto uk = static_cast<std::size_t>(k);
                b[uk] = vs[uk][static_cast<std::size_t>(a[static_cast<std::size_t>(w[uk])])];
                y = y * static_cast<std::uint32_t>(m) + static_cast<std::uint32_t>(b[uk]);
            }
            P.set({y, x}, Q(1));
        }
        if (!(U == P)) ++not_product;
        if (!(compose(U, A) == compose(A, U))) ++not_commuting;
    }
    const std::string id = "wreath:" + std::to_string(n) + "," + std::to_string(m);
    r.add(id + "/product-action", "wreath representation from permutation matrices", not_product == 0,
          std::to_string(samples) + " samples, " + std::to_string(not_product) + " differ from the product action");
    r.add(id + "/commutes", "wreath representation commutes with the Cartesian power adjacency", not_commuting == 0,
          std::to_string(samples) + " samples, " + std::to_string(not_commuting) + " fail to commute");
}

// ---------------------------------------------------------------------------------------------
// Partition calculus

inline const std::vector<std::string>& lemma_fixtures() {
    static const std::vector<std::string> names = {"L1-k4", "L1-k5", "L1-k6", "L2", "L3"};
    return names;
}

/// Every check/coeff statement of a fixture, formally and through the tensor oracle.
inline void fixture_checks(VerificationReport& r, const std::string& path, const std::vector<std::uint32_t>& ns) {
    auto fx = dsl::load_fixture(path);
    for (const auto& st : fx.statements) {
        if (st.type == dsl::Statement::Type::let) continue;
        auto res = dsl::run_statement(st, fx.env, ns);
        bool oracle_ok = std::all_of(res.oracle.begin(), res.oracle.end(), [](const auto& p) { return p.second; });
        bool consistent = std::all_of(res.oracle.begin(), res.oracle.end(), [&](const auto& p) { return p.second == res.formal_ok; });
        std::string d = res.formal_ok ? "holds formally" : "differs formally (" + std::to_string(res.difference.size()) + " terms in lhs - rhs)";
        if (st.type == dsl::Statement::Type::coeff && res.found) d += ", coefficient " + res.found->str();
        if (!ns.empty()) {
            d += "; tensors at N =";
            for (const auto& [N, ok] : res.oracle) d += " " + std::to_string(N) + (ok ? "" : "(differs)");
            if (!consistent) d += "; ORACLE DISAGREES WITH THE FORMAL VERDICT";
        }
        r.add(res.name, std::filesystem::path(path).filename().string() + ":" + std::to_string(res.pos.line),
              res.formal_ok && oracle_ok && consistent, d);
    }
}

inline VerificationReport lemmas(const std::vector<std::uint32_t>& ns = {8, 9, 10}) {
    VerificationReport r;
    r.suite = "lemmas";
    for (const auto& name : lemma_fixtures()) fixture_checks(r, fixture_dir() + "/" + name + ".pd", ns);
    return r;
}

// ---------------------------------------------------------------------------------------------
// Named suites

inline VerificationReport hypercube_suite(int n) {
    VerificationReport r;
    r.suite = "hypercube:" + std::to_string(n);
    hypercube_spectrum(r, n);
    if (n >= 1 && n <= 10) hypercube_projection(r, n);
    if (n <= 8) eigenspace_invariance(r, r.suite, 5);
    return r;
}

inline VerificationReport halved_suite(int n) {
    VerificationReport r;
    r.suite = "halved:" + std::to_string(n);
    halved_spectrum(r, n);
    fourier_diagonal(r, family(r.suite));
    if (n >= 2 && n <= 6) halved_block(r, n);
    if (n <= 8) eigenspace_invariance(r, r.suite, 5);
    return r;
}

inline VerificationReport folded_suite(int n) {
    VerificationReport r;
    r.suite = "folded:" + std::to_string(n);
    folded_spectrum(r, n);
    fourier_diagonal(r, family(r.suite));
    if (n <= 8) folded_fork(r, n);
    if (n + 1 <= 7) folded_pairing_indicator(r, static_cast<std::uint32_t>(n + 1));
    if (n <= 8) eigenspace_invariance(r, r.suite, 5);
    return r;
}

inline VerificationReport hamming_suite(int n, int m) {
    VerificationReport r;
    r.suite = "hamming:" + std::to_string(n) + "," + std::to_string(m);
    hamming_spectrum(r, n, m);
    complete_spectrum(r, m);
    fourier_diagonal(r, family(r.suite));
    hamming_operators(r, n, m, HammingOperators::AABBReading::mirror);
    eigenspace_invariance(r, r.suite, 5);
    return r;
}

inline VerificationReport wreath_suite(int n, int m) {
    VerificationReport r;
    r.suite = "wreath:" + std::to_string(n) + "," + std::to_string(m);
    wreath(r, n, m, 20);
    return r;
}

// ---------------------------------------------------------------------------------------------
// Acceptance criteria

struct Criterion {
    int id;
    std::string title;
    std::function<VerificationReport()> run;
    bool expected_failure = false;
};

inline VerificationReport make(const std::string& name) {
    VerificationReport r;
    r.suite = name;
    return r;
}

inline std::vector<std::uint64_t> random_partition_labels(int points, std::mt19937_64& g) {
    std::vector<std::uint64_t> labels(static_cast<std::size_t>(points));
    for (auto& x : labels) x = std::uniform_int_distribution<std::uint64_t>(0, static_cast<std::uint64_t>(points - 1))(g);
    return labels;
}

inline Partition random_partition(int k, int l, std::mt19937_64& g) {
    auto raw = random_partition_labels(k + l, g);
    std::vector<int> labels(raw.begin(), raw.end());
    return Partition::from_labels(k, l, labels);
}

inline long long ipow_ll(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline Q permanent_direct(const std::vector<std::vector<Q>>& M) {
    const std::size_t n = M.size();
    std::vector<std::size_t> s(n);
    std::iota(s.begin(), s.end(), 0);
    Q total = 0;
    do {
        Q p = 1;
        for (std::size_t i = 0; i < n; ++i) p *= M[i][s[i]];
        total += p;
    } while (std::next_permutation(s.begin(), s.end()));
    return total;
}

inline std::vector<Criterion> criteria() {
    std::vector<Criterion> c;
    c.push_back({1, "Q_3 diagonalization in degree-major order", [] {
                     auto r = make("criterion-1");
                     hypercube_spectrum(r, 3);
                     return r;
                 }});
    c.push_back({2, "hypercube diagonal n - 2 deg with binomial multiplicities, n <= 8", [] {
                     auto r = make("criterion-2");
                     for (int n = 1; n <= 8; ++n) hypercube_spectrum(r, n);
                     return r;
                 }});
    c.push_back({3, "halved cube eigenvalues and degeneracy, n = 2..8", [] {
                     auto r = make("criterion-3");
                     for (int n = 2; n <= 8; ++n) halved_spectrum(r, n);
                     return r;
                 }});
    c.push_back({4, "folded cube eigenvalues, pairing and eigenspaces, n = 2..8", [] {
                     auto r = make("criterion-4");
                     for (int n = 2; n <= 8; ++n) folded_spectrum(r, n);
                     return r;
                 }});
    c.push_back({5, "Hamming and complete graph spectra", [] {
                     auto r = make("criterion-5");
                     for (int n = 1; n <= 4; ++n)
                         for (int m = 2; m <= 5; ++m) hamming_spectrum(r, n, m);
                     for (int m = 2; m <= 8; ++m) complete_spectrum(r, m);
                     return r;
                 }});
    c.push_back({6, "closed-form block intertwiner against Fourier conjugation, N <= 9, k + l <= 4", [] {
                     auto r = make("criterion-6");
                     for (const auto& o : small_groups(9))
                         for (int k = 0; k <= 4; ++k)
                             for (int l = 0; k + l <= 4; ++l)
                                 if (k + l >= 1) block_closed_form(r, o, k, l);
                     return r;
                 }});
    c.push_back({7, "functoriality on random composable pairs, N = 4..7", [] {
                     auto r = make("criterion-7");
                     auto& g = rng();
                     int done = 0, bad = 0;
                     while (done < 240) {
                         int k = std::uniform_int_distribution<int>(0, 3)(g);
                         int l = std::uniform_int_distribution<int>(0, 3)(g);
                         int m = std::uniform_int_distribution<int>(0, 3)(g);
                         auto N = static_cast<std::uint32_t>(std::uniform_int_distribution<int>(4, 7)(g));
                         if (k + l == 0 || l + m == 0) continue;
                         auto p = random_partition(k, l, g), q = random_partition(l, m, g);
                         auto c2 = compose(q, p);
                         auto lhs = compose(functor_T<long long>(q, N), functor_T<long long>(p, N));
                         auto rhs = functor_T<long long>(c2.p, N);
                         rhs.scale(ipow_ll(N, c2.loops));
                         if (!(lhs == rhs)) ++bad;
                         ++done;
                     }
                     r.add("functoriality", "T_q T_p = N^loops T_{q p}", bad == 0,
                           std::to_string(done) + " pairs, " + std::to_string(bad) + " mismatches");
                     return r;
                 }});
    c.push_back({8, "projected four-block intertwiner on V1, n = 4, 5, 6", [] {
                     auto r = make("criterion-8");
                     for (int n = 4; n <= 6; ++n) hypercube_projection(r, n);
                     return r;
                 }});
    c.push_back({9, "halved cube block intertwiner is the permutation indicator, n = 4, 5",
                 [] {
                     auto r = make("criterion-9");
                     for (int n = 4; n <= 5; ++n) halved_block(r, n);
                     return r;
                 },
                 true});
    c.push_back({10, "folded cube pairing indicator (N = 5, 7) and projected fork (n = 4, 6)",
                  [] {
                      auto r = make("criterion-10");
                      for (std::uint32_t d : {5u, 7u}) folded_pairing_indicator(r, d);
                      for (int n : {4, 6}) folded_fork(r, n);
                      return r;
                  },
                  true});
    c.push_back({11, "two-point lemma identities, formally and at N = 8, 9, 10", [] { return lemmas({8, 9, 10}); }, true});
    c.push_back({12, "Hamming operator identities, (m, n) in {3,4,5} x {2,3}",
                  [] {
                      auto r = make("criterion-12");
                      for (int m = 3; m <= 5; ++m)
                          for (int n = 2; n <= 3; ++n) {
                              hamming_operators(r, n, m, HammingOperators::AABBReading::mirror, false);
                              VerificationReport alt;
                              hamming_operators(alt, n, m, HammingOperators::AABBReading::coincident, false);
                              for (auto& ch : alt.checks)
                                  if (ch.id.find("/square-coincident") != std::string::npos) r.checks.push_back(ch);
                          }
                      return r;
                  },
                  true});
    c.push_back({13, "wreath representation, (m, n) in {(2,2), (3,2), (3,3)}", [] {
                     auto r = make("criterion-13");
                     for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}}) wreath(r, n, m, 20);
                     return r;
                 }});
    c.push_back({14, "eigenspace invariance under sampled automorphisms", [] {
                     auto r = make("criterion-14");
                     for (const char* f : {"hypercube:3", "hypercube:4", "hypercube:5", "folded:4", "folded:5", "halved:4", "halved:5",
                                           "hamming:2,3", "hamming:3,3", "hamming:2,4"})
                         eigenspace_invariance(r, f, 6);
                     return r;
                 }});
    c.push_back({15, "antisymmetrizer ranks and permanent via the deformed wedge", [] {
                     auto r = make("criterion-15");
                     int bad = 0, total = 0;
                     std::string first;
                     for (std::uint32_t n = 1; n <= 6; ++n)
                         for (int k = 0; k <= static_cast<int>(n); ++k)
                             for (bool deformed : {false, true}) {
                                 auto pr = projection_rank(k, n, deformed);
                                 ++total;
                                 if (pr.rank != binom(static_cast<int>(n), k) || !pr.idempotent || !pr.self_adjoint) {
                                     if (first.empty())
                                         first = " first at n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                                                 (deformed ? " (deformed)" : "");
                                     ++bad;
                                 }
                             }
                     r.add("antisymmetrizer-rank", "rank C(n,k), idempotent and self-adjoint", bad == 0,
                           std::to_string(total) + " cases, " + std::to_string(bad) + " failures" + first);
                     auto& g = rng();
                     int pbad = 0;
                     for (int size : {3, 4})
                         for (int t = 0; t < 20; ++t) {
                             std::vector<std::vector<Q>> M(static_cast<std::size_t>(size), std::vector<Q>(static_cast<std::size_t>(size)));
                             for (auto& row : M)
                                 for (auto& x : row) x = Q(std::uniform_int_distribution<int>(-9, 9)(g));
                             if (permanent_via_wedge(M) != permanent_direct(M)) ++pbad;
                         }
                     r.add("permanent", "permanent from the deformed antisymmetrizer", pbad == 0,
                           "40 random integer matrices, " + std::to_string(pbad) + " mismatches");
                     return r;
                 }});
    return c;
}

/// Parses "hypercube:n", "halved:n", "folded:n", "hamming:n,m", "wreath:n,m", "lemmas", "all".
inline std::vector<VerificationReport> run_suite(const std::string& name) {
    auto parts = detail::split_params(name);
    auto num = [&](std::size_t i) { return detail::parse_positive(parts.at(i), "suite parameter"); };
    auto need = [&](std::size_t k) {
        if (parts.size() != k + 1) throw invalid_input("suite '" + parts[0] + "' takes " + std::to_string(k) + " parameter(s)");
    };
    const std::string& s = parts[0];
    if (s == "hypercube") return need(1), std::vector<VerificationReport>{hypercube_suite(num(1))};
    if (s == "halved") return need(1), std::vector<VerificationReport>{halved_suite(num(1))};
    if (s == "folded") {
        need(1);
        if (num(1) < 2) throw invalid_input("folded needs n >= 2");
        return {folded_suite(num(1))};
    }
    if (s == "hamming") {
        need(2);
        if (num(2) < 2) throw invalid_input("hamming needs m >= 2");
        return {hamming_suite(num(1), num(2))};
    }
    if (s == "wreath") {
        need(2);
        if (num(2) < 2) throw invalid_input("wreath needs m >= 2");
        return {wreath_suite(num(1), num(2))};
    }
    if (s == "lemmas") return need(0), std::vector<VerificationReport>{lemmas()};
    if (s == "all") {
        need(0);
        std::vector<VerificationReport> out;
        for (auto& c : criteria()) out.push_back(c.run());
        return out;
    }
    throw invalid_input("unknown suite '" + name + "'");
}

}  // namespace qsym::suites
