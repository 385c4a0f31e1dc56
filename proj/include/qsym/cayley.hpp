#pragma once

#include <algorithm>
#include <cctype>
#include <complex>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "qsym/group.hpp"
#include "qsym/sparse_tensor.hpp"

namespace qsym {

struct GeneratingSet {
    std::vector<GroupElement> elems;  // sorted, distinct, nonzero
    bool symmetric = false;
    bool generates = false;
};

inline GeneratingSet make_generating_set(const AbelianGroup& G, std::vector<GroupElement> elems) {
    for (const auto& s : elems) {
        G.require(s);
        if (s == G.zero()) throw invalid_input("the identity cannot be a generator (graphs are loop-free)");
    }
    std::sort(elems.begin(), elems.end());
    if (std::adjacent_find(elems.begin(), elems.end()) != elems.end())
        throw invalid_input("duplicate generator");
    GeneratingSet S;
    S.elems = std::move(elems);
    S.symmetric = std::all_of(S.elems.begin(), S.elems.end(), [&](const GroupElement& s) {
        return std::binary_search(S.elems.begin(), S.elems.end(), G.neg(s));
    });
    // subgroup closure
    std::vector<char> seen(G.order(), 0);
    std::queue<GroupElement> q;
    q.push(G.zero());
    seen[G.index(G.zero())] = 1;
    std::uint64_t count = 1;
    while (!q.empty()) {
        GroupElement a = q.front();
        q.pop();
        for (const auto& s : S.elems) {
            GroupElement b = G.add(a, s);
            auto i = G.index(b);
            if (!seen[i]) {
                seen[i] = 1;
                ++count;
                q.push(b);
            }
        }
    }
    S.generates = count == G.order();
    return S;
}

class CayleyGraph {
public:
    CayleyGraph(AbelianGroup G, GeneratingSet S) : G_(std::move(G)), S_(std::move(S)) {
        if (!S_.generates) warnings_.push_back("generating set does not generate the group (graph is disconnected)");
        if (!S_.symmetric) warnings_.push_back("generating set is not symmetric (graph is directed)");
    }

    const AbelianGroup& group() const { return G_; }
    const GeneratingSet& gens() const { return S_; }
    const std::vector<std::string>& warnings() const { return warnings_; }
    std::uint64_t vertex_count() const { return G_.order(); }

    /// A^beta_alpha = 1 iff beta - alpha in S.
    template <class S = long long>
    SparseTensor<S> adjacency() const {
        const std::uint32_t N = static_cast<std::uint32_t>(G_.order());
        SparseTensor<S> A({N, N}, 1);
        A.reserve(static_cast<std::size_t>(N) * S_.elems.size());
        for (std::uint32_t a = 0; a < N; ++a) {
            GroupElement alpha = G_.at(a);
            for (const auto& s : S_.elems) {
                auto b = static_cast<std::uint32_t>(G_.index(G_.add(alpha, s)));
                A.set({b, a}, S(1));
            }
        }
        return A;
    }

    std::uint64_t edge_count() const {
        std::uint64_t arcs = G_.order() * S_.elems.size();
        return S_.symmetric ? arcs / 2 : arcs;
    }

private:
    AbelianGroup G_;
    GeneratingSet S_;
    std::vector<std::string> warnings_;
};

inline CayleyGraph build_cayley(const AbelianGroup& G, const GeneratingSet& S) { return CayleyGraph(G, S); }

/// lambda_mu = sum_{theta in S} tau_mu(-theta)
inline Cyclotomic eigenvalue(const AbelianGroup& G, const GeneratingSet& S, const GroupElement& mu) {
    G.require(mu);
    const int M = G.exponent();
    if (M <= 2) {
        long long s = 0;
        for (const auto& th : S.elems) s += char_exponent(G, mu, G.neg(th)) == 0 ? 1 : -1;
        return Cyclotomic(Q(s));
    }
    std::vector<Q> powers(static_cast<std::size_t>(M), Q(0));
    for (const auto& th : S.elems) powers[static_cast<std::size_t>(char_exponent(G, mu, G.neg(th)))] += 1;
    return Cyclotomic::from_powers(M, powers);
}

struct SpectralItem {
    Cyclotomic value;
    std::vector<GroupElement> labels;  // in enumeration order
};

struct SpectralDecomposition {
    std::vector<SpectralItem> items;
    std::vector<std::size_t> multiplicities() const {
        std::vector<std::size_t> m;
        for (const auto& it : items) m.push_back(it.labels.size());
        return m;
    }
    /// Index of the eigenspace containing the label.
    std::size_t space_of(const GroupElement& mu) const {
        for (std::size_t i = 0; i < items.size(); ++i)
            if (std::find(items[i].labels.begin(), items[i].labels.end(), mu) != items[i].labels.end()) return i;
        throw invalid_input("label not found in spectrum");
    }
};

/// Exact grouping by eigenvalue; order: descending real part, then lexicographic coefficients.
inline SpectralDecomposition spectrum(const AbelianGroup& G, const GeneratingSet& S) {
    struct Entry {
        Cyclotomic v;
        double re;
        std::vector<GroupElement> labels;
    };
    std::vector<Entry> groups;
    for (const auto& mu : G.elements()) {
        Cyclotomic l = eigenvalue(G, S, mu);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Entry& e) { return e.v == l; });
        if (it == groups.end())
            groups.push_back({l, l.to_complex().real(), {mu}});
        else
            it->labels.push_back(mu);
    }
    std::sort(groups.begin(), groups.end(), [](const Entry& a, const Entry& b) {
        if (std::abs(a.re - b.re) > 1e-9) return a.re > b.re;
        return lex_less(a.v, b.v);
    });
    SpectralDecomposition d;
    for (auto& g : groups) d.items.push_back({std::move(g.v), std::move(g.labels)});
    return d;
}

/// F^alpha_mu = tau_mu(alpha), rows alpha, columns mu.
inline SparseTensor<Cyclotomic> fourier_matrix(const AbelianGroup& G) {
    const std::uint32_t N = static_cast<std::uint32_t>(G.order());
    config::require_dense(static_cast<std::uint64_t>(N) * N, "fourier_matrix");
    SparseTensor<Cyclotomic> F({N, N}, 1);
    F.reserve(static_cast<std::size_t>(N) * N);
    auto els = G.elements();
    for (std::uint32_t a = 0; a < N; ++a)
        for (std::uint32_t m = 0; m < N; ++m) F.set({a, m}, char_value(G, els[m], els[a]));
    return F;
}

namespace detail {

// Dense m x m character table of Z_m at level M: entry [x][y] = zeta_M^{(M/m) x y}, optionally conjugated.
inline std::vector<Cyclotomic> cyclic_table(int m, int M, bool conjugate, const Q& scale) {
    std::vector<Cyclotomic> t(static_cast<std::size_t>(m) * m);
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            long long e = static_cast<long long>(M / m) * ((x * y) % m);
            if (conjugate) e = (M - e) % M;
            Cyclotomic z = M <= 1 ? Cyclotomic(1) : Cyclotomic::zeta(M, e);
            t[static_cast<std::size_t>(x) * m + y] = z * scale;
        }
    return t;
}

}  // namespace detail

/// (1/N) F* Mx F, evaluated factor by factor along the cyclic decomposition.
template <class S>
SparseTensor<Cyclotomic> conjugate_by_fourier(const AbelianGroup& G, const SparseTensor<S>& Mx) {
    const std::uint32_t N = static_cast<std::uint32_t>(G.order());
    if (Mx.rank() != 2 || Mx.out_axes() != 1 || Mx.shape()[0] != N || Mx.shape()[1] != N)
        throw invalid_input("conjugate_by_fourier: matrix must be " + std::to_string(N) + "x" + std::to_string(N));
    const std::size_t r = G.rank();
    std::vector<std::uint32_t> split;
    for (int m : G.orders()) split.push_back(static_cast<std::uint32_t>(m));
    for (int m : G.orders()) split.push_back(static_cast<std::uint32_t>(m));
    SparseTensor<Cyclotomic> T(split, r);
    for (const auto& [k, v] : Mx.data()) T.set_key(k, Cyclotomic(v));
    const int M = G.exponent();
    for (std::size_t i = 0; i < r; ++i) {
        int m = G.orders()[i];
        auto um = static_cast<std::uint32_t>(m);
        // output axis: (1/m) conj(tau_nu(beta)) as M[nu][beta]
        T = T.mode_product(i, detail::cyclic_table(m, M, true, Q(1, m)), um);
        // input axis: tau_mu(alpha) as M[mu][alpha]
        T = T.mode_product(r + i, detail::cyclic_table(m, M, false, Q(1)), um);
    }
    return T.reshaped({N, N}, 1);
}

/// Named graph families. Parameters may be separated by ':' or ','.
struct Family {
    std::string name;
    AbelianGroup group;
    GeneratingSet gens;
};

namespace detail {

inline std::vector<std::string> split_params(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if ((c == ':' || c == ',') && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline int parse_positive(const std::string& s, const std::string& what) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw invalid_input(what + " must be a positive integer, got '" + s + "'");
    long v = std::stol(s);
    if (v < 1 || v > 1000000) throw invalid_input(what + " out of range: " + s);
    return static_cast<int>(v);
}

inline GroupElement unit(std::size_t n, std::size_t i, int a = 1) {
    GroupElement e(n, 0);
    e[i] = a;
    return e;
}

}  // namespace detail

inline Family family(const std::string& spec) {
    auto parts = detail::split_params(spec);
    const std::string& name = parts[0];
    auto need = [&](std::size_t k) {
        if (parts.size() != k + 1)
            throw invalid_input("family '" + name + "' takes " + std::to_string(k) + " parameter(s): '" + spec + "'");
    };
    if (name == "hypercube" || name == "halved" || name == "folded") {
        need(1);
        int n = detail::parse_positive(parts[1], "n");
        if (n > 62) throw guard_error("dimension too large");
        AbelianGroup G(std::vector<int>(static_cast<std::size_t>(n), 2));
        std::vector<GroupElement> S;
        auto un = static_cast<std::size_t>(n);
        for (std::size_t i = 0; i < un; ++i) S.push_back(detail::unit(un, i));
        if (name == "halved")
            for (std::size_t i = 0; i < un; ++i)
                for (std::size_t j = i + 1; j < un; ++j) {
                    GroupElement e(un, 0);
                    e[i] = e[j] = 1;
                    S.push_back(e);
                }
        if (name == "folded") {
            if (n < 2) throw invalid_input("folded needs n >= 2 (iota would repeat a generator)");
            S.push_back(GroupElement(un, 1));
        }
        return {spec, G, make_generating_set(G, S)};
    }
    if (name == "hamming") {
        need(2);
        int n = detail::parse_positive(parts[1], "n"), m = detail::parse_positive(parts[2], "m");
        if (m < 2) throw invalid_input("hamming needs m >= 2");
        auto un = static_cast<std::size_t>(n);
        AbelianGroup G(std::vector<int>(un, m));
        std::vector<GroupElement> S;
        for (std::size_t i = 0; i < un; ++i)
            for (int a = 1; a < m; ++a) S.push_back(detail::unit(un, i, a));
        return {spec, G, make_generating_set(G, S)};
    }
    if (name == "complete") {
        need(1);
        int m = detail::parse_positive(parts[1], "m");
        if (m < 2) throw invalid_input("complete needs m >= 2");
        AbelianGroup G({m});
        std::vector<GroupElement> S;
        for (int a = 1; a < m; ++a) S.push_back({a});
        return {spec, G, make_generating_set(G, S)};
    }
    if (name == "circulant") {
        need(2);
        int m = detail::parse_positive(parts[1], "m");
        std::string list = parts[2];
        if (list.size() < 2 || list.front() != '(' || list.back() != ')')
            throw invalid_input("circulant generators must look like (s1;s2;...)");
        list = list.substr(1, list.size() - 2);
        AbelianGroup G({m});
        std::vector<GroupElement> S;
        std::string cur;
        for (std::size_t i = 0; i <= list.size(); ++i) {
            if (i == list.size() || list[i] == ';') {
                if (cur.empty()) throw invalid_input("empty circulant generator");
                bool neg = cur[0] == '-';
                int v = detail::parse_positive(neg ? cur.substr(1) : cur, "generator");
                S.push_back(G.element({neg ? -static_cast<long long>(v) : v}));
                cur.clear();
            } else if (!std::isspace(static_cast<unsigned char>(list[i]))) {
                cur += list[i];
            }
        }
        return {spec, G, make_generating_set(G, S)};
    }
    throw invalid_input("unknown family '" + name + "'");
}

/// sum_i I x ... x A_i x ... x I over the row-major product vertex set.
inline SparseTensor<long long> cartesian_adjacency(const std::vector<CayleyGraph>& graphs) {
    if (graphs.empty()) throw invalid_input("cartesian_adjacency needs at least one graph");
    std::vector<std::uint64_t> sizes;
    std::uint64_t total = 1;
    for (const auto& g : graphs) {
        sizes.push_back(g.vertex_count());
        total *= g.vertex_count();
        if (total > config::max_n()) throw guard_error("product graph exceeds QSYM_MAX_N");
    }
    auto T = static_cast<std::uint32_t>(total);
    SparseTensor<long long> A({T, T}, 1);
    std::vector<std::uint64_t> stride(graphs.size(), 1);
    for (std::size_t i = graphs.size(); i-- > 1;) stride[i - 1] = stride[i] * sizes[i];
    for (std::size_t f = 0; f < graphs.size(); ++f) {
        auto Af = graphs[f].adjacency<long long>();
        for (std::uint64_t v = 0; v < total; ++v) {
            std::uint64_t x = (v / stride[f]) % sizes[f];
            std::uint64_t rest = v - x * stride[f];
            for (std::uint64_t y = 0; y < sizes[f]; ++y) {
                long long a = Af.get({static_cast<std::uint32_t>(y), static_cast<std::uint32_t>(x)});
                if (a) A.add({static_cast<std::uint32_t>(rest + y * stride[f]), static_cast<std::uint32_t>(v)}, a);
            }
        }
    }
    return A;
}

/// P^{perm(alpha)}_alpha = 1
template <class S = long long>
SparseTensor<S> perm_matrix(const std::vector<std::uint32_t>& perm) {
    const auto n = static_cast<std::uint32_t>(perm.size());
    std::vector<char> hit(n, 0);
    for (auto p : perm) {
        if (p >= n || hit[p]) throw invalid_input("not a bijection of the vertex set");
        hit[p] = 1;
    }
    SparseTensor<S> P({n, n}, 1);
    for (std::uint32_t a = 0; a < n; ++a) P.set({perm[a], a}, S(1));
    return P;
}

/// True iff P A = A P exactly.
inline bool is_automorphism(const CayleyGraph& g, const std::vector<std::uint32_t>& perm) {
    if (perm.size() != g.vertex_count()) throw invalid_input("permutation size differs from the vertex count");
    auto P = perm_matrix<long long>(perm);
    auto A = g.adjacency<long long>();
    return compose(P, A) == compose(A, P);
}

/// u~ built from u^{ai}_{bj} = (v_i)^a_b delta_{w(i), j}, summed over all sigma in S_n.
/// v_list holds n dense m x m matrices (row index a = output), w a permutation of {0..n-1}.
inline SparseTensor<Q> wreath_rep(const std::vector<std::vector<Q>>& v_list, const std::vector<int>& w, int m) {
    const std::size_t n = v_list.size();
    if (n == 0 || w.size() != n) throw invalid_input("wreath_rep: need n matrices and a permutation of n");
    for (const auto& v : v_list)
        if (v.size() != static_cast<std::size_t>(m) * m) throw invalid_input("wreath_rep: matrices must be m x m");
    {
        std::vector<int> s = w;
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i < n; ++i)
            if (s[i] != static_cast<int>(i)) throw invalid_input("wreath_rep: w is not a permutation");
    }
    std::uint64_t dim = 1;
    for (std::size_t i = 0; i < n; ++i) dim *= static_cast<std::uint64_t>(m);
    config::require_dense(dim * dim, "wreath_rep");
    auto u = [&](int a, std::size_t i, int b, std::size_t j) -> Q {
        if (static_cast<std::size_t>(w[i]) != j) return Q(0);
        return v_list[i][static_cast<std::size_t>(a) * m + b];
    };
    auto D = static_cast<std::uint32_t>(dim);
    SparseTensor<Q> R({D, D}, 1);
    std::vector<int> sigma(n);
    std::vector<int> aa(n), bb(n);
    for (std::uint64_t bi = 0; bi < dim; ++bi) {
        std::uint64_t t = bi;
        for (std::size_t i = n; i-- > 0;) {
            bb[i] = static_cast<int>(t % m);
            t /= m;
        }
        for (std::uint64_t ai = 0; ai < dim; ++ai) {
            t = ai;
            for (std::size_t i = n; i-- > 0;) {
                aa[i] = static_cast<int>(t % m);
                t /= m;
            }
            for (std::size_t i = 0; i < n; ++i) sigma[i] = static_cast<int>(i);
            Q total = 0;
            do {
                // prod_i u^{b_{sigma(i)} sigma(i)}_{a_i i}
                Q p = 1;
                for (std::size_t i = 0; i < n && p != 0; ++i) {
                    auto si = static_cast<std::size_t>(sigma[i]);
                    p *= u(bb[si], si, aa[i], i);
                }
                total += p;
            } while (std::next_permutation(sigma.begin(), sigma.end()));
            if (total != 0) R.set({static_cast<std::uint32_t>(bi), static_cast<std::uint32_t>(ai)}, total);
        }
    }
    return R;
}

}  // namespace qsym
