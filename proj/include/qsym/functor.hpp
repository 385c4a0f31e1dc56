#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "qsym/partlin.hpp"
#include "qsym/sparse_tensor.hpp"

namespace qsym {

/// +1 or -1 according to the parity of inversions (k < l with i_k > i_l); ties are not inversions.
inline int sign_sigma(const std::vector<std::uint32_t>& idx) {
    int inv = 0;
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            if (idx[a] > idx[b]) ++inv;
    return inv % 2 ? -1 : 1;
}

namespace detail {

// Calls f(index) for every index tuple (lower points first, then upper) that is constant on blocks.
template <class F>
void for_each_block_assignment(const Partition& p, std::uint32_t N, F&& f) {
    const int b = p.block_count();
    std::uint64_t count = 1;
    for (int i = 0; i < b; ++i) {
        count *= N;
        config::require_sparse(count, "partition tensor " + p.str());
    }
    std::vector<std::uint32_t> val(static_cast<std::size_t>(b), 0);
    Index idx(static_cast<std::size_t>(p.points()));
    for (std::uint64_t c = 0; c < count; ++c) {
        for (int j = 0; j < p.l(); ++j) idx[static_cast<std::size_t>(j)] = val[static_cast<std::size_t>(p.lower(j))];
        for (int i = 0; i < p.k(); ++i) idx[static_cast<std::size_t>(p.l() + i)] = val[static_cast<std::size_t>(p.upper(i))];
        f(idx);
        for (std::size_t t = val.size(); t-- > 0;) {
            if (++val[t] < N) break;
            val[t] = 0;
        }
    }
}

}  // namespace detail

/// Blockwise Kronecker delta: axes are the l lower points (outputs) then the k upper points (inputs).
template <class S = long long>
SparseTensor<S> functor_T(const Partition& p, std::uint32_t N) {
    if (N < 1) throw invalid_input("functor needs N >= 1");
    SparseTensor<S> T = SparseTensor<S>::uniform(N, static_cast<std::size_t>(p.l()), static_cast<std::size_t>(p.k()));
    detail::for_each_block_assignment(p, N, [&](const Index& idx) { T.set(idx, S(1)); });
    return T;
}

/// sigma_i sigma_j [T_p]^j_i; defined only when every block has even size.
template <class S = long long>
SparseTensor<S> functor_T_deformed(const Partition& p, std::uint32_t N) {
    if (N < 1) throw invalid_input("functor needs N >= 1");
    if (!p.all_blocks_even()) throw invalid_input("deformed functor needs blocks of even size: " + p.str());
    SparseTensor<S> T = SparseTensor<S>::uniform(N, static_cast<std::size_t>(p.l()), static_cast<std::size_t>(p.k()));
    const auto l = static_cast<std::ptrdiff_t>(p.l());
    detail::for_each_block_assignment(p, N, [&](const Index& idx) {
        Index lo(idx.begin(), idx.begin() + l), up(idx.begin() + l, idx.end());
        T.set(idx, S(sign_sigma(lo) * sign_sigma(up)));
    });
    return T;
}

/// sum_p c_p(N) T_p
inline SparseTensor<Q> evaluate(const PartLin& e, std::uint32_t N, bool deformed = false) {
    SparseTensor<Q> T = SparseTensor<Q>::uniform(N, static_cast<std::size_t>(e.l()), static_cast<std::size_t>(e.k()));
    for (const auto& [p, c] : e.terms()) {
        Q v = c(Q(N));
        if (v == 0) continue;
        auto Tp = deformed ? functor_T_deformed<long long>(p, N) : functor_T<long long>(p, N);
        for (const auto& [key, x] : Tp.data()) T.add_key(key, v * x);
    }
    return T;
}

namespace detail {

inline std::uint64_t factorial(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

inline int perm_sign(const std::vector<int>& s) {
    int inv = 0;
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (s[a] > s[b]) ++inv;
    return inv % 2 ? -1 : 1;
}

}  // namespace detail

/// A_k = (1/k!) sum sgn(s) P_s (classical), or (1/k!) sum P_s restricted to index tuples with
/// distinct entries (deformed). Operator on (C^n)^{ox k}.
inline SparseTensor<Q> antisymmetrizer(int k, std::uint32_t n, bool deformed) {
    if (k < 0) throw invalid_input("antisymmetrizer needs k >= 0");
    if (n < 1) throw invalid_input("antisymmetrizer needs n >= 1");
    std::uint64_t dim = 1;
    for (int i = 0; i < k; ++i) dim *= n;
    const std::uint64_t kf = detail::factorial(k);
    config::require_sparse(dim * kf, "antisymmetrizer");
    auto A = SparseTensor<Q>::uniform(n, static_cast<std::size_t>(k), static_cast<std::size_t>(k));
    const Q w = Q(1) / Q(static_cast<long long>(kf));
    std::vector<int> s(static_cast<std::size_t>(k));
    Index in(static_cast<std::size_t>(k)), full(static_cast<std::size_t>(2 * k));
    for (std::uint64_t x = 0; x < dim; ++x) {
        std::uint64_t t = x;
        for (int a = k; a-- > 0;) {
            in[static_cast<std::size_t>(a)] = static_cast<std::uint32_t>(t % n);
            t /= n;
        }
        if (deformed) {
            Index sorted = in;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
        }
        std::iota(s.begin(), s.end(), 0);
        do {
            for (int a = 0; a < k; ++a) {
                full[static_cast<std::size_t>(a)] = in[static_cast<std::size_t>(s[static_cast<std::size_t>(a)])];
                full[static_cast<std::size_t>(k + a)] = in[static_cast<std::size_t>(a)];
            }
            A.add(full, deformed ? w : Q(detail::perm_sign(s)) * w);
        } while (std::next_permutation(s.begin(), s.end()));
    }
    return A;
}

struct ProjectionRank {
    std::uint64_t rank = 0;
    bool idempotent = true;
    bool self_adjoint = true;
};

/// Rank, idempotence and self-adjointness of A_k or its deformed variant, computed on the
/// invariant blocks (index tuples sharing one multiset) with the integer operator k! A_k.
inline ProjectionRank projection_rank(int k, std::uint32_t n, bool deformed) {
    if (k < 0 || n < 1) throw invalid_input("projection_rank needs k >= 0 and n >= 1");
    if (k > 8) throw guard_error("projection_rank: k too large");
    const long long kf = static_cast<long long>(detail::factorial(k));
    ProjectionRank out;
    // enumerate multisets as nondecreasing tuples
    std::vector<std::uint32_t> ms(static_cast<std::size_t>(k), 0);
    std::vector<int> s(static_cast<std::size_t>(k));
    for (;;) {
        bool distinct = std::adjacent_find(ms.begin(), ms.end()) == ms.end();
        if (!deformed || distinct) {
            // orbit of ms
            std::vector<std::vector<std::uint32_t>> orbit;
            auto t = ms;
            do orbit.push_back(t);
            while (std::next_permutation(t.begin(), t.end()));
            const std::size_t d = orbit.size();
            std::vector<long long> B(d * d, 0);
            auto pos = [&](const std::vector<std::uint32_t>& v) {
                return static_cast<std::size_t>(std::lower_bound(orbit.begin(), orbit.end(), v) - orbit.begin());
            };
            for (std::size_t c = 0; c < d; ++c) {
                std::iota(s.begin(), s.end(), 0);
                std::vector<std::uint32_t> img(static_cast<std::size_t>(k));
                do {
                    for (int a = 0; a < k; ++a) img[static_cast<std::size_t>(a)] = orbit[c][static_cast<std::size_t>(s[static_cast<std::size_t>(a)])];
                    B[pos(img) * d + c] += deformed ? 1 : detail::perm_sign(s);
                } while (std::next_permutation(s.begin(), s.end()));
            }
            long long tr = 0;
            for (std::size_t i = 0; i < d; ++i) tr += B[i * d + i];
            if (tr % kf) out.idempotent = false;
            out.rank += static_cast<std::uint64_t>(tr / kf);
            for (std::size_t i = 0; i < d && out.self_adjoint; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    if (B[i * d + j] != B[j * d + i]) {
                        out.self_adjoint = false;
                        break;
                    }
            // B^2 == k! B
            for (std::size_t i = 0; i < d && out.idempotent; ++i)
                for (std::size_t j = 0; j < d; ++j) {
                    long long acc = 0;
                    for (std::size_t m = 0; m < d; ++m) acc += B[i * d + m] * B[m * d + j];
                    if (acc != kf * B[i * d + j]) {
                        out.idempotent = false;
                        break;
                    }
                }
        }
        // next nondecreasing tuple
        int a = k - 1;
        while (a >= 0 && ms[static_cast<std::size_t>(a)] == n - 1) --a;
        if (a < 0) break;
        ++ms[static_cast<std::size_t>(a)];
        for (int b = a + 1; b < k; ++b) ms[static_cast<std::size_t>(b)] = ms[static_cast<std::size_t>(a)];
    }
    return out;
}

/// n! times the e_id component of (deformed A_n) M^{ox n} (deformed A_n) e_id.
inline Q permanent_via_wedge(const std::vector<std::vector<Q>>& M) {
    const std::size_t n = M.size();
    if (n == 0) return Q(1);
    if (n > 6) throw guard_error("permanent_via_wedge supports n <= 6");
    for (const auto& row : M)
        if (row.size() != n) throw invalid_input("permanent needs a square matrix");
    const auto un = static_cast<std::uint32_t>(n);
    const auto nf = static_cast<long long>(detail::factorial(static_cast<int>(n)));
    // v = A e_id, a state on n axes
    SparseTensor<Q> v(std::vector<std::uint32_t>(n, un), n);
    std::vector<int> s(n);
    std::iota(s.begin(), s.end(), 0);
    do {
        Index idx(n);
        for (std::size_t a = 0; a < n; ++a) idx[a] = static_cast<std::uint32_t>(s[a]);
        v.add(idx, Q(1, nf));
    } while (std::next_permutation(s.begin(), s.end()));
    std::vector<Q> flat(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) flat[r * n + c] = M[r][c];
    for (std::size_t a = 0; a < n; ++a) v = v.mode_product(a, flat, un);
    // e_id component of A w: average over the orbit of the identity tuple, restricted to distinct tuples
    Q z = 0;
    std::iota(s.begin(), s.end(), 0);
    do {
        Index idx(n);
        for (std::size_t a = 0; a < n; ++a) idx[a] = static_cast<std::uint32_t>(s[a]);
        z += v.get(idx);
    } while (std::next_permutation(s.begin(), s.end()));
    z /= Q(nf);
    return z * Q(nf);
}

}  // namespace qsym
