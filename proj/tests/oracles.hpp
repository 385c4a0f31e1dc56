#pragma once
// Independent reference computations for the test suite. Everything here is deliberately naive:
// dense loops over all index tuples, no shared code paths with the library beyond basic types.

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "qsym/cyclotomic.hpp"
#include "qsym/group.hpp"
#include "qsym/partition.hpp"
#include "qsym/partlin.hpp"

namespace oracle {

using qsym::Cyclotomic;
using qsym::Q;

// Row-major dense tensor with all axes of the same dimension.
struct Dense {
    std::uint32_t d = 0;
    std::size_t axes = 0;
    std::vector<Q> v;

    Dense(std::uint32_t dim, std::size_t r) : d(dim), axes(r), v(ipow(dim, r), Q(0)) {}
    static std::size_t ipow(std::uint32_t b, std::size_t e) {
        std::size_t r = 1;
        for (std::size_t i = 0; i < e; ++i) r *= b;
        return r;
    }
    std::vector<std::uint32_t> tuple(std::size_t x) const {
        std::vector<std::uint32_t> t(axes);
        for (std::size_t a = axes; a-- > 0;) {
            t[a] = static_cast<std::uint32_t>(x % d);
            x /= d;
        }
        return t;
    }
};

inline std::vector<std::vector<int>> blocks_of(const qsym::Partition& p) {
    std::map<int, std::vector<int>> m;
    for (int pt = 0; pt < p.points(); ++pt) m[p.block_of(pt)].push_back(pt);
    std::vector<std::vector<int>> out;
    for (auto& [b, pts] : m) out.push_back(pts);
    return out;
}

/// T_p: entry 1 iff the index tuple is constant on every block. Axes: lower points, then upper.
inline Dense functor(const qsym::Partition& p, std::uint32_t N) {
    const int k = p.k(), l = p.l();
    Dense T(N, static_cast<std::size_t>(k + l));
    auto blocks = blocks_of(p);
    for (std::size_t x = 0; x < T.v.size(); ++x) {
        auto t = T.tuple(x);
        // point -> tensor axis
        auto at = [&](int pt) { return pt < k ? t[static_cast<std::size_t>(l + pt)] : t[static_cast<std::size_t>(pt - k)]; };
        bool ok = true;
        for (const auto& b : blocks)
            for (int pt : b) ok = ok && at(pt) == at(b[0]);
        if (ok) T.v[x] = 1;
    }
    return T;
}

inline Dense functor(const qsym::PartLin& e, std::uint32_t N) {
    Dense T(N, static_cast<std::size_t>(e.k() + e.l()));
    for (const auto& [p, c] : e.terms()) {
        Dense P = functor(p, N);
        Q w = c(Q(N));
        for (std::size_t x = 0; x < T.v.size(); ++x) T.v[x] += w * P.v[x];
    }
    return T;
}

/// (B o A) for A with in_a inputs / out_a outputs and B with in_b = out_a inputs.
inline Dense compose(const Dense& B, std::size_t out_b, const Dense& A, std::size_t out_a) {
    const std::size_t in_a = A.axes - out_a;
    Dense C(A.d, out_b + in_a);
    const std::size_t mid = Dense::ipow(A.d, out_a), lo = Dense::ipow(A.d, out_b), hi = Dense::ipow(A.d, in_a);
    for (std::size_t i = 0; i < lo; ++i)
        for (std::size_t j = 0; j < hi; ++j) {
            Q s = 0;
            for (std::size_t m = 0; m < mid; ++m) s += B.v[i * mid + m] * A.v[m * hi + j];
            C.v[i * hi + j] = s;
        }
    return C;
}

inline Cyclotomic character(const qsym::AbelianGroup& G, const qsym::GroupElement& mu, const qsym::GroupElement& alpha) {
    // tau_mu(alpha) = prod_i exp(2 pi i mu_i alpha_i / m_i)
    Cyclotomic r(Q(1));
    for (std::size_t i = 0; i < mu.size(); ++i) r = r * Cyclotomic::zeta(G.orders()[i], static_cast<long long>(mu[i]) * alpha[i]);
    return r;
}

/// F^{-1} M F entrywise, with F^alpha_mu = tau_mu(alpha) and F^{-1} = F* / N.
inline std::vector<Cyclotomic> fourier_conjugate(const qsym::AbelianGroup& G, const std::vector<Q>& M) {
    const std::size_t N = G.order();
    auto el = G.elements();
    std::vector<Cyclotomic> out(N * N, Cyclotomic(Q(0)));
    for (std::size_t mu = 0; mu < N; ++mu)
        for (std::size_t nu = 0; nu < N; ++nu) {
            Cyclotomic s(Q(0));
            for (std::size_t a = 0; a < N; ++a)
                for (std::size_t b = 0; b < N; ++b)
                    if (M[a * N + b] != 0)
                        s = s + character(G, el[mu], el[a]).conj() * Cyclotomic(M[a * N + b]) * character(G, el[nu], el[b]);
            out[mu * N + nu] = s * Cyclotomic(Q(1) / Q(static_cast<long long>(N)));
        }
    return out;
}

inline Q permanent(const std::vector<std::vector<Q>>& M) {
    std::vector<std::size_t> s(M.size());
    std::iota(s.begin(), s.end(), 0);
    Q total = 0;
    do {
        Q p = 1;
        for (std::size_t i = 0; i < M.size(); ++i) p *= M[i][s[i]];
        total += p;
    } while (std::next_permutation(s.begin(), s.end()));
    return total;
}

}  // namespace oracle
