#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "qsym/cayley.hpp"
#include "qsym/functor.hpp"

namespace qsym {

/// [T^_{b_{k,l}}]^{nu}_{mu} = N^{1-l} delta_{sum mu, sum nu}, axes indexed by label enumeration order.
inline SparseTensor<Q> hat_block_intertwiner(const AbelianGroup& G, int k, int l) {
    if (k < 0 || l < 0 || k + l < 1) throw invalid_input("block intertwiner needs k + l >= 1");
    const std::uint64_t N = G.order();
    std::uint64_t count = 1;
    for (int i = 0; i < k + l - 1; ++i) {
        count *= N;
        config::require_sparse(count, "hat_block_intertwiner");
    }
    const auto uN = static_cast<std::uint32_t>(N);
    auto T = SparseTensor<Q>::uniform(uN, static_cast<std::size_t>(l), static_cast<std::size_t>(k));
    T.reserve(static_cast<std::size_t>(count));
    Q value = l >= 1 ? Q(1) / qpow(Q(static_cast<long long>(N)), static_cast<unsigned>(l - 1)) : Q(static_cast<long long>(N));
    // the last axis is determined by the others: free axes are all but one
    const int total = k + l;
    Index idx(static_cast<std::size_t>(total), 0);
    const auto els = G.elements();
    for (std::uint64_t c = 0; c < count; ++c) {
        // balance: sum(inputs) - sum(outputs of the first l-1 or l axes)
        GroupElement bal = G.zero();
        for (int a = 0; a < total - 1; ++a) {
            const auto& e = els[idx[static_cast<std::size_t>(a)]];
            bal = a < l ? G.sub(bal, e) : G.add(bal, e);
        }
        // last axis: an output when k == 0, otherwise an input
        GroupElement last = k == 0 ? bal : G.neg(bal);
        idx[static_cast<std::size_t>(total - 1)] = static_cast<std::uint32_t>(G.index(last));
        T.set(idx, value);
        for (int a = total - 1; a-- > 0;) {
            if (++idx[static_cast<std::size_t>(a)] < uN) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return T;
}

/// Selected eigenspaces; U^mu_alpha = conj tau_mu(alpha) over the selected labels mu, U U* = N I.
struct EigenprojectionBasis {
    std::vector<std::size_t> spaces;
    std::vector<GroupElement> labels;
    std::vector<std::uint64_t> label_index;  // position of each label in the group enumeration
    Q scale;                                 // N

    std::uint32_t dim() const { return static_cast<std::uint32_t>(labels.size()); }

    /// Position of a label inside this basis.
    std::uint32_t position(const GroupElement& mu) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == mu) return static_cast<std::uint32_t>(i);
        throw invalid_input("label " + AbelianGroup::str(mu) + " is not in the selected eigenspaces");
    }
};

/// Parses "V1", "V1+V3", "all". Spaces are indexed in the canonical eigenvalue order.
inline EigenprojectionBasis eigen_basis(const AbelianGroup& G, const SpectralDecomposition& sp, const std::string& sel) {
    EigenprojectionBasis B;
    B.scale = Q(static_cast<long long>(G.order()));
    std::vector<std::size_t> chosen;
    if (sel == "all") {
        for (std::size_t i = 0; i < sp.items.size(); ++i) chosen.push_back(i);
    } else {
        std::size_t pos = 0;
        while (pos < sel.size()) {
            while (pos < sel.size() && std::isspace(static_cast<unsigned char>(sel[pos]))) ++pos;
            if (pos >= sel.size() || (sel[pos] != 'V' && sel[pos] != 'v'))
                throw invalid_input("eigenspace selection must look like V1 or V1+V3, got '" + sel + "'");
            ++pos;
            std::size_t st = pos;
            while (pos < sel.size() && std::isdigit(static_cast<unsigned char>(sel[pos]))) ++pos;
            if (st == pos || pos - st > 6) throw invalid_input("eigenspace selection: expected an index in '" + sel + "'");
            std::size_t v = std::stoul(sel.substr(st, pos - st));
            if (v >= sp.items.size())
                throw invalid_input("eigenspace V" + std::to_string(v) + " does not exist (there are " +
                                    std::to_string(sp.items.size()) + " distinct eigenvalues)");
            if (std::find(chosen.begin(), chosen.end(), v) != chosen.end())
                throw invalid_input("eigenspace V" + std::to_string(v) + " selected twice");
            chosen.push_back(v);
            while (pos < sel.size() && std::isspace(static_cast<unsigned char>(sel[pos]))) ++pos;
            if (pos < sel.size()) {
                if (sel[pos] != '+') throw invalid_input("eigenspace selection: expected '+' in '" + sel + "'");
                ++pos;
                if (pos >= sel.size()) throw invalid_input("eigenspace selection ends with '+'");
            }
        }
        if (chosen.empty()) throw invalid_input("empty eigenspace selection");
    }
    for (auto v : chosen) {
        B.spaces.push_back(v);
        for (const auto& mu : sp.items[v].labels) {
            B.labels.push_back(mu);
            B.label_index.push_back(G.index(mu));
        }
    }
    return B;
}

/// Basis from an explicit label list.
inline EigenprojectionBasis label_basis(const AbelianGroup& G, const std::vector<GroupElement>& labels) {
    EigenprojectionBasis B;
    B.scale = Q(static_cast<long long>(G.order()));
    for (const auto& mu : labels) {
        G.require(mu);
        B.labels.push_back(mu);
        B.label_index.push_back(G.index(mu));
    }
    return B;
}

namespace detail {

// rows: basis labels, columns: vertices; entry tau_mu(alpha) or its conjugate.
inline std::vector<Cyclotomic> character_rows(const AbelianGroup& G, const EigenprojectionBasis& B, bool conjugate) {
    const std::uint64_t N = G.order();
    std::vector<Cyclotomic> M(static_cast<std::size_t>(B.dim()) * N);
    const int Mexp = G.exponent();
    for (std::size_t r = 0; r < B.labels.size(); ++r)
        for (std::uint64_t a = 0; a < N; ++a) {
            long long e = char_exponent(G, B.labels[r], G.at(a));
            if (conjugate) e = (Mexp - e) % Mexp;
            M[r * N + a] = Mexp <= 1 ? Cyclotomic(1) : Cyclotomic::zeta(Mexp, e);
        }
    return M;
}

}  // namespace detail

/// N^{-l} U_out^{ox l} T (U_in^*)^{ox k}: T in the vertex basis, result in the selected character bases.
/// With all eigenspaces selected this is the Fourier conjugate F^{-1 ox l} T F^{ox k}.
template <class S>
SparseTensor<Cyclotomic> project(const AbelianGroup& G, const SparseTensor<S>& T, const EigenprojectionBasis& out,
                                 const EigenprojectionBasis& in) {
    const auto N = static_cast<std::uint32_t>(G.order());
    for (auto d : T.shape())
        if (d != N) throw invalid_input("project: tensor axes must have dimension " + std::to_string(N));
    SparseTensor<Cyclotomic> R(T.shape(), T.out_axes());
    for (const auto& [k, v] : T.data()) R.set_key(k, Cyclotomic(v));
    const auto Uo = detail::character_rows(G, out, true);
    const auto Ui = detail::character_rows(G, in, false);
    for (std::size_t a = 0; a < T.rank(); ++a) {
        bool is_out = a < T.out_axes();
        R = R.mode_product(a, is_out ? Uo : Ui, is_out ? out.dim() : in.dim());
    }
    R.scale(Q(1) / qpow(Q(static_cast<long long>(N)), static_cast<unsigned>(T.out_axes())));
    return R;
}

/// T (R_in[0] ox ... ) == (R_out[0] ox ...) T, with each R a square matrix acting on one axis.
template <class S>
bool check_intertwiner(const SparseTensor<S>& T, const std::vector<SparseTensor<S>>& reps_out,
                       const std::vector<SparseTensor<S>>& reps_in) {
    if (reps_out.size() != T.out_axes() || reps_in.size() != T.in_axes())
        throw invalid_input("check_intertwiner: need one matrix per axis");
    auto dense = [](const SparseTensor<S>& M, bool transpose) {
        if (M.rank() != 2 || M.shape()[0] != M.shape()[1]) throw invalid_input("check_intertwiner: matrices must be square");
        const std::uint32_t d = M.shape()[0];
        std::vector<S> D(static_cast<std::size_t>(d) * d, S(0));
        for (const auto& [k, v] : M.data()) {
            std::uint64_t r = k / d, c = k % d;
            D[transpose ? c * d + r : r * d + c] = v;
        }
        return D;
    };
    SparseTensor<S> lhs = T, rhs = T;
    for (std::size_t a = 0; a < T.rank(); ++a) {
        bool is_out = a < T.out_axes();
        const auto& M = is_out ? reps_out[a] : reps_in[a - T.out_axes()];
        if (M.shape().empty() || M.shape()[0] != T.shape()[a]) throw invalid_input("check_intertwiner: dimension mismatch");
        // (T R)[.., b, ..] = sum_a T[.., a, ..] R[a][b]
        if (is_out)
            rhs = rhs.mode_product(a, dense(M, false), M.shape()[0]);
        else
            lhs = lhs.mode_product(a, dense(M, true), M.shape()[0]);
    }
    return lhs == rhs;
}

}  // namespace qsym
