#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "qsym/config.hpp"
#include "qsym/cyclotomic.hpp"

namespace qsym {

/// Exponent tuple; doubles as a character label.
using GroupElement = std::vector<int>;

/// Z_{m_1} x ... x Z_{m_n}
class AbelianGroup {
public:
    AbelianGroup() = default;
    explicit AbelianGroup(std::vector<int> orders) : m_(std::move(orders)) {
        if (m_.empty()) throw invalid_input("group needs at least one cyclic factor");
        N_ = 1;
        M_ = 1;
        for (int m : m_) {
            if (m < 1) throw invalid_input("cyclic factor orders must be positive");
            N_ *= static_cast<std::uint64_t>(m);
            if (N_ > config::max_n())
                throw guard_error("group order exceeds QSYM_MAX_N = " + std::to_string(config::max_n()));
            M_ = std::lcm(M_, m);
        }
        strides_.assign(m_.size(), 1);
        for (std::size_t i = m_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * static_cast<std::uint64_t>(m_[i]);
    }

    const std::vector<int>& orders() const { return m_; }
    std::size_t rank() const { return m_.size(); }
    std::uint64_t order() const { return N_; }
    int exponent() const { return M_; }

    bool contains(const GroupElement& a) const {
        if (a.size() != m_.size()) return false;
        for (std::size_t i = 0; i < m_.size(); ++i)
            if (a[i] < 0 || a[i] >= m_[i]) return false;
        return true;
    }
    void require(const GroupElement& a) const {
        if (!contains(a)) throw invalid_input("element " + str(a) + " is not valid for the group");
    }

    /// Coordinate-wise reduction into [0, m_i).
    GroupElement element(const std::vector<long long>& raw) const {
        if (raw.size() != m_.size()) throw invalid_input("element has the wrong number of coordinates");
        GroupElement a(m_.size());
        for (std::size_t i = 0; i < m_.size(); ++i) a[i] = static_cast<int>(((raw[i] % m_[i]) + m_[i]) % m_[i]);
        return a;
    }

    GroupElement zero() const { return GroupElement(m_.size(), 0); }

    GroupElement add(const GroupElement& a, const GroupElement& b) const {
        GroupElement c(m_.size());
        for (std::size_t i = 0; i < m_.size(); ++i) c[i] = (a[i] + b[i]) % m_[i];
        return c;
    }
    GroupElement sub(const GroupElement& a, const GroupElement& b) const {
        GroupElement c(m_.size());
        for (std::size_t i = 0; i < m_.size(); ++i) c[i] = (a[i] - b[i] + m_[i]) % m_[i];
        return c;
    }
    GroupElement neg(const GroupElement& a) const {
        GroupElement c(m_.size());
        for (std::size_t i = 0; i < m_.size(); ++i) c[i] = (m_[i] - a[i]) % m_[i];
        return c;
    }

    /// Position in the fixed enumeration (lexicographic, last coordinate fastest).
    std::uint64_t index(const GroupElement& a) const {
        std::uint64_t r = 0;
        for (std::size_t i = 0; i < m_.size(); ++i) r += static_cast<std::uint64_t>(a[i]) * strides_[i];
        return r;
    }
    GroupElement at(std::uint64_t idx) const {
        GroupElement a(m_.size());
        for (std::size_t i = 0; i < m_.size(); ++i) {
            a[i] = static_cast<int>(idx / strides_[i]);
            idx %= strides_[i];
        }
        return a;
    }
    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> out;
        out.reserve(N_);
        for (std::uint64_t i = 0; i < N_; ++i) out.push_back(at(i));
        return out;
    }

    /// Number of nonzero coordinates.
    static int degree(const GroupElement& a) {
        return static_cast<int>(std::count_if(a.begin(), a.end(), [](int x) { return x != 0; }));
    }

    static std::string str(const GroupElement& a) {
        std::string s = "(";
        for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + std::to_string(a[i]);
        return s + ")";
    }

    friend bool operator==(const AbelianGroup& a, const AbelianGroup& b) { return a.m_ == b.m_; }

private:
    std::vector<int> m_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t N_ = 1;
    int M_ = 1;
};

inline AbelianGroup make_group(const std::vector<int>& orders) { return AbelianGroup(orders); }

/// tau_mu(alpha) = prod_i zeta_M^{(M/m_i) alpha_i mu_i}
inline Cyclotomic char_value(const AbelianGroup& G, const GroupElement& mu, const GroupElement& alpha) {
    G.require(mu);
    G.require(alpha);
    const int M = G.exponent();
    long long e = 0;
    for (std::size_t i = 0; i < G.rank(); ++i) {
        long long step = M / G.orders()[i];
        e = (e + step * ((static_cast<long long>(alpha[i]) * mu[i]) % G.orders()[i])) % M;
    }
    if (M == 1) return Cyclotomic(1);
    return Cyclotomic::zeta(M, e);
}

/// Exponent e with tau_mu(alpha) = zeta_M^e.
inline long long char_exponent(const AbelianGroup& G, const GroupElement& mu, const GroupElement& alpha) {
    const int M = G.exponent();
    long long e = 0;
    for (std::size_t i = 0; i < G.rank(); ++i) {
        long long step = M / G.orders()[i];
        e = (e + step * ((static_cast<long long>(alpha[i]) * mu[i]) % G.orders()[i])) % M;
    }
    return e;
}

/// Degree-major presentation order for Z_2^n: by degree, then descending lexicographic
/// inside degrees d <= n/2 and ascending lexicographic above, so that each upper block
/// lists the complements of the matching lower block.
inline std::vector<GroupElement> degree_major_order(const AbelianGroup& G) {
    auto els = G.elements();
    const int n = static_cast<int>(G.rank());
    std::stable_sort(els.begin(), els.end(), [n](const GroupElement& a, const GroupElement& b) {
        int da = AbelianGroup::degree(a), db = AbelianGroup::degree(b);
        if (da != db) return da < db;
        if (2 * da <= n) return b < a;
        return a < b;
    });
    return els;
}

}  // namespace qsym
