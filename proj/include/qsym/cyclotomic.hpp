#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qsym/rational.hpp"

namespace qsym {

namespace detail {

// Integer coefficients of the M-th cyclotomic polynomial and the reduced powers of zeta_M.
struct CycloTables {
    int level = 1;
    int phi = 1;
    std::vector<long long> poly;                 // ascending, monic, degree phi
    std::vector<std::vector<long long>> powers;  // zeta^j reduced, j in [0, level)
};

inline std::vector<long long> poly_divide_exact(std::vector<long long> num, const std::vector<long long>& den) {
    // den monic
    std::size_t dn = den.size() - 1;
    std::vector<long long> q(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        long long t = num[i];
        q[i - dn] = t;
        if (t != 0)
            for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= t * den[j];
    }
    return q;
}

inline std::vector<long long> cyclotomic_poly(int m) {
    // x^m - 1 divided by Phi_d for every proper divisor d
    std::vector<long long> p(static_cast<std::size_t>(m) + 1, 0);
    p[0] = -1;
    p[static_cast<std::size_t>(m)] = 1;
    for (int d = 1; d < m; ++d)
        if (m % d == 0) p = poly_divide_exact(p, cyclotomic_poly(d));
    return p;
}

inline std::shared_ptr<const CycloTables> make_tables(int m) {
    auto t = std::make_shared<CycloTables>();
    t->level = m;
    t->poly = cyclotomic_poly(m);
    t->phi = static_cast<int>(t->poly.size()) - 1;
    std::size_t phi = static_cast<std::size_t>(t->phi);
    std::vector<long long> cur(phi, 0);
    cur[0] = 1;
    for (int j = 0; j < m; ++j) {
        t->powers.push_back(cur);
        // multiply by x and reduce
        long long top = cur[phi - 1];
        for (std::size_t i = phi - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (top != 0)
            for (std::size_t i = 0; i < phi; ++i) cur[i] -= top * t->poly[i];
    }
    return t;
}

inline std::shared_ptr<const CycloTables> tables(int m) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const CycloTables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto t = make_tables(m);
    cache.emplace(m, t);
    return t;
}

}  // namespace detail

/// Exact element of the M-th cyclotomic field, stored in the basis 1, z, ..., z^(phi(M)-1)
/// with z = exp(2 pi i / M).
class Cyclotomic {
public:
    Cyclotomic() : level_(1), c_{Q(0)} {}
    Cyclotomic(const Q& q) : level_(1), c_{q} {}
    Cyclotomic(long long q) : level_(1), c_{Q(q)} {}

    /// z_M^j
    static Cyclotomic zeta(int m, long long j) {
        if (m < 1) throw invalid_input("cyclotomic level must be positive");
        auto t = detail::tables(m);
        long long r = ((j % m) + m) % m;
        Cyclotomic x;
        x.level_ = m;
        x.c_.assign(static_cast<std::size_t>(t->phi), Q(0));
        const auto& pw = t->powers[static_cast<std::size_t>(r)];
        for (std::size_t i = 0; i < pw.size(); ++i) x.c_[i] = pw[i];
        return x;
    }

    /// Builds sum c_j z_M^j from arbitrary-length coefficients (reduced on construction).
    static Cyclotomic from_powers(int m, const std::vector<Q>& coeffs) {
        Cyclotomic x = zero_at(m);
        auto t = detail::tables(m);
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            if (coeffs[j] == 0) continue;
            const auto& pw = t->powers[j % static_cast<std::size_t>(m)];
            for (std::size_t i = 0; i < pw.size(); ++i)
                if (pw[i] != 0) x.c_[i] += coeffs[j] * pw[i];
        }
        return x;
    }

    int level() const { return level_; }
    const std::vector<Q>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& q : c_)
            if (q != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    /// Constant coefficient; equals the value when is_rational().
    Q rational_part() const { return c_[0]; }

    /// Re-expressed at level L (a multiple of the current level).
    Cyclotomic lifted(int L) const {
        if (L == level_) return *this;
        if (L % level_ != 0) throw invalid_input("cyclotomic lift to a non-multiple level");
        int f = L / level_;
        Cyclotomic x = zero_at(L);
        auto t = detail::tables(L);
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            const auto& pw = t->powers[(j * static_cast<std::size_t>(f)) % static_cast<std::size_t>(L)];
            for (std::size_t i = 0; i < pw.size(); ++i)
                if (pw[i] != 0) x.c_[i] += c_[j] * pw[i];
        }
        return x;
    }

    Cyclotomic conj() const {
        if (level_ <= 2) return *this;
        Cyclotomic x = zero_at(level_);
        auto t = detail::tables(level_);
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            const auto& pw = t->powers[(static_cast<std::size_t>(level_) - j) % static_cast<std::size_t>(level_)];
            for (std::size_t i = 0; i < pw.size(); ++i)
                if (pw[i] != 0) x.c_[i] += c_[j] * pw[i];
        }
        return x;
    }

    std::complex<double> to_complex() const {
        std::complex<double> s = 0;
        const double pi = std::acos(-1.0);
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0) continue;
            double ang = 2.0 * pi * static_cast<double>(j) / static_cast<double>(level_);
            s += to_double(c_[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        return s;
    }

    Cyclotomic& operator+=(const Cyclotomic& o) {
        if (o.level_ == level_) {
            for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
            return *this;
        }
        int L = std::lcm(level_, o.level_);
        Cyclotomic a = lifted(L), b = o.lifted(L);
        for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] += b.c_[i];
        return *this = std::move(a);
    }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this += -o; }
    Cyclotomic operator-() const {
        Cyclotomic x = *this;
        for (auto& q : x.c_) q = -q;
        return x;
    }
    Cyclotomic& operator*=(const Q& q) {
        for (auto& a : c_) a *= q;
        return *this;
    }
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Q& q) { return a *= q; }
    friend Cyclotomic operator*(const Q& q, Cyclotomic a) { return a *= q; }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.level_ <= 2 && b.level_ <= 2) {
            Cyclotomic x;
            x.level_ = std::max(a.level_, b.level_);
            x.c_[0] = a.c_[0] * b.c_[0];
            return x;
        }
        if (a.is_rational()) return b * a.c_[0];
        if (b.is_rational()) return a * b.c_[0];
        if (a.level_ != b.level_) {
            int L = std::lcm(a.level_, b.level_);
            return a.lifted(L) * b.lifted(L);
        }
        auto t = detail::tables(a.level_);
        std::size_t phi = static_cast<std::size_t>(t->phi);
        std::vector<Q> prod(2 * phi - 1);
        for (std::size_t i = 0; i < phi; ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < phi; ++j)
                if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
        }
        for (std::size_t d = prod.size(); d-- > phi;) {
            if (prod[d] == 0) continue;
            Q top = prod[d];
            for (std::size_t j = 0; j <= phi; ++j)
                if (t->poly[j] != 0) prod[d - phi + j] -= top * t->poly[j];
        }
        Cyclotomic x = zero_at(a.level_);
        for (std::size_t i = 0; i < phi; ++i) x.c_[i] = std::move(prod[i]);
        return x;
    }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        if (a.level_ == b.level_) return a.c_ == b.c_;
        if (a.is_rational() && b.is_rational()) return a.c_[0] == b.c_[0];
        int L = std::lcm(a.level_, b.level_);
        return a.lifted(L).c_ == b.lifted(L).c_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    /// Smallest level at which the value is expressible (reduced form of the field).
    Cyclotomic normalized() const {
        if (is_rational()) return Cyclotomic(c_[0]);
        for (int d = 1; d < level_; ++d) {
            if (level_ % d != 0) continue;
            // try to express at level d: value must be a combination of zeta_d powers
            Cyclotomic probe = zero_at(d);
            auto td = detail::tables(d);
            // solve by lifting basis of level d and matching coefficients greedily (triangular)
            std::vector<Cyclotomic> basis;
            for (int j = 0; j < td->phi; ++j) basis.push_back(zeta(d, j).lifted(level_));
            if (auto sol = solve_in_span(basis)) {
                for (int j = 0; j < td->phi; ++j) probe.c_[static_cast<std::size_t>(j)] = (*sol)[static_cast<std::size_t>(j)];
                return probe;
            }
        }
        return *this;
    }

    /// Human-readable form using z_M, e.g. "1 + 2*z5^2".
    std::string str() const {
        if (is_rational()) return to_string(c_[0]);
        std::string out;
        std::string z = "z" + std::to_string(level_);
        for (std::size_t j = 0; j < c_.size(); ++j) {
            const Q& a = c_[j];
            if (a == 0) continue;
            bool neg = a < 0;
            Q mag = neg ? Q(-a) : a;
            out += out.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            std::string mono = j == 0 ? "" : (j == 1 ? z : z + "^" + std::to_string(j));
            if (j == 0)
                out += to_string(mag);
            else if (mag == 1)
                out += mono;
            else
                out += to_string(mag) + "*" + mono;
        }
        return out;
    }

    /// Lexicographic comparison of canonical coefficients at a common level.
    friend bool lex_less(const Cyclotomic& a, const Cyclotomic& b) {
        int L = std::lcm(a.level_, b.level_);
        Cyclotomic x = a.lifted(L), y = b.lifted(L);
        return x.c_ < y.c_;
    }

private:
    int level_;
    std::vector<Q> c_;

    static Cyclotomic zero_at(int m) {
        Cyclotomic x;
        x.level_ = m;
        x.c_.assign(static_cast<std::size_t>(detail::tables(m)->phi), Q(0));
        return x;
    }

    // Gaussian elimination over Q on the coefficient vectors.
    std::optional<std::vector<Q>> solve_in_span(const std::vector<Cyclotomic>& basis) const;
};

inline std::optional<std::vector<Q>> Cyclotomic::solve_in_span(const std::vector<Cyclotomic>& basis) const {
    std::size_t rows = c_.size(), cols = basis.size();
    std::vector<std::vector<Q>> a(rows, std::vector<Q>(cols + 1));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) a[r][c] = basis[c].c_[r];
        a[r][cols] = c_[r];
    }
    std::vector<std::size_t> pivcol;
    std::size_t pr = 0;
    for (std::size_t c = 0; c < cols && pr < rows; ++c) {
        std::size_t sel = pr;
        while (sel < rows && a[sel][c] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(a[sel], a[pr]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == pr || a[r][c] == 0) continue;
            Q f = a[r][c] / a[pr][c];
            for (std::size_t k = c; k <= cols; ++k) a[r][k] -= f * a[pr][k];
        }
        pivcol.push_back(c);
        ++pr;
    }
    for (std::size_t r = pr; r < rows; ++r)
        if (a[r][cols] != 0) return std::nullopt;
    std::vector<Q> sol(cols, Q(0));
    for (std::size_t i = 0; i < pivcol.size(); ++i) sol[pivcol[i]] = a[i][cols] / a[i][pivcol[i]];
    return sol;
}

}  // namespace qsym
