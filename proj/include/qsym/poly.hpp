#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "qsym/rational.hpp"

namespace qsym {

/// Univariate polynomial in the loop parameter n with rational coefficients.
class PolyQ {
public:
    PolyQ() = default;
    PolyQ(const Q& c) : c_{c} { trim(); }
    PolyQ(long long c) : c_{Q(c)} { trim(); }
    explicit PolyQ(std::vector<Q> coeffs) : c_(std::move(coeffs)) { trim(); }

    static PolyQ n() { return PolyQ(std::vector<Q>{Q(0), Q(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    Q coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Q(0); }
    Q constant() const { return coeff(0); }
    const std::vector<Q>& coeffs() const { return c_; }

    Q operator()(const Q& x) const {
        Q r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    PolyQ& operator+=(const PolyQ& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    PolyQ& operator-=(const PolyQ& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    PolyQ operator-() const {
        PolyQ r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend PolyQ operator+(PolyQ a, const PolyQ& b) { return a += b; }
    friend PolyQ operator-(PolyQ a, const PolyQ& b) { return a -= b; }
    friend PolyQ operator*(const PolyQ& a, const PolyQ& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Q> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return PolyQ(std::move(r));
    }
    PolyQ& operator*=(const PolyQ& o) { return *this = *this * o; }
    friend bool operator==(const PolyQ& a, const PolyQ& b) { return a.c_ == b.c_; }
    friend bool operator!=(const PolyQ& a, const PolyQ& b) { return !(a == b); }

    PolyQ pow(unsigned e) const {
        PolyQ r(1), b = *this;
        while (e) {
            if (e & 1u) r *= b;
            b *= b;
            e >>= 1u;
        }
        return r;
    }

    /// Expanded form, highest power first, e.g. "n^2 - 10*n + 24" or "1/4*n - 3/4".
    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            const Q& a = c_[static_cast<std::size_t>(i)];
            if (a == 0) continue;
            bool neg = a < 0;
            Q mag = neg ? Q(-a) : a;
            if (out.empty())
                out += neg ? "-" : "";
            else
                out += neg ? " - " : " + ";
            std::string mono = i == 0 ? "" : (i == 1 ? "n" : "n^" + std::to_string(i));
            if (i == 0)
                out += to_string(mag);
            else if (mag == 1)
                out += mono;
            else
                out += to_string(mag) + "*" + mono;
        }
        return out;
    }

    /// Splits off rational roots: returns (leading constant, roots with multiplicity, cofactor)
    /// such that p = lead * prod (n - r) * cofactor, with the cofactor monic and root-free.
    struct Factored {
        Q lead;
        std::vector<Q> roots;
        std::vector<Q> rest;  // monic cofactor, ascending
    };
    Factored factor_rational() const;

    /// Product form such as "(n-4)(n-6)(n-8)" when p splits over Q, otherwise str().
    std::string factored_str() const;

private:
    std::vector<Q> c_;  // ascending powers
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

namespace detail {

inline std::vector<Z> divisors_of(Z v) {
    if (v < 0) v = -v;
    std::vector<Z> out;
    if (v == 0) return out;
    // coefficients in practice are small; trial division is enough
    for (Z d = 1; d * d <= v; ++d) {
        if (v % d == 0) {
            out.push_back(d);
            if (d * d != v) out.push_back(v / d);
        }
        if (d > 1000000) break;
    }
    return out;
}

// synthetic division by (n - r); returns quotient and remainder
inline std::pair<std::vector<Q>, Q> divide_linear(const std::vector<Q>& c, const Q& r) {
    std::vector<Q> q(c.size() > 0 ? c.size() - 1 : 0);
    Q acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = acc * r + c[i];
        if (i > 0) q[i - 1] = acc;
    }
    return {q, acc};
}

}  // namespace detail

inline PolyQ::Factored PolyQ::factor_rational() const {
    Factored f;
    if (is_zero()) {
        f.lead = 0;
        return f;
    }
    f.lead = c_.back();
    std::vector<Q> cur = c_;
    for (auto& x : cur) x /= f.lead;
    // roots at zero first
    while (cur.size() > 1 && cur.front() == 0) {
        cur.erase(cur.begin());
        f.roots.push_back(0);
    }
    bool progress = true;
    while (progress && cur.size() > 1) {
        progress = false;
        // clear denominators to apply the rational root theorem
        Z l = 1;
        for (auto& x : cur) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(x));
        Z a0 = boost::multiprecision::numerator(cur.front() * Q(l));
        Z an = boost::multiprecision::numerator(cur.back() * Q(l));
        for (const Z& p : detail::divisors_of(a0)) {
            for (const Z& q : detail::divisors_of(an)) {
                for (int s : {1, -1}) {
                    Q r(s * p, q);
                    auto [quot, rem] = detail::divide_linear(cur, r);
                    if (rem == 0) {
                        f.roots.push_back(r);
                        cur = quot;
                        progress = true;
                        break;
                    }
                }
                if (progress) break;
            }
            if (progress) break;
        }
    }
    std::sort(f.roots.begin(), f.roots.end());
    f.rest = cur;
    return f;
}

inline std::string PolyQ::factored_str() const {
    if (degree() < 1) return str();
    Factored f = factor_rational();
    if (f.rest.size() > 1) return str();
    std::string out;
    if (f.lead == -1)
        out = "-";
    else if (f.lead != 1)
        out = to_string(f.lead);
    for (const Q& r : f.roots) {
        if (r == 0)
            out += "n";
        else if (r > 0)
            out += "(n-" + to_string(r) + ")";
        else
            out += "(n+" + to_string(Q(-r)) + ")";
    }
    return out;
}

namespace detail {

// Recursive-descent reader for polynomial text in n.
class PolyReader {
public:
    explicit PolyReader(const std::string& s) : s_(s) {}

    PolyQ parse() {
        PolyQ p = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return p;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw invalid_input("polynomial '" + s_ + "' at offset " + std::to_string(i_) + ": " + msg);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool peek(char c) {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }
    bool starts_factor() {
        skip();
        if (i_ >= s_.size()) return false;
        char c = s_[i_];
        return c == '(' || c == 'n' || std::isdigit(static_cast<unsigned char>(c));
    }
    PolyQ expr() {
        PolyQ acc = term();
        for (;;) {
            if (peek('+')) {
                ++i_;
                acc += term();
            } else if (peek('-')) {
                ++i_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }
    PolyQ term() {
        PolyQ acc = unary();
        for (;;) {
            if (peek('*')) {
                ++i_;
                acc *= unary();
            } else if (peek('/')) {
                ++i_;
                PolyQ d = unary();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero");
                acc *= PolyQ(Q(1) / d.constant());
            } else if (starts_factor()) {
                acc *= unary();  // implicit product, e.g. (n-4)(n-6)
            } else {
                return acc;
            }
        }
    }
    PolyQ unary() {
        if (peek('-')) {
            ++i_;
            return -unary();
        }
        if (peek('+')) {
            ++i_;
            return unary();
        }
        PolyQ b = base();
        if (peek('^')) {
            ++i_;
            skip();
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            if (st == i_) fail("expected exponent");
            b = b.pow(static_cast<unsigned>(std::stoul(s_.substr(st, i_ - st))));
        }
        return b;
    }
    PolyQ base() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        char c = s_[i_];
        if (c == '(') {
            ++i_;
            PolyQ p = expr();
            if (!peek(')')) fail("expected ')'");
            ++i_;
            return p;
        }
        if (c == 'n') {
            ++i_;
            return PolyQ::n();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            return PolyQ(Q(Z(s_.substr(st, i_ - st))));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }
};

}  // namespace detail

/// Parses text such as "(n-2)/4", "n^2 - 3*n + 1/2" or "(n-4)(n-6)".
inline PolyQ parse_poly(const std::string& text) { return detail::PolyReader(text).parse(); }

}  // namespace qsym
