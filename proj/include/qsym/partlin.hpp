#pragma once

#include <map>
#include <string>
#include <vector>

#include "qsym/partition.hpp"
#include "qsym/poly.hpp"

namespace qsym {

/// Formal linear combination of partitions in P(k,l) with coefficients in Q[n].
class PartLin {
public:
    using Terms = std::map<Partition, PolyQ>;

    PartLin() = default;
    PartLin(int k, int l) : k_(k), l_(l) {}
    PartLin(const Partition& p, PolyQ c = PolyQ(1)) : k_(p.k()), l_(p.l()) { add(p, c); }

    int k() const { return k_; }
    int l() const { return l_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    PolyQ coeff(const Partition& p) const {
        auto it = t_.find(p);
        return it == t_.end() ? PolyQ() : it->second;
    }

    void add(const Partition& p, const PolyQ& c) {
        if (p.k() != k_ || p.l() != l_)
            throw invalid_input("arity mismatch: adding " + p.str() + " to a combination in P(" + std::to_string(k_) + "," +
                                std::to_string(l_) + ")");
        if (c.is_zero()) return;
        auto [it, fresh] = t_.try_emplace(p, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    PartLin& operator+=(const PartLin& o) {
        require_same(o, "+");
        for (const auto& [p, c] : o.t_) add(p, c);
        return *this;
    }
    PartLin& operator-=(const PartLin& o) {
        require_same(o, "-");
        for (const auto& [p, c] : o.t_) add(p, -c);
        return *this;
    }
    PartLin& operator*=(const PolyQ& c) {
        if (c.is_zero()) {
            t_.clear();
            return *this;
        }
        for (auto& kv : t_) kv.second *= c;
        return *this;
    }
    friend PartLin operator+(PartLin a, const PartLin& b) { return a += b; }
    friend PartLin operator-(PartLin a, const PartLin& b) { return a -= b; }
    friend PartLin operator*(PartLin a, const PolyQ& c) { return a *= c; }
    friend PartLin operator*(const PolyQ& c, PartLin a) { return a *= c; }
    PartLin operator-() const { return *this * PolyQ(-1); }

    friend bool operator==(const PartLin& a, const PartLin& b) { return a.k_ == b.k_ && a.l_ == b.l_ && a.t_ == b.t_; }
    friend bool operator!=(const PartLin& a, const PartLin& b) { return !(a == b); }

    /// One term per line: "coeff · P(...)"; "0" for the zero element.
    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (const auto& [p, c] : t_) {
            if (!s.empty()) s += "\n";
            std::string cs = c.str();
            bool compound = cs.find(' ') != std::string::npos;
            s += (compound ? "(" + cs + ")" : cs) + " · " + p.str();
        }
        return s;
    }

private:
    int k_ = 0, l_ = 0;
    Terms t_;

    void require_same(const PartLin& o, const char* op) const {
        if (o.k_ != k_ || o.l_ != l_)
            throw invalid_input(std::string("arity mismatch in '") + op + "': P(" + std::to_string(k_) + "," + std::to_string(l_) +
                                ") vs P(" + std::to_string(o.k_) + "," + std::to_string(o.l_) + ")");
    }
};

/// q after p, every closed loop contributing a factor n.
inline PartLin compose(const PartLin& q, const PartLin& p) {
    if (q.k() != p.l())
        throw invalid_input("compose: arity mismatch, left side takes " + std::to_string(q.k()) + " points, right side gives " +
                            std::to_string(p.l()));
    PartLin r(p.k(), q.l());
    for (const auto& [qp, qc] : q.terms())
        for (const auto& [pp, pc] : p.terms()) {
            Composite c = compose(qp, pp);
            r.add(c.p, qc * pc * PolyQ::n().pow(static_cast<unsigned>(c.loops)));
        }
    return r;
}

inline PartLin tensor(const PartLin& a, const PartLin& b) {
    PartLin r(a.k() + b.k(), a.l() + b.l());
    for (const auto& [ap, ac] : a.terms())
        for (const auto& [bp, bc] : b.terms()) r.add(tensor(ap, bp), ac * bc);
    return r;
}

inline PartLin adjoint(const PartLin& a) {
    PartLin r(a.l(), a.k());
    for (const auto& [p, c] : a.terms()) r.add(adjoint(p), c);
    return r;
}

inline PartLin rotate(const PartLin& a, Side side, Direction dir) {
    int k = a.k(), l = a.l();
    if (dir == Direction::down) {
        if (k == 0) throw invalid_input("rotate: no upper points to move");
        --k, ++l;
    } else {
        if (l == 0) throw invalid_input("rotate: no lower points to move");
        ++k, --l;
    }
    PartLin r(k, l);
    for (const auto& [p, c] : a.terms()) r.add(rotate(p, side, dir), c);
    return r;
}

inline PartLin identity_lin(int k) { return PartLin(identity_partition(k)); }

/// (id - cross) / 2 on one two-point.
inline PartLin antisym2() {
    PartLin a(identity_partition(2), PolyQ(Q(1, 2)));
    a.add(cross_partition(), PolyQ(Q(-1, 2)));
    return a;
}

/// Antisymmetrizers on all two-points of both rows. Each Å is (id - swap)/2 of the two points,
/// so the composite is an alternating sum over point relabelings.
inline PartLin antisymmetrize(const Partition& p) {
    if (p.k() % 2 || p.l() % 2)
        throw invalid_input("antisymmetrize needs even point counts on both rows, got " + p.str());
    const int tu = p.k() / 2, tl = p.l() / 2, t = tu + tl;
    if (t > 24) throw guard_error("antisymmetrize: too many two-points");
    PartLin r(p.k(), p.l());
    const Q scale = Q(1) / qpow(Q(2), static_cast<unsigned>(t));
    std::vector<int> up(static_cast<std::size_t>(p.k())), lo(static_cast<std::size_t>(p.l()));
    for (std::uint32_t s = 0; s < (1u << t); ++s) {
        for (int i = 0; i < p.k(); ++i) up[static_cast<std::size_t>(i)] = i;
        for (int j = 0; j < p.l(); ++j) lo[static_cast<std::size_t>(j)] = j;
        int sign = 1;
        for (int b = 0; b < t; ++b) {
            if (!(s >> b & 1u)) continue;
            sign = -sign;
            auto& row = b < tu ? up : lo;
            int pos = 2 * (b < tu ? b : b - tu);
            std::swap(row[static_cast<std::size_t>(pos)], row[static_cast<std::size_t>(pos + 1)]);
        }
        r.add(permute_points(p, up, lo), PolyQ(sign > 0 ? scale : Q(-scale)));
    }
    return r;
}

inline PartLin antisymmetrize(const PartLin& e) {
    PartLin r(e.k(), e.l());
    for (const auto& [p, c] : e.terms()) r += antisymmetrize(p) * c;
    return r;
}

/// Exchanges the lower two-points i and i+1 (1-based) of e through the antisymmetrized crossing.
inline PartLin two_point_swap(const PartLin& e, int i) {
    const int l = e.l();
    if (l % 2) throw invalid_input("two_point_swap: lower row does not consist of two-points");
    const int t = l / 2;
    if (i < 1 || i + 1 > t)
        throw invalid_input("two_point_swap: position " + std::to_string(i) + " out of range for " + std::to_string(t) +
                            " two-points");
    Partition cross4 = Partition::from_labels(4, 4, {0, 1, 2, 3, 2, 3, 0, 1});
    PartLin op = tensor(tensor(identity_lin(2 * (i - 1)), antisymmetrize(cross4)), identity_lin(2 * (t - i - 1)));
    return compose(op, e);
}

struct IdentityCheck {
    bool equal = false;
    PartLin difference;  // lhs - rhs
};

inline IdentityCheck verify_identity(const PartLin& lhs, const PartLin& rhs) {
    if (lhs.k() != rhs.k() || lhs.l() != rhs.l())
        throw invalid_input("verify_identity: sides live in different spaces");
    IdentityCheck r;
    r.difference = lhs - rhs;
    r.equal = r.difference.is_zero();
    return r;
}

}  // namespace qsym
