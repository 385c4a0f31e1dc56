#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qsym/config.hpp"
#include "qsym/rational.hpp"

namespace qsym {

/// Dense rational matrix, row-major.
struct QMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Q> a;

    QMatrix() = default;
    QMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, Q(0)) {}

    Q& operator()(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const Q& operator()(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    friend QMatrix operator+(QMatrix x, const QMatrix& y) {
        x.require_same(y);
        for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] += y.a[i];
        return x;
    }
    friend QMatrix operator-(QMatrix x, const QMatrix& y) {
        x.require_same(y);
        for (std::size_t i = 0; i < x.a.size(); ++i) x.a[i] -= y.a[i];
        return x;
    }
    friend QMatrix operator*(const Q& s, QMatrix x) {
        for (auto& v : x.a) v *= s;
        return x;
    }
    friend QMatrix operator*(const QMatrix& x, const QMatrix& y) {
        if (x.cols != y.rows) throw invalid_input("matrix product: dimension mismatch");
        QMatrix r(x.rows, y.cols);
        for (std::size_t i = 0; i < x.rows; ++i)
            for (std::size_t k = 0; k < x.cols; ++k) {
                const Q& v = x(i, k);
                if (v == 0) continue;
                for (std::size_t j = 0; j < y.cols; ++j)
                    if (y(k, j) != 0) r(i, j) += v * y(k, j);
            }
        return r;
    }
    friend bool operator==(const QMatrix& x, const QMatrix& y) { return x.rows == y.rows && x.cols == y.cols && x.a == y.a; }

    QMatrix transpose() const {
        QMatrix r(cols, rows);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    bool is_zero() const {
        for (const auto& v : a)
            if (v != 0) return false;
        return true;
    }
    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& v : a) n += v != 0;
        return n;
    }

private:
    void require_same(const QMatrix& o) const {
        if (rows != o.rows || cols != o.cols) throw invalid_input("matrix sum: dimension mismatch");
    }
};

/// Operators on the degree-one labels (a, i) of Z_m^n, a in 1..m-1, i in 1..n, written with the
/// displayed delta formulas. Pair index (x, y) is x * D + y.
class HammingOperators {
public:
    enum class AABBReading { mirror, coincident };

    HammingOperators(int m, int n) : m_(m), n_(n) {
        if (m < 2 || n < 1) throw invalid_input("hamming operators need m >= 2 and n >= 1");
        D_ = static_cast<std::size_t>((m - 1) * n);
        config::require_dense(static_cast<std::uint64_t>(D_) * D_ * D_ * D_, "hamming operators");
    }

    int m() const { return m_; }
    int n() const { return n_; }
    std::size_t dim() const { return D_; }

    /// Label (a, i) at position p; a in 1..m-1, i in 1..n.
    std::pair<int, int> label(std::size_t p) const {
        return {static_cast<int>(p / static_cast<std::size_t>(n_)) + 1, static_cast<int>(p % static_cast<std::size_t>(n_)) + 1};
    }
    std::size_t position(int a, int i) const {
        return static_cast<std::size_t>(a - 1) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i - 1);
    }

    /// [R]^{bj}_{a1 i1, a2 i2} = delta_{i1 i2 j} delta_{a1 + a2 = b}
    QMatrix merge() const {
        QMatrix R(D_, D_ * D_);
        for (std::size_t x = 0; x < D_; ++x)
            for (std::size_t y = 0; y < D_; ++y)
                for (std::size_t z = 0; z < D_; ++z) {
                    auto [a1, i1] = label(x);
                    auto [a2, i2] = label(y);
                    auto [b, j] = label(z);
                    if (i1 == i2 && i2 == j && cong(a1 + a2, b)) R(z, x * D_ + y) = 1;
                }
        return R;
    }

    /// [R]^{b1 j1, b2 j2}_{a1 i1, a2 i2} = delta_{i1 i2 j1 j2} delta_{a1 + a2 = b1 + b2}
    QMatrix connecter() const {
        return pair_op([&](int a1, int i1, int a2, int i2, int b1, int j1, int b2, int j2) {
            return i1 == i2 && i2 == j1 && j1 == j2 && cong(a1 + a2, b1 + b2);
        });
    }
    QMatrix AAbb() const {
        return pair_op([&](int a1, int i1, int a2, int i2, int b1, int j1, int b2, int j2) {
            return cong(a1 + a2, 0) && cong(b1 + b2, 0) && i1 == i2 && j1 == j2 && i1 != j1;
        });
    }
    QMatrix aBaB() const {
        return pair_op([&](int a1, int i1, int a2, int i2, int b1, int j1, int b2, int j2) {
            return a1 == b2 && a2 == b1 && i1 == j2 && i2 == j1 && i1 != i2;
        });
    }
    QMatrix aBBa() const {
        return pair_op([&](int a1, int i1, int a2, int i2, int b1, int j1, int b2, int j2) {
            return a1 == b1 && a2 == b2 && i1 == j1 && i2 == j2 && i1 != i2;
        });
    }
    /// delta_{a1+a2=0} delta_{b1+b2=0} delta_{a1 a2 b1 b2}; the i, j constraint either mirrors
    /// AAbb (i1 = i2 != j1 = j2) or only asks i1 = i2 and j1 = j2.
    QMatrix AABB(AABBReading reading = AABBReading::mirror) const {
        return pair_op([&](int a1, int i1, int a2, int i2, int b1, int j1, int b2, int j2) {
            bool a = cong(a1 + a2, 0) && cong(b1 + b2, 0) && a1 == a2 && a2 == b1 && b1 == b2;
            bool ij = i1 == i2 && j1 == j2 && (reading == AABBReading::coincident || i1 != j1);
            return a && ij;
        });
    }

    QMatrix identity2() const {
        QMatrix I(D_ * D_, D_ * D_);
        for (std::size_t r = 0; r < D_ * D_; ++r) I(r, r) = 1;
        return I;
    }

private:
    int m_, n_;
    std::size_t D_;

    bool cong(int x, int y) const { return ((x - y) % m_ + m_) % m_ == 0; }

    template <class F>
    QMatrix pair_op(F f) const {
        QMatrix R(D_ * D_, D_ * D_);
        for (std::size_t r = 0; r < D_ * D_; ++r) {
            auto [b1, j1] = label(r / D_);
            auto [b2, j2] = label(r % D_);
            for (std::size_t c = 0; c < D_ * D_; ++c) {
                auto [a1, i1] = label(c / D_);
                auto [a2, i2] = label(c % D_);
                if (f(a1, i1, a2, i2, b1, j1, b2, j2)) R(r, c) = 1;
            }
        }
        return R;
    }
};

}  // namespace qsym
