#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qsym/config.hpp"
#include "qsym/cyclotomic.hpp"
#include "qsym/rational.hpp"

namespace qsym {

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<long long> {
    static bool is_zero(long long x) { return x == 0; }
    static long long conj(long long x) { return x; }
};

template <>
struct scalar_traits<Q> {
    static bool is_zero(const Q& x) { return x == 0; }
    static Q conj(const Q& x) { return x; }
};

template <>
struct scalar_traits<Cyclotomic> {
    static bool is_zero(const Cyclotomic& x) { return x.is_zero(); }
    static Cyclotomic conj(const Cyclotomic& x) { return x.conj(); }
};

using Index = std::vector<std::uint32_t>;

/// Exact multi-index array. Axes are ordered outputs first, then inputs; absent entries are zero.
template <class S>
class SparseTensor {
public:
    using Map = std::unordered_map<std::uint64_t, S>;

    SparseTensor() = default;
    SparseTensor(std::vector<std::uint32_t> shape, std::size_t out_axes) : shape_(std::move(shape)), out_(out_axes) {
        if (out_ > shape_.size()) throw invalid_input("more output axes than axes");
        strides_.assign(shape_.size(), 1);
        unsigned __int128 total = 1;
        for (std::size_t i = shape_.size(); i-- > 0;) {
            strides_[i] = static_cast<std::uint64_t>(total);
            total *= shape_[i] ? shape_[i] : 1;
            if (total > (static_cast<unsigned __int128>(1) << 63))
                throw guard_error("tensor index space exceeds 2^63 positions");
        }
        volume_ = static_cast<std::uint64_t>(total);
        for (auto d : shape_)
            if (d == 0) volume_ = 0;
    }

    /// Uniform shape: `out` axes and `in` axes all of dimension d.
    static SparseTensor uniform(std::uint32_t d, std::size_t out, std::size_t in) {
        return SparseTensor(std::vector<std::uint32_t>(out + in, d), out);
    }

    const std::vector<std::uint32_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t out_axes() const { return out_; }
    std::size_t in_axes() const { return shape_.size() - out_; }
    std::uint64_t volume() const { return volume_; }
    std::uint64_t out_volume() const {
        std::uint64_t v = 1;
        for (std::size_t i = 0; i < out_; ++i) v *= shape_[i];
        return v;
    }
    std::uint64_t in_volume() const {
        std::uint64_t v = 1;
        for (std::size_t i = out_; i < shape_.size(); ++i) v *= shape_[i];
        return v;
    }
    std::size_t nnz() const { return data_.size(); }
    const Map& data() const { return data_; }
    const std::vector<std::uint64_t>& strides() const { return strides_; }

    std::uint64_t encode(const Index& idx) const {
        if (idx.size() != shape_.size()) throw invalid_input("index rank mismatch");
        std::uint64_t k = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] >= shape_[i]) throw invalid_input("index out of range");
            k += idx[i] * strides_[i];
        }
        return k;
    }
    Index decode(std::uint64_t key) const {
        Index idx(shape_.size());
        for (std::size_t i = 0; i < shape_.size(); ++i) {
            idx[i] = static_cast<std::uint32_t>(key / strides_[i]);
            key %= strides_[i];
        }
        return idx;
    }
    std::uint32_t axis_of(std::uint64_t key, std::size_t axis) const {
        return static_cast<std::uint32_t>((key / strides_[axis]) % shape_[axis]);
    }

    S get(const Index& idx) const {
        auto it = data_.find(encode(idx));
        return it == data_.end() ? S(0) : it->second;
    }
    S get_key(std::uint64_t key) const {
        auto it = data_.find(key);
        return it == data_.end() ? S(0) : it->second;
    }
    void set(const Index& idx, const S& v) { set_key(encode(idx), v); }
    void set_key(std::uint64_t key, const S& v) {
        if (scalar_traits<S>::is_zero(v))
            data_.erase(key);
        else
            data_[key] = v;
    }
    void add(const Index& idx, const S& v) { add_key(encode(idx), v); }
    void add_key(std::uint64_t key, const S& v) {
        if (scalar_traits<S>::is_zero(v)) return;
        auto [it, fresh] = data_.try_emplace(key, v);
        if (!fresh) {
            it->second += v;
            if (scalar_traits<S>::is_zero(it->second)) data_.erase(it);
        }
    }
    void reserve(std::size_t n) { data_.reserve(n); }

    /// Keys in increasing order (lexicographic in the index tuple).
    std::vector<std::uint64_t> sorted_keys() const {
        std::vector<std::uint64_t> ks;
        ks.reserve(data_.size());
        for (const auto& kv : data_) ks.push_back(kv.first);
        std::sort(ks.begin(), ks.end());
        return ks;
    }

    SparseTensor& operator+=(const SparseTensor& o) {
        require_same_shape(o);
        for (const auto& [k, v] : o.data_) add_key(k, v);
        return *this;
    }
    SparseTensor& operator-=(const SparseTensor& o) {
        require_same_shape(o);
        for (const auto& [k, v] : o.data_) add_key(k, S(0) - v);
        return *this;
    }
    template <class F>
    SparseTensor& scale(const F& f) {
        for (auto it = data_.begin(); it != data_.end();) {
            it->second = it->second * f;
            if (scalar_traits<S>::is_zero(it->second))
                it = data_.erase(it);
            else
                ++it;
        }
        return *this;
    }
    friend SparseTensor operator+(SparseTensor a, const SparseTensor& b) { return a += b; }
    friend SparseTensor operator-(SparseTensor a, const SparseTensor& b) { return a -= b; }

    friend bool operator==(const SparseTensor& a, const SparseTensor& b) {
        if (a.shape_ != b.shape_ || a.out_ != b.out_ || a.data_.size() != b.data_.size()) return false;
        for (const auto& [k, v] : a.data_) {
            auto it = b.data_.find(k);
            if (it == b.data_.end() || !(it->second == v)) return false;
        }
        return true;
    }
    friend bool operator!=(const SparseTensor& a, const SparseTensor& b) { return !(a == b); }

    /// Same entries reinterpreted with a different split into outputs and inputs.
    SparseTensor with_out_axes(std::size_t out) const {
        SparseTensor r(shape_, out);
        r.data_ = data_;
        return r;
    }

    /// Reinterprets the entry layout with a new shape of equal volume (row-major).
    SparseTensor reshaped(std::vector<std::uint32_t> shape, std::size_t out) const {
        SparseTensor r(std::move(shape), out);
        if (r.volume_ != volume_) throw invalid_input("reshape changes volume");
        r.data_ = data_;
        return r;
    }

    /// Axis permutation: new axis i is old axis perm[i].
    SparseTensor permuted(const std::vector<std::size_t>& perm, std::size_t out) const {
        if (perm.size() != shape_.size()) throw invalid_input("axis permutation has wrong length");
        std::vector<std::uint32_t> ns(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) ns[i] = shape_[perm[i]];
        SparseTensor r(ns, out);
        r.data_.reserve(data_.size());
        for (const auto& [k, v] : data_) {
            std::uint64_t nk = 0;
            for (std::size_t i = 0; i < perm.size(); ++i) nk += axis_of(k, perm[i]) * r.strides_[i];
            r.data_.emplace(nk, v);
        }
        return r;
    }

    /// Conjugate transpose of the operator (outputs and inputs exchanged).
    SparseTensor adjoint() const {
        std::vector<std::size_t> perm;
        for (std::size_t i = out_; i < shape_.size(); ++i) perm.push_back(i);
        for (std::size_t i = 0; i < out_; ++i) perm.push_back(i);
        SparseTensor r = permuted(perm, shape_.size() - out_);
        for (auto& kv : r.data_) kv.second = scalar_traits<S>::conj(kv.second);
        return r;
    }

    /// Replaces axis `axis` (dimension d) by a new axis of dimension rows using
    /// M[new][old] given as a dense row-major matrix.
    SparseTensor mode_product(std::size_t axis, const std::vector<S>& M, std::uint32_t rows) const {
        const std::uint32_t d = shape_.at(axis);
        if (M.size() != static_cast<std::size_t>(rows) * d) throw invalid_input("mode product matrix has wrong size");
        std::vector<std::uint32_t> ns = shape_;
        ns[axis] = rows;
        SparseTensor r(ns, out_);
        // column lists of M for sparsity
        std::vector<std::vector<std::pair<std::uint32_t, const S*>>> cols(d);
        for (std::uint32_t t = 0; t < rows; ++t)
            for (std::uint32_t o = 0; o < d; ++o) {
                const S& m = M[static_cast<std::size_t>(t) * d + o];
                if (!scalar_traits<S>::is_zero(m)) cols[o].push_back({t, &m});
            }
        for (const auto& [k, v] : data_) {
            std::uint32_t old = axis_of(k, axis);
            std::uint64_t base = 0;
            for (std::size_t i = 0; i < shape_.size(); ++i)
                if (i != axis) base += axis_of(k, i) * r.strides_[i];
            for (const auto& [t, m] : cols[old]) r.add_key(base + t * r.strides_[axis], (*m) * v);
        }
        return r;
    }

    std::string shape_str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < shape_.size(); ++i) s += (i ? "," : "") + std::to_string(shape_[i]);
        return s + "] out=" + std::to_string(out_);
    }

private:
    std::vector<std::uint32_t> shape_;
    std::size_t out_ = 0;
    std::vector<std::uint64_t> strides_;
    std::uint64_t volume_ = 1;
    Map data_;

    void require_same_shape(const SparseTensor& o) const {
        if (shape_ != o.shape_ || out_ != o.out_) throw invalid_input("tensor shape mismatch: " + shape_str() + " vs " + o.shape_str());
    }
};

/// Operator composition a * b (b applied first); a's inputs must match b's outputs.
template <class S>
SparseTensor<S> compose(const SparseTensor<S>& a, const SparseTensor<S>& b) {
    const std::size_t ao = a.out_axes(), ai = a.in_axes(), bo = b.out_axes(), bi = b.in_axes();
    if (ai != bo) throw invalid_input("compose: arity mismatch");
    for (std::size_t i = 0; i < ai; ++i)
        if (a.shape()[ao + i] != b.shape()[i]) throw invalid_input("compose: axis dimension mismatch");
    std::vector<std::uint32_t> ns(a.shape().begin(), a.shape().begin() + static_cast<std::ptrdiff_t>(ao));
    ns.insert(ns.end(), b.shape().begin() + static_cast<std::ptrdiff_t>(bo), b.shape().end());
    SparseTensor<S> r(ns, ao);
    const std::uint64_t a_in_vol = a.in_volume(), b_in_vol = b.in_volume();
    // group b by its output part
    std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, const S*>>> rows;
    for (const auto& [k, v] : b.data()) rows[k / b_in_vol].push_back({k % b_in_vol, &v});
    for (const auto& [k, v] : a.data()) {
        auto it = rows.find(k % a_in_vol);
        if (it == rows.end()) continue;
        std::uint64_t hi = (k / a_in_vol) * b_in_vol;
        for (const auto& [lo, bv] : it->second) r.add_key(hi + lo, v * (*bv));
    }
    return r;
}

/// Kronecker product of operators: outputs (a, b), inputs (a, b).
template <class S>
SparseTensor<S> kron(const SparseTensor<S>& a, const SparseTensor<S>& b) {
    const std::size_t ao = a.out_axes(), bo = b.out_axes();
    std::vector<std::uint32_t> ns;
    std::vector<std::size_t> src;  // 0 = a, 1 = b, with axis
    auto push = [&](const SparseTensor<S>& t, std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to; ++i) ns.push_back(t.shape()[i]);
    };
    push(a, 0, ao);
    push(b, 0, bo);
    push(a, ao, a.rank());
    push(b, bo, b.rank());
    SparseTensor<S> r(ns, ao + bo);
    config::require_sparse(static_cast<std::uint64_t>(a.nnz()) * b.nnz(), "kron");
    r.reserve(a.nnz() * b.nnz());
    for (const auto& [ka, va] : a.data()) {
        Index ia = a.decode(ka);
        for (const auto& [kb, vb] : b.data()) {
            Index ib = b.decode(kb);
            Index idx;
            idx.reserve(ns.size());
            idx.insert(idx.end(), ia.begin(), ia.begin() + static_cast<std::ptrdiff_t>(ao));
            idx.insert(idx.end(), ib.begin(), ib.begin() + static_cast<std::ptrdiff_t>(bo));
            idx.insert(idx.end(), ia.begin() + static_cast<std::ptrdiff_t>(ao), ia.end());
            idx.insert(idx.end(), ib.begin() + static_cast<std::ptrdiff_t>(bo), ib.end());
            r.add(idx, va * vb);
        }
    }
    return r;
}

template <class S>
SparseTensor<S> identity_tensor(std::uint32_t d) {
    SparseTensor<S> r({d, d}, 1);
    for (std::uint32_t i = 0; i < d; ++i) r.set({i, i}, S(1));
    return r;
}

template <class S>
SparseTensor<S> zero_tensor_like(const SparseTensor<S>& t) {
    return SparseTensor<S>(t.shape(), t.out_axes());
}

/// Converts scalar type entrywise.
template <class T, class S, class F>
SparseTensor<T> convert(const SparseTensor<S>& t, F f) {
    SparseTensor<T> r(t.shape(), t.out_axes());
    r.reserve(t.nnz());
    for (const auto& [k, v] : t.data()) r.set_key(k, f(v));
    return r;
}

/// Whether the square operator has nonzero entries only on the diagonal.
template <class S>
bool is_diagonal(const SparseTensor<S>& t) {
    if (t.out_axes() != t.in_axes()) return false;
    const std::uint64_t iv = t.in_volume();
    for (const auto& kv : t.data())
        if (kv.first / iv != kv.first % iv) return false;
    return true;
}

template <class S>
S trace(const SparseTensor<S>& t) {
    S s(0);
    const std::uint64_t iv = t.in_volume();
    for (const auto& [k, v] : t.data())
        if (k / iv == k % iv) s += v;
    return s;
}

}  // namespace qsym
