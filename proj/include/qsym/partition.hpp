#pragma once

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qsym/config.hpp"

namespace qsym {

/// Set partition of k upper and l lower points. Points are numbered upper 0..k-1, then
/// lower k..k+l-1. Block ids are canonical (first-occurrence order from 0).
class Partition {
public:
    Partition() = default;

    /// blocks: lists of point positions in the global numbering above.
    Partition(int k, int l, const std::vector<std::vector<int>>& blocks) : k_(k), l_(l) {
        if (k < 0 || l < 0) throw invalid_input("negative point count");
        blk_.assign(static_cast<std::size_t>(k + l), -1);
        int id = 0;
        for (const auto& b : blocks) {
            if (b.empty()) throw invalid_input("empty block");
            for (int pt : b) {
                if (pt < 0 || pt >= k + l) throw invalid_input("point out of range in partition");
                if (blk_[static_cast<std::size_t>(pt)] != -1) throw invalid_input("point listed twice in partition");
                blk_[static_cast<std::size_t>(pt)] = id;
            }
            ++id;
        }
        for (int b : blk_)
            if (b == -1) throw invalid_input("partition misses a point");
        canonicalize();
    }

    static Partition from_labels(int k, int l, std::vector<int> labels) {
        if (labels.size() != static_cast<std::size_t>(k + l)) throw invalid_input("label vector has wrong length");
        Partition p;
        p.k_ = k;
        p.l_ = l;
        p.blk_ = std::move(labels);
        p.canonicalize();
        return p;
    }

    int k() const { return k_; }
    int l() const { return l_; }
    int points() const { return k_ + l_; }
    const std::vector<int>& labels() const { return blk_; }
    int block_of(int pt) const { return blk_[static_cast<std::size_t>(pt)]; }
    int upper(int i) const { return blk_[static_cast<std::size_t>(i)]; }
    int lower(int j) const { return blk_[static_cast<std::size_t>(k_ + j)]; }
    int block_count() const { return blk_.empty() ? 0 : *std::max_element(blk_.begin(), blk_.end()) + 1; }

    std::vector<std::vector<int>> blocks() const {
        std::vector<std::vector<int>> out(static_cast<std::size_t>(block_count()));
        for (int i = 0; i < points(); ++i) out[static_cast<std::size_t>(blk_[static_cast<std::size_t>(i)])].push_back(i);
        return out;
    }

    bool is_pairing() const {
        for (const auto& b : blocks())
            if (b.size() != 2) return false;
        return true;
    }
    bool all_blocks_even() const {
        for (const auto& b : blocks())
            if (b.size() % 2) return false;
        return true;
    }

    /// "P(k,l){1 2 | 3 1' | 2' 3'}"
    std::string str() const {
        std::string s = "P(" + std::to_string(k_) + "," + std::to_string(l_) + "){";
        bool first = true;
        for (const auto& b : blocks()) {
            if (!first) s += " | ";
            first = false;
            bool sp = false;
            for (int pt : b) {
                if (sp) s += " ";
                sp = true;
                s += pt < k_ ? std::to_string(pt + 1) : std::to_string(pt - k_ + 1) + "'";
            }
        }
        return s + "}";
    }

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.k_ == b.k_ && a.l_ == b.l_ && a.blk_ == b.blk_;
    }
    friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
    friend bool operator<(const Partition& a, const Partition& b) {
        if (a.k_ != b.k_) return a.k_ < b.k_;
        if (a.l_ != b.l_) return a.l_ < b.l_;
        return a.blk_ < b.blk_;
    }

private:
    int k_ = 0, l_ = 0;
    std::vector<int> blk_;

    void canonicalize() {
        std::vector<int> remap;
        int next = 0;
        for (auto& b : blk_) {
            if (b < 0) throw invalid_input("negative block label");
            if (static_cast<std::size_t>(b) >= remap.size()) remap.resize(static_cast<std::size_t>(b) + 1, -1);
            auto& r = remap[static_cast<std::size_t>(b)];
            if (r == -1) r = next++;
            b = r;
        }
    }
};

/// Upper points 1..k, lower points 1'..l' (1-based as in the text format).
inline Partition make_partition(int k, int l, const std::vector<std::vector<std::pair<int, bool>>>& blocks) {
    std::vector<std::vector<int>> raw;
    for (const auto& b : blocks) {
        std::vector<int> r;
        for (auto [i, lower] : b) {
            int lim = lower ? l : k;
            if (i < 1 || i > lim) throw invalid_input("point label out of range");
            r.push_back(lower ? k + i - 1 : i - 1);
        }
        raw.push_back(r);
    }
    return Partition(k, l, raw);
}

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace detail

struct Composite {
    Partition p;
    int loops = 0;
};

/// q after p: p's lower row is glued to q's upper row.
inline Composite compose(const Partition& q, const Partition& p) {
    if (q.k() != p.l())
        throw invalid_input("compose: " + q.str() + " needs " + std::to_string(q.k()) + " inputs, " + p.str() + " gives " +
                            std::to_string(p.l()));
    const int k = p.k(), l = p.l(), m = q.l();
    // nodes: top 0..k-1, middle k..k+l-1, bottom k+l..k+l+m-1
    detail::UnionFind uf(k + l + m);
    auto node_p = [&](int pt) { return pt; };                                   // p's upper then lower = top, middle
    auto node_q = [&](int pt) { return pt < l ? k + pt : k + l + (pt - l); };   // q's upper = middle, lower = bottom
    std::vector<int> first(static_cast<std::size_t>(p.block_count()), -1);
    for (int pt = 0; pt < k + l; ++pt) {
        auto& f = first[static_cast<std::size_t>(p.block_of(pt))];
        if (f == -1)
            f = node_p(pt);
        else
            uf.unite(f, node_p(pt));
    }
    std::vector<int> firstq(static_cast<std::size_t>(q.block_count()), -1);
    for (int pt = 0; pt < l + m; ++pt) {
        auto& f = firstq[static_cast<std::size_t>(q.block_of(pt))];
        if (f == -1)
            f = node_q(pt);
        else
            uf.unite(f, node_q(pt));
    }
    std::vector<char> outer(static_cast<std::size_t>(k + l + m), 0);
    for (int i = 0; i < k; ++i) outer[static_cast<std::size_t>(uf.find(i))] = 1;
    for (int i = 0; i < m; ++i) outer[static_cast<std::size_t>(uf.find(k + l + i))] = 1;
    Composite c;
    std::vector<char> counted(static_cast<std::size_t>(k + l + m), 0);
    for (int i = 0; i < l; ++i) {
        int r = uf.find(k + i);
        if (!outer[static_cast<std::size_t>(r)] && !counted[static_cast<std::size_t>(r)]) {
            counted[static_cast<std::size_t>(r)] = 1;
            ++c.loops;
        }
    }
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(k + m));
    for (int i = 0; i < k; ++i) labels.push_back(uf.find(i));
    for (int i = 0; i < m; ++i) labels.push_back(uf.find(k + l + i));
    c.p = Partition::from_labels(k, m, labels);
    return c;
}

/// Horizontal juxtaposition, p on the left.
inline Partition tensor(const Partition& p, const Partition& q) {
    const int off = p.block_count();
    std::vector<int> lab;
    for (int i = 0; i < p.k(); ++i) lab.push_back(p.upper(i));
    for (int i = 0; i < q.k(); ++i) lab.push_back(off + q.upper(i));
    for (int j = 0; j < p.l(); ++j) lab.push_back(p.lower(j));
    for (int j = 0; j < q.l(); ++j) lab.push_back(off + q.lower(j));
    return Partition::from_labels(p.k() + q.k(), p.l() + q.l(), lab);
}

/// Vertical flip.
inline Partition adjoint(const Partition& p) {
    std::vector<int> lab;
    for (int j = 0; j < p.l(); ++j) lab.push_back(p.lower(j));
    for (int i = 0; i < p.k(); ++i) lab.push_back(p.upper(i));
    return Partition::from_labels(p.l(), p.k(), lab);
}

enum class Side { left, right };
enum class Direction { down, up };  // down: an upper point moves to the lower row

/// Moves the extreme point on `side` to the other row, keeping the cyclic order of points.
inline Partition rotate(const Partition& p, Side side, Direction dir) {
    std::vector<int> up, lo;
    for (int i = 0; i < p.k(); ++i) up.push_back(p.upper(i));
    for (int j = 0; j < p.l(); ++j) lo.push_back(p.lower(j));
    auto& src = dir == Direction::down ? up : lo;
    auto& dst = dir == Direction::down ? lo : up;
    if (src.empty()) throw invalid_input("rotate: the source row of " + p.str() + " is empty");
    if (side == Side::left) {
        int b = src.front();
        src.erase(src.begin());
        dst.insert(dst.begin(), b);
    } else {
        int b = src.back();
        src.pop_back();
        dst.push_back(b);
    }
    std::vector<int> lab = up;
    lab.insert(lab.end(), lo.begin(), lo.end());
    return Partition::from_labels(static_cast<int>(up.size()), static_cast<int>(lo.size()), lab);
}

/// Relabels points: new upper i is old upper up[i], new lower j is old lower lo[j].
inline Partition permute_points(const Partition& p, const std::vector<int>& up, const std::vector<int>& lo) {
    std::vector<int> lab;
    for (int i : up) lab.push_back(p.upper(i));
    for (int j : lo) lab.push_back(p.lower(j));
    return Partition::from_labels(p.k(), p.l(), lab);
}

// Builtin diagrams.
inline Partition identity_partition(int k) {
    std::vector<int> lab;
    for (int i = 0; i < k; ++i) lab.push_back(i);
    for (int i = 0; i < k; ++i) lab.push_back(i);
    return Partition::from_labels(k, k, lab);
}
inline Partition cap_partition() { return Partition::from_labels(2, 0, {0, 0}); }
inline Partition cup_partition() { return Partition::from_labels(0, 2, {0, 0}); }
inline Partition cross_partition() { return Partition::from_labels(2, 2, {0, 1, 1, 0}); }
inline Partition singleton_partition() { return Partition::from_labels(0, 1, {0}); }
inline Partition block_partition(int k, int l) {
    if (k + l < 1) throw invalid_input("block needs at least one point");
    return Partition::from_labels(k, l, std::vector<int>(static_cast<std::size_t>(k + l), 0));
}
inline Partition merge_partition() { return block_partition(2, 1); }
inline Partition fork_partition() { return block_partition(1, 2); }

/// p_k in P(0, 2k): blocks {1, 2k} and {2i, 2i+1}.
inline Partition pk_partition(int k) {
    if (k < 1) throw invalid_input("pk needs k >= 1");
    std::vector<int> lab(static_cast<std::size_t>(2 * k));
    lab[0] = lab[static_cast<std::size_t>(2 * k - 1)] = 0;
    for (int i = 1; i < k; ++i) lab[static_cast<std::size_t>(2 * i - 1)] = lab[static_cast<std::size_t>(2 * i)] = i;
    return Partition::from_labels(0, 2 * k, lab);
}

/// Parses "P(k,l){1 2 | 3 1' | 2' 3'}"; `pos` advances past the literal.
inline Partition parse_partition_at(const std::string& s, std::size_t& pos) {
    auto fail = [&](const std::string& msg) {
        throw invalid_input("partition literal at offset " + std::to_string(pos) + ": " + msg);
    };
    auto skip = [&] {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    auto expect = [&](char c) {
        skip();
        if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    };
    auto number = [&]() {
        skip();
        std::size_t st = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (st == pos) fail("expected a number");
        if (pos - st > 6) fail("number too large");
        return std::stoi(s.substr(st, pos - st));
    };
    expect('P');
    expect('(');
    int k = number();
    expect(',');
    int l = number();
    expect(')');
    expect('{');
    std::vector<std::vector<std::pair<int, bool>>> blocks(1);
    for (;;) {
        skip();
        if (pos >= s.size()) fail("unterminated partition literal");
        char c = s[pos];
        if (c == '}') {
            ++pos;
            break;
        }
        if (c == '|') {
            ++pos;
            if (blocks.back().empty()) fail("empty block");
            blocks.emplace_back();
            continue;
        }
        int v = number();
        bool lower = false;
        if (pos < s.size() && s[pos] == '\'') {
            lower = true;
            ++pos;
        }
        blocks.back().push_back({v, lower});
    }
    if (blocks.size() == 1 && blocks.back().empty()) blocks.clear();
    if (!blocks.empty() && blocks.back().empty()) fail("empty block");
    return make_partition(k, l, blocks);
}

inline Partition parse_partition(const std::string& s) {
    std::size_t pos = 0;
    Partition p = parse_partition_at(s, pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw invalid_input("trailing text after partition literal");
    return p;
}

}  // namespace qsym
