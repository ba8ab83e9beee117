// field_space.hpp
// Points of F_p^n stored as dense base-p indices (coordinate 0 least
// significant), plus flat-bitset subsets. Everything is immutable after
// construction and safe to share across threads.

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kstar/common.hpp"

namespace kstar {

using Point = std::uint32_t;

class FieldSpace {
public:
    // p odd prime >= 3 so that 2 is invertible; p^n must fit a 32-bit index.
    FieldSpace(std::uint32_t p, int n) : p_(p), n_(n) {
        require_odd_prime(p, "p");
        if (n < 1) throw std::invalid_argument("n: dimension must be >= 1");
        pow_.resize(static_cast<std::size_t>(n) + 1);
        pow_[0] = 1;
        for (int i = 0; i < n; ++i) {
            if (pow_[i] > kMaxSize / p)
                throw std::invalid_argument("p^n exceeds the 32-bit point index width");
            pow_[static_cast<std::size_t>(i) + 1] = pow_[i] * p;
        }
        size_ = pow_[static_cast<std::size_t>(n)];
        inv2_ = (p_ + 1) / 2;
        if (size_ <= kTableLimit) build_tables();
    }

    std::uint32_t p() const { return p_; }
    int n() const { return n_; }
    std::uint64_t size() const { return size_; }
    std::uint32_t inv2() const { return inv2_; }

    Point encode(std::span<const std::uint32_t> coords) const {
        if (static_cast<int>(coords.size()) != n_)
            throw std::invalid_argument("coords: expected " + std::to_string(n_) +
                                        " residues, got " + std::to_string(coords.size()));
        std::uint64_t idx = 0;
        for (int i = n_ - 1; i >= 0; --i) {
            if (coords[static_cast<std::size_t>(i)] >= p_)
                throw std::invalid_argument("coords: residue " +
                                            std::to_string(coords[static_cast<std::size_t>(i)]) +
                                            " out of range [0, " + std::to_string(p_) + ")");
            idx = idx * p_ + coords[static_cast<std::size_t>(i)];
        }
        return static_cast<Point>(idx);
    }

    std::vector<std::uint32_t> decode(Point x) const {
        check_point(x);
        std::vector<std::uint32_t> coords(static_cast<std::size_t>(n_));
        std::uint64_t v = x;
        for (int i = 0; i < n_; ++i) {
            coords[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(v % p_);
            v /= p_;
        }
        return coords;
    }

    std::uint32_t coord(Point x, int i) const {
        return static_cast<std::uint32_t>((x / pow_[static_cast<std::size_t>(i)]) % p_);
    }

    Point add(Point x, Point y) const {
        if (!add_tab_.empty()) return add_tab_[static_cast<std::size_t>(x) * size_ + y];
        return add_digits(x, y);
    }

    Point neg(Point x) const {
        if (!neg_tab_.empty()) return neg_tab_[x];
        Point r = 0;
        for (int i = 0; i < n_; ++i) {
            std::uint32_t d = coord(x, i);
            r += static_cast<Point>((d == 0 ? 0 : p_ - d) * pow_[static_cast<std::size_t>(i)]);
        }
        return r;
    }

    Point sub(Point x, Point y) const { return add(x, neg(y)); }

    // x + x; the AP relation a + b = 2c makes this a hot operation.
    Point double_of(Point x) const {
        if (!dbl_tab_.empty()) return dbl_tab_[x];
        return add_digits(x, x);
    }

    // c from a pair sum: 2c = s  =>  c = inv2 * s.
    Point halve(Point s) const { return scale(inv2_, s); }

    Point scale(std::uint32_t coeff, Point x) const {
        Point r = 0;
        for (int i = 0; i < n_; ++i) {
            std::uint64_t d = (static_cast<std::uint64_t>(coord(x, i)) * coeff) % p_;
            r += static_cast<Point>(d * pow_[static_cast<std::size_t>(i)]);
        }
        return r;
    }

    // Componentwise sum coeffs[i] * points[i] mod p: one equation's left side.
    Point affine_combine(std::span<const Point> points,
                         std::span<const std::uint32_t> coeffs) const {
        if (points.size() != coeffs.size())
            throw std::invalid_argument("affine_combine: " + std::to_string(points.size()) +
                                        " points vs " + std::to_string(coeffs.size()) +
                                        " coefficients");
        Point acc = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            check_point(points[i]);
            if (coeffs[i] >= p_)
                throw std::invalid_argument("affine_combine: coefficient not reduced mod p");
            acc = add(acc, scale(coeffs[i], points[i]));
        }
        return acc;
    }

    bool same_as(const FieldSpace& other) const { return p_ == other.p_ && n_ == other.n_; }

    void check_point(Point x) const {
        if (x >= size_)
            throw std::invalid_argument("point index " + std::to_string(x) +
                                        " out of range [0, " + std::to_string(size_) + ")");
    }

private:
    static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 32;
    // 1024^2 x 4 bytes for the add table; all desk-scale spaces fit.
    static constexpr std::uint64_t kTableLimit = 1024;

    Point add_digits(Point x, Point y) const {
        Point r = 0;
        std::uint64_t vx = x, vy = y;
        for (int i = 0; i < n_; ++i) {
            std::uint32_t d = static_cast<std::uint32_t>(vx % p_ + vy % p_);
            if (d >= p_) d -= p_;
            r += static_cast<Point>(static_cast<std::uint64_t>(d) * pow_[static_cast<std::size_t>(i)]);
            vx /= p_;
            vy /= p_;
        }
        return r;
    }

    void build_tables() {
        const std::size_t s = static_cast<std::size_t>(size_);
        neg_tab_.resize(s);
        dbl_tab_.resize(s);
        add_tab_.resize(s * s);
        for (std::size_t x = 0; x < s; ++x)
            for (std::size_t y = 0; y <= x; ++y) {
                Point v = add_digits(static_cast<Point>(x), static_cast<Point>(y));
                add_tab_[x * s + y] = v;
                add_tab_[y * s + x] = v;
            }
        for (std::size_t x = 0; x < s; ++x) {
            dbl_tab_[x] = add_tab_[x * s + x];
            Point r = 0;
            for (int i = 0; i < n_; ++i) {
                std::uint32_t d = coord(static_cast<Point>(x), i);
                r += static_cast<Point>((d == 0 ? 0 : p_ - d) * pow_[static_cast<std::size_t>(i)]);
            }
            neg_tab_[x] = r;
        }
    }

    std::uint32_t p_;
    int n_;
    std::uint64_t size_ = 0;
    std::uint32_t inv2_ = 0;
    std::vector<std::uint64_t> pow_;
    std::vector<Point> add_tab_, neg_tab_, dbl_tab_;
};

// Subset of F_p^n over [0, p^n) with O(1) membership and cached cardinality.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::uint64_t universe)
        : universe_(universe), words_((universe + 63) / 64, 0) {}
    explicit PointSet(const FieldSpace& space) : PointSet(space.size()) {}

    static PointSet full(const FieldSpace& space) {
        PointSet s(space);
        for (std::uint64_t i = 0; i < space.size(); ++i) s.insert(static_cast<Point>(i));
        return s;
    }

    std::uint64_t universe() const { return universe_; }
    std::uint64_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool contains(Point x) const {
        return x < universe_ && (words_[x >> 6] >> (x & 63)) & 1;
    }

    void insert(Point x) {
        check(x);
        std::uint64_t bit = std::uint64_t{1} << (x & 63);
        if (!(words_[x >> 6] & bit)) {
            words_[x >> 6] |= bit;
            ++count_;
        }
    }

    void erase(Point x) {
        check(x);
        std::uint64_t bit = std::uint64_t{1} << (x & 63);
        if (words_[x >> 6] & bit) {
            words_[x >> 6] &= ~bit;
            --count_;
        }
    }

    PointSet minus(const PointSet& other) const {
        require_same_universe(other);
        PointSet r(universe_);
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & ~other.words_[w];
        r.recount();
        return r;
    }

    bool disjoint_with(const PointSet& other) const {
        require_same_universe(other);
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & other.words_[w]) return false;
        return true;
    }

    std::vector<Point> to_vector() const {
        std::vector<Point> v;
        v.reserve(static_cast<std::size_t>(count_));
        for_each([&](Point x) { v.push_back(x); });
        return v;
    }

    // Ascending index order; iteration order is part of determinism contracts.
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                f(static_cast<Point>((w << 6) + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
    }

    bool operator==(const PointSet& other) const {
        return universe_ == other.universe_ && words_ == other.words_;
    }

private:
    void check(Point x) const {
        if (x >= universe_)
            throw std::invalid_argument("point index " + std::to_string(x) +
                                        " outside universe [0, " + std::to_string(universe_) + ")");
    }
    void require_same_universe(const PointSet& other) const {
        if (universe_ != other.universe_)
            throw std::invalid_argument("point sets live in different universes");
    }
    void recount() {
        count_ = 0;
        for (std::uint64_t w : words_) count_ += static_cast<std::uint64_t>(std::popcount(w));
    }

    std::uint64_t universe_ = 0;
    std::uint64_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace kstar
