// systems.hpp
// Linear shape systems over F_p: the k-star system, its relaxed variant, the
// W system, the mixed system, and arbitrary custom matrices. A system keeps
// its integer coefficient matrix alongside the mod-p reduction so the same
// named system can be rebound to another prime.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kstar/common.hpp"
#include "kstar/field_space.hpp"

namespace kstar {

using ShapeTuple = std::vector<Point>;

enum class SystemKind { star, relaxed_star, w_shape, mixed_star, custom };

enum class TupleClass { non_solution, degenerate, shape };

class ShapeSystem {
public:
    // (S_k): row i is x_{2i-1} + x_{2i} - 2 x_{2k+1} = 0, i = 1..k.
    static ShapeSystem star(int k, std::uint32_t p) {
        require_k(k);
        std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(k));
        const std::size_t v = 2 * static_cast<std::size_t>(k) + 1;
        for (int i = 0; i < k; ++i) {
            auto& row = rows[static_cast<std::size_t>(i)];
            row.assign(v, 0);
            row[2 * static_cast<std::size_t>(i)] = 1;
            row[2 * static_cast<std::size_t>(i) + 1] = 1;
            row[v - 1] = -2;
        }
        return ShapeSystem(std::move(rows), p, SystemKind::star, k,
                           "star(" + std::to_string(k) + ")");
    }

    // Relaxed variant: row i is x_{2i-1} - 2 x_{2i} + x_{2k+1} = 0.
    static ShapeSystem relaxed_star(int k, std::uint32_t p) {
        require_k(k);
        std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(k));
        const std::size_t v = 2 * static_cast<std::size_t>(k) + 1;
        for (int i = 0; i < k; ++i) {
            auto& row = rows[static_cast<std::size_t>(i)];
            row.assign(v, 0);
            row[2 * static_cast<std::size_t>(i)] = 1;
            row[2 * static_cast<std::size_t>(i) + 1] = -2;
            row[v - 1] = 1;
        }
        return ShapeSystem(std::move(rows), p, SystemKind::relaxed_star, k,
                           "relaxed_star(" + std::to_string(k) + ")");
    }

    // Parallelogram x1 - x2 - x3 + x4 = 0 glued to the 3-AP x1 - 2 x3 + x5 = 0.
    static ShapeSystem w_shape(std::uint32_t p) {
        std::vector<std::vector<std::int64_t>> rows = {{1, -1, -1, 1, 0}, {1, 0, -2, 0, 1}};
        return ShapeSystem(std::move(rows), p, SystemKind::w_shape, 0, "w_shape");
    }

    // One relaxed row and one star row sharing x5.
    static ShapeSystem mixed_star(std::uint32_t p) {
        std::vector<std::vector<std::int64_t>> rows = {{1, -2, 0, 0, 1}, {0, 0, 1, 1, -2}};
        return ShapeSystem(std::move(rows), p, SystemKind::mixed_star, 0, "mixed_star");
    }

    static ShapeSystem custom(std::vector<std::vector<std::int64_t>> rows, std::uint32_t p,
                              std::string name = "custom") {
        return ShapeSystem(std::move(rows), p, SystemKind::custom, 0, std::move(name));
    }

    // Same symbolic matrix reduced under a different prime.
    ShapeSystem rebind(std::uint32_t new_p) const {
        return ShapeSystem(integer_rows_, new_p, kind_, k_, name_);
    }

    std::uint32_t p() const { return p_; }
    int num_vars() const { return num_vars_; }
    int num_rows() const { return static_cast<int>(rows_.size()); }
    int rank() const { return rank_; }
    SystemKind kind() const { return kind_; }
    // k of a star/relaxed_star system; 0 otherwise.
    int star_k() const { return k_; }
    const std::string& name() const { return name_; }
    const std::vector<std::vector<std::uint32_t>>& rows() const { return rows_; }
    const std::vector<std::vector<std::int64_t>>& integer_rows() const { return integer_rows_; }

    bool is_star_family() const {
        return kind_ == SystemKind::star || kind_ == SystemKind::relaxed_star;
    }

    // Positions with nonzero coefficient in row r (0-based).
    std::vector<int> row_support(int r) const {
        std::vector<int> s;
        for (int j = 0; j < num_vars_; ++j)
            if (rows_[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] != 0) s.push_back(j);
        return s;
    }

    // Left side of row r on a full tuple.
    Point eval_row(const FieldSpace& space, int r, std::span<const Point> tuple) const {
        const auto& row = rows_[static_cast<std::size_t>(r)];
        Point acc = 0;
        for (int j = 0; j < num_vars_; ++j) {
            std::uint32_t c = row[static_cast<std::size_t>(j)];
            if (c != 0) acc = space.add(acc, space.scale(c, tuple[static_cast<std::size_t>(j)]));
        }
        return acc;
    }

private:
    ShapeSystem(std::vector<std::vector<std::int64_t>> rows, std::uint32_t p, SystemKind kind,
                int k, std::string name)
        : p_(p), kind_(kind), k_(k), name_(std::move(name)), integer_rows_(std::move(rows)) {
        require_odd_prime(p, "p");
        if (integer_rows_.empty()) throw std::invalid_argument("system: at least one row required");
        num_vars_ = static_cast<int>(integer_rows_.front().size());
        if (num_vars_ < 1) throw std::invalid_argument("system: rows must have at least one column");
        rows_.reserve(integer_rows_.size());
        for (const auto& irow : integer_rows_) {
            if (static_cast<int>(irow.size()) != num_vars_)
                throw std::invalid_argument("system: ragged coefficient matrix");
            std::vector<std::uint32_t> reduced(irow.size());
            bool nonzero = false;
            for (std::size_t j = 0; j < irow.size(); ++j) {
                std::int64_t r = irow[j] % static_cast<std::int64_t>(p_);
                if (r < 0) r += p_;
                reduced[j] = static_cast<std::uint32_t>(r);
                nonzero = nonzero || reduced[j] != 0;
            }
            // A row vanishing mod p makes every tuple a solution; reject loudly.
            if (!nonzero)
                throw std::invalid_argument("system: row " +
                                            std::to_string(rows_.size() + 1) +
                                            " reduces to zero mod " + std::to_string(p_));
            rows_.push_back(std::move(reduced));
        }
        rank_ = compute_rank();
    }

    static void require_k(int k) {
        if (k < 1) throw std::invalid_argument("k: star systems need k >= 1");
    }

    int compute_rank() const {
        // Gaussian elimination over F_p.
        std::vector<std::vector<std::uint64_t>> m;
        m.reserve(rows_.size());
        for (const auto& row : rows_) m.emplace_back(row.begin(), row.end());
        int rank = 0;
        for (int col = 0; col < num_vars_ && rank < static_cast<int>(m.size()); ++col) {
            int pivot = -1;
            for (int r = rank; r < static_cast<int>(m.size()); ++r)
                if (m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) continue;
            std::swap(m[static_cast<std::size_t>(rank)], m[static_cast<std::size_t>(pivot)]);
            std::uint64_t inv = mod_inverse(m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)]);
            for (auto& x : m[static_cast<std::size_t>(rank)]) x = x * inv % p_;
            for (int r = 0; r < static_cast<int>(m.size()); ++r) {
                if (r == rank) continue;
                std::uint64_t f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
                if (f == 0) continue;
                for (int j = 0; j < num_vars_; ++j) {
                    auto& x = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
                    x = (x + (p_ - f % p_) * m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)]) % p_;
                }
            }
            ++rank;
        }
        return rank;
    }

    std::uint64_t mod_inverse(std::uint64_t a) const {
        // Fermat: a^(p-2) mod p.
        std::uint64_t r = 1, base = a % p_, e = p_ - 2;
        while (e) {
            if (e & 1) r = r * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return r;
    }

    std::uint32_t p_;
    int num_vars_ = 0;
    SystemKind kind_;
    int k_;
    std::string name_;
    std::vector<std::vector<std::int64_t>> integer_rows_;
    std::vector<std::vector<std::uint32_t>> rows_;
    int rank_ = 0;
};

// Semishape = solution of every row; shape = semishape with all entries distinct.
inline TupleClass classify(const FieldSpace& space, const ShapeSystem& sys,
                           std::span<const Point> tuple) {
    if (sys.p() != space.p())
        throw std::invalid_argument("classify: system reduced mod " + std::to_string(sys.p()) +
                                    " but space has p = " + std::to_string(space.p()));
    if (static_cast<int>(tuple.size()) != sys.num_vars())
        throw std::invalid_argument("classify: tuple has " + std::to_string(tuple.size()) +
                                    " entries, system needs " + std::to_string(sys.num_vars()));
    for (Point x : tuple) space.check_point(x);
    for (int r = 0; r < sys.num_rows(); ++r)
        if (sys.eval_row(space, r, tuple) != 0) return TupleClass::non_solution;
    std::vector<Point> sorted(tuple.begin(), tuple.end());
    std::sort(sorted.begin(), sorted.end());
    bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    return distinct ? TupleClass::shape : TupleClass::degenerate;
}

// Solutions in (F_p^n)^v number p^{n(v - rank)}; rank-nullity sanity oracle.
inline std::uint64_t full_space_semishape_count(const FieldSpace& space, const ShapeSystem& sys) {
    if (sys.p() != space.p())
        throw std::invalid_argument("full_space_semishape_count: prime mismatch");
    std::uint64_t exponent =
        static_cast<std::uint64_t>(space.n()) *
        static_cast<std::uint64_t>(sys.num_vars() - sys.rank());
    return checked_pow_u64(space.p(), exponent);
}

inline const char* to_string(TupleClass c) {
    switch (c) {
        case TupleClass::non_solution: return "non-solution";
        case TupleClass::degenerate: return "degenerate";
        case TupleClass::shape: return "shape";
    }
    return "?";
}

inline const char* to_string(SystemKind k) {
    switch (k) {
        case SystemKind::star: return "star";
        case SystemKind::relaxed_star: return "relaxed_star";
        case SystemKind::w_shape: return "w_shape";
        case SystemKind::mixed_star: return "mixed_star";
        case SystemKind::custom: return "custom";
    }
    return "?";
}

}  // namespace kstar
