// test_util.hpp
// Shared oracles for the test suite. The naive enumerator is the reference
// implementation everything else is judged against: plain nested loops over
// the set, one per tuple position, with a row evaluated as soon as its support
// is fully assigned. No pair structure, no elimination plan.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kstar/field_space.hpp"
#include "kstar/systems.hpp"

namespace test_util {

using kstar::FieldSpace;
using kstar::Point;
using kstar::PointSet;
using kstar::ShapeSystem;
using kstar::ShapeTuple;

struct NaiveResult {
    std::uint64_t semishapes = 0;
    std::uint64_t shapes = 0;
    std::optional<ShapeTuple> first_shape;
};

namespace detail {

struct NaiveState {
    const FieldSpace& space;
    const ShapeSystem& sys;
    const std::vector<Point>& members;
    const std::vector<int>& order;
    const std::vector<std::vector<int>>& check_at;
    std::vector<Point>& x;
    NaiveResult& res;
};

inline void naive_recurse(NaiveState& st, std::size_t depth) {
    if (depth == st.order.size()) {
        ++st.res.semishapes;
        std::vector<Point> sorted = st.x;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
            ++st.res.shapes;
            if (!st.res.first_shape) st.res.first_shape = st.x;
        }
        return;
    }
    const int pos = st.order[depth];
    for (Point a : st.members) {
        st.x[static_cast<std::size_t>(pos)] = a;
        bool ok = true;
        for (int r : st.check_at[depth])
            if (st.sys.eval_row(st.space, r, st.x) != 0) {
                ok = false;
                break;
            }
        if (ok) naive_recurse(st, depth + 1);
    }
}

}  // namespace detail

// Exhaustive reference count of semishapes and shapes with entries in A.
// order optionally permutes the position visit sequence (identity default);
// any order gives the same counts, a center-first order is just faster for
// star-like systems.
inline NaiveResult naive_enumerate(const FieldSpace& space, const PointSet& A,
                                   const ShapeSystem& sys, std::vector<int> order = {}) {
    const int v = sys.num_vars();
    if (order.empty())
        for (int j = 0; j < v; ++j) order.push_back(j);
    std::vector<int> depth_of(static_cast<std::size_t>(v));
    for (std::size_t d = 0; d < order.size(); ++d)
        depth_of[static_cast<std::size_t>(order[d])] = static_cast<int>(d);
    std::vector<std::vector<int>> check_at(order.size());
    for (int r = 0; r < sys.num_rows(); ++r) {
        int last = 0;
        for (int j : sys.row_support(r)) last = std::max(last, depth_of[static_cast<std::size_t>(j)]);
        check_at[static_cast<std::size_t>(last)].push_back(r);
    }
    NaiveResult res;
    std::vector<Point> members = A.to_vector();
    std::vector<Point> x(static_cast<std::size_t>(v), 0);
    detail::NaiveState st{space, sys, members, order, check_at, x, res};
    detail::naive_recurse(st, 0);
    return res;
}

// Last position first: for star-family systems that is the shared center and
// every row completes two steps after it.
inline std::vector<int> center_first_order(const ShapeSystem& sys) {
    std::vector<int> order{sys.num_vars() - 1};
    for (int j = 0; j + 1 < sys.num_vars(); ++j) order.push_back(j);
    return order;
}

inline PointSet random_subset(const FieldSpace& space, std::mt19937_64& rng, double density) {
    PointSet s(space.size());
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < density) s.insert(static_cast<Point>(i));
    }
    return s;
}

inline PointSet make_set(const FieldSpace& space, std::initializer_list<Point> pts) {
    PointSet s(space.size());
    for (Point x : pts) s.insert(x);
    return s;
}

// Direct grid minimization of G, the reference for the lambda optimizer.
inline double lambda_grid_oracle(int m, double alpha, int h, double step = 1e-6) {
    const int mh = m * h;
    double best = static_cast<double>(mh + 1);  // u = 1
    for (double u = step; u < 1.0; u += step) {
        double sum = 0.0;
        for (int i = mh; i >= 0; --i) sum = sum * u + 1.0;
        double g = std::pow(u, -alpha * h) * sum;
        if (g < best) best = g;
    }
    return best;
}

}  // namespace test_util
