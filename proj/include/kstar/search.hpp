// search.hpp
// Maximum shape-free subsets: exact branch and bound for small spaces plus a
// seeded randomized greedy with local moves. Star systems use an incremental
// center-pair structure; other systems fall back on the generic enumerator
// for the addability test. Every returned witness is re-verified shape-free
// by find_shape, independently of the incremental bookkeeping.

#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "kstar/bounds.hpp"
#include "kstar/common.hpp"
#include "kstar/detector.hpp"
#include "kstar/field_space.hpp"
#include "kstar/systems.hpp"

namespace kstar {

struct SearchBudget {
    std::uint64_t node_limit = 50'000'000;
    double time_limit_seconds = 60.0;
};

struct SearchResult {
    SystemKind kind = SystemKind::custom;
    int k = 0;  // star k when applicable
    std::uint32_t p = 0;
    int n = 0;
    PointSet best;
    std::uint64_t size = 0;
    bool optimal = false;
    std::uint64_t nodes = 0;
    bool witness_verified = false;
};

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    // rejection sampling keeps the draw unbiased and engine-portable
    std::uint64_t threshold = (0 - bound) % bound;
    while (true) {
        std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

inline void shuffle_points(std::vector<Point>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

// Live set with an addability test. For star(k): paircount[c] counts the
// unordered pairs {a,b} inside S with a + b = 2c; such pairs never contain c
// and are pairwise disjoint, so S stays shape-free iff every member's count
// stays below k, and x is addable iff paircount[x] < k and no member c with
// paircount[c] = k-1 gains the pair {x, 2c-x}.
class IncrementalSet {
public:
    IncrementalSet(const FieldSpace& space, const ShapeSystem& sys, EnumBudget budget)
        : space_(space),
          sys_(sys),
          budget_(budget),
          star_(sys.kind() == SystemKind::star),
          k_(sys.star_k()),
          S_(space.size()),
          probe_(space.size()) {
        if (star_) paircount_.assign(space.size(), 0);
    }

    const PointSet& set() const { return S_; }
    const std::vector<Point>& members() const { return members_; }
    std::uint64_t size() const { return S_.count(); }

    bool addable(Point x) {
        if (S_.contains(x)) return false;
        if (star_) {
            if (paircount_[x] >= static_cast<std::uint32_t>(k_)) return false;
            for (Point c : members_)
                if (paircount_[c] + 1 >= static_cast<std::uint32_t>(k_) &&
                    S_.contains(space_.sub(space_.double_of(c), x)))
                    return false;
            return true;
        }
        // Any shape in S + x must use x; pin x at each position in turn.
        S_.insert(x);
        if (probe_point_) probe_.erase(*probe_point_);
        probe_.insert(x);
        probe_point_ = x;
        bool ok = true;
        const int v = sys_.num_vars();
        std::vector<const PointSet*> cand(static_cast<std::size_t>(v), &S_);
        for (int pos = 0; pos < v && ok; ++pos) {
            cand[static_cast<std::size_t>(pos)] = &probe_;
            SolutionEnumerator en(space_, sys_, cand, true, budget_);
            ok = en.run([](std::span<const Point>) { return false; });
            cand[static_cast<std::size_t>(pos)] = &S_;
        }
        S_.erase(x);
        return ok;
    }

    void insert(Point x) {
        if (star_)
            for (Point a : members_) ++paircount_[space_.halve(space_.add(a, x))];
        members_.push_back(x);
        S_.insert(x);
    }

    void remove(Point x) {
        S_.erase(x);
        for (std::size_t i = 0; i < members_.size(); ++i)
            if (members_[i] == x) {
                members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(i));
                break;
            }
        if (star_)
            for (Point a : members_) --paircount_[space_.halve(space_.add(a, x))];
    }

    void clear() {
        while (!members_.empty()) remove(members_.back());
    }

private:
    const FieldSpace& space_;
    const ShapeSystem& sys_;
    EnumBudget budget_;
    bool star_;
    int k_;
    PointSet S_;
    PointSet probe_;  // singleton holding the probed point
    std::optional<Point> probe_point_;
    std::vector<Point> members_;
    std::vector<std::uint32_t> paircount_;
};

inline SearchResult finish_result(const FieldSpace& space, const ShapeSystem& sys,
                                  PointSet best, bool optimal, std::uint64_t nodes) {
    if (find_shape(space, best, sys))
        throw InvariantViolation("search: witness failed independent shape-freeness check");
    SearchResult res;
    res.kind = sys.kind();
    res.k = sys.star_k();
    res.p = space.p();
    res.n = space.n();
    res.size = best.count();
    res.best = std::move(best);
    res.optimal = optimal;
    res.nodes = nodes;
    res.witness_verified = true;
    return res;
}

}  // namespace detail

// Depth-first branch and bound over points in the given order (identity by
// default), include branch first, warm-started from the greedy set. The first
// maximum-size set reached in this order is the lexicographically smallest
// witness. Budget exhaustion degrades optimal to false; the best set so far
// (at worst the greedy one) is still returned and verified.
inline SearchResult exact_max_shape_free(const FieldSpace& space, const ShapeSystem& sys,
                                         const SearchBudget& budget = {},
                                         std::vector<Point> order = {}) {
    if (sys.p() != space.p())
        throw std::invalid_argument("search: system/space prime mismatch");
    const std::uint64_t N = space.size();
    if (N > 100'000)
        throw std::invalid_argument("exact_max_shape_free: space too large (p^n > 100000)");
    if (order.empty()) {
        order.resize(N);
        for (std::uint64_t i = 0; i < N; ++i) order[i] = static_cast<Point>(i);
    } else {
        if (order.size() != N)
            throw std::invalid_argument("order: permutation must cover the whole space");
        std::vector<char> seen(N, 0);
        for (Point x : order) {
            if (x >= N || seen[x]) throw std::invalid_argument("order: not a permutation");
            seen[x] = 1;
        }
    }
    EnumBudget enum_budget{budget.node_limit};
    detail::IncrementalSet inc(space, sys, enum_budget);

    // deterministic warm start in branch order
    for (Point x : order)
        if (inc.addable(x)) inc.insert(x);
    PointSet best = inc.set();
    const std::int64_t greedy_size = static_cast<std::int64_t>(best.count());
    inc.clear();

    // best_size one below greedy so the first equal-size set found in branch
    // order replaces the greedy witness and the lex tie-break stays exact
    std::int64_t best_size = greedy_size - 1;
    std::uint64_t nodes = 0;
    bool aborted = false;
    const auto start = std::chrono::steady_clock::now();

    auto dfs = [&](auto&& self, std::uint64_t d) -> void {
        if (aborted) return;
        if (++nodes > budget.node_limit) {
            aborted = true;
            return;
        }
        if ((nodes & 1023) == 0) {
            std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
            if (elapsed.count() > budget.time_limit_seconds) {
                aborted = true;
                return;
            }
        }
        if (static_cast<std::int64_t>(inc.size()) + static_cast<std::int64_t>(N - d) <= best_size)
            return;
        if (d == N) return;
        Point x = order[d];
        if (inc.addable(x)) {
            inc.insert(x);
            if (static_cast<std::int64_t>(inc.size()) > best_size) {
                best_size = static_cast<std::int64_t>(inc.size());
                best = inc.set();
            }
            self(self, d + 1);
            inc.remove(x);
        }
        if (aborted) return;
        self(self, d + 1);
    };
    dfs(dfs, 0);

    return detail::finish_result(space, sys, std::move(best), !aborted, nodes);
}

// Randomized greedy (seeded, reproducible) followed by remove-and-refill local
// moves kept only when they enlarge the set. optimal is always false.
inline SearchResult heuristic_max(const FieldSpace& space, const ShapeSystem& sys,
                                  std::uint64_t seed, std::uint64_t iterations) {
    if (sys.p() != space.p())
        throw std::invalid_argument("search: system/space prime mismatch");
    const std::uint64_t N = space.size();
    std::mt19937_64 rng(seed);
    std::vector<Point> perm(N);
    for (std::uint64_t i = 0; i < N; ++i) perm[i] = static_cast<Point>(i);
    detail::shuffle_points(perm, rng);

    detail::IncrementalSet inc(space, sys, EnumBudget{});
    for (Point x : perm)
        if (inc.addable(x)) inc.insert(x);

    std::uint64_t nodes = N;
    for (std::uint64_t it = 0; it < iterations && !inc.members().empty(); ++it) {
        const std::vector<Point> snapshot = inc.members();
        Point victim =
            snapshot[detail::uniform_below(rng, snapshot.size())];
        inc.remove(victim);
        detail::shuffle_points(perm, rng);
        for (Point x : perm)
            if (inc.addable(x)) inc.insert(x);
        nodes += N;
        if (inc.size() <= snapshot.size()) {
            inc.clear();
            for (Point x : snapshot) inc.insert(x);
        }
    }
    return detail::finish_result(space, sys, inc.set(), false, nodes);
}

struct BoundValidation {
    double bound = 0;
    double slack = 0;
};

// size <= k^2 Lambda^n; a violation is a hard failure, not a report line.
inline BoundValidation validate_against_bounds(const SearchResult& result) {
    if (!(result.kind == SystemKind::star || result.kind == SystemKind::relaxed_star))
        throw std::invalid_argument("validate_against_bounds: result must come from a star family");
    const double club = club_bound(result.p, result.n, result.k);
    const double slack = club - static_cast<double>(result.size);
    if (static_cast<double>(result.size) > club)
        throw InvariantViolation("witness of size " + std::to_string(result.size) +
                                 " exceeds the k^2 Lambda^n bound " + std::to_string(club));
    return {club, slack};
}

}  // namespace kstar
