// detector.hpp
// Enumeration and proof machinery over concrete sets: shape finding, semishape
// counting, disjoint packing, the M-lifting, extendability relations, the
// multicolored condition, and a replay of the induction step.
//
// Star systems get a dedicated path built on the center-pair structure: for a
// center c the unordered pairs {a,b} with a+b = 2c, a != b, are pairwise
// disjoint and never contain c, so a shape with center c exists iff at least k
// such pairs lie in A. Everything else goes through a generic backtracking
// enumerator driven by a static elimination plan.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kstar/bounds.hpp"
#include "kstar/common.hpp"
#include "kstar/field_space.hpp"
#include "kstar/systems.hpp"

namespace kstar {

struct EnumBudget {
    std::uint64_t node_limit = 100'000'000;
};

namespace detail {

inline std::uint32_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

inline std::uint32_t mod_inv(std::uint32_t a, std::uint32_t p) { return mod_pow(a, p - 2, p); }

// One variable assignment in the static elimination plan. A step either loops
// over the candidate set of its position or solves a row that has exactly one
// unassigned support position left.
struct PlanStep {
    int pos;
    int solve_row = -1;
    std::uint32_t neg_inv = 0;       // -(coeff at pos)^{-1} mod p when solving
    std::vector<int> check_rows;     // rows whose support completes here
};

inline std::vector<PlanStep> build_plan(const ShapeSystem& sys) {
    const int v = sys.num_vars();
    const int R = sys.num_rows();
    std::vector<std::vector<int>> support(static_cast<std::size_t>(R));
    std::vector<int> open(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
        support[static_cast<std::size_t>(r)] = sys.row_support(r);
        open[static_cast<std::size_t>(r)] =
            static_cast<int>(support[static_cast<std::size_t>(r)].size());
    }
    std::vector<char> assigned(static_cast<std::size_t>(v), 0);
    std::vector<PlanStep> plan;
    plan.reserve(static_cast<std::size_t>(v));
    for (int step = 0; step < v; ++step) {
        PlanStep st;
        int solve_row = -1;
        for (int r = 0; r < R; ++r)
            if (open[static_cast<std::size_t>(r)] == 1) {
                solve_row = r;
                break;
            }
        if (solve_row >= 0) {
            st.solve_row = solve_row;
            for (int j : support[static_cast<std::size_t>(solve_row)])
                if (!assigned[static_cast<std::size_t>(j)]) st.pos = j;
            std::uint32_t c = sys.rows()[static_cast<std::size_t>(solve_row)]
                                        [static_cast<std::size_t>(st.pos)];
            st.neg_inv = (sys.p() - mod_inv(c, sys.p())) % sys.p();
        } else {
            // Loop over the position touching the most open rows.
            int best = -1, best_count = -1;
            for (int j = 0; j < v; ++j) {
                if (assigned[static_cast<std::size_t>(j)]) continue;
                int count = 0;
                for (int r = 0; r < R; ++r)
                    if (open[static_cast<std::size_t>(r)] > 0)
                        for (int l : support[static_cast<std::size_t>(r)])
                            if (l == j) ++count;
                if (count > best_count) {
                    best_count = count;
                    best = j;
                }
            }
            st.pos = best;
        }
        assigned[static_cast<std::size_t>(st.pos)] = 1;
        for (int r = 0; r < R; ++r) {
            bool touches = false;
            for (int l : support[static_cast<std::size_t>(r)])
                if (l == st.pos) touches = true;
            if (!touches) continue;
            if (--open[static_cast<std::size_t>(r)] == 0 && r != st.solve_row)
                st.check_rows.push_back(r);
        }
        plan.push_back(std::move(st));
    }
    return plan;
}

// Backtracking enumerator over per-position candidate sets. Solutions are
// visited in the deterministic order induced by the plan with ascending
// candidate iteration; the visitor returns false to stop early.
class SolutionEnumerator {
public:
    SolutionEnumerator(const FieldSpace& space, const ShapeSystem& sys,
                       std::vector<const PointSet*> candidates, bool require_distinct,
                       EnumBudget budget)
        : space_(space),
          sys_(sys),
          candidates_(std::move(candidates)),
          require_distinct_(require_distinct),
          budget_(budget),
          plan_(build_plan(sys)),
          x_(static_cast<std::size_t>(sys.num_vars()), 0),
          loop_values_(static_cast<std::size_t>(sys.num_vars())) {
        if (sys_.p() != space_.p())
            throw std::invalid_argument("enumerate: system/space prime mismatch");
        if (static_cast<int>(candidates_.size()) != sys_.num_vars())
            throw std::invalid_argument("enumerate: one candidate set per position required");
        for (int r = 0; r < sys_.num_rows(); ++r) supports_.push_back(sys_.row_support(r));
        for (const auto& st : plan_)
            if (st.solve_row < 0)
                loop_values_[static_cast<std::size_t>(st.pos)] =
                    candidates_[static_cast<std::size_t>(st.pos)]->to_vector();
    }

    template <class V>
    bool run(V&& visit) {
        nodes_ = 0;
        return descend(0, std::forward<V>(visit));
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    template <class V>
    bool descend(std::size_t depth, V&& visit) {
        if (depth == plan_.size()) return visit(std::span<const Point>(x_));
        const PlanStep& st = plan_[depth];
        if (st.solve_row >= 0) {
            const auto& row = sys_.rows()[static_cast<std::size_t>(st.solve_row)];
            Point partial = 0;
            for (int l : supports_[static_cast<std::size_t>(st.solve_row)])
                if (l != st.pos)
                    partial = space_.add(
                        partial, space_.scale(row[static_cast<std::size_t>(l)],
                                              x_[static_cast<std::size_t>(l)]));
            Point value = space_.scale(st.neg_inv, partial);
            return try_value(depth, value, visit);
        }
        for (Point value : loop_values_[static_cast<std::size_t>(st.pos)])
            if (!try_value(depth, value, visit)) return false;
        return true;
    }

    template <class V>
    bool try_value(std::size_t depth, Point value, V&& visit) {
        if (++nodes_ > budget_.node_limit)
            throw ResourceError("enumeration budget exceeded (" +
                                std::to_string(budget_.node_limit) + " nodes)");
        const PlanStep& st = plan_[depth];
        if (!candidates_[static_cast<std::size_t>(st.pos)]->contains(value)) return true;
        if (require_distinct_)
            for (std::size_t d = 0; d < depth; ++d)
                if (x_[static_cast<std::size_t>(plan_[d].pos)] == value) return true;
        x_[static_cast<std::size_t>(st.pos)] = value;
        for (int r : st.check_rows)
            if (sys_.eval_row(space_, r, x_) != 0) return true;
        return descend(depth + 1, visit);
    }

    const FieldSpace& space_;
    const ShapeSystem& sys_;
    std::vector<const PointSet*> candidates_;
    bool require_distinct_;
    EnumBudget budget_;
    std::vector<PlanStep> plan_;
    std::vector<Point> x_;
    std::vector<std::vector<Point>> loop_values_;
    std::vector<std::vector<int>> supports_;
    std::uint64_t nodes_ = 0;
};

inline void check_inputs(const FieldSpace& space, const PointSet& A, const ShapeSystem& sys,
                         const char* op) {
    if (sys.p() != space.p())
        throw std::invalid_argument(std::string(op) + ": system/space prime mismatch");
    if (A.universe() != space.size())
        throw std::invalid_argument(std::string(op) + ": set universe does not match space");
}

// Ordered pair count at center c: star uses a + b = 2c, relaxed uses a = 2b - c.
inline std::uint64_t center_pair_count(const FieldSpace& space, const PointSet& A, Point c,
                                       SystemKind kind) {
    std::uint64_t r = 0;
    const Point twoc = space.double_of(c);
    A.for_each([&](Point a) {
        Point partner = kind == SystemKind::star ? space.sub(twoc, a)
                                                 : space.sub(space.double_of(a), c);
        if (A.contains(partner)) ++r;
    });
    return r;
}

}  // namespace detail

struct DisjointFamily {
    std::vector<ShapeTuple> shapes;
    PointSet covered;
    bool maximal = false;
};

struct MulticoloredFamily {
    int num_vars = 0;
    std::vector<ShapeTuple> rows;

    std::size_t s() const { return rows.size(); }

    // X_j as a sorted duplicate-free list.
    std::vector<std::vector<Point>> columns() const {
        std::vector<std::vector<Point>> cols(static_cast<std::size_t>(num_vars));
        for (int j = 0; j < num_vars; ++j) {
            auto& col = cols[static_cast<std::size_t>(j)];
            for (const auto& row : rows) col.push_back(row[static_cast<std::size_t>(j)]);
            std::sort(col.begin(), col.end());
            col.erase(std::unique(col.begin(), col.end()), col.end());
        }
        return cols;
    }
};

struct ExtendabilityRelation {
    int i = 0, j = 0;  // 1-based positions
    std::vector<std::pair<Point, Point>> pairs;  // sorted, duplicate-free
};

inline std::optional<ShapeTuple> find_shape(const FieldSpace& space, const PointSet& A,
                                            const ShapeSystem& sys, const EnumBudget& budget = {}) {
    detail::check_inputs(space, A, sys, "find_shape");
    if (A.empty()) return std::nullopt;  // empty set is shape-free by convention
    if (sys.kind() == SystemKind::star) {
        const int k = sys.star_k();
        std::optional<ShapeTuple> found;
        A.for_each([&](Point c) {
            if (found) return;
            const Point twoc = space.double_of(c);
            std::vector<std::pair<Point, Point>> pairs;
            A.for_each([&](Point a) {
                if (static_cast<int>(pairs.size()) >= k) return;
                Point b = space.sub(twoc, a);
                if (b > a && A.contains(b)) pairs.emplace_back(a, b);
            });
            if (static_cast<int>(pairs.size()) < k) return;
            ShapeTuple tuple;
            tuple.reserve(static_cast<std::size_t>(2 * k + 1));
            for (int i = 0; i < k; ++i) {
                tuple.push_back(pairs[static_cast<std::size_t>(i)].first);
                tuple.push_back(pairs[static_cast<std::size_t>(i)].second);
            }
            tuple.push_back(c);
            if (classify(space, sys, tuple) != TupleClass::shape)
                throw InvariantViolation("find_shape: assembled tuple failed classification");
            found = std::move(tuple);
        });
        return found;
    }
    std::vector<const PointSet*> cand(static_cast<std::size_t>(sys.num_vars()), &A);
    detail::SolutionEnumerator en(space, sys, cand, true, budget);
    std::optional<ShapeTuple> found;
    en.run([&](std::span<const Point> x) {
        found = ShapeTuple(x.begin(), x.end());
        return false;
    });
    return found;
}

inline std::uint64_t count_semishapes(const FieldSpace& space, const PointSet& A,
                                      const ShapeSystem& sys, const EnumBudget& budget = {}) {
    detail::check_inputs(space, A, sys, "count_semishapes");
    if (A.empty()) return 0;
    if (sys.is_star_family()) {
        // Rows choose their ordered pair independently given the center, so
        // the count factors as sum over centers of r(c)^k.
        const int k = sys.star_k();
        std::uint64_t total = 0;
        A.for_each([&](Point c) {
            std::uint64_t r = detail::center_pair_count(space, A, c, sys.kind());
            std::uint64_t term = 1;
            for (int i = 0; i < k; ++i)
                if (__builtin_mul_overflow(term, r, &term))
                    throw std::overflow_error("count_semishapes: count exceeds 64 bits");
            if (__builtin_add_overflow(total, term, &total))
                throw std::overflow_error("count_semishapes: count exceeds 64 bits");
        });
        return total;
    }
    std::vector<const PointSet*> cand(static_cast<std::size_t>(sys.num_vars()), &A);
    detail::SolutionEnumerator en(space, sys, cand, false, budget);
    std::uint64_t total = 0;
    en.run([&](std::span<const Point>) {
        ++total;
        return true;
    });
    return total;
}

inline DisjointFamily greedy_disjoint_pack(const FieldSpace& space, const PointSet& A,
                                           const ShapeSystem& sys,
                                           std::optional<std::uint64_t> target = std::nullopt,
                                           const EnumBudget& budget = {}) {
    detail::check_inputs(space, A, sys, "greedy_disjoint_pack");
    DisjointFamily fam{{}, PointSet(space.size()), false};
    PointSet rest = A;
    while (true) {
        if (target && fam.shapes.size() == *target) break;  // maximal stays false: unknown
        auto shape = find_shape(space, rest, sys, budget);
        if (!shape) {
            fam.maximal = true;
            break;
        }
        for (Point x : *shape) {
            fam.covered.insert(x);
            rest.erase(x);
        }
        fam.shapes.push_back(std::move(*shape));
    }
    return fam;
}

// Visits every semishape of sys with j-th term drawn from column X_j of M.
// Returns false when the visitor stopped early.
template <class V>
bool for_each_product_semishape(const FieldSpace& space, const ShapeSystem& sys,
                                const MulticoloredFamily& M, const EnumBudget& budget, V&& visit) {
    if (sys.num_vars() != M.num_vars)
        throw std::invalid_argument("product enumeration: system/family arity mismatch");
    if (M.rows.empty()) return true;
    auto cols = M.columns();
    std::vector<PointSet> col_sets;
    col_sets.reserve(cols.size());
    for (const auto& col : cols) {
        PointSet s(space.size());
        for (Point x : col) s.insert(x);
        col_sets.push_back(std::move(s));
    }
    std::vector<const PointSet*> cand;
    cand.reserve(col_sets.size());
    for (const auto& s : col_sets) cand.push_back(&s);
    detail::SolutionEnumerator en(space, sys, cand, false, budget);
    return en.run(std::forward<V>(visit));
}

inline ExtendabilityRelation extendable_pairs(const FieldSpace& space, const ShapeSystem& sys,
                                              const MulticoloredFamily& M, int i, int j,
                                              const EnumBudget& budget = {}) {
    if (i < 1 || j < 1 || i > M.num_vars || j > M.num_vars)
        throw std::invalid_argument("extendable_pairs: positions must lie in [1, v]");
    if (i >= j) throw std::invalid_argument("extendable_pairs: positions must satisfy i < j");
    std::set<std::pair<Point, Point>> pairs;
    for_each_product_semishape(space, sys, M, budget, [&](std::span<const Point> x) {
        pairs.emplace(x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(j - 1)]);
        return true;
    });
    return {i, j, {pairs.begin(), pairs.end()}};
}

// Lemma: distinct extendable pairs at (1, v) have distinct second terms.
inline bool lemma_injectivity_check(const ExtendabilityRelation& B) {
    std::set<Point> seen;
    for (const auto& [x, y] : B.pairs)
        if (!seen.insert(y).second) return false;
    return true;
}

// Rows (a_1,...,a_{2k-1}) with common middle term last lift to
// (a_1,a_2,a_1,a_2,a_3,...,a_{2k-1}), each a star(k)-semishape.
inline MulticoloredFamily lift_to_M(const FieldSpace& space, const DisjointFamily& family,
                                    int k) {
    if (k < 2) throw std::invalid_argument("k: lifting needs k >= 2");
    const ShapeSystem small = ShapeSystem::star(k - 1, space.p());
    const ShapeSystem big = ShapeSystem::star(k, space.p());
    MulticoloredFamily M;
    M.num_vars = 2 * k + 1;
    for (std::size_t idx = 0; idx < family.shapes.size(); ++idx) {
        const auto& a = family.shapes[idx];
        if (static_cast<int>(a.size()) != 2 * k - 1 ||
            classify(space, small, a) != TupleClass::shape)
            throw std::invalid_argument("lift_to_M: family member " + std::to_string(idx + 1) +
                                        " is not a star(" + std::to_string(k - 1) + ")-shape");
        ShapeTuple row;
        row.reserve(static_cast<std::size_t>(2 * k + 1));
        row.push_back(a[0]);
        row.push_back(a[1]);
        row.push_back(a[0]);
        row.push_back(a[1]);
        for (std::size_t l = 2; l < a.size(); ++l) row.push_back(a[l]);
        if (classify(space, big, row) == TupleClass::non_solution)
            throw InvariantViolation("lift_to_M: lifted row is not a semishape");
        M.rows.push_back(std::move(row));
    }
    return M;
}

// True iff every diagonal row solves the system and no off-diagonal index
// combination does. Enumeration walks index tuples (i_1,...,i_v) with the same
// elimination plan as the point enumerator; a solved position maps its forced
// value back to the row indices carrying it in that column.
inline bool multicolor_check(const FieldSpace& space, const ShapeSystem& sys,
                             const MulticoloredFamily& M, const EnumBudget& budget = {}) {
    if (sys.p() != space.p())
        throw std::invalid_argument("multicolor_check: system/space prime mismatch");
    if (sys.num_vars() != M.num_vars && !M.rows.empty())
        throw std::invalid_argument("multicolor_check: system/family arity mismatch");
    const int v = sys.num_vars();
    const int s = static_cast<int>(M.rows.size());
    if (s == 0) return true;
    for (const auto& row : M.rows)
        if (classify(space, sys, row) == TupleClass::non_solution) return false;
    // value -> row indices, per column
    std::vector<std::map<Point, std::vector<int>>> by_value(static_cast<std::size_t>(v));
    for (int r = 0; r < s; ++r)
        for (int j = 0; j < v; ++j)
            by_value[static_cast<std::size_t>(j)][M.rows[static_cast<std::size_t>(r)]
                                                        [static_cast<std::size_t>(j)]]
                .push_back(r);
    const auto plan = detail::build_plan(sys);
    std::vector<std::vector<int>> supports;
    for (int r = 0; r < sys.num_rows(); ++r) supports.push_back(sys.row_support(r));
    std::vector<Point> x(static_cast<std::size_t>(v), 0);
    std::vector<int> idx(static_cast<std::size_t>(v), 0);
    std::uint64_t nodes = 0;
    bool off_diagonal_hit = false;

    auto descend = [&](auto&& self, std::size_t depth) -> void {
        if (off_diagonal_hit) return;
        if (depth == plan.size()) {
            for (int j = 1; j < v; ++j)
                if (idx[static_cast<std::size_t>(j)] != idx[0]) {
                    off_diagonal_hit = true;
                    return;
                }
            return;
        }
        const detail::PlanStep& st = plan[depth];
        auto try_index = [&](int r, Point value) {
            if (off_diagonal_hit) return;
            if (++nodes > budget.node_limit)
                throw ResourceError("multicolor_check budget exceeded (" +
                                    std::to_string(budget.node_limit) + " nodes)");
            x[static_cast<std::size_t>(st.pos)] = value;
            idx[static_cast<std::size_t>(st.pos)] = r;
            for (int row : st.check_rows)
                if (sys.eval_row(space, row, x) != 0) return;
            self(self, depth + 1);
        };
        if (st.solve_row >= 0) {
            const auto& row = sys.rows()[static_cast<std::size_t>(st.solve_row)];
            Point partial = 0;
            for (int l : supports[static_cast<std::size_t>(st.solve_row)])
                if (l != st.pos)
                    partial = space.add(partial, space.scale(row[static_cast<std::size_t>(l)],
                                                             x[static_cast<std::size_t>(l)]));
            Point value = space.scale(st.neg_inv, partial);
            auto it = by_value[static_cast<std::size_t>(st.pos)].find(value);
            if (it == by_value[static_cast<std::size_t>(st.pos)].end()) return;
            for (int r : it->second) try_index(r, value);
        } else {
            for (int r = 0; r < s; ++r)
                try_index(r, M.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(st.pos)]);
        }
    };
    descend(descend, 0);
    return !off_diagonal_hit;
}

struct VerifiedInequality {
    std::string label;
    double lhs = 0;
    std::string rel;
    double rhs = 0;
    bool holds = false;
};

struct CaseTrace {
    int case_taken = 0;
    int k = 0;
    std::uint64_t set_size = 0;
    std::uint64_t t = 0;
    DisjointFamily family;
    MulticoloredFamily M;
    PointSet residual;
    ExtendabilityRelation B;
    std::vector<std::pair<std::string, bool>> checks;
    std::vector<VerifiedInequality> inequalities;

    bool valid() const {
        for (const auto& [label, ok] : checks)
            if (!ok) return false;
        for (const auto& q : inequalities)
            if (!q.holds) return false;
        return true;
    }

    std::string to_text(const FieldSpace& space) const {
        std::ostringstream out;
        out << "case: " << case_taken << '\n';
        out << "k: " << k << '\n';
        out << "set_size: " << set_size << '\n';
        out << "t: " << t << '\n';
        out << "family_size: " << family.shapes.size() << '\n';
        for (std::size_t i = 0; i < family.shapes.size(); ++i) {
            out << "family_shape_" << i + 1 << ":";
            for (Point x : family.shapes[i]) {
                out << ' ';
                write_coords(out, space, x);
            }
            out << '\n';
        }
        if (case_taken == 1) {
            out << "residual_size: " << residual.count() << '\n';
        } else {
            out << "M_rows: " << M.rows.size() << '\n';
            for (std::size_t i = 0; i < M.rows.size(); ++i) {
                out << "M_row_" << i + 1 << ":";
                for (Point x : M.rows[i]) {
                    out << ' ';
                    write_coords(out, space, x);
                }
                out << '\n';
            }
            out << "B_size: " << B.pairs.size() << '\n';
        }
        for (const auto& [label, ok] : checks)
            out << "check_" << label << ": " << (ok ? "ok" : "FAILED") << '\n';
        for (const auto& q : inequalities)
            out << "verify_" << q.label << ": " << q.lhs << ' ' << q.rel << ' ' << q.rhs << ' '
                << (q.holds ? "ok" : "FAILED") << '\n';
        out << "valid: " << (valid() ? "true" : "false") << '\n';
        return out.str();
    }

private:
    static void write_coords(std::ostream& out, const FieldSpace& space, Point x) {
        auto coords = space.decode(x);
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (i) out << ',';
            out << coords[i];
        }
    }
};

// Replays one step of the induction behind the k^2 Lambda^n bound on a
// star(k)-shape-free set: pack t = ceil(#A / k^2) disjoint star(k-1)-shapes if
// possible (Case 2, lifted to M and put through the multicolored and
// injectivity checks), otherwise certify the residual inequality of Case 1.
inline CaseTrace replay_induction_step(const FieldSpace& space, const PointSet& A, int k,
                                       const EnumBudget& budget = {}) {
    if (k < 2) throw std::invalid_argument("k: replay needs k >= 2");
    const ShapeSystem big = ShapeSystem::star(k, space.p());
    const ShapeSystem small = ShapeSystem::star(k - 1, space.p());
    detail::check_inputs(space, A, big, "replay_induction_step");
    if (find_shape(space, A, big, budget))
        throw std::invalid_argument("replay_induction_step: A admits a star(" +
                                    std::to_string(k) + ")-shape");
    CaseTrace trace;
    trace.k = k;
    trace.set_size = A.count();
    const std::uint64_t k2 = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k);
    trace.t = (A.count() + k2 - 1) / k2;
    trace.residual = PointSet(space.size());
    const double spade = spade_bound(space.p(), space.n());

    if (trace.t == 0) {
        trace.case_taken = 2;
        trace.M.num_vars = 2 * k + 1;
        trace.checks.emplace_back("multicolor", true);
        trace.checks.emplace_back("injectivity", true);
        trace.inequalities.push_back(
            {"s_le_spade", 0.0, "<=", spade, true});
        trace.inequalities.push_back({"B_size_eq_t", 0.0, "==", 0.0, true});
        return trace;
    }

    trace.family = greedy_disjoint_pack(space, A, small, trace.t, budget);

    if (trace.family.shapes.size() < trace.t) {
        trace.case_taken = 1;
        trace.residual = A.minus(trace.family.covered);
        trace.checks.emplace_back("family_maximal", trace.family.maximal);
        trace.checks.emplace_back(
            "residual_shape_free",
            !find_shape(space, trace.residual, small, budget).has_value());
        const double floor_size =
            static_cast<double>(A.count()) -
            static_cast<double>(2 * k - 1) * static_cast<double>(trace.t - 1);
        trace.inequalities.push_back({"family_below_t",
                                      static_cast<double>(trace.family.shapes.size()), "<",
                                      static_cast<double>(trace.t), true});
        trace.inequalities.push_back({"residual_size",
                                      static_cast<double>(trace.residual.count()), ">=",
                                      floor_size,
                                      static_cast<double>(trace.residual.count()) >= floor_size});
        return trace;
    }

    trace.case_taken = 2;
    trace.M = lift_to_M(space, trace.family, k);
    const bool mc = multicolor_check(space, big, trace.M, budget);
    trace.checks.emplace_back("multicolor", mc);
    // Shape-freeness collapses the product: every semishape in X repeats the
    // first pair, x_1 = x_3 and x_2 = x_4.
    bool collapse = true;
    for_each_product_semishape(space, big, trace.M, budget, [&](std::span<const Point> x) {
        if (x[0] != x[2] || x[1] != x[3]) {
            collapse = false;
            return false;
        }
        return true;
    });
    trace.checks.emplace_back("pair_collapse", collapse);
    trace.B = extendable_pairs(space, big, trace.M, 1, 2 * k + 1, budget);
    trace.checks.emplace_back("injectivity", lemma_injectivity_check(trace.B));
    trace.inequalities.push_back({"s_le_spade", static_cast<double>(trace.M.s()), "<=", spade,
                                  static_cast<double>(trace.M.s()) <= spade});
    trace.inequalities.push_back({"B_size_eq_t", static_cast<double>(trace.B.pairs.size()), "==",
                                  static_cast<double>(trace.t),
                                  trace.B.pairs.size() == trace.t});
    return trace;
}

}  // namespace kstar
