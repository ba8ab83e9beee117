// acceptance.cpp
// End-to-end acceptance gauntlet: nine numbered criteria, one PASS/FAIL line
// each, '#' lines for logged detail. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "kstar/bounds.hpp"
#include "kstar/detector.hpp"
#include "kstar/field_space.hpp"
#include "kstar/search.hpp"
#include "kstar/systems.hpp"
#include "test_util.hpp"

using kstar::FieldSpace;
using kstar::Point;
using kstar::PointSet;
using kstar::SearchResult;
using kstar::ShapeSystem;

namespace {

int failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool ok, const std::string& what, double elapsed, double limit) {
    const bool in_time = elapsed <= limit;
    const bool pass = ok && in_time;
    if (!pass) ++failures;
    std::printf("%s %d: %s (%.2fs, limit %.0fs)\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), elapsed, limit);
    if (!in_time) std::printf("# criterion %d exceeded its runtime limit\n", criterion);
}

const std::vector<std::uint32_t> kOddPrimes97 = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

struct Config {
    std::uint32_t p;
    int n;
    int k;
};

std::vector<Config> grid_configs() {
    std::vector<Config> cfgs;
    for (std::uint32_t p : {3u, 5u})
        for (int n : {1, 2})
            for (int k : {1, 2, 3}) cfgs.push_back({p, n, k});
    return cfgs;
}

ShapeSystem make_family(bool relaxed, int k, std::uint32_t p) {
    return relaxed ? ShapeSystem::relaxed_star(k, p) : ShapeSystem::star(k, p);
}

// Criterion 3 engine, shared with the relaxed rerun of criterion 9.
bool count_oracle_suite(bool relaxed, int subsets_per_config, std::string& detail) {
    const double densities[] = {0.2, 0.35, 0.5, 0.65};
    std::uint64_t checked = 0;
    const std::vector<Config> cfgs = grid_configs();
    for (std::size_t ci = 0; ci < cfgs.size(); ++ci) {
        const Config cfg = cfgs[ci];
        FieldSpace space(cfg.p, cfg.n);
        ShapeSystem sys = make_family(relaxed, cfg.k, cfg.p);
        std::mt19937_64 rng(1000 + 17 * ci + (relaxed ? 500 : 0));
        for (int trial = 0; trial < subsets_per_config; ++trial) {
            PointSet A = test_util::random_subset(space, rng, densities[trial % 4]);
            const auto naive = test_util::naive_enumerate(space, A, sys,
                                                          test_util::center_first_order(sys));
            if (kstar::count_semishapes(space, A, sys) != naive.semishapes) {
                detail = "mismatch at p=" + std::to_string(cfg.p) + " n=" +
                         std::to_string(cfg.n) + " k=" + std::to_string(cfg.k) + " trial " +
                         std::to_string(trial);
                return false;
            }
            ++checked;
        }
    }
    detail = std::to_string(checked) + " random subsets matched the nested-loop oracle exactly";
    return true;
}

bool full_space_suite(bool relaxed, std::string& detail) {
    for (const Config& cfg : grid_configs()) {
        FieldSpace space(cfg.p, cfg.n);
        ShapeSystem sys = make_family(relaxed, cfg.k, cfg.p);
        const std::uint64_t expected =
            kstar::checked_pow_u64(cfg.p, static_cast<std::uint64_t>(cfg.n) *
                                              static_cast<std::uint64_t>(cfg.k + 1));
        if (kstar::count_semishapes(space, PointSet::full(space), sys) != expected) {
            detail = "p=" + std::to_string(cfg.p) + " n=" + std::to_string(cfg.n) +
                     " k=" + std::to_string(cfg.k) + " missed p^(n(k+1))";
            return false;
        }
    }
    detail = "count_semishapes(full space) = p^(n(k+1)) on all 12 configurations";
    return true;
}

std::uint64_t brute_force_max(const FieldSpace& space, const ShapeSystem& sys) {
    const std::uint64_t N = space.size();
    std::uint64_t best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
        PointSet A(space.size());
        for (std::uint64_t i = 0; i < N; ++i)
            if ((mask >> i) & 1) A.insert(static_cast<Point>(i));
        if (A.count() <= best) continue;
        if (test_util::naive_enumerate(space, A, sys, test_util::center_first_order(sys))
                .shapes == 0)
            best = A.count();
    }
    return best;
}

// Criterion 5 engine; relaxed rerun reuses it for criterion 9.
bool extremal_suite(bool relaxed, std::string& detail) {
    struct Expect {
        std::uint32_t p;
        int n;
        int k;
        std::uint64_t size;
        double club;
    };
    const Expect table[] = {{3, 1, 1, 2, 2.7551}, {3, 2, 1, 4, 7.5906}, {3, 1, 2, 3, 11.020}};
    std::string clubs;
    for (const Expect& e : table) {
        FieldSpace space(e.p, e.n);
        ShapeSystem sys = make_family(relaxed, e.k, e.p);
        SearchResult res = kstar::exact_max_shape_free(space, sys);
        if (res.size != e.size || !res.optimal || !res.witness_verified) {
            detail = "(" + std::to_string(e.p) + "," + std::to_string(e.n) + "," +
                     std::to_string(e.k) + ") returned size " + std::to_string(res.size);
            return false;
        }
        if (brute_force_max(space, sys) != e.size) {
            detail = "exhaustive subset oracle disagrees at (" + std::to_string(e.p) + "," +
                     std::to_string(e.n) + "," + std::to_string(e.k) + ")";
            return false;
        }
        const auto bv = kstar::validate_against_bounds(res);
        if (!(bv.slack > 0.0) || std::abs(bv.bound - e.club) > 2e-3) {
            detail = "club bound off at (" + std::to_string(e.p) + "," + std::to_string(e.n) +
                     "," + std::to_string(e.k) + "): " + std::to_string(bv.bound);
            return false;
        }
        clubs += (clubs.empty() ? "" : ", ") + std::to_string(bv.bound).substr(0, 6);
    }
    detail = "sizes 2/4/3 optimal, subset oracle agrees, club bounds " + clubs +
             " with positive slack";
    return true;
}

}  // namespace

int main() {
    // 1. Lambda constant at p = 3 against the closed form and the grid oracle.
    {
        Timer t;
        const auto r = kstar::lambda({1, 1.0 / 3.0, 2});
        const double root = (std::sqrt(33.0) - 1.0) / 8.0;
        const double stationary = 4.0 * r.u_star * r.u_star + r.u_star - 2.0;
        const double oracle = test_util::lambda_grid_oracle(1, 1.0 / 3.0, 2, 1e-6);
        const bool ok = r.interior && std::abs(r.u_star - root) <= 1e-10 &&
                        std::abs(stationary) <= 1e-9 && std::abs(r.value - 2.755105) <= 1e-5 &&
                        std::abs(r.value - oracle) <= 1e-4;
        std::printf("# lambda(1,1/3,2): u_star=%.15g value=%.15g grid=%.15g\n", r.u_star,
                    r.value, oracle);
        report(1, ok, "lambda(1,1/3,2) matches (sqrt(33)-1)/8 and the 1e-6 grid oracle", t.seconds(),
               1.0);
    }

    // 2. Lambda over p stays inside [0.8414, 0.92] for every odd prime up to 97.
    {
        Timer t;
        bool ok = true;
        for (std::uint32_t p : kOddPrimes97) {
            const double ratio = kstar::lambda({1, 1.0 / 3.0, static_cast<int>(p) - 1}).value /
                                 static_cast<double>(p);
            std::printf("# p=%u lambda/p=%.9f\n", p, ratio);
            if (!(ratio >= 0.8414 && ratio <= 0.92)) ok = false;
        }
        report(2, ok, "0.8414 <= lambda/p <= 0.92 for the 24 odd primes up to 97", t.seconds(),
               5.0);
    }

    // 3. Semishape counting against the nested-loop oracle, 200 subsets per config.
    {
        Timer t;
        std::string detail;
        const bool ok = count_oracle_suite(false, 200, detail);
        report(3, ok, "star counting: " + detail, t.seconds(), 120.0);
    }

    // 4. Full-space counts follow the rank-nullity closed form.
    {
        Timer t;
        std::string detail;
        const bool ok = full_space_suite(false, detail);
        report(4, ok, detail, t.seconds(), 120.0);
    }

    // 5. Exact extremal sizes with the exhaustive subset oracle and club slack.
    {
        Timer t;
        std::string detail;
        const bool ok = extremal_suite(false, detail);
        report(5, ok, "star search: " + detail, t.seconds(), 60.0);
    }

    // 6 and 7. Replay every searched star(2)-free set; collect the case-2
    // families for the spade comparison.
    {
        Timer t6;
        std::uint64_t sets = 0, case1 = 0, case2 = 0, bad = 0;
        std::string first_bad;
        struct MRecord {
            std::size_t s;
            int n;
            bool multicolor;
        };
        std::vector<MRecord> families;
        for (int n : {1, 2}) {
            FieldSpace space(3, n);
            ShapeSystem sys = ShapeSystem::star(2, 3);
            std::vector<PointSet> found;
            found.push_back(kstar::exact_max_shape_free(space, sys).best);
            for (std::uint64_t seed = 1; seed <= 50; ++seed)
                found.push_back(kstar::heuristic_max(space, sys, seed, 200).best);
            for (const PointSet& A : found) {
                ++sets;
                try {
                    const auto trace = kstar::replay_induction_step(space, A, 2);
                    if (trace.case_taken == 1)
                        ++case1;
                    else
                        ++case2;
                    if (!trace.valid()) {
                        ++bad;
                        if (first_bad.empty())
                            first_bad = "invalid trace on a size-" +
                                        std::to_string(A.count()) + " set at n=" +
                                        std::to_string(n);
                    }
                    if (trace.case_taken == 2 && trace.t > 0) {
                        bool mc = false;
                        for (const auto& [label, ok] : trace.checks)
                            if (label == "multicolor") mc = ok;
                        families.push_back({trace.M.s(), n, mc});
                    }
                } catch (const std::exception& e) {
                    ++bad;
                    if (first_bad.empty()) first_bad = e.what();
                }
            }
        }
        const bool ok6 = bad == 0 && sets >= 100;
        std::printf("# replayed %llu sets: %llu case-1, %llu case-2, %llu failures\n",
                    static_cast<unsigned long long>(sets), static_cast<unsigned long long>(case1),
                    static_cast<unsigned long long>(case2), static_cast<unsigned long long>(bad));
        report(6, ok6,
               ok6 ? "replay produced a valid certificate for every searched star(2)-free set"
                   : "replay failures: " + first_bad,
               t6.seconds(), 300.0);

        Timer t7;
        std::uint64_t violations = 0, passing = 0;
        for (const MRecord& rec : families) {
            if (!rec.multicolor) continue;
            ++passing;
            if (static_cast<double>(rec.s) > kstar::spade_bound(3, rec.n)) ++violations;
        }
        std::printf("# %llu multicolored families, spade bounds %.4f (n=1) %.4f (n=2)\n",
                    static_cast<unsigned long long>(passing), kstar::spade_bound(3, 1),
                    kstar::spade_bound(3, 2));
        report(7, violations == 0 && passing > 0,
               "every multicolored family satisfies s <= spade bound", t7.seconds(), 300.0);
    }

    // 8. W-shape constant below p everywhere, ratio threshold at large p.
    {
        Timer t;
        bool small_ok = true;
        for (std::uint32_t p : kOddPrimes97) {
            const auto w = kstar::w_constant(p);
            if (!(w.value < static_cast<double>(p))) small_ok = false;
        }
        const double threshold = 0.970225 + 1e-4;
        std::vector<std::uint32_t> ladder = {10007, 20011, 30011, 49999, 100003};
        std::uint32_t passing_p = 0;
        double passing_ratio = 0.0;
        for (std::uint32_t p : ladder) {
            const double ratio = kstar::w_constant(p).value / static_cast<double>(p);
            std::printf("# w_constant(%u)/%u = %.6f\n", p, p, ratio);
            if (ratio <= threshold) {
                passing_p = p;
                passing_ratio = ratio;
                break;
            }
        }
        const bool ok = small_ok && passing_p != 0;
        report(8, ok,
               ok ? "w_constant < p on all odd primes <= 97; ratio " +
                        std::to_string(passing_ratio) + " <= 0.970325 first holds at p = " +
                        std::to_string(passing_p)
                   : "w-shape constant failed its ratio threshold on the whole ladder",
               t.seconds(), 30.0);
    }

    // 9. Relaxed-star rerun of criteria 3, 4 and 5.
    {
        Timer t;
        std::string d3, d4, d5;
        const bool ok = count_oracle_suite(true, 200, d3) && full_space_suite(true, d4) &&
                        extremal_suite(true, d5);
        std::string detail = ok ? "relaxed-star rerun of criteria 3-5: counting, full-space "
                                  "and extremal results all consistent"
                                : "relaxed-star rerun failed: " + d3 + d4 + d5;
        report(9, ok, detail, t.seconds(), 240.0);
    }

    std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
