// bounds.hpp
// Lambda constants and the derived set-size bounds. Lambda_{m,alpha,h} is the
// minimum of G(u) = u^{-alpha h} (1 + u + ... + u^{mh}) over (0,1]. G' has the
// sign of P(u) = sum_{i=0}^{mh} (i - alpha h) u^i, whose coefficient sequence
// changes sign exactly once, so P has a unique positive root; we bracket it by
// bisection. No convexity of G is assumed anywhere.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "kstar/common.hpp"

namespace kstar {

struct LambdaQuery {
    int m;
    double alpha;
    int h;
};

struct LambdaResult {
    double u_star;
    double value;
    bool interior;  // u_star < 1
};

struct WBoundResult {
    std::uint32_t p;
    double alpha_star;  // 3 alpha + 2 beta = 1
    double beta_star;
    double value;  // upper bound for C_W(p)

    // 7 (sqrt(value * p))^n.
    double bound(int n) const {
        if (n < 1) throw std::invalid_argument("n: must be >= 1");
        return 7.0 * std::exp(0.5 * n * std::log(value * static_cast<double>(p)));
    }
};

inline void validate(const LambdaQuery& q) {
    if (q.m < 1) throw std::invalid_argument("m: must be a positive integer");
    if (q.h < 1) throw std::invalid_argument("h: must be a positive integer");
    if (!(q.alpha > 0.0) || !std::isfinite(q.alpha))
        throw std::invalid_argument("alpha: must be > 0");
}

inline double eval_G(const LambdaQuery& q, double u) {
    validate(q);
    if (!(u > 0.0) || u > 1.0) throw std::invalid_argument("u: must lie in (0, 1]");
    const int mh = q.m * q.h;
    if (u == 1.0) return static_cast<double>(mh + 1);
    // Log domain: u^{-alpha h} alone can overflow long before the minimum.
    const double L = std::log(u);
    const double log_sum = std::log(-std::expm1((mh + 1) * L)) - std::log(-std::expm1(L));
    const double log_g = -q.alpha * q.h * L + log_sum;
    if (log_g >= 709.0) return std::numeric_limits<double>::infinity();
    return std::exp(log_g);
}

inline LambdaResult lambda(const LambdaQuery& q) {
    validate(q);
    const double ah = q.alpha * static_cast<double>(q.h);
    const int mh = q.m * q.h;
    // P(1) = (mh+1)(mh/2 - ah): no interior stationary point when <= 0.
    if ((static_cast<double>(mh) / 2.0 - ah) <= 0.0)
        return {1.0, static_cast<double>(mh + 1), false};
    auto P = [&](double u) {
        double acc = 0.0;
        for (int i = mh; i >= 0; --i) acc = acc * u + (static_cast<double>(i) - ah);
        return acc;
    };
    double lo = 1e-12, hi = 1.0;
    if (P(lo) >= 0.0) {
        // Root below the bracket floor; clamp to it.
        double u = lo;
        return {u, eval_G(q, u), true};
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (P(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    const double u_star = 0.5 * (lo + hi);
    return {u_star, eval_G(q, u_star), true};
}

inline double spade_bound(std::uint32_t p, int n) {
    require_odd_prime(p, "p");
    if (n < 1) throw std::invalid_argument("n: must be >= 1");
    const double lam = lambda({1, 1.0 / 3.0, static_cast<int>(p) - 1}).value;
    return std::pow(lam, n);
}

inline double club_bound(std::uint32_t p, int n, int k) {
    if (k < 1) throw std::invalid_argument("k: must be >= 1");
    return static_cast<double>(k) * static_cast<double>(k) * spade_bound(p, n);
}

// inf over 3 alpha + 2 beta = 1 of max(Lambda_{1,alpha,p-1}, Lambda_{2,beta,p-1}).
// The first branch grows with alpha, the second shrinks, so the infimum sits at
// their crossing; located by bisection on the sign of the difference.
inline WBoundResult w_constant(std::uint32_t p) {
    require_odd_prime(p, "p");
    const int h = static_cast<int>(p) - 1;
    auto f = [&](double a) { return lambda({1, a, h}).value; };
    auto g = [&](double a) { return lambda({2, (1.0 - 3.0 * a) / 2.0, h}).value; };
    double lo = 1e-12, hi = 1.0 / 3.0 - 1e-12;
    for (int it = 0; it < 80 && (hi - lo) > 1e-10; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) < g(mid))
            lo = mid;
        else
            hi = mid;
    }
    const double a = 0.5 * (lo + hi);
    const double b = (1.0 - 3.0 * a) / 2.0;
    return {p, a, b, std::max(f(a), g(a))};
}

inline double w_bound(std::uint32_t p, int n) {
    return w_constant(p).bound(n);
}

}  // namespace kstar
