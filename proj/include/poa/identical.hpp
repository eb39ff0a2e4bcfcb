#pragma once

#include <cmath>
#include <stdexcept>

#include "poa/latency.hpp"

namespace poa {

// [x]_{eps,f} = inf{t >= 0 : f(x) <= (1+eps) f(x/2 + t)}. The infimum never
// exceeds x/2 (t = x/2 always satisfies the condition for non-decreasing f).
inline double bracket_threshold(const LatencyFunction& f, double eps, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bracket_threshold: x > 0 required");
    double target = f.eval(x);
    auto blocked = [&](double t) { return target <= (1 + eps) * f.eval(x / 2 + t); };
    if (blocked(0.0)) return 0.0;
    double lo = 0.0, hi = x / 2;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (blocked(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

namespace detail {
inline void require_semi_convex(const LatencyFunction& f, double span) {
    if (f.is_polynomial()) return;
    auto grid = uniform_grid(0.0, std::max(span, 1.0), 256);
    if (!is_semi_convex(f, grid))
        throw std::invalid_argument("identical-resource bound: f must be semi-convex");
}
}  // namespace detail

// gamma_{eps,f}(x, lambda): worst equilibrium-to-optimum ratio density for
// identical resources split into an x-congested group (fraction lambda) and a
// [x]-congested group.
inline double gamma_identical(double eps, const LatencyFunction& f, double x, double lambda) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_identical: x > 0 required");
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::invalid_argument("gamma_identical: lambda in (0,1) required");
    detail::require_semi_convex(f, 2 * x);
    double b = bracket_threshold(f, eps, x);
    double num = lambda * x * f.eval(x) + (1 - lambda) * b * f.eval(b);
    double avg = lambda * x + (1 - lambda) * b;
    return num / (avg * f.eval(avg));
}

// argmax over lambda in (0,1) of gamma_{eps,f}(x, .): grid seed + golden refine.
inline std::pair<double, double> identical_lambda_star(double eps, const LatencyFunction& f,
                                                       double x) {
    double b = bracket_threshold(f, eps, x);
    auto g = [&](double lam) {
        double num = lam * x * f.eval(x) + (1 - lam) * b * f.eval(b);
        double avg = lam * x + (1 - lam) * b;
        return num / (avg * f.eval(avg));
    };
    const int N = 512;
    double best = -1.0, best_l = 0.5;
    for (int i = 1; i < N; ++i) {
        double lam = static_cast<double>(i) / N;
        double v = g(lam);
        if (v > best) {
            best = v;
            best_l = lam;
        }
    }
    double a = std::max(1e-12, best_l - 2.0 / N), c = std::min(1.0 - 1e-12, best_l + 2.0 / N);
    const double gr = 0.6180339887498949;
    double c1 = c - gr * (c - a), d1 = a + gr * (c - a);
    double fc = g(c1), fd = g(d1);
    while (c - a > 1e-10) {
        if (fc > fd) {
            c = d1;
            d1 = c1;
            fd = fc;
            c1 = c - gr * (c - a);
            fc = g(c1);
        } else {
            a = c1;
            c1 = d1;
            fc = fd;
            d1 = a + gr * (c - a);
            fd = g(d1);
        }
    }
    double lam = 0.5 * (a + c);
    return {lam, g(lam)};
}

struct IdenticalBound {
    double value = 1.0;
    double x_star = 1.0;
    double lambda_star = 0.5;
    // applicability of the two-group lower-bound construction at x_star:
    bool lambda_le_half = false;
    bool eps_condition = false;  // eps == 0 or lambda* x + (1-lambda*) [x] - x/2 >= 0
};

// sup_{x>0} max_{lambda} gamma_{eps,f}(x, lambda). Outer supremum on a log
// grid with golden refinement (flat in x for monomials at eps = 0).
inline IdenticalBound identical_bound(double eps, const LatencyFunction& f) {
    detail::require_semi_convex(f, 64.0);
    auto inner = [&](double x) { return identical_lambda_star(eps, f, x).second; };
    const int N = 97;
    double best = -1.0, best_x = 1.0;
    for (int i = 0; i < N; ++i) {
        double x = std::pow(10.0, -2.0 + 5.0 * i / (N - 1));  // 1e-2 .. 1e3
        double v = inner(x);
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    double a = best_x / std::pow(10.0, 5.0 / (N - 1)), b = best_x * std::pow(10.0, 5.0 / (N - 1));
    const double gr = 0.6180339887498949;
    double la = std::log(a), lb = std::log(b);
    double c1 = lb - gr * (lb - la), d1 = la + gr * (lb - la);
    double fc = inner(std::exp(c1)), fd = inner(std::exp(d1));
    while (lb - la > 1e-10) {
        if (fc > fd) {
            lb = d1;
            d1 = c1;
            fd = fc;
            c1 = lb - gr * (lb - la);
            fc = inner(std::exp(c1));
        } else {
            la = c1;
            c1 = d1;
            fc = fd;
            d1 = la + gr * (lb - la);
            fd = inner(std::exp(d1));
        }
    }
    IdenticalBound r;
    r.x_star = std::exp(0.5 * (la + lb));
    auto [lam, val] = identical_lambda_star(eps, f, r.x_star);
    if (val < best) {  // keep the grid winner when refinement is flat
        r.x_star = best_x;
        std::tie(lam, val) = identical_lambda_star(eps, f, r.x_star);
    }
    r.lambda_star = lam;
    r.value = val;
    double br = bracket_threshold(f, eps, r.x_star);
    r.lambda_le_half = lam <= 0.5 + 1e-9;
    r.eps_condition =
        eps == 0.0 || lam * r.x_star + (1 - lam) * br - r.x_star / 2 >= -1e-12;
    return r;
}

struct PolyIdentical {
    double lambda_star;
    double value;
};

// Closed form for PoA_0(WSLB(P(d))):
//   lambda*_d = (2^{d+1} - d - 2)/(d 2^{d+1} - d)
//   value     = d^d (2^{d+1}-1)^{d+1} / (2^d (d+1)^{d+1} (2^d-1)^d)
inline PolyIdentical corollary_poly_identical(int d) {
    if (d < 1) throw std::invalid_argument("corollary_poly_identical: d >= 1 required");
    double p = std::pow(2.0, d + 1);
    double lam = (p - d - 2) / (d * p - d);
    double value = std::pow(d, d) * std::pow(p - 1, d + 1) /
                   (std::pow(2.0, d) * std::pow(d + 1, d + 1) * std::pow(p / 2 - 1, d));
    return {lam, value};
}

}  // namespace poa
