#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace poa {

// A user-registered latency shape: an evaluation rule plus an optional
// closed-form integral of f over [0,k]. Custom functions must declare
// whether they are non-decreasing; the declaration is probe-verified at
// registration, not proven.
struct CustomLatency {
    std::function<double(double)> eval;
    std::function<double(double)> integral;  // may be empty -> quadrature
    bool nondecreasing = true;
};

namespace detail {

inline std::map<std::string, std::shared_ptr<const CustomLatency>>& custom_registry() {
    static std::map<std::string, std::shared_ptr<const CustomLatency>> reg;
    return reg;
}

// Adaptive Simpson quadrature, absolute tolerance `tol`.
inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

inline double quadrature(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-10) {
    if (b <= a) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = simpson(a, b, fa, fm, fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

// Evaluable non-decreasing positive latency, either a polynomial with
// non-negative coefficients or a registered custom function (optionally
// rescaled along either axis).
class LatencyFunction {
  public:
    LatencyFunction() = default;  // the constant function f(x) = 1

    static LatencyFunction polynomial(std::vector<double> coeffs) {
        if (coeffs.empty()) throw std::invalid_argument("polynomial: no coefficients");
        for (double c : coeffs)
            if (!(c >= 0.0) || !std::isfinite(c))
                throw std::invalid_argument("polynomial: coefficients must be finite and >= 0");
        while (coeffs.size() > 1 && coeffs.back() == 0.0) coeffs.pop_back();
        LatencyFunction f;
        f.coeffs_ = std::move(coeffs);
        f.custom_.reset();
        f.name_.clear();
        return f;
    }

    // a * t^d
    static LatencyFunction monomial(int degree, double a = 1.0) {
        if (degree < 0) throw std::invalid_argument("monomial: degree < 0");
        std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
        c.back() = a;
        return polynomial(std::move(c));
    }

    static LatencyFunction custom(const std::string& registered_name) {
        auto& reg = detail::custom_registry();
        auto it = reg.find(registered_name);
        if (it == reg.end())
            throw std::invalid_argument("custom latency not registered: " + registered_name);
        LatencyFunction f;
        f.coeffs_.clear();
        f.custom_ = it->second;
        f.name_ = registered_name;
        return f;
    }

    bool is_polynomial() const { return !custom_; }
    int degree() const {
        if (!is_polynomial()) throw std::logic_error("degree: not a polynomial");
        return static_cast<int>(coeffs_.size()) - 1;
    }
    const std::vector<double>& coefficients() const { return coeffs_; }
    const std::string& custom_name() const { return name_; }
    double ordinate_scale() const { return ord_scale_; }
    double abscissa_scale() const { return abs_scale_; }

    double eval(double x) const {
        if (!std::isfinite(x) || x < 0.0)
            throw std::invalid_argument("latency eval: x must be finite and >= 0");
        if (is_polynomial()) {
            double acc = 0.0;
            for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
            return acc;
        }
        return ord_scale_ * custom_->eval(abs_scale_ * x);
    }

    // int_0^k f(t) dt
    double integral(double k) const {
        if (!std::isfinite(k) || k < 0.0)
            throw std::invalid_argument("latency integral: k must be finite and >= 0");
        if (is_polynomial()) {
            double acc = 0.0;
            for (std::size_t i = coeffs_.size(); i-- > 0;)
                acc = acc * k + coeffs_[i] / static_cast<double>(i + 1);
            return acc * k;
        }
        if (custom_->integral)
            return ord_scale_ / abs_scale_ * custom_->integral(abs_scale_ * k);
        auto ev = [this](double t) { return eval(t); };
        return detail::quadrature(ev, 0.0, k);
    }

    // (k+w) f(k+w) - k f(k): marginal social-cost increase of weight w at congestion k.
    double marginal(double k, double w) const {
        if (!(w > 0.0)) throw std::invalid_argument("marginal: w must be > 0");
        return (k + w) * eval(k + w) - k * eval(k);
    }

    LatencyFunction scale_ordinate(double a) const {
        if (!(a > 0.0)) throw std::invalid_argument("scale_ordinate: a must be > 0");
        LatencyFunction g = *this;
        if (is_polynomial()) {
            for (double& c : g.coeffs_) c *= a;
        } else {
            g.ord_scale_ *= a;
        }
        return g;
    }

    LatencyFunction scale_abscissa(double a) const {
        if (!(a > 0.0)) throw std::invalid_argument("scale_abscissa: a must be > 0");
        LatencyFunction g = *this;
        if (is_polynomial()) {
            double p = 1.0;
            for (std::size_t h = 0; h < g.coeffs_.size(); ++h) {
                g.coeffs_[h] *= p;
                p *= a;
            }
        } else {
            g.abs_scale_ *= a;
        }
        return g;
    }

    bool declared_nondecreasing() const {
        return is_polynomial() ? true : custom_->nondecreasing;
    }

    bool operator==(const LatencyFunction& o) const {
        if (is_polynomial() != o.is_polynomial()) return false;
        if (is_polynomial()) return coeffs_ == o.coeffs_;
        return name_ == o.name_ && ord_scale_ == o.ord_scale_ && abs_scale_ == o.abs_scale_;
    }
    bool operator!=(const LatencyFunction& o) const { return !(*this == o); }

  private:
    std::vector<double> coeffs_{1.0};
    std::shared_ptr<const CustomLatency> custom_;
    std::string name_;
    double ord_scale_ = 1.0;
    double abs_scale_ = 1.0;
};

// Registers a custom latency under `name`. The declared monotonicity and
// positivity are probe-checked on a default grid; violations reject the
// registration.
inline void register_custom_latency(const std::string& name, CustomLatency fn,
                                    bool probe = true) {
    if (!fn.eval) throw std::invalid_argument("register_custom_latency: eval missing");
    if (probe && fn.nondecreasing) {
        double prev = -1.0;
        for (int i = 0; i <= 200; ++i) {
            double x = 0.05 * i;
            double y = fn.eval(x);
            if (!std::isfinite(y)) throw std::invalid_argument(name + ": non-finite at probe");
            if (x > 0.0 && !(y > 0.0))
                throw std::invalid_argument(name + ": latency must be positive for x > 0");
            if (y < prev - 1e-9 * std::max(1.0, std::abs(prev)))
                throw std::invalid_argument(name + ": declared non-decreasing but probe fails");
            prev = y;
        }
    }
    detail::custom_registry()[name] = std::make_shared<const CustomLatency>(std::move(fn));
}

inline bool custom_latency_registered(const std::string& name) {
    return detail::custom_registry().count(name) != 0;
}

// True iff the second differences of x*f(x) on the grid are >= -1e-9 relative.
// Polynomials with non-negative coefficients are semi-convex by closure.
inline bool is_semi_convex(const LatencyFunction& f, std::span<const double> grid) {
    if (f.is_polynomial()) return true;
    if (grid.size() < 3) throw std::invalid_argument("is_semi_convex: grid needs >= 3 points");
    double scale = 0.0;
    std::vector<double> xf(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw std::invalid_argument("is_semi_convex: grid must be strictly increasing");
        xf[i] = grid[i] * f.eval(grid[i]);
        scale = std::max(scale, std::abs(xf[i]));
    }
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        // non-uniform second difference
        double h1 = grid[i] - grid[i - 1], h2 = grid[i + 1] - grid[i];
        double d2 = 2.0 * (h1 * xf[i + 1] - (h1 + h2) * xf[i] + h2 * xf[i - 1]) /
                    (h1 * h2 * (h1 + h2));
        if (d2 < -1e-9 * std::max(1.0, scale)) return false;
    }
    return true;
}

inline std::vector<double> uniform_grid(double lo, double hi, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return g;
}

}  // namespace poa
